"""Command-line entry point: ``majagree <subcommand> ...``.

Every subcommand prints one JSON record by default (sweep: one per line).
Exit codes: 0 success, 2 usage, 3 violation found, 4 resource limit hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, Optional, Sequence

from . import _scan
from .bounds import classify
from .core import AgreementError, BudgetExceeded, ContractError, Network, StructuralError
from .protocols import (
    ProtocolTable,
    constant_protocol,
    from_text,
    identity_protocol,
    plurality_padding_protocol,
    random_protocol,
    to_text,
)
from .refute import refute_by_proof
from .synth import DEFAULT_NODE_BUDGET, SweepRow, SynthStatus, iter_sweep, protocol_exists
from .verify import verify_exhaustive, verify_sampled

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_RESOURCE = 0, 2, 3, 4
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


def _emit(record: Dict[str, Any], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        for key in sorted(record):
            out.write(f"{key}: {record[key]}\n")


def _network(args) -> Network:
    return Network.parse(args.net, args.k)


def _protocol(args, net: Network) -> ProtocolTable:
    if args.protocol:
        with open(args.protocol) as fh:
            p = from_text(fh.read())
        if p.network != net:
            raise StructuralError(f"protocol file is for {p.network}, not {net}")
        return p
    if args.random:
        return random_protocol(net, args.seed)
    name = args.builtin or "plurality"
    if name == "plurality":
        return plurality_padding_protocol(net)
    if name == "identity":
        return identity_protocol(net)
    if name.startswith("constant-"):
        return constant_protocol(net, int(name.split("-", 1)[1]))
    raise UsageError(f"unknown builtin protocol {name!r}")


def _source(args) -> str:
    if args.protocol:
        return f"file:{args.protocol}"
    if args.random:
        return f"random:{args.seed}"
    return f"builtin:{args.builtin or 'plurality'}"


def cmd_classify(args, out) -> int:
    net = _network(args)
    res = classify(net, with_witness=False)
    record = res.to_dict()
    record["witness"] = "plurality_padding" if res.verdict.value == "POSSIBLE" else None
    _emit(record, args.format, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    net = _network(args)
    p = _protocol(args, net)
    if args.mode == "exhaustive":
        v = verify_exhaustive(net, p, args.input_budget, workers=args.workers)
    else:
        v = verify_sampled(net, p, args.samples, args.seed)
    record = {"network": net.spec(), "k": net.k, "protocol": _source(args), **v.to_dict()}
    if args.mode == "sampled":
        record["seed"] = args.seed
    _emit(record, args.format, out)
    return EXIT_OK if v.passed else EXIT_VIOLATION


def cmd_refute(args, out) -> int:
    net = _network(args)
    p = _protocol(args, net)
    try:
        trace = refute_by_proof(net, p, args.input_budget)
    except ContractError as exc:
        raise UsageError(
            f"{exc}: refute needs 2(k-1)h <= (k-2)n and 2(h + j2) <= n with k >= 3"
        ) from None
    records = trace.to_records()
    records[0]["protocol"] = _source(args)
    if args.format == "json":
        for r in records:
            out.write(json.dumps(r, sort_keys=True) + "\n")
    else:
        for r in records:
            out.write(" ".join(f"{key}={r[key]}" for key in sorted(r)) + "\n")
    return EXIT_OK


def cmd_synth(args, out) -> int:
    net = _network(args)
    res = protocol_exists(net, args.budget, symmetry_breaking=args.symmetry_breaking)
    if args.out and res.protocol is not None:
        with open(args.out, "w") as fh:
            fh.write(to_text(res.protocol))
    _emit(res.to_dict(), args.format, out)
    return EXIT_RESOURCE if res.status is SynthStatus.RESOURCE_EXCEEDED else EXIT_OK


def cmd_sweep(args, out) -> int:
    k_set = sorted({int(x) for x in args.k.split(",")})
    if any(k < 2 for k in k_set):
        raise UsageError("every k must be at least 2")
    failures = 0
    fields = list(SweepRow.FIELDS) + (["wall_time"] if args.timing else [])
    if args.format == "tsv":
        out.write("\t".join(fields) + "\n")
    for row in iter_sweep(args.n_max, k_set, args.budget, workers=args.workers):
        failures += row.integrity_failure
        d = row.to_dict(timing=args.timing)
        if args.format == "tsv":
            out.write("\t".join(str(d[f]) for f in fields) + "\n")
        else:
            out.write(json.dumps(d, sort_keys=True) + "\n")
        out.flush()
    if failures:
        print(f"{failures} integrity failure(s)", file=sys.stderr)
        return 1
    return EXIT_OK


def cmd_export(args, out) -> int:
    out.write(to_text(_protocol(args, _network(args))))
    return EXIT_OK


def _add_network(p: argparse.ArgumentParser) -> None:
    p.add_argument("--net", required=True, help="component sizes, e.g. 4,2,1,1 (any order)")
    p.add_argument("--k", type=int, required=True, help="number of potential input values")


def _add_protocol(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--builtin", help="plurality (default), identity, constant-V")
    src.add_argument("--protocol", metavar="FILE", help="serialized protocol table")
    src.add_argument("--random", action="store_true", help="uniformly random table from --seed")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--input-budget", type=int, default=_scan.DEFAULT_INPUT_BUDGET,
                   help="largest k**n input space to scan")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="majagree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="POSSIBLE / IMPOSSIBLE / UNKNOWN from the bounds")
    _add_network(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="check a protocol against both requirements")
    _add_network(p)
    _add_protocol(p)
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("refute", help="walk the impossibility argument to a counterexample")
    _add_network(p)
    _add_protocol(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("synth", help="search for any successful protocol")
    _add_network(p)
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET, help="node limit")
    p.add_argument("--symmetry-breaking", action="store_true")
    p.add_argument("--out", metavar="FILE", help="write the protocol found here")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sweep", help="classify and synthesize every small network")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--k", default="3", help="comma-separated alphabet sizes")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET, help="node limit per instance")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add wall_time (breaks byte-identity)")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export", help="print a protocol table in the file format")
    _add_network(p)
    _add_protocol(p)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, StructuralError, ContractError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AgreementError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
