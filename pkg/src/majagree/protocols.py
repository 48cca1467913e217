"""Component-local protocols as explicit lookup tables.

Since a component may communicate without limit internally, a deterministic
protocol is exactly a function, per component, from the local input vector
to the local output vector. ``ProtocolTable`` stores that function as a
table indexed by the mixed-radix rank of the local input.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

from .core import (
    Assignment,
    BudgetExceeded,
    Network,
    StructuralError,
    check_assignment,
    rank,
    unrank,
)

DEFAULT_TABLE_BUDGET = 1_000_000

LocalTable = Tuple[Tuple[int, ...], ...]
LocalRule = Callable[[int, Assignment], Sequence[int]]

FORMAT_HEADER = "majagree-protocol 1"


def table_size(network: Network) -> int:
    """Number of stored output values, sum over components of size * k**size."""
    return sum(s * network.k ** s for s in network.component_sizes)


@dataclass(frozen=True)
class ProtocolTable:
    network: Network
    tables: Tuple[LocalTable, ...]
    # per component, per local rank: output count vector (index v-1)
    local_counts: Tuple[Tuple[Tuple[int, ...], ...], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        net = self.network
        tables = tuple(tuple(tuple(e) for e in t) for t in self.tables)
        if len(tables) != net.l:
            raise StructuralError(f"table has {len(tables)} components, network has {net.l}")
        for c, (size, t) in enumerate(zip(net.component_sizes, tables)):
            if len(t) != net.k ** size:
                raise StructuralError(
                    f"component {c}: {len(t)} entries, expected {net.k ** size} (table not total)"
                )
            for r, out in enumerate(t):
                if len(out) != size or any(not 1 <= v <= net.k for v in out):
                    raise StructuralError(f"component {c} entry {r}: invalid output {out}")
        object.__setattr__(self, "tables", tables)
        counts = tuple(
            tuple(tuple(out.count(v) for v in range(1, net.k + 1)) for out in t) for t in tables
        )
        object.__setattr__(self, "local_counts", counts)

    def entry(self, c: int, local_input: Sequence[int]) -> Tuple[int, ...]:
        return self.tables[c][rank(local_input, self.network.k)]


def evaluate(network: Network, p: ProtocolTable, a: Sequence[int]) -> Assignment:
    a = check_assignment(network, a)
    if p.network != network:
        raise StructuralError(f"protocol built for {p.network}, not {network}")
    out: List[int] = []
    for c, start in enumerate(network.offsets):
        out.extend(p.entry(c, a[start:start + network.component_sizes[c]]))
    return tuple(out)


def from_local_rule(network: Network, rule: LocalRule) -> ProtocolTable:
    """Tabulate ``rule(component, local_input) -> local_output``."""
    k = network.k
    tables = []
    for c, size in enumerate(network.component_sizes):
        tables.append(tuple(tuple(rule(c, unrank(r, size, k))) for r in range(k ** size)))
    return ProtocolTable(network, tuple(tables))


def identity_protocol(network: Network) -> ProtocolTable:
    return from_local_rule(network, lambda c, x: x)


def constant_protocol(network: Network, v: int) -> ProtocolTable:
    if not 1 <= v <= network.k:
        raise StructuralError(f"value {v} outside 1..{network.k}")
    return from_local_rule(network, lambda c, x: (v,) * len(x))


def plurality(values: Sequence[int], k: int) -> int:
    """Most common value; ties go to the smallest value."""
    counts = [0] * (k + 1)
    for v in values:
        counts[v] += 1
    best = 1
    for v in range(2, k + 1):
        if counts[v] > counts[best]:
            best = v
    return best


def padding_values(network: Network) -> Tuple[int, ...]:
    """Fixed outputs of the processors outside the largest component.

    The first ``(n - h) // k`` of them output 1, the next block 2, and so on
    up to k; the remainder (fewer than k) output 1.
    """
    per_value = (network.n - network.h) // network.k
    fixed = [v for v in range(1, network.k + 1) for _ in range(per_value)]
    fixed += [1] * (network.n - network.h - len(fixed))
    return tuple(fixed)


def plurality_padding_protocol(network: Network) -> ProtocolTable:
    """The largest component outputs its plurality; everyone else is hard-wired."""
    fixed = padding_values(network)
    h, k = network.h, network.k

    def rule(c: int, x: Assignment) -> Tuple[int, ...]:
        if c == 0:
            return (plurality(x, k),) * len(x)
        start = network.offsets[c] - h
        return fixed[start:start + len(x)]

    return from_local_rule(network, rule)


def random_protocol(network: Network, seed: int, budget: int = DEFAULT_TABLE_BUDGET) -> ProtocolTable:
    """Uniformly random table, reproducible from ``seed``."""
    size = table_size(network)
    if size > budget:
        raise BudgetExceeded(f"random table needs {size} values, budget is {budget}")
    rng = random.Random(seed)
    k = network.k
    tables = tuple(
        tuple(tuple(rng.randint(1, k) for _ in range(s)) for _ in range(k ** s))
        for s in network.component_sizes
    )
    return ProtocolTable(network, tables)


def perturbed_identity_protocol(network: Network, seed: int, rate: float) -> ProtocolTable:
    """Identity with each non-unanimous entry redrawn with probability ``rate``.

    Unanimous entries stay identity, so requirement (ii) always holds and any
    failure has to be found on mixed inputs.
    """
    rng = random.Random(seed)
    k = network.k

    def rule(c: int, x: Assignment) -> Sequence[int]:
        if len(set(x)) == 1 or rng.random() >= rate:
            return x
        return tuple(rng.randint(1, k) for _ in x)

    return from_local_rule(network, rule)


def to_text(p: ProtocolTable) -> str:
    net = p.network
    lines = [FORMAT_HEADER, f"k {net.k}", f"network {net.spec()}"]
    for c, t in enumerate(p.tables):
        lines.append(f"component {c} {net.component_sizes[c]}")
        lines.extend(" ".join(map(str, out)) for out in t)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> ProtocolTable:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != FORMAT_HEADER:
        raise StructuralError(f"missing header {FORMAT_HEADER!r}")
    try:
        key, k_text = lines[1].split()
        key2, spec = lines[2].split()
        if (key, key2) != ("k", "network"):
            raise ValueError
        network = Network.parse(spec, int(k_text))
    except (ValueError, IndexError):
        raise StructuralError("expected 'k <int>' and 'network <sizes>' lines") from None

    tables: List[List[Tuple[int, ...]]] = []
    for ln in lines[3:]:
        if ln.startswith("component"):
            parts = ln.split()
            if len(parts) != 3 or int(parts[1]) != len(tables):
                raise StructuralError(f"bad component line {ln!r}")
            if int(parts[2]) != network.component_sizes[len(tables)]:
                raise StructuralError(f"component size mismatch in {ln!r}")
            tables.append([])
            continue
        if not tables:
            raise StructuralError("table entry before first component line")
        try:
            tables[-1].append(tuple(int(v) for v in ln.split()))
        except ValueError:
            raise StructuralError(f"bad entry line {ln!r}") from None
    return ProtocolTable(network, tuple(tuple(t) for t in tables))
