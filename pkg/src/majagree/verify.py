"""Checking a protocol against the two agreement requirements.

Requirement (i): a strict majority of all processors output a common value.
Requirement (ii): on the unanimous input ``v``, that majority value is ``v``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence

from . import _scan
from .core import (
    Assignment,
    IntegrityError,
    Network,
    Tally,
    is_unanimous,
    strict_majority,
    tally,
    unanimous,
    unrank,
)
from .protocols import ProtocolTable, evaluate


class Status(str, Enum):
    PASS = "PASS"
    VIOLATION = "VIOLATION"


class Requirement(str, Enum):
    REQ_I = "REQ_I"
    REQ_II = "REQ_II"


@dataclass(frozen=True)
class Verdict:
    status: Status
    mode: str  # "single", "exhaustive" or "sampled"
    input: Optional[Assignment] = None
    output: Optional[Assignment] = None
    tally: Optional[Tally] = None
    requirement: Optional[Requirement] = None
    majority: Optional[int] = None
    expected: Optional[int] = None
    inputs_checked: int = 0

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    @property
    def exhaustive(self) -> bool:
        """Only an exhaustive PASS certifies the protocol."""
        return self.mode == "exhaustive"

    def to_dict(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {
            "status": self.status.value,
            "mode": self.mode,
            "inputs_checked": self.inputs_checked,
        }
        if self.status is Status.PASS and self.mode == "sampled":
            d["note"] = "no violation found; not a proof of correctness"
        if self.input is not None:
            d["input"] = list(self.input)
            d["output"] = list(self.output)
            d["tally"] = {str(v): c for v, c in self.tally.items()}
            d["majority"] = self.majority
        if self.requirement is not None:
            d["requirement"] = self.requirement.value
            d["expected"] = self.expected
        return d


def check_input(network: Network, p: ProtocolTable, a: Sequence[int]) -> Verdict:
    out = evaluate(network, p, a)
    t = tally(network, out)
    maj = strict_majority(t, network.n)
    a = tuple(a)
    req = expected = None
    if is_unanimous(a) and maj != a[0]:
        req, expected = Requirement.REQ_II, a[0]
    elif maj is None:
        req = Requirement.REQ_I
    status = Status.PASS if req is None else Status.VIOLATION
    return Verdict(status, "single", a, out, t, req, maj, expected, inputs_checked=1)


def _relabel(v: Verdict, mode: str, checked: int) -> Verdict:
    return Verdict(v.status, mode, v.input, v.output, v.tally, v.requirement,
                   v.majority, v.expected, inputs_checked=checked)


def verify_exhaustive(
    network: Network,
    p: ProtocolTable,
    budget: int = _scan.DEFAULT_INPUT_BUDGET,
    workers: int = 1,
) -> Verdict:
    """Check every input; on failure report the lexicographically smallest one."""
    _scan.check_budget(network, budget)
    hits = [i for i in _scan.run_blocks(_scan.first_violation, network, p, workers) if i is not None]
    if not hits:
        return Verdict(Status.PASS, "exhaustive", inputs_checked=network.input_space)
    first = min(hits)
    v = check_input(network, p, unrank(first, network.n, network.k))
    if v.status is not Status.VIOLATION:
        raise IntegrityError(f"scan flagged {v.input} but direct evaluation passes it")
    return _relabel(v, "exhaustive", first + 1)


def verify_sampled(network: Network, p: ProtocolTable, samples: int, seed: int) -> Verdict:
    """All unanimous inputs, then ``samples`` seeded random ones."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    checked = 0
    for v in range(1, network.k + 1):
        checked += 1
        res = check_input(network, p, unanimous(network, v))
        if not res.passed:
            return _relabel(res, "sampled", checked)
    rng = random.Random(seed)
    for _ in range(samples):
        checked += 1
        a = tuple(rng.randint(1, network.k) for _ in range(network.n))
        res = check_input(network, p, a)
        if not res.passed:
            return _relabel(res, "sampled", checked)
    return Verdict(Status.PASS, "sampled", inputs_checked=checked)
