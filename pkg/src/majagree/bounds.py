"""Possibility and impossibility conditions in exact integer arithmetic.

Every threshold is compared by cross-multiplication; nothing here divides
except the floor in the padding term, which is integer floor division.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from .core import Network, UnsupportedRegime
from .protocols import ProtocolTable, plurality_padding_protocol


class Classification(str, Enum):
    POSSIBLE = "POSSIBLE"
    IMPOSSIBLE = "IMPOSSIBLE"
    UNKNOWN = "UNKNOWN"


class Reason(str, Enum):
    THEOREM_1 = "THEOREM_1"
    COROLLARY_1 = "COROLLARY_1"
    THEOREM_2 = "THEOREM_2"
    NO_CONDITION_APPLIES = "NO_CONDITION_APPLIES"


_OPS = {">": operator.gt, "<": operator.lt, "<=": operator.le, "==": operator.eq}


@dataclass(frozen=True)
class Comparison:
    """One audited integer comparison ``lhs op rhs``."""

    name: str
    lhs: int
    op: str
    rhs: int

    @property
    def holds(self) -> bool:
        return _OPS[self.op](self.lhs, self.rhs)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "lhs": self.lhs, "op": self.op, "rhs": self.rhs, "holds": self.holds}


def theorem1_comparisons(net: Network) -> Tuple[Comparison, ...]:
    pad = (net.n - net.h) // net.k
    return (Comparison("2*(h + floor((n-h)/k)) > n", 2 * (net.h + pad), ">", net.n),)


def corollary1_comparisons(net: Network) -> Tuple[Comparison, ...]:
    return (
        Comparison("(n-h) mod k == 0", (net.n - net.h) % net.k, "==", 0),
        Comparison("2*(k-1)*h > (k-2)*n", 2 * (net.k - 1) * net.h, ">", (net.k - 2) * net.n),
    )


def theorem2_comparisons(net: Network) -> Tuple[Comparison, ...]:
    return (
        Comparison("k >= 3", net.k, ">", 2),
        Comparison("2*(k-1)*h <= (k-2)*n", 2 * (net.k - 1) * net.h, "<=", (net.k - 2) * net.n),
        Comparison("2*(h + j2) <= n", 2 * (net.h + net.j2), "<=", net.n),
    )


def theorem1_holds(net: Network) -> bool:
    return all(c.holds for c in theorem1_comparisons(net))


def corollary1_holds(net: Network) -> bool:
    return all(c.holds for c in corollary1_comparisons(net))


def theorem2_holds(net: Network) -> bool:
    return all(c.holds for c in theorem2_comparisons(net))


@dataclass(frozen=True)
class ClassifyResult:
    network: Network
    verdict: Classification
    reason: Reason
    supplementary: Tuple[Reason, ...] = ()
    comparisons: Dict[str, Tuple[Comparison, ...]] = field(default_factory=dict)
    witness_protocol: Optional[ProtocolTable] = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "network": self.network.spec(),
            "k": self.network.k,
            "n": self.network.n,
            "h": self.network.h,
            "j2": self.network.j2,
            "verdict": self.verdict.value,
            "reason": self.reason.value,
            "supplementary": [r.value for r in self.supplementary],
            "comparisons": {
                name: [c.to_dict() for c in cs] for name, cs in self.comparisons.items()
            },
            "witness": "plurality_padding" if self.witness_protocol is not None else None,
        }


def classify(net: Network, with_witness: bool = True) -> ClassifyResult:
    """POSSIBLE if the plurality-plus-padding bound holds, IMPOSSIBLE under the
    impossibility conditions, UNKNOWN in the gap between them.

    ``with_witness=False`` skips tabulating the witness protocol, which is
    exponential in the size of the largest component.
    """
    if net.k < 3:
        raise UnsupportedRegime(f"classify needs k >= 3, got k={net.k}; use synth for binary instances")
    comps = {
        "theorem_1": theorem1_comparisons(net),
        "corollary_1": corollary1_comparisons(net),
        "theorem_2": theorem2_comparisons(net),
    }
    extra = (Reason.COROLLARY_1,) if corollary1_holds(net) else ()
    if theorem1_holds(net):
        witness = plurality_padding_protocol(net) if with_witness else None
        return ClassifyResult(net, Classification.POSSIBLE, Reason.THEOREM_1, extra, comps, witness)
    if theorem2_holds(net):
        return ClassifyResult(net, Classification.IMPOSSIBLE, Reason.THEOREM_2, extra, comps)
    return ClassifyResult(net, Classification.UNKNOWN, Reason.NO_CONDITION_APPLIES, extra, comps)
