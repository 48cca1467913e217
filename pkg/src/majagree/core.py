"""Network model, assignments, tallies and strict-majority arithmetic.

A network is nothing more than a multiset of component sizes plus the
alphabet size ``k``: processors inside a component may talk freely, so the
internal topology is irrelevant. Values are 1-based (``1..k``), processor
indices 0-based. Processors are laid out as contiguous index ranges, one
per component, with components in canonical (non-increasing size) order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Sequence, Tuple

Assignment = Tuple[int, ...]
Tally = Dict[int, int]


class AgreementError(Exception):
    """Base class for errors raised by this package."""


class StructuralError(AgreementError, ValueError):
    """Malformed network, assignment or protocol table."""


class BudgetExceeded(AgreementError):
    """A computation would exceed its configured size budget."""


class ContractError(AgreementError, ValueError):
    """An operation was called outside its precondition."""


class UnsupportedRegime(ContractError):
    """The requested alphabet size is not covered by the classifier."""


class IntegrityError(AgreementError):
    """An internal consistency check failed; indicates a bug, not bad input."""


@dataclass(frozen=True)
class Network:
    """Component-size composition plus alphabet size.

    ``component_sizes`` is canonicalized on construction to non-increasing
    order, so ``Network((1, 2), 3) == Network((2, 1), 3)``.
    """

    component_sizes: Tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.component_sizes)
        if not sizes:
            raise StructuralError("a network needs at least one component")
        if any(s < 1 for s in sizes):
            raise StructuralError(f"component sizes must be positive, got {sizes}")
        if int(self.k) < 2:
            raise StructuralError(f"k must be at least 2, got {self.k}")
        # sorted() is stable, so equal sizes keep their original relative order
        object.__setattr__(self, "component_sizes", tuple(sorted(sizes, reverse=True)))
        object.__setattr__(self, "k", int(self.k))

    @classmethod
    def parse(cls, text: str, k: int) -> "Network":
        """Parse ``"4,2,1,1"`` (any order) into a canonical network."""
        parts = [p.strip() for p in text.split(",")]
        try:
            sizes = tuple(int(p) for p in parts)
        except ValueError:
            raise StructuralError(f"malformed network spec {text!r}") from None
        return cls(sizes, k)

    @property
    def n(self) -> int:
        return sum(self.component_sizes)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.component_sizes)

    @property
    def h(self) -> int:
        return self.component_sizes[0]

    @property
    def j2(self) -> int:
        return self.component_sizes[1] if self.l >= 2 else 0

    @property
    def offsets(self) -> Tuple[int, ...]:
        return tuple(itertools.accumulate(self.component_sizes, initial=0))[:-1]

    @property
    def input_space(self) -> int:
        return self.k ** self.n

    def spec(self) -> str:
        return ",".join(map(str, self.component_sizes))

    def component_slice(self, c: int) -> range:
        if not 0 <= c < self.l:
            raise IndexError(f"component {c} out of range for {self.l} components")
        start = self.offsets[c]
        return range(start, start + self.component_sizes[c])

    def __str__(self) -> str:
        return f"[{self.spec()}] k={self.k}"


def check_assignment(network: Network, a: Sequence[int]) -> Assignment:
    a = tuple(a)
    if len(a) != network.n:
        raise StructuralError(f"assignment has length {len(a)}, network has {network.n} processors")
    for v in a:
        if not 1 <= v <= network.k:
            raise StructuralError(f"value {v} outside 1..{network.k}")
    return a


def tally(network: Network, a: Sequence[int]) -> Tally:
    a = check_assignment(network, a)
    counts = {v: 0 for v in range(1, network.k + 1)}
    for v in a:
        counts[v] += 1
    return counts


def strict_majority(t: Tally, n: int) -> Optional[int]:
    """Return the value held by strictly more than half of ``n``, else None."""
    for v, count in t.items():
        if 2 * count > n:
            return v
    return None


def unanimous(network: Network, v: int) -> Assignment:
    if not 1 <= v <= network.k:
        raise StructuralError(f"value {v} outside 1..{network.k}")
    return (v,) * network.n


def is_unanimous(a: Sequence[int]) -> bool:
    return len(set(a)) == 1


def restrict(network: Network, a: Sequence[int], c: int) -> Assignment:
    """The local vector of component ``c``."""
    s = network.component_slice(c)
    return tuple(a[s.start:s.stop])


def rank(values: Sequence[int], k: int) -> int:
    """Mixed-radix rank of a 1-based vector, leftmost entry most significant."""
    r = 0
    for v in values:
        r = r * k + (v - 1)
    return r


def unrank(r: int, length: int, k: int) -> Assignment:
    out = [0] * length
    for i in range(length - 1, -1, -1):
        r, d = divmod(r, k)
        out[i] = d + 1
    return tuple(out)


def iter_inputs(network: Network) -> Iterator[Assignment]:
    """All ``k**n`` inputs in lexicographic order."""
    return itertools.product(range(1, network.k + 1), repeat=network.n)
