"""Exhaustive search for a successful protocol on a small network.

Decision variables are table entries ``(component, local input rank)``. The
agreement requirements only ever look at output *tallies*, so an entry's
domain is the set of count vectors a component of that size can output
(for size s: C(s+k-1, k-1) choices instead of k**s); a found assignment is
turned back into a table by writing each count vector out in sorted order.

Entries are assigned in the order global inputs first touch them, with the
unanimous inputs seeded first. After each assignment every global input
containing that entry is forward-checked: some value must still be able to
reach a strict majority (for unanimous inputs, the unanimous value must).
"""
from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .bounds import Classification, classify
from .core import BudgetExceeded, Network
from .protocols import ProtocolTable, to_text

DEFAULT_NODE_BUDGET = int(os.environ.get("MAJAGREE_NODE_BUDGET", 2_000_000))
DEFAULT_CONSTRAINT_LIMIT = 200_000


class SynthStatus(str, Enum):
    FEASIBLE = "FEASIBLE"
    INFEASIBLE = "INFEASIBLE"
    RESOURCE_EXCEEDED = "RESOURCE_EXCEEDED"


@dataclass(frozen=True)
class SynthStats:
    nodes: int = 0
    constraints_checked: int = 0
    budget: int = 0


@dataclass(frozen=True)
class SynthResult:
    network: Network
    status: SynthStatus
    protocol: Optional[ProtocolTable] = field(default=None, repr=False)
    stats: SynthStats = SynthStats()

    def to_dict(self, include_protocol: bool = True) -> Dict[str, Any]:
        d: Dict[str, Any] = {
            "network": self.network.spec(),
            "k": self.network.k,
            "status": self.status.value,
            "nodes": self.stats.nodes,
            "constraints_checked": self.stats.constraints_checked,
            "budget": self.stats.budget,
        }
        if include_protocol and self.protocol is not None:
            d["protocol"] = to_text(self.protocol)
        return d


def count_vectors(size: int, k: int) -> List[Tuple[int, ...]]:
    """All ways to split ``size`` outputs among k values, most-1s first."""
    out = []
    for bars in itertools.combinations(range(size + k - 1), k - 1):
        edges = (-1,) + bars + (size + k - 1,)
        out.append(tuple(edges[i + 1] - edges[i] - 1 for i in range(k)))
    return sorted(out, reverse=True)


def _vector_output(cv: Sequence[int]) -> Tuple[int, ...]:
    return tuple(v + 1 for v, c in enumerate(cv) for _ in range(c))


class _Search:
    def __init__(self, network: Network, budget: int, symmetry_breaking: bool):
        self.net = network
        self.budget = budget
        k, n = network.k, network.n
        sizes = network.component_sizes
        radices = [k ** s for s in sizes]
        base = [0]
        for r in radices:
            base.append(base[-1] + r)
        self.entry_comp = [c for c, r in enumerate(radices) for _ in range(r)]
        self.entry_rank = [i for r in radices for i in range(r)]
        self.domains = [count_vectors(sizes[c], k) for c in self.entry_comp]

        unan = [[base[c] + (v - 1) * (radices[c] - 1) // (k - 1) for c in range(len(sizes))]
                for v in range(1, k + 1)]
        # constraint g: (entries, required value or -1)
        self.cons: List[Tuple[Tuple[int, ...], int]] = []
        unan_keys = {tuple(u): v for v, u in enumerate(unan)}
        for ranks in itertools.product(*(range(r) for r in radices)):
            entries = tuple(base[c] + r for c, r in enumerate(ranks))
            self.cons.append((entries, unan_keys.get(entries, -1)))

        order: List[int] = []
        seen = set()
        for entries in unan + [e for e, _ in self.cons]:
            for e in entries:
                if e not in seen:
                    seen.add(e)
                    order.append(e)
        self.order = order
        watch: List[List[int]] = [[] for _ in order]
        for g, (entries, _) in enumerate(self.cons):
            for e in entries:
                watch[e].append(g)
        self.watch = [np.asarray(w, dtype=np.intp) for w in watch]

        req = np.asarray([r for _, r in self.cons], dtype=np.intp)
        self.is_req = req >= 0
        self.req = np.where(self.is_req, req, 0)
        self.sums = np.zeros((len(self.cons), k), dtype=np.int32)
        self.free = np.full(len(self.cons), n, dtype=np.int32)
        self.assign: List[Optional[Tuple[int, ...]]] = [None] * len(order)
        self.cv_arrays = {cv: np.asarray(cv, dtype=np.int32) for d in self.domains for cv in d}
        self.nodes = 0
        self.checked = 0
        self.size_of = [sizes[c] for c in self.entry_comp]
        self.symmetry_breaking = symmetry_breaking
        self.first_unanimous = unan[0][0]

    def _place(self, e: int, cv: Tuple[int, ...]) -> bool:
        w = self.watch[e]
        self.sums[w] += self.cv_arrays[cv]
        self.free[w] -= self.size_of[e]
        self.assign[e] = cv
        self.checked += len(w)
        s = self.sums[w]
        best = np.where(self.is_req[w], s[np.arange(len(w)), self.req[w]], s.max(axis=1))
        return bool(np.all(2 * (best + self.free[w]) > self.net.n))

    def _unplace(self, e: int) -> None:
        w = self.watch[e]
        self.sums[w] -= self.cv_arrays[self.assign[e]]
        self.free[w] += self.size_of[e]
        self.assign[e] = None

    def _domain(self, e: int) -> List[Tuple[int, ...]]:
        if self.symmetry_breaking and e == self.first_unanimous:
            # relabelings fixing value 1 map this entry to itself and permute
            # counts of 2..k, so those counts may be taken non-increasing
            return [cv for cv in self.domains[e] if list(cv[1:]) == sorted(cv[1:], reverse=True)]
        return self.domains[e]

    def run(self) -> Optional[bool]:
        """True if feasible, False if infeasible, None if the budget ran out."""
        order = self.order
        depth_limit = len(order)
        # iterative DFS: stack of (position, domain iterator)
        stack: List[Iterator[Tuple[int, ...]]] = [iter(self._domain(order[0]))]
        while stack:
            pos = len(stack) - 1
            e = order[pos]
            if self.assign[e] is not None:
                self._unplace(e)
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                continue
            if self.nodes >= self.budget:
                return None
            self.nodes += 1
            if self._place(e, nxt):
                if pos + 1 == depth_limit:
                    return True
                stack.append(iter(self._domain(order[pos + 1])))
        return False

    def protocol(self) -> ProtocolTable:
        net = self.net
        tables: List[List[Tuple[int, ...]]] = [[] for _ in net.component_sizes]
        for e, cv in enumerate(self.assign):
            tables[self.entry_comp[e]].append(_vector_output(cv))
        return ProtocolTable(net, tuple(tuple(t) for t in tables))


def protocol_exists(
    network: Network,
    budget: int = DEFAULT_NODE_BUDGET,
    symmetry_breaking: bool = False,
    constraint_limit: int = DEFAULT_CONSTRAINT_LIMIT,
) -> SynthResult:
    """Decide whether any successful protocol exists, up to ``budget`` nodes.

    A node is one table-entry assignment. ``constraint_limit`` caps the
    number of global inputs (k**n) the search will materialize.
    """
    if network.input_space > constraint_limit:
        raise BudgetExceeded(
            f"search needs {network.input_space} constraints, limit is {constraint_limit}"
        )
    search = _Search(network, budget, symmetry_breaking)
    found = search.run()
    stats = SynthStats(search.nodes, search.checked, budget)
    if found is None:
        return SynthResult(network, SynthStatus.RESOURCE_EXCEEDED, None, stats)
    if not found:
        return SynthResult(network, SynthStatus.INFEASIBLE, None, stats)
    return SynthResult(network, SynthStatus.FEASIBLE, search.protocol(), stats)


def compositions(n: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Non-increasing compositions (partitions) of ``n``, largest part first."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in compositions(n - first, first):
            yield (first,) + rest


@dataclass(frozen=True)
class SweepRow:
    sizes: Tuple[int, ...]
    k: int
    verdict: str
    reason: str
    synth: str
    nodes: int
    integrity_failure: bool
    wall_time: float = field(default=0.0, compare=False)

    FIELDS = ("network", "k", "n", "verdict", "reason", "synth", "nodes", "integrity_failure")

    def to_dict(self, timing: bool = False) -> Dict[str, Any]:
        d: Dict[str, Any] = {
            "network": ",".join(map(str, self.sizes)),
            "k": self.k,
            "n": sum(self.sizes),
            "verdict": self.verdict,
            "reason": self.reason,
            "synth": self.synth,
            "nodes": self.nodes,
            "integrity_failure": self.integrity_failure,
        }
        if timing:
            d["wall_time"] = round(self.wall_time, 6)
        return d


def sweep_instance(sizes: Tuple[int, ...], k: int, budget: int,
                   constraint_limit: int = DEFAULT_CONSTRAINT_LIMIT) -> SweepRow:
    start = time.perf_counter()
    net = Network(sizes, k)
    if k >= 3:
        cr = classify(net, with_witness=False)
        verdict, reason = cr.verdict.value, cr.reason.value
    else:
        verdict, reason = "N/A", "K_BELOW_3"
    try:
        res = protocol_exists(net, budget, constraint_limit=constraint_limit)
        status, nodes = res.status, res.stats.nodes
    except BudgetExceeded:
        status, nodes = SynthStatus.RESOURCE_EXCEEDED, 0
    bad = (verdict == Classification.POSSIBLE.value and status is SynthStatus.INFEASIBLE) or (
        verdict == Classification.IMPOSSIBLE.value and status is SynthStatus.FEASIBLE
    )
    return SweepRow(net.component_sizes, k, verdict, reason, status.value, nodes, bad,
                    time.perf_counter() - start)


def _instances(n_max: int, k_set: Iterable[int]) -> List[Tuple[Tuple[int, ...], int]]:
    return [(sizes, k) for k in sorted(set(k_set)) for n in range(1, n_max + 1)
            for sizes in compositions(n)]


def iter_sweep(
    n_max: int,
    k_set: Iterable[int],
    budget: int = DEFAULT_NODE_BUDGET,
    workers: int = 1,
    constraint_limit: int = DEFAULT_CONSTRAINT_LIMIT,
) -> Iterator[SweepRow]:
    """One row per (composition, k), in canonical order whatever the worker count."""
    todo = _instances(n_max, k_set)
    if workers <= 1:
        for sizes, k in todo:
            yield sweep_instance(sizes, k, budget, constraint_limit)
        return
    m = len(todo)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(sweep_instance, [s for s, _ in todo], [k for _, k in todo],
                            [budget] * m, [constraint_limit] * m)


def sweep(n_max: int, k_set: Iterable[int], budget: int = DEFAULT_NODE_BUDGET,
          workers: int = 1) -> List[SweepRow]:
    return list(iter_sweep(n_max, k_set, budget, workers))
