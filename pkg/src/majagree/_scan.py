"""Blocked scans over the full input space of a protocol.

Outputs of different components are independent, so the output tally of a
global input is the sum of per-component tallies of the local outputs. The
global input space is the product of local rank ranges with component 0
outermost, which is exactly lexicographic order of the input vectors; a
flat index in a scan is therefore the base-k rank of the input itself.

Blocks split the leading component's rank range. Workers may process blocks
in any order; callers reduce block results with ``min`` so the answer never
depends on scheduling.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .core import BudgetExceeded, Network
from .protocols import ProtocolTable

DEFAULT_INPUT_BUDGET = 5_000_000
BLOCK_CELLS = 1 << 18

Block = Tuple[int, int]


def check_budget(network: Network, budget: int) -> None:
    if network.input_space > budget:
        raise BudgetExceeded(
            f"input space k^n = {network.k}^{network.n} = {network.input_space} exceeds budget {budget}"
        )


def count_arrays(p: ProtocolTable) -> List[np.ndarray]:
    return [np.asarray(c, dtype=np.int32) for c in p.local_counts]


def blocks(network: Network) -> List[Block]:
    lead = network.k ** network.component_sizes[0]
    rest = network.input_space // lead
    step = max(1, BLOCK_CELLS // rest)
    return [(lo, min(lo + step, lead)) for lo in range(0, lead, step)]


def block_tallies(counts: Sequence[np.ndarray], lo: int, hi: int) -> np.ndarray:
    """Tallies of all inputs whose leading rank lies in ``[lo, hi)``, shape (m, k)."""
    l = len(counts)
    k = counts[0].shape[1]
    first = counts[0][lo:hi]
    total = first.reshape((hi - lo,) + (1,) * (l - 1) + (k,))
    for c in range(1, l):
        shape = [1] * (l + 1)
        shape[c] = counts[c].shape[0]
        shape[-1] = k
        total = total + counts[c].reshape(shape)
    return total.reshape(-1, k)


def unanimous_index(network: Network, v: int) -> int:
    k, n = network.k, network.n
    return (v - 1) * (k ** n - 1) // (k - 1)


def first_violation(network: Network, counts: Sequence[np.ndarray], block: Block) -> Optional[int]:
    """Smallest flat index in ``block`` whose output breaks (i) or (ii)."""
    lo, hi = block
    t = block_tallies(counts, lo, hi)
    n = network.n
    bad = 2 * t.max(axis=1) <= n
    offset = lo * (network.input_space // network.k ** network.component_sizes[0])
    for v in range(1, network.k + 1):
        u = unanimous_index(network, v) - offset
        if 0 <= u < len(bad) and 2 * t[u, v - 1] <= n:
            bad[u] = True
    if not bad.any():
        return None
    return offset + int(np.argmax(bad))


def minimal_majority(
    network: Network, counts: Sequence[np.ndarray], block: Block, a: int
) -> Optional[Tuple[int, int]]:
    """``(count of a, flat index)`` minimizing the count among inputs with majority ``a``."""
    lo, hi = block
    t = block_tallies(counts, lo, hi)[:, a - 1]
    ok = 2 * t > network.n
    if not ok.any():
        return None
    keyed = np.where(ok, t, np.iinfo(np.int32).max)
    i = int(np.argmin(keyed))
    offset = lo * (network.input_space // network.k ** network.component_sizes[0])
    return int(t[i]), offset + i


def run_blocks(fn: Callable, network: Network, p: ProtocolTable, workers: int, *extra) -> list:
    """Apply ``fn(network, counts, block, *extra)`` over all blocks, in block order."""
    counts = count_arrays(p)
    bl = blocks(network)
    if workers <= 1 or len(bl) == 1:
        return [fn(network, counts, b, *extra) for b in bl]
    n = len(bl)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, [network] * n, [counts] * n, bl, *[[e] * n for e in extra]))
