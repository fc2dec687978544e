"""Scanning the gauge-fixed cover stream for the fewest colourings.

Each (edge, permutation) pair forbids a fixed set of points of the colour grid
``range(m)**n``; those sets are kept as Python ints used as bitsets, so the
colouring count of a cover is ``m**n`` minus the popcount of an OR.  Walking
the stream in index order changes mostly the last free edge, so the prefix
ORs are cached and only the changed suffix is recomputed.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .cover import GaugeFixedCovers, all_perms, count_transversals, search_order
from .graph import Multigraph

#: Largest grid for which bitsets are built; larger instances backtrack.
GRID_LIMIT = 3**12


class GridCounter:
    def __init__(self, G: Multigraph, m: int):
        self.G = G
        self.m = m
        self.size = m**G.n
        if G.n:
            self.points = np.indices((m,) * G.n, dtype=np.uint8).reshape(G.n, -1)
        else:
            self.points = np.zeros((0, 1), dtype=np.uint8)
        self._perms = [np.array(p, dtype=np.uint8) for p in all_perms(m)]
        self._masks: dict = {}

    def mask(self, edge: int, rank: int) -> int:
        key = (edge, rank)
        hit = self._masks.get(key)
        if hit is None:
            u, v = self.G.edges[edge]
            bad = self.points[v] == self._perms[rank][self.points[u]]
            hit = int.from_bytes(np.packbits(bad, bitorder="little").tobytes(), "little")
            self._masks[key] = hit
        return hit

    def count(self, ranks) -> int:
        bad = 0
        for e, r in enumerate(ranks):
            bad |= self.mask(e, r)
        return self.size - bad.bit_count()


def use_grid(G: Multigraph, m: int) -> bool:
    return m**G.n <= GRID_LIMIT


def scan(G: Multigraph, m: int, lo: int, hi: int, stop_at: int = 0):
    """Minimum colouring count over stream indices ``[lo, hi)``.

    Returns ``(count, index, examined)`` for the first index attaining the
    minimum of the range.  Scanning stops early once a count ``<= stop_at``
    is seen; ``stop_at`` must be a proven lower bound for that to be exact.
    """
    stream = GaugeFixedCovers(G, m)
    hi = min(hi, len(stream))
    if lo >= hi:
        return None, None, 0
    if use_grid(G, m):
        return _scan_grid(stream, lo, hi, stop_at)
    return _scan_backtrack(stream, lo, hi, stop_at)


def _scan_grid(stream: GaugeFixedCovers, lo, hi, stop_at):
    G, m = stream.G, stream.m
    counter = GridCounter(G, m)
    free = stream.free
    k = len(free)
    base_mask = 0
    for e in stream.forest:
        base_mask |= counter.mask(e, 0)
    digits = stream.digits(lo)
    prefix = [base_mask] * (k + 1)
    for d in range(k):
        prefix[d + 1] = prefix[d] | counter.mask(free[d], digits[d])
    masks = [[counter.mask(e, r) for r in range(stream.base)] for e in free]
    size = counter.size
    base = stream.base
    best, best_idx = None, None
    examined = 0
    idx = lo
    while True:
        c = size - prefix[k].bit_count()
        examined += 1
        if best is None or c < best:
            best, best_idx = c, idx
            if best <= stop_at:
                break
        idx += 1
        if idx >= hi:
            break
        # odometer increment
        p = k - 1
        while digits[p] == base - 1:
            digits[p] = 0
            p -= 1
        digits[p] += 1
        for d in range(p, k):
            prefix[d + 1] = prefix[d] | masks[d][digits[d]]
    return best, best_idx, examined


def _scan_backtrack(stream: GaugeFixedCovers, lo, hi, stop_at):
    G = stream.G
    order = search_order(G)
    best, best_idx = None, None
    examined = 0
    for idx in range(lo, hi):
        C = stream[idx]
        c = count_transversals(G, stream.m, [p.images for p in C.perms], limit=best, order=order)
        examined += 1
        if best is None or c < best:
            best, best_idx = c, idx
            if best <= stop_at:
                break
    return best, best_idx, examined


def _scan_job(args):
    return scan(*args)


def parallel_scan(G: Multigraph, m: int, lo: int, hi: int, stop_at: int = 0, threads: int = 1):
    """``scan`` split into contiguous ranges; merge keeps the smaller count,
    then the smaller index, so the result does not depend on ``threads``."""
    if threads <= 1 or hi - lo < 2 * threads:
        return scan(G, m, lo, hi, stop_at)
    step = -(-(hi - lo) // threads)
    jobs = [(G, m, a, min(a + step, hi), stop_at) for a in range(lo, hi, step)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(_scan_job, jobs))
    best, best_idx, examined = None, None, 0
    for c, idx, ex in parts:
        examined += ex
        if c is None:
            continue
        if best is None or (c, idx) < (best, best_idx):
            best, best_idx = c, idx
    return best, best_idx, examined
