"""Full m-fold covers stored as one permutation per edge.

For an edge ``(u, v)`` with ``u < v`` and permutation ``sigma`` the cover
matches ``(u, z)`` with ``(v, sigma(z))``.  The cover graph itself is never
built: a transversal ``x`` (one fibre index per vertex) is a colouring exactly
when ``x[v] != sigma(x[u])`` on every edge.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import CoverParseError
from .graph import Multigraph
from .guards import MAX_STATES, check_states


@lru_cache(maxsize=None)
def all_perms(m: int) -> tuple[tuple[int, ...], ...]:
    """Every permutation of ``range(m)`` in lexicographic order; index = rank."""
    return tuple(itertools.permutations(range(m)))


@lru_cache(maxsize=None)
def _rank_table(m: int) -> dict:
    return {p: i for i, p in enumerate(all_perms(m))}


@dataclass(frozen=True)
class Permutation:
    m: int
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if len(images) != self.m or sorted(images) != list(range(self.m)):
            raise ValueError(f"{images} is not a permutation of range({self.m})")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(m, tuple(range(m)))

    @classmethod
    def shift(cls, m: int, s: int) -> "Permutation":
        """``z -> z + s (mod m)``."""
        return cls(m, tuple((z + s) % m for z in range(m)))

    @classmethod
    def from_rank(cls, m: int, rank: int) -> "Permutation":
        return cls(m, all_perms(m)[rank])

    def __call__(self, z: int) -> int:
        return self.images[z]

    @property
    def rank(self) -> int:
        return _rank_table(self.m)[self.images]

    def inverse(self) -> "Permutation":
        inv = [0] * self.m
        for z, w in enumerate(self.images):
            inv[w] = z
        return Permutation(self.m, tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``: apply ``other`` first."""
        if other.m != self.m:
            raise ValueError("modulus mismatch")
        return Permutation(self.m, tuple(self.images[other.images[z]] for z in range(self.m)))

    def is_identity(self) -> bool:
        return self.images == tuple(range(self.m))


@dataclass(frozen=True)
class FullCover:
    m: int
    perms: tuple[Permutation, ...]

    def __post_init__(self):
        object.__setattr__(self, "perms", tuple(self.perms))
        for p in self.perms:
            if p.m != self.m:
                raise ValueError(f"permutation modulus {p.m} differs from fold size {self.m}")

    def check(self, G: Multigraph) -> None:
        if len(self.perms) != G.l:
            raise ValueError(f"cover has {len(self.perms)} permutations, graph has {G.l} edges")

    def ranks(self) -> tuple[int, ...]:
        return tuple(p.rank for p in self.perms)

    @classmethod
    def from_ranks(cls, m: int, ranks: Sequence[int]) -> "FullCover":
        return cls(m, tuple(Permutation.from_rank(m, r) for r in ranks))


@dataclass(frozen=True)
class Gauge:
    """One fibre relabelling per vertex."""

    perms: tuple[Permutation, ...]

    @classmethod
    def identity(cls, n: int, m: int) -> "Gauge":
        return cls(tuple(Permutation.identity(m) for _ in range(n)))


# --------------------------------------------------------------------------
# constructors


def identity_cover(G: Multigraph, m: int) -> FullCover:
    if m < 1:
        raise ValueError("fold size must be positive")
    return FullCover(m, tuple(Permutation.identity(m) for _ in G.edges))


@dataclass(frozen=True)
class ListCover:
    """Cover built from a list assignment.

    ``cover`` is the full cover obtained by completing every edge's matching;
    ``shared`` records, per edge, the fibre indices of the smaller endpoint
    whose match comes from a genuinely shared colour.  Only those matched pairs
    belong to the list-colouring cover, whose colourings biject with proper
    L-colourings; the completion can only remove colourings.
    """

    cover: FullCover
    index_maps: tuple[dict, ...]
    shared: tuple[frozenset, ...]

    def colour_of(self, v: int, index: int):
        for colour, i in self.index_maps[v].items():
            if i == index:
                return colour
        raise KeyError(index)

    def count_list_colorings(self, G: Multigraph, max_states=MAX_STATES) -> int:
        """Colourings of the list cover proper (only shared-colour matchings)."""
        m = self.cover.m
        check_states("list cover colouring count", m**G.n, max_states)
        tables = []
        for p, keep in zip(self.cover.perms, self.shared):
            tables.append(tuple(p.images[z] if z in keep else -1 for z in range(m)))
        return count_transversals(G, m, tables)


def list_to_cover(G: Multigraph, lists: Sequence[Sequence]) -> ListCover:
    if not G.is_simple():
        raise ValueError("list_to_cover needs a simple graph")
    if len(lists) != G.n:
        raise ValueError("one list per vertex required")
    sizes = {len(set(L)) for L in lists}
    if len(sizes) > 1 or any(len(set(L)) != len(L) for L in lists):
        raise ValueError("all lists must have the same size and no repeats")
    m = sizes.pop() if sizes else 1
    index_maps = tuple({c: i for i, c in enumerate(sorted(L))} for L in lists)
    perms, shared = [], []
    for u, v in G.edges:
        iu, iv = index_maps[u], index_maps[v]
        images = [-1] * m
        keep = set()
        for colour in sorted(iu.keys() & iv.keys()):
            images[iu[colour]] = iv[colour]
            keep.add(iu[colour])
        # complete the matching: leftovers paired in ascending order
        free_u = [z for z in range(m) if images[z] < 0]
        free_v = sorted(set(range(m)) - set(images))
        for z, w in zip(free_u, free_v):
            images[z] = w
        perms.append(Permutation(m, tuple(images)))
        shared.append(frozenset(keep))
    return ListCover(FullCover(m, tuple(perms)), index_maps, tuple(shared))


def random_cover(G: Multigraph, m: int, seed: int) -> FullCover:
    """Uniform random permutation on every edge, drawn from SplitMix64(seed)."""
    rng = SplitMix64(seed)
    k = math.factorial(m)
    return FullCover.from_ranks(m, [rng.below(k) for _ in G.edges])


class SplitMix64:
    """The SplitMix64 generator (Steele, Lea and Flood); fixes seeds across platforms."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        """Uniform integer in ``[0, k)`` by rejection."""
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            r = self.next()
            if r < limit:
                return r % k


# --------------------------------------------------------------------------
# gauge transforms


def twist(C: FullCover, g: Gauge, G: Multigraph) -> FullCover:
    """Relabel every fibre: the edge permutation becomes ``pi_v o sigma o pi_u^-1``."""
    C.check(G)
    if len(g.perms) != G.n:
        raise ValueError("gauge needs one permutation per vertex")
    for p in g.perms:
        if p.m != C.m:
            raise ValueError("gauge modulus differs from cover fold size")
    return FullCover(
        C.m,
        tuple(
            g.perms[v].compose(s).compose(g.perms[u].inverse())
            for (u, v), s in zip(G.edges, C.perms)
        ),
    )


def random_gauge(n: int, m: int, seed: int) -> Gauge:
    rng = SplitMix64(seed)
    k = math.factorial(m)
    return Gauge(tuple(Permutation.from_rank(m, rng.below(k)) for _ in range(n)))


def spanning_forest(G: Multigraph) -> tuple[list[int], list[int]]:
    """Split edge indices into (forest, free): an edge joins the forest when it
    is the first, in edge order, to connect two components."""
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    forest, free = [], []
    for i, (u, v) in enumerate(G.edges):
        ru, rv = find(u), find(v)
        if ru == rv:
            free.append(i)
        else:
            parent[ru] = rv
            forest.append(i)
    return forest, free


def gauge_fix(G: Multigraph, C: FullCover) -> tuple[FullCover, Gauge]:
    """Twist ``C`` so every spanning-forest edge carries the identity."""
    C.check(G)
    forest, _ = spanning_forest(G)
    m = C.m
    adj = [[] for _ in range(G.n)]
    for i in forest:
        u, v = G.edges[i]
        adj[u].append((v, i))
        adj[v].append((u, i))
    pi: list[Permutation | None] = [None] * G.n
    for root in range(G.n):
        if pi[root] is not None:
            continue
        pi[root] = Permutation.identity(m)
        stack = [root]
        while stack:
            x = stack.pop()
            for y, i in adj[x]:
                if pi[y] is not None:
                    continue
                u, v = G.edges[i]
                s = C.perms[i]
                # want pi_v o s o pi_u^-1 = id
                pi[y] = pi[u].compose(s.inverse()) if y == v else pi[v].compose(s)
                stack.append(y)
    g = Gauge(tuple(pi))
    return twist(C, g, G), g


class GaugeFixedCovers:
    """Indexed family of covers whose spanning-forest edges are the identity.

    Cover ``i`` assigns to the free edges (in edge order) the permutation
    ranks given by the base-``m!`` digits of ``i``, first free edge most
    significant, so iteration order is lexicographic in the rank vector.
    """

    def __init__(self, G: Multigraph, m: int):
        self.G = G
        self.m = m
        self.forest, self.free = spanning_forest(G)
        self.base = math.factorial(m)

    def __len__(self) -> int:
        return self.base ** len(self.free)

    def digits(self, index: int) -> list[int]:
        out = []
        for _ in self.free:
            index, d = divmod(index, self.base)
            out.append(d)
        return out[::-1]

    def index_of(self, C: FullCover) -> int:
        idx = 0
        for i in self.free:
            idx = idx * self.base + C.perms[i].rank
        for i in self.forest:
            if not C.perms[i].is_identity():
                raise ValueError("cover is not gauge-fixed")
        return idx

    def __getitem__(self, index: int) -> FullCover:
        if not 0 <= index < len(self):
            raise IndexError(index)
        ranks = [0] * self.G.l
        for i, d in zip(self.free, self.digits(index)):
            ranks[i] = d
        return FullCover.from_ranks(self.m, ranks)

    def __iter__(self) -> Iterator[FullCover]:
        for i in range(len(self)):
            yield self[i]


def enumerate_gauge_fixed(G: Multigraph, m: int) -> Iterator[FullCover]:
    return iter(GaugeFixedCovers(G, m))


# --------------------------------------------------------------------------
# counting


def count_colorings(G: Multigraph, C: FullCover, limit=None, max_states=MAX_STATES) -> int:
    """Number of C-colourings of G, by backtracking.

    With ``limit`` set the search stops as soon as the running count reaches
    it; the return value is then some number >= limit.  ``max_states=None``
    disables the m**n guard.
    """
    C.check(G)
    check_states("colouring count", C.m**G.n, max_states)
    return count_transversals(G, C.m, [p.images for p in C.perms], limit)


def search_order(G: Multigraph) -> list[int]:
    """Greedy order: next vertex has most placed neighbours, then highest degree."""
    placed = [0] * G.n
    deg = G.degrees
    remaining = set(range(G.n))
    order = []
    while remaining:
        v = max(remaining, key=lambda x: (placed[x], deg[x], -x))
        remaining.remove(v)
        order.append(v)
        for i, (a, b) in enumerate(G.edges):
            if a == v and b in remaining:
                placed[b] += 1
            elif b == v and a in remaining:
                placed[a] += 1
    return order


def count_transversals(G: Multigraph, m: int, tables, limit=None, order=None) -> int:
    """Count fibre transversals avoiding every matched pair.

    ``tables[i][z]`` is the fibre index of the larger endpoint of edge ``i``
    matched to index ``z`` of the smaller endpoint, or -1 for no match.
    """
    n = G.n
    if n == 0:
        return 1
    order = search_order(G) if order is None else list(order)
    pos = {v: k for k, v in enumerate(order)}
    # checks[k]: (position of earlier vertex, table mapping its index to the
    # forbidden index at order[k])
    checks = [[] for _ in range(n)]
    for (u, v), t in zip(G.edges, tables):
        if pos[u] < pos[v]:
            checks[pos[v]].append((pos[u], tuple(t)))
        else:
            inv = [-1] * m
            for z, w in enumerate(t):
                if w >= 0:
                    inv[w] = z
            checks[pos[u]].append((pos[v], tuple(inv)))
    full = (1 << m) - 1
    bits = [1 << z for z in range(m)] + [0]  # index -1 -> no bit
    col = [0] * n
    count = 0
    cap = limit if limit is not None else -1
    last = n - 1

    def rec(k):
        nonlocal count
        forbidden = 0
        for j, t in checks[k]:
            forbidden |= bits[t[col[j]]]
        allowed = full & ~forbidden
        if k == last:
            count += allowed.bit_count()
            return cap >= 0 and count >= cap
        while allowed:
            low = allowed & -allowed
            col[k] = low.bit_length() - 1
            if rec(k + 1):
                return True
            allowed ^= low
        return False

    rec(0)
    return count


# --------------------------------------------------------------------------
# cover file format


def format_cover(C: FullCover) -> str:
    lines = [f"m={C.m}"]
    lines += [f"{i}: " + " ".join(str(x) for x in p.images) for i, p in enumerate(C.perms)]
    return "\n".join(lines) + "\n"


def parse_cover(text: str) -> FullCover:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("m="):
        raise CoverParseError("first line must be 'm=<int>'")
    try:
        m = int(lines[0][2:])
    except ValueError:
        raise CoverParseError(f"bad fold size {lines[0]!r}") from None
    perms = []
    for expect, line in enumerate(lines[1:]):
        head, sep, body = line.partition(":")
        if not sep:
            raise CoverParseError(f"expected '<edge>: images', got {line!r}")
        try:
            idx = int(head)
            images = tuple(int(x) for x in body.split())
        except ValueError:
            raise CoverParseError(f"non-integer entry in {line!r}") from None
        if idx != expect:
            raise CoverParseError(f"edge index {idx} out of order (expected {expect})")
        try:
            perms.append(Permutation(m, images))
        except ValueError as exc:
            raise CoverParseError(str(exc)) from None
    return FullCover(m, tuple(perms))


def read_cover(path) -> FullCover:
    with open(path) as fh:
        return parse_cover(fh.read())
