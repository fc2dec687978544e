"""Loopless multigraphs, structural statistics, chromatic polynomial values
and generators for the named graph families.

Vertices are the integers ``0 .. n-1``.  Edges are stored as ``(u, v)`` pairs
with ``u < v``; repeated pairs are parallel edges, and the position of an edge
in ``Multigraph.edges`` is its identity (cover files refer to edge indices).
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import GraphParseError
from .guards import MAX_STATES, check_states

Edge = tuple[int, int]


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.append((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def l(self) -> int:
        return len(self.edges)

    @cached_property
    def multiplicity(self) -> Counter:
        """``e_G(u, v)`` keyed by the ordered pair ``(min, max)``."""
        return Counter(self.edges)

    @cached_property
    def neighbors(self) -> tuple[frozenset, ...]:
        nb = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        """Multigraph degrees; parallel edges each count."""
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def is_simple(self) -> bool:
        return len(self.multiplicity) == len(self.edges)

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in self.neighbors[x]:
                    if not seen[y]:
                        seen[y] = True
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def cyclomatic_number(self) -> int:
        """``l - n + c``: the number of edges outside any spanning forest."""
        return self.l - self.n + len(self.components())

    def digest(self) -> str:
        """Hash of the serialized graph. Labelled: isomorphic graphs differ."""
        return hashlib.sha256(format_graph(self).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class GraphStats:
    n: int
    l: int
    degeneracy: int
    girth: int | None  # None marks an acyclic graph
    components: int
    simple: bool = field(default=True)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "l": self.l,
            "degeneracy": self.degeneracy,
            "girth": "acyclic" if self.girth is None else self.girth,
            "components": self.components,
            "simple": self.simple,
        }


# --------------------------------------------------------------------------
# file format


def parse_graph(text: str) -> Multigraph:
    """Parse the graph file format: a vertex count, then one ``u v`` per edge."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1 or not _is_int(parts[0]) or int(parts[0]) < 0:
                raise GraphParseError(lineno, f"expected a vertex count, got {raw!r}")
            n = int(parts[0])
            continue
        if len(parts) != 2 or not all(_is_int(p) for p in parts):
            raise GraphParseError(lineno, f"expected 'u v', got {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise GraphParseError(lineno, f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(lineno, f"vertex out of range [0, {n})")
        edges.append((u, v))
    if n is None:
        raise GraphParseError(0, "missing vertex count")
    return Multigraph(n, tuple(edges))


def format_graph(G: Multigraph) -> str:
    lines = [str(G.n)] + [f"{u} {v}" for u, v in G.edges]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Multigraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def _is_int(s: str) -> bool:
    try:
        int(s)
    except ValueError:
        return False
    return True


# --------------------------------------------------------------------------
# structure


def underlying_simple(G: Multigraph) -> Multigraph:
    seen = set()
    edges = []
    for e in G.edges:
        if e not in seen:
            seen.add(e)
            edges.append(e)
    return Multigraph(G.n, tuple(edges))


def degeneracy(G: Multigraph) -> int:
    """Largest minimum degree met while repeatedly deleting a min-degree vertex."""
    deg = list(G.degrees)
    mult = G.multiplicity
    alive = set(range(G.n))
    best = 0
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        best = max(best, deg[v])
        alive.remove(v)
        for w in G.neighbors[v]:
            if w in alive:
                deg[w] -= mult[(min(v, w), max(v, w))]
    return best


def girth(G: Multigraph) -> int | None:
    """Length of a shortest cycle, 2 for a parallel pair, None if acyclic."""
    if not G.is_simple():
        return 2
    best = None
    for a, b in G.edges:
        # shortest a-b path avoiding the edge ab closes a cycle through it
        dist = {a: 0}
        queue = deque([a])
        while queue and b not in dist:
            x = queue.popleft()
            for y in G.neighbors[x]:
                if y in dist or (x == a and y == b):
                    continue
                dist[y] = dist[x] + 1
                queue.append(y)
        if b in dist:
            length = dist[b] + 1
            if best is None or length < best:
                best = length
    return best


def graph_stats(G: Multigraph) -> GraphStats:
    return GraphStats(
        n=G.n,
        l=G.l,
        degeneracy=degeneracy(G),
        girth=girth(G),
        components=len(G.components()),
        simple=G.is_simple(),
    )


# --------------------------------------------------------------------------
# proper colourings and the chromatic polynomial


def count_proper_colorings(G: Multigraph, m: int, max_states=MAX_STATES) -> int:
    """Count proper m-colourings by backtracking; the oracle for deletion-contraction."""
    check_states("proper colouring enumeration", m**G.n, max_states)
    return sum(1 for _ in _proper_colorings(G, m))


def _proper_colorings(G: Multigraph, m: int):
    n = G.n
    earlier = [[w for w in G.neighbors[v] if w < v] for v in range(n)]
    col = [0] * n

    def rec(v):
        if v == n:
            yield tuple(col)
            return
        used = {col[w] for w in earlier[v]}
        for c in range(m):
            if c not in used:
                col[v] = c
                yield from rec(v + 1)

    yield from rec(0)


def chromatic_poly_eval(G: Multigraph, m: int) -> int:
    """``P(G, m)`` by memoized deletion-contraction on the underlying simple graph."""
    if m < 1:
        raise ValueError("m must be positive")
    edges = frozenset(underlying_simple(G).edges)
    return _chrom(G.n, edges, m, {})


def _chrom(n: int, edges: frozenset, m: int, memo: dict) -> int:
    if not edges:
        return m**n
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)

    # isolated vertices and components factor out
    active = [v for v in range(n) if adj[v]]
    iso = n - len(active)
    comps = _simple_components(active, adj)
    if iso or len(comps) > 1:
        out = m**iso
        for comp in comps:
            idx = {v: i for i, v in enumerate(comp)}
            sub = frozenset((idx[u], idx[v]) for u, v in edges if u in idx)
            out *= _chrom(len(comp), sub, m, memo)
            if out == 0:
                return 0
        return out

    # n >= 2, connected, no isolated vertices
    l = len(edges)
    if l == n - 1:
        return m * (m - 1) ** (n - 1)
    if l == n * (n - 1) // 2:
        return math.prod(m - i for i in range(n))
    if l == n and all(len(a) == 2 for a in adj):
        return (m - 1) ** n + (-1) ** n * (m - 1)
    leaf = next((v for v in range(n) if len(adj[v]) == 1), None)
    if leaf is not None:
        keep = [v for v in range(n) if v != leaf]
        idx = {v: i for i, v in enumerate(keep)}
        sub = frozenset((idx[u], idx[v]) for u, v in edges if leaf not in (u, v))
        return (m - 1) * _chrom(n - 1, sub, m, memo)

    key = _canonical_key(n, edges, adj)
    hit = memo.get(key)
    if hit is not None:
        return hit

    # split on an edge at a vertex of maximum degree
    hub = max(range(n), key=lambda v: (len(adj[v]), -v))
    other = max(adj[hub], key=lambda v: (len(adj[v]), -v))
    e = (min(hub, other), max(hub, other))
    deleted = edges - {e}
    keep_v, drop_v = e
    contracted = set()
    for u, v in deleted:
        u = keep_v if u == drop_v else u
        v = keep_v if v == drop_v else v
        if u != v:
            contracted.add((min(u, v), max(u, v)))
    relabel = {v: (v if v < drop_v else v - 1) for v in range(n) if v != drop_v}
    contracted = frozenset((relabel[u], relabel[v]) for u, v in contracted)
    val = _chrom(n, deleted, m, memo) - _chrom(n - 1, contracted, m, memo)
    memo[key] = val
    return val


def _simple_components(vertices, adj):
    seen = set()
    comps = []
    for s in vertices:
        if s in seen:
            continue
        seen.add(s)
        comp, stack = [], [s]
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def _canonical_key(n, edges, adj):
    # A relabelling computed from the graph itself yields an isomorphic graph,
    # so equal keys imply equal chromatic polynomials (sound, not complete).
    sig = {v: (len(adj[v]), tuple(sorted(len(adj[w]) for w in adj[v]))) for v in range(n)}
    order = sorted(range(n), key=lambda v: (sig[v], v))
    pos = {v: i for i, v in enumerate(order)}
    return n, tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in edges))


def is_uniquely_k_colorable(G: Multigraph, k: int, max_states=MAX_STATES) -> bool:
    """True iff all proper k-colourings induce one and the same vertex partition.

    When chi(G) < k some colourings leave a colour unused; their partitions
    have fewer than k classes and are counted like any other.
    """
    check_states("uniquely-colourable check", k**G.n, max_states)
    partitions = set()
    for col in _proper_colorings(underlying_simple(G), k):
        classes = {}
        for v, c in enumerate(col):
            classes.setdefault(c, []).append(v)
        partitions.add(frozenset(frozenset(cl) for cl in classes.values()))
        if len(partitions) > 1:
            return False
    return len(partitions) == 1


def uniquely_colorable_edge_bound(n: int, k: int) -> int:
    """Minimum edge count of a uniquely k-colourable graph on n vertices."""
    if not n >= k >= 1:
        raise ValueError("need n >= k >= 1")
    return (k - 1) * n - k * (k - 1) // 2


# --------------------------------------------------------------------------
# generators
#
# Numbering conventions (cover files depend on them):
#   joins K1 v X        hub is vertex 0, X follows as 1..|X|
#   hk(k)               hub 0, path 1..2k+2 in path order, z = 2k+3;
#                       edges: spokes, then path edges, then z's two edges
#   theta(l1..lr)       ends 0 and 1, internal vertices path by path
#   dodecahedron        outer 5-cycle 0..4, middle 10-cycle 5..14,
#                       inner 5-cycle 15..19


def edgeless(n: int) -> Multigraph:
    return Multigraph(n, ())


def digon() -> Multigraph:
    return Multigraph(2, ((0, 1), (0, 1)))


def path(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Multigraph:
    """C_n; ``cycle(2)`` is the digon."""
    if n < 2:
        raise ValueError("a cycle needs at least 2 vertices")
    return Multigraph(n, tuple((i, i + 1) for i in range(n - 1)) + ((0, n - 1),))


def complete(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def join_vertex(G: Multigraph) -> Multigraph:
    """``K1 v G`` with the new hub as vertex 0; spokes come first."""
    spokes = tuple((0, v + 1) for v in range(G.n))
    return Multigraph(G.n + 1, spokes + tuple((u + 1, v + 1) for u, v in G.edges))


def wheel_even(k: int) -> Multigraph:
    """``K1 v C_{2k+2}``: 2k+3 vertices and 4k+4 edges."""
    if k < 1:
        raise ValueError("k must be positive")
    return join_vertex(cycle(2 * k + 2))


def hk(k: int) -> Multigraph:
    """``K1 v P_{2k+2}`` plus a vertex z joined to both path ends."""
    if k < 1:
        raise ValueError("k must be positive")
    base = join_vertex(path(2 * k + 2))
    z = base.n
    return Multigraph(z + 1, base.edges + ((1, z), (2 * k + 2, z)))


def theta(*lengths: int) -> Multigraph:
    """Generalized theta graph: ends 0 and 1 joined by paths of the given lengths."""
    if len(lengths) < 1 or any(x < 1 for x in lengths):
        raise ValueError("theta needs positive path lengths")
    if sum(1 for x in lengths if x == 1) > 1:
        raise ValueError("theta allows at most one path of length 1")
    edges = []
    nxt = 2
    for length in lengths:
        prev = 0
        for _ in range(length - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    return Multigraph(nxt, tuple(edges))


def dodecahedron() -> Multigraph:
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((i, 5 + 2 * i))
    for j in range(10):
        edges.append((5 + j, 5 + (j + 1) % 10))
    for i in range(5):
        edges.append((15 + i, 15 + (i + 1) % 5))
        edges.append((5 + 2 * i + 1, 15 + i))
    return Multigraph(20, tuple(edges))


FAMILIES = {
    "edgeless": (edgeless, 1),
    "digon": (digon, 0),
    "cycle": (cycle, 1),
    "path": (path, 1),
    "complete": (complete, 1),
    "wheel_even": (wheel_even, 1),
    "hk": (hk, 1),
    "theta": (theta, None),
    "dodecahedron": (dodecahedron, 0),
    "c5": (lambda: cycle(5), 0),
}


def family_generate(name: str, params: Sequence[int] = ()) -> Multigraph:
    try:
        fn, arity = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None
    params = [int(p) for p in params]
    if arity is not None and len(params) != arity:
        raise ValueError(f"family {name!r} takes {arity} parameter(s), got {len(params)}")
    if any(p < 1 for p in params) and name != "edgeless":
        raise ValueError("family parameters must be positive")
    if name == "edgeless" and params[0] < 0:
        raise ValueError("edgeless needs n >= 0")
    return fn(*params)


def random_multigraph(rng, n: int, l: int, simple: bool = False) -> Multigraph:
    """Random loopless multigraph with ``l`` edges drawn from ``rng`` (a random.Random)."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if not pairs:
        return Multigraph(n, ())
    if simple:
        return Multigraph(n, tuple(sorted(rng.sample(pairs, min(l, len(pairs))))))
    return Multigraph(n, tuple(rng.choice(pairs) for _ in range(l)))


def edges_between(G: Multigraph, u: int, v: int) -> list[int]:
    """Indices of the edges joining u and v (``E_G(u, v)``)."""
    a, b = min(u, v), max(u, v)
    return [i for i, e in enumerate(G.edges) if e == (a, b)]


def from_edges(n: int, edges: Iterable[Edge]) -> Multigraph:
    return Multigraph(n, tuple(edges))
