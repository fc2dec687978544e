"""F3 polynomials attached to full 3-fold covers.

Every permutation of F3 is either a shift ``z -> z - a`` or a reflection
``z -> a - z``, so the pairs it matches are the zero set of one linear form
``x_i + (-1)**c * x_j - a``.  The product of these forms over all edges is
non-zero at a point of F3^n exactly when the point is a colouring of the cover.

Field elements are plain ints in ``{0, 1, 2}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .cover import FullCover, Permutation
from .errors import UnsupportedModulus
from .graph import Multigraph
from .guards import MAX_STATES, check_states

P = 3


@dataclass(frozen=True)
class LinearFactor:
    """``x_i + (-1)**c * x_j - a`` over F3, with ``i < j``."""

    i: int
    j: int
    c: int
    a: int

    def __post_init__(self):
        if not self.i < self.j:
            raise ValueError("linear factor needs i < j")
        if self.c not in (0, 1) or self.a not in (0, 1, 2):
            raise ValueError("c must be 0/1 and a an element of F3")

    @property
    def sign(self) -> int:
        return 1 if self.c == 0 else P - 1

    def __call__(self, point) -> int:
        return (point[self.i] + self.sign * point[self.j] - self.a) % P


@dataclass(frozen=True)
class CoverPolynomial:
    n: int
    factors: tuple[LinearFactor, ...] = ()

    @property
    def degree(self) -> int:
        """Formal degree: the number of linear factors."""
        return len(self.factors)

    def __call__(self, point) -> int:
        return evaluate(self, point)


@dataclass(frozen=True)
class ReducedPoly:
    """Sparse polynomial with every exponent at most 2, value-equal on F3^n."""

    n: int
    terms: dict = field(default_factory=dict)  # exponent tuple -> coefficient in {1, 2}

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __eq__(self, other):
        return isinstance(other, ReducedPoly) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))


def perm_to_factor(sigma: Permutation, i: int, j: int) -> LinearFactor:
    """The linear factor vanishing at ``(x_i, x_j)`` exactly when ``sigma(x_i) == x_j``."""
    if sigma.m != P:
        raise UnsupportedModulus(f"linear factors exist only for m = 3, got m = {sigma.m}")
    if not i < j:
        raise ValueError("need i < j")
    imgs = sigma.images
    # a shift has z - sigma(z) constant, a reflection has z + sigma(z) constant
    diffs = {(z - imgs[z]) % P for z in range(P)}
    if len(diffs) == 1:
        return LinearFactor(i, j, 1, diffs.pop())
    sums = {(z + imgs[z]) % P for z in range(P)}
    if len(sums) == 1:
        return LinearFactor(i, j, 0, sums.pop())
    raise AssertionError(f"{imgs} is neither a shift nor a reflection of F3")


def factor_to_perm(f: LinearFactor) -> Permutation:
    # x_j = (a - x_i) * (-1)**c
    return Permutation(P, tuple(((f.a - z) * f.sign) % P for z in range(P)))


def build_polynomial(G: Multigraph, C: FullCover) -> CoverPolynomial:
    if C.m != P:
        raise UnsupportedModulus(f"cover polynomials need fold size 3, got {C.m}")
    C.check(G)
    return CoverPolynomial(
        G.n, tuple(perm_to_factor(s, u, v) for (u, v), s in zip(G.edges, C.perms))
    )


def evaluate(p: CoverPolynomial | ReducedPoly, point) -> int:
    if len(point) != p.n:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {p.n} variables")
    point = [int(x) % P for x in point]
    if isinstance(p, CoverPolynomial):
        out = 1
        for f in p.factors:
            out = out * f(point) % P
            if out == 0:
                return 0
        return out
    total = 0
    for exps, coef in p.terms.items():
        term = coef
        for x, e in zip(point, exps):
            if e:
                term *= x**e
        total += term
    return total % P


def grid(n: int) -> np.ndarray:
    """All points of F3^n, one per row, in lexicographic (ternary) order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    axes = np.indices((P,) * n, dtype=np.int8)
    return axes.reshape(n, -1).T


def values_on_grid(p: CoverPolynomial, max_states=MAX_STATES) -> np.ndarray:
    check_states("F3 grid evaluation", P**p.n, max_states)
    pts = grid(p.n).astype(np.int16)
    vals = np.ones(len(pts), dtype=np.int16)
    for f in p.factors:
        vals = vals * ((pts[:, f.i] + f.sign * pts[:, f.j] - f.a) % P) % P
    return vals


def count_nonzeros(p: CoverPolynomial, max_states=MAX_STATES) -> int:
    """Number of points of F3^n where ``p`` does not vanish."""
    return int(np.count_nonzero(values_on_grid(p, max_states)))


def _reduce_exp(e: int) -> int:
    # x**3 = x on F3
    while e > 2:
        e -= 2
    return e


def expand_reduced(p: CoverPolynomial) -> ReducedPoly:
    terms = {(0,) * p.n: 1}
    for f in p.factors:
        lin = (
            ((f.i, 1), 1),
            ((f.j, 1), f.sign),
            ((None, 0), (-f.a) % P),
        )
        out: dict = {}
        for exps, coef in terms.items():
            for (var, _), lc in lin:
                if lc == 0:
                    continue
                if var is None:
                    key = exps
                else:
                    key = list(exps)
                    key[var] = _reduce_exp(key[var] + 1)
                    key = tuple(key)
                out[key] = (out.get(key, 0) + coef * lc) % P
        terms = {k: v for k, v in out.items() if v}
    return ReducedPoly(p.n, terms)


def format_factors(p: CoverPolynomial) -> str:
    return "".join(f"{f.i} {f.j} {f.c} {f.a}\n" for f in p.factors)


def format_reduced(r: ReducedPoly) -> str:
    """One ``e_0 ... e_{n-1} : coefficient`` line per monomial, sorted."""
    return "".join(
        " ".join(map(str, exps)) + f" : {coef}\n" for exps, coef in sorted(r.terms.items())
    )


def observation_holds(sigma: Permutation) -> bool:
    """Either z - sigma(z) or z + sigma(z) is constant over F3."""
    imgs = sigma.images
    return (
        len({(z - imgs[z]) % P for z in range(P)}) == 1
        or len({(z + imgs[z]) % P for z in range(P)}) == 1
    )


def all_factor_pairs():
    return list(itertools.product((0, 1), range(P)))
