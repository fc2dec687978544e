"""Lower bounds on non-zeros of grid polynomials and on DP colouring counts.

Real-valued bounds are returned as floats for display only.  Every decision
uses an exact integer ceiling: ``ceil_power(b, p, q)`` is the least integer
``x`` with ``x**q >= b**p``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

from . import _engine
from .cover import GaugeFixedCovers
from .errors import BudgetExceeded, HypothesisError, InstanceTooLarge
from .graph import (
    Multigraph,
    chromatic_poly_eval,
    degeneracy,
    is_uniquely_k_colorable,
    uniquely_colorable_edge_bound,
)
from .guards import MAX_COVERS, MAX_STATES, check_states


def iroot(N: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer."""
    if N < 0 or k < 1:
        raise ValueError("need N >= 0 and k >= 1")
    if N < 2 or k == 1:
        return N
    x = 1 << -(-N.bit_length() // k)  # >= true root
    while True:
        y = ((k - 1) * x + N // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def ceil_power(base: int, num: int, den: int) -> int:
    """Least integer x with ``x**den >= base**num`` (i.e. ceil of base**(num/den))."""
    if num < 0:
        raise ValueError("exponent must be non-negative")
    N = base**num
    r = iroot(N, den)
    return r if r**den == N else r + 1


# --------------------------------------------------------------------------
# Alon-Furedi


@dataclass(frozen=True)
class AFInstance:
    sizes: tuple[int, ...]
    d: int

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not self.sizes:
            raise ValueError("need at least one set size")
        if any(s < 1 for s in self.sizes) or self.d < 0:
            raise ValueError("sizes must be >= 1 and d >= 0")

    @property
    def S(self) -> int:
        return sum(self.sizes)

    @property
    def t(self) -> int:
        return max(self.sizes)


def alon_furedi_min(sizes: Sequence[int] | AFInstance, d: int | None = None) -> int:
    """Least ``prod(q)`` over integers ``1 <= q_i <= sizes[i]`` with
    ``sum(q) >= sum(sizes) - d``.

    Dynamic program over the running sum, capped at the target because any
    larger sum is equally feasible; each state keeps its least product.
    """
    inst = sizes if isinstance(sizes, AFInstance) else AFInstance(tuple(sizes), d)
    target = inst.S - inst.d
    best = {0: 1}
    for s in inst.sizes:
        nxt: dict = {}
        for total, prod in best.items():
            for q in range(1, s + 1):
                key = min(total + q, max(target, 0))
                val = prod * q
                if val < nxt.get(key, val + 1):
                    nxt[key] = val
        best = nxt
    return min(v for k, v in best.items() if k >= target)


def alon_furedi_bruteforce(sizes: Sequence[int], d: int) -> int:
    target = sum(sizes) - d
    return min(
        math.prod(q)
        for q in itertools.product(*(range(1, s + 1) for s in sizes))
        if sum(q) >= target
    )


def corollary9_bound(S: int, n: int, d: int, t: int) -> float:
    """``t ** ((S - n - d) / (t - 1))``, a closed-form Alon-Furedi lower bound."""
    _corollary9_check(S, n, d, t)
    return float(t) ** ((S - n - d) / (t - 1))


def corollary9_ceiling(S: int, n: int, d: int, t: int) -> int:
    _corollary9_check(S, n, d, t)
    return ceil_power(t, S - n - d, t - 1)


def _corollary9_check(S, n, d, t):
    if t < 2:
        raise HypothesisError(f"need t >= 2, got t = {t}")
    if S < n + d:
        raise HypothesisError(f"need S >= n + d, got S = {S}, n + d = {n + d}")


def theorem5_bound(n: int, l: int) -> float:
    """``3 ** (n - l/2)``: fewest colourings of a full 3-fold cover when
    ``2n >= l`` and chi_DP <= 3."""
    if 2 * n < l:
        raise HypothesisError(f"bound needs 2n >= l, got n = {n}, l = {l}")
    return 3.0 ** (n - l / 2)


def theorem5_ceiling(n: int, l: int) -> int:
    if 2 * n < l:
        raise HypothesisError(f"bound needs 2n >= l, got n = {n}, l = {l}")
    return ceil_power(3, 2 * n - l, 2)


def planar_girth5_bound(n: int) -> float:
    return 3.0 ** (n / 6)


def planar_girth5_ceiling(n: int) -> int:
    return ceil_power(3, n, 6)


def older_planar_bound(n: int) -> float:
    """``2 ** ((n + 890) / 292)``; reported next to the 3**(n/6) bound for comparison."""
    return 2.0 ** ((n + 890) / 292)


# --------------------------------------------------------------------------
# DP-chromatic number


def chi_dp_upper_from_degeneracy(G: Multigraph) -> int:
    return degeneracy(G) + 1


def verify_chi_dp_le(G: Multigraph, m: int, max_covers=MAX_COVERS, max_states=MAX_STATES) -> bool:
    """True iff every full m-fold cover of G has a colouring.

    Twisting preserves colouring counts, so the gauge-fixed covers suffice.
    """
    total = len(GaugeFixedCovers(G, m))
    check_states("gauge-fixed covers", total, max_covers)
    if not _engine.use_grid(G, m):
        check_states("colouring grid", m**G.n, max_states)
    best, _, _ = _engine.scan(G, m, 0, total, stop_at=0)
    return best > 0


def chi_dp_le_3_evidence(G: Multigraph, max_covers=MAX_COVERS, max_states=MAX_STATES) -> str | None:
    """How ``chi_DP(G) <= 3`` was established: 'degeneracy', 'exhaustive',
    'refuted', or None when the exhaustive check is over budget."""
    if degeneracy(G) <= 2:
        return "degeneracy"
    try:
        return "exhaustive" if verify_chi_dp_le(G, 3, max_covers, max_states) else "refuted"
    except InstanceTooLarge:
        return None


# --------------------------------------------------------------------------
# reports


@dataclass
class BoundReport:
    n: int
    l: int
    theorem5_value: float | None
    integer_bound: int | None
    corollary9_value: float | None
    af_exact: int
    hypotheses: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def bound_report(G: Multigraph) -> BoundReport:
    """Alon-Furedi data for the cover polynomial of G (grid F3^n, degree l)."""
    n, l = G.n, G.l
    ok = 2 * n >= l
    deg = degeneracy(G)
    return BoundReport(
        n=n,
        l=l,
        theorem5_value=theorem5_bound(n, l) if ok else None,
        integer_bound=theorem5_ceiling(n, l) if ok else None,
        corollary9_value=corollary9_bound(3 * n, n, l, 3) if ok and n else None,
        af_exact=alon_furedi_min([3] * n, l) if n else 1,
        hypotheses={
            "two_n_ge_l": ok,
            "equality_case": 2 * n == l,
            "degeneracy": deg,
            "chi_dp_le_3_by_degeneracy": deg <= 2,
        },
    )


@dataclass
class Lemma8Report:
    n: int
    l: int
    edge_count_ok: bool
    edge_bound_ok: bool
    uniquely_3_colorable: bool | None
    chi_ge_3: bool
    chi_dp_le_3: bool | None
    chi_dp_evidence: str | None
    chromatic_value: int
    holds: bool | None
    conclusion: int | None
    pdp_exact: int | None = None
    consistent: bool | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def lemma8_check(G: Multigraph, cross_check=True, max_covers=MAX_COVERS, max_states=MAX_STATES) -> Lemma8Report:
    """Decide whether the 2n-3 edge criterion forces ``P_DP(G,3) = P(G,3) = 6``.

    Hypotheses that cannot be checked within the guards are reported as None.
    """
    n, l = G.n, G.l
    try:
        unique = is_uniquely_k_colorable(G, 3, max_states)
    except InstanceTooLarge:
        unique = None
    chi_ge_3 = chromatic_poly_eval(G, 2) == 0
    evidence = chi_dp_le_3_evidence(G, max_covers, max_states)
    chi_dp = None if evidence is None else evidence != "refuted"
    edge_ok = l == 2 * n - 3
    bound_ok = n >= 3 and l >= uniquely_colorable_edge_bound(n, 3)
    flags = [unique, chi_ge_3, chi_dp, edge_ok]
    if any(f is False for f in flags):
        holds = False
    elif any(f is None for f in flags):
        holds = None
    else:
        holds = True
    if holds and not bound_ok:
        # a uniquely 3-colourable graph always meets the edge bound
        raise AssertionError("uniquely 3-colourable graph below the edge bound")
    report = Lemma8Report(
        n=n,
        l=l,
        edge_count_ok=edge_ok,
        edge_bound_ok=bound_ok,
        uniquely_3_colorable=unique,
        chi_ge_3=chi_ge_3,
        chi_dp_le_3=chi_dp,
        chi_dp_evidence=evidence,
        chromatic_value=chromatic_poly_eval(G, 3),
        holds=holds,
        conclusion=6 if holds else None,
    )
    if cross_check:
        from .search import pdp_exact

        try:
            res = pdp_exact(G, 3, max_covers=max_covers, max_states=max_states)
        except (BudgetExceeded, InstanceTooLarge):
            res = None
        if res is not None:
            report.pdp_exact = res.value
            if holds:
                report.consistent = res.value == 6 == report.chromatic_value
    return report
