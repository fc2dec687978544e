"""Reference-value checks, run by ``dpc verify paper-suite``.

Each check records the expected value, the value computed here, and whether
they agree.  Expected values are either quoted results or closed forms; every
actual value comes from the library routines.
"""

from __future__ import annotations

import math

from .algebra import build_polynomial, count_nonzeros, factor_to_perm, observation_holds, perm_to_factor
from .bounds import (
    chi_dp_upper_from_degeneracy,
    corollary9_bound,
    corollary9_ceiling,
    lemma8_check,
    planar_girth5_ceiling,
    theorem5_ceiling,
)
from .cover import FullCover, Permutation, all_perms, count_colorings
from .graph import (
    chromatic_poly_eval,
    complete,
    cycle,
    degeneracy,
    digon,
    edgeless,
    hk,
    is_uniquely_k_colorable,
    path,
    theta,
    uniquely_colorable_edge_bound,
    wheel_even,
)
from .search import compare_chromatic, pdp_exact, verify_theorem5


def _check(name, expected, actual):
    return {"name": name, "expected": expected, "actual": actual, "passed": expected == actual}


def reference_suite(max_k: int = 2, threads: int = 1) -> list[dict]:
    out = []
    add = out.append
    pdp = lambda G: pdp_exact(G, 3, threads=threads, early_exit=False).value  # noqa: E731

    # chromatic polynomial closed forms
    add(_check("P(K3,3)", 6, chromatic_poly_eval(complete(3), 3)))
    add(_check("P(P3,3)", 12, chromatic_poly_eval(path(3), 3)))
    kn = all(
        chromatic_poly_eval(complete(n), m) == math.prod(m - i for i in range(n))
        for n in range(1, 7)
        for m in range(1, 6)
    )
    add(_check("P(K_n,m) falling factorial, n<=6, m<=5", True, kn))
    tree = all(chromatic_poly_eval(path(n), m) == m * (m - 1) ** (n - 1) for n in range(1, 7) for m in range(1, 6))
    add(_check("P(T,m) = m(m-1)^(n-1) on paths, n<=6, m<=5", True, tree))

    # covers and the F3 correspondence
    D = digon()
    shifted = FullCover(3, (Permutation.identity(3), Permutation.shift(3, 1)))
    add(_check("digon {id,+1} colourings", 3, count_colorings(D, shifted)))
    add(_check("digon {id,+1} polynomial non-zeros", 3, count_nonzeros(build_polynomial(D, shifted))))
    obs = all(observation_holds(Permutation(3, p)) for p in all_perms(3))
    add(_check("every permutation of F3 is a shift or reflection", True, obs))
    pairs = {(f.c, f.a) for f in (perm_to_factor(Permutation(3, p), 0, 1) for p in all_perms(3))}
    add(_check("(c,a) encoding is bijective", 6, len(pairs)))
    rt = all(factor_to_perm(perm_to_factor(Permutation(3, p), 0, 1)).images == p for p in all_perms(3))
    add(_check("perm -> factor -> perm roundtrip", True, rt))

    # bounds
    add(_check("t^((S-n-d)/(t-1)) with S=18, n=6, d=9, t=3: 3^(3/2)", round(3**1.5, 9), round(corollary9_bound(18, 6, 9, 3), 9)))
    add(_check("ceil t^((S-n-d)/(t-1)) with S=18, n=6, d=9, t=3", 6, corollary9_ceiling(18, 6, 9, 3)))
    add(_check("ceil 3^(n-l/2), n=6, l=9", 6, theorem5_ceiling(6, 9)))
    add(_check("ceil 3^(n-l/2), n=5, l=8", 3, theorem5_ceiling(5, 8)))
    add(_check("ceil 3^(n-l/2), n=3, l=0", 27, theorem5_ceiling(3, 0)))
    add(_check("C5 planar girth-5 ceiling 3^(5/6)", 3, planar_girth5_ceiling(5)))
    add(_check("P_DP(C5,3) >= ceil 3^(5/6)", True, pdp(cycle(5)) >= planar_girth5_ceiling(5)))

    # tightness examples
    add(_check("P_DP(digon,3)", 3, pdp(D)))
    for n in range(0, 6):
        add(_check(f"P_DP(edgeless({n}),3)", 3**n, pdp(edgeless(n))))
    for k in range(1, max_k + 1):
        W = wheel_even(k)
        add(_check(f"|V|,|E| of K1 v C_{2 * k + 2}", [2 * k + 3, 4 * k + 4], [W.n, W.l]))
        add(_check(f"P_DP(K1 v C_{2 * k + 2},3)", 3, pdp(W)))

    # the H_k family
    for k in range(1, max_k + 1):
        H = hk(k)
        add(_check(f"|V|,|E| of H_{k}", [2 * k + 4, 4 * k + 5], [H.n, H.l]))
        add(_check(f"H_{k} is 2-degenerate", 2, degeneracy(H)))
        add(_check(f"H_{k} uniquely 3-colourable", True, is_uniquely_k_colorable(H, 3)))
        add(_check(f"|E(H_{k})| >= uniquely-colourable bound", True, H.l >= uniquely_colorable_edge_bound(H.n, 3)))
        add(_check(f"chi_DP(H_{k}) upper bound from degeneracy", 3, chi_dp_upper_from_degeneracy(H)))
        rep = lemma8_check(H, cross_check=False)
        add(_check(f"2n-3 criterion applies to H_{k}", 6, rep.conclusion))
        add(_check(f"P(H_{k},3)", 6, chromatic_poly_eval(H, 3)))
        add(_check(f"P_DP(H_{k},3)", 6, pdp(H)))

    # generalized theta with equality at m = 3
    T = theta(2, 3, 3, 3, 2)
    add(_check("P_DP(theta(2,3,3,3,2),3) = P(theta(2,3,3,3,2),3)", chromatic_poly_eval(T, 3), pdp(T)))

    # the 3^(n-l/2) verifier end to end
    for name, G in (("K1 v C4", wheel_even(1)), ("H_1", hk(1))):
        rep = verify_theorem5(G, threads=threads)
        add(_check(f"3^(n-l/2) bound on {name} (status, tight)", ["pass", True], [rep.status, rep.tight]))
    cmp = compare_chromatic(hk(1), 3, threads=threads)
    add(_check("P_DP(H_1,3) vs P(H_1,3)", "=", cmp.relation))
    cmp = compare_chromatic(cycle(4), 3, threads=threads)
    add(_check("P_DP(C4,3) vs P(C4,3)", [15, 18, "<"], [cmp.pdp, cmp.chromatic, cmp.relation]))
    return out
