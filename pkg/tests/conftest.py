"""Independent oracles: flat enumeration with no pruning, ordering or bitsets."""

import itertools
import random

import pytest

from dpcolor.graph import Multigraph


def brute_proper(G, m):
    return sum(
        all(x[u] != x[v] for u, v in G.edges)
        for x in itertools.product(range(m), repeat=G.n)
    )


def brute_cover_count(G, C):
    return sum(
        all(x[v] != p.images[x[u]] for (u, v), p in zip(G.edges, C.perms))
        for x in itertools.product(range(C.m), repeat=G.n)
    )


def brute_list_count(G, lists):
    return sum(
        all(c[u] != c[v] for u, v in G.edges)
        for c in itertools.product(*[sorted(L) for L in lists])
    )


def random_graph(rng, max_n=6, max_l=None, simple=False):
    n = rng.randint(1, max_n)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if not pairs:
        return Multigraph(n, ())
    cap = max_l if max_l is not None else 2 * n
    l = rng.randint(0, min(cap, len(pairs)) if simple else cap)
    if simple:
        return Multigraph(n, tuple(sorted(rng.sample(pairs, l))))
    return Multigraph(n, tuple(rng.choice(pairs) for _ in range(l)))


@pytest.fixture
def rng():
    return random.Random(20240917)


# --------------------------------------------------------------------------
# one PASS/FAIL line per acceptance criterion, printed after the run

_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    num = getattr(item.function, "criterion", None)
    if num is None or report.when == "teardown":
        return
    if report.when == "setup" and report.passed:
        return
    detail = dict(item.user_properties).get("detail", "")
    title = item.function.__doc__.strip().splitlines()[0]
    _CRITERIA[num] = (report.passed, title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        ok, title, detail = _CRITERIA[num]
        line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {title}"
        tr.write_line(f"{line}  [{detail}]" if detail else line)
