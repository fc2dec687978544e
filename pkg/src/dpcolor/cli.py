"""``dpc`` command line.

Exit codes: 0 success, 1 a verification failed, 2 usage error,
3 refused by an enumeration guard or budget.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from . import algebra, bounds, cover, graph, search
from .errors import BudgetExceeded, CoverParseError, GraphParseError, HypothesisError, InstanceTooLarge
from .guards import MAX_COVERS, MAX_STATES

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument plumbing


def _graph_options(p):
    g = p.add_argument_group("graph")
    g.add_argument("--graph", metavar="PATH", help="graph file")
    g.add_argument("--family", choices=sorted(graph.FAMILIES), help="named generator")
    g.add_argument("--k", type=int, help="family parameter for hk / wheel_even")
    g.add_argument("--n", type=int, help="family parameter for edgeless / cycle / path / complete")
    g.add_argument("--lengths", help="comma-separated path lengths for theta")


def _limit_options(p):
    p.add_argument("--max-states", type=int, default=MAX_STATES)
    p.add_argument("--max-covers", type=int, default=MAX_COVERS)


def _load_graph(args) -> graph.Multigraph:
    if args.graph and args.family:
        raise UsageError("give either --graph or --family, not both")
    if args.graph:
        return graph.read_graph(args.graph)
    if not args.family:
        raise UsageError("a graph is required (--graph PATH or --family NAME)")
    fam = args.family
    if fam in ("hk", "wheel_even"):
        params = [args.k]
    elif fam in ("edgeless", "cycle", "path", "complete"):
        params = [args.n]
    elif fam == "theta":
        if not args.lengths:
            raise UsageError("theta needs --lengths")
        params = [int(x) for x in args.lengths.split(",")]
    else:
        params = []
    if any(p is None for p in params):
        raise UsageError(f"family {fam} needs {'--k' if fam in ('hk', 'wheel_even') else '--n'}")
    try:
        return graph.family_generate(fam, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_cover(args, G) -> cover.FullCover:
    if getattr(args, "cover", None):
        C = cover.read_cover(args.cover)
    elif getattr(args, "seed", None) is not None and getattr(args, "random", False):
        C = cover.random_cover(G, args.m, args.seed)
    else:
        C = cover.identity_cover(G, args.m)
    try:
        C.check(G)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return C


def _graph_echo(G) -> dict:
    return {"n": G.n, "l": G.l, "hash": G.digest(), "stats": graph.graph_stats(G).as_dict()}


def _result_dict(res: search.PdpResult) -> dict:
    return {
        "value": res.value,
        "mode": res.mode,
        "m": res.m,
        "witness": cover.format_cover(res.witness),
        "witness_index": res.witness_index,
        "covers_examined": res.covers_examined,
    }


# --------------------------------------------------------------------------
# subcommands; each returns (exit code, report dict)


def cmd_stats(args):
    G = _load_graph(args)
    stats = graph.graph_stats(G).as_dict()
    return EXIT_OK, {"graph": _graph_echo(G), "results": {"stats": stats, "graph_file": graph.format_graph(G)}}


def cmd_chrom(args):
    G = _load_graph(args)
    results = {"m": args.m, "chromatic": graph.chromatic_poly_eval(G, args.m)}
    if args.oracle:
        results["enumerated"] = graph.count_proper_colorings(G, args.m, args.max_states)
        ok = results["enumerated"] == results["chromatic"]
        return (EXIT_OK if ok else EXIT_FAIL), {"graph": _graph_echo(G), "results": results}
    return EXIT_OK, {"graph": _graph_echo(G), "results": results}


def cmd_pdp(args):
    G = _load_graph(args)
    store = search.ResultCache(args.cache) if args.cache else None
    key = search.cache_key(G, args.m)
    timings = {}
    if args.heuristic:
        res = search.pdp_heuristic(G, args.m, args.iterations, args.seed)
    else:
        res = store.get(key) if store is not None else None
        if res is None or not res.exact:
            res = search.pdp_exact(
                G,
                args.m,
                max_covers=args.max_covers,
                max_states=args.max_states,
                threads=args.threads,
                early_exit=not args.no_early_exit,
            )
            if store is not None:
                store.put(key, res, G)
        else:
            timings["cache_hit"] = True
    timings["search_s"] = res.elapsed
    if args.witness_out:
        with open(args.witness_out, "w") as fh:
            fh.write(cover.format_cover(res.witness))
    return EXIT_OK, {"graph": _graph_echo(G), "results": _result_dict(res), "timings": timings}


def cmd_poly(args):
    G = _load_graph(args)
    args.m = 3
    C = _load_cover(args, G)
    p = algebra.build_polynomial(G, C)
    results = {"action": args.action, "degree": p.degree, "factors": algebra.format_factors(p)}
    if args.action == "count":
        results["nonzeros"] = algebra.count_nonzeros(p, args.max_states)
        results["colorings"] = cover.count_colorings(G, C, max_states=args.max_states)
        ok = results["nonzeros"] == results["colorings"]
        return (EXIT_OK if ok else EXIT_FAIL), {"graph": _graph_echo(G), "results": results}
    if args.action == "expand":
        r = algebra.expand_reduced(p)
        results["reduced"] = algebra.format_reduced(r)
        results["reduced_degree"] = r.degree
        results["monomials"] = len(r.terms)
    return EXIT_OK, {"graph": _graph_echo(G), "results": results}


def cmd_cover(args):
    G = _load_graph(args)
    if args.action == "enumerate":
        stream = cover.GaugeFixedCovers(G, args.m)
        shown = []
        for i in range(min(len(stream), args.limit)):
            C = stream[i]
            shown.append({"index": i, "cover": cover.format_cover(C), "colorings": cover.count_colorings(G, C, max_states=args.max_states)})
        results = {"total": len(stream), "free_edges": stream.free, "forest_edges": stream.forest, "covers": shown}
    elif args.action == "random":
        C = cover.random_cover(G, args.m, args.seed)
        results = {"seed": args.seed, "cover": cover.format_cover(C), "colorings": cover.count_colorings(G, C, max_states=args.max_states)}
    elif args.action == "count":
        C = _load_cover(args, G)
        results = {"cover": cover.format_cover(C), "colorings": cover.count_colorings(G, C, max_states=args.max_states)}
    else:  # twist
        C = _load_cover(args, G)
        if args.gauge:
            g = cover.Gauge(cover.read_cover(args.gauge).perms)
        else:
            g = cover.random_gauge(G.n, C.m, args.seed)
        T = cover.twist(C, g, G)
        before = cover.count_colorings(G, C, max_states=args.max_states)
        after = cover.count_colorings(G, T, max_states=args.max_states)
        results = {"cover": cover.format_cover(T), "colorings_before": before, "colorings_after": after}
        if before != after:
            return EXIT_FAIL, {"graph": _graph_echo(G), "results": results}
    return EXIT_OK, {"graph": _graph_echo(G), "results": results}


def cmd_bound(args):
    kind = args.kind
    if kind == "theorem5":
        val = bounds.theorem5_bound(args.n, args.l)
        results = {"value": val, "ceiling": bounds.theorem5_ceiling(args.n, args.l), "equality_case": 2 * args.n == args.l}
    elif kind == "corollary9":
        results = {
            "value": bounds.corollary9_bound(args.S, args.n, args.d, args.t),
            "ceiling": bounds.corollary9_ceiling(args.S, args.n, args.d, args.t),
        }
    elif kind == "af":
        sizes = [int(x) for x in args.sizes.split(",")]
        results = {"sizes": sizes, "d": args.d, "min_product": bounds.alon_furedi_min(sizes, args.d)}
    elif kind == "planar":
        results = {
            "value": bounds.planar_girth5_bound(args.n),
            "ceiling": bounds.planar_girth5_ceiling(args.n),
            "older_bound": bounds.older_planar_bound(args.n),
        }
    else:  # report
        G = _load_graph(args)
        rep = bounds.bound_report(G)
        return EXIT_OK, {"graph": _graph_echo(G), "results": rep.as_dict(), "hypotheses": rep.hypotheses}
    return EXIT_OK, {"results": {"kind": kind, **results}}


def cmd_chidp(args):
    G = _load_graph(args)
    ok = bounds.verify_chi_dp_le(G, args.m, args.max_covers, args.max_states)
    results = {"m": args.m, "chi_dp_le_m": ok, "degeneracy_bound": bounds.chi_dp_upper_from_degeneracy(G)}
    return EXIT_OK, {"graph": _graph_echo(G), "results": results}


def cmd_lemma8(args):
    G = _load_graph(args)
    rep = bounds.lemma8_check(G, cross_check=not args.no_cross_check, max_covers=args.max_covers, max_states=args.max_states)
    code = EXIT_FAIL if rep.consistent is False else EXIT_OK
    return code, {"graph": _graph_echo(G), "results": rep.as_dict()}


def cmd_compare(args):
    G = _load_graph(args)
    rep = search.compare_chromatic(G, args.m, max_covers=args.max_covers, max_states=args.max_states, threads=args.threads)
    return EXIT_OK, {"graph": _graph_echo(G), "results": rep.as_dict()}


def cmd_verify(args):
    from .suite import reference_suite

    checks = reference_suite(max_k=args.max_k, threads=args.threads)
    failed = [c for c in checks if not c["passed"]]
    results = {"checks": checks, "total": len(checks), "failed": len(failed)}
    return (EXIT_FAIL if failed else EXIT_OK), {"results": results}


def cmd_cache(args):
    store = search.ResultCache(args.cache)
    if args.action == "ls":
        rows = []
        for key in sorted(store.keys()):
            rec = store.record(key)
            rows.append({"key": key, "m": rec["m"], "value": rec["value"], "mode": rec["mode"]})
        return EXIT_OK, {"results": {"entries": rows}}
    status = store.validate(recompute=args.recompute)
    code = EXIT_OK if all(status.values()) else EXIT_FAIL
    return code, {"results": {"validated": status}}


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dpc", description="DP color function toolkit")
    ap.add_argument("--version", action="version", version=f"dpc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, graph_opts=True, limits=True):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        if graph_opts:
            _graph_options(p)
        if limits:
            _limit_options(p)
        p.set_defaults(func=fn)
        return p

    add("stats", cmd_stats, "structural statistics", limits=False)

    p = add("chrom", cmd_chrom, "chromatic polynomial value P(G, m)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="also count colourings by enumeration")

    p = add("pdp", cmd_pdp, "DP color function value P_DP(G, m)")
    p.add_argument("--m", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--heuristic", action="store_true")
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-early-exit", action="store_true")
    p.add_argument("--cache", metavar="PATH")
    p.add_argument("--witness-out", metavar="PATH")

    p = add("poly", cmd_poly, "cover polynomial over F3")
    p.add_argument("action", choices=["build", "count", "expand"])
    p.add_argument("--cover", metavar="PATH", help="cover file (default: identity cover)")
    p.add_argument("--random", action="store_true", help="use random_cover(--seed)")
    p.add_argument("--seed", type=int, default=0)

    p = add("cover", cmd_cover, "cover utilities")
    p.add_argument("action", choices=["enumerate", "random", "twist", "count"])
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--cover", metavar="PATH")
    p.add_argument("--random", action="store_true")
    p.add_argument("--gauge", metavar="PATH", help="gauge file: cover format, one line per vertex")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=20, help="covers listed by enumerate")

    p = add("bound", cmd_bound, "closed-form bounds", graph_opts=True, limits=False)
    p.add_argument("kind", choices=["theorem5", "corollary9", "af", "planar", "report"])
    p.add_argument("--l", type=int)
    p.add_argument("--S", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--sizes")

    p = add("chidp", cmd_chidp, "verify chi_DP(G) <= m exhaustively")
    p.add_argument("--m", type=int, required=True)

    p = add("lemma8", cmd_lemma8, "2n-3 edge criterion for P_DP(G,3) = P(G,3)")
    p.add_argument("--no-cross-check", action="store_true")

    p = add("compare", cmd_compare, "P_DP(G, m) against P(G, m)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)

    p = add("verify", cmd_verify, "run the reference-value suite", graph_opts=False, limits=False)
    p.add_argument("suite", choices=["paper-suite"])
    p.add_argument("--max-k", type=int, default=2)
    p.add_argument("--threads", type=int, default=1)

    p = add("cache", cmd_cache, "inspect the result cache", graph_opts=False, limits=False)
    p.add_argument("action", choices=["ls", "validate"])
    p.add_argument("--cache", metavar="PATH", required=True)
    p.add_argument("--recompute", action="store_true")
    return ap


def _check_bound_args(args):
    need = {
        "theorem5": ("n", "l"),
        "corollary9": ("S", "n", "d", "t"),
        "af": ("sizes", "d"),
        "planar": ("n",),
    }.get(args.kind, ())
    missing = [f"--{a}" for a in need if getattr(args, a) is None]
    if missing:
        raise UsageError(f"bound {args.kind} needs {' '.join(missing)}")


def run_command(argv, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        if args.command == "bound":
            _check_bound_args(args)
        code, report = args.func(args)
    except (UsageError, GraphParseError, CoverParseError, HypothesisError, ValueError, OSError) as exc:
        print(f"dpc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InstanceTooLarge, BudgetExceeded) as exc:
        print(f"dpc: refused: {exc}", file=sys.stderr)
        if isinstance(exc, BudgetExceeded) and args.json:
            partial = {"results": _result_dict(exc.partial), "status": "budget-exceeded"}
            _emit(partial, args, argv, t0, out)
        return EXIT_GUARD
    report["status"] = "ok" if code == EXIT_OK else "failed"
    _emit(report, args, argv, t0, out)
    return code


def _emit(report, args, argv, t0, out):
    report.setdefault("graph", None)
    report.setdefault("hypotheses", {})
    report.setdefault("results", {})
    report["tool_version"] = __version__
    report["command"] = list(argv)
    timings = dict(report.get("timings") or {})
    timings["total_s"] = time.perf_counter() - t0
    report["timings"] = timings
    if args.json:
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        _print_human(report, out)


def _print_human(report, out):
    if report.get("graph"):
        g = report["graph"]
        out.write(f"graph: n={g['n']} l={g['l']} hash={g['hash']}\n")
    res = report["results"]
    checks = res.get("checks")
    if checks is not None:
        width = max(len(c["name"]) for c in checks)
        for c in checks:
            mark = "PASS" if c["passed"] else "FAIL"
            out.write(f"{mark}  {c['name']:<{width}}  expected={c['expected']}  actual={c['actual']}\n")
        out.write(f"{res['total'] - res['failed']}/{res['total']} checks passed\n")
        return
    for key in sorted(res):
        val = res[key]
        if isinstance(val, str) and "\n" in val:
            out.write(f"{key}:\n")
            for line in val.rstrip("\n").splitlines():
                out.write(f"  {line}\n")
        else:
            out.write(f"{key}: {json.dumps(val) if isinstance(val, (dict, list)) else val}\n")
    out.write(f"status: {report['status']}\n")


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
