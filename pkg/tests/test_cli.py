import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from dpcolor.cli import run_command
from dpcolor.cover import format_cover, random_cover
from dpcolor.graph import cycle, format_graph, hk

SCHEMA = json.loads(resources.files("dpcolor").joinpath("report_schema.json").read_text())


def run(*argv):
    buf = io.StringIO()
    code = run_command(list(argv), buf)
    return code, buf.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    report = json.loads(text)
    jsonschema.validate(report, SCHEMA)
    return code, report


def test_pdp_hk1():
    code, rep = run_json("pdp", "--family", "hk", "--k", "1", "--m", "3", "--exact")
    assert code == 0 and rep["results"]["value"] == 6 and rep["results"]["mode"] == "exact"
    assert rep["graph"]["n"] == 6 and rep["graph"]["l"] == 9


def test_pdp_human_output():
    code, text = run("pdp", "--family", "cycle", "--n", "4", "--m", "3")
    assert code == 0 and "value: 15" in text and "status: ok" in text


def test_bound_cover_formula():
    code, rep = run_json("bound", "theorem5", "--n", "5", "--l", "8")
    assert code == 0
    assert rep["results"]["value"] == pytest.approx(3.0, abs=1e-12)
    assert rep["results"]["ceiling"] == 3


def test_bound_cover_formula_hypothesis():
    code, _ = run("bound", "theorem5", "--n", "2", "--l", "5")
    assert code == 2


@pytest.mark.parametrize(
    "argv,key,value",
    [
        (("bound", "af", "--sizes", "3,3,3,3", "--d", "3"), "min_product", 18),
        (("bound", "corollary9", "--S", "18", "--n", "6", "--d", "9", "--t", "3"), "ceiling", 6),
        (("bound", "planar", "--n", "20"), "ceiling", 39),
    ],
)
def test_bound_kinds(argv, key, value):
    code, rep = run_json(*argv)
    assert code == 0 and rep["results"][key] == value


def test_reference_suite():
    code, rep = run_json("verify", "paper-suite", "--max-k", "2")
    assert code == 0
    assert rep["results"]["failed"] == 0 and rep["results"]["total"] >= 40
    code, text = run("verify", "paper-suite", "--max-k", "1")
    assert code == 0 and "FAIL" not in text


@pytest.mark.parametrize(
    "argv",
    [
        ("pdp", "--m", "3"),
        ("pdp", "--family", "hk", "--m", "3"),
        ("pdp", "--family", "nope", "--m", "3"),
        ("bound", "af", "--sizes", "3,3"),
        ("stats", "--graph", "/nonexistent/graph.txt"),
        ("frobnicate",),
    ],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_guard_exit():
    assert run("pdp", "--family", "edgeless", "--n", "16", "--m", "3")[0] == 3
    assert run("pdp", "--family", "wheel_even", "--k", "1", "--m", "3", "--max-covers", "5")[0] == 3


def test_budget_partial_report():
    code, text = run("pdp", "--family", "wheel_even", "--k", "1", "--m", "3", "--max-covers", "5", "--json")
    assert code == 3
    rep = json.loads(text)
    jsonschema.validate(rep, SCHEMA)
    assert rep["status"] == "budget-exceeded" and rep["results"]["mode"] == "heuristic-upper-bound"


def test_deterministic_except_timings():
    argv = ("pdp", "--family", "hk", "--k", "1", "--m", "3")
    a, b = run_json(*argv)[1], run_json(*argv)[1]
    a.pop("timings"), b.pop("timings")
    assert a == b
    assert "elapsed" not in json.dumps(a)


def test_threads_same_report():
    base = ("pdp", "--family", "wheel_even", "--k", "1", "--m", "3", "--no-early-exit")
    a = run_json(*base, "--threads", "1")[1]["results"]
    b = run_json(*base, "--threads", "4")[1]["results"]
    assert a == b


def test_graph_file(tmp_path):
    p = tmp_path / "c4.txt"
    p.write_text("# four-cycle\n" + format_graph(cycle(4)))
    code, rep = run_json("compare", "--graph", str(p), "--m", "3")
    assert code == 0 and rep["results"]["relation"] == "<"
    code, rep = run_json("stats", "--graph", str(p))
    assert rep["results"]["stats"]["girth"] == 4


def test_bad_graph_file(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("3 1\n0 0\n")
    assert run("stats", "--graph", str(p))[0] == 2


def test_cover_files(tmp_path):
    G = hk(1)
    gp, cp, wp = tmp_path / "g.txt", tmp_path / "c.txt", tmp_path / "w.txt"
    gp.write_text(format_graph(G))
    cp.write_text(format_cover(random_cover(G, 3, 5)))
    code, rep = run_json("poly", "count", "--graph", str(gp), "--cover", str(cp))
    assert code == 0 and rep["results"]["nonzeros"] == rep["results"]["colorings"]
    code, rep = run_json("cover", "twist", "--graph", str(gp), "--cover", str(cp), "--seed", "9")
    assert code == 0 and rep["results"]["colorings_before"] == rep["results"]["colorings_after"]
    code, rep = run_json("pdp", "--graph", str(gp), "--m", "3", "--witness-out", str(wp))
    assert code == 0 and wp.read_text() == rep["results"]["witness"]
    code, rep = run_json("cover", "count", "--graph", str(gp), "--cover", str(wp))
    assert rep["results"]["colorings"] == 6


def test_cover_enumerate():
    code, rep = run_json("cover", "enumerate", "--family", "cycle", "--n", "4", "--m", "3")
    assert rep["results"]["total"] == 6
    assert [c["colorings"] for c in rep["results"]["covers"]] == [18, 16, 16, 15, 15, 16]


def test_poly_expand():
    code, rep = run_json("poly", "expand", "--family", "digon")
    assert code == 0 and rep["results"]["degree"] == 2


def test_chrom_oracle():
    code, rep = run_json("chrom", "--family", "dodecahedron", "--m", "3")
    assert rep["results"]["chromatic"] == 7200
    code, rep = run_json("chrom", "--family", "hk", "--k", "2", "--m", "3", "--oracle")
    assert code == 0 and rep["results"]["enumerated"] == 6


def test_lemma8_and_chidp():
    code, rep = run_json("lemma8", "--family", "hk", "--k", "1")
    assert code == 0 and rep["results"]["conclusion"] == 6 and rep["results"]["consistent"]
    code, rep = run_json("chidp", "--family", "complete", "--n", "4", "--m", "3")
    assert rep["results"]["chi_dp_le_m"] is False


def test_cache_cli(tmp_path):
    c = str(tmp_path / "cache.jsonl")
    run_json("pdp", "--family", "hk", "--k", "1", "--m", "3", "--cache", c)
    code, rep = run_json("pdp", "--family", "hk", "--k", "1", "--m", "3", "--cache", c)
    assert rep["timings"].get("cache_hit") is True and rep["results"]["value"] == 6
    code, rep = run_json("cache", "ls", "--cache", c)
    assert [e["value"] for e in rep["results"]["entries"]] == [6]
    code, rep = run_json("cache", "validate", "--cache", c, "--recompute")
    assert code == 0 and all(rep["results"]["validated"].values())


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dpcolor.cli", "bound", "theorem5", "--n", "5", "--l", "8", "--json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["results"]["ceiling"] == 3
