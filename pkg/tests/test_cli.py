import json

import pytest

from nonadditive import cli
from nonadditive.fincat import _label_from_json
from nonadditive.genring import FiberFamily, SetMap, fam_eq, get_instance, right_linearity


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out


def test_plane_search_exhausts(capsys):
    code, rep, _ = run(capsys, "plane", "search", "--from", "sigma", "--to", "sigma-prime",
                       "--moves", "core", "--size", "8")
    assert code == 0
    assert rep["result"]["status"] == "exhausted"
    assert rep["schema_version"] == cli.SCHEMA_VERSION


def test_axiom_suite_reports_counts(capsys):
    code, rep, _ = run(capsys, "suite", "--name", "axioms", "--instance", "GN", "--seed", "7")
    assert code == 0
    assert rep["seed"] == 7 and rep["status"] == "pass"
    assert all(v["checked"] == 500 for v in rep["result"]["axioms"].values())


def test_beta_check_exact(capsys):
    code, rep, _ = run(capsys, "beta", "check", "--place", "2", "--n", "2", "--alpha", "2", "1")
    assert code == 0
    assert rep["result"]["lhs"] == rep["result"]["rhs"] == "7/9"
    assert set(rep["result"]) == {"lhs", "rhs", "delta", "method", "certificate"}


def test_beta_check_real_and_lattice(capsys):
    code, rep, _ = run(capsys, "beta", "check", "--place", "eta", "--n", "2", "--alpha", "3", "1")
    assert code == 0 and abs(rep["result"]["lhs"] - 0.5) < 1e-8
    code, rep, _ = run(capsys, "beta", "check", "--place", "3", "--n", "2", "--alpha", "1", "2", "--level", "4")
    assert code == 0 and rep["result"]["method"] == "lattice"


def test_reports_are_byte_identical(capsys):
    argv = ["diff", "relation", "--name", "leibnitz", "--samples", "20", "--seed", "3"]
    cli.main(argv)
    first = capsys.readouterr().out
    cli.main(argv)
    assert capsys.readouterr().out == first
    argv = ["beta", "check", "--place", "eta", "--n", "3", "--alpha", "2", "1", "1", "--mc", "20000", "--seed", "5"]
    cli.main(argv)
    first = capsys.readouterr().out
    cli.main(argv)
    assert capsys.readouterr().out == first


def test_malformed_json_is_a_usage_error(capsys):
    code, rep, out = run(capsys, "diff", "normal-form", "--input", "{oops")
    assert code == 2 and rep is None
    assert "malformed JSON" in out.err


def test_unknown_subcommand_and_bad_moves(capsys):
    assert cli.main(["frobnicate"]) == 2
    assert cli.main(["plane", "search", "--moves", "teleport"]) == 2


def test_normal_form_from_file(tmp_path, capsys):
    path = tmp_path / "sum.json"
    path.write_text(json.dumps({"mode": "N", "sum": [[1, [1, 1]], [1, [2, 1]], [1, [3, 1]]]}))
    code, rep, _ = run(capsys, "diff", "normal-form", "--input", str(path))
    assert code == 0
    assert rep["result"]["basis"] == {"2": 4}  # d(4) = 2 * (4/2) d(2)


def test_counterexample_exit_code_and_replay(capsys):
    code, rep, _ = run(capsys, "genring", "axioms", "--instance", "FM:free", "--axiom", "right-lin",
                       "--samples", "50")
    assert code == 1 and rep["status"] == "fail"
    w = rep["result"]["axioms"]["right-lin"]["witness"]
    A = get_instance("FM:free")

    def family(j):
        comps = {_label_from_json(z): A.from_json(c) for z, c in j["comps"]}
        return FiberFamily.make(SetMap.from_json(j["map"]), comps)

    d, a, c, h = w["data"]
    lhs, rhs, _ = right_linearity(A, family(d), family(a), family(c), SetMap.from_json(h))
    assert not fam_eq(A, lhs, rhs)


def test_table_goes_to_stderr(capsys):
    code = cli.main(["--format", "table", "diff", "d-plus", "--n", "5"])
    out = capsys.readouterr()
    assert code == 0
    json.loads(out.out)
    assert "status" in out.err


def test_threads_flag_sets_environment(monkeypatch, capsys):
    monkeypatch.delenv(cli.ENV_VAR, raising=False)
    cli.main(["--threads", "2", "delta", "hom", "--instance", "GZ/5", "--samples", "10"])
    capsys.readouterr()
    import os
    assert os.environ[cli.ENV_VAR] == "2"


@pytest.mark.parametrize("argv", [
    ["fring", "check", "--rig", "Zmod:3", "--property", "central", "--bound", "1"],
    ["fring", "presentation", "--target", "GZ/3"],
    ["genring", "witness"],
    ["delta", "hom", "--instance", "GN", "--samples", "20"],
    ["plane", "neighbors"],
    ["plane", "validate", "--graph", "sigma-prime"],
    ["spec", "report", "--instance", "GZ/6", "--D", "2"],
    ["spec", "oracle", "--instance", "GZ/6"],
    ["spec", "sheaf", "--instance", "GZ/6", "--s", "[5]"],
    ["diff", "boundary", "--samples", "20"],
    ["beta", "limit", "--place", "2", "--N", "5", "10"],
    ["beta", "sslash", "--place", "3", "--n", "2", "--y", "1", "3", "--level", "8"],
    ["suite", "--name", "criterion-3"],
])
def test_every_subcommand_succeeds(argv, capsys):
    code, rep, _ = run(capsys, *argv)
    assert code == 0, rep
    assert rep["status"] == "pass" and "seed" in rep
