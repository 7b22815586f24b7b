import csv
import io

import numpy as np
import pytest

from hankelspec.cli import main
from hankelspec.formats import (DivergenceWarning, ModelFormatError, parse_model, parse_model_text, read_sample,
                                render_model, write_model, write_sample)
from hankelspec.hankel import read_hankel
from hankelspec.lang import basis
from hankelspec.spectral import l1_distance_upto
from hankelspec.wfa import LinearRepresentation
from helpers import P1, P2, random_rep

P1_TEXT = """wfa v1
alphabet a
dim 1
initial 1
final 0.5
matrix a
0.5
"""


def rows_of(text):
    lines = text.splitlines()
    assert lines[0].startswith("# hankelspec-csv v1 ")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def same_rep(a, b):
    assert a.alphabet == b.alphabet
    np.testing.assert_array_equal(a.initial, b.initial)
    np.testing.assert_array_equal(a.final, b.final)
    for x in a.alphabet:
        np.testing.assert_array_equal(a.transitions[x], b.transitions[x])


@pytest.fixture
def models(tmp_path):
    paths = {}
    for name, rep in {"p1": P1, "p2": P2}.items():
        paths[name] = tmp_path / f"{name}.wfa"
        write_model(paths[name], rep)
    # one-state geometric PFA whose S^(2) = 1 / (1 - q) is 8.23
    q = 1 - 1 / 8.23
    paths["geo"] = tmp_path / "geo.wfa"
    write_model(paths["geo"], LinearRepresentation(["a"], [1.0], {"a": [[q]]}, [1 - q]))
    return {k: str(v) for k, v in paths.items()}


# --- model and sample files -----------------------------------------------

def test_minimal_model_text():
    same_rep(parse_model_text(P1_TEXT), P1)


@pytest.mark.parametrize("seed", range(3))
def test_model_round_trip(seed, tmp_path):
    rep = random_rep(np.random.default_rng(seed), 3, ("a", "b", "c"))
    path = tmp_path / "m.wfa"
    write_model(path, rep)
    same_rep(parse_model(path), rep)
    assert render_model(parse_model(path)) == render_model(rep)


def test_comments_are_ignored():
    text = "# header\n" + P1_TEXT.replace("dim 1", "dim 1  # one state")
    same_rep(parse_model_text(text), P1)


def test_missing_row_reports_its_line():
    lines = render_model(P2).splitlines()
    broken = "\n".join(lines[:-1]) + "\n"
    with pytest.raises(ModelFormatError) as err:
        parse_model_text(broken, "m.wfa")
    assert err.value.lineno == len(lines)
    assert "m.wfa" in str(err.value)


@pytest.mark.parametrize("bad, lineno", [
    (P1_TEXT.replace("wfa v1", "wfa v2"), 1),
    (P1_TEXT.replace("dim 1", "dim x"), 3),
    (P1_TEXT.replace("initial 1", "initial 1 2"), 4),
    (P1_TEXT.replace("matrix a", "matrix b"), 6),
    (P1_TEXT.replace("0.5\n", "zz\n", 1), 5),
])
def test_syntax_errors_carry_line_numbers(bad, lineno):
    with pytest.raises(ModelFormatError) as err:
        parse_model_text(bad)
    assert err.value.lineno == lineno


def test_divergent_model_warns(tmp_path):
    path = tmp_path / "big.wfa"
    path.write_text(P1_TEXT.replace("matrix a\n0.5", "matrix a\n1.5"))
    with pytest.warns(DivergenceWarning):
        rep = parse_model(path)
    assert rep.transitions["a"][0, 0] == 1.5


def test_sample_file_round_trip(tmp_path):
    strings = [(), ("a",), ("a", "b", "b"), ()]
    path = tmp_path / "s.txt"
    write_sample(path, strings, "p2", 5)
    assert path.read_text().splitlines()[0] == "# sample model=p2 seed=5 n=4"
    assert read_sample(path) == strings


# --- bounds ---------------------------------------------------------------

def test_bounds_from_crafted_model(models, capsys):
    assert main(["bounds", "--model", models["geo"], "--n", "20000", "--l", "3"]) == 0
    rows = {r["bound"]: r for r in rows_of(capsys.readouterr().out)}
    assert float(rows["dim_free"]["value"]) == pytest.approx(0.0669, abs=5e-4)
    assert float(rows["opt_uv"]["value"]) <= float(rows["dim_free"]["value"])


def test_bounds_prefix_eta_zero_row_equals_standard(models, capsys):
    main(["bounds", "--model", models["p2"]])
    std = rows_of(capsys.readouterr().out)
    main(["bounds", "--model", models["p2"], "--mode", "prefix", "--eta", "0"])
    pre = rows_of(capsys.readouterr().out)
    for a, b in zip(std, pre):
        assert (a["bound"], a["value"], a["sigma2"], a["b"]) == (b["bound"], b["value"], b["sigma2"], b["b"])


@pytest.mark.parametrize("args", [["--mode", "standard"], ["--mode", "prefix", "--eta", "0.7"],
                                  ["--mode", "prefix", "--eta", "1", "--l", "3"],
                                  ["--mode", "factor", "--eta", "0.3"]])
def test_bounds_opt_never_above_dim_free(models, capsys, args):
    assert main(["bounds", "--model", models["p2"], *args]) == 0
    rows = {r["bound"]: r for r in rows_of(capsys.readouterr().out)}
    assert float(rows["opt_uv"]["value"]) <= float(rows["dim_free"]["value"])


def test_bounds_from_moments_and_baseline(capsys):
    assert main(["bounds", "--s2", "8.23", "--n", "20000", "--baseline-m", "1", "--baseline-d", "87381"]) == 0
    rows = {r["bound"]: r for r in rows_of(capsys.readouterr().out)}
    assert float(rows["dim_free"]["value"]) == pytest.approx(0.0669, abs=5e-4)
    assert float(rows["baseline"]["value"]) == pytest.approx(0.2166, abs=1e-4)
    assert float(rows["dim_free"]["t"]) == pytest.approx(5.4055, abs=1e-3)


def test_bounds_usage_errors(capsys):
    assert main(["bounds"]) == 2
    assert main(["bounds", "--s2", "2", "--mode", "prefix", "--eta", "0.5"]) == 2
    assert main(["bounds", "--s2", "2", "--baseline-m", "1"]) == 2
    assert main(["bounds", "--s2", "2", "--mode", "factor", "--s1", "1", "--eta", "1"]) == 1
    capsys.readouterr()


def test_bounds_writes_file(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bounds", "--s2", "3", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert rows_of(out.read_text())[0]["bound"] == "dim_free"


# --- experiment -----------------------------------------------------------

@pytest.mark.slow
def test_experiment_coverage(models, capsys):
    assert main(["experiment", "--model", models["p2"], "--n", "20000", "--trials", "10", "--l", "3"]) == 0
    rows = rows_of(capsys.readouterr().out)
    summary = rows[-1]
    assert summary["kind"] == "summary" and len(rows) == 11
    assert float(summary["coverage"]) == 1.0
    assert all(r["covered"] == "1" for r in rows[:-1])


def test_experiment_is_deterministic(models, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / "exp.csv"
        assert main(["experiment", "--model", models["p2"], "--n", "2000", "--l", "2", "--seed", "4",
                     "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert b"\r" not in outs[0]


def test_experiment_prefix_eta_one_uses_length_cap(models, capsys):
    main(["experiment", "--model", models["p2"], "--mode", "prefix", "--eta", "1", "--l", "2", "--n", "500"])
    exp = rows_of(capsys.readouterr().out)[-1]
    main(["bounds", "--model", models["p2"], "--mode", "prefix", "--eta", "1", "--l", "2", "--n", "500"])
    dim_free = rows_of(capsys.readouterr().out)[0]
    # b = (l + 1) + S^(1) of the eta = 1 prefix series, which is S^(2) of P2
    assert float(dim_free["b"]) == pytest.approx(3 + 2.75, rel=1e-5)
    assert exp["bound_dim_free"] == dim_free["value"]


# --- learn ----------------------------------------------------------------

def test_learn_from_sampled_p1(models, tmp_path):
    out = tmp_path / "learned.wfa"
    assert main(["learn", "--model", models["p1"], "--n", "50000", "--rank", "1", "--l", "3",
                 "--out", str(out), "--eval-len", "3"]) == 0
    learned = parse_model(out)
    assert l1_distance_upto(learned, P1, 3) <= 0.05
    metrics = rows_of((tmp_path / "learned.wfa.metrics.csv").read_text())[0]
    assert float(metrics["l1_distance"]) == pytest.approx(l1_distance_upto(learned, P1, 3), rel=1e-5)
    assert float(metrics["sin_largest_angle"]) <= float(metrics["stewart_bound"]) + 1e-9


def test_learn_exact(models, tmp_path, capsys):
    assert main(["learn", "--model", models["p2"], "--rank", "2", "--exact", "--l", "3"]) == 0
    metrics = rows_of(capsys.readouterr().out)[0]
    assert float(metrics["l1_distance"]) <= 1e-8
    assert metrics["source"] == "exact"


def test_learn_from_sample_file(models, tmp_path, capsys):
    s = tmp_path / "s.txt"
    assert main(["sample", "--model", models["p2"], "--n", "3000", "--out", str(s)]) == 0
    assert main(["learn", "--sample", str(s), "--rank", "2", "--l", "3"]) == 0
    metrics = rows_of(capsys.readouterr().out)[0]
    assert metrics["source"] == "file" and metrics["l1_distance"] == ""


def test_learn_needs_rank(models, capsys):
    assert main(["learn", "--model", models["p1"]]) == 2
    assert "--rank" in capsys.readouterr().err


# --- sample, hankel, moments ----------------------------------------------

def test_sample_command(models, tmp_path, capsys):
    path = tmp_path / "s.txt"
    assert main(["sample", "--model", models["p2"], "--n", "50", "--seed", "3", "--out", str(path)]) == 0
    first = read_sample(path)
    assert len(first) == 50
    assert main(["sample", "--model", models["p2"], "--n", "50", "--seed", "3"]) == 0
    printed = [tuple(line.split()) for line in capsys.readouterr().out.splitlines()]
    assert printed == first


def test_sample_rejects_signed_model(tmp_path, capsys):
    path = tmp_path / "r.wfa"
    write_model(path, random_rep(np.random.default_rng(0), 2))
    assert main(["sample", "--model", str(path), "--n", "3"]) == 1
    capsys.readouterr()


def test_hankel_export(models, tmp_path):
    path = tmp_path / "h.txt"
    assert main(["hankel", "--model", models["p2"], "--n", "400", "--mode", "factor", "--eta", "0.5",
                 "--lu", "2", "--lv", "3", "--out", str(path)]) == 0
    h = read_hankel(path, basis("ab", 2), basis("ab", 3))
    assert h.shape == (7, 15) and h.sample_size == 400 and h.mode == "factor"


def test_moments_command(models, capsys):
    assert main(["moments", "--model", models["p1"], "--k", "1", "2"]) == 0
    rows = rows_of(capsys.readouterr().out)
    assert [float(r["value"]) for r in rows] == pytest.approx([1.0, 2.0])


def test_missing_model_file_is_runtime_error(tmp_path, capsys):
    assert main(["moments", "--model", str(tmp_path / "nope.wfa")]) == 1
    assert "nope.wfa" in capsys.readouterr().err
