import json

import numpy as np
import pytest

from usea.core import RngStream
from usea.harness import (
    AlgorithmSpec,
    ExperimentSpec,
    case_study_1d,
    load_summary_csv,
    load_traces_json,
    offspring_distribution_demo,
    run_experiment,
    save_summary_csv,
    save_traces_json,
    stats_from_traces,
)
from usea.harness.cli import main
from usea.surrogate import ForestParams


def _tiny_spec(runs=3):
    algos = (
        AlgorithmSpec(name="usea-eda", pop_size=8, fes=30, forest=ForestParams(n_trees=10)),
        AlgorithmSpec(name="baseline-eda", variant="baseline", pop_size=8, fes=30),
    )
    return ExperimentSpec(algorithms=algos, problems=("Ellipsoid",), dims=(4,), runs=runs)


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec(algorithms=(), problems=("Ellipsoid",), dims=(4,))
    with pytest.raises(ValueError):
        _tiny_spec(runs=0)
    dup = (AlgorithmSpec(name="a"), AlgorithmSpec(name="a", variant="ns"))
    with pytest.raises(ValueError):
        ExperimentSpec(algorithms=dup, problems=("Ellipsoid",), dims=(4,))


def test_seed_derivation_documented():
    spec = _tiny_spec()
    cells = list(spec.cells())
    assert [c[0] for c in cells] == [0, 1]
    assert spec.seed_for(1, 2) == spec.base_seed + 3


def test_run_experiment_basic_summary():
    result = run_experiment(_tiny_spec())
    assert not result.failures
    assert len(result.traces) == 6
    cells = result.summary.cells
    assert [c.algorithm for c in cells] == ["usea-eda", "baseline-eda"]
    usea_cell = cells[0]
    finals = [t.final_y for t in result.traces if t.algorithm == "usea-eda"]
    assert usea_cell.mean == pytest.approx(np.mean(finals))
    assert usea_cell.median == pytest.approx(np.median(finals))
    assert usea_cell.n_runs == 3
    assert usea_cell.mark == ""  # reference column carries no mark
    assert result.summary.reference == "usea-eda"
    assert set(result.summary.mean_ranks) == {"usea-eda", "baseline-eda"}


def test_run_experiment_deterministic():
    a = run_experiment(_tiny_spec())
    b = run_experiment(_tiny_spec())
    assert a.summary == b.summary


def test_run_experiment_worker_pool_matches_serial():
    spec = _tiny_spec(runs=2)
    serial = run_experiment(spec, workers=1)
    parallel = run_experiment(spec, workers=2)
    assert parallel.summary == serial.summary
    for a, b in zip(parallel.traces, serial.traces):
        assert a.seed == b.seed and a.algorithm == b.algorithm
        assert np.array_equal(a.best_curve, b.best_curve)


def test_run_experiment_records_failures():
    algos = (
        AlgorithmSpec(name="ok", pop_size=8, fes=20, forest=ForestParams(n_trees=5)),
        AlgorithmSpec(name="broken", pop_size=8, fes=20, tau=2),
    )
    spec = ExperimentSpec(algorithms=algos, problems=("YLLF10x",), dims=(4,), runs=2)
    result = run_experiment(spec)
    assert len(result.failures) == 4  # unknown problem fails every run
    assert all("unknown problem" in f["error"] for f in result.failures)
    cell = result.summary.cells[0]
    assert cell.n_runs == 0 and cell.n_failures == 2
    assert cell.mean is None
    assert result.summary.mean_ranks["ok"] is None  # incomplete table has no ranks


def test_exporters_round_trip(tmp_path):
    result = run_experiment(_tiny_spec())
    csv_path = tmp_path / "summary.csv"
    save_summary_csv(result.summary, csv_path)
    assert load_summary_csv(csv_path) == result.summary

    raw_path = tmp_path / "raw.json"
    save_traces_json(result.traces, raw_path, failures=result.failures)
    traces, failures = load_traces_json(raw_path)
    assert failures == result.failures
    assert len(traces) == len(result.traces)
    for a, b in zip(traces, result.traces):
        assert a.final_y == b.final_y
        assert np.array_equal(a.best_curve, b.best_curve)
        assert a.algorithm == b.algorithm and a.seed == b.seed

    recomputed = stats_from_traces(traces, failures=failures)
    assert recomputed == result.summary


def test_wilcoxon_marks_in_summary():
    # two clearly separated synthetic columns produce a '-' for the worse one
    import dataclasses

    result = run_experiment(_tiny_spec(runs=4))
    traces = []
    for t in result.traces:
        y = 1.0 if t.algorithm == "usea-eda" else 100.0 + t.seed
        traces.append(dataclasses.replace(t, final_y=y))
    summary = stats_from_traces(traces)
    marks = {c.algorithm: c.mark for c in summary.cells}
    assert marks["baseline-eda"] == "-"
    ranks = {c.algorithm: c.rank for c in summary.cells}
    assert ranks == {"usea-eda": 1.0, "baseline-eda": 2.0}


# --- demos ---------------------------------------------------------------------


def test_offspring_demo_report_shape():
    report = offspring_distribution_demo("eda", RngStream(0), n_offspring=2000, n_bins=24)
    assert report["operator"] == "eda"
    for cond in ("with_pu", "without_pu"):
        hist = report[cond]["histogram"]
        assert len(hist) == 24
        assert sum(hist) == 2000
        assert 0.0 <= report[cond]["fraction_in_optimal_region"] <= 1.0
    assert len(report["bin_edges"]) == 25
    assert report["header"]["offspring_cluster"] == {"mean": 8.0, "std": 0.8}


def test_offspring_demo_shift_each_operator():
    for op in ("ga", "de", "eda"):
        report = offspring_distribution_demo(op, RngStream(1), n_offspring=4000)
        w = report["with_pu"]["fraction_in_optimal_region"]
        wo = report["without_pu"]["fraction_in_optimal_region"]
        assert w > wo, op


def test_offspring_demo_rejects_unknown_operator():
    with pytest.raises(ValueError):
        offspring_distribution_demo("pso", RngStream(0))


def test_best_anchored_de_inverts_the_contrast():
    # best/2 centers mutants on the best member, which already lies in the
    # optimal region under this setup: the plain operator then dominates and
    # the two-cluster contrast inverts. This is why the demo pins rand/1.
    from usea.harness.demos import _de_offspring, two_cluster_populations
    from usea.operators import DEParams, GAParams

    rng = RngStream(0)
    problem, p_e, p_u = two_cluster_populations(rng.child("clusters"))
    de, ga = DEParams(variant="best/2"), GAParams()
    w = _de_offspring(p_e, p_u, 4000, de, ga, problem.bounds, rng.child("with"))
    wo = _de_offspring(p_e, None, 4000, de, ga, problem.bounds, rng.child("without"))
    frac = lambda xs: np.mean((xs[:, 0] >= 6.0) & (xs[:, 0] <= 10.0))
    assert frac(wo) > 0.5  # plain best/2 already concentrates there
    assert frac(wo) > frac(w)


def test_case_study_report():
    report = case_study_1d(RngStream(2), resolution=101, n_train=10)
    assert len(report["grid"]) == 101
    assert all(row["ei"] >= 0.0 for row in report["grid"])
    assert all(row["rf_std"] >= 0.0 for row in report["grid"])
    assert 0.0 <= report["ei_argmax_x"] <= 12.0
    tags = [o["selected_as"] for o in report["offspring"]]
    assert tags.count("evaluate") == 1
    assert tags.count("unevaluated") == len(report["offspring"]) // 2


def test_case_study_overfit_recall():
    params = ForestParams(n_trees=1, bootstrap=False, min_samples_leaf=1, features_per_split=1)
    report = case_study_1d(RngStream(3), resolution=51, n_train=8, forest_params=params)
    ys = [row["y"] for row in report["training"]]
    assert np.allclose(report["rf_at_train"], ys)


# --- CLI -------------------------------------------------------------------------


def test_cli_run_writes_trace(tmp_path, capsys):
    out = tmp_path / "trace.json"
    code = main(
        [
            "run", "--problem", "Ellipsoid", "--dim", "4", "--operator", "eda",
            "--fes", "30", "--pop", "8", "--seed", "7", "--out", str(out),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["problem"] == "Ellipsoid"
    assert len(doc["best_curve"]) == 30
    assert "best=" in capsys.readouterr().out


def test_cli_bench_stats_round_trip(tmp_path, capsys):
    out = tmp_path / "bench"
    code = main(
        [
            "bench", "--problem", "Ellipsoid", "--dim", "4", "--variant", "baseline",
            "--fes", "24", "--pop", "8", "--runs", "2", "--seed", "3", "--out", str(out),
        ]
    )
    assert code == 0
    assert (out / "summary.csv").exists()
    summary = load_summary_csv(out / "summary.csv")
    assert summary.cells[0].n_runs == 2

    code = main(["stats", "--raw", str(out / "raw.json"), "--out", str(tmp_path / "again.csv")])
    assert code == 0
    assert load_summary_csv(tmp_path / "again.csv") == summary


def test_cli_bench_spec_file(tmp_path):
    spec = {
        "problems": ["Ellipsoid"],
        "dims": [4],
        "runs": 2,
        "base_seed": 1,
        "algorithms": [
            {"name": "tiny", "operator": "eda", "pop_size": 8, "fes": 24,
             "forest": {"n_trees": 5}, "eda": {"K": 5}},
        ],
    }
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    code = main(["bench", "--spec", str(spec_path), "--out", str(tmp_path / "o")])
    assert code == 0
    summary = load_summary_csv(tmp_path / "o" / "summary.csv")
    assert summary.cells[0].algorithm == "tiny"


def test_cli_demo_fig3(tmp_path, capsys):
    out = tmp_path / "fig3.json"
    code = main(["demo", "fig3", "--seed", "5", "--offspring", "500", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc["reports"]) == {"ga", "de", "eda"}
    assert "fraction in optimal region" in capsys.readouterr().out


def test_cli_demo_fig8(tmp_path):
    out = tmp_path / "fig8.json"
    code = main(["demo", "fig8", "--seed", "5", "--resolution", "41", "--train", "8", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["grid"]) == 41
