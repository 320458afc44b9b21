"""Multi-run experiment orchestration, summary statistics and CSV/JSON exporters."""

from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import engine
from ..engine import RunTrace, UseaConfig
from ..operators import DEParams, EDAParams, GAParams
from ..problems import make_problem
from ..surrogate import ForestParams, GPParams
from .stats import mean_rank, wilcoxon_rank_sum

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class AlgorithmSpec:
    """A named engine configuration template, instantiated per (problem, seed)."""

    name: str
    operator: str = "eda"
    surrogate: str = "rf"
    variant: str = "usea"
    pop_size: int = 50
    fes: int = 500
    tau: int | None = None
    ga: GAParams = GAParams()
    de: DEParams = DEParams()
    eda: EDAParams = EDAParams()
    forest: ForestParams = ForestParams()
    gp: GPParams = GPParams()

    def build_config(self, problem, seed: int) -> UseaConfig:
        return UseaConfig(
            problem=problem,
            pop_size=self.pop_size,
            fes=self.fes,
            operator=self.operator,
            surrogate=self.surrogate,
            variant=self.variant,
            seed=seed,
            tau=self.tau,
            ga=self.ga,
            de=self.de,
            eda=self.eda,
            forest=self.forest,
            gp=self.gp,
        )


@dataclass(frozen=True)
class ExperimentSpec:
    """Problems x dims x algorithms grid with a documented seed derivation.

    Cells enumerate problem-major, then dimension, then algorithm; the run seed
    is ``base_seed + cell_index + run_index``, so any single cell can be rerun
    in isolation.
    """

    algorithms: tuple[AlgorithmSpec, ...]
    problems: tuple[str, ...]
    dims: tuple[int, ...]
    runs: int = 30
    base_seed: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("need at least one run per cell")
        if not self.algorithms or not self.problems or not self.dims:
            raise ValueError("experiment grid must be non-empty")
        names = [a.name for a in self.algorithms]
        if len(set(names)) != len(names):
            raise ValueError("algorithm names must be unique")

    def cells(self):
        idx = 0
        for problem in self.problems:
            for dim in self.dims:
                for algo in self.algorithms:
                    yield idx, problem, dim, algo
                    idx += 1

    def seed_for(self, cell_index: int, run_index: int) -> int:
        return self.base_seed + cell_index + run_index


@dataclass
class CellStats:
    problem: str
    dim: int
    algorithm: str
    n_runs: int
    n_failures: int
    mean: float | None
    std: float | None
    median: float | None
    rank: float | None
    mark: str  # vs the reference algorithm; empty for the reference itself


@dataclass
class StatsSummary:
    cells: list[CellStats]
    algorithms: tuple[str, ...]
    reference: str
    alpha: float
    mean_ranks: dict[str, float | None]
    schema_version: int = SCHEMA_VERSION


@dataclass
class ExperimentResult:
    summary: StatsSummary
    traces: list[RunTrace]
    failures: list[dict]


def _execute_run(args) -> RunTrace:
    problem_name, dim, algo, seed = args
    problem = make_problem(problem_name, dim)
    trace = engine.run(algo.build_config(problem, seed))
    return dataclasses.replace(trace, algorithm=algo.name)


def run_experiment(
    spec: ExperimentSpec,
    workers: int = 1,
    reference: str | None = None,
    alpha: float = 0.05,
) -> ExperimentResult:
    """Execute every (cell, run), collect traces and build the summary.

    Results merge deterministically by (cell, run) index regardless of worker
    scheduling. Failed runs are recorded and leave their cell marked incomplete.
    """
    jobs = []
    for cell_index, problem, dim, algo in spec.cells():
        for run_index in range(spec.runs):
            jobs.append((problem, dim, algo, spec.seed_for(cell_index, run_index)))

    traces: list[RunTrace] = []
    failures: list[dict] = []

    def record(job, outcome, error=None):
        if error is None:
            traces.append(outcome)
        else:
            failures.append(
                {
                    "problem": job[0],
                    "dim": job[1],
                    "algorithm": job[2].name,
                    "seed": job[3],
                    "error": str(error),
                }
            )

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_execute_run, job) for job in jobs]
            for job, fut in zip(jobs, futures):
                try:
                    record(job, fut.result())
                except Exception as exc:  # noqa: BLE001 - run failures must be recorded, not raised
                    record(job, None, exc)
    else:
        for job in jobs:
            try:
                record(job, _execute_run(job))
            except Exception as exc:  # noqa: BLE001
                record(job, None, exc)

    summary = stats_from_traces(
        traces,
        algorithms=[a.name for a in spec.algorithms],
        problems=spec.problems,
        dims=spec.dims,
        reference=reference,
        alpha=alpha,
        failures=failures,
    )
    return ExperimentResult(summary, traces, failures)


def _ordered_unique(values):
    seen = {}
    for v in values:
        seen.setdefault(v, None)
    return tuple(seen)


def stats_from_traces(
    traces,
    algorithms=None,
    problems=None,
    dims=None,
    reference: str | None = None,
    alpha: float = 0.05,
    failures=(),
) -> StatsSummary:
    """Summarize final best values per cell, with Wilcoxon marks vs a reference column."""
    algorithms = tuple(algorithms) if algorithms else _ordered_unique(t.algorithm for t in traces)
    problems = tuple(problems) if problems else _ordered_unique(t.problem for t in traces)
    dims = tuple(dims) if dims else _ordered_unique(t.dim for t in traces)
    if reference is None:
        reference = algorithms[0] if algorithms else ""
    elif algorithms and reference not in algorithms:
        raise ValueError(f"reference {reference!r} not among algorithms {algorithms}")

    finals: dict[tuple, list[float]] = {}
    for t in traces:
        finals.setdefault((t.problem, t.dim, t.algorithm), []).append(t.final_y)
    fail_counts: dict[tuple, int] = {}
    for f in failures:
        key = (f["problem"], f["dim"], f["algorithm"])
        fail_counts[key] = fail_counts.get(key, 0) + 1

    cells: list[CellStats] = []
    for problem in problems:
        for dim in dims:
            ref_vals = finals.get((problem, dim, reference), [])
            for algo in algorithms:
                key = (problem, dim, algo)
                vals = finals.get(key, [])
                arr = np.array(vals) if vals else None
                if algo == reference or arr is None or len(ref_vals) < 2 or arr.size < 2:
                    mark = ""
                else:
                    _, mark = wilcoxon_rank_sum(arr, np.array(ref_vals), alpha)
                cells.append(
                    CellStats(
                        problem=problem,
                        dim=dim,
                        algorithm=algo,
                        n_runs=len(vals),
                        n_failures=fail_counts.get(key, 0),
                        mean=float(arr.mean()) if arr is not None else None,
                        std=float(arr.std()) if arr is not None else None,
                        median=float(np.median(arr)) if arr is not None else None,
                        rank=None,
                        mark=mark,
                    )
                )

    # per-row ranks over cell means, only when the table is complete
    by_key = {(c.problem, c.dim, c.algorithm): c for c in cells}
    complete = bool(cells) and all(c.mean is not None for c in cells)
    mean_ranks: dict[str, float | None] = {a: None for a in algorithms}
    if complete:
        rows = []
        for problem in problems:
            for dim in dims:
                rows.append([by_key[(problem, dim, a)].mean for a in algorithms])
        table = np.array(rows)
        per_row = np.vstack([mean_rank(row[None, :]) for row in table])
        for i, (problem, dim) in enumerate((p, d) for p in problems for d in dims):
            for j, a in enumerate(algorithms):
                by_key[(problem, dim, a)].rank = float(per_row[i, j])
        for j, a in enumerate(algorithms):
            mean_ranks[a] = float(per_row[:, j].mean())

    return StatsSummary(cells, algorithms, reference, alpha, mean_ranks)


def save_traces_json(traces, path, failures=(), include_generations: bool = False) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "runs": [t.to_dict(include_generations=include_generations) for t in traces],
        "failures": list(failures),
    }
    Path(path).write_text(json.dumps(doc))


def load_traces_json(path) -> tuple[list[RunTrace], list[dict]]:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported raw-trace schema: {doc.get('schema_version')!r}")
    return [RunTrace.from_dict(d) for d in doc["runs"]], list(doc.get("failures", []))


_CSV_FIELDS = (
    "schema_version",
    "problem",
    "dim",
    "algorithm",
    "n_runs",
    "n_failures",
    "mean",
    "std",
    "median",
    "rank",
    "mark",
    "reference",
    "alpha",
)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def save_summary_csv(summary: StatsSummary, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_CSV_FIELDS)
        writer.writeheader()
        for c in summary.cells:
            writer.writerow(
                {
                    "schema_version": summary.schema_version,
                    "problem": c.problem,
                    "dim": c.dim,
                    "algorithm": c.algorithm,
                    "n_runs": c.n_runs,
                    "n_failures": c.n_failures,
                    "mean": _fmt(c.mean),
                    "std": _fmt(c.std),
                    "median": _fmt(c.median),
                    "rank": _fmt(c.rank),
                    "mark": c.mark,
                    "reference": summary.reference,
                    "alpha": repr(summary.alpha),
                }
            )


def load_summary_csv(path) -> StatsSummary:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError("empty summary file")
    if any(int(r["schema_version"]) != SCHEMA_VERSION for r in rows):
        raise ValueError("unsupported summary schema version")

    def opt_float(s):
        return float(s) if s else None

    cells = [
        CellStats(
            problem=r["problem"],
            dim=int(r["dim"]),
            algorithm=r["algorithm"],
            n_runs=int(r["n_runs"]),
            n_failures=int(r["n_failures"]),
            mean=opt_float(r["mean"]),
            std=opt_float(r["std"]),
            median=opt_float(r["median"]),
            rank=opt_float(r["rank"]),
            mark=r["mark"],
        )
        for r in rows
    ]
    algorithms = _ordered_unique(c.algorithm for c in cells)
    mean_ranks: dict[str, float | None] = {}
    for a in algorithms:
        ranks = [c.rank for c in cells if c.algorithm == a]
        mean_ranks[a] = float(np.mean(ranks)) if all(r is not None for r in ranks) else None
    return StatsSummary(
        cells=cells,
        algorithms=algorithms,
        reference=rows[0]["reference"],
        alpha=float(rows[0]["alpha"]),
        mean_ranks=mean_ranks,
    )
