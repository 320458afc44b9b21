"""Command-line interface: single runs, benchmark sweeps, demos and summary recomputation."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..engine import OPERATORS, VARIANTS, run
from ..operators import DE_VARIANTS, DEParams, EDAParams, GAParams
from ..problems import PROBLEM_NAMES, make_problem
from ..surrogate import SURROGATE_KINDS, ForestParams, GPParams, active_backend_name
from .demos import case_study_1d, offspring_distribution_demo
from .experiment import (
    AlgorithmSpec,
    ExperimentSpec,
    load_traces_json,
    run_experiment,
    save_summary_csv,
    save_traces_json,
    stats_from_traces,
)


def _add_algo_flags(p, with_problem=True):
    if with_problem:
        p.add_argument("--problem", required=True, help=f"one of: {', '.join(PROBLEM_NAMES)}")
        p.add_argument("--dim", type=int, default=20)
    p.add_argument("--operator", choices=OPERATORS, default="eda")
    p.add_argument("--surrogate", choices=SURROGATE_KINDS, default="rf")
    p.add_argument("--variant", choices=VARIANTS, default="usea")
    p.add_argument("--fes", type=int, default=500)
    p.add_argument("--pop", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tau", type=int, default=None)
    p.add_argument("--de-variant", choices=DE_VARIANTS, default="best/2")
    p.add_argument("--bins", type=int, default=10, help="histogram bins per dimension (EDA)")
    p.add_argument("--beta1", type=float, default=1.0)
    p.add_argument("--beta2", type=float, default=0.8)


def _algo_from_args(args, name=None) -> AlgorithmSpec:
    return AlgorithmSpec(
        name=name or f"{args.variant}-{args.operator}",
        operator=args.operator,
        surrogate=args.surrogate,
        variant=args.variant,
        pop_size=args.pop,
        fes=args.fes,
        tau=args.tau,
        ga=GAParams(beta1=args.beta1, beta2=args.beta2),
        de=DEParams(variant=args.de_variant),
        eda=EDAParams(K=args.bins),
    )


def _cmd_run(args) -> int:
    problem = make_problem(args.problem, args.dim)
    config = _algo_from_args(args).build_config(problem, args.seed)
    trace = run(config)
    print(
        f"{problem.name} n={problem.n} {args.variant}-{args.operator}/{args.surrogate} "
        f"seed={args.seed}: best={trace.final_y:.6g} "
        f"({trace.fes} evaluations, {trace.wall_clock:.2f}s, kernel={active_backend_name()})"
    )
    if args.out:
        Path(args.out).write_text(json.dumps(trace.to_dict(include_generations=True)))
        print(f"trace written to {args.out}")
    return 0


def _spec_from_file(path) -> ExperimentSpec:
    doc = json.loads(Path(path).read_text())
    algorithms = []
    for a in doc["algorithms"]:
        algorithms.append(
            AlgorithmSpec(
                name=a["name"],
                operator=a.get("operator", "eda"),
                surrogate=a.get("surrogate", "rf"),
                variant=a.get("variant", "usea"),
                pop_size=a.get("pop_size", 50),
                fes=a.get("fes", 500),
                tau=a.get("tau"),
                ga=GAParams(**a.get("ga", {})),
                de=DEParams(**a.get("de", {})),
                eda=EDAParams(**a.get("eda", {})),
                forest=ForestParams(**a.get("forest", {})),
                gp=GPParams(**a.get("gp", {})),
            )
        )
    return ExperimentSpec(
        algorithms=tuple(algorithms),
        problems=tuple(doc["problems"]),
        dims=tuple(doc["dims"]),
        runs=doc.get("runs", 30),
        base_seed=doc.get("base_seed", 0),
    )


def _print_summary(summary) -> None:
    print(f"reference: {summary.reference}   alpha: {summary.alpha}")
    header = f"{'problem':<12} {'dim':>4} {'algorithm':<18} {'mean':>12} {'std':>12} {'median':>12} {'rank':>5} mark"
    print(header)
    for c in summary.cells:
        mean = f"{c.mean:.4g}" if c.mean is not None else "-"
        std = f"{c.std:.4g}" if c.std is not None else "-"
        med = f"{c.median:.4g}" if c.median is not None else "-"
        rank = f"{c.rank:.2f}" if c.rank is not None else "-"
        flag = "" if c.n_failures == 0 else f"  [{c.n_failures} failed]"
        print(f"{c.problem:<12} {c.dim:>4} {c.algorithm:<18} {mean:>12} {std:>12} {med:>12} {rank:>5} {c.mark:^4}{flag}")
    ranks = ", ".join(
        f"{a}={r:.2f}" if r is not None else f"{a}=-" for a, r in summary.mean_ranks.items()
    )
    print(f"mean ranks: {ranks}")


def _cmd_bench(args) -> int:
    if args.spec:
        spec = _spec_from_file(args.spec)
    else:
        problems = tuple(s.strip() for s in args.problem.split(","))
        dims = tuple(int(s) for s in args.dim.split(","))
        spec = ExperimentSpec(
            algorithms=(_algo_from_args(args),),
            problems=problems,
            dims=dims,
            runs=args.runs,
            base_seed=args.seed,
        )
    result = run_experiment(spec, workers=args.workers, reference=args.reference, alpha=args.alpha)
    _print_summary(result.summary)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_summary_csv(result.summary, out / "summary.csv")
    save_traces_json(result.traces, out / "raw.json", failures=result.failures)
    print(f"wrote {out / 'summary.csv'} and {out / 'raw.json'}")
    return 1 if result.failures else 0


def _cmd_demo(args) -> int:
    from ..core import RngStream

    if args.which == "fig3":
        reports = {
            op: offspring_distribution_demo(
                op, RngStream(args.seed).child(op), n_offspring=args.offspring, n_bins=args.histogram_bins
            )
            for op in ("ga", "de", "eda")
        }
        for op, rep in reports.items():
            w = rep["with_pu"]["fraction_in_optimal_region"]
            wo = rep["without_pu"]["fraction_in_optimal_region"]
            print(f"{op}: fraction in optimal region with P_u = {w:.4f}, without = {wo:.4f}")
        doc = {"schema_version": 1, "seed": args.seed, "reports": reports}
    else:
        doc = case_study_1d(RngStream(args.seed), resolution=args.resolution, n_train=args.train)
        print(
            f"EI argmax at x = {doc['ei_argmax_x']:.4f}; "
            f"incumbent best = {doc['header']['incumbent_best']:.4f}"
        )
    if args.out:
        Path(args.out).write_text(json.dumps(doc))
        print(f"report written to {args.out}")
    return 0


def _cmd_stats(args) -> int:
    traces, failures = load_traces_json(args.raw)
    summary = stats_from_traces(traces, reference=args.reference, alpha=args.alpha, failures=failures)
    _print_summary(summary)
    if args.out:
        save_summary_csv(summary, args.out)
        print(f"summary written to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="usea",
        description="Surrogate-assisted evolutionary optimization with un-evaluated parent injection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single seeded run, trace to JSON")
    _add_algo_flags(p_run)
    p_run.add_argument("--out", default=None, help="trace JSON path")
    p_run.set_defaults(fn=_cmd_run)

    p_bench = sub.add_parser("bench", help="problems x algorithms sweep with summary CSV + raw JSON")
    p_bench.add_argument("--spec", default=None, help="experiment spec JSON (overrides flags)")
    p_bench.add_argument("--problem", default="Ellipsoid", help="comma-separated problem names")
    p_bench.add_argument("--dim", default="20", help="comma-separated dimensions")
    _add_algo_flags(p_bench, with_problem=False)
    p_bench.add_argument("--runs", type=int, default=30)
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--reference", default=None)
    p_bench.add_argument("--alpha", type=float, default=0.05)
    p_bench.add_argument("--out", required=True, help="output directory")
    p_bench.set_defaults(fn=_cmd_bench)

    p_demo = sub.add_parser("demo", help="diagnostic reports")
    demo_sub = p_demo.add_subparsers(dest="which", required=True)
    p_fig3 = demo_sub.add_parser("fig3", help="offspring-distribution study (two-cluster setup)")
    p_fig3.add_argument("--seed", type=int, default=0)
    p_fig3.add_argument("--offspring", type=int, default=10_000)
    p_fig3.add_argument("--histogram-bins", type=int, default=60)
    p_fig3.add_argument("--out", default=None)
    p_fig3.set_defaults(fn=_cmd_demo)
    p_fig8 = demo_sub.add_parser("fig8", help="1-D forest uncertainty / EI snapshot")
    p_fig8.add_argument("--seed", type=int, default=0)
    p_fig8.add_argument("--resolution", type=int, default=401)
    p_fig8.add_argument("--train", type=int, default=12)
    p_fig8.add_argument("--out", default=None)
    p_fig8.set_defaults(fn=_cmd_demo)

    p_stats = sub.add_parser("stats", help="recompute a summary from raw trace JSON")
    p_stats.add_argument("--raw", required=True)
    p_stats.add_argument("--reference", default=None)
    p_stats.add_argument("--alpha", type=float, default=0.05)
    p_stats.add_argument("--out", default=None, help="summary CSV path")
    p_stats.set_defaults(fn=_cmd_stats)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
