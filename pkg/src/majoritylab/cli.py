"""Command line front end.

Subcommands:
  run      solve one instance and print the answer, cost, and branch trace
  bench    run a seeded grid and emit per-trial rows as CSV or JSON
  verify   replay one run and audit it against its certificate and the truth
  analyze  numeric companions: the cost constant and the merge-game simulator

Exit codes: 0 on success, 1 when a contract is violated (wrong answer,
rejected certificate, failed audit), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .bench import (
    ExperimentConfig,
    contract_violations,
    format_summary,
    rows_to_csv,
    rows_to_json,
    run_grid,
    summarize,
)
from .boyer_moore import boyer_moore
from .certify import answer_matches_brute_force, brute_force_majority, verify_run
from .core import CountingOracle, generate, read_instance
from .lowerbound import (
    STRATEGIES,
    beta_interval,
    lower_bound_constant,
    simulate_balance,
)
from .randomized import Params, majority
from .rng import RandomStream

__all__ = ["main"]


def _parse_size(token: str) -> int:
    """Accept plain integers and 2^k shorthand."""
    token = token.strip()
    if "^" in token:
        base, _, exp = token.partition("^")
        return int(base) ** int(exp)
    return int(token)


def _load_instance(args: argparse.Namespace):
    if args.instance:
        return read_instance(args.instance)
    if args.n is None:
        raise ValueError("either --instance or --n is required")
    inst_rng = RandomStream(args.seed, f"instance/{args.n}", 0)
    return generate(args.dist, args.n, inst_rng)


def _solve(instance, args: argparse.Namespace, record_transcript: bool):
    """Run the chosen algorithm; returns (answer, cert, trace, oracle)."""
    oracle = CountingOracle(instance, record_transcript=record_transcript)
    if args.algo == "boyer-moore":
        answer, cert = boyer_moore(oracle)
        trace: tuple[str, ...] = ("base",)
    else:
        params = Params(cutoff=args.cutoff) if args.cutoff else Params()
        run_rng = RandomStream(args.seed, f"run/{args.algo}/{instance.n}", 0)
        answer, cert, stats = majority(oracle, params=params, rng=run_rng)
        trace = stats.branch_trace
    return answer, cert, trace, oracle


def _describe(answer) -> str:
    if answer.is_majority:
        return f"majority ball={answer.witness} multiplicity={answer.multiplicity}"
    return "no_majority"


def _cmd_run(args: argparse.Namespace) -> int:
    instance = _load_instance(args)
    answer, cert, trace, oracle = _solve(instance, args, args.record_transcript)
    print(f"n: {instance.n}")
    print(f"answer: {_describe(answer)}")
    print(f"comparisons: {oracle.comparisons}")
    print(f"branch trace: {'>'.join(trace)}")
    if cert is not None:
        anchor = "" if cert.candidate is None else f" candidate={cert.candidate}"
        triangle = " triangle" if cert.triangle else ""
        print(f"certificate: {cert.units()} units{anchor}{triangle}")
    if args.record_transcript:
        print(f"transcript: {len(oracle.transcript)} comparisons")
        for rec in oracle.transcript:
            print(f"{rec.left} {rec.right} {int(rec.equal)}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    instance = _load_instance(args)
    answer, cert, trace, oracle = _solve(instance, args, record_transcript=True)
    truth = brute_force_majority(instance)
    matches = answer_matches_brute_force(answer, instance)
    audit = verify_run(instance.n, oracle.transcript, answer, cert)

    print(f"n: {instance.n}")
    print(f"answer: {_describe(answer)}")
    print(f"truth: {_describe(truth)}")
    print(f"branch trace: {'>'.join(trace)}")
    print(f"answer matches truth: {'yes' if matches else 'NO'}")
    verdict = "accepted" if audit.accepted else f"REJECTED ({audit.reason})"
    print(f"certificate audit: {verdict}")
    return 0 if matches and audit.accepted else 1


def _cmd_bench(args: argparse.Namespace) -> int:
    config = ExperimentConfig(
        algorithm=args.algo,
        sizes=tuple(_parse_size(t) for t in args.sizes.split(",")),
        distribution=args.dist,
        trials=args.trials,
        master_seed=args.seed,
        cutoff=args.cutoff,
        jobs=args.jobs,
        paranoid=args.paranoid,
        timing=args.timing,
    )
    rows = run_grid(config)
    summary = summarize(rows, config.distribution)
    if args.format == "json":
        payload = rows_to_json(config, rows, summary)
    else:
        payload = rows_to_csv(rows, timing=config.timing)

    if args.csv_out:
        with open(args.csv_out, "w") as fh:
            fh.write(payload)
        print(format_summary(summary))
    else:
        sys.stdout.write(payload)
        print(format_summary(summary), file=sys.stderr)

    bad = contract_violations(rows)
    for line in bad[:20]:
        print(f"violation: {line}", file=sys.stderr)
    return 1 if bad else 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    if args.constant:
        constant = lower_bound_constant(args.tolerance)
        beta_low, beta_high = beta_interval()
        print(f"lower_bound_constant: {constant:.10f}")
        print(f"beta_low: {beta_low:.10f}")
        print(f"beta_high: {beta_high:.10f}")
        return 0
    if args.martingale:
        if args.n is None:
            raise ValueError("--martingale requires --n")
        rng = RandomStream(args.seed, f"martingale/{args.strategy}", args.n)
        stats = simulate_balance(args.n, args.strategy, args.trials, rng)
        print("# majoritylab-analyze v1")
        print(
            f"# strategy={stats.strategy} n={stats.n} trials={stats.trials} "
            f"seed={args.seed}"
        )
        print(f"# terminal_balance_mean={stats.terminal_balance_mean:.3f}")
        print(f"# terminal_balance_var={stats.terminal_balance_var:.3f}")
        print(f"# inferred_edges_mean={stats.inferred_edges_mean:.3f}")
        print(f"# inferred_majority_edges_mean={stats.inferred_majority_edges_mean:.3f}")
        print(f"# majority_rate={stats.majority_rate:.3f}")
        print("k,nonzero_components_mean,max_balance_mean")
        for k, nk, mk in zip(
            stats.checkpoints, stats.nonzero_count_mean, stats.max_balance_mean
        ):
            print(f"{k},{nk:.3f},{mk:.3f}")
        return 0
    raise ValueError("pick one of --constant or --martingale")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="majoritylab",
        description="Majority finding with comparisons you can audit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--algo",
            choices=("rand-majority", "boyer-moore"),
            default="rand-majority",
            help="algorithm to run (default rand-majority)",
        )
        p.add_argument("--n", type=_parse_size, help="instance size (plain or 2^k)")
        p.add_argument(
            "--dist",
            default="binary:p=0.5",
            help="color distribution, e.g. binary:p=0.5, profile:0.48,rest=100, "
            "uniform:k=64, distinct",
        )
        p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
        p.add_argument(
            "--cutoff", type=int, help="recursion floor for rand-majority"
        )
        p.add_argument("--instance", help="read the instance from a file instead")

    run_p = sub.add_parser("run", help="solve one instance")
    add_common(run_p)
    run_p.add_argument(
        "--record-transcript",
        action="store_true",
        help="dump every comparison as 'i j equal' lines",
    )
    run_p.set_defaults(func=_cmd_run)

    verify_p = sub.add_parser("verify", help="run, audit, and cross-check one instance")
    add_common(verify_p)
    verify_p.set_defaults(func=_cmd_verify)

    bench_p = sub.add_parser("bench", help="run a seeded experiment grid")
    bench_p.add_argument(
        "--algo",
        choices=("rand-majority", "boyer-moore"),
        default="rand-majority",
    )
    bench_p.add_argument(
        "--sizes",
        default="2^14",
        help="comma-separated sizes, 2^k shorthand allowed (default 2^14)",
    )
    bench_p.add_argument("--dist", default="binary:p=0.5")
    bench_p.add_argument("--trials", type=int, default=10)
    bench_p.add_argument("--seed", type=int, default=0)
    bench_p.add_argument("--cutoff", type=int)
    bench_p.add_argument("--jobs", type=int, default=1, help="worker processes")
    bench_p.add_argument("--csv-out", help="write rows here instead of stdout")
    bench_p.add_argument("--format", choices=("csv", "json"), default="csv")
    bench_p.add_argument(
        "--paranoid",
        action="store_true",
        help="check every trial against brute force regardless of size",
    )
    bench_p.add_argument(
        "--timing",
        action="store_true",
        help="include wall_ms in the CSV (off by default so reruns are "
        "byte-identical)",
    )
    bench_p.set_defaults(func=_cmd_bench)

    analyze_p = sub.add_parser("analyze", help="numeric companions")
    analyze_p.add_argument(
        "--constant",
        action="store_true",
        help="print the cost constant and the admissible threshold interval",
    )
    analyze_p.add_argument(
        "--tolerance", type=float, default=1e-8, help="integration tolerance"
    )
    analyze_p.add_argument(
        "--martingale",
        action="store_true",
        help="simulate the merge game and print trajectory statistics as CSV",
    )
    analyze_p.add_argument("--n", type=_parse_size)
    analyze_p.add_argument("--trials", type=int, default=100)
    analyze_p.add_argument("--strategy", choices=STRATEGIES, default="uniform")
    analyze_p.add_argument("--seed", type=int, default=0)
    analyze_p.set_defaults(func=_cmd_analyze)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
