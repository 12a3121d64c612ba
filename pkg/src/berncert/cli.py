"""Command-line front end: interval estimators, coverage-event bounds, the
counterexample oracle, and the experiment harness.

Probabilities may be given as decimals or exact fractions ("2/3"); fractions
are kept exact, which matters for knife-edge significance levels.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .conformal import PacParams, theorem1_bound
from .experiments import AppendixConfig, emit_csv, run_appendix
from .indicator import (
    ClaimNeverIssuedError,
    IndicatorModel,
    enumerate_example1,
    exact_SE_probability,
    naive_interval_coverage,
)
from .intervals import clopper_pearson


def prob_arg(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a probability: {text!r}") from exc
    if not (0 <= value <= 1):
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1]: {text!r}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="berncert",
        description="Binomial proportion confidence intervals vs. training-conditional conformal prediction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bpci", help="binomial proportion confidence interval")
    p.add_argument("--n", type=int, required=True, help="trial count")
    p.add_argument("--successes", type=int, required=True, help="observed success count")
    p.add_argument("--alpha", type=prob_arg, default=Fraction(1, 20), help="nominal miscoverage")
    p.add_argument("--method", choices=["clopper-pearson"], default="clopper-pearson")
    p.add_argument("--json", action="store_true", help="emit a single-line JSON record")

    p = sub.add_parser("cp-bound", help="training-conditional coverage-event bound")
    p.add_argument("--n", type=int, required=True, help="calibration size")
    p.add_argument("--epsilon", type=prob_arg, required=True, help="significance level")
    p.add_argument("--coverage", type=prob_arg, required=True, help="coverage parameter E")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("counterexample", help="exact coverage-event probability and naive-interval verdict")
    p.add_argument("--b", type=prob_arg, required=True, help="true Bernoulli parameter")
    p.add_argument("--coverage", type=prob_arg, required=True, help="coverage parameter E")
    p.add_argument("--epsilon", type=prob_arg, required=True, help="significance level")
    p.add_argument("--n", type=int, required=True, help="calibration size")
    p.add_argument("--show-cases", action="store_true", help="print the n=2 case table")

    p = sub.add_parser("simulate-appendix", help="E-grid sweep, one CSV row per (q, regime)")
    p.add_argument("--q-min", type=int, default=0)
    p.add_argument("--q-max", type=int, default=98)
    p.add_argument("--alpha-frac", type=prob_arg, default=Fraction(1, 200))
    p.add_argument("--epsilon", type=prob_arg, default=Fraction(2, 3))
    p.add_argument("--n-cal", type=int, default=5000)
    p.add_argument("--n-test", type=int, default=5000)
    p.add_argument("--cal-size", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--mode",
        choices=["monte-carlo", "exact-inner", "fully-exact"],
        default="exact-inner",
    )
    p.add_argument("--out", required=True, help="output CSV path")
    return parser


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _cmd_bpci(args) -> int:
    est = clopper_pearson(args.n, args.successes, float(args.alpha))
    if args.json:
        print(
            json.dumps(
                {
                    "method": args.method,
                    "n": est.n,
                    "successes": est.y,
                    "alpha": est.alpha,
                    "lower": est.lower,
                    "upper": est.upper,
                },
                sort_keys=True,
            )
        )
    else:
        print(f"method = {args.method}")
        print(f"n = {est.n}, successes = {est.y}, alpha = {_fmt(est.alpha)}")
        print(f"lower = {_fmt(est.lower)}")
        print(f"upper = {_fmt(est.upper)}")
    return 0


def _cmd_cp_bound(args) -> int:
    params = PacParams(epsilon=args.epsilon, coverage_E=float(args.coverage), n=args.n)
    bound = theorem1_bound(params)
    if args.json:
        print(
            json.dumps(
                {
                    "n": params.n,
                    "epsilon": str(params.epsilon),
                    "coverage_E": params.coverage_E,
                    "J": params.J,
                    "delta": bound.delta,
                    "confidence": bound.confidence,
                },
                sort_keys=True,
            )
        )
    else:
        print(f"n = {params.n}, epsilon = {params.epsilon}, E = {_fmt(params.coverage_E)}")
        print(f"J = {params.J}")
        print(f"delta = {_fmt(bound.delta)}")
        print(f"confidence (1 - delta) = {_fmt(bound.confidence)}")
    return 0


def _cmd_counterexample(args) -> int:
    model = IndicatorModel(b=float(args.b), n=args.n)
    result = exact_SE_probability(model, args.epsilon, float(args.coverage))
    print(f"b = {_fmt(model.b)}, E = {_fmt(float(args.coverage))}, epsilon = {args.epsilon}, n = {model.n}")
    print(f"prob_SE = {_fmt(result.prob_SE)}")
    print(f"  full-space prediction: {_fmt(result.prob_fullspace)}")
    print(f"  complement prediction, covering: {_fmt(result.prob_qbar_covering)}")
    print(f"bound (1 - delta) = {_fmt(result.bound.confidence)}")
    if args.show_cases and model.n == 2:
        table = enumerate_example1(model.b, args.epsilon, float(args.coverage))
        for case in table.cases:
            print(
                f"  case [{case.label}] prob={_fmt(case.probability)} "
                f"prediction={case.prediction.value} coverage={_fmt(case.inner_coverage)} "
                f"in_SE={case.in_SE}"
            )
    try:
        naive = naive_interval_coverage(model.b, float(args.coverage), model.n, args.epsilon)
    except ClaimNeverIssuedError:
        print("naive interval rule: claim never issued (undefined conditional coverage)")
        return 0
    print(f"naive interval [0, E]: conditional coverage = {_fmt(naive.conditional_coverage)}, claim rate = {_fmt(naive.claim_rate)}")
    verdict = "VALID" if naive.conditional_coverage == 1.0 else "INVALID"
    print(f"verdict: {verdict} as a confidence procedure for b")
    return 0


def _cmd_simulate_appendix(args) -> int:
    config = AppendixConfig(
        q_min=args.q_min,
        q_max=args.q_max,
        alpha_frac=float(args.alpha_frac),
        epsilon=args.epsilon,
        n_cal=args.n_cal,
        n_test=args.n_test,
        n_calibration_size=args.cal_size,
        master_seed=args.seed,
        mode=args.mode.replace("-", "_"),
    )
    rows = run_appendix(config)
    emit_csv(rows, args.out)
    min_margin = min(r.exact_prob_SE - r.bound_Esq for r in rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    print(f"min margin exact_prob_SE - bound = {_fmt(min_margin)}")
    return 0


_COMMANDS = {
    "bpci": _cmd_bpci,
    "cp-bound": _cmd_cp_bound,
    "counterexample": _cmd_counterexample,
    "simulate-appendix": _cmd_simulate_appendix,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
