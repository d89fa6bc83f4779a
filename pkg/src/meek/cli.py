"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 input-data error,
4 numeric non-convergence.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import benchmark, config, discrimination, empirical, inference, series, svg, trajectory
from .laws import InvestmentSchedule

EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _band(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX, got {text!r}") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--config", metavar="PATH", help="YAML config file (overrides the preset)")
    g.add_argument("--preset", metavar="NAME", help=f"named preset (default {config.DEFAULT_PRESET})")
    g.add_argument("--format", choices=("csv", "json"), help="output format")
    g.add_argument("--plot", metavar="PATH.svg", help="also write an SVG line chart")
    g.add_argument("--seed", type=int, default=0, help="random seed for Monte-Carlo runs")
    g.add_argument("--horizon", type=float, metavar="YEARS")
    g.add_argument("--step", type=float, metavar="YEARS")
    g.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="meek", description="Meek-vs-SOTA capability forecasting.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("trajectory", parents=[common], help="training loss difference over time")
    t.add_argument("--gi-sweep", type=_floats, metavar="G1,G2,...")
    t.add_argument("--capital-sweep", type=_floats, metavar="USD1,USD2,...")
    t.add_argument("--stagnate-after", type=float, metavar="YEARS",
                   help="SOTA investment stops growing after YEARS")

    i = sub.add_parser("inflection", parents=[common], help="closed-form peak-advantage time")
    i.add_argument("--alpha", type=float, help="override the scaling exponent")

    sub.add_parser("inference", parents=[common], help="inference loss difference and crossover")

    b = sub.add_parser("benchmark", parents=[common], help="p-step benchmark gap series")
    b.add_argument("--p", type=_ints, default=[1, 2, 5], metavar="P1,P2,...")
    b.add_argument("--fit", metavar="FIT.json", help="sigmoid fit JSON (from fit-sigmoid)")

    s = sub.add_parser("sprt", parents=[common], help="expected discrimination tokens")
    s.add_argument("--delta-l", type=float, metavar="NATS")
    s.add_argument("--alpha", type=float, help="error rate alpha (and beta unless given)")
    s.add_argument("--beta", type=float)
    s.add_argument("--slowdown", type=float)
    s.add_argument("--hypothesis", choices=("A", "B"), default="A")
    s.add_argument("--monte-carlo", type=int, metavar="RUNS",
                   help="also simulate RUNS tests on a random token pair at --delta-l")
    s.add_argument("--alphabet", type=int, default=256)
    s.add_argument("--max-tokens", type=int, default=10**7)
    s.add_argument("--series", action="store_true",
                   help="tokens needed over the scenario's time grid")

    f = sub.add_parser("fit-sigmoid", parents=[common], help="fit a benchmark-vs-loss sigmoid")
    f.add_argument("csv", metavar="DATA.csv")
    f.add_argument("--score-scale", type=float, default=1.0, help="100 for percentage scores")

    e = sub.add_parser("empirical", parents=[common], help="leaderboard price-band gap")
    e.add_argument("csv", metavar="SNAPSHOT.csv")
    e.add_argument("--band", type=_band, default=(0.5, 1.0), metavar="MIN:MAX")
    e.add_argument("--bucket", default="monthly", help="monthly, quarterly, yearly or <n>d")
    e.add_argument("--param-threshold", type=float, metavar="PARAMS",
                   help="band by parameter count instead of price")
    e.add_argument("--score-scale", type=float, default=1.0, help="100 for percentage scores")
    e.add_argument("--lenient", action="store_true", help="skip invalid rows instead of failing")
    return p


def _run_config(args) -> config.RunConfig:
    overrides: dict = {"scenario": {}, "output": {}}
    if args.horizon is not None:
        overrides["scenario"]["horizon"] = args.horizon
    if args.step is not None:
        overrides["scenario"]["step"] = args.step
    if args.format is not None:
        overrides["output"]["format"] = args.format
    if args.plot is not None:
        overrides["output"]["plot"] = args.plot
    return config.load(args.preset, args.config, overrides)


def _read_input(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_DATA) from None


class _Output:
    def __init__(self, args, fmt: str):
        self.path = args.out
        self.fmt = fmt
        self.stdout = sys.stdout

    def emit(self, text: str, suffix: str = "") -> None:
        if self.path is None:
            self.stdout.write(text)
            return
        path = Path(self.path)
        if suffix:
            path = path.with_name(f"{path.stem}_{suffix}{path.suffix}")
        path.write_text(text, encoding="utf-8")


def _key(v: float) -> str:
    return repr(float(v))


def cmd_trajectory(args, rc: config.RunConfig, out: _Output):
    cfg = rc.scenario
    if args.stagnate_after is not None:
        cfg = replace(cfg, sota_schedule=InvestmentSchedule.stagnating(cfg.rates.g_i, args.stagnate_after))
    if args.gi_sweep and args.capital_sweep:
        raise CliError("use only one of --gi-sweep and --capital-sweep", EXIT_CONFIG)
    try:
        if args.gi_sweep:
            runs, col = trajectory.growth_sweep(cfg, args.gi_sweep), "g_i"
        elif args.capital_sweep:
            runs, col = trajectory.capital_sweep(cfg, args.capital_sweep), "sota_budget_t0"
        else:
            runs, col = None, None
    except ValueError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from None
    if runs is None:
        pts = trajectory.trajectory_series(cfg)
        out.emit(series.dump([p.as_record() for p in pts], out.fmt))
        plot = {"delta": [(p.t, p.delta) for p in pts]}
    else:
        plot, combined = {}, []
        for value, pts in runs.items():
            recs = series.tag([p.as_record() for p in pts], **{col: value})
            if out.path:
                out.emit(series.dump(recs, out.fmt), suffix=f"{col}-{_key(value)}")
            combined += recs
            plot[f"{col}={value:g}"] = [(p.t, p.delta) for p in pts]
        if not out.path:
            out.emit(series.dump(combined, out.fmt))
    return plot, dict(title="Training loss difference (meek - SOTA)", xlabel="years",
                      ylabel="nats/token")


def cmd_inflection(args, rc: config.RunConfig, out: _Output):
    cfg = rc.scenario
    alpha = args.alpha if args.alpha is not None else cfg.law.alpha
    if args.alpha is not None:
        try:
            cfg = replace(cfg, law=cfg.law.with_alpha(alpha))
        except ValueError as exc:
            raise CliError(f"--alpha: {exc}", EXIT_CONFIG) from None
    try:
        closed = trajectory.inflection_time(cfg.rates, alpha)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from None
    numeric = trajectory.numeric_peak_time(replace(cfg, sota_schedule=None))
    r = cfg.rates
    rec = {"g_h": r.g_h, "g_alg": r.g_alg, "g_i": r.g_i, "alpha": alpha,
           "inflection_time": closed, "numeric_peak_time": numeric}
    out.emit(series.dump([rec], out.fmt))
    print(f"inflection time: {closed:.3f} years (g_h={r.g_h:g}, g_alg={r.g_alg:g}, "
          f"g_i={r.g_i:.4g}, alpha={alpha:g})", file=sys.stderr)
    return None, {}


def cmd_inference(args, rc: config.RunConfig, out: _Output):
    icfg = rc.inference
    pts = inference.inference_series(icfg)
    out.emit(series.dump([p.as_record() for p in pts], out.fmt))
    tx = inference.crossover_time(icfg)
    print("crossover: " + (f"{tx:.6f} years" if tx is not None
                           else f"no crossover <= {icfg.sota.horizon:g} years"), file=sys.stderr)
    train = trajectory.trajectory_series(icfg.sota)
    return ({"inference": [(p.t, p.delta) for p in pts], "training": [(p.t, p.delta) for p in train]},
            dict(title="Loss difference: inference vs training", xlabel="years", ylabel="nats/token"))


def _load_fit(args, rc: config.RunConfig) -> benchmark.SigmoidFit:
    if args.fit:
        try:
            d = json.loads(_read_input(args.fit))
            return benchmark.SigmoidFit(*(float(d[k]) for k in ("amplitude", "k", "x0", "b")))
        except (KeyError, ValueError, TypeError) as exc:
            raise CliError(f"{args.fit}: bad fit file ({exc})", EXIT_DATA) from None
    if rc.sigmoid is None:
        raise CliError("sigmoid: no fit configured; pass --fit or set the sigmoid section", EXIT_CONFIG)
    return rc.sigmoid


def cmd_benchmark(args, rc: config.RunConfig, out: _Output):
    fit = _load_fit(args, rc)
    try:
        gaps = benchmark.benchmark_gap_series(rc.scenario, fit, args.p)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from None
    recs = [{"t": t, "p": p, "gap": g} for p, pts in gaps.items() for t, g in pts]
    out.emit(series.dump(recs, out.fmt))
    return ({f"p={p}": pts for p, pts in gaps.items()},
            dict(title="Benchmark gap (SOTA - meek)", xlabel="years", ylabel="score"))


def cmd_sprt(args, rc: config.RunConfig, out: _Output):
    try:
        alpha = args.alpha if args.alpha is not None else rc.sprt.alpha_err
        beta = args.beta if args.beta is not None else (alpha if args.alpha is not None else rc.sprt.beta_err)
        slowdown = args.slowdown if args.slowdown is not None else rc.sprt.slowdown
        cfg = discrimination.SprtConfig(alpha, beta, slowdown)
    except ValueError as exc:
        raise CliError(f"sprt: {exc}", EXIT_CONFIG) from None
    if args.series:
        pts = discrimination.discrimination_series(rc.scenario, cfg)
        out.emit(series.dump([{"t": t, "expected_tokens": n} for t, n in pts], out.fmt))
        return ({f"slowdown={cfg.slowdown:g}": pts},
                dict(title="Tokens to discriminate SOTA vs meek", xlabel="years",
                     ylabel="expected tokens", logy=True))
    if args.delta_l is None:
        raise CliError("sprt: give --delta-l or --series", EXIT_CONFIG)
    try:
        expected = discrimination.expected_tokens_general(args.delta_l, cfg, args.hypothesis)
    except ValueError as exc:
        raise CliError(f"sprt: {exc}", EXIT_CONFIG) from None
    rec = {"delta_l": args.delta_l, "alpha_err": cfg.alpha_err, "beta_err": cfg.beta_err,
           "slowdown": cfg.slowdown, "hypothesis": args.hypothesis, "expected_tokens": expected}
    if args.monte_carlo:
        if args.delta_l <= 0:
            raise CliError("sprt: Monte-Carlo needs --delta-l > 0", EXIT_CONFIG)
        rng = np.random.default_rng(np.random.SeedSequence([args.seed, 0x5EED]))
        pA, pB = discrimination.random_pair(args.delta_l, args.alphabet, rng)
        # tokens come from whichever model is the true one
        p0 = pA if args.hypothesis == "A" else pB
        report = discrimination.monte_carlo_expected_tokens(
            p0, pA, pB, cfg, args.monte_carlo, args.seed, args.max_tokens)
        rec.update({f"mc_{k}": v for k, v in report.as_dict().items()})
    out.emit(series.dump([rec], out.fmt))
    return None, {}


def cmd_fit_sigmoid(args, rc: config.RunConfig, out: _Output):
    text = _read_input(args.csv)
    try:
        pts = benchmark.read_loss_score_csv(text, args.score_scale)
    except ValueError as exc:
        raise CliError(f"{args.csv}: {exc}", EXIT_DATA) from None
    try:
        res = benchmark.fit_sigmoid(pts)
    except benchmark.InsufficientDataError as exc:
        raise CliError(f"{args.csv}: {exc}", EXIT_DATA) from None
    except benchmark.SigmoidFitError as exc:
        raise CliError(f"{exc} (best so far: {exc.best})", EXIT_NUMERIC) from None
    if out.fmt == "json":
        out.emit(json.dumps(res.as_dict(), indent=2) + "\n")
    else:
        out.emit(series.to_csv([res.as_dict()]))
    xs = np.linspace(min(p.loss for p in pts), max(p.loss for p in pts), 100)
    return ({"fit": [(float(x), float(benchmark.sigmoid_score(res.fit, x))) for x in xs],
             "data": sorted((p.loss, p.score) for p in pts)},
            dict(title="Benchmark score vs loss", xlabel="loss (nats/token)", ylabel="score"))


def cmd_empirical(args, rc: config.RunConfig, out: _Output):
    text = _read_input(args.csv)
    try:
        recs = empirical.parse_records(text, strict=not args.lenient, score_scale=args.score_scale)
    except empirical.RecordError as exc:
        raise CliError(f"{args.csv}:\n  " + "\n  ".join(exc.problems), EXIT_DATA) from None
    if not recs:
        raise CliError(f"{args.csv}: no records", EXIT_DATA)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", empirical.EmptyBandWarning)
            if args.param_threshold is not None:
                gaps = empirical.param_band_gap_series(recs, args.param_threshold, args.bucket)
            else:
                gaps = empirical.gap_series(recs, args.band, args.bucket)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_DATA if "parameter" in str(exc) else EXIT_CONFIG) from None
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    out.emit(empirical.gaps_to_csv(gaps) if out.fmt == "csv" else empirical.gaps_to_json(gaps) + "\n")
    origin = gaps[0].date
    yrs = lambda d: (d - origin).days / 365.25  # noqa: E731
    return ({"gap": [(yrs(p.date), p.gap) for p in gaps if p.gap is not None]},
            dict(title=f"Score gap from {origin.isoformat()}", xlabel="years", ylabel="score gap"))


COMMANDS = {
    "trajectory": cmd_trajectory, "inflection": cmd_inflection, "inference": cmd_inference,
    "benchmark": cmd_benchmark, "sprt": cmd_sprt, "fit-sigmoid": cmd_fit_sigmoid,
    "empirical": cmd_empirical,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = _run_config(args)
        out = _Output(args, rc.format)
        plot, style = COMMANDS[args.command](args, rc, out)
        if rc.plot:
            if plot is None:
                raise CliError(f"--plot needs a series-producing command, not {args.command}",
                               EXIT_CONFIG)
            svg.write_chart(rc.plot, plot, **style)
    except config.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    return 0


if __name__ == "__main__":
    sys.exit(main())
