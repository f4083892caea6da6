"""Batch CLI: sweep configurations in, CSV curve data out.

Subcommands: ``horate`` (handover counts), ``datarate`` (the four rate
variants), ``evaluate`` (Q1/Q2 and the continuous relaxation), ``optimize``
(optimal skipping time), ``simulate`` (raw Monte Carlo estimators) and
``validate`` (the analytic-vs-simulation suite).  Figure presets
(``--fig4`` ... ``--fig13``) hard-code the parameter sets of the standard
curves.

Output is CSV with one ``#``-prefixed provenance line carrying the full
effective configuration (seed included), then a header row.  Exit codes:
0 success, 1 invalid configuration, 2 quadrature non-convergence or budget
exhaustion, 3 validation-suite failure.

Values are parsed as single numbers, comma lists, or ``start:step:stop``
ranges (inclusive of the stop within half a step).  ``HOSKIP_THREADS``
sets the worker count for sweep points; rows are emitted in sweep order
regardless.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .crosscheck import run_validation
from .datarate import (BudgetExceededError, REDUCED_ACCURACY, RateQuery,
                       tau1, tau2_approx, tau2_exact, tau2_refined)
from .evaluation import EvaluationQuery, q1, q2, q_tilde
from .handover import expected_handovers_nonskip, handover_probability_skip
from .montecarlo import (McConfig, estimate_n1, estimate_n2, estimate_q2,
                         sample_xi2)
from .optimizer import (SearchConfig, optimal_skipping_time_closed,
                        optimal_skipping_time_numeric)
from .params import (NetworkParams, ParameterError, SkippingPolicy, SpeedLaw)
from .quadrature import ConvergenceError, QuadratureSpec

__all__ = ["main", "run", "load_config", "ScenarioConfig"]

_LAWS = ("deterministic", "erlang2", "exponential", "hyper")


def _make_law(name: str, mean: float) -> SpeedLaw:
    if name == "deterministic":
        return SpeedLaw.deterministic(mean)
    if name == "exponential":
        return SpeedLaw.exponential(mean)
    if name.startswith("erlang"):
        k = int(name[6:]) if len(name) > 6 else 2
        return SpeedLaw.erlang(k, mean)
    if name == "hyper":
        return SpeedLaw.hyper_exponential_balanced(mean)
    raise ParameterError(
        f"law must be one of {_LAWS} (erlangK for shape K), got {name!r}")


def _parse_values(text) -> list[float]:
    """A number, a comma list, or an inclusive start:step:stop range."""
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    text = str(text)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ParameterError(
                f"sweep range must be start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ParameterError(
                f"sweep range must advance, got {text!r}")
        return [float(v) for v in np.arange(start, stop + 0.5 * step, step)]
    return [float(p) for p in text.split(",") if p != ""]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


class ScenarioConfig:
    """Validated bag of effective settings for one CLI run."""

    def __init__(self, settings: dict):
        self.settings = dict(settings)
        lams = _parse_values(settings.get("lambda", 1.0))
        beta = _parse_values(settings.get("beta", 4.0))
        sigma2 = float(settings.get("sigma2", 0.0))
        for lam in lams:
            for b in beta:
                NetworkParams(lam, b, sigma2)
        SkippingPolicy(float(settings.get("s", 50)),
                       float(settings.get("cost", 0.0)),
                       float(settings.get("epsilon", 10.0)))
        self.spec = QuadratureSpec(
            rel_tol=float(settings.get("rel_tol", 1e-8)),
            abs_tol=float(settings.get("abs_tol", 1e-12)),
            max_subdivisions=int(settings.get("max_subdivisions", 200)),
        )
        self.mc = McConfig(
            replications=int(settings.get("replications", 10000)),
            seed=int(settings.get("seed", 0)),
            window_radius_factor=float(
                settings.get("window_radius_factor", 8.0)),
            segment_step=float(settings.get("segment_step", 1e-3)),
        )
        sweepable = [k for k in ("l", "u", "mean", "s_sweep")
                     if k in settings and len(_parse_values(settings[k])) > 1]
        if len(sweepable) > 1:
            raise ParameterError(
                f"sweep axis must be unique, got several: {sweepable}")


def load_config(path: str) -> ScenarioConfig:
    """Load and validate a JSON scenario file (flat key-value object)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParameterError(
                f"config {path} is not valid JSON: {exc.msg} at line "
                f"{exc.lineno} column {exc.colno}") from exc
    if not isinstance(data, dict):
        raise ParameterError(
            f"config {path} must hold a JSON object, got {type(data).__name__}")
    return ScenarioConfig(data)


def _pmap(fn, items):
    """Map preserving order; worker count from HOSKIP_THREADS (default 1)."""
    workers = int(os.environ.get("HOSKIP_THREADS", "1") or "1")
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _emit(out_path, provenance: dict, header: list[str], rows):
    lines = ["# " + json.dumps(provenance, sort_keys=True)]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    text = "\n".join(lines) + "\n"
    if out_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _merge(args, *keys) -> dict:
    """Effective settings: config file first, explicit flags on top."""
    settings = {}
    if getattr(args, "config", None):
        settings.update(load_config(args.config).settings)
    for key in keys:
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            settings[key] = val
    return settings


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON scenario file; flags override it")
    p.add_argument("--output", "-o", help="output CSV path (default stdout)")
    p.add_argument("--seed", type=int, help="RNG seed (default 0)")
    p.add_argument("--reps", type=int, dest="replications",
                   help="Monte Carlo replications")
    p.add_argument("--rel-tol", type=float, dest="rel_tol",
                   help="quadrature relative tolerance")
    p.add_argument("--abs-tol", type=float, dest="abs_tol",
                   help="quadrature absolute tolerance")
    p.add_argument("--max-subdivisions", type=int, dest="max_subdivisions",
                   help="quadrature subdivision budget")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_horate(args) -> int:
    settings = _merge(args, "lambda", "l", "seed", "replications",
                      "rel_tol", "abs_tol", "max_subdivisions")
    if args.fig4:
        settings.setdefault("lambda", "1,3,5")
        settings.setdefault("l", "0:0.05:1.5")
    settings.setdefault("lambda", "1,3,5")
    settings.setdefault("l", "0:0.1:1.5")
    cfg = ScenarioConfig(settings)
    lams = _parse_values(settings["lambda"])
    ls = _parse_values(settings["l"])
    header = ["l"]
    if args.with_n1:
        header += [f"n1_lambda{lam:g}" for lam in lams]
    header += [f"n2_lambda{lam:g}" for lam in lams]

    def point(l):
        row = [l]
        if args.with_n1:
            row += [expected_handovers_nonskip(l, lam) for lam in lams]
        row += [handover_probability_skip(l, lam, cfg.spec) for lam in lams]
        return row

    rows = _pmap(point, ls)
    prov = {"command": "horate", "lambda": lams, "l": ls,
            "with_n1": bool(args.with_n1), "seed": cfg.mc.seed,
            "rel_tol": cfg.spec.rel_tol, "abs_tol": cfg.spec.abs_tol}
    _emit(args.output or settings.get("output"), prov, header, rows)
    return 0


def _cmd_datarate(args) -> int:
    settings = _merge(args, "lambda", "beta", "sigma2", "u", "epsilon",
                      "seed", "replications", "rel_tol", "abs_tol",
                      "max_subdivisions")
    mc_on = bool(args.mc)
    if args.fig5:
        settings.setdefault("u", "0:0.05:0.5")
        mc_on = True
        nets = [(1.0, 4.0), (5.0, 4.0), (3.0, 3.0)]
    elif args.fig6:
        settings.setdefault("lambda", 3)
        settings.setdefault("beta", 3)
        settings.setdefault("epsilon", 5.0)
        settings.setdefault("u", "0:0.05:0.5")
        mc_on = True
        nets = None
    else:
        nets = None
    settings.setdefault("lambda", 3)
    settings.setdefault("beta", 3)
    settings.setdefault("u", "0:0.05:0.5")
    settings.setdefault("rel_tol", REDUCED_ACCURACY.rel_tol)
    cfg = ScenarioConfig(settings)
    us = _parse_values(settings["u"])
    eps = float(settings.get("epsilon", 10.0))
    sigma2 = float(settings.get("sigma2", 0.0))

    if nets is None:
        nets = [(float(_parse_values(settings["lambda"])[0]),
                 float(_parse_values(settings["beta"])[0]))]
    multi = len(nets) > 1
    header = ["u"]
    for lam, beta in nets:
        tag = f"_lam{lam:g}_beta{beta:g}" if multi else ""
        header.append(f"tau2{tag}")
        header.append(f"tau2_approx{tag}")
        if not multi:
            header += ["tau1", f"tau2_refined_eps{eps:g}"]
        if mc_on:
            header += [f"mc_mean{tag}", f"mc_ci99_low{tag}",
                       f"mc_ci99_high{tag}"]

    def point(u):
        row = [u]
        for lam, beta in nets:
            net = NetworkParams(lam, beta, sigma2)
            net0 = NetworkParams(lam, beta, 0.0)
            row.append(tau2_exact(RateQuery(u, net, cfg.spec)))
            row.append(tau2_approx(RateQuery(u, net0, cfg.spec)))
            if not multi:
                row.append(tau1(net, cfg.spec))
                row.append(tau2_refined(RateQuery(u, net0, cfg.spec), eps))
            if mc_on:
                est = sample_xi2(u, net, cfg.mc)
                row += [est.mean, est.ci99_low, est.ci99_high]
        return row

    rows = _pmap(point, us)
    prov = {"command": "datarate", "nets": nets, "sigma2": sigma2, "u": us,
            "epsilon": eps, "mc": mc_on, "seed": cfg.mc.seed,
            "replications": cfg.mc.replications, "rel_tol": cfg.spec.rel_tol,
            "abs_tol": cfg.spec.abs_tol}
    _emit(args.output or settings.get("output"), prov, header, rows)
    return 0


def _cmd_evaluate(args) -> int:
    settings = _merge(args, "lambda", "beta", "s", "cost", "epsilon", "law",
                      "mean", "v", "s_sweep", "seed", "replications",
                      "rel_tol", "abs_tol", "max_subdivisions")
    if args.fig7:
        settings.setdefault("s", 50)
        settings.setdefault("lambda", 5)
        settings.setdefault("beta", 4)
        settings.setdefault("cost", 30.0)
        settings.setdefault("epsilon", 10.0)
        settings.setdefault("law", "deterministic,erlang2,exponential,hyper")
        settings.setdefault("mean", "0.025:0.025:0.5")
    if args.fig8:
        settings.setdefault("lambda", 3)
        settings.setdefault("beta", 3)
        settings.setdefault("cost", 30.0)
        settings.setdefault("v", "0.002,0.004,0.006")
        settings.setdefault("s_sweep", "2:2:120")
    settings.setdefault("lambda", 5)
    settings.setdefault("beta", 4)
    settings.setdefault("s", 50)
    settings.setdefault("cost", 30.0)
    cfg = ScenarioConfig(settings)
    lam = float(_parse_values(settings["lambda"])[0])
    beta = float(_parse_values(settings["beta"])[0])
    net = NetworkParams(lam, beta, float(settings.get("sigma2", 0.0)))
    cost = float(settings.get("cost", 30.0))
    eps = float(settings.get("epsilon", 10.0))
    method = settings.get("rate_method", args.rate_method or "refined")

    if "s_sweep" in settings or args.fig8:
        svals = _parse_values(settings.get("s_sweep", "2:2:120"))
        vs = _parse_values(settings.get("v", "0.002,0.004,0.006"))
        header = ["s"] + [f"qtilde_v{v:g}" for v in vs]

        def point(s):
            return [s] + [q_tilde(s, v, net, cost, cfg.spec) for v in vs]

        rows = _pmap(point, svals)
        prov = {"command": "evaluate", "mode": "s_sweep", "lambda": lam,
                "beta": beta, "cost": cost, "v": vs, "s": svals,
                "seed": cfg.mc.seed, "rel_tol": cfg.spec.rel_tol,
                "abs_tol": cfg.spec.abs_tol}
        _emit(args.output or settings.get("output"), prov, header, rows)
        return 0

    s = float(settings.get("s", 50))
    laws = [t.strip() for t in
            str(settings.get("law", "deterministic")).split(",") if t.strip()]
    means = _parse_values(settings.get("mean", "0.025:0.025:0.5"))
    header = ["mean", "q1"] + [f"q2_{name}" for name in laws]
    policy = SkippingPolicy(s, cost, eps)

    def point(mean):
        laws_built = [_make_law(name, mean) for name in laws]
        row = [mean,
               q1(EvaluationQuery(policy, net, laws_built[0], method,
                                  cfg.spec))]
        for law in laws_built:
            row.append(q2(EvaluationQuery(policy, net, law, method,
                                          cfg.spec)))
        return row

    rows = _pmap(point, means)
    prov = {"command": "evaluate", "mode": "mean_sweep", "lambda": lam,
            "beta": beta, "s": s, "cost": cost, "epsilon": eps,
            "law": laws, "mean": means, "rate_method": method,
            "seed": cfg.mc.seed, "rel_tol": cfg.spec.rel_tol,
            "abs_tol": cfg.spec.abs_tol}
    _emit(args.output or settings.get("output"), prov, header, rows)
    return 0


def _cmd_optimize(args) -> int:
    settings = _merge(args, "lambda", "beta", "cost", "v", "seed",
                      "rel_tol", "abs_tol", "max_subdivisions")
    closed = bool(args.closed)
    if args.fig9:
        settings.setdefault("v", "0.001:0.0005:0.005")
        settings.setdefault("lambda", "1,3,5")
        settings.setdefault("beta", 4)
        settings.setdefault("cost", 50.0)
    if args.fig10:
        settings.setdefault("beta", "2.8:0.2:6")
        settings.setdefault("cost", "30,50,70")
        settings.setdefault("v", 0.001)
        settings.setdefault("lambda", 5)
    if args.fig11:
        settings.setdefault("cost", "10:10:100")
        settings.setdefault("beta", "3,4,5")
        settings.setdefault("v", 0.001)
        settings.setdefault("lambda", 5)
    if args.fig12:
        settings.setdefault("beta", "3:0.25:5")
        settings.setdefault("cost", "30,50,70")
        settings.setdefault("v", 0.005)
        settings.setdefault("lambda", 5)
        closed = True
    if args.fig13:
        settings.setdefault("cost", "30:5:70")
        settings.setdefault("beta", "3,4,5")
        settings.setdefault("v", 0.005)
        settings.setdefault("lambda", 5)
        closed = True
    settings.setdefault("v", 0.005)
    settings.setdefault("lambda", 5)
    settings.setdefault("beta", 4)
    settings.setdefault("cost", 50.0)
    cfg = ScenarioConfig(settings)
    vs = _parse_values(settings["v"])
    lams = _parse_values(settings["lambda"])
    betas = _parse_values(settings["beta"])
    costs = _parse_values(settings["cost"])
    search = SearchConfig()

    multi = [name for name, vals in
             (("v", vs), ("beta", betas), ("cost", costs)) if len(vals) > 1]
    if len(multi) > 2:
        raise ParameterError(
            f"optimize sweeps one axis with one family, got {multi}")
    ranged = [name for name in multi
              if ":" in str(settings.get(name, ""))]
    if len(multi) == 2 and len(ranged) == 1:
        axis = ranged[0]
    else:
        axis = multi[0] if multi else "v"
    family = next((name for name in multi if name != axis), None)
    if len(lams) > 1:
        if family is not None:
            raise ParameterError(
                f"optimize allows one family axis, got lambda plus {family}")
        family = "lambda"
    axis_vals = {"v": vs, "beta": betas, "cost": costs}[axis]
    fam_vals = {"v": vs, "beta": betas, "cost": costs,
                "lambda": lams, None: [None]}[family]

    header = [axis]
    for fv in fam_vals:
        tag = f"_{family}{fv:g}" if family else ""
        header.append(f"sstar{tag}")
        if closed:
            header.append(f"sstar_closed{tag}")

    def point(av):
        vals = {"v": vs[0], "beta": betas[0], "cost": costs[0],
                "lambda": lams[0], axis: av}
        row = [av]
        for fv in fam_vals:
            if family:
                vals[family] = fv
            net = NetworkParams(vals["lambda"], vals["beta"], 0.0)
            res = optimal_skipping_time_numeric(
                vals["v"], net, vals["cost"], search, cfg.spec)
            row.append(res.s_star)
            if closed:
                row.append(optimal_skipping_time_closed(
                    vals["beta"], vals["cost"], cfg.spec))
        return row

    rows = _pmap(point, axis_vals)
    prov = {"command": "optimize", "axis": axis, "family": family,
            "v": vs, "lambda": lams, "beta": betas, "cost": costs,
            "closed": closed, "s_min": search.s_min, "s_max": search.s_max,
            "grid_points": search.grid_points,
            "refine_tol": search.refine_tol, "seed": cfg.mc.seed,
            "rel_tol": cfg.spec.rel_tol, "abs_tol": cfg.spec.abs_tol}
    _emit(args.output or settings.get("output"), prov, header, rows)
    return 0


def _cmd_simulate(args) -> int:
    settings = _merge(args, "lambda", "beta", "sigma2", "u", "l", "s",
                      "cost", "law", "mean", "seed", "replications")
    settings.setdefault("lambda", 3)
    settings.setdefault("beta", 3)
    cfg = ScenarioConfig(settings)
    lam = float(_parse_values(settings["lambda"])[0])
    beta = float(_parse_values(settings["beta"])[0])
    sigma2 = float(settings.get("sigma2", 0.0))
    net = NetworkParams(lam, beta, sigma2)
    estimator = args.estimator

    if estimator == "xi2":
        axis, vals = "u", _parse_values(settings.get("u", "0:0.1:0.4"))
        fn = lambda u: sample_xi2(u, net, cfg.mc)
    elif estimator == "n1":
        axis, vals = "l", _parse_values(settings.get("l", "0.1,0.3,0.6"))
        fn = lambda l: estimate_n1(l, lam, cfg.mc)
    elif estimator == "n2":
        axis, vals = "l", _parse_values(settings.get("l", "0:0.15:1.5"))
        fn = lambda l: estimate_n2(l, lam, cfg.mc)
    else:
        axis, vals = "mean", _parse_values(settings.get("mean", "0.1"))
        s = float(settings.get("s", 50))
        cost = float(settings.get("cost", 30.0))
        law_name = str(settings.get("law", "deterministic"))
        policy = SkippingPolicy(s, cost)

        def fn(mean):
            return estimate_q2(_make_law(law_name, mean), policy, net,
                               cfg.mc)

    header = [axis, "mean", "std_error", "ci99_low", "ci99_high", "n"]
    rows = []
    for v in vals:
        est = fn(v)
        rows.append([v, est.mean, est.std_error, est.ci99_low, est.ci99_high,
                     est.n])
    prov = {"command": "simulate", "estimator": estimator, "lambda": lam,
            "beta": beta, "sigma2": sigma2, axis: vals,
            "seed": cfg.mc.seed, "replications": cfg.mc.replications}
    for extra in ("s", "cost", "law"):
        if extra in settings:
            prov[extra] = settings[extra]
    _emit(args.output or settings.get("output"), prov, header, rows)
    return 0


def _cmd_validate(args) -> int:
    settings = _merge(args, "seed")
    cfg = ScenarioConfig(settings)
    rows = run_validation(fast=bool(args.fast), seed=cfg.mc.seed)
    header = ["stage", "check", "value", "low", "high", "passed"]
    out_rows = [[r.stage, r.check, r.value, r.low, r.high, r.passed]
                for r in rows]
    prov = {"command": "validate", "fast": bool(args.fast),
            "seed": cfg.mc.seed}
    _emit(args.output or settings.get("output"), prov, header, out_rows)
    failed = [r for r in rows if not r.passed]
    stages = sorted({r.stage for r in rows})
    for stage in stages:
        staged = [r for r in rows if r.stage == stage]
        bad = sum(1 for r in staged if not r.passed)
        status = "PASS" if bad == 0 else f"FAIL ({bad}/{len(staged)})"
        elapsed = sum(r.elapsed for r in staged)
        print(f"stage {stage}: {status} [{len(staged)} checks, "
              f"{elapsed:.1f}s]", file=sys.stderr)
    for r in failed:
        print(f"  failed: stage {r.stage} {r.check}: value {r.value!r} "
              f"outside [{r.low!r}, {r.high!r}]", file=sys.stderr)
    return 3 if failed else 0


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="hoskip",
                     description="Handover-skipping model curves and checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("horate", parents=[], help="handover counts vs l")
    _common_flags(p)
    p.add_argument("--lambda", dest="lambda")
    p.add_argument("--l", dest="l")
    p.add_argument("--with-n1", action="store_true",
                   help="add the no-skipping crossing-count columns")
    p.add_argument("--fig4", action="store_true")
    p.set_defaults(fn=_cmd_horate)

    p = sub.add_parser("datarate", help="rate variants vs offset u")
    _common_flags(p)
    for flag in ("--lambda", "--beta", "--sigma2", "--u", "--epsilon"):
        p.add_argument(flag, dest=flag[2:])
    p.add_argument("--mc", action="store_true",
                   help="add Monte Carlo columns")
    p.add_argument("--fig5", action="store_true")
    p.add_argument("--fig6", action="store_true")
    p.set_defaults(fn=_cmd_datarate)

    p = sub.add_parser("evaluate", help="Q1/Q2 vs mean, or q_tilde vs s")
    _common_flags(p)
    for flag in ("--lambda", "--beta", "--s", "--cost", "--epsilon",
                 "--law", "--mean", "--v", "--s-sweep"):
        p.add_argument(flag, dest=flag[2:].replace("-", "_"))
    p.add_argument("--rate-method", choices=("exact", "approx", "refined"))
    p.add_argument("--fig7", action="store_true")
    p.add_argument("--fig8", action="store_true")
    p.set_defaults(fn=_cmd_evaluate)

    p = sub.add_parser("optimize", help="optimal skipping time sweeps")
    _common_flags(p)
    for flag in ("--lambda", "--beta", "--cost", "--v"):
        p.add_argument(flag, dest=flag[2:])
    p.add_argument("--closed", action="store_true",
                   help="add closed-form columns")
    for n in range(9, 14):
        p.add_argument(f"--fig{n}", action="store_true")
    p.set_defaults(fn=_cmd_optimize)

    p = sub.add_parser("simulate", help="raw Monte Carlo estimators")
    _common_flags(p)
    p.add_argument("--estimator", choices=("xi2", "n1", "n2", "q2"),
                   required=True)
    for flag in ("--lambda", "--beta", "--sigma2", "--u", "--l", "--s",
                 "--cost", "--law", "--mean"):
        p.add_argument(flag, dest=flag[2:])
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("validate", help="analytic-vs-simulation suite")
    _common_flags(p)
    p.add_argument("--fast", action="store_true",
                   help="reduced sample budgets (same checks)")
    p.set_defaults(fn=_cmd_validate)
    return parser


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ParameterError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 1
    except BudgetExceededError as exc:
        print(f"computation budget: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
