"""Config-driven experiment runner writing CSV traces and JSON reports.

Config files are INI documents (read with :mod:`configparser`) whose values
are JSON literals; bare words are read as strings and `;` starts a comment.
Example::

    [experiment]
    name = norm_dynamic

    [problem]
    family = power_norm
    center = [0.0, 0.0]

    [feasible]
    kind = box
    lower = [-10, -10]
    upper = [10, 10]

    [solver]
    kind = standard

    [stepsize]
    rule = dynamic
    lambda = 0.5

    [run]
    x1 = [3, 4]
    max_iter = 40

    [checks]
    ids = ["h1", "h3", "t3.4i"]
    q = 1
    eta = 1
    radius = 20

Exit codes: 0 when every requested check holds, 2 when a check fails,
1 on configuration or runtime errors.
"""

from __future__ import annotations

import argparse
import configparser
import copy
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import analysis
from .problems import CATALOG, SharpCertificate, make_problem
from .sets import Ball, Box, Halfspace, WholeSpace
from .solvers import Conditional, Inexact, RunConfig, Standard, run
from .stepsizes import Constant, Diminishing, Dynamic

TRACE_COLUMNS = ("k", "f_value", "gap", "dist", "dist_sq", "stepsize", "step_length",
                 "h1_residual")

CHECK_IDS = ("h1", "h3", "k1", "k2", "k3", "t3.3i", "t3.3ii", "t3.4i", "t3.4ii", "t3.4iii",
             "t3.5i", "t3.5ii", "lemma_sweeps")
_CHECK_RULE = {"k1": "constant", "k2": "diminishing", "k3": "dynamic",
               "t3.3": "constant", "t3.4": "dynamic", "t3.5": "diminishing"}

_PROBLEM_KEYS = {
    "power_norm": {"center", "exponent", "modulus"},
    "piecewise_power": {"center", "outer", "inner"},
    "linear_fractional": {"c", "d", "e", "g"},
}
_FEASIBLE_KEYS = {"box": {"lower", "upper"}, "ball": {"center", "radius"},
                  "halfspace": {"normal", "offset"}, "whole": {"dim"}}
_SOLVER_KEYS = {"kind", "epsilon", "tilt"}
_RULE_KEYS = {"constant": {"v"}, "diminishing": {"c", "s"}, "dynamic": {"lambda"}}
_RUN_KEYS = {"x1", "max_iter", "gap_stop", "seed", "record_points"}
_CHECK_KEYS = {"ids", "delta", "N", "q", "eta", "radius", "h1_tol", "h3_tol", "rtol",
               "sweep_draws", "sweep_steps"}
SECTIONS = ("experiment", "problem", "feasible", "solver", "stepsize", "run", "checks")


class ConfigError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class ExperimentConfig:
    name: str
    problem: dict
    feasible: Optional[dict]
    solver: dict
    stepsize: dict
    run: dict
    checks: dict = field(default_factory=dict)

    @property
    def check_ids(self) -> list:
        return list(self.checks.get("ids", []))


# --------------------------------------------------------------------------
# parsing and printing


def _decode(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw.strip()


def _encode(value) -> str:
    if isinstance(value, str):
        try:
            json.loads(value)
        except json.JSONDecodeError:
            if value == value.strip() and value:
                return value
        return json.dumps(value)
    return json.dumps(value)


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _is_vector(v) -> bool:
    return isinstance(v, list) and len(v) > 0 and all(_is_number(x) for x in v)


def parse_config(text: str) -> ExperimentConfig:
    """Parse and fully validate a config document, or raise :class:`ConfigError`."""
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__",
                                       inline_comment_prefixes=(";",))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([f"syntax: {exc}"]) from None
    errors = []
    data = {}
    for sec in parser.sections():
        if sec not in SECTIONS:
            errors.append(f"{sec}: unknown section")
            continue
        data[sec] = {k: _decode(v) for k, v in parser.items(sec)}
    for sec in ("experiment", "problem", "solver", "stepsize", "run"):
        if sec not in data:
            errors.append(f"{sec}: missing section")
    if errors:
        raise ConfigError(errors)
    cfg = ExperimentConfig(
        name=data["experiment"].get("name"),
        problem=data["problem"],
        feasible=data.get("feasible"),
        solver=data["solver"],
        stepsize=data["stepsize"],
        run=data["run"],
        checks=data.get("checks", {}),
    )
    extra = set(data["experiment"]) - {"name"}
    errors += [f"experiment.{k}: unknown key" for k in sorted(extra)]
    errors += validate_config(cfg)
    if errors:
        raise ConfigError(errors)
    return cfg


def print_config(cfg: ExperimentConfig) -> str:
    parts = {"experiment": {"name": cfg.name}, "problem": cfg.problem, "feasible": cfg.feasible,
             "solver": cfg.solver, "stepsize": cfg.stepsize, "run": cfg.run,
             "checks": cfg.checks}
    lines = []
    for sec in SECTIONS:
        body = parts[sec]
        if body is None or (sec == "checks" and not body):
            continue
        lines.append(f"[{sec}]")
        lines += [f"{k} = {_encode(v)}" for k, v in body.items()]
        lines.append("")
    return "\n".join(lines)


def validate_config(cfg: ExperimentConfig) -> list:
    errors = []

    def unknown(section, keys, allowed):
        errors.extend(f"{section}.{k}: unknown key" for k in sorted(set(keys) - set(allowed)))

    if not isinstance(cfg.name, str) or not cfg.name or any(ch in cfg.name for ch in "/;"):
        errors.append("experiment.name: must be a non-empty string without '/' or ';'")

    family = cfg.problem.get("family")
    if family not in _PROBLEM_KEYS:
        errors.append(f"problem.family: unknown family {family!r} (known: {sorted(CATALOG)})")
    else:
        unknown("problem", cfg.problem, _PROBLEM_KEYS[family] | {"family"})

    if cfg.feasible is not None:
        kind = cfg.feasible.get("kind")
        if kind not in _FEASIBLE_KEYS:
            errors.append(f"feasible.kind: unknown kind {kind!r}")
        else:
            unknown("feasible", cfg.feasible, _FEASIBLE_KEYS[kind] | {"kind"})

    s = cfg.solver
    unknown("solver", s, _SOLVER_KEYS)
    if s.get("kind") not in ("standard", "inexact", "conditional"):
        errors.append(f"solver.kind: unknown kind {s.get('kind')!r}")
    eps = s.get("epsilon", 0.0)
    if not _is_number(eps) or eps < 0:
        errors.append("solver.epsilon: must be a nonnegative number")
    elif s.get("kind") == "inexact" and eps <= 0:
        errors.append("solver.epsilon: inexact solver needs epsilon > 0")
    elif s.get("kind") in ("standard", "conditional") and eps != 0:
        errors.append("solver.epsilon: only the inexact solver takes epsilon")
    tilt = s.get("tilt", 0.0)
    if not _is_number(tilt) or not 0 <= tilt <= 1:
        errors.append("solver.tilt: must lie in [0, 1]")

    st = cfg.stepsize
    rule = st.get("rule")
    if rule not in _RULE_KEYS:
        errors.append(f"stepsize.rule: unknown rule {rule!r}")
    else:
        unknown("stepsize", st, _RULE_KEYS[rule] | {"rule"})
        for key in sorted(_RULE_KEYS[rule]):
            if key not in st:
                errors.append(f"stepsize.{key}: required for the {rule} rule")
        if rule == "constant" and "v" in st and not (_is_number(st["v"]) and st["v"] > 0):
            errors.append("stepsize.v: must be positive")
        if rule == "diminishing":
            if "c" in st and not (_is_number(st["c"]) and st["c"] > 0):
                errors.append("stepsize.c: must be positive")
            if "s" in st and not (_is_number(st["s"]) and 0 < st["s"] < 1):
                errors.append("stepsize.s: s must lie in (0,1) (diminishing rule c*k^-s)")
        if rule == "dynamic" and "lambda" in st:
            lam = st["lambda"]
            lams = lam if isinstance(lam, list) else [lam]
            if not lams or not all(_is_number(x) and 0 < x < 2 for x in lams):
                errors.append("stepsize.lambda: relaxation values must lie in (0, 2)")

    r = cfg.run
    unknown("run", r, _RUN_KEYS)
    if not _is_vector(r.get("x1")):
        errors.append("run.x1: must be a list of numbers")
    mi = r.get("max_iter")
    if not (isinstance(mi, int) and not isinstance(mi, bool) and mi >= 1):
        errors.append("run.max_iter: must be an integer >= 1")
    gs = r.get("gap_stop")
    if gs is not None and not (_is_number(gs) and gs >= 0):
        errors.append("run.gap_stop: must be null or a nonnegative number")
    seed = r.get("seed", 0)
    if not (isinstance(seed, int) and not isinstance(seed, bool) and seed >= 0):
        errors.append("run.seed: must be a nonnegative integer")
    if not isinstance(r.get("record_points", False), bool):
        errors.append("run.record_points: must be true or false")

    c = cfg.checks
    unknown("checks", c, _CHECK_KEYS)
    ids = c.get("ids", [])
    if not isinstance(ids, list) or not all(isinstance(i, str) for i in ids):
        errors.append("checks.ids: must be a list of check ids")
        ids = []
    for cid in ids:
        if cid not in CHECK_IDS:
            errors.append(f"checks.ids: unknown check {cid!r}")
            continue
        need = _CHECK_RULE.get(cid) or _CHECK_RULE.get(cid[:4])
        if need and rule in _RULE_KEYS and rule != need:
            errors.append(f"checks.ids: {cid} requires {need} rule")
    if any(i in ("k1", "k2", "k3") for i in ids):
        d = c.get("delta")
        if not (_is_number(d) and d > 0):
            errors.append("checks.delta: complexity checks need delta > 0")
    for key in ("q", "eta", "radius", "h1_tol", "h3_tol", "rtol"):
        if key in c and not (_is_number(c[key]) and c[key] > 0):
            errors.append(f"checks.{key}: must be positive")
    if "N" in c and c["N"] is not None and not (isinstance(c["N"], int) and c["N"] >= 1):
        errors.append("checks.N: must be null or an integer >= 1")
    for key in ("sweep_draws", "sweep_steps"):
        if key in c and not (isinstance(c[key], int) and c[key] >= 1):
            errors.append(f"checks.{key}: must be an integer >= 1")

    if not errors:
        try:
            problem, _, _, _ = build(cfg)
        except (ValueError, TypeError) as exc:
            errors.append(f"problem: {exc}")
        else:
            if len(r["x1"]) != problem.dim:
                errors.append(f"run.x1: expected {problem.dim} coordinates")
            if any(i.startswith("t3") for i in ids):
                if problem.sharp is None and not all(k in c for k in ("q", "eta", "radius")):
                    errors.append("checks: envelope checks need q, eta and radius "
                                  "(the problem has no default sharpness certificate)")
    return errors


# --------------------------------------------------------------------------
# building objects


def _feasible_from(spec: Optional[dict]):
    if spec is None:
        return None
    kind = spec["kind"]
    if kind == "box":
        return Box(spec["lower"], spec["upper"])
    if kind == "ball":
        return Ball(spec["center"], spec["radius"])
    if kind == "halfspace":
        return Halfspace(spec["normal"], spec["offset"])
    return WholeSpace(int(spec["dim"]))


def build(cfg: ExperimentConfig):
    """Problem, solver kind, stepsize rule and run settings of a config."""
    params = {k: v for k, v in cfg.problem.items() if k != "family"}
    problem = make_problem(cfg.problem["family"], feasible=_feasible_from(cfg.feasible), **params)
    s = cfg.solver
    eps = float(s.get("epsilon", 0.0))
    if s["kind"] == "inexact":
        kind = Inexact(eps, float(s.get("tilt", 0.0)))
    elif s["kind"] == "conditional":
        kind = Conditional()
    else:
        kind = Standard()
    st = cfg.stepsize
    if st["rule"] == "constant":
        rule = Constant(st["v"])
    elif st["rule"] == "diminishing":
        rule = Diminishing(st["c"], st["s"])
    else:
        rule = Dynamic(st["lambda"], target=problem.optimal_value + eps, p=problem.holder.order)
    r = cfg.run
    run_cfg = RunConfig(x1=r["x1"], max_iter=r["max_iter"], gap_stop=r.get("gap_stop"),
                        record_points=r.get("record_points", False),
                        random_seed=r.get("seed", 0))
    return problem, kind, rule, run_cfg


# --------------------------------------------------------------------------
# running


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def emit_trace(trace, path: str) -> None:
    u = trace.dist_sq
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for i, rec in enumerate(trace.records):
            row = [rec.f_value, rec.gap, rec.dist, u[i], rec.stepsize, rec.step_length,
                   rec.h1_residual]
            w.writerow([rec.k] + [format(float(v), ".17g") for v in row])


def emit_report(report: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(_clean(report), fh, indent=2, allow_nan=False)
        fh.write("\n")


def _fit_dict(fit):
    if fit is None:
        return None
    return {"model": fit.model, "rate": fit.rate, "amplitude": fit.amplitude,
            "floor": fit.floor, "r_squared": fit.r_squared, "window": list(fit.window),
            "reliable": fit.reliable}


def run_checks(cfg: ExperimentConfig, problem, rule, trace) -> list:
    c = cfg.checks
    out = []
    for cid in cfg.check_ids:
        if cid == "h1":
            tol = c.get("h1_tol", analysis.RESIDUAL_TOL)
            res = analysis.check_h1(trace)
            out.append({"id": cid, "holds": res <= tol, "residual": res,
                        "vacuous": res == -math.inf, "params": {"tol": tol}})
        elif cid == "h3":
            tol = c.get("h3_tol", analysis.H3_TOL)
            res = analysis.check_h3(trace)
            out.append({"id": cid, "holds": res <= tol, "residual": res,
                        "params": {"tol": tol}})
        elif cid in ("k1", "k2", "k3"):
            rep = analysis.complexity_budget(cid.upper(), problem, rule, trace.constants,
                                             c["delta"], cfg.run["x1"])
            rep = analysis.check_complexity(trace, rep)
            out.append({"id": cid, "holds": rep.holds, "K": rep.K, "K_exact": rep.K_exact,
                        "value_bound": rep.value_bound, "achieved_min": rep.achieved_min,
                        "achieved_at": rep.achieved_at, "params": {"delta": rep.delta}})
        elif cid.startswith("t3"):
            if all(k in c for k in ("q", "eta", "radius")):
                cert = SharpCertificate(c["q"], c["eta"], c["radius"])
            else:
                cert = problem.sharp
            rep = analysis.envelope_check(trace, cid, cert, N=c.get("N"), problem=problem,
                                          rtol=c.get("rtol", 1e-6))
            out.append({"id": cid, "holds": rep.holds, "status": rep.status,
                        "reason": rep.reason, "N": rep.N, "floor": rep.floor,
                        "required_tau": rep.required_tau, "max_violation": rep.max_violation,
                        "fit": _fit_dict(rep.fit), "extra": rep.extra,
                        "params": {"q": cert.order, "eta": cert.modulus,
                                   "radius": cert.radius}})
        else:  # lemma_sweeps
            draws = c.get("sweep_draws", 100)
            steps = c.get("sweep_steps", 10_000)
            seed = cfg.run.get("seed", 0)
            results = (analysis.lemma22_sweep(draws, steps, seed)
                       + analysis.lemma23_sweep(draws, steps, seed))
            out.append({"id": cid, "holds": all(r.holds for r in results),
                        "results": [{"name": r.name, "draws": r.draws,
                                     "violations": r.violations, "worst_excess": r.worst,
                                     "holds": r.holds} for r in results],
                        "params": {"draws": draws, "steps": steps}})
    return out


def run_experiment(cfg: ExperimentConfig, out_dir: str, quiet: bool = True) -> int:
    """Run one experiment, write its trace and report, return the exit code."""
    if not os.path.isdir(out_dir):
        print(f"error: output directory {out_dir!r} does not exist", file=sys.stderr)
        return 1
    try:
        problem, kind, rule, run_cfg = build(cfg)
        trace = run(kind, problem, rule, run_cfg)
        checks = run_checks(cfg, problem, rule, trace)
    except (ValueError, TypeError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    gaps = trace.gaps
    summary = "pass" if all(ch["holds"] for ch in checks) else "fail"
    report = {
        "experiment": cfg.name,
        "config": {"problem": cfg.problem, "feasible": cfg.feasible, "solver": cfg.solver,
                   "stepsize": cfg.stepsize, "run": cfg.run, "checks": cfg.checks},
        "checks": checks,
        "summary": summary,
        "run": {"iterations": len(trace), "terminated_reason": trace.terminated_reason,
                "min_gap": float(gaps.min()), "final_gap": float(gaps[-1]),
                "final_dist": trace.final_dist, "max_iterate_norm": trace.max_iterate_norm},
    }
    try:
        emit_trace(trace, os.path.join(out_dir, f"{cfg.name}.trace.csv"))
        emit_report(report, os.path.join(out_dir, f"{cfg.name}.report.json"))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not quiet:
        print(f"{cfg.name}: {len(trace)} iterations ({trace.terminated_reason}), "
              f"min gap {gaps.min():.6g}")
        for ch in checks:
            print(f"  {ch['id']}: {'pass' if ch['holds'] else 'FAIL'}")
    for ch in checks:
        if not ch["holds"]:
            detail = ch.get("reason") or ch.get("residual") or ""
            print(f"check {ch['id']} failed: {detail}", file=sys.stderr)
    return 0 if summary == "pass" else 2


def with_override(cfg: ExperimentConfig, key: str, value) -> ExperimentConfig:
    """Copy of ``cfg`` with ``section.key`` replaced, re-validated."""
    sec, _, name = key.partition(".")
    if sec not in SECTIONS or not name:
        raise ConfigError([f"{key}: expected section.key"])
    new = copy.deepcopy(cfg)
    if sec == "experiment":
        if name != "name":
            raise ConfigError([f"{key}: unknown key"])
        new.name = value
    else:
        body = getattr(new, sec)
        if body is None:
            body = {}
            setattr(new, sec, body)
        body[name] = value
    errors = validate_config(new)
    if errors:
        raise ConfigError(errors)
    return new


# --------------------------------------------------------------------------
# entry point


def _load(path: str) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config(fh.read())


def _value_label(v) -> str:
    return json.dumps(v).replace(" ", "").replace("/", "_")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="qsubgrad",
                                 description="Run projected quasi-subgradient experiments.")
    sub = ap.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one experiment")
    p_sweep = sub.add_parser("sweep", help="run a one-parameter sweep")
    for p in (p_run, p_sweep):
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=os.environ.get("QSUB_OUT_DIR"))
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--quiet", action="store_true")
    p_sweep.add_argument("--param", required=True, help="section.key to vary")
    p_sweep.add_argument("--values", required=True, help="comma-separated JSON values")
    args = ap.parse_args(argv)

    if args.out is None:
        print("error: no output directory (use --out or QSUB_OUT_DIR)", file=sys.stderr)
        return 1
    try:
        cfg = _load(args.config)
        if args.seed is not None:
            cfg = with_override(cfg, "run.seed", args.seed)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.command == "run":
        return run_experiment(cfg, args.out, quiet=args.quiet)

    codes = []
    rows = []
    for raw in args.values.split(","):
        value = _decode(raw)
        try:
            member = with_override(cfg, args.param, value)
            member.name = f"{cfg.name}_{args.param.replace('.', '_')}_{_value_label(value)}"
        except ConfigError as exc:
            for err in exc.errors:
                print(f"config error ({args.param}={raw}): {err}", file=sys.stderr)
            codes.append(1)
            continue
        code = run_experiment(member, args.out, quiet=args.quiet)
        codes.append(code)
        rows.append({"value": value, "name": member.name, "exit_code": code})
    if os.path.isdir(args.out):
        emit_report({"sweep": cfg.name, "param": args.param, "members": rows},
                    os.path.join(args.out, f"{cfg.name}.sweep.json"))
    if 1 in codes:
        return 1
    return 2 if 2 in codes else 0


if __name__ == "__main__":
    sys.exit(main())
