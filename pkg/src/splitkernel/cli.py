"""Command-line front end.

Usage:
    splitkernel check --kernel laplace:n=1 --p 2 --q 2 --u "x^0" --v "x^0"
    splitkernel probe --kernel stieltjes:lambda=1 --p 2 --q 2 --region one
    splitkernel glue --kernel struve:alpha=1 --p 2 --q 2 --u "x^-2" --v "x^2"
    splitkernel struve-eval --alpha 1 --x 0.5,12,50
    splitkernel table --kernel laplace --p 2 --q 2 --beta -1,1,0.25
    splitkernel replay report.json

Exit status: 0 decided, 1 replay or table mismatch, 2 configuration error,
3 inconclusive.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import analyzer, report
from .gluing import (
    GluingInstance,
    HypothesisViolated,
    struve_gluing_instance,
    verify_equivalence,
)
from .hardy import (
    BOUNDED,
    INCONCLUSIVE,
    SUFFICIENT_ONLY,
    UNBOUNDED,
    ConditionVerdict,
    ExponentOrderViolation,
    InequalityInstance,
    check_boundedness,
)
from .kernels import ParamOutOfRange, PhiMap, UnknownKernel, parse_kernel
from .numerics import DEFAULT_GRID, QuadratureError, log_grid
from .probe import GROWTH_DETECTED, SideConditionViolated, extremal_ratio_scan
from .spaces import Exponent, PowerLogWeight, parse_weight
from .specialfn import CROSSOVER, struve, struve_asymptotic, struve_series

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_INCONCLUSIVE = 3

TABLE_KERNELS = ("sine", "stieltjes", "struve", "laplace")
_TABLE_BETA = {"laplace": (-1.0, 1.0, 0.25), "stieltjes": (-1.0, 1.0, 0.25),
               "sine": (-0.5, 2.0, 0.25), "struve": (-0.5, 4.5, 0.25)}
_BOUNDARY = 0.1


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    kernel: Optional[str] = None
    p: str = "2"
    q: str = "2"
    u: str = "x^0"
    v: str = "x^0"
    grid: Optional[Tuple[float, float, int]] = None
    rel_tol: float = 1e-7
    region: str = "one"
    alpha: Optional[float] = None
    x: List[float] = field(default_factory=list)
    beta: Optional[Tuple[float, float, float]] = None
    glue: Dict[str, str] = field(default_factory=dict)
    out: Optional[str] = None
    format: str = "text"

    def grid_points(self, default: Tuple[float, float, int] = DEFAULT_GRID) -> np.ndarray:
        lo, hi, per = self.grid if self.grid is not None else default
        return log_grid(lo, hi, int(per))


def _grid_arg(text: str) -> Tuple[float, float, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be lo,hi,perDecade")
    try:
        lo, hi, per = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if not (0 < lo < hi) or per < 1:
        raise argparse.ArgumentTypeError("grid needs 0 < lo < hi and perDecade >= 1")
    return lo, hi, per


def _range_arg(text: str) -> Tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("range must be lo,hi,step")
    try:
        lo, hi, step = (float(s) for s in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    if not step > 0 or hi < lo:
        raise argparse.ArgumentTypeError("range needs lo <= hi and step > 0")
    return lo, hi, step


def _floats_arg(text: str) -> List[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splitkernel",
                                     description="Weighted norm inequalities for splitting-kernel transforms.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, kernel_required=True):
        sp.add_argument("--kernel", required=kernel_required,
                        help="catalog kernel, e.g. stieltjes:lambda=1, struve:alpha=1, laplace:n=2")
        sp.add_argument("--p", default="2", help="exponent on the f-side (number or inf)")
        sp.add_argument("--q", default="2", help="exponent on the Tf-side (number or inf)")
        sp.add_argument("--u", default="x^0", help="weight c*x^a*(1+x)^b on the Tf-side")
        sp.add_argument("--v", default="x^0", help="weight c*x^a*(1+x)^b on the f-side")
        sp.add_argument("--grid", type=_grid_arg, help="supremum grid lo,hi,perDecade")
        sp.add_argument("--rel-tol", type=float, default=1e-7)
        output(sp)

    def output(sp):
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("text", "structured"), default="text")

    common(sub.add_parser("check", help="decide boundedness from the Hardy-type conditions"))
    sp = sub.add_parser("probe", help="scan operator ratios over an extremal family")
    common(sp)
    sp.add_argument("--region", choices=("one", "two"), default="one")

    sp = sub.add_parser("glue", help="compare split and joint Hardy-type conditions")
    common(sp, kernel_required=False)
    for name in ("f", "g", "s1", "s2", "w1", "w2"):
        sp.add_argument(f"--{name}", help=f"power-log weight {name} (explicit gluing data)")
    sp.add_argument("--psi", help="kappa,m for psi(t) = kappa*t^m (explicit gluing data)")

    sp = sub.add_parser("struve-eval", help="evaluate the Struve function H_alpha")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--x", type=_floats_arg, required=True, help="comma-separated arguments")
    output(sp)

    sp = sub.add_parser("table", help="sweep power weights and compare with closed forms")
    common(sp)
    sp.add_argument("--beta", type=_range_arg, help="beta sweep lo,hi,step")

    sp = sub.add_parser("replay", help="re-run the configuration stored in a structured report")
    sp.add_argument("report", help="path of a structured report")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("kernel", "p", "q", "u", "v", "grid", "region", "alpha", "x", "beta", "out", "format"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "rel_tol", None) is not None:
        cfg.rel_tol = args.rel_tol
    if args.command == "glue":
        cfg.glue = {k: getattr(args, k) for k in ("f", "g", "s1", "s2", "w1", "w2", "psi")
                    if getattr(args, k) is not None}
    return cfg


def config_from_dict(data: Dict[str, Any]) -> RunConfig:
    cfg = RunConfig(command=data["command"])
    for key, val in data.items():
        if key == "command" or not hasattr(cfg, key):
            continue
        if key in ("grid", "beta") and val is not None:
            val = tuple(val)
            if key == "grid":
                val = (float(val[0]), float(val[1]), int(val[2]))
        if key in ("p", "q"):
            val = "inf" if isinstance(val, float) and math.isinf(val) else str(val)
        setattr(cfg, key, val)
    return cfg


def _exponents(cfg: RunConfig) -> Tuple[Exponent, Exponent]:
    try:
        p, q = Exponent.of(cfg.p), Exponent.of(cfg.q)
    except ValueError as exc:
        raise ConfigError(f"invalid exponent: {exc}") from None
    if p.value > q.value:
        raise ConfigError(f"precondition p <= q violated (p={p}, q={q})")
    return p, q


def _instance(cfg: RunConfig) -> InequalityInstance:
    p, q = _exponents(cfg)
    spec, K = parse_kernel(cfg.kernel)
    return InequalityInstance(spec, parse_weight(cfg.u), parse_weight(cfg.v), p, q, K)


def _verdict_dict(c: ConditionVerdict) -> Dict[str, Any]:
    return {"verdict": c.verdict, "sup_estimate": c.sup_estimate, "argmax_r": c.argmax_r,
            "left_slope": c.left_slope, "right_slope": c.right_slope,
            "symbolic_exponent": c.symbolic_exponent, "reason": c.reason}


def _power_parameters(u: PowerLogWeight, v: PowerLogWeight) -> Optional[Tuple[float, float]]:
    if u.is_pure_power and v.is_pure_power:
        return -u.a, v.a
    return None


def closed_form(kernel: str, params: Dict[str, float], p: Exponent, q: Exponent,
                beta: float, gamma: float) -> Optional[Dict[str, Any]]:
    """Analyzer verdict for power weights, or None when no closed form applies."""
    inst = analyzer.PowerInstance(p, q, beta, gamma, dict(params))
    try:
        if kernel == "laplace":
            return {"verdict": analyzer.laplace_power_verdict(inst)}
        if kernel == "struve":
            return {"verdict": analyzer.struve_power_verdict(inst, params["alpha"])}
        if kernel == "stieltjes":
            return {"verdict": analyzer.stieltjes_power_verdict(inst, params["lam"])}
        if kernel == "sine":
            sv = analyzer.sine_power_verdict(inst)
            return {"verdict": sv.sharp, "split_sufficient": sv.split_sufficient}
    except analyzer.ExponentOutOfScope as exc:
        return {"verdict": None, "note": str(exc)}
    return None


def _agrees(kernel: str, params: Dict[str, float], numeric: str, closed: Dict[str, Any]) -> Optional[bool]:
    """Whether a numeric verdict is consistent with the closed form (None if not comparable)."""
    if closed is None or closed.get("verdict") is None:
        return None
    if kernel == "sine":
        return (numeric == BOUNDED) == closed["split_sufficient"]
    verdict = closed["verdict"]
    if verdict == analyzer.SUFFICIENT_ONLY:
        return numeric == BOUNDED
    if verdict == analyzer.UNKNOWN:
        return numeric != BOUNDED
    return numeric == verdict


def run_check(cfg: RunConfig) -> Tuple[int, Dict[str, Any]]:
    inst = _instance(cfg)
    result = check_boundedness(inst, cfg.grid_points())
    out: Dict[str, Any] = {
        "command": "check", "config": asdict(cfg), "kernel": inst.K.label(),
        "verdict": result.verdict, "reason": result.reason,
        "condition_one": _verdict_dict(result.condition_one),
        "condition_two": _verdict_dict(result.condition_two),
        "envelope": {"C1": result.spec_used.C1, "C2": result.spec_used.C2,
                     "lower1": result.spec_used.lower1, "lower2": result.spec_used.lower2},
    }
    powers = _power_parameters(inst.u, inst.v)
    cf = None
    if powers is not None:
        cf = closed_form(inst.K.name, inst.K.params, inst.p, inst.q, *powers)
        if cf is not None:
            cf["beta"], cf["gamma"] = powers
            cf["agrees"] = _agrees(inst.K.name, inst.K.params, result.verdict, cf)
    out["closed_form"] = cf
    status = EXIT_INCONCLUSIVE if result.verdict == INCONCLUSIVE else EXIT_OK
    return status, out


def run_probe(cfg: RunConfig) -> Tuple[int, Dict[str, Any]]:
    inst = _instance(cfg)
    region = 1 if cfg.region == "one" else 2
    rep = extremal_ratio_scan(inst, region, cfg.grid_points((1e-2, 1e2, 2)), cfg.rel_tol)
    out = {"command": "probe", "config": asdict(cfg), "kernel": inst.K.label(),
           "region": region, "r_grid": rep.r_grid, "ratios": rep.ratios,
           "max_ratio": rep.max_ratio, "growth_slope": rep.growth_slope,
           "left_slope": rep.left_slope, "right_slope": rep.right_slope,
           "verdict_hint": rep.verdict_hint}
    status = EXIT_INCONCLUSIVE if rep.verdict_hint == "inconclusive" else EXIT_OK
    return status, out


def _glue_instance(cfg: RunConfig) -> GluingInstance:
    p, q = _exponents(cfg)
    if cfg.glue:
        missing = [k for k in ("f", "g", "s1", "s2", "w1", "w2", "psi") if k not in cfg.glue]
        if missing:
            raise ConfigError(f"explicit gluing data needs --{', --'.join(missing)}")
        try:
            kappa, m = (float(s) for s in cfg.glue["psi"].split(","))
        except ValueError:
            raise ConfigError("--psi must be kappa,m") from None
        w = {k: parse_weight(cfg.glue[k]) for k in ("f", "g", "s1", "s2", "w1", "w2")}
        return GluingInstance(psi=PhiMap(kappa, m), p=p, q=q, **w)
    if cfg.kernel is None:
        raise ConfigError("glue needs --kernel struve:alpha=... or explicit --f/--g/--s1/--s2/--w1/--w2/--psi")
    _, K = parse_kernel(cfg.kernel)
    if K.name != "struve":
        raise ConfigError("glue --kernel supports struve; give explicit gluing data otherwise")
    return struve_gluing_instance(K.params["alpha"], parse_weight(cfg.u), parse_weight(cfg.v), p, q)


def run_glue(cfg: RunConfig) -> Tuple[int, Dict[str, Any]]:
    inst = _glue_instance(cfg)
    rep = verify_equivalence(inst, cfg.grid_points(), raise_on_mismatch=False)
    out = {"command": "glue", "config": asdict(cfg), "direction": inst.direction,
           "split_verdicts": list(rep.split_verdicts), "split_sups": list(rep.split_sups),
           "joint_verdict": rep.joint_verdict, "joint_sup": rep.joint_sup,
           "max_ratio": rep.max_ratio, "consistent": rep.consistent}
    if not rep.consistent:
        return EXIT_MISMATCH, out
    status = EXIT_INCONCLUSIVE if INCONCLUSIVE in rep.split_verdicts + (rep.joint_verdict,) else EXIT_OK
    return status, out


def run_struve_eval(cfg: RunConfig) -> Tuple[int, Dict[str, Any]]:
    if cfg.alpha is None or not cfg.alpha > -0.5:
        raise ConfigError("struve-eval needs --alpha > -1/2")
    xs = np.asarray(cfg.x, dtype=float)
    if xs.size == 0 or np.any(xs <= 0):
        raise ConfigError("struve-eval needs positive --x values")
    rows = []
    for x in xs:
        row = {"x": float(x), "value": struve(cfg.alpha, float(x)),
               "branch": "series" if x <= CROSSOVER else "asymptotic"}
        if x <= 40.0:
            row["series"] = struve_series(cfg.alpha, float(x))
        row["asymptotic"] = struve_asymptotic(cfg.alpha, float(x))
        rows.append(row)
    return EXIT_OK, {"command": "struve-eval", "config": asdict(cfg), "alpha": cfg.alpha, "values": rows}


def run_table(cfg: RunConfig) -> Tuple[int, Dict[str, Any]]:
    p, q = _exponents(cfg)
    spec, K = parse_kernel(cfg.kernel)
    if K.name not in TABLE_KERNELS:
        raise ConfigError(f"table supports {', '.join(TABLE_KERNELS)}")
    lo, hi, step = cfg.beta if cfg.beta is not None else _TABLE_BETA[K.name]
    betas = np.round(np.arange(lo, hi + step / 2, step), 12)
    rows, mismatches = [], 0
    for beta in betas:
        beta = float(beta)
        if K.name == "stieltjes":
            gamma = q.reciprocal + p.conjugate().reciprocal - K.params["lam"] - beta
        else:
            gamma = beta - q.reciprocal + p.conjugate().reciprocal
        inst = InequalityInstance(spec, PowerLogWeight.power(-beta), PowerLogWeight.power(gamma), p, q, K)
        numeric = check_boundedness(inst, cfg.grid_points()).verdict
        cf = closed_form(K.name, K.params, p, q, beta, gamma)
        if cf.get("verdict") is None:
            raise ConfigError(cf.get("note", "no closed form for this grid"))
        pinst = analyzer.PowerInstance(p, q, beta, gamma, dict(K.params))
        dist = analyzer.boundary_distance(K.name, pinst)
        agree = _agrees(K.name, K.params, numeric, cf)
        off_boundary = dist >= _BOUNDARY
        if off_boundary and agree is False:
            mismatches += 1
        rows.append({"beta": beta, "gamma": gamma, "numeric": numeric, "closed_form": cf["verdict"],
                     **({"split_sufficient": cf["split_sufficient"]} if K.name == "sine" else {}),
                     "boundary_distance": dist, "off_boundary": off_boundary, "agrees": agree})
    out = {"command": "table", "config": asdict(cfg), "kernel": K.label(),
           "rows": rows, "mismatches": mismatches}
    return (EXIT_MISMATCH if mismatches else EXIT_OK), out


RUNNERS = {"check": run_check, "probe": run_probe, "glue": run_glue,
           "struve-eval": run_struve_eval, "table": run_table}

_VERDICT_KEYS = {"check": ("verdict",), "probe": ("verdict_hint",),
                 "glue": ("split_verdicts", "joint_verdict"), "struve-eval": ("values",),
                 "table": ("rows", "mismatches")}


def run(cfg: RunConfig) -> Tuple[int, Dict[str, Any]]:
    return RUNNERS[cfg.command](cfg)


def run_replay(path: str) -> Tuple[int, Dict[str, Any]]:
    try:
        with open(path, encoding="utf-8") as fh:
            old = report.loads(fh.read())
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read report {path!r}: {exc}") from None
    cfg = config_from_dict(old["config"])
    _, new = run(cfg)
    new = report.loads(report.dumps(new))
    keys = _VERDICT_KEYS[cfg.command]
    same = all(old.get(k) == new.get(k) for k in keys)
    out = {"command": "replay", "source": path, "replayed_command": cfg.command,
           "reproduced": same, "fields": list(keys)}
    return (EXIT_OK if same else EXIT_MISMATCH), out


def _fmt(x: Any) -> str:
    if isinstance(x, float):
        return "inf" if math.isinf(x) and x > 0 else f"{x:.6g}"
    return str(x)


def render_text(out: Dict[str, Any]) -> str:
    cmd = out["command"]
    lines = [f"[{cmd}]"]
    if cmd == "check":
        lines.append(f"kernel: {out['kernel']}")
        for name in ("condition_one", "condition_two"):
            c = out[name]
            lines.append(f"{name}: {c['verdict']} (sup {_fmt(c['sup_estimate'])}, "
                         f"slopes {_fmt(c['left_slope'])}/{_fmt(c['right_slope'])}; {c['reason']})")
        lines.append(f"verdict: {out['verdict']} ({out['reason']})")
        cf = out.get("closed_form")
        if cf:
            extra = f", split-sufficient {cf['split_sufficient']}" if "split_sufficient" in cf else ""
            lines.append(f"closed form: {cf['verdict']}{extra} (agrees: {cf['agrees']})")
    elif cmd == "probe":
        lines.append(f"kernel: {out['kernel']}, region {out['region']}")
        for r, v in zip(out["r_grid"], out["ratios"]):
            lines.append(f"  r={_fmt(r):>10}  ratio={_fmt(v)}")
        lines.append(f"max ratio {_fmt(out['max_ratio'])}, growth slope {_fmt(out['growth_slope'])}")
        lines.append(f"hint: {out['verdict_hint']}")
    elif cmd == "glue":
        lines.append(f"psi {out['direction']}; split verdicts {out['split_verdicts']}, "
                     f"joint {out['joint_verdict']}, max ratio {_fmt(out['max_ratio'])}")
        lines.append(f"consistent: {out['consistent']}")
    elif cmd == "struve-eval":
        for row in out["values"]:
            lines.append(f"  H_{_fmt(out['alpha'])}({_fmt(row['x'])}) = {row['value']:.16g} [{row['branch']}]")
    elif cmd == "table":
        lines.append(f"kernel: {out['kernel']}")
        for row in out["rows"]:
            flag = "" if row["off_boundary"] else "  (boundary)"
            extra = f"  split-sufficient {row['split_sufficient']}" if "split_sufficient" in row else ""
            lines.append(f"  beta={row['beta']:+.3f} gamma={row['gamma']:+.3f}  numeric={row['numeric']:<24}"
                         f" closed={row['closed_form']}{extra}{flag}")
        lines.append(f"mismatches off-boundary: {out['mismatches']}")
    else:
        lines.append(f"replayed {out['replayed_command']} from {out['source']}: "
                     f"{'reproduced' if out['reproduced'] else 'DIFFERENT'}")
    return "\n".join(lines) + "\n"


_CONFIG_ERRORS = (ConfigError, UnknownKernel, ParamOutOfRange, ExponentOrderViolation,
                  HypothesisViolated, SideConditionViolated, analyzer.ExponentOutOfScope, ValueError)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            status, out = run_replay(args.report)
            fmt, dest = "text", None
        else:
            cfg = config_from_args(args)
            status, out = run(cfg)
            fmt, dest = cfg.format, cfg.out
    except _CONFIG_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"splitkernel: configuration error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"splitkernel: numerical failure: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    text = report.dumps(out) if fmt == "structured" else render_text(out)
    if dest:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
