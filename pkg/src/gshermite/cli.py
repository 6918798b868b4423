"""Batch command line front end.

Every subcommand accepts its parameters as flags or through ``--config
file.json``; flags given explicitly on the command line override the file.
The merged configuration is validated against :data:`CONFIG_SCHEMA` before
anything runs. Each run writes its primary artifact to ``--out`` and a
``<out>.manifest.json`` next to it (config hash, versions, timings, warnings).

Exit codes: 0 success (possibly with warnings), 1 internal failure, 2 usage
error (bad flags, schema violation, module precondition violated).
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
import platform
import sys
import time
from pathlib import Path
from typing import Any, Callable

import click
import jsonschema
import numpy as np
import scipy

from . import __version__
from .classify import SATURATION_LOG, classify_dual, classify_test, estimate_gevrey_index
from .coeff import (HermiteRep, SampledGrid, analyze, diff, fourier, ladder, mul_x,
                    synthesize)
from .errors import CapError, GSHermiteError
from .hermite import gauss_hermite, hermite_eval
from .io import fmt, read_coeffs, sidecar_path, write_coeffs, write_json
from .kernel import kernel_growth_check, kernel_of_operator
from .opcalc import (apply_expansion, build_expansion, fit_normalization,
                     hermite_envelope_check, verify_bound_26, verify_bound_52)
from .weights import AssociatedFunction, Condition, WeightSequence, check_condition

COMMANDS = ("seq-check", "assoc", "analyze", "synth", "classify", "transform", "kernel",
            "bounds")

_SEQ_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["gevrey_log", "table"]},
        "s": {"type": "number", "exclusiveMinimum": 0},
        "t": {"type": "number", "minimum": 0},
        "values": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0},
                   "minItems": 2},
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "gevrey_log"}}},
         "then": {"required": ["s"]}},
        {"if": {"properties": {"kind": {"const": "table"}}},
         "then": {"required": ["values"]}},
    ],
    "additionalProperties": False,
}

_SHAPE = {"oneOf": [{"type": "integer", "minimum": 1, "maximum": 256},
                    {"type": "array", "minItems": 1, "maxItems": 4,
                     "items": {"type": "integer", "minimum": 1, "maximum": 256}}]}
_POS = {"type": "number", "exclusiveMinimum": 0}

CONFIG_SCHEMA: dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "gshermite job",
    "type": "object",
    "required": ["command", "out"],
    "properties": {
        "command": {"enum": list(COMMANDS)},
        "out": {"type": "string", "minLength": 1},
        "input": {"type": "string", "minLength": 1},
        "seq": _SEQ_SCHEMA,
        "pmax": {"type": "integer", "minimum": 4, "maximum": 100000},
        "conditions": {"type": "array", "items": {"enum": [c.value for c in Condition]},
                       "minItems": 1},
        "rho": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
        "rho_min": _POS,
        "rho_max": _POS,
        "points": {"type": "integer", "minimum": 1, "maximum": 100000},
        "preset": {
            "type": "object",
            "required": ["name"],
            "properties": {
                "name": {"enum": ["gaussian", "hermite", "gaussian-times-poly"]},
                "a": _POS,
                "n": {"type": "integer", "minimum": 0},
                "poly": {"type": "array", "items": {"type": "number"}, "minItems": 1},
            },
            "additionalProperties": False,
        },
        "shape": _SHAPE,
        "order": {"type": "integer", "minimum": 2, "maximum": 2000},
        "at_nodes": {"type": "integer", "minimum": 2, "maximum": 2000},
        "x_min": {"type": "number"},
        "x_max": {"type": "number"},
        "kind": {"enum": ["test", "dual"]},
        "mode": {"enum": ["roumieu", "beurling"]},
        "theta_grid": {"type": "array", "items": _POS, "minItems": 1},
        "gevrey_index": {"type": "boolean"},
        "op": {"type": "string",
               "pattern": r"^(fourier|mul_x|diff|raise|lower|oscillator\^[1-9][0-9]*)$"},
        "axis": {"type": "integer", "minimum": 0},
        "theta": _POS,
        "nu": _POS,
        "lemma": {"enum": [1, 2]},
        "N": {"type": "integer", "minimum": 1, "maximum": 20},
        "m": _POS,
        "H": _POS,
        "alpha_max": {"type": "integer", "minimum": 0, "maximum": 10},
        "beta_max": {"type": "integer", "minimum": 0, "maximum": 10},
        "n_max": {"type": "integer", "minimum": 1, "maximum": 400},
    },
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"command": {"const": "synth"}}},
         "then": {"required": ["input"]}},
        {"if": {"properties": {"command": {"const": "classify"}}},
         "then": {"required": ["input", "theta_grid"]}},
        {"if": {"properties": {"command": {"const": "transform"}}},
         "then": {"required": ["input", "op"]}},
        {"if": {"properties": {"command": {"const": "kernel"}}},
         "then": {"required": ["op", "shape"]}},
    ],
}

DEFAULT_SEQ = {"kind": "gevrey_log", "s": 0.5, "t": 0}


class UsageProblem(Exception):
    """Raised for configuration problems detected after schema validation."""


# ----------------------------------------------------------------------------
# job implementations: each returns (list of written files, list of warnings)


def _seq(cfg) -> WeightSequence:
    return WeightSequence.from_dict(cfg.get("seq", DEFAULT_SEQ), p_max=cfg.get("pmax", 200))


def _shape(cfg, default=32) -> tuple[int, ...]:
    s = cfg.get("shape", default)
    return (s,) if isinstance(s, int) else tuple(s)


def _job_seq_check(cfg):
    seq = _seq(cfg)
    pmax = cfg.get("pmax", 200)
    names = cfg.get("conditions", [c.value for c in Condition])
    certs = {name: check_condition(seq, name, pmax).to_dict() for name in names}
    write_json({"sequence": seq.to_dict(), "p_max": pmax, "certificates": certs}, cfg["out"])
    return [cfg["out"]], []


def _job_assoc(cfg):
    seq = _seq(cfg)
    af = AssociatedFunction(seq)
    if "rho" in cfg:
        rhos = sorted(cfg["rho"])
    else:
        lo, hi = cfg.get("rho_min", 1.0), cfg.get("rho_max", 1000.0)
        if hi < lo:
            raise UsageProblem("rho_max must be >= rho_min")
        rhos = np.geomspace(lo, hi, cfg.get("points", 61)).tolist()
    warnings = []
    with open(cfg["out"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rho", "M", "maximizer", "saturated"])
        for rho in rhos:
            try:
                val, arg = af.evaluate(rho)
                w.writerow([fmt(rho), fmt(val), arg, 0])
            except CapError:
                w.writerow([fmt(rho), "inf", -1, 1])
                warnings.append(f"maximizer search capped at rho={rho!r}")
    return [cfg["out"]], warnings


def _preset_fn(preset: dict) -> Callable:
    name = preset["name"]
    a = preset.get("a", 0.5)
    if name == "gaussian":
        return lambda x: np.exp(-a * x * x)
    if name == "hermite":
        n = preset.get("n", 0)
        return lambda x: hermite_eval(n, x)
    poly = preset.get("poly", [1.0])
    return lambda x: np.polynomial.polynomial.polyval(x, poly) * np.exp(-a * x * x)


def _read_samples(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or "x" not in rows[0] or "re" not in rows[0]:
        raise UsageProblem(f"{path}: expected columns x,re[,im]")
    x = np.array([float(r["x"]) for r in rows])
    v = np.array([complex(float(r["re"]), float(r.get("im") or 0.0)) for r in rows])
    return x, v


def _job_analyze(cfg):
    shape = _shape(cfg)
    order = cfg.get("order", 2 * max(shape) + 4)
    rule = gauss_hermite(order)
    if "input" in cfg:
        if len(shape) != 1:
            raise UsageProblem("sampled input is one-dimensional")
        x, v = _read_samples(cfg["input"])
        src = SampledGrid((x,), v)
    elif "preset" in cfg:
        f1 = _preset_fn(cfg["preset"])

        def src(*axes):
            out = 1.0
            for xs in axes:
                out = out * f1(xs)
            return out
    else:
        raise UsageProblem("analyze needs either input or preset")
    rep = analyze(src, shape, rule)
    write_coeffs(rep, cfg["out"], {"quadrature_order": order})
    return [cfg["out"], str(sidecar_path(cfg["out"]))], []


def _job_synth(cfg):
    rep = read_coeffs(cfg["input"])
    if rep.dims != 1:
        raise UsageProblem("synth writes one-dimensional tables")
    if "at_nodes" in cfg:
        x = gauss_hermite(cfg["at_nodes"]).nodes
    else:
        x = np.linspace(cfg.get("x_min", -10.0), cfg.get("x_max", 10.0), cfg.get("points", 401))
    vals = np.atleast_1d(synthesize(rep, x))
    with open(cfg["out"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "re", "im"])
        for xi, vi in zip(x, vals):
            w.writerow([fmt(xi), fmt(vi.real), fmt(vi.imag)])
    return [cfg["out"]], []


def _job_classify(cfg):
    rep = read_coeffs(cfg["input"])
    seq = _seq(cfg)
    af = AssociatedFunction(seq)
    kind, mode = cfg.get("kind", "test"), cfg.get("mode", "roumieu")
    fn = classify_test if kind == "test" else classify_dual
    cert = fn(rep, seq, cfg["theta_grid"], mode=mode, af=af)
    out = {"kind": kind, "sequence": seq.to_dict(), "certificate": cert.to_dict()}
    warnings = []
    sat = [list(c.theta) for c in cert.per_theta
           if c.log_weighted_sum is not None and c.log_weighted_sum > SATURATION_LOG]
    if sat:
        warnings.append(f"weighted norm saturated at theta={sat}")
        out["saturated_theta"] = sat
    if cfg.get("gevrey_index"):
        if rep.dims != 1:
            raise UsageProblem("Gevrey index estimate is one-dimensional")
        s_hat, r2 = estimate_gevrey_index(rep)
        out["gevrey_index"] = {"s": s_hat, "r2": r2}
    write_json(out, cfg["out"])
    return [cfg["out"]], warnings


def _job_transform(cfg):
    rep = read_coeffs(cfg["input"])
    op, axis = cfg["op"], cfg.get("axis", 0)
    if axis >= rep.dims:
        raise UsageProblem(f"axis {axis} out of range for a {rep.dims}-axis rep")
    if op == "fourier":
        res = fourier(rep)
    elif op == "mul_x":
        res = mul_x(rep, axis)
    elif op == "diff":
        res = diff(rep, axis)
    elif op in ("raise", "lower"):
        res = ladder(rep, op, axis)
    else:
        N = int(op.split("^")[1])
        res = apply_expansion(build_expansion(N), rep, axis)
    extra = {"op": op, "axis": axis}
    if op.startswith("oscillator"):
        extra["kappa"] = fit_normalization()
    write_coeffs(res, cfg["out"], extra)
    return [cfg["out"], str(sidecar_path(cfg["out"]))], []


def _job_kernel(cfg):
    K = kernel_of_operator(cfg["op"], _shape(cfg))
    warnings = []
    if "theta" in cfg or "nu" in cfg:
        af = AssociatedFunction(_seq(cfg))
        cert = kernel_growth_check(K, cfg.get("theta", 1.0), cfg.get("nu", 1.0), af)
        if not math.isfinite(cert.C):
            warnings.append("growth constant saturated")
    K.to_csv(cfg["out"])
    return [cfg["out"], cfg["out"] + ".json"], warnings


def _expansion_rows(N_max, seq):
    rows, reports = [], []
    for N in range(1, N_max + 1):
        r26 = verify_bound_26(N)
        r52 = verify_bound_52(N, seq)
        reports.append({"N": N, "bound_26": r26, "bound_52": r52})
        rows.append([N, len(r26["violations"]), fmt(r26["min_log_slack"]),
                     len(r52["MN2"]["violations"]), fmt(r52["MN2"]["min_log_slack"]),
                     len(r52["M2N"]["violations"]), fmt(r52["M2N"]["min_log_slack"])])
    return rows, reports


def _job_bounds(cfg):
    seq = _seq(cfg)
    out = cfg["out"]
    table = str(Path(out).with_suffix(".csv"))
    if table == out:
        table = out + ".table.csv"
    if cfg.get("lemma", 2) == 2:
        rows, reports = _expansion_rows(cfg.get("N", 8), seq)
        header = ["N", "viol_26", "min_log_slack_26", "viol_52_MN2", "min_log_slack_52_MN2",
                  "viol_52_M2N", "min_log_slack_52_M2N"]
        total = sum(int(r[1]) for r in rows)
        report = {"lemma": 2, "sequence": seq.to_dict(), "kappa": fit_normalization(),
                  "levels": reports, "violations_26": total}
    else:
        pmax = cfg.get("pmax", 200)
        H = cfg.get("H")
        L = None
        if H is None:
            c = check_condition(seq, Condition.M2, pmax)
            if not c.holds:
                raise UsageProblem("sequence fails M.2; pass H explicitly")
            H = c.constants["H"]
        m = cfg.get("m")
        if m is None:
            c = check_condition(seq, Condition.M3dprime, pmax)
            if not c.holds:
                raise UsageProblem("sequence fails M.3''; pass m explicitly")
            L = c.constants["L"]
            m = 1.0 / (8.0 * H * L) / 2.0
        env = hermite_envelope_check(seq, m, H, cfg.get("alpha_max", 4), cfg.get("beta_max", 4),
                                     cfg.get("n_max", 400))
        header = ["n", "C", "C_running"]
        rows = [[n, fmt(env["C_by_n"][n]), fmt(env["C_running"][n])] for n in sorted(env["C_by_n"])]
        report = {"lemma": 1, "sequence": seq.to_dict(), "H": H, "L": L, "m": m,
                  "C": env["C"], "bounded": env["bounded"], "reference_n": env["reference_n"],
                  "dyadic_trend": env["dyadic_trend"]}
    with open(table, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    write_json(report, out)
    return [out, table], []


JOBS: dict[str, Callable] = {
    "seq-check": _job_seq_check, "assoc": _job_assoc, "analyze": _job_analyze,
    "synth": _job_synth, "classify": _job_classify, "transform": _job_transform,
    "kernel": _job_kernel, "bounds": _job_bounds,
}


# ----------------------------------------------------------------------------
# driver


def _canonical(cfg: dict) -> str:
    return json.dumps(cfg, sort_keys=True, separators=(",", ":"))


def validate_config(cfg: dict) -> None:
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise UsageProblem(f"config invalid at {path}: {exc.message}") from None
    if "input" in cfg and Path(cfg["input"]).resolve() == Path(cfg["out"]).resolve():
        raise UsageProblem("input and output paths must differ")


def run(cfg: dict) -> tuple[int, dict]:
    """Validate and execute one job. Returns (exit code, manifest)."""
    manifest: dict[str, Any] = {"versions": {
        "gshermite": __version__, "python": platform.python_version(),
        "numpy": np.__version__, "scipy": scipy.__version__}}
    try:
        validate_config(cfg)
    except UsageProblem as exc:
        return 2, {**manifest, "error": str(exc)}
    manifest.update({"command": cfg["command"], "config": cfg,
                     "config_sha256": hashlib.sha256(_canonical(cfg).encode()).hexdigest()})
    start = time.perf_counter()
    code = 0
    try:
        outputs, warnings = JOBS[cfg["command"]](cfg)
        manifest.update({"outputs": sorted(outputs), "warnings": warnings})
    except (UsageProblem, ValueError) as exc:
        # ValueError covers module precondition checks (shape, range, alignment)
        code = 2
        manifest["error"] = f"{type(exc).__name__}: {exc}"
    except (GSHermiteError, Exception) as exc:  # noqa: BLE001 - reported as exit 1
        code = 1
        manifest["error"] = f"{type(exc).__name__}: {exc}"
    manifest["timings"] = {"total_seconds": time.perf_counter() - start}
    manifest["exit_code"] = code
    out = cfg.get("out")
    if out:
        try:
            write_json(manifest, str(out) + ".manifest.json")
        except OSError:
            pass
    return code, manifest


# ----------------------------------------------------------------------------
# click wiring


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {text!r}") from None


def _json_obj(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.BadParameter(f"invalid JSON: {exc}") from None


def _shape_arg(text: str):
    vals = [int(v) for v in text.split(",") if v.strip()]
    return vals[0] if len(vals) == 1 else vals


# flag name -> (config key, converter)
_CONVERT = {
    "seq": ("seq", _json_obj), "theta_grid": ("theta_grid", _floats),
    "rho": ("rho", _floats), "shape": ("shape", _shape_arg),
    "conditions": ("conditions", lambda t: [c.strip() for c in t.split(",") if c.strip()]),
    "poly": ("poly", _floats), "input_path": ("input", str),
}


def _dispatch(command: str, **kwargs):
    ctx = click.get_current_context()
    cfg: dict[str, Any] = {}
    config_path = kwargs.pop("config", None)
    if config_path:
        try:
            cfg = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            click.echo(f"error: cannot read config: {exc}", err=True)
            ctx.exit(2)
        if not isinstance(cfg, dict):
            click.echo("error: config must be a JSON object", err=True)
            ctx.exit(2)
        if cfg.get("command", command) != command:
            click.echo(f"error: config is for {cfg['command']!r}, not {command!r}", err=True)
            ctx.exit(2)
    preset = {}
    for name, value in kwargs.items():
        src = ctx.get_parameter_source(name)
        explicit = src is not None and src.name == "COMMANDLINE"
        key, conv = _CONVERT.get(name, (name, lambda v: v))
        in_file = key in cfg or (name in ("preset", "a", "n", "poly") and "preset" in cfg)
        if value is None or (in_file and not explicit):
            continue
        try:
            val = conv(value)
        except (click.BadParameter, ValueError) as exc:
            click.echo(f"error: --{name.replace('_', '-')}: {exc}", err=True)
            ctx.exit(2)
        if name in ("preset", "a", "n", "poly"):
            preset["name" if name == "preset" else key] = val
        else:
            cfg[key] = val
    if preset:
        if "name" not in preset:
            click.echo("error: --a/--n/--poly need --preset", err=True)
            ctx.exit(2)
        cfg["preset"] = {**cfg.get("preset", {}), **preset}
    cfg["command"] = command
    code, manifest = run(cfg)
    for w in manifest.get("warnings", []):
        click.echo(f"warning: {w}", err=True)
    if code:
        click.echo(f"error: {manifest.get('error')}", err=True)
    else:
        click.echo(json.dumps({"outputs": manifest["outputs"],
                               "warnings": manifest["warnings"]}, sort_keys=True))
    ctx.exit(code)


def _common(default_out: str):
    def deco(f):
        f = click.option("--config", type=click.Path(dir_okay=False),
                         help="JSON job file; explicit flags override it.")(f)
        f = click.option("--out", default=default_out, show_default=True,
                         help="Primary output file.")(f)
        return f
    return deco


_seq_opt = click.option("--seq", help='Weight sequence JSON, e.g. {"kind":"gevrey_log","s":0.5,"t":0}.')
_pmax_opt = click.option("--pmax", type=int, help="Largest index used in sequence checks.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="gshermite")
def main():
    """Hermite-function numerics for Gelfand-Shilov type spaces."""


@main.command("schema")
def schema_cmd():
    """Print the JSON schema for --config files."""
    click.echo(json.dumps(CONFIG_SCHEMA, indent=2, sort_keys=True))


@main.command("seq-check")
@_common("seq_check.json")
@_seq_opt
@_pmax_opt
@click.option("--conditions", help="Comma list of M1,M2,M3prime,M3dprime,M3tprime.")
def seq_check_cmd(**kw):
    """Certify the growth conditions of a weight sequence."""
    _dispatch("seq-check", **kw)


@main.command("assoc")
@_common("assoc.csv")
@_seq_opt
@click.option("--rho", help="Comma list of rho values (overrides the range).")
@click.option("--rho-min", type=float)
@click.option("--rho-max", type=float)
@click.option("--points", type=int, help="Number of log-spaced rho values.")
def assoc_cmd(**kw):
    """Tabulate the associated function M(rho)."""
    _dispatch("assoc", **kw)


@main.command("analyze")
@_common("coeffs.csv")
@click.option("--in", "input_path", type=click.Path(exists=True, dir_okay=False),
              help="Samples x,re[,im] on the quadrature nodes.")
@click.option("--preset", type=click.Choice(["gaussian", "hermite", "gaussian-times-poly"]))
@click.option("--a", type=float, help="Gaussian rate for exp(-a x^2) presets.")
@click.option("--n", type=int, help="Index for the hermite preset.")
@click.option("--poly", help="Ascending polynomial coefficients for gaussian-times-poly.")
@click.option("--shape", help="Truncation, e.g. 64 or 32,32.")
@click.option("--order", type=int, help="Quadrature order (default 2*max(shape)+4).")
def analyze_cmd(**kw):
    """Fourier-Hermite coefficients of a preset or sampled function."""
    _dispatch("analyze", **kw)


@main.command("synth")
@_common("synth.csv")
@click.option("--in", "input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--at-nodes", type=int, help="Evaluate at the nodes of this quadrature order.")
@click.option("--x-min", type=float)
@click.option("--x-max", type=float)
@click.option("--points", type=int)
def synth_cmd(**kw):
    """Evaluate a coefficient file on a grid."""
    _dispatch("synth", **kw)


@main.command("classify")
@_common("classify.json")
@click.option("--in", "input_path", type=click.Path(exists=True, dir_okay=False))
@_seq_opt
@click.option("--theta-grid", help="Comma list of theta values.")
@click.option("--kind", type=click.Choice(["test", "dual"]))
@click.option("--mode", type=click.Choice(["roumieu", "beurling"]))
@click.option("--gevrey-index/--no-gevrey-index", default=None)
def classify_cmd(**kw):
    """Decay or growth certificate for a coefficient file."""
    _dispatch("classify", **kw)


@main.command("transform")
@_common("transform.csv")
@click.option("--in", "input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--op", help="fourier, mul_x, diff, raise, lower or oscillator^N.")
@click.option("--axis", type=int)
def transform_cmd(**kw):
    """Apply an operator in coefficient space."""
    _dispatch("transform", **kw)


@main.command("kernel")
@_common("kernel.csv")
@click.option("--op", help="fourier, mul_x, diff or oscillator^N.")
@click.option("--shape")
@_seq_opt
@click.option("--theta", type=float, help="Row scale for the growth check.")
@click.option("--nu", type=float, help="Column scale for the growth check.")
def kernel_cmd(**kw):
    """Coefficient matrix of an operator, with optional growth certificate."""
    _dispatch("kernel", **kw)


@main.command("bounds")
@_common("bounds.json")
@click.option("--lemma", type=click.Choice(["1", "2"]), help="1: Hermite envelope, 2: expansion bounds.")
@click.option("--N", "N", type=int, help="Largest expansion level (with --lemma 2).")
@_seq_opt
@_pmax_opt
@click.option("--m", type=float)
@click.option("--H", "H", type=float)
@click.option("--alpha-max", type=int)
@click.option("--beta-max", type=int)
@click.option("--n-max", type=int)
def bounds_cmd(**kw):
    """Verification sweeps for the expansion bounds and the Hermite envelope."""
    if kw.get("lemma") is not None:
        kw["lemma"] = int(kw["lemma"])
    _dispatch("bounds", **kw)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
