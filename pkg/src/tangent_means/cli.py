"""Command-line front end.

Every subcommand writes a CSV (``--out``, default stdout) whose first line is a
``#`` provenance header, followed by ``param,value[,stderr][,residual][,reason]``
rows in full precision, and a JSON summary (``--summary``; also echoed to
stdout when the CSV goes to a file). Exit status: 0 on success, 2 when a
tolerance is violated, 1 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .besselfrac import FREQ_CAP, FreqProfile, halfspace_freq_forward, halfspace_freq_invert
from .fracops import FracSpec, Grid1D, Profile1D, Side, chebyshev_nodes, rl_derivative, rl_integral
from .identities import (
    circle_identity,
    conn_identity,
    consd_inverse_identity,
    consd_power_identity,
    halfspace_power_identity,
    verify_identity,
)
from .inversion import DEFAULT_TOL, invert
from .oracle import DEFAULT_SEED, _workers, mc_transform, slice_transform
from .profiles import ProfileError, build_profile, closed_form, parse_profile, weight_domain
from .specfun import gamma
from .transforms import (
    Branch,
    ConfigError,
    PARAMETER_NAMES,
    GeomConfig,
    Setting,
    TransformProfile,
    admissible_ranges,
    chord_half_height,
    equatorial_forward,
    forward_value,
    guarded_parameters,
    parameter_domain,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TOLERANCE = 2

MC_SIGMAS = 4.0

DEFAULTS: dict[str, Any] = {
    "setting": None,
    "n": 3,
    "k": 2,
    "alpha": None,
    "side": "+",
    "guard": 1e-6,
    "equatorial": False,
    "profile": "exp-decay",
    "grid": None,
    "spacing": None,
    "seed": DEFAULT_SEED,
    "tol": DEFAULT_TOL,
    "out": None,
    "summary": None,
    "plot": None,
    "data": None,
    "profile_exponent": 0.0,
    "window": 7,
    "samples": 100_000,
    "method": "mc",
    "identity": "generic",
    "weight": "exp-decay",
    "weight_exponent": 0.5,
    "branch": "B",
    "decay": math.inf,
    "inner_decay": math.inf,
    "op": "integral",
    "order": 0.5,
    "frac_side": "left",
    "base": None,
    "domain": "0:1",
    "lam": 1.0,
}

INVERSION_NODES = 121


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ResultRow:
    param: float
    value: float
    stderr: float | None = None
    residual: float | None = None
    reason: str = ""

    @classmethod
    def from_csv(cls, fields: Sequence[str], columns: Sequence[str]) -> ResultRow:
        data = dict(zip(columns, fields))

        def num(key: str) -> float | None:
            text = data.get(key, "")
            return float(text) if text != "" else None

        return cls(
            float(data["param"]),
            float(data["value"]),
            num("stderr"),
            num("residual"),
            data.get("reason", ""),
        )


@dataclass
class RunOutput:
    rows: list[ResultRow]
    summary: dict[str, Any]
    failed: bool = False
    xlabel: str = "param"
    ylabel: str = "value"
    reference: list[float] | None = field(default=None)


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    if math.isnan(x):
        return "nan"
    return "%.17g" % x


def render_csv(rows: Sequence[ResultRow], header: str) -> str:
    columns = ["param", "value"]
    if any(r.stderr is not None for r in rows):
        columns.append("stderr")
    if any(r.residual is not None for r in rows):
        columns.append("residual")
    if any(r.reason for r in rows):
        columns.append("reason")
    buf = io.StringIO()
    buf.write(header + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        cells = {
            "param": _fmt(r.param),
            "value": _fmt(r.value),
            "stderr": _fmt(r.stderr),
            "residual": _fmt(r.residual),
            "reason": r.reason,
        }
        writer.writerow([cells[c] for c in columns])
    return buf.getvalue()


def read_csv(text: str) -> tuple[str, list[ResultRow]]:
    """Header line and rows of a CSV written by :func:`render_csv`."""
    lines = text.splitlines()
    header = lines[0] if lines and lines[0].startswith("#") else ""
    body = lines[1:] if header else lines
    reader = csv.reader(body)
    columns = next(reader)
    return header, [ResultRow.from_csv(fields, columns) for fields in reader]


# {{{ configuration


def _parse_side(text: str) -> Branch:
    text = str(text).strip().lower()
    if text in ("+", "plus"):
        return Branch.Plus
    if text in ("-", "minus"):
        return Branch.Minus
    raise UsageError(f"side must be + or -, got {text!r}")


def _parse_setting(text: str | None) -> Setting:
    if text is None:
        raise UsageError("--setting is required\n" + admissible_ranges())
    try:
        return Setting(text)
    except ValueError:
        raise UsageError(f"unknown setting {text!r}\n" + admissible_ranges()) from None


def geom_config(opts: dict[str, Any]) -> GeomConfig:
    setting = _parse_setting(opts["setting"])
    alpha = opts["alpha"]
    if opts["equatorial"]:
        if setting is not Setting.SphereCap:
            raise UsageError("--equatorial applies to sphere-cap only")
        if alpha is None:
            alpha = 0.5 * math.pi
    try:
        return GeomConfig(
            int(opts["n"]),
            int(opts["k"]),
            setting,
            alpha=None if alpha is None else float(alpha),
            side=_parse_side(opts["side"]),
            guard_eps=float(opts["guard"]),
        )
    except ConfigError as exc:
        raise UsageError(str(exc)) from None


def _parse_interval(text: str, what: str) -> tuple[float, float]:
    parts = str(text).split(":")
    if len(parts) != 2:
        raise UsageError(f"{what} must be lo:hi, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"{what} must be lo:hi, got {text!r}") from None


def parse_grid(text: str, spacing: str | None = None) -> np.ndarray:
    """``lo:hi:count[:uniform|chebyshev]`` to parameter nodes (endpoints included for uniform)."""
    parts = str(text).split(":")
    if len(parts) not in (3, 4):
        raise UsageError(f"grid must be lo:hi:count[:spacing], got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must be lo:hi:count[:spacing], got {text!r}") from None
    kind = parts[3] if len(parts) == 4 else (spacing or "uniform")
    if count == 1 and lo == hi:
        return np.array([lo])
    if count < 1 or not lo < hi:
        raise UsageError(f"grid needs lo < hi and count >= 1, got {text!r}")
    if kind == "uniform":
        return np.linspace(lo, hi, count)
    if kind == "chebyshev":
        return chebyshev_nodes(lo, hi, count)
    raise UsageError(f"grid spacing must be uniform or chebyshev, got {kind!r}")


def _domain(cfg: GeomConfig, equatorial: bool) -> tuple[float, float]:
    return (0.0, 1.0) if equatorial else parameter_domain(cfg)


def _check_grid(params: np.ndarray, cfg: GeomConfig, equatorial: bool) -> None:
    lo, hi = _domain(cfg, equatorial)
    name = "theta_n" if equatorial else cfg.parameter
    bad = params[(params <= lo) | (params >= hi)]
    if bad.size:
        raise UsageError(
            f"{name} = {bad[0]:g} outside ({lo:g}, {hi:g})\n{admissible_ranges(cfg.setting)}"
        )


def default_grid(cfg: GeomConfig, count: int, equatorial: bool) -> np.ndarray:
    """Uniform guarded grid over the parameter domain, for forward and oracle runs."""
    if not equatorial:
        return guarded_parameters(cfg, count)
    eps = 10.0 * cfg.guard_eps
    values = np.linspace(eps, 1.0 - eps, count)
    mid = 1.0 / math.sqrt(2.0)
    near = np.abs(values - mid) <= eps
    values[near] = mid + np.where(values[near] >= mid, 2.0, -2.0) * eps
    return values


def inversion_grid(cfg: GeomConfig, count: int, equatorial: bool) -> np.ndarray:
    """Chebyshev grid over the branch of the parameter range that the inversion uses."""
    eps = 10.0 * cfg.guard_eps
    s = cfg.setting
    if equatorial:
        return chebyshev_nodes(eps, 1.0 / math.sqrt(2.0) - eps, count)
    if s is Setting.BallInterior:
        return chebyshev_nodes(eps, 1.0 - eps, count)
    if s is Setting.BallExterior:
        return chebyshev_nodes(1.0 + eps, 3.0, count)
    if s is Setting.HalfBallChord:
        # chebyshev in the chord height r = 2 theta sqrt(1 - theta^2)
        r = chebyshev_nodes(2.0 * chord_half_height(1.0 - eps), 0.95, count)
        return np.sort(np.sqrt(0.5 * (1.0 + np.sqrt(1.0 - r * r))))
    if s is Setting.HalfSpace:
        return chebyshev_nodes(eps, 2.0, count)
    if s is Setting.SphereCap:
        top = 0.5 * cfg.alpha if cfg.side is Branch.Plus else 0.5 * (math.pi - cfg.alpha)
        return chebyshev_nodes(eps, top - eps, count)
    if cfg.side is Branch.Plus:
        return chebyshev_nodes(eps, 0.5 * cfg.alpha - eps, count)
    return chebyshev_nodes(eps, 1.5, count)


def _grid(opts: dict[str, Any], cfg: GeomConfig, fallback: Callable[[], np.ndarray]) -> np.ndarray:
    if opts["grid"] is None:
        return fallback()
    params = parse_grid(opts["grid"], opts["spacing"])
    _check_grid(params, cfg, opts["equatorial"])
    return params


def _profile(opts: dict[str, Any], cfg: GeomConfig | None, domain=None) -> Profile1D:
    try:
        return build_profile(opts["profile"], cfg, domain)
    except ProfileError as exc:
        raise UsageError(str(exc)) from None


def _map(func: Callable[[float], Any], params: np.ndarray) -> list[Any]:
    """Evaluate over the grid, in grid order, on up to ``TANGENT_MEANS_THREADS`` workers."""
    count = min(_workers(None), len(params))
    if count <= 1:
        return [func(float(p)) for p in params]
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(lambda p: func(float(p)), params))


def _guarded(func: Callable[[float], float]) -> Callable[[float], tuple[float, str]]:
    def run(p: float) -> tuple[float, str]:
        try:
            return func(p), ""
        except (ValueError, ArithmeticError) as exc:
            return math.nan, type(exc).__name__ + ": " + str(exc).splitlines()[0]

    return run


# }}}


# {{{ subcommands


def _forward_fn(cfg: GeomConfig, equatorial: bool) -> Callable[[Profile1D, GeomConfig, float], float]:
    return equatorial_forward if equatorial else forward_value


def _max(values: Sequence[float | None]) -> float | None:
    finite = [abs(v) for v in values if v is not None and not math.isnan(v)]
    return max(finite) if finite else None


def cmd_forward(opts: dict[str, Any]) -> RunOutput:
    cfg = geom_config(opts)
    equatorial = opts["equatorial"]
    params = _grid(opts, cfg, lambda: default_grid(cfg, 64, equatorial))
    f0 = _profile(opts, cfg)
    fwd = _forward_fn(cfg, equatorial)
    try:
        exact = closed_form(opts["profile"], cfg)
    except ProfileError as exc:
        raise UsageError(str(exc)) from None
    if opts["profile"].startswith("example53") and not equatorial:
        exact = None

    results = _map(_guarded(lambda p: fwd(f0, cfg, p)), params)
    rows = []
    reference = None if exact is None else [exact(float(p)) for p in params]
    for i, (p, (value, reason)) in enumerate(zip(params, results)):
        residual = None
        if reference is not None and not math.isnan(value):
            residual = abs(value - reference[i]) / max(1.0, abs(reference[i]))
        rows.append(ResultRow(float(p), value, None, residual, reason))
    worst = _max([r.residual for r in rows])
    summary = {
        "rows": len(rows),
        "nan_rows": sum(1 for r in rows if math.isnan(r.value)),
        "max_abs_value": _max([r.value for r in rows]),
        "max_closed_form_error": worst,
    }
    failed = worst is not None and worst > opts["tol"]
    name = "theta_n" if equatorial else cfg.parameter
    return RunOutput(rows, summary, failed, name, "transform", reference)


def _inversion_input(opts: dict[str, Any], cfg: GeomConfig) -> tuple[TransformProfile, Profile1D | None]:
    equatorial = opts["equatorial"]
    name = "theta_n" if equatorial else cfg.parameter
    if opts["data"]:
        try:
            _, rows = read_csv(Path(opts["data"]).read_text())
        except (OSError, KeyError, ValueError, StopIteration) as exc:
            raise UsageError(f"cannot read data file {opts['data']}: {exc}") from None
        rows = sorted(rows, key=lambda r: r.param)
        params = np.array([r.param for r in rows])
        _check_grid(params, cfg, equatorial)
        data = Grid1D(params, np.array([r.value for r in rows]))
        return TransformProfile(name, data), None
    params = _grid(opts, cfg, lambda: inversion_grid(cfg, INVERSION_NODES, equatorial))
    params = np.sort(params)
    f0 = _profile(opts, cfg)
    fwd = _forward_fn(cfg, equatorial)
    values = np.array(_map(lambda p: fwd(f0, cfg, p), params))
    return TransformProfile(name, Grid1D(params, values)), f0


def _invert(opts: dict[str, Any], cfg: GeomConfig, data: TransformProfile):
    try:
        return invert(
            data,
            cfg,
            profile_exponent=float(opts["profile_exponent"]),
            window=int(opts["window"]),
            tol=float(opts["tol"]),
        )
    except (ConfigError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def cmd_invert(opts: dict[str, Any]) -> RunOutput:
    cfg = geom_config(opts)
    data, f0 = _inversion_input(opts, cfg)
    report = _invert(opts, cfg, data)
    nodes, values = report.recovered.nodes, report.recovered.values
    rows = [ResultRow(float(s), float(v)) for s, v in zip(nodes, values)]
    summary = {
        "rows": len(rows),
        "forward_residual": report.forward_residual,
        "in_range": report.in_range,
        "trimmed": report.trimmed,
    }
    return RunOutput(rows, summary, not report.in_range, "s", "recovered f0")


def cmd_roundtrip(opts: dict[str, Any]) -> RunOutput:
    cfg = geom_config(opts)
    opts = dict(opts, data=None)
    data, f0 = _inversion_input(opts, cfg)
    report = _invert(opts, cfg, data)
    nodes, values = report.recovered.nodes, report.recovered.values
    truth = f0(nodes)
    errors = np.abs(values - truth) / np.maximum(1.0, np.abs(truth))
    rows = [ResultRow(float(s), float(v), None, float(e)) for s, v, e in zip(nodes, values, errors)]
    max_error = float(errors.max()) if errors.size else math.nan
    tol = float(opts["tol"])
    summary = {
        "rows": len(rows),
        "max_error": max_error,
        "forward_residual": report.forward_residual,
        "in_range": report.in_range,
        "trimmed": report.trimmed,
    }
    failed = not (max_error <= tol and report.forward_residual <= tol)
    return RunOutput(rows, summary, failed, "s", "recovered f0", [float(t) for t in truth])


def _oracle_parameter(cfg: GeomConfig, p: float, equatorial: bool) -> float:
    # the equatorial slice at |theta_n| has geodesic radius arcsin |theta_n|
    return math.asin(p) if equatorial else p


def cmd_oracle(opts: dict[str, Any]) -> RunOutput:
    cfg = geom_config(opts)
    equatorial = opts["equatorial"]
    params = _grid(opts, cfg, lambda: default_grid(cfg, 16, equatorial))
    f0 = _profile(opts, cfg)
    fwd = _forward_fn(cfg, equatorial)
    samples, seed = int(opts["samples"]), int(opts["seed"])
    if samples < 100:
        raise UsageError(f"--samples must be at least 100, got {samples}")
    method = opts["method"]
    if method not in ("mc", "slice"):
        raise UsageError(f"method must be mc or slice, got {method!r}")

    rows = []
    worst = 0.0
    for p in params:
        p = float(p)
        reference = fwd(f0, cfg, p)
        q = _oracle_parameter(cfg, p, equatorial)
        if method == "mc":
            est = mc_transform(f0, cfg, q, samples, seed)
            residual = est.value - reference
            score = abs(residual) / est.stderr if est.stderr > 0 else (0.0 if residual == 0 else math.inf)
            rows.append(ResultRow(p, est.value, est.stderr, residual))
            worst = max(worst, score)
        else:
            value = slice_transform(f0, cfg, q)
            residual = value - reference
            rows.append(ResultRow(p, value, None, residual))
            worst = max(worst, abs(residual) / max(1e-300, abs(reference)))
    if method == "mc":
        summary = {"rows": len(rows), "samples": samples, "max_abs_z": worst, "threshold_z": MC_SIGMAS}
        failed = worst > MC_SIGMAS
    else:
        summary = {"rows": len(rows), "max_relative_error": worst}
        failed = worst > float(opts["tol"])
    name = "theta_n" if equatorial else cfg.parameter
    return RunOutput(rows, summary, failed, name, "oracle", None)


_CLOSED_IDENTITIES = {
    "conn": conn_identity,
    "consd-power": consd_power_identity,
    "consd-inverse": consd_inverse_identity,
    "halfspace-power": halfspace_power_identity,
}


def cmd_verify_identity(opts: dict[str, Any]) -> RunOutput:
    cfg = geom_config(opts)
    f0 = _profile(opts, cfg)
    kind = opts["identity"]
    try:
        if kind == "generic":
            try:
                u0 = build_profile(parse_profile(opts["weight"]), cfg, weight_domain(cfg))
            except ProfileError as exc:
                raise UsageError(str(exc)) from None
            check = verify_identity(
                f0,
                u0,
                cfg,
                branch=opts["branch"],
                decay=float(opts["decay"]),
                inner_decay=float(opts["inner_decay"]),
            )
        elif kind == "circle":
            check = circle_identity(f0, branch=opts["branch"])
        elif kind == "conn":
            check = conn_identity(f0, cfg, float(opts["weight_exponent"]))
        elif kind in _CLOSED_IDENTITIES:
            check = _CLOSED_IDENTITIES[kind](f0, cfg, float(opts["weight_exponent"]), decay=float(opts["decay"]))
        else:
            raise UsageError(f"unknown identity {kind!r}; choose generic, circle, {', '.join(_CLOSED_IDENTITIES)}")
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    rows = [ResultRow(0.0, check.lhs), ResultRow(1.0, check.rhs, None, check.relerr)]
    summary = {"identity": kind, "lhs": check.lhs, "rhs": check.rhs, "relerr": check.relerr}
    return RunOutput(rows, summary, not check.relerr <= float(opts["tol"]), "side (0 lhs, 1 rhs)", "integral")


def cmd_frac(opts: dict[str, Any]) -> RunOutput:
    lo, hi = _parse_interval(opts["domain"], "--domain")
    if not lo < hi:
        raise UsageError(f"--domain needs lo < hi, got {opts['domain']}")
    f = _profile(opts, None, (lo, hi))
    side = {"left": Side.Left, "right": Side.Right}.get(str(opts["frac_side"]).lower())
    if side is None:
        raise UsageError(f"--side must be left or right, got {opts['frac_side']!r}")
    base = opts["base"]
    base = (lo if side is Side.Left else hi) if base is None else float(base)
    order = float(opts["order"])
    try:
        spec = FracSpec(order, side, base)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    params = parse_grid(opts["grid"], opts["spacing"]) if opts["grid"] else chebyshev_nodes(lo, hi, 64)
    # integrals are fine up to the far end; derivatives need interior points
    closed = opts["op"] == "integral"
    outside = (params < lo) | (params > hi) if closed else (params <= lo) | (params >= hi)
    if np.any(outside):
        lb, rb = ("[", "]") if closed else ("(", ")")
        raise UsageError(f"grid must lie inside the domain {lb}{lo:g}, {hi:g}{rb}")

    exact = None
    pspec = parse_profile(opts["profile"])
    if pspec.name == "power" and side is Side.Left and base == 0.0 == lo:
        # power rule: x^mu -> Gamma(mu+1)/Gamma(mu+1+shift) x^(mu+shift)
        mu, scale = pspec.get("p", 1.0), pspec.get("scale", 1.0)
        shift = order if opts["op"] == "integral" else -order
        top = mu + 1.0 + shift
        if top > 0 or top != math.floor(top):

            def exact(x: float) -> float:
                return scale * gamma(mu + 1.0) / gamma(top) * x ** (mu + shift)

    if opts["op"] == "integral":
        values = _map(_guarded(lambda x: rl_integral(f, spec, x)), params)
        nodes = [float(x) for x in params]
    elif opts["op"] == "derivative":
        try:
            at_edge = base == (lo if side is Side.Left else hi)
            edge = f.exponents[0 if side is Side.Left else 1] if at_edge else None
            grid = rl_derivative(f, spec, params, edge_exponent=edge)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        nodes = [float(x) for x in grid.nodes]
        values = [(float(v), "") for v in grid.values]
    else:
        raise UsageError(f"--op must be integral or derivative, got {opts['op']!r}")

    rows = []
    for x, (v, reason) in zip(nodes, values):
        residual = None
        if exact is not None and not math.isnan(v):
            ref = exact(x)
            residual = abs(v - ref) / max(1e-300, abs(ref)) if ref else abs(v)
        rows.append(ResultRow(x, v, None, residual, reason))
    worst = _max([r.residual for r in rows])
    summary = {"rows": len(rows), "op": opts["op"], "order": order, "max_relative_error": worst}
    failed = worst is not None and worst > float(opts["tol"])
    return RunOutput(rows, summary, failed, "x", f"{opts['op']} of order {order:g}")


def cmd_freq_roundtrip(opts: dict[str, Any]) -> RunOutput:
    n = int(opts["n"])
    lam = float(opts["lam"])
    lo, hi = _parse_interval(opts["domain"], "--domain")
    if lo != 0.0 or not hi > 0:
        raise UsageError("frequency profiles live on 0:b with b > 0")
    if n < 2:
        raise UsageError(f"n must be at least 2, got {n}")
    f = _profile(opts, None, (lo, hi))
    try:
        f_eta = FreqProfile(lam, f)
    except ValueError as exc:
        raise UsageError(f"{exc} (lambda * b <= {FREQ_CAP:g})") from None
    params = parse_grid(opts["grid"], opts["spacing"]) if opts["grid"] else chebyshev_nodes(lo, hi, 161, cluster="lo")
    if np.any(params <= lo) or np.any(params > hi):
        raise UsageError(f"grid must lie inside ({lo:g}, {hi:g}]")
    data = np.array(_map(lambda t: halfspace_freq_forward(f_eta, n, t), params))
    F = Profile1D.from_samples(np.concatenate([[0.0], params]), np.concatenate([[0.0], data]), lo=0.0, hi=hi)
    result = halfspace_freq_invert(FreqProfile(lam, F), n, params, tol=float(opts["tol"]))
    nodes, values = result.recovered.nodes, result.recovered.values
    truth = f(nodes)
    errors = np.abs(values - truth) / np.maximum(1.0, np.abs(truth))
    # the trimmed ends of the fractional derivative are reported but not scored
    inner = errors[3:-3] if errors.size > 6 else errors
    rows = [ResultRow(float(s), float(v), None, float(e)) for s, v, e in zip(nodes, values, errors)]
    max_error = float(inner.max()) if inner.size else math.nan
    summary = {
        "rows": len(rows),
        "max_error": max_error,
        "forward_residual": result.forward_residual,
        "in_range": result.in_range,
    }
    failed = not max_error <= float(opts["tol"])
    return RunOutput(rows, summary, failed, "t", "recovered f_eta", [float(t) for t in truth])


COMMANDS: dict[str, Callable[[dict[str, Any]], RunOutput]] = {
    "forward": cmd_forward,
    "invert": cmd_invert,
    "roundtrip": cmd_roundtrip,
    "oracle": cmd_oracle,
    "verify-identity": cmd_verify_identity,
    "frac": cmd_frac,
    "freq-roundtrip": cmd_freq_roundtrip,
}


# }}}


# {{{ argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser, geometric: bool = True) -> None:
    g = p.add_argument_group("run")
    g.add_argument("--config", help="JSON file with option values; flags override it")
    g.add_argument("--profile", help="builtin name[:key=value,...] or csv:<file>")
    g.add_argument("--grid", help="lo:hi:count[:uniform|chebyshev]")
    g.add_argument("--spacing", choices=["uniform", "chebyshev"])
    g.add_argument("--seed", type=int)
    g.add_argument("--tol", type=float, help="tolerance deciding exit status 2")
    g.add_argument("--out", help="CSV output path (default: stdout)")
    g.add_argument("--summary", help="JSON summary path")
    g.add_argument("--plot", help="render a PNG figure to this path")
    if geometric:
        geo = p.add_argument_group("geometry")
        geo.add_argument("--setting", choices=[s.value for s in Setting])
        geo.add_argument("--n", type=int)
        geo.add_argument("--k", type=int)
        geo.add_argument("--alpha", type=float)
        geo.add_argument("--side", help="+ or -")
        geo.add_argument("--guard", type=float, help="guard band around singular loci")
        geo.add_argument("--equatorial", action="store_true", default=None,
                         help="sphere-cap data parametrized by theta_n (alpha = pi/2)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tangent-means", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tangent-means {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("forward", help="transform values on a parameter grid")
    _common(p)

    for name, text in (("invert", "recover f0 from transform data"), ("roundtrip", "forward then invert")):
        p = sub.add_parser(name, help=text)
        _common(p)
        if name == "invert":
            p.add_argument("--data", help="CSV of param,value (default: synthesize from --profile)")
        p.add_argument("--profile-exponent", type=float, help="known power of f0 at the base point")
        p.add_argument("--window", type=int, help="local fit window of the derivative")

    p = sub.add_parser("oracle", help="Monte Carlo or slice-quadrature check of the forward transform")
    _common(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--method", choices=["mc", "slice"])

    p = sub.add_parser("verify-identity", help="weighted integral identity, both sides")
    _common(p)
    p.add_argument("--identity", choices=["generic", "circle", *_CLOSED_IDENTITIES])
    p.add_argument("--weight", help="transform-side weight u0 for the generic identity")
    p.add_argument("--weight-exponent", type=float, help="exponent of the closed-form weights")
    p.add_argument("--branch", choices=["A", "B"])
    p.add_argument("--decay", type=float, help="power decay of the outer integrands (inf: exponential)")
    p.add_argument("--inner-decay", type=float, help="power decay of the weight-transfer integrand")

    p = sub.add_parser("frac", help="Riemann-Liouville integral or derivative of a profile")
    _common(p, geometric=False)
    p.add_argument("--op", choices=["integral", "derivative"])
    p.add_argument("--order", type=float)
    p.add_argument("--side", dest="frac_side", choices=["left", "right"])
    p.add_argument("--base", type=float)
    p.add_argument("--domain", help="lo:hi of the profile")

    p = sub.add_parser("freq-roundtrip", help="half-space reconstruction at one horizontal frequency")
    _common(p, geometric=False)
    p.add_argument("--n", type=int)
    p.add_argument("--lam", type=float, help="frequency magnitude")
    p.add_argument("--domain", help="0:b, the profile interval")
    return parser


def resolve_options(args: argparse.Namespace) -> dict[str, Any]:
    """Defaults, then the JSON config, then explicit flags."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise UsageError(f"unknown config key {key!r}")
            opts[key] = value
    for key, value in vars(args).items():
        if key in DEFAULTS and value is not None:
            opts[key] = value
    opts["equatorial"] = bool(opts["equatorial"])
    if opts["equatorial"] and opts["alpha"] is None:
        opts["alpha"] = 0.5 * math.pi
    opts["profile"] = str(opts["profile"])
    return opts


def _header(command: str, opts: dict[str, Any]) -> str:
    if command in ("frac", "freq-roundtrip"):
        geometry = f"setting=none seed={opts['seed']} n={opts['n']} domain={opts['domain']}"
    else:
        parameter = "theta_n" if opts["equatorial"] else PARAMETER_NAMES[Setting(opts["setting"])]
        geometry = (
            f"setting={opts['setting']} seed={opts['seed']} parameter={parameter} n={opts['n']} "
            f"k={opts['k']} alpha={opts['alpha']} side={opts['side']} guard={opts['guard']:g}"
        )
    return (
        f"# tangent-means v{__version__} {geometry} command={command} "
        f"profile={opts['profile']} tol={opts['tol']:g}"
    )


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        opts = resolve_options(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            output = COMMANDS[args.command](opts)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if "admissible" not in str(exc) and "\n" not in str(exc):
            print("admissible ranges:\n" + admissible_ranges(), file=sys.stderr)
        return EXIT_USAGE

    _write(render_csv(output.rows, _header(args.command, opts)), opts["out"])
    summary = {
        "command": args.command,
        "version": __version__,
        "status": "tolerance" if output.failed else "ok",
        "tol": opts["tol"],
        **output.summary,
    }
    text = json.dumps(summary, indent=2, sort_keys=True, default=str)
    if opts["summary"]:
        Path(opts["summary"]).write_text(text + "\n")
    (sys.stdout if opts["out"] else sys.stderr).write(text + "\n")

    if opts["plot"]:
        from .plotting import plot_rows

        plot_rows(
            opts["plot"],
            [r.param for r in output.rows],
            [r.value for r in output.rows],
            xlabel=output.xlabel,
            ylabel=output.ylabel,
            title=f"{args.command}: {opts['profile']}",
            reference=output.reference,
            stderr=[r.stderr for r in output.rows] if any(r.stderr is not None for r in output.rows) else None,
        )
    return EXIT_TOLERANCE if output.failed else EXIT_OK


# }}}
