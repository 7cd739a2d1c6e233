"""Builtin radial/zonal profiles and the ``name:key=value,...`` spec syntax.

The ``example*`` profiles have closed-form transforms, which :func:`closed_form`
returns as a function of the transform parameter. Generic families adapt to
the natural profile domain of the setting.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .fracops import Profile1D
from .specfun import gamma
from .transforms import GeomConfig, Setting, parameter_domain

Array = np.ndarray


class ProfileError(ValueError):
    """Unknown profile name, bad parameter, or profile used in the wrong setting."""


@dataclass(frozen=True)
class ProfileSpec:
    name: str
    params: tuple[tuple[str, float], ...] = ()
    path: str | None = None

    def get(self, key: str, default: float) -> float:
        for k, v in self.params:
            if k == key:
                return v
        return default

    def __str__(self) -> str:
        if self.path is not None:
            return f"csv:{self.path}"
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v:g}" for k, v in self.params)


def parse_profile(text: str) -> ProfileSpec:
    """Parse ``name`` or ``name:key=value,key=value``; ``csv:path`` loads samples."""
    text = text.strip()
    name, _, rest = text.partition(":")
    name = name.strip().lower()
    if name == "csv":
        if not rest:
            raise ProfileError("csv profile needs a path: csv:<file>")
        return ProfileSpec("csv", path=rest)
    if name not in _FAMILIES:
        raise ProfileError(f"unknown profile {name!r}; builtins: {', '.join(sorted(_FAMILIES))}")
    params = []
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise ProfileError(f"profile parameter {item!r} is not key=value")
        try:
            params.append((key.strip(), float(value)))
        except ValueError:
            raise ProfileError(f"profile parameter {item!r} is not numeric") from None
    allowed = _FAMILIES[name].keys
    unknown = [k for k, _ in params if k not in allowed]
    if unknown:
        raise ProfileError(f"{name} takes {', '.join(allowed) or 'no parameters'}; got {', '.join(unknown)}")
    return ProfileSpec(name, tuple(params))


def profile_domain(cfg: GeomConfig) -> tuple[float, float]:
    """Natural domain of ``f0``: radius, height, or last coordinate."""
    s = cfg.setting
    if s in (Setting.BallInterior, Setting.HalfBallChord):
        return 0.0, 1.0
    if s in (Setting.BallExterior, Setting.Hyperbolic):
        return 1.0, math.inf
    if s is Setting.SphereCap:
        return -1.0, 1.0
    return 0.0, math.inf


# {{{ families


@dataclass(frozen=True)
class _Family:
    build: Callable[[ProfileSpec, GeomConfig | None, float, float], Profile1D]
    keys: tuple[str, ...] = field(default=())
    setting: Setting | None = None


def _require(spec: ProfileSpec, cfg: GeomConfig, setting: Setting) -> None:
    if cfg.setting is not setting:
        raise ProfileError(f"{spec.name} is defined for {setting.value}, not {cfg.setting.value}")


def _ball_example(spec: ProfileSpec, cfg: GeomConfig, lo: float, hi: float) -> Profile1D:
    # |y|^(1-k-2b) |1 - |y|^2|^(b + (1-k)/2)
    k = cfg.k
    beta = spec.get("beta", 1.0)
    if not beta > 0:
        raise ProfileError(f"beta must be positive: {beta}")
    p_origin = 1.0 - k - 2.0 * beta
    p_shell = beta + 0.5 * (1 - k)

    def f(s: Array) -> Array:
        return s**p_origin * np.abs(1.0 - s * s) ** p_shell

    if cfg.setting is Setting.BallInterior:
        return Profile1D(f, 0.0, 1.0, (p_origin, p_shell))
    return Profile1D(f, 1.0, math.inf, (p_shell, 0.0))


def _example32(spec: ProfileSpec, cfg: GeomConfig, lo: float, hi: float) -> Profile1D:
    _require(spec, cfg, Setting.BallInterior)
    return _ball_example(spec, cfg, lo, hi)


def _example38(spec: ProfileSpec, cfg: GeomConfig, lo: float, hi: float) -> Profile1D:
    _require(spec, cfg, Setting.BallExterior)
    return _ball_example(spec, cfg, lo, hi)


def _example43(spec: ProfileSpec, cfg: GeomConfig, lo: float, hi: float) -> Profile1D:
    _require(spec, cfg, Setting.HalfBallChord)
    a = spec.get("alpha", 1.0)
    if not a > 0:
        raise ProfileError(f"alpha must be positive: {a}")
    p0 = a - 0.5 * (cfg.k + 1)
    p1 = a + 0.5 * (cfg.k + 1)
    return Profile1D(lambda s: s**p0 / (1.0 - s) ** p1, 0.0, 1.0, (p0, -p1))


def _example53(spec: ProfileSpec, cfg: GeomConfig, lo: float, hi: float) -> Profile1D:
    _require(spec, cfg, Setting.SphereCap)
    beta = spec.get("beta", 1.0)
    if not beta > 0:
        raise ProfileError(f"beta must be positive: {beta}")
    p0 = beta + 0.5 * (1 - cfg.k)
    p1 = beta + 0.5 * (cfg.k - 1)
    return Profile1D(lambda s: s**p0 / (1.0 - s) ** p1, 0.0, 1.0, (p0, -p1))


def _power(spec: ProfileSpec, cfg: GeomConfig | None, lo: float, hi: float) -> Profile1D:
    p = spec.get("p", 1.0)
    scale = spec.get("scale", 1.0)
    exps = (p, 0.0) if lo == 0.0 else (0.0, 0.0)
    if lo < 0.0 and p != int(p):
        raise ProfileError("non-integer powers need a domain starting at 0")
    return Profile1D(lambda s: scale * s**p, lo, hi, exps)


def _exp_decay(spec: ProfileSpec, cfg: GeomConfig | None, lo: float, hi: float) -> Profile1D:
    rate = spec.get("rate", 1.0)
    return Profile1D(lambda s: np.exp(-rate * (s - lo)), lo, hi)


def _poly(spec: ProfileSpec, cfg: GeomConfig | None, lo: float, hi: float) -> Profile1D:
    coeffs = [spec.get(f"c{i}", 0.0) for i in range(5)]
    return Profile1D(lambda s: np.polynomial.polynomial.polyval(s, coeffs), lo, hi)


def _window(spec: ProfileSpec, lo: float, hi: float) -> tuple[float, float]:
    top = hi if math.isfinite(hi) else lo + 2.0
    a = spec.get("a", lo + 0.25 * (top - lo))
    b = spec.get("b", lo + 0.75 * (top - lo))
    if not lo <= a < b <= hi:
        raise ProfileError(f"need {lo} <= a < b <= {hi}, got a={a}, b={b}")
    return a, b


def _bump(spec: ProfileSpec, cfg: GeomConfig | None, lo: float, hi: float) -> Profile1D:
    a, b = _window(spec, lo, hi)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)

    def f(s: Array) -> Array:
        z = (s - mid) / half
        inside = np.abs(z) < 1.0
        out = np.zeros_like(s)
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - z[inside] ** 2))
        return out

    return Profile1D(f, lo, hi, breaks=(a, b))


def _indicator(spec: ProfileSpec, cfg: GeomConfig | None, lo: float, hi: float) -> Profile1D:
    a, b = _window(spec, lo, hi)
    return Profile1D(lambda s: ((s > a) & (s < b)).astype(float), lo, hi, breaks=(a, b))


def _ramp(spec: ProfileSpec, cfg: GeomConfig | None, lo: float, hi: float) -> Profile1D:
    # (s - a)_+^m, or (a - s)_+^m with down=1; vanishes on one side of a
    top = hi if math.isfinite(hi) else lo + 2.0
    a = spec.get("a", 0.5 * (lo + top))
    m = spec.get("m", 4.0)
    down = spec.get("down", 0.0) != 0.0
    if not lo < a < hi:
        raise ProfileError(f"ramp point a={a} outside ({lo}, {hi})")
    if down:
        return Profile1D(lambda s: np.maximum(a - s, 0.0) ** m, lo, hi, breaks=(a,))
    return Profile1D(lambda s: np.maximum(s - a, 0.0) ** m, lo, hi, breaks=(a,))


_FAMILIES: dict[str, _Family] = {
    "example32": _Family(_example32, ("beta",), Setting.BallInterior),
    "example38": _Family(_example38, ("beta",), Setting.BallExterior),
    "example43": _Family(_example43, ("alpha",), Setting.HalfBallChord),
    "example53": _Family(_example53, ("beta",), Setting.SphereCap),
    "power": _Family(_power, ("p", "scale")),
    "exp-decay": _Family(_exp_decay, ("rate",)),
    "poly": _Family(_poly, ("c0", "c1", "c2", "c3", "c4")),
    "bump": _Family(_bump, ("a", "b")),
    "indicator": _Family(_indicator, ("a", "b")),
    "ramp": _Family(_ramp, ("a", "m", "down")),
}

BUILTINS = tuple(_FAMILIES)


# }}}


def _from_csv(path: str, domain: tuple[float, float] | None) -> Profile1D:
    rows = []
    with Path(path).open(newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                continue  # header line
    if len(rows) < 4:
        raise ProfileError(f"{path}: need at least 4 numeric rows of s,value")
    rows.sort()
    nodes, values = map(np.array, zip(*rows))
    lo, hi = domain if domain is not None else (nodes[0], nodes[-1])
    lo = lo if math.isfinite(lo) and lo <= nodes[0] else nodes[0]
    hi = hi if math.isfinite(hi) and hi >= nodes[-1] else nodes[-1]
    return Profile1D.from_samples(nodes, values, lo=lo, hi=hi)


def weight_domain(cfg: GeomConfig) -> tuple[float, float]:
    """Domain of the transform-side weight ``u0`` in the weighted identities.

    This is the parameter domain, except on the sphere where the weight is a
    function of ``y = |theta_n| in (0, 1)``.
    """
    if cfg.setting is Setting.SphereCap:
        return 0.0, 1.0
    if cfg.setting is Setting.HalfBallChord:
        return 0.0, 1.0
    return parameter_domain(cfg)


def build_profile(
    spec: ProfileSpec | str, cfg: GeomConfig | None, domain: tuple[float, float] | None = None
) -> Profile1D:
    """Profile for ``spec`` on ``domain`` (default: the natural profile domain of ``cfg``).

    Without a geometric configuration only the generic families are
    available and ``domain`` is required.
    """
    if isinstance(spec, str):
        spec = parse_profile(spec)
    if spec.name == "csv":
        return _from_csv(spec.path or "", domain if cfg is None else profile_domain(cfg))
    family = _FAMILIES[spec.name]
    if cfg is None:
        if family.setting is not None or domain is None:
            raise ProfileError(f"{spec.name} needs a geometric setting")
        return family.build(spec, cfg, *domain)
    lo, hi = profile_domain(cfg) if domain is None else domain
    return family.build(spec, cfg, lo, hi)


# {{{ closed forms


def _ball_closed(beta: float, k: int) -> Callable[[float], float]:
    c = gamma(beta) * gamma(0.5 * k) / (2.0 * math.sqrt(math.pi) * gamma(beta + 0.5 * (k - 1)))

    def phi(t: float) -> float:
        # |x| (1 - |x|) = (1 - t^2) / 4 and ||x| - 1/2| = t / 2 on both branches
        return c * (abs(1.0 - t * t) / 4.0) ** (beta + 0.5 * (1 - k)) / (0.5 * t) ** (2.0 * beta)

    return phi


def _chord_closed(a: float, k: int) -> Callable[[float], float]:
    c = math.pi ** (0.5 * (k - 1)) * gamma(a) / gamma(a + 0.5 * (k + 1))

    def phi(theta_n: float) -> float:
        r = 2.0 * theta_n * math.sqrt(1.0 - theta_n * theta_n)
        return c * r ** (a + 0.5 * (k - 1)) / ((1.0 - theta_n * theta_n) ** (0.5 * k) * (1.0 - r) ** a)

    return phi


def _equatorial_closed(beta: float, k: int) -> Callable[[float], float]:
    # the 2^(k-2) matches the equatorial transform normalized to 1 on f0 = 1
    c = 2.0 ** (k - 2) * gamma(0.5 * k) * gamma(beta) / (math.sqrt(math.pi) * gamma(beta + 0.5 * (k - 1)))

    def phi(theta_n: float) -> float:
        r = 2.0 * theta_n * math.sqrt(1.0 - theta_n * theta_n)
        return c * r ** (beta + 0.5 * (1 - k)) / (1.0 - r) ** beta

    return phi


def closed_form(spec: ProfileSpec | str, cfg: GeomConfig) -> Callable[[float], float] | None:
    """Exact transform of an ``example*`` profile as a function of the parameter.

    ``example53`` is parametrized by the equatorial ``theta_n`` (needs
    ``alpha = pi/2``). Returns None for profiles without a closed form.
    """
    if isinstance(spec, str):
        spec = parse_profile(spec)
    family = _FAMILIES.get(spec.name)
    if family is None or family.setting is None:
        return None
    _require(spec, cfg, family.setting)
    k = cfg.k
    if spec.name in ("example32", "example38"):
        return _ball_closed(spec.get("beta", 1.0), k)
    if spec.name == "example43":
        return _chord_closed(spec.get("alpha", 1.0), k)
    if not math.isclose(cfg.alpha, 0.5 * math.pi):
        return None
    return _equatorial_closed(spec.get("beta", 1.0), k)


# }}}
