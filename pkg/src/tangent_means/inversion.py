"""Recovering a symmetric profile from its tangent-transform data.

Every setting is rewritten as an Abel-type equation ``H = I^order g`` in a
suitable variable ``v``: the data are mapped to ``H``, a Riemann-Liouville
derivative gives ``g`` and a power prefactor turns ``g`` back into ``f0``.
Only the substitution differs between settings; the numerics all go through
:func:`abel_invert`.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .fracops import FracSpec, Grid1D, Profile1D, Side, rl_derivative, split_order
from .specfun import gamma
from .transforms import (
    Branch,
    GeomConfig,
    Setting,
    TransformProfile,
    cap_argument,
    equatorial_forward,
    forward_value,
    hyperbolic_argument,
)

DEFAULT_TOL = 1e-3

Array = np.ndarray


@dataclass(frozen=True)
class InversionReport:
    recovered: Grid1D
    forward_residual: float
    guard: float
    trimmed: int
    in_range: bool


@dataclass(frozen=True)
class SupportReport:
    """Where the data vanish and where the profile must therefore vanish."""

    parameter_interval: tuple[float, float] | None
    profile_interval: tuple[float, float] | None


@dataclass(frozen=True)
class AbelForm:
    """Substitution turning transform data into ``H = I^order g``.

    ``variable`` maps the transform parameter to ``v``; ``data_to_h`` maps
    ``(params, values)`` to ``H(v)``; ``profile_at`` maps ``v`` to the profile
    variable ``s``; ``prefactor(v)`` multiplies ``D^order H`` to give ``f0(s)``.
    ``edge_exponent`` is the power of ``|v - base|`` in ``H`` for a profile
    that is smooth and nonzero at the base.
    """

    order: float
    side: Side
    base: float
    variable: Callable[[Array], Array]
    data_to_h: Callable[[Array, Array], Array]
    profile_at: Callable[[Array], Array]
    prefactor: Callable[[Array], Array]
    edge_exponent: float
    branch: Callable[[Array], Array] | None = None


# {{{ per-setting substitutions


def abel_form(cfg: GeomConfig, parameter: str = "") -> AbelForm:
    """Abel substitution for ``cfg``; ``parameter`` names the data's parameter."""
    k = cfg.k
    s = cfg.setting
    half = 0.5 * (k - 1)
    c_ball = math.sqrt(math.pi) / gamma(0.5 * k)

    if s is Setting.BallInterior:
        return AbelForm(
            half,
            Side.Right,
            1.0,
            lambda t: t * t,
            lambda t, phi: c_ball * (0.5 * (1.0 - t * t)) ** (k - 2) * phi,
            np.sqrt,
            lambda v: (1.0 - v) ** (0.5 * (3 - k)),
            k - 2.0,
        )
    if s is Setting.BallExterior:
        return AbelForm(
            half,
            Side.Left,
            1.0,
            lambda t: t * t,
            lambda t, phi: c_ball * (0.5 * (t * t - 1.0)) ** (k - 2) * phi,
            np.sqrt,
            lambda v: (v - 1.0) ** (0.5 * (3 - k)),
            k - 2.0,
        )
    if s is Setting.HalfBallChord:
        return AbelForm(
            0.5 * (k + 1),
            Side.Left,
            0.0,
            lambda th: 2.0 * th * np.sqrt(1.0 - th * th),
            lambda th, phi: math.pi ** (-half) * (1.0 - th * th) ** (0.5 * k) * phi,
            lambda v: v,
            lambda v: v ** (-half),
            float(k),
            branch=lambda th: th > 1.0 / math.sqrt(2.0),
        )
    if s is Setting.HalfSpace:
        c_half = math.sqrt(math.pi) / gamma(0.5 * (k + 1))
        return AbelForm(
            0.5 * k,
            Side.Left,
            0.0,
            lambda x: 2.0 * x,
            lambda x, phi: c_half * x ** (k - 1) * phi,
            lambda v: v,
            lambda v: v ** (0.5 * (2 - k)),
            k - 1.0,
        )
    if s is Setting.SphereCap:
        alpha = cfg.alpha
        a = math.cos(alpha)
        equatorial = parameter == "theta_n"
        to_beta = (lambda p: np.arcsin(np.abs(p))) if equatorial else (lambda p: p)
        u_of = np.vectorize(lambda b: cap_argument(cfg, float(b))[0])
        if cfg.side is Branch.Plus:
            return AbelForm(
                half,
                Side.Left,
                a,
                lambda p: np.cos(alpha - 2.0 * to_beta(p)),
                lambda p, phi: phi / u_of(to_beta(p)),
                lambda v: v,
                lambda v: np.abs(v - a) ** (0.5 * (3 - k)),
                k - 2.0,
                branch=lambda p: to_beta(p) < 0.5 * alpha,
            )
        return AbelForm(
            half,
            Side.Right,
            a,
            lambda p: np.cos(alpha + 2.0 * to_beta(p)),
            lambda p, phi: phi / u_of(to_beta(p)),
            lambda v: v,
            lambda v: np.abs(a - v) ** (0.5 * (3 - k)),
            k - 2.0,
            branch=lambda p: to_beta(p) < 0.5 * (math.pi - alpha),
        )
    if s is Setting.Hyperbolic:
        alpha = cfg.alpha
        a = math.cosh(alpha)
        u_of = np.vectorize(lambda b: hyperbolic_argument(cfg, float(b))[0])
        if cfg.side is Branch.Plus:
            return AbelForm(
                half,
                Side.Right,
                a,
                lambda b: np.cosh(2.0 * b - alpha),
                lambda b, phi: phi / u_of(b),
                lambda v: v,
                lambda v: np.abs(a - v) ** (0.5 * (3 - k)),
                k - 2.0,
                branch=lambda b: b < 0.5 * alpha,
            )
        return AbelForm(
            half,
            Side.Left,
            a,
            lambda b: np.cosh(2.0 * b + alpha),
            lambda b, phi: phi / u_of(b),
            lambda v: v,
            lambda v: np.abs(v - a) ** (0.5 * (3 - k)),
            k - 2.0,
        )
    raise ValueError(f"unknown setting {s}")


# }}}


# {{{ inversion


def abel_invert(
    h: Grid1D,
    order: float,
    side: Side,
    base: float,
    *,
    edge_exponent: float = 0.0,
    window: int = 7,
    trim: int | None = None,
) -> Grid1D:
    """``D^order H`` on the interior nodes of ``h`` (nodes are ``v`` values).

    ``H`` is taken to behave like ``|v - base|^edge_exponent`` times a smooth
    function near the base.
    """
    m, _ = split_order(order)
    if trim is None:
        trim = m + 2
    return rl_derivative(
        h, FracSpec(order, side, base), window=window, trim=trim, edge_exponent=edge_exponent
    )


def _select(form: AbelForm, data: TransformProfile) -> tuple[Array, Array, Array]:
    params = data.grid.nodes
    values = data.grid.values
    if form.branch is not None:
        keep = form.branch(params)
        params, values = params[keep], values[keep]
    v = form.variable(params)
    order = np.argsort(v)
    return params[order], values[order], v[order]


def invert(
    data: TransformProfile,
    cfg: GeomConfig,
    *,
    profile_exponent: float = 0.0,
    window: int = 7,
    tol: float = DEFAULT_TOL,
    check: bool = True,
) -> InversionReport:
    """Recover ``f0`` from transform data on a guarded parameter grid.

    ``profile_exponent`` declares a known power behaviour of ``f0`` at the
    base point of the fractional derivative (0 for profiles that are smooth
    and nonzero there). With ``check`` the recovered profile is transformed
    again and compared with the data.
    """
    form = abel_form(cfg, data.parameter)
    params, values, v = _select(form, data)
    h = Grid1D(v, form.data_to_h(params, values))
    m, _ = split_order(form.order)
    trim = m + 2
    edge = form.edge_exponent + profile_exponent
    derivative = abel_invert(h, form.order, form.side, form.base, edge_exponent=edge, window=window, trim=trim)

    s_nodes = form.profile_at(derivative.nodes)
    f0_values = form.prefactor(derivative.nodes) * derivative.values
    order = np.argsort(s_nodes)
    recovered = Grid1D(s_nodes[order], f0_values[order])

    residual = 0.0
    if check:
        kept = params[trim : params.size - trim]
        residual = forward_residual(
            recovered, cfg, kept, values[trim : values.size - trim], profile_exponent, data.parameter
        )
    return InversionReport(recovered, residual, cfg.guard_eps, trim, residual <= tol)


def _profile_domain(cfg: GeomConfig, nodes: Array) -> tuple[float, float]:
    """Interval the recovered spline must cover: extended to the base point."""
    lo, hi = float(nodes[0]), float(nodes[-1])
    s = cfg.setting
    if s is Setting.BallInterior:
        return lo, 1.0
    if s is Setting.BallExterior:
        return 1.0, hi
    if s in (Setting.HalfBallChord, Setting.HalfSpace):
        return 0.0, hi
    if s is Setting.SphereCap:
        a = math.cos(cfg.alpha)
        return (a, hi) if cfg.side is Branch.Plus else (lo, a)
    a = math.cosh(cfg.alpha)
    return (lo, a) if cfg.side is Branch.Plus else (a, hi)


def _origin_power(nodes: Array, values: Array, count: int = 4) -> float:
    """Leading power of a recovered interior profile at ``s = 0``.

    Fitted as a log-log slope over the first few nodes; zero unless the
    samples share a sign and grow towards the origin.
    """
    head_x, head_y = nodes[:count], values[:count]
    if not (np.all(head_y > 0) or np.all(head_y < 0)):
        return 0.0
    slope = np.polyfit(np.log(head_x), np.log(np.abs(head_y)), 1)[0]
    return float(slope) if slope < -0.5 else 0.0


def recovered_profile(recovered: Grid1D, cfg: GeomConfig, profile_exponent: float = 0.0) -> Profile1D:
    """Spline through recovered values, extended to the base point of the setting."""
    nodes, values = recovered.nodes, recovered.values
    lo, hi = _profile_domain(cfg, nodes)
    s = cfg.setting
    base_at_lo = s in (Setting.BallExterior, Setting.HalfBallChord, Setting.HalfSpace) or (
        s is Setting.SphereCap and cfg.side is Branch.Plus
    ) or (s is Setting.Hyperbolic and cfg.side is Branch.Minus)
    if base_at_lo:
        exponents = (profile_exponent, 0.0)
    elif s is Setting.BallInterior:
        # the origin is a natural end of the interior data; a profile blowing
        # up there would otherwise defeat the spline
        lo = 0.0
        exponents = (_origin_power(nodes, values), profile_exponent)
    else:
        exponents = (0.0, profile_exponent)
    return Profile1D.from_samples(nodes, values, lo=lo, hi=hi, exponents=exponents)


def forward_residual(
    recovered: Grid1D,
    cfg: GeomConfig,
    params: Array,
    values: Array,
    profile_exponent: float = 0.0,
    parameter: str = "",
) -> float:
    """Sup over ``params`` of ``|forward(recovered) - data| / max(1, |data|)``.

    The scaling keeps the residual meaningful for data that blow up at a
    singular locus while staying an absolute error for data of order one.
    """
    profile = recovered_profile(recovered, cfg, profile_exponent)
    apply = forward_value
    if cfg.setting is Setting.SphereCap and parameter == "theta_n":
        apply = equatorial_forward
    again = np.array([apply(profile, cfg, float(p)) for p in params])
    if not params.size:
        return 0.0
    return float(np.max(np.abs(again - values) / np.maximum(1.0, np.abs(values))))


def ball_interior_invert(data: TransformProfile, cfg: GeomConfig, **kwargs) -> InversionReport:
    return invert(data, cfg, **kwargs)


def ball_exterior_invert(data: TransformProfile, cfg: GeomConfig, **kwargs) -> InversionReport:
    return invert(data, cfg, **kwargs)


def halfball_chord_invert(data: TransformProfile, cfg: GeomConfig, **kwargs) -> InversionReport:
    return invert(data, cfg, **kwargs)


def halfspace_invert(data: TransformProfile, cfg: GeomConfig, **kwargs) -> InversionReport:
    return invert(data, cfg, **kwargs)


def sphere_cap_invert(data: TransformProfile, cfg: GeomConfig, **kwargs) -> InversionReport:
    return invert(data, cfg, **kwargs)


def hyperbolic_invert(data: TransformProfile, cfg: GeomConfig, **kwargs) -> InversionReport:
    return invert(data, cfg, **kwargs)


# }}}


# {{{ support


def _run(mask: Array, leading: bool) -> slice | None:
    """Longest run of True at the start (``leading``) or end of ``mask``."""
    if leading:
        stop = int(np.argmin(mask)) if not mask.all() else mask.size
        return slice(0, stop) if stop else None
    rev = mask[::-1]
    stop = int(np.argmin(rev)) if not rev.all() else rev.size
    return slice(mask.size - stop, mask.size) if stop else None


def support_check(data: TransformProfile, cfg: GeomConfig, threshold: float) -> SupportReport:
    """Largest one-sided parameter run where ``|data| < threshold`` and the
    profile interval on which ``f0`` must then vanish."""
    params = data.grid.nodes
    small = np.abs(data.grid.values) < threshold
    s = cfg.setting
    trailing = s in (Setting.BallInterior, Setting.HalfBallChord)
    run = _run(small, leading=not trailing)
    if run is None:
        return SupportReport(None, None)
    p_lo, p_hi = float(params[run][0]), float(params[run][-1])

    if s is Setting.BallInterior:
        return SupportReport((p_lo, 1.0), (p_lo, 1.0))
    if s is Setting.BallExterior:
        return SupportReport((1.0, p_hi), (1.0, p_hi))
    if s is Setting.HalfBallChord:
        h = 2.0 * p_lo * math.sqrt(1.0 - p_lo * p_lo)
        return SupportReport((p_lo, 1.0), (0.0, h))
    if s is Setting.HalfSpace:
        return SupportReport((0.0, p_hi), (0.0, 2.0 * p_hi))
    if s is Setting.SphereCap:
        a = math.cos(cfg.alpha)
        if cfg.side is Branch.Plus:
            return SupportReport((0.0, p_hi), (a, math.cos(cfg.alpha - 2.0 * min(p_hi, 0.5 * cfg.alpha))))
        return SupportReport((0.0, p_hi), (math.cos(cfg.alpha + 2.0 * p_hi), a))
    a = math.cosh(cfg.alpha)
    if cfg.side is Branch.Plus:
        return SupportReport((0.0, p_hi), (math.cosh(2.0 * min(p_hi, 0.5 * cfg.alpha) - cfg.alpha), a))
    return SupportReport((0.0, p_hi), (a, math.cosh(2.0 * p_hi + cfg.alpha)))


# }}}
