"""Weighted equalities between transform data and profiles.

For a weight ``u`` on the transform side there is a weight ``v`` on the
profile side with

    int (transform of f) * u  =  int f * v,

each side taken against its natural measure for symmetric ``f``. This module
computes ``v`` from ``u`` (:func:`weight_transfer`), evaluates both sides
numerically (:func:`verify_identity`) and provides the closed-form instances
(:func:`conn_identity`, :func:`consd_power_identity`,
:func:`consd_inverse_identity`, :func:`circle_identity`,
:func:`halfspace_power_identity`).

Transform-side conventions, with ``u0`` the weight passed in:

* ball interior: ``u(|x|) = |x|^(1-k) u0(|2|x|-1|)`` on the tangent k-ball,
  which collapses to ``sigma_{k-1} int_0^1 Phi(t) u0(t) dt``;
* ball exterior: the same with ``2|x|-1``, giving ``sigma_{k-1}/2 int_1^oo Phi u0``;
* sphere cap (equatorial, ``alpha = pi/2``): ``u0`` is a function of the chord
  length ``y = 2 theta sqrt(1 - theta^2)`` and the integral over either
  branch becomes ``sigma_{n-2}/2 int_0^1 y^(k-2) u0(y) R(theta(y)) dy``;
* half space: ``int_0^oo Phi(x) u0(x) dx`` per unit horizontal area;
* chord and hyperbolic: ``int Phi(p) u0(p) dp`` over the parameter branch.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .fracops import IntegrabilityError, Profile1D
from .quadrature import power_weighted, power_weighted_tail
from .specfun import gamma, sphere_area
from .transforms import (
    Branch,
    ConfigError,
    GeomConfig,
    Setting,
    equatorial_forward,
    forward_value,
    parameter_domain,
)

Array = np.ndarray


class DivergenceError(IntegrabilityError):
    """Raised when a weight exponent makes one side of an identity diverge."""


@dataclass(frozen=True)
class WeightPair:
    """Transform-side weight ``u`` and the profile-side weight ``v`` it induces."""

    u: Profile1D
    v: Profile1D
    setting: Setting
    constants: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float
    relerr: float


def _relerr(lhs: float, rhs: float) -> float:
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale if lhs != rhs else 0.0


def _check(lhs: float, rhs: float) -> IdentityCheck:
    return IdentityCheck(lhs, rhs, _relerr(lhs, rhs))


def _pointwise(func: Callable[[float], float]) -> Callable[[Array], Array]:
    def wrapped(x: Array) -> Array:
        x = np.asarray(x, dtype=float)
        return np.array([func(float(xi)) for xi in x.ravel()]).reshape(x.shape)

    return wrapped


def _inside(x: float, lo: float, hi: float) -> float:
    # quadrature nodes may round onto an open endpoint
    if x <= lo:
        return math.nextafter(lo, math.inf)
    if x >= hi:
        return math.nextafter(hi, -math.inf)
    return x


def _integrate(
    func: Callable[[Array], Array],
    lo: float,
    hi: float,
    *,
    p_lo: float = 0.0,
    p_hi: float = 0.0,
    hint_lo: float = 0.0,
    hint_hi: float = 0.0,
    decay: float = math.inf,
) -> float:
    if math.isinf(hi):
        return power_weighted_tail(func, lo, decay=decay, p_lo=p_lo, hint_lo=hint_lo)
    return power_weighted(func, lo, hi, p_lo=p_lo, p_hi=p_hi, hint_lo=hint_lo, hint_hi=hint_hi)


# {{{ transfer u -> v


def _interior_v(u0: Profile1D, cfg: GeomConfig) -> Callable[[float], float]:
    n, k = cfg.n, cfg.k
    p = 0.5 * (k - 3)
    const = (
        2.0 ** (k - 1) * gamma(0.5 * k) * sphere_area(k)
        / (math.sqrt(math.pi) * gamma(0.5 * (k - 1)) * sphere_area(n))
    )

    def v(s: float) -> float:
        inner = power_weighted(
            lambda t: (s + t) ** p * (1.0 - t * t) ** (2 - k) * u0(t),
            0.0,
            s,
            p_hi=p,
            hint_lo=u0.exponents[0],
        )
        return const * (1.0 - s * s) ** p * s ** (2 - n) * inner

    return v


def _exterior_v(u0: Profile1D, cfg: GeomConfig, decay: float) -> Callable[[float], float]:
    n, k = cfg.n, cfg.k
    p = 0.5 * (k - 3)
    const = (
        2.0 ** (k - 2) * gamma(0.5 * k) * sphere_area(k)
        / (math.sqrt(math.pi) * gamma(0.5 * (k - 1)) * sphere_area(n))
    )

    def v(s: float) -> float:
        inner = power_weighted_tail(
            lambda t: (t + s) ** p * (t * t - 1.0) ** (2 - k) * u0(t),
            s,
            decay=decay,
            p_lo=p,
            scale=max(1.0, s - 1.0),
        )
        return const * (s * s - 1.0) ** p * s ** (2 - n) * inner

    return v


def _sphere_v(u0: Profile1D, cfg: GeomConfig) -> Callable[[float], float]:
    n, k = cfg.n, cfg.k
    p = 0.5 * (k - 3)
    # the slice mean over a chord of length y carries (y/2)^(2-k), hence 2^(k-2)
    const = 2.0 ** (k - 2) * gamma(0.5 * k) / (2.0 * math.sqrt(math.pi) * gamma(0.5 * (k - 1)))

    def v(s: float) -> float:
        inner = power_weighted(lambda y: u0(y), s, 1.0, p_lo=p, hint_hi=u0.exponents[1])
        return const * s**p * (1.0 - s * s) ** (0.5 * (3 - n)) * inner

    return v


def _halfspace_v(u0: Profile1D, cfg: GeomConfig, decay: float) -> Callable[[float], float]:
    k = cfg.k
    p = 0.5 * (k - 2)
    const = 2.0**p * sphere_area(k) / sphere_area(k + 1)

    def v(s: float) -> float:
        h = 0.5 * s
        inner = power_weighted_tail(
            lambda t: u0(t) * t ** (1 - k), h, decay=decay, p_lo=p, scale=max(1.0, h)
        )
        return const * s**p * inner

    return v


def _chord_v(u0: Profile1D, cfg: GeomConfig) -> Callable[[float], float]:
    # Phi(theta) = pi^((k-1)/2) (1 - theta^2)^(-k/2) (I^{(k+1)/2}_{0+} g)(r(theta)),
    # g = f0 s^((k-1)/2), r = 2 theta sqrt(1 - theta^2) on the A branch
    k = cfg.k
    order = 0.5 * (k + 1)

    def big_u(r: Array) -> Array:
        theta = np.sqrt(0.5 * (1.0 + np.sqrt(np.maximum(1.0 - r * r, 0.0))))
        jac = 2.0 * (2.0 * theta * theta - 1.0) / np.sqrt(1.0 - theta * theta)
        return math.pi ** (0.5 * (k - 1)) * (1.0 - theta * theta) ** (-0.5 * k) * u0(theta) / jac

    def v(s: float) -> float:
        # big_u ~ (1 - r)^(-1/2) at r = 1
        inner = power_weighted(
            lambda r: big_u(r) * np.sqrt(np.maximum(1.0 - r, 0.0)),
            s,
            1.0,
            p_lo=order - 1.0,
            p_hi=-0.5,
        )
        return s ** (0.5 * (k - 1)) * inner / gamma(order)

    return v


def _sinhc(x: Array) -> Array:
    """``sinh(x) / x`` with the removable point filled in."""
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0.0, 1.0, x)
    return np.where(x == 0.0, 1.0, np.sinh(safe) / safe)


def _hyperbolic_v(u0: Profile1D, cfg: GeomConfig, decay: float) -> Callable[[float], float]:
    k, alpha = cfg.k, cfg.alpha
    order = 0.5 * (k - 1)
    a = math.cosh(alpha)
    c_u = gamma(0.5 * k) / math.sqrt(math.pi)
    plus = cfg.side is Branch.Plus

    def big_u_times_root(arc: Array) -> Array:
        # U(w) sqrt(w^2 - 1) at w = cosh(arc), with U = u0(beta) / (A(beta) |dw/dbeta|)
        if plus:
            beta = 0.5 * (alpha - arc)
            c = alpha - beta
        else:
            beta = 0.5 * (arc - alpha)
            c = alpha + beta
        inv_h_factor = c_u * (np.sinh(beta) * np.sinh(c)) ** (2 - k)
        return u0(beta) * inv_h_factor / 2.0

    def v(s: float) -> float:
        # integrate in tau = arccosh(w): dw / sqrt(w^2 - 1) = d tau and
        # |cosh tau - s| = 2 sinh((tau + tau_s)/2) sinh(|tau - tau_s|/2)
        pref = abs(a - s) ** (0.5 * (k - 3))
        tau_s = math.acosh(s)

        def integrand(tau: Array) -> Array:
            # far in the tail sinh saturates to inf; the integrand's limit there is 0
            with np.errstate(over="ignore"):
                half = 0.5 * np.abs(tau - tau_s)
                ratio = np.sinh(0.5 * (tau + tau_s)) * _sinhc(half)
                return big_u_times_root(tau) * ratio ** (order - 1.0)

        if plus:
            inner = power_weighted(integrand, 0.0, tau_s, p_hi=order - 1.0)
        else:
            inner = power_weighted_tail(integrand, tau_s, decay=decay, p_lo=order - 1.0)
        return pref * inner / gamma(order)

    return v


def weight_transfer(u0: Profile1D, cfg: GeomConfig, *, decay: float = math.inf) -> WeightPair:
    """Profile-side weight ``v`` induced by the transform-side weight ``u0``.

    ``decay`` is the power-law decay rate of the transfer integrand on
    unbounded ranges (``inf`` for exponential decay). For the hyperbolic -
    side the integrand is written in ``tau = 2 beta + alpha`` and decays
    exponentially for any exponentially decaying weight.
    """
    s = cfg.setting
    k = cfg.k
    p = 0.5 * (k - 3)
    if s is Setting.BallInterior:
        v, lo, hi = _interior_v(u0, cfg), 0.0, 1.0
        exps = (k - cfg.n + u0.exponents[0], p)
    elif s is Setting.BallExterior:
        v, lo, hi = _exterior_v(u0, cfg, decay), 1.0, math.inf
        exps = (p, 0.0)
    elif s is Setting.SphereCap:
        if not math.isclose(cfg.alpha, 0.5 * math.pi) or cfg.side is not Branch.Plus:
            raise ConfigError("the sphere-cap identity is stated for equatorial + slices")
        v, lo, hi = _sphere_v(u0, cfg), 0.0, 1.0
        exps = (p, p + 1.0 + u0.exponents[1])
    elif s is Setting.HalfSpace:
        v, lo, hi = _halfspace_v(u0, cfg, decay), 0.0, math.inf
        exps = (u0.exponents[0], 0.0)
    elif s is Setting.HalfBallChord:
        v, lo, hi = _chord_v(u0, cfg), 0.0, 1.0
        exps = (0.5 * (k - 1), 0.5 * k)
    else:
        a = math.cosh(cfg.alpha)
        if cfg.side is Branch.Plus:
            v, lo, hi = _hyperbolic_v(u0, cfg, decay), 1.0, a
            exps = (0.5 * (k - 2), p)
        else:
            v, lo, hi = _hyperbolic_v(u0, cfg, decay), a, math.inf
            # at the origin both sinh factors vanish with tau_s and v blows up
            exps = (0.25 * (1 - k) if cfg.alpha == 0.0 else p, 0.0)
    return WeightPair(u0, Profile1D(_pointwise(lambda x: v(_inside(x, lo, hi))), lo, hi, exps), s)


# }}}


# {{{ both sides


def _phi(f0: Profile1D, cfg: GeomConfig) -> Callable[[float], float]:
    lo, hi = parameter_domain(cfg)

    def value(p: float) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return forward_value(f0, cfg, _inside(p, lo, hi))

    return value


def transform_side(
    f0: Profile1D,
    u0: Profile1D,
    cfg: GeomConfig,
    *,
    branch: str = "B",
    decay: float = math.inf,
) -> float:
    """Weighted integral of the transform of ``f0`` (see the module notes).

    ``branch`` selects the half of a two-to-one parametrization ("A" or "B")
    for the sphere cap, chord-free hyperbolic + and similar settings.
    """
    n, k = cfg.n, cfg.k
    s = cfg.setting
    hint0, hint1 = u0.exponents
    if s is Setting.BallInterior:
        phi = _phi(f0, cfg)
        g = _pointwise(lambda t: phi(t) * float(u0(t)))
        return sphere_area(k) * _integrate(g, 0.0, 1.0, hint_lo=hint0, hint_hi=hint1)
    if s is Setting.BallExterior:
        phi = _phi(f0, cfg)
        g = _pointwise(lambda t: phi(t) * float(u0(t)))
        return 0.5 * sphere_area(k) * _integrate(g, 1.0, math.inf, hint_lo=hint0, decay=decay)
    if s is Setting.SphereCap:
        sign = 1.0 if branch == "A" else -1.0

        def g_sphere(y: float) -> float:
            theta = math.sqrt(0.5 * (1.0 + sign * math.sqrt(max(1.0 - y * y, 0.0))))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                r = equatorial_forward(f0, cfg, _inside(theta, 0.0, 1.0))
            return y ** (k - 2) * float(u0(y)) * r

        return 0.5 * sphere_area(n - 1) * _integrate(
            _pointwise(g_sphere), 0.0, 1.0, hint_lo=hint0, hint_hi=hint1
        )
    if s is Setting.HalfSpace:
        phi = _phi(f0, cfg)
        g = _pointwise(lambda x: phi(x) * float(u0(x)))
        return _integrate(g, 0.0, math.inf, hint_lo=hint0, decay=decay)
    if s is Setting.HalfBallChord:
        phi = _phi(f0, cfg)
        g = _pointwise(lambda th: phi(th) * float(u0(th)))
        return _integrate(g, 1.0 / math.sqrt(2.0), 1.0, hint_lo=hint0, hint_hi=hint1)
    # hyperbolic: the + side uses beta in (0, alpha/2)
    phi = _phi(f0, cfg)
    g = _pointwise(lambda b: phi(b) * float(u0(b)))
    if cfg.side is Branch.Plus:
        return _integrate(g, 0.0, 0.5 * cfg.alpha, hint_lo=hint0)
    return _integrate(g, 0.0, math.inf, hint_lo=hint0, decay=decay)


def profile_side(
    f0: Profile1D,
    pair: WeightPair,
    cfg: GeomConfig,
    *,
    decay: float = math.inf,
) -> float:
    """``int f v`` over the profile domain, written radially or by height."""
    n, k = cfg.n, cfg.k
    s = cfg.setting
    v = pair.v
    h0 = f0.exponents[0] + v.exponents[0]
    h1 = f0.exponents[1] + v.exponents[1]
    if s is Setting.BallInterior:
        g = lambda r: f0(r) * v(r) * r ** (n - 1)  # noqa: E731
        return sphere_area(n) * _integrate(g, 0.0, 1.0, hint_lo=h0 + n - 1, hint_hi=h1)
    if s is Setting.BallExterior:
        g = lambda r: f0(r) * v(r) * r ** (n - 1)  # noqa: E731
        return sphere_area(n) * _integrate(g, 1.0, f0.hi, hint_lo=h0, hint_hi=h1, decay=decay)
    if s is Setting.SphereCap:
        g = lambda t: f0(t) * v(t) * (1.0 - t * t) ** (0.5 * (n - 3))  # noqa: E731
        return sphere_area(n - 1) * _integrate(g, 0.0, 1.0, hint_lo=h0, hint_hi=h1)
    g = lambda t: f0(t) * v(t)  # noqa: E731
    return _integrate(g, v.lo, min(v.hi, f0.hi), hint_lo=h0, hint_hi=h1, decay=decay)


def verify_identity(
    f0: Profile1D,
    u0: Profile1D,
    cfg: GeomConfig,
    *,
    branch: str = "B",
    decay: float = math.inf,
    inner_decay: float = math.inf,
) -> IdentityCheck:
    """Both sides of the weighted equality for ``(f0, u0)`` and their relative gap.

    ``decay`` describes the outer integrands on unbounded ranges and
    ``inner_decay`` the integrand of the weight transfer (see
    :func:`weight_transfer`).
    """
    pair = weight_transfer(u0, cfg, decay=inner_decay)
    lhs = transform_side(f0, u0, cfg, branch=branch, decay=decay)
    rhs = profile_side(f0, pair, cfg, decay=decay)
    return _check(lhs, rhs)


# }}}


# {{{ closed forms


def conn_constant(n: int, k: int, alpha: float) -> float:
    return (
        gamma(0.5 * k) * gamma(0.5 * (alpha + 1)) * sphere_area(k)
        / (2.0 ** (alpha + k - 2) * math.sqrt(math.pi) * gamma(0.5 * (k + alpha)) * sphere_area(n))
    )


def conn_identity(f0: Profile1D, cfg: GeomConfig, alpha: float) -> IdentityCheck:
    """Interior tangency with weight ``||x| - 1/2|^alpha (1 - |x|)^(k-2) / |x|``.

    The left side is integrated over the tangent k-ball in ``|x|`` directly,
    split at the singular radius 1/2.
    """
    if cfg.setting is not Setting.BallInterior:
        raise ConfigError("this identity is for the ball interior")
    if not alpha > -1:
        raise DivergenceError(f"alpha = {alpha} must exceed -1")
    n, k = cfg.n, cfg.k
    phi = _phi(f0, cfg)

    def weight(r: Array) -> Array:
        # |x|^(k-1) from the measure times (1 - r)^(k-2) / r
        return np.array([phi(abs(2.0 * x - 1.0)) for x in r]) * r ** (k - 2) * (1.0 - r) ** (k - 2)

    lhs = sphere_area(k) * (
        power_weighted(weight, 0.0, 0.5, p_hi=alpha) + power_weighted(weight, 0.5, 1.0, p_lo=alpha)
    )
    rhs = conn_constant(n, k, alpha) * sphere_area(n) * power_weighted(
        lambda r: f0(r) * r ** (alpha + k - 1) * (1.0 + r) ** (0.5 * (k - 3)),
        0.0,
        1.0,
        p_hi=0.5 * (k - 3),
        hint_lo=f0.exponents[0] + alpha + k - 1,
        hint_hi=f0.exponents[1],
    )
    return _check(lhs, rhs)


def consd_power_constant(n: int, k: int, mu: float) -> float:
    return (
        2.0 ** (k - 3 - 2 * mu) * gamma(0.5 * k) * gamma(0.5 * (k - 3) - mu) * sphere_area(k)
        / (math.sqrt(math.pi) * gamma(k - 2 - mu) * sphere_area(n))
    )


def consd_power_identity(
    f0: Profile1D, cfg: GeomConfig, mu: float, *, decay: float = math.inf
) -> IdentityCheck:
    """Exterior tangency with weight ``(|x| - 1)^mu (2|x| - 1) / |x|^(k-1-mu)``, ``mu < (k-3)/2``.

    ``decay`` is the power-law decay rate of ``f0(r) r^(1+mu)`` (``inf`` for
    exponential decay).
    """
    if cfg.setting is not Setting.BallExterior:
        raise ConfigError("this identity is for the ball exterior")
    n, k = cfg.n, cfg.k
    if not -1 < mu < 0.5 * (k - 3):
        raise DivergenceError(f"mu = {mu} must lie in (-1, {(k - 3) / 2})")
    phi = _phi(f0, cfg)
    g = _pointwise(lambda r: phi(2.0 * r - 1.0) * (2.0 * r - 1.0) * r**mu)
    lhs = sphere_area(k) * power_weighted_tail(g, 1.0, decay=k - 2 - 2 * mu, p_lo=mu)
    rhs = consd_power_constant(n, k, mu) * sphere_area(n) * _integrate(
        lambda r: f0(r) * (r + 1.0) ** mu * r,
        1.0,
        f0.hi,
        p_lo=mu,
        hint_lo=f0.exponents[0],
        decay=decay,
    )
    return _check(lhs, rhs)


def consd_inverse_constant(n: int, k: int, alpha: float) -> float:
    return (
        gamma(0.5 * k) * gamma(1.0 + 0.5 * (alpha - k)) * sphere_area(k)
        / (2.0 ** (k - alpha - 1) * math.sqrt(math.pi) * gamma(0.5 * (1 + alpha)) * sphere_area(n))
    )


def consd_inverse_identity(
    f0: Profile1D, cfg: GeomConfig, alpha: float, *, decay: float = math.inf
) -> IdentityCheck:
    """Exterior tangency with weight ``(|x| - 1)^(k-2) / (|x| (|x| - 1/2)^alpha)``, ``alpha > k - 2``.

    ``decay`` is the power-law decay rate of the profile-side integrand.
    """
    if cfg.setting is not Setting.BallExterior:
        raise ConfigError("this identity is for the ball exterior")
    n, k = cfg.n, cfg.k
    if not alpha > k - 2:
        raise DivergenceError(f"alpha = {alpha} must exceed {k - 2}")
    phi = _phi(f0, cfg)
    g = _pointwise(lambda r: phi(2.0 * r - 1.0) * r ** (k - 2) * (r - 0.5) ** (-alpha))
    lhs = sphere_area(k) * power_weighted_tail(g, 1.0, decay=alpha - k + 3, p_lo=k - 2)
    rhs = consd_inverse_constant(n, k, alpha) * sphere_area(n) * _integrate(
        lambda r: f0(r) * (r + 1.0) ** (0.5 * (k - 3)) * r ** (k - 1 - alpha),
        1.0,
        f0.hi,
        p_lo=0.5 * (k - 3),
        hint_lo=f0.exponents[0],
        decay=decay,
    )
    return _check(lhs, rhs)


def circle_identity(f0: Profile1D, *, branch: str = "B") -> IdentityCheck:
    """Equatorial tangent circles on the 2-sphere.

    ``int R(theta) (1 - theta_3^2)^(-1/2) (1 - 2 theta_3^2) dtheta`` over one
    branch of the upper hemisphere equals
    ``(1/pi) int f(eta) eta_3^(-1/2) (1 - eta_3)^(1/2) d eta``.
    """
    cfg = GeomConfig(3, 2, Setting.SphereCap, alpha=0.5 * math.pi)

    def g(t: float) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            r = equatorial_forward(f0, cfg, _inside(t, 0.0, 1.0))
        return r * (1.0 - 2.0 * t * t) / math.sqrt(1.0 - t * t)

    root = 1.0 / math.sqrt(2.0)
    if branch == "B":
        lhs = power_weighted(_pointwise(g), 0.0, root, hint_hi=1.0)
    else:
        lhs = -power_weighted(_pointwise(g), root, 1.0, hint_lo=1.0, hint_hi=-0.5)
    lhs *= sphere_area(2)
    rhs = sphere_area(2) / math.pi * power_weighted(
        lambda s: f0(s), 0.0, 1.0, p_lo=-0.5, p_hi=0.5, hint_lo=f0.exponents[0]
    )
    return _check(lhs, rhs)


def halfspace_power_constant(k: int, alpha: float) -> float:
    """``v = c s^alpha`` for ``u = x^alpha``; requires ``alpha < k/2 - 1``."""
    return (
        2.0 ** (k - 2 - alpha) * gamma(0.5 * (k + 1)) * gamma(0.5 * k - alpha - 1)
        / (math.sqrt(math.pi) * gamma(k - alpha - 1))
    )


def halfspace_power_identity(
    f0: Profile1D, cfg: GeomConfig, alpha: float, *, decay: float = math.inf
) -> IdentityCheck:
    """``int Phi(x) x^alpha dx = c int f0(s) s^alpha ds`` on the half space.

    ``decay`` is the power-law decay rate of ``f0(s) s^alpha``.
    """
    if cfg.setting is not Setting.HalfSpace:
        raise ConfigError("this identity is for the half space")
    k = cfg.k
    if not -1 < alpha < 0.5 * k - 1:
        raise DivergenceError(f"alpha = {alpha} must lie in (-1, {k / 2 - 1})")
    phi = _phi(f0, cfg)
    g = _pointwise(lambda x: phi(x) * x**alpha)
    lhs = power_weighted_tail(g, 0.0, decay=0.5 * k - alpha, hint_lo=alpha)
    rhs = halfspace_power_constant(k, alpha) * _integrate(
        lambda s: f0(s), 0.0, f0.hi, p_lo=alpha, hint_lo=f0.exponents[0], decay=decay
    )
    return _check(lhs, rhs)


# }}}
