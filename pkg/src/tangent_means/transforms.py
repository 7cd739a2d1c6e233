r"""Forward tangent-sphere transforms of radial and zonal profiles.

Each setting reduces the mean over a tangent sphere (or the integral over a
tangent chord) to a one-sided Riemann-Liouville type integral of the profile
``f0``; this module evaluates those integrals with the singular-endpoint
quadrature of :mod:`tangent_means.quadrature`.

Natural parameters:

=================  ===========  =============================================
setting            parameter    meaning
=================  ===========  =============================================
ball-interior      ``t``        ``|2|x| - 1|`` for a center ``x`` in the ball
ball-exterior      ``t``        ``2|x| - 1`` for a center outside the ball
half-ball-chord    ``theta_n``  last coordinate of the chord's boundary center
sphere-cap         ``beta``     geodesic radius of the tangent slice
hyperbolic         ``beta``     geodesic radius of the tangent slice
half-space         ``x_n``      height of the center (= sphere radius)
=================  ===========  =============================================
"""

from __future__ import annotations

import enum
import math
import warnings
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .fracops import Grid1D, IntegrabilityError, Profile1D
from .quadrature import power_weighted
from .specfun import gamma

DEFAULT_GUARD = 1e-6


class Setting(enum.Enum):
    BallInterior = "ball-interior"
    BallExterior = "ball-exterior"
    HalfBallChord = "half-ball-chord"
    SphereCap = "sphere-cap"
    Hyperbolic = "hyperbolic"
    HalfSpace = "half-space"


class Branch(enum.Enum):
    """Which side of the reference latitude (or cross-section) the centers lie on."""

    Plus = "+"
    Minus = "-"


class ConfigError(ValueError):
    """Raised for a geometric configuration outside the admissible ranges."""


class SingularLocusWarning(UserWarning):
    """The requested parameter lies inside a guard band around a singular locus."""


class BlindZoneWarning(UserWarning):
    """A half-ball chord with ``theta_n < 1/sqrt(2)`` was requested."""


PARAMETER_NAMES = {
    Setting.BallInterior: "t",
    Setting.BallExterior: "t",
    Setting.HalfBallChord: "theta_n",
    Setting.SphereCap: "beta",
    Setting.Hyperbolic: "beta",
    Setting.HalfSpace: "x_n",
}

_RANGES = {
    Setting.BallInterior: "2 <= k <= n; t in (0, 1)",
    Setting.BallExterior: "2 <= k <= n; t > 1",
    Setting.HalfBallChord: "1 <= k <= n-1; theta_n in (1/sqrt2, 1) (A-chords), (0, 1/sqrt2) warns",
    Setting.SphereCap: "2 <= k <= n-1; alpha in (0, pi); beta in (0, alpha) for +, (0, pi-alpha) for -",
    Setting.Hyperbolic: "2 <= k <= n; alpha >= 0; beta in (0, alpha) for +, beta > 0 for -",
    Setting.HalfSpace: "1 <= k <= n-1; x_n > 0",
}


def admissible_ranges(setting: Setting | None = None) -> str:
    """Human-readable admissible ranges, for usage errors."""
    if setting is not None:
        return f"{setting.value}: {_RANGES[setting]}"
    return "\n".join(f"{s.value}: {r}" for s, r in _RANGES.items())


@dataclass(frozen=True)
class GeomConfig:
    n: int
    k: int
    setting: Setting
    alpha: float | None = None
    side: Branch = Branch.Plus
    guard_eps: float = DEFAULT_GUARD

    def __post_init__(self) -> None:
        n, k, s = self.n, self.k, self.setting
        if n < 2:
            raise ConfigError(f"n must be at least 2, got {n}\n{admissible_ranges(s)}")
        if s in (Setting.BallInterior, Setting.BallExterior, Setting.Hyperbolic):
            ok = 2 <= k <= n
        elif s is Setting.SphereCap:
            ok = 2 <= k <= n - 1
        else:
            ok = 1 <= k <= n - 1
        if not ok:
            raise ConfigError(f"k = {k} not admissible for n = {n}\n{admissible_ranges(s)}")
        if s is Setting.SphereCap:
            if self.alpha is None or not 0 < self.alpha < math.pi:
                raise ConfigError(f"alpha = {self.alpha} not admissible\n{admissible_ranges(s)}")
        elif s is Setting.Hyperbolic:
            if self.alpha is None or not self.alpha >= 0:
                raise ConfigError(f"alpha = {self.alpha} not admissible\n{admissible_ranges(s)}")
            if self.alpha == 0 and self.side is Branch.Plus:
                raise ConfigError("slices through the origin (alpha = 0) only have the - side")
        if not self.guard_eps > 0:
            raise ConfigError(f"guard_eps must be positive: {self.guard_eps}")

    @property
    def parameter(self) -> str:
        return PARAMETER_NAMES[self.setting]


@dataclass(frozen=True)
class TransformProfile:
    parameter: str
    grid: Grid1D
    singular_loci: tuple[float, ...] = field(default=())


# {{{ parameter domains


def parameter_domain(cfg: GeomConfig) -> tuple[float, float]:
    """Open interval of admissible parameter values (``inf`` for unbounded)."""
    s = cfg.setting
    if s is Setting.BallInterior:
        return 0.0, 1.0
    if s is Setting.BallExterior:
        return 1.0, math.inf
    if s is Setting.HalfBallChord:
        return 0.0, 1.0
    if s is Setting.SphereCap:
        return (0.0, cfg.alpha) if cfg.side is Branch.Plus else (0.0, math.pi - cfg.alpha)
    if s is Setting.Hyperbolic:
        return (0.0, cfg.alpha) if cfg.side is Branch.Plus else (0.0, math.inf)
    return 0.0, math.inf


def singular_loci(cfg: GeomConfig) -> tuple[float, ...]:
    """Parameter values where transforms of singular profiles may blow up."""
    s = cfg.setting
    if s is Setting.BallInterior:
        return (0.0, 1.0)
    if s is Setting.BallExterior:
        return (1.0,)
    if s is Setting.HalfBallChord:
        return (1.0 / math.sqrt(2.0), 1.0)
    if s is Setting.SphereCap:
        if cfg.side is Branch.Plus:
            return (0.0, 0.5 * cfg.alpha, cfg.alpha)
        return (0.0, 0.5 * (math.pi - cfg.alpha), math.pi - cfg.alpha)
    if s is Setting.Hyperbolic:
        if cfg.side is Branch.Plus:
            return (0.0, 0.5 * cfg.alpha, cfg.alpha)
        return (0.0,)
    return (0.0,)


def guarded_parameters(cfg: GeomConfig, count: int, hi: float | None = None) -> np.ndarray:
    """``count`` parameter values spread over the domain, clear of every guard band.

    Unbounded domains are cut at ``hi`` (default: lower end + 2).
    """
    lo, top = parameter_domain(cfg)
    if cfg.setting is Setting.HalfBallChord:
        lo = 1.0 / math.sqrt(2.0)
    if math.isinf(top):
        top = lo + 2.0 if hi is None else hi
    elif hi is not None:
        top = min(top, hi)
    eps = 10.0 * cfg.guard_eps
    values = np.linspace(lo + eps, top - eps, count)
    loci = singular_loci(cfg)
    for i, v in enumerate(values):
        for loc in loci:
            if abs(v - loc) <= eps:
                values[i] = loc + (eps if v >= loc else -eps) * 2.0
    return values


def _check_parameter(cfg: GeomConfig, value: float) -> None:
    lo, hi = parameter_domain(cfg)
    if not lo < value < hi:
        raise ValueError(
            f"{cfg.parameter} = {value} outside ({lo}, {hi})\n{admissible_ranges(cfg.setting)}"
        )
    for loc in singular_loci(cfg):
        if abs(value - loc) < cfg.guard_eps:
            warnings.warn(
                f"{cfg.parameter} = {value} is within {cfg.guard_eps} of the singular locus {loc}",
                SingularLocusWarning,
                stacklevel=3,
            )
    if cfg.setting is Setting.HalfBallChord and value < 1.0 / math.sqrt(2.0):
        warnings.warn(
            f"theta_n = {value} selects a B-chord; these miss the blind zone near the axis",
            BlindZoneWarning,
            stacklevel=3,
        )


def interior_parameter(radius: float) -> float:
    """``t = |2|x| - 1|`` for a tangent sphere inside the unit ball."""
    return abs(2.0 * radius - 1.0)


def exterior_parameter(radius: float) -> float:
    """``t = 2|x| - 1`` for a tangent sphere outside the unit ball."""
    return 2.0 * radius - 1.0


def chord_half_height(theta_n: float) -> float:
    """``b = theta_n sqrt(1 - theta_n^2)``; the chord spans heights ``(0, 2b)``."""
    return theta_n * math.sqrt(1.0 - theta_n * theta_n)


# }}}


# {{{ shared quadrature


# ranges longer than this get geometric panel breaks
WIDE_RANGE = 64.0


def _kernel_integral(
    f0: Profile1D,
    lo: float,
    hi: float,
    p_lo: float,
    p_hi: float,
    smooth=None,
    width: float | None = None,
) -> float:
    """``int_lo^hi (s - lo)^p_lo (hi - s)^p_hi f0(s) smooth(s) ds``.

    ``width`` overrides ``hi - lo`` when the caller knows it more accurately
    than the difference of the rounded endpoints (short slices near a locus).
    """
    tol = 1e-12 * max(1.0, abs(lo), abs(hi))
    if f0.lo > lo + tol or f0.hi < hi - tol:
        raise ValueError(
            f"profile on ({f0.lo}, {f0.hi}) does not cover the integration range ({lo}, {hi})"
        )
    hint_lo = f0.exponents[0] if abs(lo - f0.lo) <= tol else 0.0
    hint_hi = f0.exponents[1] if abs(hi - f0.hi) <= tol else 0.0
    if p_lo + hint_lo <= -1 or p_hi + hint_hi <= -1:
        raise IntegrabilityError(
            f"profile exponents {f0.exponents} are not integrable against the weight"
        )
    if width is None:
        width = hi - lo
    elif abs(hi - f0.hi) <= tol and abs(lo - f0.lo) > tol:
        # anchored at the upper end: keep that end exact
        lo = hi - width

    def func(sigma: np.ndarray) -> np.ndarray:
        s = lo + sigma
        return f0(s) if smooth is None else f0(s) * smooth(s)

    breaks = [b - lo for b in f0.breaks if lo < b < lo + width]
    if width > WIDE_RANGE:
        # profiles have features on the unit scale; on very long ranges the
        # adaptive panels would otherwise step right over them
        ladder = 4.0 ** np.arange(0, math.ceil(math.log(width, 4.0)))
        breaks += [float(x) for x in ladder if x < 0.5 * width]
        breaks += [float(width - x) for x in ladder if x < 0.5 * width]
        breaks.sort()
    return power_weighted(
        func, 0.0, width, p_lo=p_lo, p_hi=p_hi, hint_lo=hint_lo, hint_hi=hint_hi, breaks=breaks
    )


def _slice_constant(k: int) -> float:
    # sigma_{k-2} / sigma_{k-1} = Gamma(k/2) / (sqrt(pi) Gamma((k-1)/2))
    return gamma(0.5 * k) / (math.sqrt(math.pi) * gamma(0.5 * (k - 1)))


# }}}


# {{{ ball


def ball_interior_forward(f0: Profile1D, cfg: GeomConfig, t: float) -> float:
    """Mean over the interior tangent sphere with parameter ``t``."""
    _check_parameter(cfg, t)
    k = cfg.k
    p = 0.5 * (k - 3)
    integral = _kernel_integral(
        f0, t, 1.0, p, p, lambda s: (s + t) ** p * (1.0 + s) ** p * s
    )
    big_f = 2.0 / gamma(0.5 * (k - 1)) * integral
    return gamma(0.5 * k) / math.sqrt(math.pi) * (0.5 * (1.0 - t * t)) ** (2 - k) * big_f


def ball_exterior_forward(f0: Profile1D, cfg: GeomConfig, t: float) -> float:
    """Mean over the exterior tangent sphere with parameter ``t``."""
    _check_parameter(cfg, t)
    k = cfg.k
    p = 0.5 * (k - 3)
    integral = _kernel_integral(
        f0, 1.0, t, p, p, lambda s: (s + 1.0) ** p * (t + s) ** p * s
    )
    big_f = 2.0 / gamma(0.5 * (k - 1)) * integral
    return gamma(0.5 * k) / math.sqrt(math.pi) * (0.5 * (t * t - 1.0)) ** (2 - k) * big_f


# }}}


# {{{ half-ball chords


def chord_volume(k: int, theta_n: float) -> float:
    """k-volume of the tangent chord: a k-disk of radius ``theta_n``."""
    return math.pi ** (0.5 * k) * theta_n**k / gamma(0.5 * k + 1.0)


def halfball_chord_forward(
    f0: Profile1D, cfg: GeomConfig, theta_n: float, *, normalized: bool = False
) -> float:
    """Integral of ``f0(x_n)`` over the tangent k-chord with apex cosine ``theta_n``.

    The default is the plain Lebesgue integral over the chord; ``normalized``
    divides by the chord volume to give a mean.
    """
    _check_parameter(cfg, theta_n)
    k = cfg.k
    p = 0.5 * (k - 1)
    r = 2.0 * chord_half_height(theta_n)
    big_f = _kernel_integral(f0, 0.0, r, p, p) / gamma(0.5 * (k + 1))
    value = math.pi**p * (1.0 - theta_n * theta_n) ** (-0.5 * k) * big_f
    if normalized:
        value /= chord_volume(k, theta_n)
    return value


# }}}


# {{{ sphere


def cap_argument(cfg: GeomConfig, beta: float) -> tuple[float, float]:
    """``(u, v)``: prefactor and upper/lower integration limit for a sphere slice."""
    k, alpha = cfg.k, cfg.alpha
    sign = 1.0 if cfg.side is Branch.Plus else -1.0
    u = gamma(0.5 * k) / math.sqrt(math.pi) * (math.sin(beta) * math.sin(alpha - sign * beta)) ** (2 - k)
    v = math.cos(alpha - sign * 2.0 * beta)
    return u, v


def sphere_cap_forward(f0: Profile1D, cfg: GeomConfig, beta: float) -> float:
    """Normalized mean of ``f0(eta_n)`` over the slice of geodesic radius ``beta``
    tangent to the latitude ``eta_n = cos(alpha)``."""
    _check_parameter(cfg, beta)
    k = cfg.k
    p = 0.5 * (k - 3)
    a = math.cos(cfg.alpha)
    u, v = cap_argument(cfg, beta)
    if cfg.side is Branch.Plus:
        width = 2.0 * math.sin(beta) * math.sin(cfg.alpha - beta)
        integral = _kernel_integral(f0, a, v, p, p, width=width)
    else:
        width = 2.0 * math.sin(beta) * math.sin(cfg.alpha + beta)
        integral = _kernel_integral(f0, v, a, p, p, width=width)
    return u * integral / gamma(0.5 * (k - 1))


def equatorial_forward(f0: Profile1D, cfg: GeomConfig, theta_n: float) -> float:
    """Equatorial tangency parametrized by ``|theta_n|`` of the slice center.

    With ``b = theta_n sqrt(1 - theta_n^2)`` the + side is
    ``c b^(2-k) int_0^{2b} f0(s) s^p (2b - s)^p ds`` with ``p = (k-3)/2``;
    the - side integrates over ``(-2b, 0)``.
    """
    if cfg.setting is not Setting.SphereCap or not math.isclose(cfg.alpha, 0.5 * math.pi):
        raise ConfigError("equatorial parametrization needs sphere-cap with alpha = pi/2")
    if not 0.0 < theta_n < 1.0:
        raise ValueError(f"|theta_n| = {theta_n} outside (0, 1)")
    if abs(theta_n - 1.0 / math.sqrt(2.0)) < cfg.guard_eps:
        warnings.warn(
            f"theta_n = {theta_n} is within {cfg.guard_eps} of 1/sqrt(2)",
            SingularLocusWarning,
            stacklevel=2,
        )
    k = cfg.k
    p = 0.5 * (k - 3)
    b = chord_half_height(theta_n)
    if cfg.side is Branch.Plus:
        integral = _kernel_integral(f0, 0.0, 2.0 * b, p, p)
    else:
        integral = _kernel_integral(f0, -2.0 * b, 0.0, p, p)
    return _slice_constant(k) * b ** (2 - k) * integral


# }}}


# {{{ hyperbolic


def hyperbolic_argument(cfg: GeomConfig, beta: float) -> tuple[float, float]:
    k, alpha = cfg.k, cfg.alpha
    sign = 1.0 if cfg.side is Branch.Plus else -1.0
    u = gamma(0.5 * k) / math.sqrt(math.pi) * (math.sinh(beta) * math.sinh(alpha - sign * beta)) ** (2 - k)
    v = math.cosh(2.0 * beta - sign * alpha)
    return u, v


def hyperbolic_forward(f0: Profile1D, cfg: GeomConfig, beta: float) -> float:
    """Normalized mean of ``f0(y_{n+1})`` over the hyperbolic slice of radius ``beta``
    tangent to the cross-section at distance ``alpha`` from the origin."""
    if cfg.alpha == 0.0:
        return hyperbolic_origin_forward(f0, cfg, beta)
    _check_parameter(cfg, beta)
    k = cfg.k
    p = 0.5 * (k - 3)
    a = math.cosh(cfg.alpha)
    u, v = hyperbolic_argument(cfg, beta)
    if cfg.side is Branch.Plus:
        width = 2.0 * math.sinh(beta) * math.sinh(cfg.alpha - beta)
        integral = _kernel_integral(f0, v, a, p, p, width=width)
    else:
        width = 2.0 * math.sinh(beta) * math.sinh(cfg.alpha + beta)
        integral = _kernel_integral(f0, a, v, p, p, width=width)
    return u * integral / gamma(0.5 * (k - 1))


def hyperbolic_origin_forward(f0: Profile1D, cfg: GeomConfig, beta: float) -> float:
    """Slices through the origin: ``c sh(beta)^(4-2k) int_1^{ch 2beta} f0 (s-1)^p (ch 2beta - s)^p``."""
    if cfg.setting is not Setting.Hyperbolic or cfg.alpha != 0.0:
        raise ConfigError("origin slices need the hyperbolic setting with alpha = 0")
    _check_parameter(cfg, beta)
    k = cfg.k
    p = 0.5 * (k - 3)
    top = math.cosh(2.0 * beta)
    integral = _kernel_integral(f0, 1.0, top, p, p, width=2.0 * math.sinh(beta) ** 2)
    return _slice_constant(k) * math.sinh(beta) ** (4 - 2 * k) * integral


# }}}


# {{{ half-space


def halfspace_forward(f0: Profile1D, cfg: GeomConfig, x_n: float) -> float:
    """Normalized mean of ``f0(y_n)`` over the tangent k-sphere of radius ``x_n``."""
    _check_parameter(cfg, x_n)
    k = cfg.k
    p = 0.5 * (k - 2)
    big_f = _kernel_integral(f0, 0.0, 2.0 * x_n, p, p) / gamma(0.5 * k)
    return gamma(0.5 * (k + 1)) / math.sqrt(math.pi) * x_n ** (1 - k) * big_f


# }}}


_FORWARD = {
    Setting.BallInterior: ball_interior_forward,
    Setting.BallExterior: ball_exterior_forward,
    Setting.HalfBallChord: halfball_chord_forward,
    Setting.SphereCap: sphere_cap_forward,
    Setting.Hyperbolic: hyperbolic_forward,
    Setting.HalfSpace: halfspace_forward,
}


def forward_value(f0: Profile1D, cfg: GeomConfig, param: float) -> float:
    """Transform value at one parameter, dispatched on the setting."""
    return _FORWARD[cfg.setting](f0, cfg, float(param))


def forward(f0: Profile1D, cfg: GeomConfig, params: Sequence[float] | np.ndarray) -> TransformProfile:
    """Transform values on a parameter grid."""
    params = np.asarray(params, dtype=float)
    values = np.array([forward_value(f0, cfg, p) for p in params])
    return TransformProfile(cfg.parameter, Grid1D(params, values), singular_loci(cfg))
