r"""Riemann-Liouville fractional integrals and derivatives on finite intervals.

For :math:`\alpha > 0` the left- and right-sided integrals are

.. math::

    (I^\alpha_{a+} f)(x) = \frac{1}{\Gamma(\alpha)} \int_a^x \frac{f(y)}{(x - y)^{1 - \alpha}} dy,
    \qquad
    (I^\alpha_{b-} f)(x) = \frac{1}{\Gamma(\alpha)} \int_x^b \frac{f(y)}{(y - x)^{1 - \alpha}} dy,

and, writing :math:`\alpha = m + \alpha_0` with :math:`m = \lfloor \alpha \rfloor`,
the derivatives are :math:`D^\alpha_{a+} = (d/dx)^{m+1} I^{1-\alpha_0}_{a+}` and
:math:`D^\alpha_{b-} = (-d/dx)^{m+1} I^{1-\alpha_0}_{b-}`. Integer orders are
plain repeated derivatives.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .quadrature import power_weighted
from .specfun import gamma

DEFAULT_GRID_SIZE = 201
FIT_WINDOW = 7
FIT_DEGREE = 4


class IntegrabilityError(ValueError):
    """Raised when a profile's endpoint exponent makes an integral diverge."""


class GridTooCoarseError(ValueError):
    """Raised when a grid has too few nodes for the requested differentiation."""


class Side(enum.Enum):
    """Side of the fractional operator."""

    Left = enum.auto()
    """Integrates from the base point ``a`` up to ``x``."""
    Right = enum.auto()
    """Integrates from ``x`` up to the base point ``b``."""


@dataclass(frozen=True)
class Profile1D:
    """A scalar function of one variable on the open interval ``(lo, hi)``.

    ``exponents`` records the power-law behaviour ``(x - lo)^p_lo`` and
    ``(hi - x)^p_hi`` at the ends; quadrature uses it to pick substitutions.
    ``breaks`` lists interior points where the function is not smooth.
    """

    func: Callable[[np.ndarray], np.ndarray]
    lo: float
    hi: float
    exponents: tuple[float, float] = (0.0, 0.0)
    breaks: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"empty interval: ({self.lo}, {self.hi})")

    def __call__(self, x: np.ndarray | float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.func(x), dtype=float), x.shape)

    @classmethod
    def constant(cls, value: float, lo: float, hi: float) -> Profile1D:
        return cls(lambda x: np.full_like(x, value), lo, hi)

    @classmethod
    def from_samples(
        cls,
        nodes: Sequence[float] | np.ndarray,
        values: Sequence[float] | np.ndarray,
        *,
        lo: float | None = None,
        hi: float | None = None,
        exponents: tuple[float, float] = (0.0, 0.0),
    ) -> Profile1D:
        """Cubic-spline profile through samples.

        The known endpoint powers are divided out before fitting and restored
        on evaluation, so the spline only has to follow the smooth remainder.
        """
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        lo = float(nodes[0]) if lo is None else float(lo)
        hi = float(nodes[-1]) if hi is None else float(hi)
        p_lo, p_hi = exponents

        def envelope(x: np.ndarray) -> np.ndarray:
            out = np.ones_like(x)
            if p_lo:
                out = out * np.maximum(x - lo, 0.0) ** p_lo
            if p_hi:
                out = out * np.maximum(hi - x, 0.0) ** p_hi
            return out

        spline = CubicSpline(nodes, values / envelope(nodes))
        return cls(
            lambda x: spline(x) * envelope(x),
            lo,
            hi,
            exponents,
            breaks=tuple(float(x) for x in nodes if lo < x < hi),
        )


@dataclass(frozen=True)
class FracSpec:
    order: float
    side: Side = Side.Left
    base: float = 0.0
    lam: float = 0.0

    def __post_init__(self) -> None:
        if not self.order > 0:
            raise ValueError(f"order must be positive: {self.order}")
        if self.lam < 0:
            raise ValueError(f"lambda must be nonnegative: {self.lam}")


@dataclass(frozen=True)
class Grid1D:
    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        if nodes.shape != values.shape or nodes.ndim != 1:
            raise ValueError(f"shape mismatch: {nodes.shape} vs {values.shape}")
        if nodes.size > 1 and not np.all(np.diff(nodes) > 0):
            raise ValueError("nodes must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("grid values must be finite")

    def __len__(self) -> int:
        return self.nodes.size


# {{{ grids


def chebyshev_nodes(lo: float, hi: float, count: int, cluster: str = "both") -> np.ndarray:
    """Chebyshev-type nodes strictly inside ``(lo, hi)``.

    ``cluster`` selects where nodes bunch up: ``"both"`` ends, only ``"lo"``
    or only ``"hi"``.
    """
    theta = (np.arange(count) + 0.5) / count
    if cluster == "both":
        u = 0.5 * (1.0 - np.cos(np.pi * theta))
    elif cluster == "lo":
        u = 1.0 - np.cos(0.5 * np.pi * theta)
    elif cluster == "hi":
        u = np.sin(0.5 * np.pi * theta)
    else:
        raise ValueError(f"unknown clustering {cluster!r}")
    return lo + (hi - lo) * u


def uniform_nodes(lo: float, hi: float, count: int) -> np.ndarray:
    """Cell-centred uniform nodes strictly inside ``(lo, hi)``."""
    return lo + (hi - lo) * (np.arange(count) + 0.5) / count


# }}}


# {{{ integrals


def _check_exponent(f: Profile1D, at_lo: bool, extra: float = 0.0) -> float:
    p = f.exponents[0] if at_lo else f.exponents[1]
    if p + extra <= -1:
        where = "lower" if at_lo else "upper"
        raise IntegrabilityError(f"profile exponent {p} at the {where} end is not integrable")
    return p


def rl_integral(f: Profile1D, spec: FracSpec, x: float) -> float:
    """Riemann-Liouville integral of order ``spec.order`` evaluated at ``x``."""
    if spec.lam:
        raise ValueError("use besselfrac for a nonzero Bessel parameter")
    alpha = spec.order
    if spec.side is Side.Left:
        a = spec.base
        if not a < x:
            if x == a:
                return 0.0
            raise ValueError(f"x = {x} lies left of the base {a}")
        hint = _check_exponent(f, True) if a == f.lo else 0.0
        value = power_weighted(f, a, x, p_hi=alpha - 1.0, hint_lo=hint, breaks=f.breaks)
    else:
        b = spec.base
        if not x < b:
            if x == b:
                return 0.0
            raise ValueError(f"x = {x} lies right of the base {b}")
        hint = _check_exponent(f, False) if b == f.hi else 0.0
        value = power_weighted(f, x, b, p_lo=alpha - 1.0, hint_hi=hint, breaks=f.breaks)
    return value / gamma(alpha)


def rl_integral_many(f: Profile1D, spec: FracSpec, xs: Sequence[float] | np.ndarray) -> np.ndarray:
    return np.array([rl_integral(f, spec, float(x)) for x in xs])


# }}}


# {{{ derivatives


def lsq_derivative(
    nodes: np.ndarray,
    values: np.ndarray,
    order: int,
    *,
    window: int = FIT_WINDOW,
    degree: int = FIT_DEGREE,
) -> np.ndarray:
    """Derivative of ``order`` from sliding least-squares polynomial fits.

    Each node gets a degree-``degree`` fit over ``window`` neighbouring nodes
    (shifted inward at the ends), differentiated analytically at the node.
    """
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    n = nodes.size
    if order == 0:
        return values.copy()
    if order > degree:
        raise ValueError(f"derivative order {order} exceeds the fit degree {degree}")
    if n < window:
        raise GridTooCoarseError(f"need at least {window} nodes, got {n}")

    half = window // 2
    start = np.clip(np.arange(n) - half, 0, n - window)
    idx = start[:, None] + np.arange(window)[None, :]
    local = nodes[idx] - nodes[:, None]
    scale = np.max(np.abs(local), axis=1, keepdims=True)
    vander = (local / scale)[:, :, None] ** np.arange(degree + 1)[None, None, :]
    coeffs = np.einsum("nij,nj->ni", np.linalg.pinv(vander), values[idx])
    return math.factorial(order) * coeffs[:, order] / scale[:, 0] ** order


def split_order(alpha: float) -> tuple[int, float]:
    """Split ``alpha = m + alpha0`` with an integer ``m`` and ``0 <= alpha0 < 1``."""
    m = math.floor(alpha + 1e-12)
    frac = alpha - m
    if abs(frac) < 1e-12:
        frac = 0.0
    return m, frac


def _enveloped_derivative(
    dist: np.ndarray,
    values: np.ndarray,
    steps: int,
    power: float,
    *,
    window: int,
    degree: int,
) -> np.ndarray:
    """``steps``-th derivative of ``dist^power w`` given samples, by Leibniz's rule.

    Only the remainder ``w`` is fitted, so a known non-smooth leading power at
    ``dist = 0`` does not spoil the polynomial fits.
    """
    w = values / dist**power
    out = np.zeros_like(values)
    falling = 1.0
    for j in range(steps + 1):
        w_der = lsq_derivative(dist, w, steps - j, window=window, degree=degree)
        out += math.comb(steps, j) * falling * dist ** (power - j) * w_der
        falling *= power - j
    return out


def rl_derivative(
    F: Profile1D | Grid1D,
    spec: FracSpec,
    nodes: np.ndarray | None = None,
    *,
    window: int = FIT_WINDOW,
    degree: int = FIT_DEGREE,
    trim: int | None = None,
    edge_exponent: float | None = None,
) -> Grid1D:
    """Riemann-Liouville derivative of order ``spec.order`` on interior nodes.

    Grid input is interpolated by a cubic spline before the fractional
    integration. The first and last ``trim`` nodes (default: half the fit
    window) are dropped from the result.

    ``edge_exponent`` declares ``F ~ |x - base|^edge_exponent * smooth`` near
    the base point. The power is then divided out of both the spline and the
    fitted remainder, which keeps the result accurate next to the base.
    """
    if spec.lam:
        raise ValueError("use besselfrac for a nonzero Bessel parameter")
    m, frac = split_order(spec.order)
    edge = 0.0 if edge_exponent is None else edge_exponent

    if isinstance(F, Grid1D):
        grid_values = F.values
        if nodes is None:
            nodes = F.nodes
        if spec.side is Side.Left:
            lo, hi = min(spec.base, float(F.nodes[0])), float(F.nodes[-1])
            exponents = (edge, 0.0)
        else:
            lo, hi = float(F.nodes[0]), max(spec.base, float(F.nodes[-1]))
            exponents = (0.0, edge)
        profile = Profile1D.from_samples(F.nodes, F.values, lo=lo, hi=hi, exponents=exponents)
        same_nodes = np.array_equal(nodes, F.nodes)
    else:
        profile = F
        if nodes is None:
            nodes = chebyshev_nodes(F.lo, F.hi, DEFAULT_GRID_SIZE)
        grid_values = None
        same_nodes = False
    nodes = np.asarray(nodes, dtype=float)

    if nodes.size < 4 * (m + 2):
        raise GridTooCoarseError(
            f"order {spec.order} needs at least {4 * (m + 2)} nodes, got {nodes.size}"
        )

    if frac == 0.0:
        steps = m
        if same_nodes and grid_values is not None:
            work = np.asarray(grid_values, dtype=float)
        else:
            work = profile(nodes)
        power = edge
    else:
        steps = m + 1
        work = rl_integral_many(profile, FracSpec(1.0 - frac, spec.side, spec.base), nodes)
        power = edge + 1.0 - frac

    if edge_exponent is None:
        deriv = lsq_derivative(nodes, work, steps, window=window, degree=degree)
        if spec.side is Side.Right and steps % 2:
            deriv = -deriv
    else:
        # differentiate in the distance to the base: (-d/dx) on the right side
        # is d/d(dist), so no sign bookkeeping is needed
        if spec.side is Side.Left:
            deriv = _enveloped_derivative(
                nodes - spec.base, work, steps, power, window=window, degree=degree
            )
        else:
            deriv = _enveloped_derivative(
                (spec.base - nodes)[::-1], work[::-1], steps, power, window=window, degree=degree
            )[::-1]

    if trim is None:
        trim = window // 2
    keep = slice(trim, nodes.size - trim)
    return Grid1D(nodes[keep], deriv[keep])


# }}}
