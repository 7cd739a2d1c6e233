r"""Fractional integrals with Bessel-Clifford kernels.

.. math::

    (J_{\alpha,\lambda}\varphi)(t) = \int_0^t \frac{(t-s)^{\alpha-1}}{\Gamma(\alpha)}
        j_{\alpha-1}\big(\lambda\sqrt{s(t-s)}\big)\varphi(s)\,ds,
    \qquad
    (I_{\alpha,\lambda}\varphi)(t) = \int_0^t \frac{(t-s)^{\alpha-1}}{\Gamma(\alpha)}
        i_{\alpha-1}\big(\lambda\sqrt{t(t-s)}\big)\varphi(s)\,ds.

Both reduce to the Riemann-Liouville integral at :math:`\lambda = 0`. The
half-space transform at a fixed frequency :math:`|\eta| = \lambda` of the
horizontal Fourier transform is :math:`J_{(n-1)/2,\lambda}`, and the equation
:math:`(d/dt) J_{1,\lambda}\varphi = \psi` has the explicit solution
:math:`\varphi = t^{-1} I_{1,\lambda}[(t\psi)']`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fracops import (
    FracSpec,
    Grid1D,
    Profile1D,
    Side,
    chebyshev_nodes,
    rl_derivative,
)
from .quadrature import power_weighted
from .specfun import SERIES_ARG_CAP, clifford_from_square, gamma

# lambda * b for the frequency pipeline; keeps every kernel argument well
# inside the series domain
FREQ_CAP = 50.0
DEFAULT_NODES = 161


@dataclass(frozen=True)
class FreqProfile:
    """A profile on ``(0, b)`` attached to the frequency magnitude ``lam``."""

    lam: float
    profile: Profile1D

    def __post_init__(self) -> None:
        if self.lam < 0:
            raise ValueError(f"frequency must be nonnegative: {self.lam}")
        if self.profile.lo != 0.0:
            raise ValueError("frequency profiles live on (0, b)")
        if self.lam * self.profile.hi > FREQ_CAP:
            raise ValueError(
                f"lambda * b = {self.lam * self.profile.hi:.6g} exceeds the cap {FREQ_CAP}"
            )


@dataclass(frozen=True)
class J1Solution:
    solution: Grid1D
    residual: float


@dataclass(frozen=True)
class FreqInversion:
    recovered: Grid1D
    forward_residual: float
    in_range: bool


def _check_t(phi: Profile1D, t: float) -> None:
    if not 0.0 <= t <= phi.hi:
        raise ValueError(f"t = {t} outside (0, {phi.hi})")


def _hint(phi: Profile1D) -> float:
    return phi.exponents[0] if phi.lo == 0.0 else 0.0


def gen_J(phi: Profile1D, alpha: float, lam: float, t: float) -> float:
    """Bessel-kernel integral with ``j_{alpha-1}(lam sqrt(s (t - s)))``."""
    _check_t(phi, t)
    if t == 0.0:
        return 0.0
    if lam * t / 2.0 > SERIES_ARG_CAP:
        raise ValueError(f"kernel argument {lam * t / 2:.6g} exceeds the series cap")

    def integrand(s: np.ndarray) -> np.ndarray:
        kernel = clifford_from_square("j", alpha - 1.0, lam * lam * s * (t - s)) if lam else 1.0
        return kernel * phi(s)

    value = power_weighted(integrand, 0.0, t, p_hi=alpha - 1.0, hint_lo=_hint(phi), breaks=phi.breaks)
    return value / gamma(alpha)


def gen_I(phi: Profile1D, alpha: float, lam: float, t: float) -> float:
    """Bessel-kernel integral with ``i_{alpha-1}(lam sqrt(t (t - s)))``."""
    _check_t(phi, t)
    if t == 0.0:
        return 0.0
    if lam * t > SERIES_ARG_CAP:
        raise ValueError(f"kernel argument {lam * t:.6g} exceeds the series cap")

    def integrand(s: np.ndarray) -> np.ndarray:
        kernel = clifford_from_square("i", alpha - 1.0, lam * lam * t * (t - s)) if lam else 1.0
        return kernel * phi(s)

    value = power_weighted(integrand, 0.0, t, p_hi=alpha - 1.0, hint_lo=_hint(phi), breaks=phi.breaks)
    return value / gamma(alpha)


def _derivative_of_J1(phi: Profile1D, lam: float, t: float) -> float:
    # d/dt J_{1,lam} phi = phi(t) - lam^2/4 int_0^t s j_1(lam sqrt(s(t-s))) phi(s) ds,
    # using d j_0 / d(z^2) = -j_1 / 4
    if lam == 0.0:
        return float(phi(t))

    def integrand(s: np.ndarray) -> np.ndarray:
        return s * clifford_from_square("j", 1.0, lam * lam * s * (t - s)) * phi(s)

    tail = power_weighted(integrand, 0.0, t, hint_lo=_hint(phi), breaks=phi.breaks)
    return float(phi(t)) - 0.25 * lam * lam * tail


def solve_J1(
    psi: Profile1D | Grid1D,
    lam: float,
    nodes: np.ndarray | None = None,
) -> J1Solution:
    """Solve ``d/dt (J_{1,lam} phi) = psi`` on ``nodes``.

    The explicit solution ``t^-1 I_{1,lam}[(t psi)']`` is integrated by parts
    (``i_0`` equals 1 on the diagonal and ``d i_0 / d(z^2) = i_1 / 4``), giving

        phi(t) = psi(t) + lam^2/4 int_0^t s psi(s) i_1(lam sqrt(t(t-s))) ds,

    so no numerical derivative of ``psi`` is needed. The residual is the
    sup-norm of ``d/dt J_{1,lam} phi - psi`` over the nodes.
    """
    if isinstance(psi, Grid1D):
        if nodes is None:
            nodes = psi.nodes
        psi = Profile1D.from_samples(psi.nodes, psi.values, lo=0.0, hi=float(psi.nodes[-1]))
    elif nodes is None:
        nodes = chebyshev_nodes(psi.lo, psi.hi, DEFAULT_NODES)
    nodes = np.asarray(nodes, dtype=float)

    if lam == 0.0:
        return J1Solution(Grid1D(nodes, psi(nodes).copy()), 0.0)
    if lam * nodes[-1] > SERIES_ARG_CAP:
        raise ValueError(f"lambda * t = {lam * nodes[-1]:.6g} exceeds the series cap")

    def correction(t: float) -> float:
        def integrand(s: np.ndarray) -> np.ndarray:
            return s * clifford_from_square("i", 1.0, lam * lam * t * (t - s)) * psi(s)

        return power_weighted(integrand, 0.0, t, hint_lo=_hint(psi), breaks=psi.breaks)

    values = psi(nodes) + 0.25 * lam * lam * np.array([correction(float(t)) for t in nodes])
    grid = Grid1D(nodes, values)

    phi = Profile1D.from_samples(nodes, values, lo=0.0, hi=psi.hi)
    check = np.array([_derivative_of_J1(phi, lam, float(t)) for t in nodes])
    residual = float(np.max(np.abs(check - psi(nodes))))
    return J1Solution(grid, residual)


def halfspace_freq_forward(f_eta: FreqProfile, n: int, t: float) -> float:
    """Frequency-slice transform ``F_eta(t) = J_{(n-1)/2, |eta|} f_eta (t)``."""
    if n < 2:
        raise ValueError(f"dimension must be at least 2: {n}")
    return gen_J(f_eta.profile, 0.5 * (n - 1), f_eta.lam, t)


def halfspace_freq_invert(
    F_eta: FreqProfile,
    n: int,
    nodes: np.ndarray | None = None,
    *,
    tol: float = 1e-3,
) -> FreqInversion:
    """Recover ``f_eta`` from ``F_eta`` at a fixed frequency.

    ``psi = D^{(n-1)/2}_{0+} F_eta`` (for ``n = 2`` this is ``d/dt I^{1/2}``)
    and ``f_eta`` solves ``d/dt J_{1,lam} f_eta = psi``. Range membership is
    judged only by the forward residual against ``tol``.
    """
    if n < 2:
        raise ValueError(f"dimension must be at least 2: {n}")
    F = F_eta.profile
    if nodes is None:
        nodes = chebyshev_nodes(0.0, F.hi, DEFAULT_NODES, cluster="lo")
    nodes = np.asarray(nodes, dtype=float)

    psi = rl_derivative(F, FracSpec(0.5 * (n - 1), Side.Left, 0.0), nodes)
    solved = solve_J1(psi, F_eta.lam)
    recovered = solved.solution

    phi = Profile1D.from_samples(recovered.nodes, recovered.values, lo=0.0, hi=F.hi)
    again = FreqProfile(F_eta.lam, phi)
    forward = np.array([halfspace_freq_forward(again, n, float(t)) for t in recovered.nodes])
    residual = float(np.max(np.abs(forward - F(recovered.nodes))))
    return FreqInversion(recovered, residual, residual <= tol)
