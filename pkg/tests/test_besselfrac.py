from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate, special

from tangent_means.besselfrac import (
    FREQ_CAP,
    FreqProfile,
    gen_I,
    gen_J,
    halfspace_freq_forward,
    halfspace_freq_invert,
    solve_J1,
)
from tangent_means.fracops import FracSpec, Profile1D, chebyshev_nodes, rl_integral


def j_clifford(nu: float, z: float) -> float:
    if z == 0.0:
        return 1.0
    return special.gamma(nu + 1.0) * (2.0 / z) ** nu * special.jv(nu, z)


def i_clifford(nu: float, z: float) -> float:
    if z == 0.0:
        return 1.0
    return special.gamma(nu + 1.0) * (2.0 / z) ** nu * special.iv(nu, z)


def quad_J(phi, alpha: float, lam: float, t: float) -> float:
    f = lambda s: j_clifford(alpha - 1.0, lam * math.sqrt(s * (t - s))) * phi(s)  # noqa: E731
    value, _ = integrate.quad(f, 0.0, t, weight="alg", wvar=(0.0, alpha - 1.0), epsabs=0, epsrel=1e-13)
    return value / math.gamma(alpha)


SMOOTH = Profile1D(lambda s: np.cos(s) + s * s, 0.0, 1.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.5])
def test_zero_frequency_is_rl_integral(alpha):
    for t in (0.2, 0.7, 1.0):
        assert gen_J(SMOOTH, alpha, 0.0, t) == pytest.approx(rl_integral(SMOOTH, FracSpec(alpha), t), rel=1e-10)
        assert gen_I(SMOOTH, alpha, 0.0, t) == pytest.approx(rl_integral(SMOOTH, FracSpec(alpha), t), rel=1e-10)


def test_zero_profile():
    zero = Profile1D.constant(0.0, 0.0, 1.0)
    assert gen_J(zero, 1.5, 3.0, 0.8) == 0.0
    assert gen_I(zero, 1.5, 3.0, 0.8) == 0.0


def test_gen_J_against_quadrature():
    phi = Profile1D(lambda s: s, 0.0, 1.0, (1.0, 0.0))
    assert gen_J(phi, 1.0, 2.0, 1.0) == pytest.approx(quad_J(lambda s: s, 1.0, 2.0, 1.0), rel=1e-8)
    assert gen_J(SMOOTH, 0.7, 4.0, 0.9) == pytest.approx(
        quad_J(lambda s: math.cos(s) + s * s, 0.7, 4.0, 0.9), rel=1e-8
    )


def test_gen_I_against_quadrature():
    one = Profile1D.constant(1.0, 0.0, 1.0)
    ref, _ = integrate.quad(lambda s: i_clifford(0.0, math.sqrt(1.0 - s)), 0.0, 1.0, epsrel=1e-13)
    assert gen_I(one, 1.0, 1.0, 1.0) == pytest.approx(ref, rel=1e-8)


def test_semigroup_with_rl_integral():
    # I^0.5 J_{1,2} phi = J_{1.5,2} phi
    phi = Profile1D(lambda s: np.exp(-s), 0.0, 1.0)
    nodes = chebyshev_nodes(0.0, 1.0, 80)
    inner = Profile1D.from_samples(
        nodes, [gen_J(phi, 1.0, 2.0, float(t)) for t in nodes], lo=0.0, hi=1.0, exponents=(1.0, 0.0)
    )
    for t in (0.4, 0.9):
        lhs = rl_integral(inner, FracSpec(0.5), t)
        assert lhs == pytest.approx(gen_J(phi, 1.5, 2.0, t), rel=1e-6)


def test_kernel_cap():
    with pytest.raises(ValueError):
        gen_J(SMOOTH, 1.0, 200.0, 1.0)
    with pytest.raises(ValueError):
        gen_J(SMOOTH, 1.0, 1.0, 1.5)


def _psi_by_quadrature(phi, lam: float, t: float) -> float:
    # d/dt J_{1,lam} phi = phi(t) - lam^2/4 int_0^t s j_1(lam sqrt(s(t-s))) phi(s) ds
    f = lambda s: s * j_clifford(1.0, lam * math.sqrt(s * (t - s))) * phi(s)  # noqa: E731
    tail, _ = integrate.quad(f, 0.0, t, epsrel=1e-13)
    return phi(t) - 0.25 * lam * lam * tail


def test_solve_J1_round_trip():
    lam = 3.0
    phi = lambda s: s * (1.0 - s)  # noqa: E731
    nodes = chebyshev_nodes(0.0, 1.0, 81)
    psi_values = np.array([_psi_by_quadrature(phi, lam, float(t)) for t in nodes])
    psi = Profile1D.from_samples(nodes, psi_values, lo=0.0, hi=1.0)
    solved = solve_J1(psi, lam, nodes)
    inner = slice(3, -3)
    assert np.max(np.abs(solved.solution.values[inner] - phi(nodes[inner]))) < 1e-4
    assert solved.residual < 1e-4


def test_solve_J1_trivial_cases():
    nodes = np.linspace(0.05, 1.0, 20)
    zero = Profile1D.constant(0.0, 0.0, 1.0)
    assert np.all(solve_J1(zero, 2.0, nodes).solution.values == 0.0)
    psi = Profile1D(lambda s: np.sin(s), 0.0, 1.0)
    np.testing.assert_array_equal(solve_J1(psi, 0.0, nodes).solution.values, np.sin(nodes))


def test_frequency_forward():
    f = Profile1D(lambda s: s, 0.0, 1.0, (1.0, 0.0))
    assert halfspace_freq_forward(FreqProfile(0.0, f), 3, 0.6) == pytest.approx(0.18, rel=1e-13)
    assert halfspace_freq_forward(FreqProfile(2.0, f), 3, 0.8) == pytest.approx(quad_J(lambda s: s, 1.0, 2.0, 0.8), rel=1e-8)
    zero = Profile1D.constant(0.0, 0.0, 1.0)
    assert halfspace_freq_forward(FreqProfile(2.0, zero), 3, 0.5) == 0.0


def test_frequency_profile_validation():
    with pytest.raises(ValueError):
        FreqProfile(-1.0, SMOOTH)
    with pytest.raises(ValueError):
        FreqProfile(FREQ_CAP + 1.0, SMOOTH)
    with pytest.raises(ValueError):
        FreqProfile(1.0, Profile1D(np.cos, 0.5, 1.0))


def _freq_round_trip(f, n: int, lam: float) -> float:
    nodes = chebyshev_nodes(0.0, 1.0, 161, cluster="lo")
    data = [halfspace_freq_forward(FreqProfile(lam, f), n, float(t)) for t in nodes]
    F = Profile1D.from_samples(np.concatenate([[0.0], nodes]), np.concatenate([[0.0], data]), lo=0.0, hi=1.0)
    result = halfspace_freq_invert(FreqProfile(lam, F), n, nodes)
    inner = slice(3, -3)
    return float(np.max(np.abs(result.recovered.values[inner] - f(result.recovered.nodes[inner]))))


@pytest.mark.parametrize("n, lam, f", [
    (3, 1.0, Profile1D(lambda s: s * s * (1.0 - s), 0.0, 1.0, (2.0, 0.0))),
    (2, 0.0, Profile1D(lambda s: s, 0.0, 1.0, (1.0, 0.0))),
])
def test_frequency_round_trip(n, lam, f):
    assert _freq_round_trip(f, n, lam) < 1e-3


def test_frequency_invert_zero():
    zero = Profile1D.constant(0.0, 0.0, 1.0)
    result = halfspace_freq_invert(FreqProfile(1.0, zero), 3)
    assert np.all(result.recovered.values == 0.0)
    assert result.in_range
