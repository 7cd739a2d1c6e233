from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from tangent_means.fracops import Profile1D
from tangent_means.identities import (
    DivergenceError,
    circle_identity,
    conn_identity,
    consd_inverse_identity,
    consd_power_identity,
    halfspace_power_constant,
    halfspace_power_identity,
    verify_identity,
    weight_transfer,
)
from tangent_means.profiles import build_profile, parse_profile, weight_domain
from tangent_means.transforms import Branch, ConfigError, GeomConfig, Setting, forward_value

TOL = 1e-8

BOUNDED_PAIRS = [("exp-decay", "exp-decay"), ("poly:c0=1,c1=1", "bump"), ("bump", "power:p=0.5")]
UNBOUNDED_PAIRS = [("exp-decay:rate=2", "bump"), ("bump", "exp-decay:rate=0.5")]

GENERIC = [
    (GeomConfig(4, 3, Setting.BallInterior), BOUNDED_PAIRS),
    (GeomConfig(3, 2, Setting.BallInterior), BOUNDED_PAIRS[1:]),
    (GeomConfig(4, 3, Setting.BallExterior), UNBOUNDED_PAIRS),
    (GeomConfig(3, 2, Setting.HalfBallChord), BOUNDED_PAIRS),
    (GeomConfig(4, 3, Setting.SphereCap, alpha=0.5 * math.pi), BOUNDED_PAIRS),
    (GeomConfig(3, 2, Setting.SphereCap, alpha=0.5 * math.pi), BOUNDED_PAIRS),
    (GeomConfig(4, 3, Setting.Hyperbolic, alpha=1.0), UNBOUNDED_PAIRS),
    (GeomConfig(4, 3, Setting.Hyperbolic, alpha=0.6, side=Branch.Minus), UNBOUNDED_PAIRS),
    (GeomConfig(4, 2, Setting.HalfSpace), UNBOUNDED_PAIRS[:1]),
    (GeomConfig(4, 3, Setting.HalfSpace), UNBOUNDED_PAIRS[:1]),
]


def _cases():
    for cfg, pairs in GENERIC:
        for f, u in pairs:
            yield pytest.param(cfg, f, u, id=f"{cfg.setting.value}-k{cfg.k}-{cfg.side.value}-{f}-{u}")


@pytest.mark.parametrize("cfg, f_text, u_text", list(_cases()))
def test_generic_identity(cfg, f_text, u_text):
    f0 = build_profile(parse_profile(f_text), cfg)
    u0 = build_profile(parse_profile(u_text), None, weight_domain(cfg))
    check = verify_identity(f0, u0, cfg)
    assert check.relerr < 1e-6, check


@pytest.mark.parametrize("f_text", ["exp-decay", "exp-decay:rate=2", "bump"])
def test_hyperbolic_origin_identity(f_text):
    cfg = GeomConfig(4, 3, Setting.Hyperbolic, alpha=0.0, side=Branch.Minus)
    f0 = build_profile(parse_profile(f_text), cfg)
    u0 = build_profile(parse_profile("exp-decay"), None, weight_domain(cfg))
    check = verify_identity(f0, u0, cfg, inner_decay=2.0)
    assert check.relerr < 1e-6, check


def test_zero_profile_gives_zero_sides():
    cfg = GeomConfig(4, 3, Setting.BallInterior)
    zero = Profile1D.constant(0.0, 0.0, 1.0)
    u0 = Profile1D(lambda t: np.exp(-t), 0.0, 1.0)
    check = verify_identity(zero, u0, cfg)
    assert check.lhs == 0.0 and check.rhs == 0.0 and check.relerr == 0.0


def test_halfspace_weight_transfer_of_power():
    # u = x^a transfers to v = c s^a
    cfg = GeomConfig(4, 3, Setting.HalfSpace)
    a = 0.25
    pair = weight_transfer(Profile1D(lambda x: x**a, 0.0, math.inf, (a, 0.0)), cfg, decay=0.5 * cfg.k - a)
    for s in (0.3, 1.0, 4.0):
        assert float(pair.v(np.array([s]))[0]) == pytest.approx(halfspace_power_constant(3, a) * s**a, rel=1e-7)


def test_sphere_identity_needs_equator():
    u0 = Profile1D(lambda t: t, 0.0, 1.0)
    with pytest.raises(ConfigError):
        weight_transfer(u0, GeomConfig(4, 3, Setting.SphereCap, alpha=1.0))


# {{{ closed forms


BALL_PROFILES = [
    Profile1D(lambda s: np.exp(-s), 0.0, 1.0),
    Profile1D(lambda s: 1.0 + s * s, 0.0, 1.0),
    Profile1D(lambda s: np.cos(s), 0.0, 1.0),
]
EXTERIOR_PROFILES = [
    (Profile1D(lambda s: np.exp(-s), 1.0, math.inf), None),
    (Profile1D(lambda s: s**-4.0, 1.0, math.inf), 4.0),
    (Profile1D(lambda s: s * np.exp(-2.0 * s), 1.0, math.inf), None),
]
HALFSPACE_PROFILES = [
    (Profile1D(lambda s: np.exp(-s), 0.0, math.inf), None),
    (Profile1D(lambda s: np.exp(-s) * np.sqrt(s), 0.0, math.inf, (0.5, 0.0)), None),
    (Profile1D(lambda s: (1.0 + s) ** -4.0, 0.0, math.inf), 4.0),
]


@pytest.mark.parametrize("f0", BALL_PROFILES)
@pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0])
def test_interior_closed_identity(f0, alpha):
    assert conn_identity(f0, GeomConfig(4, 3, Setting.BallInterior), alpha).relerr < TOL


@pytest.mark.parametrize("f0, power", EXTERIOR_PROFILES)
@pytest.mark.parametrize("mu", [-0.5, 0.0, 0.3])
def test_exterior_power_identity(f0, power, mu):
    decay = math.inf if power is None else power - 1.0 - mu
    assert consd_power_identity(f0, GeomConfig(5, 4, Setting.BallExterior), mu, decay=decay).relerr < TOL


@pytest.mark.parametrize("f0, power", EXTERIOR_PROFILES)
@pytest.mark.parametrize("alpha", [1.5, 2.5])
def test_exterior_inverse_identity(f0, power, alpha):
    decay = math.inf if power is None else power - 2.0 + alpha
    assert consd_inverse_identity(f0, GeomConfig(4, 3, Setting.BallExterior), alpha, decay=decay).relerr < TOL


@pytest.mark.parametrize("f0", BALL_PROFILES)
@pytest.mark.parametrize("branch", ["A", "B"])
def test_circle_identity(f0, branch):
    assert circle_identity(f0, branch=branch).relerr < TOL


@pytest.mark.parametrize("f0, power", HALFSPACE_PROFILES)
@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.3])
def test_halfspace_power_identity(f0, power, alpha):
    decay = math.inf if power is None else power - alpha
    assert halfspace_power_identity(f0, GeomConfig(4, 3, Setting.HalfSpace), alpha, decay=decay).relerr < TOL


def test_halfspace_constant_in_three_dimensions():
    assert halfspace_power_constant(3, 0.0) == pytest.approx(2.0, rel=1e-14)
    cfg = GeomConfig(4, 3, Setting.HalfSpace)
    f0 = Profile1D(lambda s: np.exp(-s), 0.0, math.inf)
    # int_0^oo Phi(x) dx computed independently of the identity module
    lhs, _ = integrate.quad(lambda x: forward_value(f0, cfg, x), 0.0, np.inf, epsrel=1e-11)
    assert lhs == pytest.approx(2.0, rel=1e-8)


@pytest.mark.xfail(strict=True, reason="printed constant carries 2^((k-2-a)/2); integration gives 2^(k-2-a)")
def test_halfspace_printed_constant():
    cfg = GeomConfig(4, 3, Setting.HalfSpace)
    check = halfspace_power_identity(Profile1D(lambda s: np.exp(-s), 0.0, math.inf), cfg, 0.0)
    # int f0 = 1, so the left side is the constant itself
    assert check.lhs == pytest.approx(math.sqrt(2.0), rel=1e-4)


def test_closed_identities_reject_bad_exponents():
    f0 = Profile1D(lambda s: np.exp(-s), 1.0, math.inf)
    with pytest.raises(DivergenceError):
        consd_power_identity(f0, GeomConfig(4, 3, Setting.BallExterior), 0.2)
    with pytest.raises(DivergenceError):
        consd_inverse_identity(f0, GeomConfig(4, 3, Setting.BallExterior), 0.5)
    with pytest.raises(DivergenceError):
        conn_identity(BALL_PROFILES[0], GeomConfig(4, 3, Setting.BallInterior), -1.0)
    with pytest.raises(ConfigError):
        conn_identity(BALL_PROFILES[0], GeomConfig(4, 3, Setting.BallExterior), 0.0)


# }}}
