"""Acceptance checks, one PASS/FAIL line per criterion.

The lines are echoed to stdout and repeated in the pytest terminal summary.
Literal values that the transforms do not reproduce are strict xfails: they
print FAIL and keep the run green only while they keep failing.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest
from scipy import integrate, special
from test_besselfrac import _freq_round_trip, _psi_by_quadrature
from test_cli import ROUNDTRIPS
from test_identities import BALL_PROFILES, EXTERIOR_PROFILES, HALFSPACE_PROFILES
from test_inversion import ROUND_TRIPS, SUPPORT, round_trip
from test_transforms import CONFIGS

from tangent_means.besselfrac import gen_J, solve_J1
from tangent_means.cli import EXIT_OK, EXIT_TOLERANCE, inversion_grid, main
from tangent_means.fracops import FracSpec, Grid1D, Profile1D, chebyshev_nodes, rl_derivative, rl_integral, rl_integral_many
from tangent_means.identities import (
    circle_identity,
    conn_identity,
    consd_inverse_identity,
    consd_power_identity,
    halfspace_power_constant,
    halfspace_power_identity,
)
from tangent_means.inversion import invert
from tangent_means.oracle import mc_transform, slice_transform
from tangent_means.profiles import build_profile, closed_form, parse_profile
from tangent_means.transforms import (
    Branch,
    GeomConfig,
    Setting,
    equatorial_forward,
    forward,
    forward_value,
    guarded_parameters,
    halfball_chord_forward,
)


def relerr(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def test_power_rule(verdict):
    start = time.perf_counter()
    worst = 0.0
    x = np.linspace(0.1, 2.0, 20)
    for alpha in (0.5, 1.0, 1.5, 2.5):
        for mu in (0.0, 0.5, 1.0, 2.0):
            f = Profile1D(lambda s, mu=mu: s**mu, 0.0, 2.0, (mu, 0.0))
            got = rl_integral_many(f, FracSpec(alpha), x)
            want = special.gamma(mu + 1.0) / special.gamma(mu + 1.0 + alpha) * x ** (mu + alpha)
            worst = max(worst, float(np.max(np.abs(got - want) / want)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 1.0
    verdict(1, "fractional power rule", ok, f"max relerr {worst:.1e}, {elapsed:.2f} s")
    assert ok


def test_derivative_undoes_integral(verdict):
    start = time.perf_counter()
    f = Profile1D(lambda s: np.sin(3.0 * s) + s * s, 0.0, 1.0)
    x = chebyshev_nodes(0.0, 1.0, 101)
    worst = 0.0
    for alpha in (0.3, 0.5, 1.5):
        spec = FracSpec(alpha)
        d = rl_derivative(Grid1D(x, rl_integral_many(f, spec, x)), spec, edge_exponent=alpha)
        worst = max(worst, float(np.max(np.abs(d.values - f(d.nodes)))))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-4 and elapsed < 10.0
    verdict(2, "D^a I^a f = f", ok, f"sup error {worst:.1e}, {elapsed:.2f} s")
    assert ok


# {{{ closed-form examples


EXAMPLES = {
    "interior, |x|=1/4": (GeomConfig(3, 3, Setting.BallInterior), "example32:beta=1", 0.5, 4.0),
    "exterior, |x|=5/4": (GeomConfig(3, 3, Setting.BallExterior), "example38:beta=1", 1.5, 4.0 / 9.0),
    "chord k=1, theta=0.8": (GeomConfig(2, 1, Setting.HalfBallChord), "example43:alpha=1", 0.8, 40.0),
    "equatorial k=3, theta=0.9": (GeomConfig(4, 3, Setting.SphereCap, alpha=0.5 * math.pi), "example53:beta=1", 0.9, 4.642564541720),
}


def _pipeline(cfg, profile, param):
    spec = parse_profile(profile)
    f0 = build_profile(spec, cfg)
    value = equatorial_forward(f0, cfg, param) if spec.name == "example53" else forward_value(f0, cfg, param)
    return value, closed_form(spec, cfg)(param)


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_closed_form_examples(name, verdict):
    cfg, profile, param, value = EXAMPLES[name]
    got, exact = _pipeline(cfg, profile, param)
    err = max(relerr(got, exact), relerr(exact, value))
    ok = err < 1e-8
    verdict(3, f"example {name} -> {value:.10g}", ok, f"pipeline {got:.12g}, relerr {err:.1e}")
    assert ok


@pytest.mark.xfail(strict=True, reason="printed value is half of the transform")
def test_chord_printed_value(verdict):
    got, _ = _pipeline(*EXAMPLES["chord k=1, theta=0.8"][:3])
    ok = relerr(got, 20.0) < 1e-8
    verdict(3, "example chord k=1 printed value 20", ok, f"pipeline {got:.12g}")
    assert ok


@pytest.mark.xfail(strict=True, reason="printed value misses a factor 2^(k-2)")
def test_equatorial_printed_value(verdict):
    got, _ = _pipeline(*EXAMPLES["equatorial k=3, theta=0.9"][:3])
    ok = relerr(got, 2.3213) < 1e-4
    verdict(3, "example equatorial printed value 2.3213", ok, f"pipeline {got:.12g}")
    assert ok


# }}}


def test_constant_normalization(verdict):
    worst = 0.0
    for cfg in CONFIGS.values():
        f0 = build_profile(parse_profile("poly:c0=1"), cfg)
        for p in guarded_parameters(cfg, 32):
            if cfg.setting is Setting.HalfBallChord:
                value = halfball_chord_forward(f0, cfg, p, normalized=True)
            else:
                value = forward_value(f0, cfg, p)
            worst = max(worst, abs(value - 1.0))
    settings = {cfg.setting for cfg in CONFIGS.values()}
    ok = worst < 1e-10 and len(settings) == 6
    verdict(4, "constant profile maps to 1", ok, f"{len(CONFIGS)} configs, max |Phi-1| {worst:.1e}")
    assert ok


ORACLE_CASES = [
    (GeomConfig(4, 3, Setting.BallInterior), 0.4, ["exp-decay", "poly:c0=1,c2=2", "example32:beta=1"]),
    (GeomConfig(4, 3, Setting.BallExterior), 1.6, ["exp-decay", "power:p=-2", "example38:beta=1"]),
    (GeomConfig(3, 2, Setting.HalfBallChord), 0.85, ["exp-decay", "poly:c0=1,c1=-1,c2=3", "example43:alpha=1"]),
    (GeomConfig(4, 3, Setting.SphereCap, alpha=1.0), 0.3, ["exp-decay", "poly:c0=1,c1=2", "bump:a=0.5,b=1"]),
    (
        GeomConfig(4, 3, Setting.Hyperbolic, alpha=0.7, side=Branch.Minus),
        0.4,
        ["exp-decay", "power:p=-1", "bump:a=1.3,b=2.5"],
    ),
    (GeomConfig(4, 2, Setting.HalfSpace), 0.8, ["exp-decay", "poly:c0=1,c1=1", "bump:a=0.2,b=1.4"]),
]


def test_oracle_agreement(verdict):
    start = time.perf_counter()
    worst_z = worst_slice = 0.0
    for cfg, param, profiles in ORACLE_CASES:
        for text in profiles:
            f0 = build_profile(parse_profile(text), cfg)
            exact = forward_value(f0, cfg, param)
            est = mc_transform(f0, cfg, param, 1_000_000)
            worst_z = max(worst_z, abs(est.value - exact) / est.stderr)
            worst_slice = max(worst_slice, relerr(slice_transform(f0, cfg, param), exact))
    elapsed = time.perf_counter() - start
    ok = worst_z < 4.0 and worst_slice < 1e-6 and elapsed < 60.0
    verdict(5, "Monte Carlo and slice oracles", ok, f"max |z| {worst_z:.2f}, slice relerr {worst_slice:.1e}, {elapsed:.1f} s")
    assert ok


def test_inversion_round_trips(verdict):
    start = time.perf_counter()
    worst = residual = 0.0
    for cfg, profile, exponent in ROUND_TRIPS.values():
        report, error = round_trip(cfg, profile, exponent)
        worst, residual = max(worst, error), max(residual, report.forward_residual)
    elapsed = time.perf_counter() - start
    settings = {cfg.setting for cfg, _, _ in ROUND_TRIPS.values()}
    ok = worst < 1e-3 and residual < 1e-3 and elapsed < 30.0 and len(settings) == 6
    verdict(6, "inversion round trips", ok, f"sup error {worst:.1e}, residual {residual:.1e}, {elapsed:.1f} s")
    assert ok


def test_support(verdict):
    data_worst = profile_worst = 0.0
    for cfg, profile, data_zero, profile_zero in SUPPORT:
        f0 = build_profile(parse_profile(profile), cfg)
        params = inversion_grid(cfg, 241, False)
        data = forward(f0, cfg, params)
        data_worst = max(data_worst, float(np.max(np.abs(data.grid.values[data_zero(params)]))))
        rec = invert(data, cfg, check=False).recovered
        profile_worst = max(profile_worst, float(np.max(np.abs(rec.values[profile_zero(rec.nodes)]))))
    ok = data_worst < 1e-12 and profile_worst < 1e-6
    verdict(7, "support theorems", ok, f"forward {data_worst:.1e}, inversion {profile_worst:.1e}")
    assert ok


# {{{ weighted identities


def _identity_checks():
    interior = GeomConfig(4, 3, Setting.BallInterior)
    exterior = GeomConfig(5, 4, Setting.BallExterior)
    exterior3 = GeomConfig(4, 3, Setting.BallExterior)
    half = GeomConfig(4, 3, Setting.HalfSpace)
    yield "conn", [conn_identity(f0, interior, 0.5) for f0 in BALL_PROFILES]
    yield "consd power", [
        consd_power_identity(f0, exterior, 0.3, decay=math.inf if p is None else p - 1.3) for f0, p in EXTERIOR_PROFILES
    ]
    yield "consd inverse", [
        consd_inverse_identity(f0, exterior3, 1.5, decay=math.inf if p is None else p - 0.5)
        for f0, p in EXTERIOR_PROFILES
    ]
    yield "circle", [circle_identity(f0, branch=b) for f0 in BALL_PROFILES for b in ("A", "B")]
    yield "half-space c1", [
        halfspace_power_identity(f0, half, 0.3, decay=math.inf if p is None else p - 0.3) for f0, p in HALFSPACE_PROFILES
    ]


def _halfspace_c2_direct():
    # integral of Phi over the half line, by quadrature of the forward transform
    cfg = GeomConfig(4, 3, Setting.HalfSpace)
    f0 = Profile1D(lambda s: np.exp(-s), 0.0, math.inf)
    value, _ = integrate.quad(lambda x: forward_value(f0, cfg, x), 0.0, np.inf, epsrel=1e-11)
    return value


def test_weighted_identities(verdict):
    worst_all = 0.0
    for name, checks in _identity_checks():
        worst = max(c.relerr for c in checks)
        worst_all = max(worst_all, worst)
        verdict(8, f"identity {name}", worst < 1e-4, f"{len(checks)} checks, max relerr {worst:.1e}")
    direct = _halfspace_c2_direct()
    c2 = halfspace_power_constant(3, 0.0)
    err = max(relerr(c2, direct), relerr(direct, 2.0))
    verdict(8, "identity half-space c2 = 2 for k=3", err < 1e-4, f"quadrature {direct:.10f}")
    assert worst_all < 1e-4 and err < 1e-4


@pytest.mark.xfail(strict=True, reason="printed constant is sqrt(2); integration gives 2")
def test_halfspace_printed_constant(verdict):
    direct = _halfspace_c2_direct()
    ok = relerr(direct, math.sqrt(2.0)) < 1e-4
    verdict(8, "identity half-space printed c2 = sqrt(2)", ok, f"quadrature {direct:.10f}")
    assert ok


# }}}


def test_bessel_suite(verdict):
    # 1 + s^2 has I^a by the power rule, independent of any quadrature
    phi = Profile1D(lambda s: 1.0 + s * s, 0.0, 1.0)
    zero_freq = 0.0
    for a in (0.5, 1.0, 1.5, 2.5):
        for t in (0.3, 1.0):
            exact = t**a / special.gamma(a + 1.0) + 2.0 * t ** (a + 2.0) / special.gamma(a + 3.0)
            got = gen_J(phi, a, 0.0, t)
            zero_freq = max(zero_freq, relerr(got, exact), relerr(got, rl_integral(phi, FracSpec(a), t)))

    decay = Profile1D(lambda s: np.exp(-s), 0.0, 1.0)
    nodes = chebyshev_nodes(0.0, 1.0, 80)
    inner = Profile1D.from_samples(
        nodes, [gen_J(decay, 1.0, 2.0, float(t)) for t in nodes], lo=0.0, hi=1.0, exponents=(1.0, 0.0)
    )
    semigroup = max(relerr(rl_integral(inner, FracSpec(0.5), t), gen_J(decay, 1.5, 2.0, t)) for t in (0.4, 0.9))

    poly = lambda s: s * (1.0 - s)  # noqa: E731
    nodes = chebyshev_nodes(0.0, 1.0, 81)
    psi = Profile1D.from_samples(nodes, [_psi_by_quadrature(poly, 3.0, float(t)) for t in nodes], lo=0.0, hi=1.0)
    solved = solve_J1(psi, 3.0, nodes)
    j1 = float(np.max(np.abs(solved.solution.values[3:-3] - poly(nodes[3:-3]))))

    f = Profile1D(lambda s: s * s * (1.0 - s), 0.0, 1.0, (2.0, 0.0))
    freq = max(_freq_round_trip(f, n, lam) for n in (2, 3) for lam in (0.0, 1.0, 5.0))

    ok = zero_freq < 1e-10 and semigroup < 1e-6 and j1 < 1e-4 and freq < 1e-3
    detail = f"J(lam=0) {zero_freq:.1e}, semigroup {semigroup:.1e}, solve_J1 {j1:.1e}, frequency {freq:.1e}"
    verdict(9, "Bessel-kernel suite", ok, detail)
    assert ok


def test_singularity_exponent(verdict):
    cfg = GeomConfig(3, 3, Setting.BallInterior)
    t = np.logspace(-4, -2, 9)
    slopes = {}
    for beta in (0.5, 1.0):
        f0 = build_profile(parse_profile(f"example32:beta={beta}"), cfg)
        values = np.array([forward_value(f0, cfg, float(x)) for x in t])
        slopes[beta] = float(np.polyfit(np.log(t), np.log(values), 1)[0])
    # the transform blows up like t^(-2 beta)
    ok = all(abs(-s - 2.0 * b) <= 0.05 for b, s in slopes.items())
    verdict(10, "log-log slope near t=0 is -2 beta", ok, ", ".join(f"beta={b}: {s:.4f}" for b, s in slopes.items()))
    assert ok


def test_cli_determinism_and_exit_codes(tmp_path, capsys, verdict):
    args = ["oracle", "--setting", "ball-interior", "--n", "4", "--k", "3", "--samples", "20000", "--grid", "0.2:0.8:4"]
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    codes = [main([*args, "--out", str(p)]) for p in paths]
    same = codes == [EXIT_OK, EXIT_OK] and paths[0].read_bytes() == paths[1].read_bytes()
    loose = [main(["roundtrip", *g]) for g in ROUNDTRIPS]
    tight = [main(["roundtrip", *g, "--tol", "1e-12"]) for g in ROUNDTRIPS]
    capsys.readouterr()
    ok = same and all(c == EXIT_OK for c in loose) and all(c == EXIT_TOLERANCE for c in tight)
    verdict(11, "CLI determinism and roundtrip exit codes", ok, f"identical CSV {same}, exits {loose} / {tight}")
    assert ok
