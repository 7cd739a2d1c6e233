from __future__ import annotations

import math

import numpy as np
import pytest

from tangent_means.profiles import (
    BUILTINS,
    ProfileError,
    ProfileSpec,
    build_profile,
    closed_form,
    parse_profile,
    profile_domain,
    weight_domain,
)
from tangent_means.transforms import GeomConfig, Setting


def test_parse_round_trips_through_str():
    spec = parse_profile("bump:a=0.2,b=0.6")
    assert spec == ProfileSpec("bump", (("a", 0.2), ("b", 0.6)))
    assert parse_profile(str(spec)) == spec
    assert str(parse_profile("exp-decay")) == "exp-decay"
    assert spec.get("a", 0.0) == 0.2 and spec.get("c", 7.0) == 7.0


@pytest.mark.parametrize(
    "text",
    ["nosuch", "bump:a", "bump:a=x", "bump:zz=1", "csv:", "example32:alpha=1"],
)
def test_parse_errors(text):
    with pytest.raises(ProfileError):
        parse_profile(text)


def test_builtins_listed():
    assert {"example32", "example38", "example43", "example53", "power", "exp-decay", "bump", "indicator"} <= set(
        BUILTINS
    )


def test_domains():
    assert profile_domain(GeomConfig(3, 2, Setting.BallExterior)) == (1.0, math.inf)
    assert profile_domain(GeomConfig(3, 2, Setting.SphereCap, alpha=1.0)) == (-1.0, 1.0)
    assert weight_domain(GeomConfig(3, 2, Setting.SphereCap, alpha=1.0)) == (0.0, 1.0)
    assert weight_domain(GeomConfig(3, 2, Setting.HalfSpace)) == (0.0, math.inf)


def test_example_profiles_need_their_setting():
    with pytest.raises(ProfileError):
        build_profile("example32", GeomConfig(3, 2, Setting.BallExterior))
    with pytest.raises(ProfileError):
        build_profile("example32", None, (0.0, 1.0))
    with pytest.raises(ProfileError):
        build_profile("bump", None)


def test_example_profile_values():
    cfg = GeomConfig(3, 3, Setting.BallInterior)
    f = build_profile("example32:beta=1", cfg)
    s = np.array([0.3, 0.6])
    # |x|^(1-k-2 beta) (1 - |x|^2)^(beta + (1-k)/2) with k = 3, beta = 1
    np.testing.assert_allclose(f(s), s**-4.0, rtol=1e-14)
    assert f.exponents[0] == pytest.approx(-4.0)


def test_generic_families():
    dom = (0.0, 2.0)
    s = np.array([0.25, 1.0, 1.75])
    np.testing.assert_allclose(build_profile("power:p=2,scale=3", None, dom)(s), 3 * s**2)
    np.testing.assert_allclose(build_profile("exp-decay:rate=2", None, (1.0, math.inf))(s + 1.0), np.exp(-2 * s))
    np.testing.assert_allclose(build_profile("poly:c0=1,c2=2", None, dom)(s), 1 + 2 * s**2)
    ind = build_profile("indicator:a=0.5,b=1.5", None, dom)
    np.testing.assert_array_equal(ind(s), [0.0, 1.0, 0.0])
    bump = build_profile("bump:a=0.5,b=1.5", None, dom)
    assert bump(np.array([1.0]))[0] == pytest.approx(1.0)
    assert bump(np.array([0.4, 1.6])).tolist() == [0.0, 0.0]
    ramp = build_profile("ramp:a=1,m=2,down=1", None, dom)
    np.testing.assert_allclose(ramp(s), [0.5625, 0.0, 0.0])


def test_window_validation():
    with pytest.raises(ProfileError):
        build_profile("bump:a=0.8,b=0.2", None, (0.0, 1.0))
    with pytest.raises(ProfileError):
        build_profile("ramp:a=3", None, (0.0, 1.0))


def test_csv_profile(tmp_path):
    path = tmp_path / "f.csv"
    s = np.linspace(0.0, 1.0, 41)
    path.write_text("s,value\n" + "".join(f"{a:.17g},{b:.17g}\n" for a, b in zip(s, np.cos(s))))
    f = build_profile(f"csv:{path}", None, (0.0, 1.0))
    x = np.linspace(0.05, 0.95, 7)
    np.testing.assert_allclose(f(x), np.cos(x), atol=1e-7)
    short = tmp_path / "short.csv"
    short.write_text("0,1\n1,2\n")
    with pytest.raises(ProfileError):
        build_profile(f"csv:{short}", None, (0.0, 1.0))


def test_closed_form_availability():
    assert closed_form("exp-decay", GeomConfig(3, 2, Setting.BallInterior)) is None
    assert closed_form("example53", GeomConfig(4, 3, Setting.SphereCap, alpha=1.0)) is None
    phi = closed_form("example32:beta=1", GeomConfig(3, 3, Setting.BallInterior))
    assert phi(0.5) == pytest.approx(4.0, rel=1e-14)
