"""Composite Gauss-Legendre quadrature with endpoint power substitutions.

Everything in the package that integrates against a weakly singular kernel
goes through :func:`power_weighted`, which evaluates

.. math::

    \\int_{lo}^{hi} (y - lo)^{p_{lo}} (hi - y)^{p_{hi}} g(y) \\, dy

by splitting at the midpoint and substituting ``y - lo = d w^r`` (mirrored at
``hi``). The integer ``r`` is picked so that the Jacobian cancels the power
exactly, leaving a bounded (and for rational exponents, analytic) integrand
that the adaptive 32-point panels resolve quickly.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable, Sequence
from fractions import Fraction

import numpy as np

Integrand = Callable[[np.ndarray], np.ndarray]

PANEL_ORDER = 32
ATOL = 1e-10
RTOL = 1e-12
MAX_PANELS = 6000

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(PANEL_ORDER)
# one panel evaluation covers the whole panel and its two halves
_REF = np.concatenate([_NODES, 0.5 * (_NODES - 1.0), 0.5 * (_NODES + 1.0)])


class QuadratureWarning(UserWarning):
    """Issued when the adaptive refinement stops before meeting its tolerance."""


def _evaluate_panels(func: Integrand, a: np.ndarray, b: np.ndarray):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _REF[None, :]
    fx = np.asarray(func(x.ravel()), dtype=float).reshape(x.shape)
    n = PANEL_ORDER
    whole = half * (fx[:, :n] @ _WEIGHTS)
    left = 0.5 * half * (fx[:, n : 2 * n] @ _WEIGHTS)
    right = 0.5 * half * (fx[:, 2 * n :] @ _WEIGHTS)
    return whole, left, right


def gauss_legendre(
    func: Integrand,
    lo: float,
    hi: float,
    *,
    breaks: Sequence[float] = (),
    atol: float = ATOL,
    rtol: float = RTOL,
    max_panels: int = MAX_PANELS,
) -> tuple[float, float]:
    """Adaptive composite Gauss-Legendre quadrature of ``func`` over ``[lo, hi]``.

    ``func`` must accept and return 1D arrays. Panels whose 32-point value
    disagrees with the sum over their halves are bisected until the summed
    disagreement drops below ``max(atol, rtol * |value|)``.

    Returns the value and the error estimate.
    """
    if hi == lo:
        return 0.0, 0.0
    if hi < lo:
        value, err = gauss_legendre(
            func, hi, lo, breaks=breaks, atol=atol, rtol=rtol, max_panels=max_panels
        )
        return -value, err

    edges = np.unique(np.concatenate([[lo, hi], [b for b in breaks if lo < b < hi]]))
    a, b = edges[:-1], edges[1:]
    whole, left, right = _evaluate_panels(func, a, b)
    width = hi - lo

    while True:
        fine = left + right
        err = np.abs(whole - fine)
        value = float(np.sum(fine))
        tol = max(atol, rtol * abs(value))
        total_err = float(np.sum(err))
        if total_err <= tol or not np.isfinite(value):
            break
        if a.size >= max_panels:
            warnings.warn(
                f"quadrature stopped at {a.size} panels with error {total_err:.3g}",
                QuadratureWarning,
                stacklevel=2,
            )
            break
        share = tol * (b - a) / width
        split = err > share
        if not np.any(split):
            split = err == err.max()
        keep = ~split
        mid = 0.5 * (a[split] + b[split])
        na = np.concatenate([a[split], mid])
        nb = np.concatenate([mid, b[split]])
        parent = np.concatenate([left[split], right[split]])
        _, nl, nr = _evaluate_panels(func, na, nb)
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        whole = np.concatenate([whole[keep], parent])
        left = np.concatenate([left[keep], nl])
        right = np.concatenate([right[keep], nr])

    return value, total_err


def substitution_power(exponent: float, max_denominator: int = 12) -> int:
    """Integer power ``r`` for the map ``y - lo = d w^r`` given the endpoint exponent.

    With ``r (exponent + 1)`` a positive integer, the Jacobian cancels the
    singular factor exactly and the transformed integrand is a polynomial in
    ``w`` times a smooth function of ``w^r``.
    """
    if exponent <= -1:
        raise ValueError(f"endpoint exponent {exponent} is not integrable")
    frac = Fraction(exponent + 1.0).limit_denominator(max_denominator)
    if abs(float(frac) - (exponent + 1.0)) < 1e-12:
        return frac.denominator
    if exponent < 0:
        return max(1, math.ceil(1.0 / (exponent + 1.0)))
    return 1


def _near_end(
    func: Integrand,
    end: float,
    other: float,
    length: float,
    direction: float,
    p_near: float,
    p_far: float,
    hint: float,
    breaks: Sequence[float],
    atol: float,
    rtol: float,
) -> tuple[float, float]:
    """Integrate over the half ``[end, end + direction * length]`` with the substitution."""
    r = substitution_power(p_near + hint)
    span = abs(other - end)

    def mapped(w: np.ndarray) -> np.ndarray:
        dist = length * w**r
        y = end + direction * dist
        weight = length ** (p_near + 1.0) * r * w ** (r * (p_near + 1.0) - 1.0)
        return weight * (span - dist) ** p_far * func(y)

    wbreaks = [(abs(x - end) / length) ** (1.0 / r) for x in breaks if 0 < (x - end) * direction < length]
    return gauss_legendre(mapped, 0.0, 1.0, breaks=wbreaks, atol=atol, rtol=rtol)


def power_weighted(
    func: Integrand,
    lo: float,
    hi: float,
    *,
    p_lo: float = 0.0,
    p_hi: float = 0.0,
    hint_lo: float = 0.0,
    hint_hi: float = 0.0,
    breaks: Sequence[float] = (),
    atol: float = ATOL,
    rtol: float = RTOL,
) -> float:
    """``int_lo^hi (y - lo)^p_lo (hi - y)^p_hi func(y) dy``.

    ``hint_lo``/``hint_hi`` describe how ``func`` itself behaves at the ends
    (``func ~ (y - lo)^hint_lo``); they only steer the substitution.
    """
    if hi <= lo:
        if hi == lo:
            return 0.0
        raise ValueError(f"empty interval ({lo}, {hi})")
    if p_lo + hint_lo <= -1 or p_hi + hint_hi <= -1:
        raise ValueError("non-integrable endpoint singularity")
    half = 0.5 * (hi - lo)
    left, _ = _near_end(func, lo, hi, half, 1.0, p_lo, p_hi, hint_lo, breaks, atol / 2, rtol)
    right, _ = _near_end(func, hi, lo, half, -1.0, p_hi, p_lo, hint_hi, breaks, atol / 2, rtol)
    return left + right


def power_weighted_tail(
    func: Integrand,
    lo: float,
    *,
    decay: float,
    p_lo: float = 0.0,
    hint_lo: float = 0.0,
    scale: float = 1.0,
    breaks: Sequence[float] = (),
    atol: float = ATOL,
    rtol: float = RTOL,
) -> float:
    """``int_lo^inf (y - lo)^p_lo func(y) dy`` when the whole integrand decays like ``y^-decay``.

    The range is cut at ``lo + scale``; the tail uses ``y = lo + scale / w^r``
    with ``r (decay - 1) = 1`` so the transformed integrand stays bounded.
    ``decay=math.inf`` marks exponential decay and switches to
    ``y = lo + scale (1 - log w)``.
    """
    if decay <= 1:
        raise ValueError(f"tail decay {decay} is not integrable")
    cut = lo + scale
    head = power_weighted(
        func,
        lo,
        cut,
        p_lo=p_lo,
        hint_lo=hint_lo,
        breaks=breaks,
        atol=atol / 2,
        rtol=rtol,
    )
    if math.isinf(decay):

        def mapped(w: np.ndarray) -> np.ndarray:
            w = np.maximum(w, 1e-300)
            dist = scale * (1.0 - np.log(w))
            return scale / w * dist**p_lo * func(lo + dist)

        tbreaks = [math.exp(1.0 - (x - lo) / scale) for x in breaks if x > cut]
        tail, _ = gauss_legendre(mapped, 0.0, 1.0, breaks=tbreaks, atol=atol / 2, rtol=rtol)
        return head + tail

    r = 1.0 / (decay - 1.0)

    def mapped(w: np.ndarray) -> np.ndarray:
        w = np.maximum(w, 1e-300)
        dist = scale * w ** (-r)
        y = lo + dist
        return scale * r * w ** (-r - 1.0) * dist**p_lo * func(y)

    tbreaks = [(scale / (x - lo)) ** (1.0 / r) for x in breaks if x > cut]
    tail, _ = gauss_legendre(mapped, 0.0, 1.0, breaks=tbreaks, atol=atol / 2, rtol=rtol)
    return head + tail
