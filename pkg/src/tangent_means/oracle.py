"""Independent evaluation of tangent means straight from their geometric definitions.

Two routes that share no code with :mod:`tangent_means.transforms`:

* :func:`slice_mean` integrates a symmetric profile over one slice variable
  with Gauss-Jacobi rules (the weight ``(1 - u^2)^gamma`` is built into the
  nodes, no change of variables is made);
* :func:`mc_sphere_mean` samples points uniformly on the actual sphere,
  sphere slice, hyperbolic slice or chord in ambient coordinates and averages
  an arbitrary function over them.
"""

from __future__ import annotations

import enum
import functools
import math
import os
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import roots_jacobi

from .fracops import Profile1D
from .transforms import Branch, GeomConfig, Setting, chord_half_height, chord_volume

DEFAULT_SEED = 0x5EED16E0
CHUNK = 1 << 16
THREADS_ENV = "TANGENT_MEANS_THREADS"

AmbientFunction = Callable[[np.ndarray], np.ndarray]


class Model(enum.Enum):
    Euclidean = "euclidean"
    Spherical = "spherical"
    Hyperbolic = "hyperbolic"


@dataclass(frozen=True)
class SphereSpec:
    """A geodesic sphere (or solid ball, for chords) to average over.

    ``basis`` rows span the directions the sphere extends in; a sphere of
    dimension ``m - 1`` has ``m`` rows. In the hyperbolic model the rows are
    unit spacelike tangent vectors at ``center``.
    """

    center: np.ndarray
    radius: float
    basis: np.ndarray
    model: Model = Model.Euclidean
    solid: bool = False

    def __post_init__(self) -> None:
        center = np.asarray(self.center, dtype=float)
        basis = np.atleast_2d(np.asarray(self.basis, dtype=float))
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "basis", basis)
        if not self.radius > 0:
            raise ValueError(f"radius must be positive: {self.radius}")
        if basis.shape[1] != center.size:
            raise ValueError("basis vectors must live in the ambient space of the center")
        gram = basis @ basis.T
        if not np.allclose(gram, np.eye(basis.shape[0]), atol=1e-12):
            raise ValueError("basis is not orthonormal")

    def points(self, directions: np.ndarray) -> np.ndarray:
        """Map unit (or in-ball, for solids) coefficient vectors to ambient points."""
        offset = directions @ self.basis
        if self.model is Model.Euclidean:
            return self.center + self.radius * offset
        if self.model is Model.Spherical:
            return math.cos(self.radius) * self.center + math.sin(self.radius) * offset
        return math.cosh(self.radius) * self.center + math.sinh(self.radius) * offset


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    stderr: float
    n_samples: int
    seed: int


# {{{ slice quadrature


def slice_mean(
    f0: Callable[[np.ndarray], np.ndarray],
    argmap: tuple[float, float] | Callable[[np.ndarray], np.ndarray],
    gamma_exp: float,
    normalized: bool = True,
    *,
    rtol: float = 1e-13,
    max_nodes: int = 1 << 14,
) -> float:
    """``int_{-1}^1 f0(argmap(u)) (1 - u^2)^gamma du``, optionally divided by the weight mass.

    ``argmap`` is either ``(c0, c1)`` for ``u -> c0 + c1 u`` or a callable.
    The Gauss-Jacobi order doubles until two successive values agree.
    """
    if gamma_exp <= -1:
        raise ValueError(f"weight exponent {gamma_exp} is not integrable")
    if callable(argmap):
        amap = argmap
    else:
        c0, c1 = argmap
        amap = lambda u: c0 + c1 * u  # noqa: E731

    previous = None
    order = 64
    while True:
        nodes, weights = _jacobi_rule(order, float(gamma_exp))
        total = float(np.dot(weights, f0(amap(nodes))))
        value = total / float(np.sum(weights)) if normalized else total
        if previous is not None and abs(value - previous) <= rtol * max(abs(value), 1e-300):
            return value
        if order >= max_nodes:
            return value
        previous = value
        order *= 2


@functools.lru_cache(maxsize=64)
def _jacobi_rule(order: int, gamma_exp: float) -> tuple[np.ndarray, np.ndarray]:
    return roots_jacobi(order, gamma_exp, gamma_exp)


@dataclass(frozen=True)
class SliceForm:
    """A transform written as ``scale * mean of f0(argmap(u))`` against ``(1 - u^2)^gamma``."""

    argmap: Callable[[np.ndarray], np.ndarray]
    gamma_exp: float
    scale: float = 1.0


def slice_form(cfg: GeomConfig, param: float, *, radius: float | None = None) -> SliceForm:
    """Slice representation of the transform at ``param``.

    For the ball interior the center norm defaults to ``(1 + t) / 2``; pass
    ``radius`` to pick the other branch ``(1 - t) / 2``.
    """
    k = cfg.k
    s = cfg.setting
    if s is Setting.BallInterior:
        r = 0.5 * (1.0 + param) if radius is None else radius
        rho = 1.0 - r
        return SliceForm(lambda u: np.sqrt(np.maximum(r * r + 2 * r * rho * u + rho * rho, 0.0)), 0.5 * (k - 3))
    if s is Setting.BallExterior:
        r = 0.5 * (1.0 + param) if radius is None else radius
        rho = r - 1.0
        return SliceForm(lambda u: np.sqrt(r * r + 2 * r * rho * u + rho * rho), 0.5 * (k - 3))
    if s is Setting.HalfBallChord:
        b = chord_half_height(param)
        # the uniform k-ball projects onto a line with density (1 - u^2)^((k-1)/2)
        return SliceForm(lambda u: b + b * u, 0.5 * (k - 1), chord_volume(k, param))
    if s is Setting.SphereCap:
        c = cfg.alpha - param if cfg.side is Branch.Plus else cfg.alpha + param
        lin = math.sin(param) * math.sin(c)
        mid = math.cos(param) * math.cos(c)
        return SliceForm(lambda u: mid + lin * u, 0.5 * (k - 3))
    if s is Setting.Hyperbolic:
        c = cfg.alpha - param if cfg.side is Branch.Plus else cfg.alpha + param
        lin = math.sinh(param) * abs(math.sinh(c))
        mid = math.cosh(param) * math.cosh(c)
        return SliceForm(lambda u: mid + lin * u, 0.5 * (k - 3))
    return SliceForm(lambda u: param + param * u, 0.5 * (k - 2))


def slice_transform(f0: Profile1D, cfg: GeomConfig, param: float, **kwargs) -> float:
    """Transform value at ``param`` computed by slice quadrature."""
    form = slice_form(cfg, param, **kwargs)
    return form.scale * slice_mean(f0, form.argmap, form.gamma_exp)


# }}}


# {{{ chords


def chord_endpoints(theta_n: float, n: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints of the tangent 1-chord in the ``(x_1, x_n)`` plane.

    ``u`` lies on the equator and ``v`` on the arc from ``u`` to the pole.
    """
    t = math.sqrt(1.0 - theta_n * theta_n)
    u = np.zeros(n)
    v = np.zeros(n)
    u[0] = 1.0
    v[0] = t * t - theta_n * theta_n
    v[-1] = 2.0 * t * theta_n
    return u, v


def chord_integral(
    f: AmbientFunction, u: np.ndarray, v: np.ndarray, normalized: bool = True
) -> float:
    """Integral of ``f`` along the segment ``[u, v]``.

    ``normalized`` returns the mean ``int_0^1 f(t v + (1 - t) u) dt``; otherwise
    the line integral, which is the mean times the length ``|u - v|``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)

    def along(t: float) -> float:
        return float(f((t * v + (1.0 - t) * u)[None, :])[0])

    mean, _ = integrate.quad(along, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    return mean if normalized else mean * float(np.linalg.norm(u - v))


# }}}


# {{{ Monte Carlo


def _workers(requested: int | None) -> int:
    cap = os.environ.get(THREADS_ENV)
    count = requested or os.cpu_count() or 1
    if cap:
        count = min(count, max(1, int(cap)))
    return max(1, count)


def _chunk_stats(
    f: AmbientFunction, spec: SphereSpec, seed: int, index: int, size: int
) -> tuple[int, float, float]:
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    m = spec.basis.shape[0]
    g = rng.standard_normal((size, m))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    if spec.solid:
        g *= rng.random((size, 1)) ** (1.0 / m)
    values = np.asarray(f(spec.points(g)), dtype=float)
    mean = float(np.mean(values))
    return size, mean, float(np.sum((values - mean) ** 2))


def mc_sphere_mean(
    f: AmbientFunction,
    spec: SphereSpec,
    n_samples: int,
    seed: int = DEFAULT_SEED,
    workers: int | None = None,
) -> OracleEstimate:
    """Monte Carlo mean of ``f`` over ``spec``.

    Samples are drawn in fixed chunks, each from its own stream seeded by
    ``(seed, chunk index)``, and the chunk statistics are merged in index
    order; the result does not depend on the worker count.
    """
    if n_samples < 100:
        raise ValueError(f"need at least 100 samples, got {n_samples}")
    sizes = [CHUNK] * (n_samples // CHUNK)
    if n_samples % CHUNK:
        sizes.append(n_samples % CHUNK)

    jobs = [(i, size) for i, size in enumerate(sizes)]
    count = _workers(workers)
    if count == 1 or len(jobs) == 1:
        stats = [_chunk_stats(f, spec, seed, i, size) for i, size in jobs]
    else:
        with ThreadPoolExecutor(max_workers=count) as pool:
            stats = list(pool.map(lambda job: _chunk_stats(f, spec, seed, *job), jobs))

    # pairwise merge of (count, mean, sum of squared deviations)
    total, mean, m2 = 0, 0.0, 0.0
    for size, cmean, cm2 in stats:
        delta = cmean - mean
        new_total = total + size
        mean += delta * size / new_total
        m2 += cm2 + delta * delta * total * size / new_total
        total = new_total
    std = math.sqrt(m2 / (total - 1))
    return OracleEstimate(mean, std / math.sqrt(total), total, seed)


def random_rotation(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random orthogonal matrix."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def _embed_rotation(rotation: np.ndarray | None, ambient: int, fixed_last: int) -> np.ndarray:
    """Extend a rotation of the leading coordinates by the identity on the last ``fixed_last``."""
    full = np.eye(ambient)
    if rotation is not None:
        m = ambient - fixed_last
        full[:m, :m] = rotation
    return full


def tangent_sphere_spec(
    cfg: GeomConfig,
    param: float,
    *,
    rotation: np.ndarray | None = None,
    radius: float | None = None,
) -> SphereSpec:
    """The tangent sphere (or chord) selected by ``param`` in ambient coordinates.

    ``rotation`` is applied from the setting's symmetry group: all of O(n) for
    the ball, rotations fixing the last axis otherwise (so it has size
    ``n`` or ``n - 1``).
    """
    n, k, s = cfg.n, cfg.k, cfg.setting
    e = np.eye(n)

    if s in (Setting.BallInterior, Setting.BallExterior):
        if radius is None:
            radius = 0.5 * (1.0 + param)
        rho = 1.0 - radius if s is Setting.BallInterior else radius - 1.0
        q = np.eye(n) if rotation is None else rotation
        basis = e[:k] @ q.T
        return SphereSpec(q @ (radius * e[0]), rho, basis)

    if s is Setting.HalfBallChord:
        t = math.sqrt(1.0 - param * param)
        theta = t * e[0] + param * e[n - 1]
        meridian = (e[n - 1] - param * theta) / t
        basis = np.vstack([meridian, e[1:k]])
        q = _embed_rotation(rotation, n, 1)
        return SphereSpec(q @ (t * theta), param, basis @ q.T, solid=True)

    if s is Setting.SphereCap:
        c = cfg.alpha - param if cfg.side is Branch.Plus else cfg.alpha + param
        center = math.sin(c) * e[0] + math.cos(c) * e[n - 1]
        tangent = math.cos(c) * e[0] - math.sin(c) * e[n - 1]
        basis = np.vstack([tangent, e[1:k]])
        q = _embed_rotation(rotation, n, 1)
        return SphereSpec(q @ center, param, basis @ q.T, Model.Spherical)

    if s is Setting.Hyperbolic:
        c = cfg.alpha - param if cfg.side is Branch.Plus else cfg.alpha + param
        e1 = np.eye(n + 1)
        center = math.sinh(c) * e1[n - 1] + math.cosh(c) * e1[n]
        tangent = math.cosh(c) * e1[n - 1] + math.sinh(c) * e1[n]
        # the basis is orthonormal for the Minkowski form; its Euclidean Gram
        # matrix is not the identity, so it is stored in a signature-adjusted form
        basis = np.vstack([tangent, e1[: k - 1]])
        q = _embed_rotation(rotation, n + 1, 1)
        return _HyperbolicSpec(q @ center, param, basis @ q.T, Model.Hyperbolic)

    q = _embed_rotation(rotation, n, 1)
    center = param * e[n - 1]
    basis = np.vstack([e[n - 1], e[:k]])
    return SphereSpec(q @ center, param, basis @ q.T)


class _HyperbolicSpec(SphereSpec):
    """Hyperbolic slice; orthonormality is checked for the Minkowski form."""

    def __post_init__(self) -> None:
        center = np.asarray(self.center, dtype=float)
        basis = np.atleast_2d(np.asarray(self.basis, dtype=float))
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "basis", basis)
        if not self.radius > 0:
            raise ValueError(f"radius must be positive: {self.radius}")
        metric = np.ones(center.size)
        metric[-1] = -1.0
        # [x, y] = -sum x_i y_i + x_{n+1} y_{n+1}; spacelike unit vectors have [v, v] = -1
        gram = (basis * metric) @ basis.T
        if not np.allclose(gram, np.eye(basis.shape[0]), atol=1e-12):
            raise ValueError("basis is not Minkowski-orthonormal")
        if not math.isclose(float(-(center * metric) @ center), 1.0, rel_tol=1e-12):
            raise ValueError("center is not on the hyperboloid")


def ambient_function(f0: Profile1D, cfg: GeomConfig) -> AmbientFunction:
    """The symmetric ambient function generated by the profile ``f0``."""
    if cfg.setting in (Setting.BallInterior, Setting.BallExterior):
        return lambda y: f0(np.linalg.norm(y, axis=1))
    # zonal: depends on the last coordinate only
    return lambda y: f0(y[:, -1])


def mc_transform(
    f0: Profile1D,
    cfg: GeomConfig,
    param: float,
    n_samples: int,
    seed: int = DEFAULT_SEED,
    **kwargs,
) -> OracleEstimate:
    """Monte Carlo estimate of the transform value at ``param``.

    Chord estimates are scaled by the chord volume, matching the plain
    integral returned by the forward transform.
    """
    spec = tangent_sphere_spec(cfg, param, **kwargs)
    est = mc_sphere_mean(ambient_function(f0, cfg), spec, n_samples, seed)
    if cfg.setting is Setting.HalfBallChord:
        scale = chord_volume(cfg.k, param)
        return OracleEstimate(est.value * scale, est.stderr * scale, est.n_samples, est.seed)
    return est


# }}}
