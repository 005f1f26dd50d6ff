"""Multivariate distribution objects built from stochastic representations.

An elliptical vector is mean + R * A * U with U uniform on the unit
Euclidean sphere, R a nonnegative radial law independent of U, and A the
SPD scale root (A A^T = Sigma). A simplicial vector is R * U with U
uniform on the unit L1 simplex (Dirichlet(1,...,1)). Samplers draw from
named Philox streams; Gaussians come from an explicit Box-Muller
transform so output is reproducible bit-for-bit across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .errors import SpecError
from .radial import RadialLaw, law_from_spec, law_to_spec
from .spd import SpdMatrix, spd_from_array, spd_sqrt


@dataclass(frozen=True, eq=False)
class EllipticalDist:
    """Elliptical distribution: mean + radial * scale_root * (sphere direction)."""

    dim: int
    scale_root: SpdMatrix
    radial: RadialLaw
    mean: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.dim < 1:
            raise SpecError("dimension must be >= 1")
        if self.scale_root.dim != self.dim:
            raise SpecError("scale root dimension mismatch")
        self.scale_root.require_positive_definite()
        m = np.zeros(self.dim) if self.mean is None else np.asarray(self.mean, dtype=float)
        if m.shape != (self.dim,) or not np.all(np.isfinite(m)):
            raise SpecError("mean must be a finite vector of length dim")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "mean", m)


@dataclass(frozen=True, eq=False)
class SimplicialDist:
    """Simplicial distribution: radial * (uniform point on the unit L1 simplex)."""

    dim: int
    radial: RadialLaw

    def __post_init__(self):
        if self.dim < 1:
            raise SpecError("dimension must be >= 1")


def sample_sphere(dim: int, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """n points uniform on the unit Euclidean sphere in R^dim."""
    if dim < 1 or n < 1:
        raise SpecError("sample_sphere needs dim >= 1 and n >= 1")
    gen = _rng.stream(seed, stream)
    z = _rng.standard_normals(gen, n * dim).reshape(n, dim)
    norms = np.linalg.norm(z, axis=1, keepdims=True)
    # a Box-Muller normal vector is never exactly zero, but guard anyway
    norms = np.where(norms == 0.0, 1.0, norms)
    return z / norms


def sample_simplex(dim: int, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """n points uniform on the unit L1 simplex (Dirichlet(1,...,1))."""
    if dim < 1 or n < 1:
        raise SpecError("sample_simplex needs dim >= 1 and n >= 1")
    gen = _rng.stream(seed, stream)
    e = -np.log1p(-gen.random((n, dim)))  # unit-rate exponentials
    e = np.maximum(e, 1e-300)
    return e / e.sum(axis=1, keepdims=True)


def sample(dist, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """n draws from an elliptical or simplicial distribution."""
    if n < 1:
        raise SpecError("sample needs n >= 1")
    if isinstance(dist, EllipticalDist):
        u = sample_sphere(dist.dim, n, seed, stream)
        gen = _rng.stream(seed, stream + 1)
        radii = dist.radial.quantile(_rng.uniform_open(gen, n))
        return dist.mean + radii[:, None] * (u @ dist.scale_root.entries.T)
    if isinstance(dist, SimplicialDist):
        u = sample_simplex(dist.dim, n, seed, stream)
        gen = _rng.stream(seed, stream + 1)
        radii = dist.radial.quantile(_rng.uniform_open(gen, n))
        return radii[:, None] * u
    raise SpecError(f"cannot sample object of type {type(dist).__name__}")


def covariance(dist: EllipticalDist) -> SpdMatrix:
    """E[R^2]/dim * scale_root scale_root^T."""
    factor = dist.radial.second_moment / dist.dim
    a = dist.scale_root.entries
    return spd_from_array(factor * (a @ a.T))


def dirichlet_second_moment(dim: int) -> np.ndarray:
    """E[U U^T] for U ~ Dirichlet(1,...,1): 2/(d(d+1)) on the diagonal,
    1/(d(d+1)) off it."""
    off = 1.0 / (dim * (dim + 1))
    return np.full((dim, dim), off) + np.eye(dim) * off


def simplicial_moments(dist: SimplicialDist) -> tuple[np.ndarray, np.ndarray]:
    """(mean vector, covariance matrix) of a simplicial distribution.

    Cov = E[R^2] E[UU^T] - (E[R]^2/d^2) W with W the all-ones matrix.
    """
    d = dist.dim
    m1 = dist.radial.mean
    m2 = dist.radial.second_moment
    mean_vec = np.full(d, m1 / d)
    cov = m2 * dirichlet_second_moment(d) - (m1 * m1 / (d * d)) * np.ones((d, d))
    return mean_vec, cov


# ---------------------------------------------------------------------------
# JSON distribution specs
# ---------------------------------------------------------------------------

def dist_from_spec(obj, base_dir=None):
    """Build a distribution from its JSON spec dict."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise SpecError("distribution spec must be an object with a 'type' field")
    kind = obj["type"]
    try:
        if kind == "elliptical":
            dim = int(obj["dim"])
            scale = spd_from_array(obj["scale"])
            if obj.get("is_sigma", False):
                scale = spd_sqrt(scale)
            mean = np.asarray(obj.get("mean", np.zeros(dim)), dtype=float)
            radial = law_from_spec(obj["radial"], base_dir)
            return EllipticalDist(dim=dim, mean=mean, scale_root=scale, radial=radial)
        if kind == "simplicial":
            return SimplicialDist(dim=int(obj["dim"]),
                                  radial=law_from_spec(obj["radial"], base_dir))
    except KeyError as exc:
        raise SpecError(f"distribution spec of type '{kind}' is missing field {exc}") from exc
    raise SpecError(f"unknown distribution type '{kind}'")


def dist_to_spec(dist) -> dict:
    """JSON spec dict for a distribution (scale emitted as the root A)."""
    if isinstance(dist, EllipticalDist):
        return {
            "type": "elliptical",
            "dim": dist.dim,
            "mean": [float(x) for x in dist.mean],
            "scale": [[float(x) for x in row] for row in dist.scale_root.entries],
            "is_sigma": False,
            "radial": law_to_spec(dist.radial),
        }
    if isinstance(dist, SimplicialDist):
        return {"type": "simplicial", "dim": dist.dim, "radial": law_to_spec(dist.radial)}
    raise SpecError(f"cannot serialize distribution of type {type(dist).__name__}")
