"""Closed-form transport maps and squared W2 costs between simplicial and
elliptical distributions.

Four map variants:

  * simplicial radial: x -> (F_S^-1(F_R(|x|_1)) / |x|_1) x
  * linear PSD:        x -> M x with M = B(BAAB)^(-1/2)B
  * elliptical radial: x -> (F_S^-1(F_R(|A^-1 x|_2)) / |A^-1 x|_2) x
  * composed:          x -> (F_S^-1(F_R(|A^-1 x|_2)) / |A^-1 x|_2) M x

plus the Student-t specialization, which evaluates the same composed map
through F-distribution CDF/quantile calls and must agree with the
generic path pointwise.

Each map pushes the source forward to the target exactly (checked by the
verify module); its quadratic coupling cost is the closed form returned
by w2_squared. Maps recentre: they act on source-centered coordinates
and re-add the target mean; w2_squared adds the squared mean gap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import EllipticalDist, SimplicialDist
from .errors import SpecError, UnsupportedPairError
from .radial import RadialLaw, cross_moment, radial_quantile_map
from .spd import SpdMatrix, monge_matrix, nuclear_trace, spd_inverse, trace_product
from .special import betainc, betainc_inv


def _as_points(points, dim: int) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise SpecError(f"points must have {dim} columns")
    return pts


def _radial_factors(law_r: RadialLaw, law_s: RadialLaw, radii: np.ndarray) -> np.ndarray:
    """F_S^-1(F_R(r)) / r with the origin mapped to 0."""
    out = np.zeros_like(radii)
    pos = radii > 0.0
    if pos.any():
        out[pos] = radial_quantile_map(law_r, law_s, radii[pos]) / radii[pos]
    return out


class TransportMap:
    """Base for the map variants; application preserves row order."""

    dim: int

    def apply(self, points) -> np.ndarray:
        pts = _as_points(points, self.dim)
        return self._apply(pts)

    def _apply(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class SimplicialRadialMap(TransportMap):
    dim: int
    law_r: RadialLaw
    law_s: RadialLaw

    def _apply(self, pts):
        radii = np.abs(pts).sum(axis=1)
        return pts * _radial_factors(self.law_r, self.law_s, radii)[:, None]


@dataclass(frozen=True, eq=False)
class LinearPsdMap(TransportMap):
    dim: int
    matrix: SpdMatrix
    source_mean: np.ndarray
    target_mean: np.ndarray

    def _apply(self, pts):
        centered = pts - self.source_mean
        return centered @ self.matrix.entries.T + self.target_mean


@dataclass(frozen=True, eq=False)
class EllipticalRadialMap(TransportMap):
    dim: int
    a_inv: SpdMatrix
    law_r: RadialLaw
    law_s: RadialLaw
    source_mean: np.ndarray
    target_mean: np.ndarray

    def _apply(self, pts):
        centered = pts - self.source_mean
        radii = np.linalg.norm(centered @ self.a_inv.entries.T, axis=1)
        factors = _radial_factors(self.law_r, self.law_s, radii)
        return centered * factors[:, None] + self.target_mean


@dataclass(frozen=True, eq=False)
class ComposedMap(TransportMap):
    dim: int
    a_inv: SpdMatrix
    law_r: RadialLaw
    law_s: RadialLaw
    matrix: SpdMatrix
    source_mean: np.ndarray
    target_mean: np.ndarray

    def _apply(self, pts):
        centered = pts - self.source_mean
        radii = np.linalg.norm(centered @ self.a_inv.entries.T, axis=1)
        factors = _radial_factors(self.law_r, self.law_s, radii)
        return (centered @ self.matrix.entries.T) * factors[:, None] + self.target_mean


@dataclass(frozen=True, eq=False)
class StudentTMap(TransportMap):
    """Composed map between multivariate t laws, evaluated through the
    F-distribution form sqrt(d F_y^-1(F_x(r^2/d))) / r."""

    dim: int
    dof_x: float
    dof_y: float
    a_inv: SpdMatrix
    matrix: SpdMatrix
    source_mean: np.ndarray
    target_mean: np.ndarray

    def _apply(self, pts):
        d = float(self.dim)
        centered = pts - self.source_mean
        radii = np.linalg.norm(centered @ self.a_inv.entries.T, axis=1)
        factors = np.zeros_like(radii)
        pos = radii > 0.0
        if pos.any():
            r = radii[pos]
            # F(d, dof) CDF/quantile via the regularized incomplete beta
            w = r * r / d
            level = betainc(d / 2.0, self.dof_x / 2.0, d * w / (d * w + self.dof_x))
            level = np.clip(level, 1e-300, 1.0 - 2.2e-16)
            x = betainc_inv(d / 2.0, self.dof_y / 2.0, level)
            w_y = self.dof_y * x / (d * (1.0 - x))
            factors[pos] = np.sqrt(d * w_y) / r
        return (centered @ self.matrix.entries.T) * factors[:, None] + self.target_mean


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _check_same_dim(source, target) -> None:
    if source.dim != target.dim:
        raise SpecError("source and target dimensions differ")


def simplicial_map(source: SimplicialDist, target: SimplicialDist) -> SimplicialRadialMap:
    """Radial L1-quantile map between simplicial distributions."""
    _check_same_dim(source, target)
    return SimplicialRadialMap(dim=source.dim, law_r=source.radial, law_s=target.radial)


def related_class_map(source: EllipticalDist, target: EllipticalDist) -> LinearPsdMap:
    """PSD map between ellipticals sharing one radial law."""
    _check_same_dim(source, target)
    if not (source.radial is target.radial or source.radial == target.radial):
        raise UnsupportedPairError(
            "related_class_map needs identical radial laws; use general_map")
    m = monge_matrix(source.scale_root, target.scale_root)
    return LinearPsdMap(dim=source.dim, matrix=m,
                        source_mean=source.mean, target_mean=target.mean)


def spherical_equiv_map(source: EllipticalDist, target: EllipticalDist) -> EllipticalRadialMap:
    """Whitened radial map between ellipticals sharing one scale root."""
    _check_same_dim(source, target)
    a, b = source.scale_root.entries, target.scale_root.entries
    gap = np.max(np.abs(a - b))
    if gap > 1e-10 * max(np.max(np.abs(a)), 1e-300):
        raise UnsupportedPairError(
            "spherical_equiv_map needs a common scale root; use general_map")
    return EllipticalRadialMap(dim=source.dim, a_inv=spd_inverse(source.scale_root),
                               law_r=source.radial, law_s=target.radial,
                               source_mean=source.mean, target_mean=target.mean)


def general_map(source: EllipticalDist, target: EllipticalDist) -> ComposedMap:
    """Composed radial-then-PSD map between arbitrary full-rank ellipticals."""
    _check_same_dim(source, target)
    return ComposedMap(dim=source.dim,
                       a_inv=spd_inverse(source.scale_root),
                       law_r=source.radial, law_s=target.radial,
                       matrix=monge_matrix(source.scale_root, target.scale_root),
                       source_mean=source.mean, target_mean=target.mean)


def t_map(source: EllipticalDist, target: EllipticalDist) -> StudentTMap:
    """Student-t specialization of general_map; both must carry t radial laws."""
    from .radial import TRadialLaw

    _check_same_dim(source, target)
    if not isinstance(source.radial, TRadialLaw) or not isinstance(target.radial, TRadialLaw):
        raise SpecError("t_map needs t radial laws on both sides")
    if source.radial.dim != source.dim or target.radial.dim != target.dim:
        raise SpecError("t radial law dimension must match the distribution dimension")
    return StudentTMap(dim=source.dim,
                       dof_x=source.radial.dof, dof_y=target.radial.dof,
                       a_inv=spd_inverse(source.scale_root),
                       matrix=monge_matrix(source.scale_root, target.scale_root),
                       source_mean=source.mean, target_mean=target.mean)


def auto_map(source, target) -> TransportMap:
    """Map for any supported pair: simplicial radial or elliptical composed."""
    if isinstance(source, SimplicialDist) and isinstance(target, SimplicialDist):
        return simplicial_map(source, target)
    if isinstance(source, EllipticalDist) and isinstance(target, EllipticalDist):
        return general_map(source, target)
    raise UnsupportedPairError(
        "no closed-form transport between a simplicial and an elliptical distribution")


def apply_map(tmap: TransportMap, points) -> np.ndarray:
    """Apply a transport map to a batch of points, preserving order."""
    return tmap.apply(points)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def w2_squared(source, target) -> float:
    """Squared quadratic-cost transport distance between two distributions.

    Simplicial pair: (E[R^2] + E[S^2] - 2 E[RS]) * 2/(d+1).
    Elliptical pair: (E[R^2] tr A^2 + E[S^2] tr B^2
                      - 2 E[RS] tr sqrt(ABBA)) / d + |mean gap|^2.
    E[RS] is the comonotone cross moment.
    """
    if isinstance(source, SimplicialDist) and isinstance(target, SimplicialDist):
        _check_same_dim(source, target)
        d = source.dim
        gap = (source.radial.second_moment + target.radial.second_moment
               - 2.0 * cross_moment(source.radial, target.radial))
        return max(gap, 0.0) * 2.0 / (d + 1)
    if isinstance(source, EllipticalDist) and isinstance(target, EllipticalDist):
        _check_same_dim(source, target)
        d = source.dim
        a, b = source.scale_root, target.scale_root
        val = (source.radial.second_moment * trace_product(a, a)
               + target.radial.second_moment * trace_product(b, b)
               - 2.0 * cross_moment(source.radial, target.radial) * nuclear_trace(a, b))
        mean_gap = float(np.sum((source.mean - target.mean) ** 2))
        return max(val, 0.0) / d + mean_gap
    raise UnsupportedPairError(
        "w2_squared supports simplicial-simplicial and elliptical-elliptical pairs only")


def w2(source, target) -> float:
    return float(np.sqrt(w2_squared(source, target)))
