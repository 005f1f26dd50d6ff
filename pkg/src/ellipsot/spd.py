"""Symmetric positive-(semi)definite matrix algebra.

Square roots and inverse square roots go through a cached symmetric
eigendecomposition; the PSD Monge matrix B(BAAB)^(-1/2)B and the trace
functionals used by the distance formulas live here too.

Note on the two trace functionals: trace_product is the literal
sum_ij A_ij B_ji, while nuclear_trace is tr sqrt(ABBA) (the sum of the
singular values of AB). They agree when A and B commute and differ
otherwise; the transport distances require the nuclear form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    NotPositiveDefiniteError,
    NotSymmetricError,
    SingularMatrixError,
    SpecError,
)

_SYM_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpdMatrix:
    """Symmetric positive-semidefinite matrix.

    Input is symmetrized when the asymmetry is below 1e-12 relative and
    rejected otherwise; eigenvalues must be nonnegative up to roundoff.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise SpecError("SpdMatrix needs a square 2-d array")
        if not np.all(np.isfinite(arr)):
            raise SpecError("SpdMatrix entries must be finite")
        scale = np.max(np.abs(arr))
        asym = np.max(np.abs(arr - arr.T))
        if scale > 0 and asym > _SYM_RTOL * scale:
            raise NotSymmetricError(
                f"matrix asymmetry {asym:.3e} exceeds {_SYM_RTOL:.0e} relative")
        arr = 0.5 * (arr + arr.T)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        lam = self.eigenvalues
        lam_max = lam[0] if lam[0] > 0 else 0.0
        if lam[-1] < -1e-10 * max(lam_max, 1.0):
            raise NotPositiveDefiniteError(
                f"eigenvalue {lam[-1]:.3e} negative beyond tolerance")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def _eig(self) -> tuple[np.ndarray, np.ndarray]:
        lam, vec = np.linalg.eigh(self.entries)
        return lam[::-1].copy(), vec[:, ::-1].copy()  # descending

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eig[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eig[1]

    @property
    def rank_tolerance(self) -> float:
        return self.dim * np.finfo(float).eps * max(self.eigenvalues[0], 0.0)

    def is_positive_definite(self) -> bool:
        return self.eigenvalues[-1] > self.rank_tolerance

    def require_positive_definite(self) -> "SpdMatrix":
        if not self.is_positive_definite():
            raise SingularMatrixError(
                f"smallest eigenvalue {self.eigenvalues[-1]:.3e} is below the "
                f"rank tolerance {self.rank_tolerance:.3e}")
        return self

    def _rebuild(self, lam: np.ndarray) -> "SpdMatrix":
        vec = self.eigenvectors
        return SpdMatrix(entries=(vec * lam) @ vec.T)

    def matmul(self, other: "SpdMatrix") -> np.ndarray:
        return self.entries @ other.entries


def spd_from_array(arr) -> SpdMatrix:
    return SpdMatrix(entries=np.asarray(arr, dtype=float))


def identity(dim: int) -> SpdMatrix:
    return SpdMatrix(entries=np.eye(dim))


def sym_eig(s: SpdMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors."""
    return s.eigenvalues.copy(), s.eigenvectors.copy()


def spd_sqrt(s: SpdMatrix) -> SpdMatrix:
    """Principal square root; tiny negative eigenvalues are clamped to zero."""
    return s._rebuild(np.sqrt(np.maximum(s.eigenvalues, 0.0)))


def spd_inv_sqrt(s: SpdMatrix) -> SpdMatrix:
    """Inverse principal square root; requires full rank."""
    s.require_positive_definite()
    lam = np.maximum(s.eigenvalues, s.rank_tolerance)
    return s._rebuild(1.0 / np.sqrt(lam))


def spd_inverse(s: SpdMatrix) -> SpdMatrix:
    """Matrix inverse; requires full rank."""
    s.require_positive_definite()
    lam = np.maximum(s.eigenvalues, s.rank_tolerance)
    return s._rebuild(1.0 / lam)


def monge_matrix(a: SpdMatrix, b: SpdMatrix) -> SpdMatrix:
    """PSD matrix M = B (B A A B)^(-1/2) B mapping scale root a onto b."""
    if a.dim != b.dim:
        raise SpecError("monge_matrix needs matrices of equal dimension")
    a.require_positive_definite()
    b.require_positive_definite()
    baab = spd_from_array(b.entries @ a.entries @ a.entries @ b.entries)
    core = spd_inv_sqrt(baab)
    return spd_from_array(b.entries @ core.entries @ b.entries)


def trace_product(a: SpdMatrix, b: SpdMatrix) -> float:
    """Literal trace of the matrix product, sum_ij A_ij B_ji."""
    if a.dim != b.dim:
        raise SpecError("trace_product needs matrices of equal dimension")
    return float(np.sum(a.entries * b.entries.T))


def nuclear_trace(a: SpdMatrix, b: SpdMatrix) -> float:
    """tr sqrt(A B B A): the sum of singular values of AB.

    This is the cross term of the transport distances; it equals
    trace_product(a, b) exactly when a and b commute.
    """
    if a.dim != b.dim:
        raise SpecError("nuclear_trace needs matrices of equal dimension")
    abba = spd_from_array(a.entries @ b.entries @ b.entries @ a.entries)
    return float(np.sum(np.sqrt(np.maximum(abba.eigenvalues, 0.0))))
