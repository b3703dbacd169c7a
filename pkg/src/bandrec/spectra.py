"""Hermitian eigendecompositions and spectral diagnostics.

Beyond the plain decomposition this provides the residual of a candidate
eigenpair, the orthogonal split of a vector into near/far eigenspace
components around a reference eigenvalue, the projection-mass concentration
inside a quasiperiodicity window, and localization measures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrices import FiniteMatrix
from .transform import polarize, projection_profile, _checked_unit

DEGENERACY_REL_TOL = 1e-8
IPR_LOCALIZATION_FACTOR = 10.0


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with orthonormal eigenvectors as matching columns."""

    values: np.ndarray    # (n,) real, ascending
    vectors: np.ndarray   # (n, n) complex or real, column i pairs with values[i]
    source_dim: int

    def __post_init__(self):
        self.values.setflags(write=False)
        self.vectors.setflags(write=False)

    @property
    def n(self) -> int:
        return self.values.size


def _matrix_data(M) -> np.ndarray:
    return M.data if isinstance(M, FiniteMatrix) else np.asarray(M)


def hermitian_eigen(M: FiniteMatrix) -> EigenDecomposition:
    """Full decomposition of a Hermitian matrix, values ascending, phases polarized."""
    if isinstance(M, FiniteMatrix) and not M.hermitian:
        raise ValueError("hermitian_eigen needs a matrix with the hermitian flag set")
    data = _matrix_data(M)
    vals, vecs = np.linalg.eigh(data)
    vecs = np.array([polarize(vecs[:, i]) for i in range(vals.size)]).T
    if not np.iscomplexobj(data):
        vecs = np.real_if_close(vecs, tol=1)
    return EigenDecomposition(values=vals, vectors=vecs, source_dim=vals.size)


def residual(M, lam: float, u) -> float:
    """||M u - lam u|| for a unit vector u."""
    data = _matrix_data(M)
    u = np.asarray(u, dtype=complex)
    if u.size != data.shape[0]:
        raise ValueError(f"vector length {u.size} does not match matrix size {data.shape[0]}")
    u = _checked_unit(u, "residual")
    return float(np.linalg.norm(data @ u - lam * u))


@dataclass(frozen=True)
class NearFarSplit:
    """Orthogonal components of a vector in the eigenspaces near/far from a value."""

    u_parallel: np.ndarray
    u_perp: np.ndarray
    epsilon: float
    center: float

    @property
    def parallel_norm(self) -> float:
        return float(np.linalg.norm(self.u_parallel))

    @property
    def perp_norm(self) -> float:
        return float(np.linalg.norm(self.u_perp))


def near_far_split(eig: EigenDecomposition, lambda_eps: float, eps: float, u) -> NearFarSplit:
    """Project u onto the span of eigenvectors with |lambda_i - lambda_eps| <= eps."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    u = np.asarray(u, dtype=complex)
    near = np.abs(eig.values - lambda_eps) <= eps
    V = eig.vectors[:, near]
    u_par = V @ (V.conj().T @ u)
    return NearFarSplit(u_parallel=u_par, u_perp=u - u_par, epsilon=eps, center=lambda_eps)


def concentration_check(u, k: int, alpha0: float, delta: float) -> tuple[float, float]:
    """Projection mass inside and outside the symmetric window around +-alpha0.

    The window is the open set (alpha0-delta, alpha0+delta) united with its
    mirror image, intersected with the bin grid; the two masses sum to one.
    """
    if delta <= 0:
        raise ValueError(f"window width must be positive, got {delta}")
    u = _checked_unit(u, "concentration_check")
    alphas, masses = projection_profile(u, k)
    inside = (np.abs(alphas - alpha0) < delta) | (np.abs(alphas + alpha0) < delta)
    mass_in = float(np.sum(masses[inside]))
    mass_out = float(np.sum(masses[~inside]))
    return mass_in, mass_out


def localization_metrics(u) -> tuple[float, float]:
    """(sup-norm, inverse participation ratio) of a unit vector."""
    u = _checked_unit(u, "localization_metrics")
    mags = np.abs(u)
    return float(mags.max()), float(np.sum(mags ** 4))


def ipr_localized_flags(iprs) -> np.ndarray:
    """Flag vectors whose inverse participation ratio exceeds 10x the spectrum median."""
    iprs = np.asarray(iprs, dtype=float)
    return iprs > IPR_LOCALIZATION_FACTOR * np.median(iprs)


def degenerate_clusters(values, scale: float) -> list[list[int]]:
    """Group indices of numerically coincident eigenvalues.

    Two consecutive eigenvalues belong to one cluster when their gap is
    below DEGENERACY_REL_TOL times the given magnitude scale.
    """
    values = np.asarray(values, dtype=float)
    tol = DEGENERACY_REL_TOL * max(scale, 1e-300)
    clusters, current = [], [0]
    for i in range(1, values.size):
        if values[i] - values[i - 1] < tol:
            current.append(i)
        else:
            clusters.append(current)
            current = [i]
    clusters.append(current)
    return clusters
