import numpy as np
import pytest

from bandrec import matrices, symbols, transform
from bandrec.spectra import (concentration_check, degenerate_clusters, hermitian_eigen,
                             ipr_localized_flags, localization_metrics, near_far_split,
                             residual)
from bandrec.matrices import FiniteMatrix


def _random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return FiniteMatrix(data=(A + A.conj().T) / 2, hermitian=True)


def test_hermitian_eigen_diagonal():
    eig = hermitian_eigen(FiniteMatrix(data=np.diag([3.0, 1.0, 2.0]), hermitian=True))
    assert np.allclose(eig.values, [1, 2, 3])
    perm = np.abs(eig.vectors)
    assert np.allclose(perm, np.eye(3)[:, [1, 2, 0]])


def test_hermitian_eigen_tridiagonal_closed_form():
    sym = symbols.nearest_neighbour_symbol(2.0, -1.0)
    eig = hermitian_eigen(matrices.toeplitz_matrix(sym, 4))
    expect = np.sort(2.0 - 2.0 * np.cos(np.arange(1, 5) * np.pi / 5))
    assert np.max(np.abs(eig.values - expect)) < 1e-12
    q = np.arange(1, 5)
    for i, s in enumerate(range(1, 5)):
        sine = np.sin(q * s * np.pi / 5)
        sine = sine / np.linalg.norm(sine)
        overlap = abs(np.vdot(sine, eig.vectors[:, i]))
        assert abs(overlap - 1.0) < 1e-12


def test_hermitian_eigen_reconstruction():
    M = _random_hermitian(8, 1)
    eig = hermitian_eigen(M)
    recon = (eig.vectors * eig.values) @ eig.vectors.conj().T
    assert np.linalg.norm(M.data - recon) < 1e-9
    gram = eig.vectors.conj().T @ eig.vectors
    assert np.max(np.abs(gram - np.eye(8))) < 1e-9
    assert np.all(np.diff(eig.values) >= 0)


def test_hermitian_eigen_rejects_non_hermitian():
    M = FiniteMatrix(data=np.array([[0.0, 1.0], [0.0, 0.0]]), hermitian=False)
    with pytest.raises(ValueError):
        hermitian_eigen(M)


def test_residual_exact_and_shifted():
    M = _random_hermitian(6, 2)
    eig = hermitian_eigen(M)
    u = eig.vectors[:, 3]
    assert residual(M, float(eig.values[3]), u) < 1e-9
    t = 0.37
    assert abs(residual(M, float(eig.values[3]) + t, u) - t) < 1e-12


def test_residual_dimension_mismatch():
    M = _random_hermitian(5, 3)
    with pytest.raises(ValueError):
        residual(M, 0.0, np.ones(4) / 2.0)


def test_residual_banded_truncation_bound():
    sym = symbols.exponential_symbol()
    m = 40
    T = matrices.toeplitz_matrix(sym, m)
    eig = hermitian_eigen(T)
    for r in (3, 6):
        trunc = matrices.toeplitz_matrix(symbols.banded_truncation(sym, r), m)
        bound = symbols.symbol_difference_sup_norm(sym, symbols.banded_truncation(sym, r), 256)
        worst = max(residual(trunc, float(eig.values[i]), eig.vectors[:, i])
                    for i in range(m))
        assert worst <= bound + 1e-12


def test_near_far_split_two_level():
    eig = hermitian_eigen(FiniteMatrix(data=np.diag([0.0, 1.0]), hermitian=True))
    u = np.array([np.sqrt(0.9999), 0.01])
    split = near_far_split(eig, 0.0, 0.2, u)
    assert abs(split.perp_norm - 0.01) < 1e-12
    assert split.parallel_norm > np.sqrt(1 - 0.04)
    assert np.linalg.norm(split.u_parallel + split.u_perp - u) < 1e-12
    assert abs(np.vdot(split.u_parallel, split.u_perp)) < 1e-10


def test_near_far_split_exact_eigenvector():
    M = _random_hermitian(7, 5)
    eig = hermitian_eigen(M)
    split = near_far_split(eig, float(eig.values[2]) + 0.01, 0.05, eig.vectors[:, 2])
    assert split.perp_norm < 1e-12


def test_near_far_lemma_instance():
    rng = np.random.default_rng(8)
    M = _random_hermitian(12, 8)
    eig = hermitian_eigen(M)
    eps = 0.25
    i, j = 4, 11
    c = 1e-3
    u = np.sqrt(1 - c * c) * eig.vectors[:, i] + c * eig.vectors[:, j]
    lam_eps = float(eig.values[i])
    assert abs(eig.values[j] - lam_eps) > eps
    assert residual(M, lam_eps, u) < eps ** 2
    split = near_far_split(eig, lam_eps, eps, u)
    assert split.perp_norm < eps
    assert split.parallel_norm > np.sqrt(1 - eps ** 2)


def test_near_far_split_norm_identity():
    rng = np.random.default_rng(21)
    M = _random_hermitian(15, 21)
    eig = hermitian_eigen(M)
    for _ in range(20):
        u = rng.normal(size=15) + 1j * rng.normal(size=15)
        u /= np.linalg.norm(u)
        split = near_far_split(eig, float(rng.normal()), float(rng.uniform(0.1, 2.0)), u)
        total = split.parallel_norm ** 2 + split.perp_norm ** 2
        assert abs(total - 1.0) < 1e-10


def test_near_far_split_requires_positive_eps():
    eig = hermitian_eigen(FiniteMatrix(data=np.eye(2), hermitian=True))
    with pytest.raises(ValueError):
        near_far_split(eig, 1.0, 0.0, np.array([1.0, 0.0]))


def test_concentration_exact_eigenvector():
    m, s = 16, 5
    alpha = 2 * np.pi * s / m
    u = transform.quasiperiodic_extension([1.0], alpha, m)
    mass_in, mass_out = concentration_check(u, 1, alpha, 0.1)
    assert abs(mass_in - 1.0) < 1e-12 and mass_out < 1e-12
    mass_in2, _ = concentration_check(u, 1, alpha + 1.5, 0.1)
    assert mass_in2 < 1e-12


def test_concentration_masses_sum_to_one():
    rng = np.random.default_rng(12)
    u = rng.normal(size=24) + 1j * rng.normal(size=24)
    u /= np.linalg.norm(u)
    mass_in, mass_out = concentration_check(u, 2, 1.0, 0.5)
    assert abs(mass_in + mass_out - 1.0) < 1e-10


def test_concentration_pseudo_eigenpair():
    sym = symbols.nearest_neighbour_symbol(2.0, -1.0)
    m, s = 32, 8
    C = matrices.circulant_matrix(sym, m)
    eig = hermitian_eigen(C)
    alpha0 = 2 * np.pi * s / m
    lam0 = 2.0 - 2.0 * np.cos(alpha0)
    slope = abs(2.0 * np.sin(alpha0))
    eps = 0.05
    delta = 4.0 * eps / slope
    i = int(np.argmin(np.abs(eig.values - lam0)))
    far = [j for j in range(m) if abs(eig.values[j] - lam0) > 1.0]
    j = far[0]
    c = eps ** 2 / abs(eig.values[j] - lam0)
    u = np.sqrt(1 - c * c) * eig.vectors[:, i].astype(complex) + c * eig.vectors[:, j]
    assert residual(C, lam0, u) <= eps ** 2
    mass_in, mass_out = concentration_check(u, 1, alpha0, delta)
    assert mass_out < eps ** 2
    assert mass_in > 1 - eps ** 2


def test_concentration_rejects_bad_delta():
    u = np.ones(4) / 2.0
    with pytest.raises(ValueError):
        concentration_check(u, 1, 0.5, 0.0)


def test_localization_metrics_basis_and_uniform():
    e = np.zeros(9)
    e[4] = 1.0
    assert localization_metrics(e) == (1.0, 1.0)
    m = 25
    u = np.ones(m) / np.sqrt(m)
    sup, ipr = localization_metrics(u)
    assert abs(sup - 1 / np.sqrt(m)) < 1e-14
    assert abs(ipr - 1 / m) < 1e-14


def test_localization_ssh_gap_mode_stands_out():
    M = matrices.ssh_matrix(m=20, **matrices.ssh_params_from_spacings(1.0, 2.0))
    eig = hermitian_eigen(M)
    sups = np.array([localization_metrics(eig.vectors[:, i])[0] for i in range(eig.n)])
    gap = [i for i, v in enumerate(eig.values) if 1.0 + 1e-6 < v < 2.0 - 1e-6]
    assert len(gap) == 1
    bulk_median = np.median(np.delete(sups, gap[0]))
    assert sups[gap[0]] > 3.0 * bulk_median


def test_ipr_localized_flags():
    iprs = [0.01] * 20 + [0.5]
    flags = ipr_localized_flags(iprs)
    assert flags[-1] and not np.any(flags[:-1])


def test_degenerate_clusters():
    values = np.array([0.0, 0.0, 1.0, 2.0, 2.0 + 1e-12])
    clusters = degenerate_clusters(values, scale=2.0)
    assert clusters == [[0, 1], [2], [3, 4]]
