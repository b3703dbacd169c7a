import numpy as np
import pytest

from bandrec import matrices, spectra, symbols, transform
from bandrec.matrices import FiniteMatrix
from bandrec.reconstruct import (capacitance_eigenpairs_oracle, compare_to_symbol,
                                 detect_gaps, reconstruct_bands, run_scenario,
                                 tridiagonal_eigenpairs_oracle)

MONOMER = symbols.nearest_neighbour_symbol(2.0, -1.0)
DIMER = symbols.dimer_symbol(1.0, 2.0)


def test_tridiagonal_oracle_matches_eigh():
    for m in (4, 9):
        oracle = tridiagonal_eigenpairs_oracle(2.0, -1.0, m)
        eig = spectra.hermitian_eigen(matrices.toeplitz_matrix(MONOMER, m))
        assert np.max(np.abs(oracle.values - eig.values)) < 1e-10
        gram = oracle.vectors.T @ oracle.vectors
        assert np.max(np.abs(gram - np.eye(m))) < 1e-10
        for i in range(m):
            overlap = abs(np.vdot(oracle.vectors[:, i], eig.vectors[:, i]))
            assert abs(overlap - 1.0) < 1e-10


def test_tridiagonal_oracle_sorted_for_positive_coupling():
    oracle = tridiagonal_eigenpairs_oracle(0.0, 1.0, 6)
    assert np.all(np.diff(oracle.values) > 0)
    T = matrices.toeplitz_matrix(symbols.nearest_neighbour_symbol(0.0, 1.0), 6)
    assert np.max(np.abs(oracle.values - np.linalg.eigvalsh(T.data))) < 1e-10


def test_tridiagonal_oracle_even_index_quasiperiodicity_drift():
    # the sine family's even-index recovery is only asymptotically exact:
    # its frequency grid is pinned to m+1 while the transform bins use m
    worst = {}
    for m in (20, 40, 80):
        oracle = tridiagonal_eigenpairs_oracle(2.0, -1.0, m)
        errs = [abs(transform.discrete_quasiperiodicity(oracle.vectors[:, s - 1], 1) - np.pi * s / m)
                for s in range(2, m + 1, 2)]
        worst[m] = max(errs)
    assert worst[20] < 6e-2
    assert worst[20] > worst[40] > worst[80]


def test_capacitance_oracle_matches_eigh():
    for m in (5, 12, 33):
        oracle = capacitance_eigenpairs_oracle(2.0, -1.0, m)
        M = matrices.capacitance_1d(2.0, -1.0, -1.0, m)
        eig = spectra.hermitian_eigen(M)
        assert np.max(np.abs(oracle.values - eig.values)) < 1e-10
        for i in range(m):
            assert spectra.residual(M, float(oracle.values[i]), oracle.vectors[:, i]) < 1e-10
        gram = oracle.vectors.T @ oracle.vectors
        assert np.max(np.abs(gram - np.eye(m))) < 1e-10


def test_capacitance_oracle_even_index_exact():
    for m in (20, 40):
        oracle = capacitance_eigenpairs_oracle(2.0, -1.0, m)
        for s in range(2, m, 2):
            q = transform.discrete_quasiperiodicity(oracle.vectors[:, s], 1)
            assert abs(q - np.pi * s / m) < 1e-12


def test_reconstruct_bands_circulant_exact():
    C = matrices.circulant_matrix(MONOMER, 16)
    points = reconstruct_bands(C, 1)
    assert [p.index for p in points] == list(range(16))
    assert all(p1.lam <= p2.lam for p1, p2 in zip(points, points[1:]))
    targets = np.abs(transform.brillouin_sample(16).alphas)
    for p in points:
        assert abs(p.lam - (2.0 - 2.0 * np.cos(p.alpha_est))) < 1e-10
        assert np.min(np.abs(targets - p.alpha_est)) < 1e-10
        assert 0.0 <= p.alpha_est <= np.pi


def test_reconstruct_bands_jobs_deterministic():
    C = matrices.circulant_matrix(MONOMER, 12)
    seq = reconstruct_bands(C, 1, jobs=1)
    par = reconstruct_bands(C, 1, jobs=4)
    assert [(p.index, p.alpha_est, p.lam) for p in seq] == \
           [(p.index, p.alpha_est, p.lam) for p in par]


def test_reconstruct_bands_one_by_one_matrix():
    M = FiniteMatrix(data=np.array([[1.5]]), hermitian=True)
    points = reconstruct_bands(M, 1)
    assert len(points) == 1
    assert points[0].alpha_est == 0.0 and points[0].lam == 1.5


def test_reconstruct_bands_rejects_bad_k():
    with pytest.raises(ValueError):
        reconstruct_bands(matrices.circulant_matrix(MONOMER, 8), 0)


def test_compare_to_symbol_circulant():
    bands = symbols.band_functions(MONOMER, 512)
    points = reconstruct_bands(matrices.circulant_matrix(MONOMER, 16), 1)
    stats = compare_to_symbol(points, bands)
    assert stats.bulk_max < 1e-10
    assert all(p.band_error is not None for p in points)


def test_compare_to_symbol_capacitance_m80():
    bands = symbols.band_functions(MONOMER, 512)
    m = 80
    points = reconstruct_bands(matrices.capacitance_1d(2.0, -1.0, -1.0, m), 1)
    stats = compare_to_symbol(points, bands, edge_margin=2 * np.pi * 4 / m)
    # even-index eigenvectors are recovered exactly; the odd-index fold
    # leakage contributes ~3.5/m in alpha, measured 7.0e-2 here
    assert stats.bulk_max < 7.5e-2
    even_errors = [p.band_error for p in points if p.index % 2 == 0]
    assert max(even_errors) < 1e-4


def test_compare_to_symbol_empty_points():
    bands = symbols.band_functions(MONOMER, 64)
    with pytest.raises(ValueError):
        compare_to_symbol([], bands)


def test_detect_gaps_monomer_none():
    bands = symbols.band_functions(MONOMER, 128)
    report = detect_gaps(bands, np.array([0.5, 1.0]))
    assert report.gaps == [] and report.gap_modes == []


def test_detect_gaps_dimer():
    bands = symbols.band_functions(DIMER, 256)
    assert len(detect_gaps(bands, np.array([])).gaps) == 1
    lo, hi = detect_gaps(bands, np.array([])).gaps[0]
    assert abs(lo - 1.0) < 1e-3 and abs(hi - 2.0) < 1e-3

    chain = matrices.chain_capacitance([1.0 if i % 2 == 1 else 2.0 for i in range(1, 40)])
    vals = np.linalg.eigvalsh(chain.data)
    report = detect_gaps(bands, vals, margin=1e-3)
    assert report.gap_modes == []


def test_detect_gaps_ssh_single_mode():
    bands = symbols.band_functions(DIMER, 256)
    M = matrices.ssh_matrix(m=20, **matrices.ssh_params_from_spacings(1.0, 2.0))
    points = reconstruct_bands(M, 2)
    report = detect_gaps(bands, np.array([p.lam for p in points]), margin=1e-6, points=points)
    assert len(report.gap_modes) == 1
    mode = report.gap_modes[0]
    assert report.gaps[0][0] < mode.lam < report.gaps[0][1]
    assert mode.alpha_est == points[mode.index].alpha_est


def test_detect_gaps_trimer_two_gaps():
    bands = symbols.band_functions(symbols.cell_chain_symbol([1.0, 2.0, 3.0]), 256)
    values = np.array([0.5, 0.55, 1.5, 2.0, 2.5])
    report = detect_gaps(bands, values)
    assert len(report.gaps) == 2
    assert report.gaps == sorted(report.gaps)
    assert report.gaps[0][1] <= report.gaps[1][0]
    assert len(report.gap_modes) == 4  # 2.5 sits inside the top band
    for mode in report.gap_modes:
        assert any(lo < mode.lam < hi for lo, hi in report.gaps)


def test_reconstruct_bands_propagates_eigensolver_error():
    M = FiniteMatrix(data=np.array([[0.0, 1.0], [0.0, 0.0]]), hermitian=False)
    with pytest.raises(ValueError):
        reconstruct_bands(M, 1)


def test_run_scenario_periodic_symbol_reports_tail():
    result = run_scenario({"scenario": "periodic_symbol", "m": 20})
    assert result.params["truncation_tail_bound"] < 1e-10


def test_detect_gaps_margin_shrinks():
    bands = symbols.band_functions(DIMER, 256)
    report = detect_gaps(bands, np.array([1.05, 1.5]), margin=0.1)
    assert len(report.gap_modes) == 1  # 1.05 now outside the shrunk gap
    with pytest.raises(ValueError):
        detect_gaps(bands, np.array([]), margin=-1.0)


def test_run_scenario_periodic_nn():
    result = run_scenario({"scenario": "periodic_nn", "m": 80})
    assert result.k == 1 and result.matrix.n == 80
    assert len(result.points) == 80
    assert result.stats.bulk_max < 7.5e-2
    assert result.gap_report.gap_modes == []
    summary = result.summary()
    assert summary["n_points"] == 80 and summary["n_gaps"] == 0


def test_run_scenario_periodic_symbol_defaults():
    result = run_scenario({"scenario": "periodic_symbol", "m": 30})
    assert result.matrix.kind == "toeplitz"
    assert result.stats.bulk_max < 0.18


def test_run_scenario_ssh_defaults():
    result = run_scenario({"scenario": "ssh"})
    assert result.matrix.n == 81
    assert len(result.gap_report.gap_modes) == 1
    gi = result.gap_report.gap_modes[0].index
    assert result.points[gi].localized
    others = [p.band_error for p in result.points if p.index != gi]
    assert max(others) < 0.1


def test_run_scenario_dislocated_localized_equals_gap():
    result = run_scenario({"scenario": "dislocated"})
    gap_set = {g.index for g in result.gap_report.gap_modes}
    loc_set = {p.index for p in result.points if p.localized}
    assert gap_set == loc_set and len(gap_set) == 1


def test_run_scenario_compact_defect_positive():
    result = run_scenario({"scenario": "compact_defect", "delta": 0.5})
    assert len(result.gap_report.gap_modes) >= 1
    assert all(result.points[g.index].localized for g in result.gap_report.gap_modes)


def test_run_scenario_compact_defect_negative_detaches_one_state():
    # a weakly localized state always detaches below the upper band for delta < 0
    result = run_scenario({"scenario": "compact_defect", "delta": -0.3})
    modes = result.gap_report.gap_modes
    assert len(modes) == 1
    assert 1.9 < modes[0].lam < 2.0
    assert result.stats.bulk_max < 0.1


def test_run_scenario_external_matrix(tmp_path):
    M = matrices.ssh_matrix(m=5, **matrices.ssh_params_from_spacings(1.0, 2.0))
    path = tmp_path / "ext.csv"
    matrices.save_matrix(M, path)
    result = run_scenario({"scenario": "external_matrix", "matrix": str(path), "k": 2})
    assert result.bands is None and result.stats is None
    assert len(result.points) == 21

    sym_path = tmp_path / "dimer.json"
    symbols.save_symbol(DIMER, sym_path)
    result2 = run_scenario({"scenario": "external_matrix", "matrix": str(path), "k": 2,
                            "symbol": str(sym_path)})
    assert result2.bands is not None
    assert len(result2.gap_report.gap_modes) == 1


def test_run_scenario_accepts_nested_params():
    result = run_scenario({"scenario": "periodic_nn", "params": {"m": 24}})
    assert result.matrix.n == 24


def test_run_scenario_rejects_unknown():
    with pytest.raises(ValueError):
        run_scenario({"scenario": "warp_drive"})
    with pytest.raises(ValueError):
        run_scenario({})


def test_scenario_error_stats_exclude_localized():
    result = run_scenario({"scenario": "ssh"})
    gi = result.gap_report.gap_modes[0].index
    assert result.stats.localized_count >= 1
    assert result.points[gi].band_error > result.stats.bulk_max
