import math

import numpy as np
import pytest

from conftest import multiset_distance, oracle_walk, unitarity_error
from honeycomb_search.lattice import KPoint, LatticeConfig, k_points
from honeycomb_search.spectral import (
    DegenerateKPointError,
    SpectralAnalysisError,
    _amplitudes,
    amplitudes_of_k,
    build_kblock,
    compute_A,
    compute_B,
    kspectrum,
    nu_eigenvectors,
    predict,
    sin2_theta_of_k,
    spectral_sums,
    spectrum_table,
    theta_of_k,
)
from honeycomb_search.walk import dense_operator, step_unperturbed

UNIFORM6 = np.ones(6) / math.sqrt(6)


def closed_form_eigs(k):
    th = theta_of_k(k)
    e = np.exp(1j * th)
    return np.array([1, -1, e, np.conj(e), -e, -np.conj(e)])


def test_origin_block_is_real_and_fixes_uniform():
    u = build_kblock(KPoint(0, 0, 5)).matrix
    assert np.abs(u.imag).max() == 0
    np.testing.assert_allclose(u @ UNIFORM6, UNIFORM6, atol=1e-15)


def test_blocks_unitary_m5():
    for k in k_points(LatticeConfig(5)):
        assert unitarity_error(build_kblock(k).matrix) < 1e-12


def test_block_pattern():
    u = build_kblock(KPoint(2, 3, 7)).matrix
    nz = np.abs(u) > 1e-15
    expected = np.array([[(r + c) % 2 == 1 for c in range(6)] for r in range(6)])
    np.testing.assert_array_equal(nz, expected)
    np.testing.assert_allclose(np.sort(np.unique(np.round(np.abs(u[nz]), 12))), [1 / 3, 2 / 3])


@pytest.mark.parametrize("m", [2, 3, 4])
def test_block_acts_like_walk_on_plane_waves(m):
    # plane wave |j, s; k> = sum_n exp(-i k.n) |j, s, n>, in the package layout
    cfg = LatticeConfig(m)
    U = oracle_walk(m)
    n1, n2 = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    for k in k_points(cfg):
        phase = np.exp(-1j * (k.ktilde1 * n1 + k.ktilde2 * n2)).ravel() / m
        waves = []
        for j in range(3):
            for s in range(2):
                v = np.zeros((3, 2, m * m), dtype=complex)
                v[j, s] = phase
                waves.append(v.ravel())
        W = np.array(waves).T  # columns ordered (j, s) like the block
        np.testing.assert_allclose(U @ W, W @ build_kblock(k).matrix, atol=1e-12)


def test_union_of_block_spectra_matches_dense_m2():
    cfg = LatticeConfig(2)
    dense = np.linalg.eigvals(dense_operator(step_unperturbed, cfg))
    blocks = np.concatenate([np.linalg.eigvals(build_kblock(k).matrix) for k in k_points(cfg)])
    assert multiset_distance(dense, blocks) < 1e-10


def test_theta_examples():
    assert theta_of_k(KPoint(0, 0, 6)) == 0.0
    k = KPoint(3, 3, 6)
    assert math.cos(2 * theta_of_k(k)) == pytest.approx(-7 / 9, abs=1e-14)
    assert sin2_theta_of_k(k) == pytest.approx(math.sin(theta_of_k(k)) ** 2, abs=1e-14)


def test_theta_range():
    for k in k_points(LatticeConfig(9)):
        assert 0 <= theta_of_k(k) <= math.pi / 2


def test_block_eigenvalues_follow_closed_form(rng):
    m = 7
    for _ in range(20):
        k = KPoint(int(rng.integers(m)), int(rng.integers(m)), m)
        eigs = np.linalg.eigvals(build_kblock(k).matrix)
        assert multiset_distance(eigs, closed_form_eigs(k)) < 1e-10
        assert multiset_distance(eigs, kspectrum(k).eigenvalues) < 1e-10


def test_characteristic_polynomial_factorization(rng):
    m = 7
    for _ in range(10):
        k = KPoint(int(rng.integers(m)), int(rng.integers(m)), m)
        c2 = math.cos(2 * theta_of_k(k))
        expected = np.polymul([1, 0, -1], [1, 0, -2 * c2, 0, 1])
        np.testing.assert_allclose(np.poly(build_kblock(k).matrix), expected, atol=1e-10)


def test_nu_eigenvectors(rng):
    m = 9
    for _ in range(20):
        k = KPoint(int(rng.integers(m)), int(rng.integers(1, m)), m)
        u = build_kblock(k).matrix
        plus, minus = nu_eigenvectors(k)
        assert np.abs(u @ plus - plus).max() < 1e-12
        assert np.abs(u @ minus + minus).max() < 1e-12
        assert abs(UNIFORM6 @ plus) < 1e-14
        assert abs(UNIFORM6 @ minus) < 1e-14
        # eigenvalues +1 and -1 are simple here, so the pair is orthogonal
        assert abs(np.vdot(plus, minus)) < 1e-12


def test_nu_eigenvectors_reject_origin():
    with pytest.raises(DegenerateKPointError):
        nu_eigenvectors(KPoint(0, 0, 4))


def test_amplitude_identity_m8():
    for k in k_points(LatticeConfig(8)):
        if k.is_origin:
            continue
        ap, am = amplitudes_of_k(k)
        assert ap >= 0 and am >= 0
        assert abs(ap**2 + am**2 - 0.5) < 1e-12


def test_amplitudes_match_eigen_projections():
    """Oracle: |<v|u>|^2 for numerically computed eigenvectors of the block."""
    for m in (5, 8):
        for k in k_points(LatticeConfig(m)):
            if k.is_origin:
                continue
            th = theta_of_k(k)
            if min(th, math.pi / 2 - th) < 1e-6:
                continue
            w, V = np.linalg.eig(build_kblock(k).matrix)
            ap, am = amplitudes_of_k(k)
            for lam, a in ((np.exp(1j * th), ap), (np.exp(-1j * th), ap), (-np.exp(1j * th), am), (-np.exp(-1j * th), am)):
                i = np.argmin(np.abs(w - lam))
                v = V[:, i] / np.linalg.norm(V[:, i])
                assert abs(abs(np.vdot(v, UNIFORM6)) ** 2 - a**2) < 1e-12


def test_target_expansion_normalization():
    cfg = LatticeConfig(16)
    total = 2 / cfg.N
    for k in k_points(cfg):
        if not k.is_origin:
            ap, am = amplitudes_of_k(k)
            total += 2 / cfg.N * 2 * (ap**2 + am**2)
    assert abs(total - 1) < 1e-12


def test_amplitudes_at_zone_corner():
    ap, am = amplitudes_of_k(KPoint(3, 3, 6))
    # ratio (1 - 1 - 1) / (3 * 1/3) = -1
    assert ap == pytest.approx(0.0, abs=1e-7)
    assert am == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert isinstance(ap, float) and isinstance(am, float)


def test_dirac_points_handled():
    # m = 3: k~ = (2pi/3, 4pi/3) gives cos theta = 0 with a vanishing numerator
    k = KPoint(1, 2, 3)
    assert theta_of_k(k) == pytest.approx(math.pi / 2)
    assert amplitudes_of_k(k) == (0.5, 0.5)
    sums = spectral_sums(LatticeConfig(3))
    assert sums.excluded == 0


def test_singular_amplitude_flagged():
    with pytest.raises(SpectralAnalysisError):
        _amplitudes(0.3, 0.2, 0.0)


def test_A_forms_agree_m8():
    s = spectral_sums(LatticeConfig(8))
    assert abs(s.A_spectral - s.A_reduced) <= 1e-8 * s.A_reduced


def test_B_forms_agree_m16():
    s = spectral_sums(LatticeConfig(16))
    assert abs(s.B_spectral - s.B_reduced) < 1e-10


def test_A_by_brute_force_loop():
    # independent scalar loop over k with the spectral form
    cfg = LatticeConfig(6)
    total = 0.0
    for k in k_points(cfg):
        if k.is_origin:
            continue
        ap, am = amplitudes_of_k(k)
        c = math.cos(theta_of_k(k))
        total += ap**2 / (1 - c) + am**2 / (1 + c)
    assert compute_A(cfg) == pytest.approx(total, rel=1e-12)


def test_minus_one_components_vanish():
    assert spectral_sums(LatticeConfig(7)).minus_one_overlap < 1e-14


def test_sums_positive_m2():
    cfg = LatticeConfig(2)
    assert compute_A(cfg) > 0
    assert compute_B(cfg) > 0


def test_A_scaling_ratios():
    ratios = []
    for m in (8, 16, 32, 64, 128):
        cfg = LatticeConfig(m)
        ratios.append(compute_A(cfg) / (cfg.N * math.log(cfg.N)))
    assert max(ratios) / min(ratios) < 1.5


def test_B_scaling_ratios():
    ratios = []
    for m in (8, 16, 32, 64, 128):
        cfg = LatticeConfig(m)
        ratios.append(compute_B(cfg) / math.log(cfg.N))
    assert max(ratios) / min(ratios) < 1.5


def test_predict_m8():
    s = predict(LatticeConfig(8))
    assert s.a0 == pytest.approx(math.sqrt(2 / 128))
    assert s.predicted_steps >= 1
    assert s.predicted_steps == round(math.pi / 2 * math.sqrt(s.A))
    assert s.predicted_overlap_sq == pytest.approx(1 / s.B)


def test_predicted_steps_growth():
    T = {m: predict(LatticeConfig(m)).predicted_steps for m in (16, 32, 64, 128)}
    for m in (16, 32, 64):
        assert 1.9 <= T[2 * m] / T[m] <= 2.4


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_predict_positive(m):
    s = predict(LatticeConfig(m))
    assert s.A > 0 and s.B > 0 and s.predicted_steps >= 1


def test_spectrum_table_m2():
    t = spectrum_table(LatticeConfig(2))
    assert len(t["k1"]) == 4
    assert t["degenerate"].tolist() == [1, 0, 0, 0]
    assert np.isnan(t["a_plus"][0])
    np.testing.assert_allclose(t["a_plus"][1:] ** 2 + t["a_minus"][1:] ** 2, 0.5)


def test_large_lattice_near_dirac_points_stays_real():
    # k-points close to the Dirac cones make cos(theta) tiny, which amplifies
    # rounding in the amplitude ratio; the sums must still evaluate
    sums = spectral_sums(LatticeConfig(2048))
    assert np.isclose(sums.A_spectral, sums.A_reduced, rtol=1e-8)
    assert sums.minus_one_overlap < 1e-12
