import numpy as np
import pytest

from cbss import estimators, genproc, metrics, unmixing
from cbss.errors import DimensionError, PhaseError

from conftest import random_mixing, short_range_model


def test_scalar_series_closed_form():
    res = unmixing.unmix(np.array([1.0, 1j, -1.0]), 1)
    np.testing.assert_allclose(res.gamma, [[np.sqrt(3) / 2]], atol=1e-15)
    np.testing.assert_allclose(res.lambdas, [-1.0 / 6.0], atol=1e-15)
    np.testing.assert_allclose(res.mu, [1j / 3], atol=1e-16)
    assert res.eigen_gap == np.inf


def test_fixed_point_on_whitened_data():
    x, _ = genproc.generate(short_range_model(), 2048, seed=1)
    first = unmixing.unmix(x, 1)
    y = unmixing.apply_unmixing(first, x)
    second = unmixing.unmix(y, 1)
    assert np.max(np.abs(second.gamma - np.eye(3))) < 1e-8


def test_defining_equations(rng):
    mixing = random_mixing(rng, 3)
    x, _ = genproc.generate(short_range_model(mixing=mixing), 4096, seed=2)
    res = unmixing.unmix(x, 1)
    s0 = estimators.autocov_sym(x, 0)
    st = estimators.autocov_sym(x, 1)
    assert np.max(np.abs(res.gamma @ s0 @ res.gamma.conj().T - np.eye(3))) < 1e-8
    diagonalized = res.gamma @ st @ res.gamma.conj().T
    assert np.max(np.abs(diagonalized - np.diag(res.lambdas))) < 1e-8
    assert np.all(np.diff(res.lambdas) <= 0)
    # the fitted spectrum tracks the population lag-1 autocovariances,
    # unaffected by the mixing
    np.testing.assert_allclose(res.lambdas, [0.9, 0.5, 0.1], atol=0.1)
    # diagonal of the standardized estimate is on the non-negative real axis
    assert np.max(np.abs(np.diag(res.gamma).imag)) == 0.0
    assert np.min(np.diag(res.gamma).real) >= 0.0


def test_apply_unmixing_whitens_fitting_sample():
    x, _ = genproc.generate(short_range_model(), 1024, seed=3)
    res = unmixing.unmix(x, 1)
    y = unmixing.apply_unmixing(res, x)
    assert np.max(np.abs(estimators.autocov_sym(y, 0) - np.eye(3))) < 1e-8
    st = estimators.autocov_sym(y, 1)
    assert np.max(np.abs(st - np.diag(np.diag(st)))) < 1e-8


def test_apply_unmixing_identity_gamma():
    x = np.arange(12, dtype=float).reshape(6, 2) + 1j
    shift = np.array([1.0 + 1j, -2.0])
    res = unmixing.UnmixingResult(gamma=np.eye(2, dtype=complex),
                                  lambdas=np.array([1.0, 0.5]),
                                  mu=shift, tau=1, eigen_gap=0.5)
    np.testing.assert_allclose(unmixing.apply_unmixing(res, x), x - shift, atol=0)


def test_apply_unmixing_dimension_mismatch():
    res = unmixing.unmix(np.array([1.0, 1j, -1.0, 2.0]), 1)
    with pytest.raises(DimensionError):
        unmixing.apply_unmixing(res, np.ones((5, 3)))


def test_standardize_phase_closed_form():
    gamma = np.diag([np.exp(1j * np.pi / 4)])
    out, shift = unmixing.standardize_phase(gamma)
    np.testing.assert_allclose(out, [[1.0]], atol=1e-15)
    np.testing.assert_allclose(shift.phases, [2 * np.pi - np.pi / 4], atol=1e-12)
    np.testing.assert_allclose(shift.matrix() @ gamma, out, atol=1e-15)


def test_standardize_phase_idempotent(rng):
    gamma = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    gamma += 3 * np.eye(3)  # keep the diagonal well away from zero
    out, _ = unmixing.standardize_phase(gamma)
    again, shift = unmixing.standardize_phase(out)
    np.testing.assert_allclose(shift.phases, np.zeros(3), atol=1e-12)
    np.testing.assert_allclose(again, out, atol=1e-15)


def test_standardize_phase_row_scaling_invariance(rng):
    gamma = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) + 2 * np.eye(3)
    phases = rng.uniform(0, 2 * np.pi, 3)
    rotated = np.exp(1j * phases)[:, None] * gamma
    out_a, _ = unmixing.standardize_phase(gamma)
    out_b, _ = unmixing.standardize_phase(rotated)
    np.testing.assert_allclose(out_a, out_b, atol=1e-13)
    # moduli of the diagonal are preserved exactly
    np.testing.assert_array_equal(np.diag(out_b), np.abs(np.diag(rotated)))


def test_standardize_phase_zero_diagonal():
    with pytest.raises(PhaseError):
        unmixing.standardize_phase(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex))


def test_align_phase_exact_class_member(rng):
    ref = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    phases = rng.uniform(0, 2 * np.pi, 3)
    rotated = np.exp(1j * phases)[:, None] * ref
    np.testing.assert_allclose(unmixing.align_phase_to(rotated, ref), ref, atol=1e-13)
    np.testing.assert_allclose(unmixing.align_phase_to(ref, ref), ref, atol=1e-15)


def test_align_phase_scalar():
    np.testing.assert_allclose(unmixing.align_phase_to([[1j]], [[1.0]]), [[1.0]], atol=1e-15)


def test_align_phase_orthogonal_rows():
    with pytest.raises(PhaseError):
        unmixing.align_phase_to(np.array([[1.0, 0.0], [0.0, 1.0]]),
                                np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_affine_invariance(rng):
    x, _ = genproc.generate(short_range_model(), 4096, seed=4)
    base = unmixing.unmix(x, 1)
    for _ in range(5):
        b_mat = random_mixing(rng, 3)
        b_vec = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        transformed = unmixing.unmix(x @ b_mat.T + b_vec, 1)
        expected = base.gamma @ np.linalg.inv(b_mat)
        aligned = unmixing.align_phase_to(transformed.gamma, expected)
        assert np.max(np.abs(aligned - expected)) < 1e-6


def test_unmix_from_covariances_plug_in_seam(rng):
    x, _ = genproc.generate(short_range_model(), 1024, seed=9)
    direct = unmixing.unmix(x, 2)
    via_seam = unmixing.unmix_from_covariances(
        estimators.autocov_sym(x, 0), estimators.autocov_sym(x, 2),
        estimators.sample_mean(x), 2)
    np.testing.assert_array_equal(via_seam.gamma, direct.gamma)
    np.testing.assert_array_equal(via_seam.lambdas, direct.lambdas)


def test_known_mixing_recovery_large_sample(rng):
    mixing = random_mixing(rng, 3)
    x, _ = genproc.generate(short_range_model(mixing=mixing), 10000, seed=8)
    res = unmixing.unmix(x, 1)
    assert metrics.md_index(res.gamma, mixing) < 0.1


def test_md_phase_equivalence(rng):
    mixing = random_mixing(rng, 3)
    x, _ = genproc.generate(short_range_model(mixing=mixing), 2048, seed=5)
    res = unmixing.unmix(x, 1)
    base = metrics.md_index(res.gamma, mixing)
    shift = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, 3)))
    assert abs(metrics.md_index(shift @ res.gamma, mixing) - base) < 1e-12


def test_lag_rejections():
    x = np.array([1.0, 1j, -1.0, 2.0])
    with pytest.raises(DimensionError):
        unmixing.unmix(x, 0)
    with pytest.raises(DimensionError):
        unmixing.unmix(x, 3)


def test_lag_sweep_single_tau():
    x, _ = genproc.generate(short_range_model(), 512, seed=6)
    rows = unmixing.lag_sweep(x, [1])
    assert len(rows) == 1 and rows[0]["tau"] == 1


def test_lag_sweep_white_noise_small_gap(rng):
    t = 4096
    x = (rng.standard_normal((t, 3)) + 1j * rng.standard_normal((t, 3))) / np.sqrt(2)
    rows = unmixing.lag_sweep(x, [1, 2, 3])
    for row in rows:
        assert np.max(np.abs(row["lambdas"])) < 5.0 / np.sqrt(t)
        assert row["eigen_gap"] < 5.0 / np.sqrt(t)


def test_lag_sweep_ranks_separating_lag_first():
    # lag-1 spectrum (0.9, 0.5, 0.1) is well separated; by lag 6 the
    # spectrum collapses toward (0.53, 0.016, 1e-6) with a tiny bottom gap
    x, _ = genproc.generate(short_range_model(), 8192, seed=7)
    rows = unmixing.lag_sweep(x, [1, 6])
    assert rows[0]["tau"] == 1
