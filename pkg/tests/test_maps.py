import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qubitmarkov.errors import SingularMapError
from qubitmarkov.maps import (
    DEPOLARIZING_MAP,
    IDENTITY_MAP,
    UnphysicalStateWarning,
    AffineForm,
    affine_parts,
    apply,
    apply_bloch,
    check_transfer_matrix,
    choi,
    choi_eigenvalues,
    compose,
    dephasing_rotation,
    fibonacci_sphere,
    from_superoperator,
    is_cp,
    is_positive,
    is_unital,
    max_image_radius,
    min_choi_eigenvalue,
    phase_covariance_residual,
    propagator,
)
from qubitmarkov.states import SIGMA_MINUS, SIGMA_X, bloch_to_density, density_to_bloch

TRANSPOSE = np.diag([1.0, 1.0, -1.0, 1.0])


def amplitude_damping(p):
    K0 = np.array([[np.sqrt(1 - p), 0], [0, 1]])
    K1 = np.sqrt(p) * SIGMA_MINUS
    return from_superoperator(lambda r: K0 @ r @ K0.conj().T + K1 @ r @ K1.conj().T)


def test_identity_choi_is_bell_projector():
    C = choi(IDENTITY_MAP)
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(C, np.outer(bell, bell), atol=1e-15)
    assert np.trace(C).real == pytest.approx(1.0)


def test_known_choi_spectra():
    assert np.allclose(choi_eigenvalues(IDENTITY_MAP), [0, 0, 0, 1], atol=1e-15)
    assert np.allclose(choi_eigenvalues(DEPOLARIZING_MAP), [0.25] * 4, atol=1e-15)
    assert np.allclose(choi_eigenvalues(TRANSPOSE), [-0.5, 0.5, 0.5, 0.5], atol=1e-15)


def test_transpose_is_positive_but_not_cp():
    assert is_positive(TRANSPOSE)
    assert not is_cp(TRANSPOSE)


def test_amplitude_damping_matrix():
    F = amplitude_damping(0.36)
    expected = np.array([[1, 0, 0, 0], [0, 0.8, 0, 0], [0, 0, 0.8, 0], [-0.36, 0, 0, 0.64]])
    assert np.allclose(F, expected, atol=1e-15)
    assert is_cp(F)
    assert not is_unital(F)
    assert min_choi_eigenvalue(F) == pytest.approx(0.0, abs=1e-15)


def test_choi_is_hermitian_trace_one_for_stack(rng):
    F = np.tile(np.eye(4), (5, 1, 1))
    F[:, 1:, :] = rng.normal(size=(5, 3, 4))
    C = choi(F)
    assert C.shape == (5, 4, 4)
    assert np.allclose(C, np.swapaxes(C, -1, -2).conj())
    assert np.allclose(np.trace(C, axis1=-2, axis2=-1), 1.0)


def test_apply_matches_affine_action():
    F = amplitude_damping(0.5)
    r = np.array([0.3, -0.4, 0.5])
    out = apply(F, bloch_to_density(r))
    assert np.allclose(density_to_bloch(out), apply_bloch(F, r))
    parts = affine_parts(F)
    assert np.allclose(parts.v, [0, 0, -0.5])
    assert np.allclose(AffineForm(parts.v, parts.V).to_matrix(), F)


def test_apply_warns_outside_ball():
    F = np.diag([1.0, 1.5, 1.0, 1.0])
    with pytest.warns(UnphysicalStateWarning):
        apply(F, bloch_to_density([1, 0, 0]))


def test_check_transfer_matrix():
    check_transfer_matrix(DEPOLARIZING_MAP)
    with pytest.raises(ValueError):
        check_transfer_matrix(np.ones((4, 4)))
    with pytest.raises(ValueError):
        check_transfer_matrix(np.eye(3))


def test_propagator_inverts_composition():
    F1, F2 = amplitude_damping(0.3), amplitude_damping(0.6)
    phi = propagator(compose(F2, F1), F1)
    assert np.allclose(phi, F2, atol=1e-14)


def test_propagator_of_singular_map():
    with pytest.raises(SingularMapError):
        propagator(IDENTITY_MAP, DEPOLARIZING_MAP)


def test_fibonacci_sphere_is_unit_and_read_only():
    pts = fibonacci_sphere(1000)
    assert pts.shape == (1000, 3)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)
    assert abs(pts.mean(axis=0)).max() < 1e-3
    with pytest.raises(ValueError):
        pts[0, 0] = 2.0


def test_max_image_radius():
    assert max_image_radius(IDENTITY_MAP) == pytest.approx(1.0)
    assert max_image_radius(DEPOLARIZING_MAP) == pytest.approx(0.0)
    assert not is_positive(np.diag([1.0, 1.0, 1.0, 1.1]))


@given(st.floats(-np.pi, np.pi, allow_nan=False))
def test_dephasing_rotation_is_z_rotation_by_twice_phi(phi):
    R = dephasing_rotation(phi)
    U = np.diag([np.exp(-1j * phi), np.exp(1j * phi)])
    direct = from_superoperator(lambda r: U @ r @ U.conj().T)
    assert np.allclose(R, direct, atol=1e-14)


def test_dephasing_rotation_sends_x_to_y():
    assert np.allclose(apply_bloch(dephasing_rotation(np.pi / 4), [1, 0, 0]), [0, 1, 0], atol=1e-15)


def test_phase_covariance_residual():
    assert phase_covariance_residual(amplitude_damping(0.4)) < 1e-15
    assert phase_covariance_residual(dephasing_rotation(0.3)) < 1e-15
    x_flip = from_superoperator(lambda r: SIGMA_X @ r @ SIGMA_X)
    assert phase_covariance_residual(x_flip) == pytest.approx(2.0)
    stack = np.stack([IDENTITY_MAP, x_flip])
    assert phase_covariance_residual(stack).shape == (2,)
    with pytest.raises(ValueError):
        phase_covariance_residual(IDENTITY_MAP, n_phi=3)
