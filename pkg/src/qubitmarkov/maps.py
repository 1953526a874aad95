"""Pauli transfer matrices of qubit maps.

A map ``Lambda`` is stored as the real 4x4 matrix
``F[k, l] = <sigma_k, Lambda[sigma_l]>`` in the normalized Pauli basis.
Trace and Hermiticity preservation force the block form::

    F = [[1, 0^T],
         [v, V  ]]

so that Bloch vectors transform affinely, ``S -> v + V S``. Most functions
accept a single matrix or a stack of shape ``(..., 4, 4)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SingularMapError
from .states import IDENTITY, PAULI, hs_inner

CP_TOL = 1e-9
POSITIVITY_TOL = 1e-6
SINGULAR_COND = 1e12
PC_GRID = 16

IDENTITY_MAP = np.eye(4)
#: Completely depolarizing map, every state goes to 1/2.
DEPOLARIZING_MAP = np.diag([1.0, 0.0, 0.0, 0.0])


class UnphysicalStateWarning(UserWarning):
    """A non-positive map sent a state outside the Bloch ball."""


@dataclass(frozen=True)
class AffineForm:
    """Bloch-vector action ``S -> v + V S`` of a transfer matrix."""

    v: np.ndarray
    V: np.ndarray

    def to_matrix(self):
        F = np.zeros(self.v.shape[:-1] + (4, 4))
        F[..., 0, 0] = 1.0
        F[..., 1:, 0] = self.v
        F[..., 1:, 1:] = self.V
        return F


def from_superoperator(superop):
    """Transfer matrix of a linear map given as a callable on 2x2 operators.

    Also used for generators: the result is then the generator in the same
    representation, with a vanishing first row for trace-preserving ones.
    """
    images = np.stack([np.asarray(superop(s), dtype=complex) for s in PAULI])
    F = hs_inner(PAULI[:, None], images[None, :])
    return F.real


def apply_to_operator(F, op):
    """``Lambda[op] = sum_kl F_kl <sigma_l, op> sigma_k`` for arbitrary 2x2 ``op``."""
    coeffs = hs_inner(PAULI, np.asarray(op, dtype=complex)[..., None, :, :])
    return np.einsum("...kl,...l,kab->...ab", F, coeffs, PAULI)


def check_transfer_matrix(F, tol=1e-12):
    F = np.asarray(F, dtype=float)
    if F.shape[-2:] != (4, 4):
        raise ValueError(f"transfer matrix must be 4x4, got shape {F.shape}")
    first = F[..., 0, :] - IDENTITY_MAP[0]
    if np.max(np.abs(first), initial=0.0) > tol:
        raise ValueError("first row of a transfer matrix must be (1, 0, 0, 0)")
    return F


def affine_parts(F):
    F = np.asarray(F, dtype=float)
    return AffineForm(v=F[..., 1:, 0].copy(), V=F[..., 1:, 1:].copy())


def apply_bloch(F, r):
    F = np.asarray(F, dtype=float)
    r = np.asarray(r, dtype=float)
    return F[..., 1:, 0] + np.einsum("...ij,...j->...i", F[..., 1:, 1:], r)


def apply(F, rho):
    """Evolve a density matrix through ``F``.

    The result is not clamped: if ``F`` is not positive the output can leave
    the Bloch ball, in which case an :class:`UnphysicalStateWarning` is issued.
    """
    rho = np.asarray(rho, dtype=complex)
    r = 2 * hs_inner(PAULI[1:], rho[..., None, :, :]).real
    out = apply_bloch(F, r)
    if np.max(np.linalg.norm(out, axis=-1)) > 1 + POSITIVITY_TOL:
        warnings.warn("map output lies outside the Bloch ball", UnphysicalStateWarning, stacklevel=2)
    return (IDENTITY + np.einsum("...k,kij->...ij", out, PAULI[1:])) / 2


def compose(F2, F1):
    """Matrix of ``Lambda2 o Lambda1`` (apply ``F1`` first)."""
    return np.asarray(F2, dtype=float) @ np.asarray(F1, dtype=float)


def propagator(F_t2, F_t1, max_cond=SINGULAR_COND):
    """Interval map ``Phi`` with ``Phi @ F_t1 = F_t2``.

    Raises :class:`SingularMapError` when ``F_t1`` is numerically singular.
    """
    F_t1 = np.asarray(F_t1, dtype=float)
    cond = np.linalg.cond(F_t1)
    if not np.isfinite(cond) or cond > max_cond:
        raise SingularMapError(f"map is not invertible (condition number {cond:.3g})")
    # solve Phi F1 = F2  <=>  F1^T Phi^T = F2^T
    phi = np.linalg.solve(F_t1.T, np.asarray(F_t2, dtype=float).T).T
    phi[0] = IDENTITY_MAP[0]
    return phi


@lru_cache(maxsize=1)
def _matrix_units():
    units = np.zeros((2, 2, 2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            units[i, j, i, j] = 1.0
    return units


def choi(F):
    """Normalized Choi state ``(Lambda x I)[|psi><psi|]``, ``|psi> = (|00> + |11>)/sqrt 2``.

    The first tensor factor carries the map output, the second the ancilla.
    """
    F = np.asarray(F, dtype=float)
    images = apply_to_operator(F[..., None, None, :, :], _matrix_units())
    # images[..., i, j, a, b] = Lambda[|i><j|][a, b];  C[(a,i),(b,j)] = images / 2
    C = np.einsum("...ijab->...aibj", images) / 2
    return C.reshape(F.shape[:-2] + (4, 4))


def choi_eigenvalues(F):
    return np.linalg.eigvalsh(choi(F))


def min_choi_eigenvalue(F):
    return choi_eigenvalues(F)[..., 0]


def is_cp(F, tol=CP_TOL):
    return bool(np.all(min_choi_eigenvalue(F) >= -tol))


@lru_cache(maxsize=4)
def fibonacci_sphere(n=1000):
    """Deterministic, nearly uniform unit vectors (golden-angle spiral)."""
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    rho = np.sqrt(1 - z**2)
    azimuth = np.pi * (3 - np.sqrt(5)) * k
    points = np.stack([rho * np.cos(azimuth), rho * np.sin(azimuth), z], axis=-1)
    points.setflags(write=False)
    return points


def max_image_radius(F, n_points=1000):
    """Largest Bloch-vector length in the image of the sphere grid, per map."""
    F = np.asarray(F, dtype=float)
    images = apply_bloch(F[..., None, :, :], fibonacci_sphere(n_points))
    return np.linalg.norm(images, axis=-1).max(axis=-1)


def is_positive(F, tol=POSITIVITY_TOL, n_points=1000):
    """Whether the image of the Bloch sphere stays inside the unit ball.

    Checked on a deterministic grid of pure states, which suffices by
    convexity up to the grid resolution.
    """
    return bool(np.all(max_image_radius(F, n_points) <= 1 + tol))


def is_unital(F, tol=1e-12):
    F = np.asarray(F, dtype=float)
    return bool(np.max(np.abs(F[..., :, 0] - IDENTITY_MAP[:, 0])) <= tol)


def dephasing_rotation(phi):
    """Transfer matrix of ``rho -> exp(-i phi sigma_z) rho exp(i phi sigma_z)``.

    This rotates the Bloch vector about z by ``2 phi`` in the positive sense
    (x goes to +y for ``phi = pi/4``). Broadcasts over ``phi``.
    """
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(2 * phi), np.sin(2 * phi)
    U = np.zeros(phi.shape + (4, 4))
    U[..., 0, 0] = U[..., 3, 3] = 1.0
    U[..., 1, 1] = U[..., 2, 2] = c
    U[..., 1, 2] = -s
    U[..., 2, 1] = s
    return U


def phase_covariance_residual(F, n_phi=PC_GRID):
    """Largest entry of ``U_phi F - F U_phi`` over a uniform phase grid on [0, pi)."""
    if n_phi < 4:
        raise ValueError("n_phi must be at least 4")
    F = np.asarray(F, dtype=float)
    U = dephasing_rotation(np.arange(n_phi) * np.pi / n_phi)
    Fb = F[..., None, :, :]
    comm = U @ Fb - Fb @ U
    return np.max(np.abs(comm), axis=(-3, -2, -1))
