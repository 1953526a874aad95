"""Qubit states, Pauli algebra and the population/coherence observables.

Basis convention
----------------
Pauli matrices are the standard ones, ``sigma_z = diag(1, -1)``. The first
computational basis vector is the *excited* state and is labelled ``|1>``;
the second is the ground state ``|0>``. Consequently::

    sigma_z |1> = +|1>,   sigma_z |0> = -|0>
    population  p = <1|rho|1> = (1 + S_z) / 2
    coherence   c = <1|rho|0> = (S_x - i S_y) / 2
    sigma_plus  = |1><0|      (raises towards S_z = +1)

With this labelling the closed-form population and coherence laws of the
spin-boson and phase-covariant models hold without sign changes, e.g. a pure
state with polar angle ``theta`` has ``p = (1 + cos theta) / 2`` and
``c = sin(theta) / 2 * exp(-i phi)``. This module is the only place the
convention is fixed; everything else goes through :func:`population` and
:func:`coherence`.

Functions accept single 2x2 matrices or stacks of shape ``(..., 2, 2)``
where that is cheap to support.
"""

from __future__ import annotations

import numpy as np

from .errors import UnphysicalStateError

STATE_TOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
#: Operator basis ``(1, sigma_x, sigma_y, sigma_z)`` indexed 0..3.
PAULI = np.stack([IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z])

SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.conj().T

KET_1 = np.array([1, 0], dtype=complex)
KET_0 = np.array([0, 1], dtype=complex)


def projector(ket):
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


def hs_inner(a, b):
    """Normalized Hilbert-Schmidt product ``Tr(a^dagger b) / 2``.

    The Pauli basis is orthonormal under this product.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.einsum("...ji,...ji->...", a.conj(), b) / 2


def is_hermitian(op, tol=STATE_TOL):
    op = np.asarray(op)
    return bool(np.max(np.abs(op - np.swapaxes(op, -1, -2).conj()), initial=0.0) <= tol)


def hermitian_eigvals(op):
    """Eigenvalues of a Hermitian 2x2 matrix (or stack), ascending.

    Closed form from trace and determinant, so it is exact to rounding and
    vectorizes over leading axes.
    """
    op = np.asarray(op, dtype=complex)
    a = op[..., 0, 0].real
    d = op[..., 1, 1].real
    b = op[..., 0, 1]
    mean = (a + d) / 2
    radius = np.hypot((a - d) / 2, np.abs(b))
    return np.stack([mean - radius, mean + radius], axis=-1)


def check_density_matrix(rho, tol=STATE_TOL):
    """Return ``rho`` as a complex array, raising if it is not a valid state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (2, 2):
        raise UnphysicalStateError(f"expected 2x2 matrix, got shape {rho.shape}")
    if not is_hermitian(rho, tol):
        raise UnphysicalStateError("density matrix is not Hermitian")
    trace = np.trace(rho, axis1=-2, axis2=-1)
    if np.max(np.abs(trace - 1)) > tol:
        raise UnphysicalStateError(f"trace deviates from 1 by {np.max(np.abs(trace - 1)):.3g}")
    if np.min(hermitian_eigvals(rho)) < -tol:
        raise UnphysicalStateError("density matrix has a negative eigenvalue")
    return rho


def bloch_to_density(r, tol=STATE_TOL):
    """``rho = (1 + r . sigma) / 2``; rejects vectors longer than one."""
    r = np.asarray(r, dtype=float)
    if r.shape[-1] != 3:
        raise ValueError(f"Bloch vector must have 3 components, got shape {r.shape}")
    norm = np.linalg.norm(r, axis=-1)
    if np.max(norm) > 1 + tol:
        raise UnphysicalStateError(f"Bloch vector length {np.max(norm):.17g} exceeds 1")
    return (IDENTITY + np.einsum("...k,kij->...ij", r, PAULI[1:])) / 2


def density_to_bloch(rho):
    """Bloch vector components ``r_k = Tr(sigma_k rho)``."""
    rho = np.asarray(rho, dtype=complex)
    return 2 * hs_inner(PAULI[1:], rho[..., None, :, :]).real


def pure_state(theta, phi):
    """Pure state at polar angle ``theta`` and azimuth ``phi`` on the Bloch sphere.

    ``theta = 0`` is the north pole, Bloch vector ``(0, 0, 1)``, which is
    ``|1><1|`` in this package's labelling.
    """
    r = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    return bloch_to_density(r)


def purity(rho):
    rho = np.asarray(rho, dtype=complex)
    return np.einsum("...ij,...ji->...", rho, rho).real


def trace_distance(rho1, rho2):
    """Half the trace norm of ``rho1 - rho2`` (broadcasts over leading axes)."""
    diff = np.asarray(rho1, dtype=complex) - np.asarray(rho2, dtype=complex)
    return 0.5 * np.sum(np.abs(hermitian_eigvals(diff)), axis=-1)


def population(rho):
    """Excited-state population ``<1|rho|1>``."""
    return np.asarray(rho)[..., 0, 0].real


def coherence(rho):
    """Off-diagonal element ``<1|rho|0>`` (complex)."""
    return np.asarray(rho, dtype=complex)[..., 0, 1]
