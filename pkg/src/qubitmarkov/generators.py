"""Time-local generators as 4x4 real matrices acting on ``(1, S)``.

Every generator here follows the convention ``d/dt (1, S)^T = L(t) (1, S)^T``
and has an identically zero first row (trace preservation). Three families
are provided:

* :func:`general_generator` -- arbitrary Hamiltonian plus Lindblad terms,
  projected onto the Pauli basis;
* :func:`pc_generator` -- the phase-covariant master equation with absorption,
  emission and dephasing rates and a Lamb shift;
* :func:`npc_generator` -- the high-temperature spin-boson model with jump
  operator ``cos(vartheta) sigma_x + sin(vartheta) sigma_z``.

Precession orientation: ``H = omega0 sigma_z / 2`` rotates x into +y
(``L[2, 1] = +omega0``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import integrate

from .errors import MissingCutoffError, NonHermitianHamiltonianError, QuadratureError
from .maps import from_superoperator
from .states import SIGMA_MINUS, SIGMA_PLUS, SIGMA_X, SIGMA_Z, STATE_TOL, is_hermitian

QUAD_EPSABS = 1e-13
QUAD_FAIL = 1e-9


@dataclass(frozen=True)
class Rate:
    """A scalar function of time with an optional closed-form antiderivative.

    When ``antiderivative`` is given, :meth:`integral` uses it instead of
    adaptive quadrature.
    """

    fn: Callable[[float], float]
    antiderivative: Optional[Callable[[float], float]] = None
    value: Optional[float] = None

    @classmethod
    def constant(cls, value):
        value = float(value)
        return cls(fn=lambda t: value + 0.0 * np.asarray(t, dtype=float),
                   antiderivative=lambda t: value * np.asarray(t, dtype=float),
                   value=value)

    @property
    def is_constant(self):
        return self.value is not None

    def __call__(self, t):
        return self.fn(t)

    def integral(self, t0, t):
        if self.antiderivative is not None:
            return self.antiderivative(t) - self.antiderivative(t0)
        result, abserr = integrate.quad(self.fn, t0, t, epsabs=QUAD_EPSABS, epsrel=1e-12, limit=200)
        if abserr > QUAD_FAIL:
            raise QuadratureError(f"quadrature error estimate {abserr:.3g} on [{t0}, {t}]")
        return result


RateLike = Union[Rate, float, Callable[[float], float]]


def as_rate(rate: RateLike) -> Rate:
    if isinstance(rate, Rate):
        return rate
    if callable(rate):
        return Rate(fn=rate)
    return Rate.constant(rate)


ZERO = Rate.constant(0.0)


@dataclass(frozen=True)
class PCRates:
    """Coefficients of the phase-covariant master equation.

    Negative rates are accepted; they are what makes a dynamics fail
    CP-divisibility.
    """

    omega0: float
    h: Rate = ZERO
    gamma_plus: Rate = ZERO
    gamma_minus: Rate = ZERO
    gamma_z: Rate = ZERO

    def __post_init__(self):
        for name in ("h", "gamma_plus", "gamma_minus", "gamma_z"):
            object.__setattr__(self, name, as_rate(getattr(self, name)))

    @property
    def is_constant(self):
        return all(getattr(self, n).is_constant for n in ("h", "gamma_plus", "gamma_minus", "gamma_z"))


@dataclass(frozen=True)
class SpinBosonParams:
    """Spin-boson model with Ohmic bath at high temperature.

    ``omega_c=None`` selects the semigroup limit of infinite cutoff.
    """

    omega0: float
    vartheta: float
    lam: float
    beta: float
    omega_c: Optional[float] = None

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("coupling strength lambda must be nonnegative")
        if self.beta <= 0:
            raise ValueError("inverse temperature beta must be positive")
        if self.omega_c is not None and self.omega_c <= 0:
            raise ValueError("cutoff frequency must be positive")

    @classmethod
    def from_semigroup_rate(cls, omega0, vartheta, gamma, beta=1.0):
        """Parameters whose semigroup rate equals ``gamma`` at the given ``beta``."""
        return cls(omega0=omega0, vartheta=vartheta, lam=2 * beta * gamma / np.pi, beta=beta)


@dataclass(frozen=True)
class LindbladTerm:
    rate: Rate
    operator: Union[np.ndarray, Callable[[float], np.ndarray]]

    def __post_init__(self):
        object.__setattr__(self, "rate", as_rate(self.rate))

    def operator_at(self, t):
        op = self.operator(t) if callable(self.operator) else self.operator
        return np.asarray(op, dtype=complex)


def general_generator(H, terms: Sequence[LindbladTerm], t):
    """Generator of ``-i[H(t), .] + sum_k g_k(t) (V rho V^+ - {V^+ V, rho}/2)``.

    ``H`` is a 2x2 Hermitian matrix or a callable returning one.
    """
    Ht = np.asarray(H(t) if callable(H) else H, dtype=complex)
    if not is_hermitian(Ht, STATE_TOL):
        raise NonHermitianHamiltonianError("Hamiltonian is not Hermitian")
    dissipators = [(float(term.rate(t)), term.operator_at(t)) for term in terms]

    def superop(rho):
        out = -1j * (Ht @ rho - rho @ Ht)
        for g, V in dissipators:
            VdV = V.conj().T @ V
            out = out + g * (V @ rho @ V.conj().T - 0.5 * (VdV @ rho + rho @ VdV))
        return out

    L = from_superoperator(superop)
    L[0] = 0.0
    return L


def pc_generator(rates: PCRates, t):
    """Phase-covariant generator at time ``t``.

    ``S_z`` relaxes as ``dS_z/dt = (g+ - g-) - (g+ + g-) S_z``; the transverse
    components rotate at ``omega0 + h`` and contract at ``(g+ + g- + 4 g_z)/2``.
    """
    gp = float(rates.gamma_plus(t))
    gm = float(rates.gamma_minus(t))
    gz = float(rates.gamma_z(t))
    freq = rates.omega0 + float(rates.h(t))
    transverse = -(gp + gm + 4 * gz) / 2
    L = np.zeros((4, 4))
    L[1, 1] = L[2, 2] = transverse
    L[1, 2] = -freq
    L[2, 1] = freq
    L[3, 0] = gp - gm
    L[3, 3] = -(gp + gm)
    return L


def pc_lindblad_terms(rates: PCRates):
    """The same PC master equation expressed as explicit Lindblad terms."""
    return [
        LindbladTerm(rates.gamma_plus, SIGMA_PLUS),
        LindbladTerm(rates.gamma_minus, SIGMA_MINUS),
        LindbladTerm(rates.gamma_z, SIGMA_Z),
    ]


def pc_hamiltonian(rates: PCRates):
    return lambda t: (rates.omega0 + float(rates.h(t))) / 2 * SIGMA_Z


def ohmic_rate(p: SpinBosonParams, t):
    """Time-dependent noise rate ``(lambda/beta) arctan(omega_c t)``."""
    if p.omega_c is None:
        raise MissingCutoffError("ohmic_rate needs a finite cutoff frequency omega_c")
    return p.lam / p.beta * np.arctan(p.omega_c * np.asarray(t, dtype=float))


def semigroup_rate(p: SpinBosonParams):
    """Infinite-cutoff limit ``lambda pi / (2 beta)``."""
    return p.lam * np.pi / (2 * p.beta)


def noise_rate(p: SpinBosonParams, t):
    return semigroup_rate(p) if p.omega_c is None else float(ohmic_rate(p, t))


def npc_jump_operator(vartheta):
    return np.cos(vartheta) * SIGMA_X + np.sin(vartheta) * SIGMA_Z


def npc_generator(p: SpinBosonParams, t=0.0):
    """Spin-boson generator ``-i[omega0 sigma_z/2, .] + g(t) (s rho s - rho)``.

    With unit axis ``n = (cos vartheta, 0, sin vartheta)`` the dissipator acts
    on the Bloch vector as ``2 g (n n^T - 1)``; the map is always unital.
    """
    g = noise_rate(p, t)
    n = np.array([np.cos(p.vartheta), 0.0, np.sin(p.vartheta)])
    L = np.zeros((4, 4))
    L[1, 2] = -p.omega0
    L[2, 1] = p.omega0
    L[1:, 1:] += 2 * g * (np.outer(n, n) - np.eye(3))
    return L


def _oscillation(amplitude, omega0, phi, kind):
    """``amplitude * cos`` or ``sin`` of ``2 omega0 t + 2 phi`` with antiderivative."""
    trig, anti = (np.cos, np.sin) if kind == "cos" else (np.sin, lambda x: -np.cos(x))

    def fn(t):
        return amplitude * trig(2 * omega0 * np.asarray(t, dtype=float) + 2 * phi)

    if omega0 == 0:
        return Rate(fn=fn, antiderivative=lambda t: amplitude * trig(2 * phi) * np.asarray(t, dtype=float))
    return Rate(fn=fn, antiderivative=lambda t: amplitude * anti(2 * omega0 * np.asarray(t, dtype=float) + 2 * phi) / (2 * omega0))


def mimic_pc_rates(gamma, omega0, phi, dephasing_scale=0.5):
    """PC rates whose solution tracks the transversal spin-boson semigroup.

    Built for one initial phase ``phi``; valid to first order in
    ``gamma / omega0``::

        g+ = g- = gamma
        g_z(t) = -dephasing_scale * gamma * cos(2 omega0 t + 2 phi)
        h(t)   = -gamma * sin(2 omega0 t + 2 phi)

    Expanding the exact coherence gives a log-decay rate
    ``gamma (1 - cos(2 omega0 t + 2 phi))``, which fixes ``dephasing_scale``
    at 1/2. Passing ``dephasing_scale=1`` gives the variant with twice the
    modulation, which overshoots the coherence and is not a positive map.
    """
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    return PCRates(
        omega0=omega0,
        h=_oscillation(-gamma, omega0, phi, "sin"),
        gamma_plus=Rate.constant(gamma),
        gamma_minus=Rate.constant(gamma),
        gamma_z=_oscillation(-dephasing_scale * gamma, omega0, phi, "cos"),
    )
