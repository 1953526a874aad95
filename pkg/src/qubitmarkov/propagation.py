"""Dynamical-map trajectories.

Four routes produce transfer matrices ``F(t)``:

* :func:`integrate_map`: fixed-step RK4 on ``dF/dt = L(t) F`` with
  step-doubling (Richardson) error control, for any time-dependent generator;
* :func:`semigroup_map`: matrix exponential of a constant generator;
* :func:`pc_map` applied to :func:`pc_integrals`: the closed form of a
  phase-covariant dynamics;
* :func:`npc_transversal_solution`: closed-form population and coherence of
  the transversal (``vartheta = 0``) spin-boson semigroup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.linalg import expm

from .errors import StepSizeUnderflowError
from .generators import PCRates
from .maps import IDENTITY_MAP, apply, apply_bloch, min_choi_eigenvalue
from .states import coherence, population

GeneratorLike = Union[np.ndarray, Callable[[float], np.ndarray]]


@dataclass(frozen=True)
class IntegratorControls:
    """Step control for :func:`integrate_map`.

    ``tol`` bounds the Richardson error estimate per output interval (max-abs
    entry). The initial substep is ``1 / (h_scale * max|L(t)|)``, i.e. twenty
    steps per fastest time scale of the generator.
    """

    tol: float = 1e-12
    h_scale: float = 20.0
    max_substeps: int = 1 << 16


def time_grid(t_end, n_steps, t0=0.0):
    """Uniform grid with ``n_steps`` intervals (``n_steps + 1`` points)."""
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    if not t_end > t0:
        raise ValueError("t_end must exceed t0")
    return np.linspace(t0, t_end, int(n_steps) + 1)


def check_times(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ValueError("time grid must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(times)):
        raise ValueError("time grid contains non-finite values")
    if np.any(np.diff(times) <= 0):
        raise ValueError("time grid must be strictly increasing")
    return times


@dataclass
class TrajectoryRecord:
    """Per-time maps, states and observables for one initial state."""

    times: np.ndarray
    maps: np.ndarray
    states: np.ndarray
    population: np.ndarray
    coherence: np.ndarray
    min_choi: np.ndarray
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MapTrajectory:
    """Transfer matrices ``F(t_i)`` on a time grid, ``F(t_0)`` the identity."""

    times: np.ndarray
    maps: np.ndarray

    def __len__(self):
        return len(self.times)

    def states(self, rho0):
        return apply(self.maps, rho0)

    def bloch(self, r0):
        return apply_bloch(self.maps, r0)

    def observables(self, rho0):
        """Return ``(population, coherence)`` series for the initial state."""
        rhos = self.states(rho0)
        return population(rhos), coherence(rhos)

    def record(self, rho0):
        rhos = self.states(rho0)
        return TrajectoryRecord(
            times=self.times,
            maps=self.maps,
            states=rhos,
            population=population(rhos),
            coherence=coherence(rhos),
            min_choi=min_choi_eigenvalue(self.maps),
        )


def _as_generator_fn(generator):
    if callable(generator):
        return generator
    L = np.asarray(generator, dtype=float)
    return lambda t: L


def _rk4(gen, y, a, b, n):
    h = (b - a) / n
    t = a
    L0 = gen(t)
    for _ in range(n):
        Lm = gen(t + h / 2)
        L1 = gen(t + h)
        k1 = L0 @ y
        k2 = Lm @ (y + h / 2 * k1)
        k3 = Lm @ (y + h / 2 * k2)
        k4 = L1 @ (y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        L0 = L1
    return y


def integrate_linear(generator, y0, times, controls=None):
    """Solve ``dy/dt = L(t) y`` on ``times`` for a vector or matrix ``y``.

    Each output interval is integrated with ``n`` and ``2n`` RK4 substeps;
    ``n`` is doubled until the two agree to ``15 * tol`` and the result is
    Richardson-extrapolated. Raises :class:`StepSizeUnderflowError` when the
    substep budget is exhausted.
    """
    controls = controls or IntegratorControls()
    gen = _as_generator_fn(generator)
    times = check_times(times)
    y = np.array(y0, dtype=float)
    out = np.empty((len(times),) + y.shape)
    out[0] = y
    n_prev = 1
    for i in range(len(times) - 1):
        a, b = times[i], times[i + 1]
        scale = float(np.max(np.abs(gen(a))))
        n = max(1, math.ceil((b - a) * controls.h_scale * scale), n_prev // 2)
        coarse = _rk4(gen, y, a, b, n)
        fine = _rk4(gen, y, a, b, 2 * n)
        while np.max(np.abs(fine - coarse)) > 15 * controls.tol:
            n *= 2
            if 2 * n > controls.max_substeps:
                raise StepSizeUnderflowError(
                    f"tolerance {controls.tol:g} not met on [{a}, {b}] with {2 * n} substeps"
                )
            coarse = fine
            fine = _rk4(gen, y, a, b, 2 * n)
        y = fine + (fine - coarse) / 15
        out[i + 1] = y
        n_prev = n
    return out


def integrate_map(generator: GeneratorLike, times, controls=None) -> MapTrajectory:
    """Time-ordered exponential of ``generator`` sampled on ``times``.

    ``generator`` is a constant 4x4 matrix or a callable ``t -> L(t)``.
    The first row of every map is reset to ``(1, 0, 0, 0)``.
    """
    times = check_times(times)
    maps = integrate_linear(generator, IDENTITY_MAP, times, controls)
    maps[:, 0, :] = IDENTITY_MAP[0]
    return MapTrajectory(times=times, maps=maps)


def semigroup_map(L, dt):
    """``exp(L dt)`` by scaling and squaring (scipy's Pade implementation)."""
    if np.any(np.asarray(dt) < 0):
        raise ValueError("dt must be nonnegative")
    L = np.asarray(L, dtype=float)
    dt = np.asarray(dt, dtype=float)
    F = expm(L * dt[..., None, None])
    F[..., 0, :] = IDENTITY_MAP[0]
    return F


def semigroup_trajectory(L, times):
    times = check_times(times)
    return MapTrajectory(times=times, maps=semigroup_map(L, times - times[0]))


@dataclass(frozen=True)
class PCIntegrals:
    """Accumulated phase, transverse and longitudinal log-contractions, z-shift."""

    phi: np.ndarray
    Gamma: np.ndarray
    kappa: np.ndarray
    delta: np.ndarray


def _cumulative(rate, times):
    if rate.antiderivative is not None:
        return np.asarray(rate.antiderivative(times) - rate.antiderivative(times[0]), dtype=float)
    pieces = [rate.integral(a, b) for a, b in zip(times[:-1], times[1:])]
    return np.concatenate([[0.0], np.cumsum(pieces)])


def pc_integrals_on_grid(rates: PCRates, times, controls=None) -> PCIntegrals:
    """The four PC integrals at every grid time, measured from ``times[0]``.

    ``kappa`` solves ``dk/dt = (g+ - g-) - (g+ + g-) k`` with the same step
    controller as :func:`integrate_map`, avoiding the nested quadrature.
    Constant ``g+`` and ``g-`` use the exponential closed form instead.
    """
    times = check_times(times)
    h = _cumulative(rates.h, times)
    gp = _cumulative(rates.gamma_plus, times)
    gm = _cumulative(rates.gamma_minus, times)
    gz = _cumulative(rates.gamma_z, times)

    if rates.gamma_plus.is_constant and rates.gamma_minus.is_constant:
        a, b = rates.gamma_plus.value, rates.gamma_minus.value
        kappa = sz_semigroup(a, b, 0.0, times - times[0])
    elif len(times) > 1:
        def kappa_gen(t):
            a, b = float(rates.gamma_plus(t)), float(rates.gamma_minus(t))
            return np.array([[0.0, 0.0], [a - b, -(a + b)]])

        kappa = integrate_linear(kappa_gen, np.array([1.0, 0.0]), times, controls)[:, 1]
    else:
        kappa = np.zeros(1)
    return PCIntegrals(
        phi=h + rates.omega0 * (times - times[0]),
        Gamma=-0.5 * (gp + gm + 4 * gz),
        kappa=kappa,
        delta=-(gp + gm),
    )


def pc_integrals(rates: PCRates, t0, t, controls=None) -> PCIntegrals:
    if t < t0:
        raise ValueError("t must not precede t0")
    if t == t0:
        return PCIntegrals(phi=0.0, Gamma=0.0, kappa=0.0, delta=0.0)
    ints = pc_integrals_on_grid(rates, np.array([t0, t], dtype=float), controls)
    return PCIntegrals(*(float(getattr(ints, k)[-1]) for k in ("phi", "Gamma", "kappa", "delta")))


def pc_map(ints: PCIntegrals):
    """Transfer matrix of a PC dynamics from its integrals (broadcasts)."""
    phi, Gamma, kappa, delta = np.broadcast_arrays(
        *(np.asarray(getattr(ints, k), dtype=float) for k in ("phi", "Gamma", "kappa", "delta"))
    )
    F = np.zeros(phi.shape + (4, 4))
    scale = np.exp(Gamma)
    F[..., 0, 0] = 1.0
    F[..., 1, 1] = F[..., 2, 2] = scale * np.cos(phi)
    F[..., 1, 2] = -scale * np.sin(phi)
    F[..., 2, 1] = scale * np.sin(phi)
    F[..., 3, 0] = kappa
    F[..., 3, 3] = np.exp(delta)
    return F


def pc_trajectory(rates: PCRates, times, controls=None) -> MapTrajectory:
    times = check_times(times)
    return MapTrajectory(times=times, maps=pc_map(pc_integrals_on_grid(rates, times, controls)))


def _sinhc(z):
    """``sinh(z) / z`` with the removable singularity at zero."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-6
    safe = np.where(small, 1.0, z)
    return np.where(small, 1 + z**2 / 6, np.sinh(safe) / safe)


def npc_transversal_solution(theta, phi, gamma, omega0, t):
    """Population and coherence of the ``vartheta = 0`` spin-boson semigroup.

    Exact solution for the initial pure state ``(theta, phi)``; the complex
    square root covers the underdamped regime ``gamma < omega0``.
    """
    t = np.asarray(t, dtype=float)
    root = np.sqrt(complex(gamma**2 - omega0**2))
    osc = np.cosh(root * t) + (np.exp(2j * phi) * gamma - 1j * omega0) * t * _sinhc(root * t)
    c = np.sin(theta) / 2 * np.exp(-gamma * t - 1j * phi) * osc
    p = 0.5 * (1 + np.cos(theta) * np.exp(-2 * gamma * t))
    return p, c


def pc_solution(theta, phi0, ints: PCIntegrals):
    """Population and coherence of a PC dynamics started in the pure state ``(theta, phi0)``.

    The initial phase enters as ``exp(-i phi0)`` on top of the accumulated
    phase. For non-unital maps the z-shift ``kappa`` adds to ``S_z``.
    """
    Gamma = np.asarray(ints.Gamma, dtype=float)
    p = 0.5 * (1 + np.asarray(ints.kappa) + np.cos(theta) * np.exp(np.asarray(ints.delta)))
    c = np.sin(theta) / 2 * np.exp(Gamma - 1j * (np.asarray(ints.phi) + phi0))
    return p, c


def sz_semigroup(gamma_plus, gamma_minus, sz0, dt):
    """``S_z`` under constant PC rates after time ``dt``.

    Relaxes exponentially towards ``(g+ - g-)/(g+ + g-)``; with both rates zero
    ``S_z`` stays put.
    """
    total = gamma_plus + gamma_minus
    decay = np.exp(-total * np.asarray(dt, dtype=float))
    fixed = (gamma_plus - gamma_minus) / total if total != 0 else 0.0
    return fixed * (1 - decay) + decay * sz0
