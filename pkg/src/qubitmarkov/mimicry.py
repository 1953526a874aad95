"""Phase-covariant imitation of the transversal spin-boson semigroup.

A PC master equation with phase-dependent rates (:func:`mimic_pc_rates`)
reproduces the population and, to first order in ``gamma / omega0``, the
coherence of the ``vartheta = 0`` NPC dynamics for *one* initial phase. The
helpers here build that model, compare it with the exact NPC solution, and
map out where the imitating map fails complete positivity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .generators import mimic_pc_rates
from .maps import POSITIVITY_TOL, max_image_radius, min_choi_eigenvalue, phase_covariance_residual
from .propagation import (
    MapTrajectory,
    PCIntegrals,
    check_times,
    npc_transversal_solution,
    pc_integrals_on_grid,
    pc_map,
    pc_solution,
)

DEFAULT_N_PHI = 64
DEFAULT_T_GRID = np.linspace(0.0, 3.0, 200)


def default_phi_grid(n_phi=DEFAULT_N_PHI):
    return np.arange(n_phi) * np.pi / n_phi


@dataclass(frozen=True)
class ArtificialPCRun:
    trajectory: MapTrajectory
    integrals: PCIntegrals
    population: np.ndarray
    coherence: np.ndarray


def artificial_pc_trajectory(gamma, omega0, theta, phi, times, dephasing_scale=0.5) -> ArtificialPCRun:
    times = check_times(times)
    rates = mimic_pc_rates(gamma, omega0, phi, dephasing_scale)
    ints = pc_integrals_on_grid(rates, times)
    p, c = pc_solution(theta, phi, ints)
    return ArtificialPCRun(MapTrajectory(times, pc_map(ints)), ints, p, c)


@dataclass(frozen=True)
class MimicryComparison:
    gamma: float
    omega0: float
    theta: float
    phi: float
    phi_mismatch: float
    times: np.ndarray
    p_npc: np.ndarray
    p_pc: np.ndarray
    absc_npc: np.ndarray
    absc_pc: np.ndarray
    absc_npc_mismatch: np.ndarray
    absc_pc_mismatch: np.ndarray

    @property
    def max_p_deviation(self):
        return float(np.max(np.abs(self.p_pc - self.p_npc)))

    @property
    def max_c_deviation(self):
        return float(np.max(np.abs(self.absc_pc - self.absc_npc)))

    @property
    def mismatch_deviation(self):
        """Error of the ``phi``-built PC map on the state with phase ``phi_mismatch``."""
        return float(np.max(np.abs(self.absc_pc_mismatch - self.absc_npc_mismatch)))


def compare_mimicry(gamma, omega0, theta, phi, phi_mismatch, times, dephasing_scale=0.5) -> MimicryComparison:
    times = check_times(times)
    run = artificial_pc_trajectory(gamma, omega0, theta, phi, times, dephasing_scale)
    p_npc, c_npc = npc_transversal_solution(theta, phi, gamma, omega0, times)
    _, c_npc_mm = npc_transversal_solution(theta, phi_mismatch, gamma, omega0, times)
    # the PC map built for phi, applied to the phi_mismatch state
    _, c_pc_mm = pc_solution(theta, phi_mismatch, run.integrals)
    return MimicryComparison(
        gamma=gamma,
        omega0=omega0,
        theta=theta,
        phi=phi,
        phi_mismatch=phi_mismatch,
        times=times,
        p_npc=p_npc,
        p_pc=run.population,
        absc_npc=np.abs(c_npc),
        absc_pc=np.abs(run.coherence),
        absc_npc_mismatch=np.abs(c_npc_mm),
        absc_pc_mismatch=np.abs(c_pc_mm),
    )


@dataclass(frozen=True)
class CPRegionMap:
    """Minimum Choi eigenvalue of the cumulative imitating map on a phi x t grid."""

    phi: np.ndarray
    t: np.ndarray
    min_eig: np.ndarray  # (len(phi), len(t))
    maps: np.ndarray  # (len(phi), len(t), 4, 4)

    def cp_rows(self, tol=1e-9):
        """Phases for which the map is CP at every scanned time."""
        return np.all(self.min_eig >= -tol, axis=1)

    def positive(self, tol=POSITIVITY_TOL):
        return max_image_radius(self.maps) <= 1 + tol

    def pc_residual(self):
        return phase_covariance_residual(self.maps)


def cp_region_scan(gamma, omega0, phi_grid=None, t_grid=None, dephasing_scale=0.5) -> CPRegionMap:
    phi_grid = default_phi_grid() if phi_grid is None else np.asarray(phi_grid, dtype=float)
    t_grid = DEFAULT_T_GRID if t_grid is None else check_times(t_grid)
    if phi_grid.size == 0:
        raise ValueError("phase grid is empty")
    maps = np.stack([
        pc_map(pc_integrals_on_grid(mimic_pc_rates(gamma, omega0, phi, dephasing_scale), t_grid))
        for phi in phi_grid
    ])
    return CPRegionMap(phi=phi_grid, t=t_grid, min_eig=min_choi_eigenvalue(maps), maps=maps)
