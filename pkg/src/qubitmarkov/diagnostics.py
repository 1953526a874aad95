"""Markovianity, phase-covariance and monotonicity verdicts for map trajectories."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import SingularMapError
from .maps import (
    CP_TOL,
    PC_GRID,
    fibonacci_sphere,
    min_choi_eigenvalue,
    phase_covariance_residual,
    propagator,
)
from .propagation import MapTrajectory
from .states import KET_0, KET_1, bloch_to_density, projector, trace_distance

EXTREMA_REL_TOL = 1e-9
PC_TOL = 1e-10


@dataclass
class DivisibilityReport:
    """Minimum Choi eigenvalue of every interval propagator.

    ``interval_min[i]`` belongs to ``[t_starts[i], t_ends[i]]``; it is NaN when
    the propagator is undefined because the earlier map is singular.
    """

    t_starts: np.ndarray
    t_ends: np.ndarray
    interval_min: np.ndarray
    tol: float

    @property
    def undefined(self):
        return np.isnan(self.interval_min)

    @property
    def global_min(self):
        defined = self.interval_min[~self.undefined]
        return float(defined.min()) if defined.size else float("nan")

    @property
    def verdict(self):
        defined = self.interval_min[~self.undefined]
        return bool(np.all(defined >= -self.tol))


def cp_divisibility_scan(traj: MapTrajectory, tol=CP_TOL, stride=1) -> DivisibilityReport:
    """CP test of the propagators between grid points ``stride`` apart."""
    idx = np.arange(0, len(traj), stride)
    if idx[-1] != len(traj) - 1:
        idx = np.append(idx, len(traj) - 1)
    props, minima = [], np.full(len(idx) - 1, np.nan)
    for k, (i, j) in enumerate(zip(idx[:-1], idx[1:])):
        try:
            props.append((k, propagator(traj.maps[j], traj.maps[i])))
        except SingularMapError:
            continue
    if props:
        ks, mats = zip(*props)
        minima[list(ks)] = min_choi_eigenvalue(np.stack(mats))
    return DivisibilityReport(
        t_starts=traj.times[idx[:-1]], t_ends=traj.times[idx[1:]], interval_min=minima, tol=tol
    )


def default_blp_pairs(n_antipodal=20):
    """Deterministic state pairs for the trace-distance witness.

    Antipodal pure states on a golden-spiral grid, followed by the z pair
    ``(|0>, |1>)`` and the x pair ``(|+>, |->)``.
    """
    pairs = []
    for r in fibonacci_sphere(n_antipodal):
        pairs.append((bloch_to_density(r), bloch_to_density(-r)))
    pairs.append((projector(KET_0), projector(KET_1)))
    pairs.append((bloch_to_density([1.0, 0.0, 0.0]), bloch_to_density([-1.0, 0.0, 0.0])))
    return pairs


@dataclass
class BLPReport:
    times: np.ndarray
    distances: np.ndarray  # (n_pairs, n_times)

    @property
    def increments(self):
        return np.diff(self.distances, axis=-1)

    @property
    def max_increase(self):
        """Largest single-step increase of each pair (0 if never increasing)."""
        return np.maximum(self.increments.max(axis=-1, initial=0.0), 0.0)

    @property
    def backflow(self):
        """Sum of positive increments for each pair."""
        return np.clip(self.increments, 0.0, None).sum(axis=-1)

    def is_monotone(self, tol=CP_TOL):
        return bool(np.all(self.max_increase <= tol))


def blp_witness(traj: MapTrajectory, pairs: Optional[Sequence[Tuple[np.ndarray, np.ndarray]]] = None) -> BLPReport:
    pairs = default_blp_pairs() if pairs is None else list(pairs)
    if not pairs:
        raise ValueError("need at least one pair of states")
    distances = np.stack([trace_distance(traj.states(a), traj.states(b)) for a, b in pairs])
    return BLPReport(times=traj.times, distances=distances)


@dataclass
class ExtremaProfile:
    label: str
    extrema: List[Tuple[float, float, str]] = field(default_factory=list)

    @property
    def is_monotone(self):
        return not self.extrema

    def __len__(self):
        return len(self.extrema)


def extrema_profile(times, values, tol=None, label="") -> ExtremaProfile:
    """Interior maxima and minima of a sampled series.

    Steps smaller than ``tol`` (default ``1e-9`` times the series range) count
    as flat, so integrator noise on a plateau does not register as an extremum.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(values) < 3 or len(times) != len(values):
        raise ValueError("need at least three (time, value) samples")
    if tol is None:
        tol = EXTREMA_REL_TOL * float(np.ptp(values))
    diffs = np.diff(values)
    extrema = []
    last_sign, last_end = 0, 0
    for i, d in enumerate(diffs):
        if abs(d) <= tol:
            continue
        sign = 1 if d > 0 else -1
        if last_sign and sign != last_sign:
            extrema.append((float(times[last_end]), float(values[last_end]), "max" if last_sign > 0 else "min"))
        last_sign, last_end = sign, i + 1
    return ExtremaProfile(label=label, extrema=extrema)


def pc_scan(traj: MapTrajectory, n_phi=PC_GRID):
    """Phase-covariance residual at each grid time."""
    return phase_covariance_residual(traj.maps, n_phi)


def verdicts(traj: MapTrajectory, rho0, pairs=None, tol=CP_TOL, stride=1):
    """Summary verdicts of one trajectory plus the numbers behind them.

    Returns a dict with the boolean keys ``cp_divisible``, ``blp_monotone``,
    ``phase_covariant``, ``p_monotone``, ``c_monotone`` (the last two for the
    initial state ``rho0``) and an ``evidence`` sub-dict with the witnessing
    numbers.
    """
    div = cp_divisibility_scan(traj, tol, stride)
    blp = blp_witness(traj, pairs)
    residual = pc_scan(traj)
    pop, coh = traj.observables(rho0)
    p_prof = extrema_profile(traj.times, pop, label="p")
    c_prof = extrema_profile(traj.times, np.abs(coh), label="absC")
    return {
        "cp_divisible": div.verdict,
        "blp_monotone": blp.is_monotone(tol),
        "phase_covariant": bool(residual.max() <= PC_TOL),
        "p_monotone": p_prof.is_monotone,
        "c_monotone": c_prof.is_monotone,
        "evidence": {
            "min_propagator_choi_eigenvalue": div.global_min,
            "undefined_intervals": int(div.undefined.sum()),
            "blp_max_increase": float(blp.max_increase.max()),
            "blp_total_backflow": float(blp.backflow.sum()),
            "max_pc_residual": float(residual.max()),
            "p_extrema": len(p_prof),
            "c_extrema": len(c_prof),
        },
    }
