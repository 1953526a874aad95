import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qubitmarkov.diagnostics import (
    blp_witness,
    cp_divisibility_scan,
    default_blp_pairs,
    extrema_profile,
    pc_scan,
    verdicts,
)
from qubitmarkov.generators import PCRates, SpinBosonParams, mimic_pc_rates, npc_generator, pc_generator
from qubitmarkov.maps import DEPOLARIZING_MAP, IDENTITY_MAP
from qubitmarkov.propagation import MapTrajectory, pc_trajectory, semigroup_trajectory, time_grid
from qubitmarkov.states import pure_state, trace_distance

T = time_grid(3.0, 600)


def fig2_trajectory(vartheta=np.pi / 3, gamma=1.0):
    return semigroup_trajectory(npc_generator(SpinBosonParams.from_semigroup_rate(10.0, vartheta, gamma)), T)


def test_extrema_of_sine():
    t = np.linspace(0, 4 * np.pi, 2001)
    prof = extrema_profile(t, np.sin(t), label="sin")
    kinds = [k for _, _, k in prof.extrema]
    assert kinds == ["max", "min", "max", "min"]
    assert prof.extrema[0][0] == pytest.approx(np.pi / 2, abs=1e-2)
    assert not prof.is_monotone


def test_plateau_noise_is_not_an_extremum(rng):
    t = np.linspace(0, 1, 200)
    values = np.concatenate([np.linspace(1, 0, 100), 1e-13 * rng.normal(size=100)])
    assert extrema_profile(t, values).is_monotone


@given(st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=30).map(sorted))
def test_sorted_series_is_monotone(values):
    assert extrema_profile(np.arange(len(values)), values).is_monotone


def test_extrema_profile_rejects_short_series():
    with pytest.raises(ValueError):
        extrema_profile([0, 1], [0, 1])


def test_default_pairs():
    pairs = default_blp_pairs()
    assert len(pairs) == 22
    for a, b in pairs:
        assert trace_distance(a, b) == pytest.approx(1.0)


def test_blp_on_depolarizing_contraction():
    traj = fig2_trajectory()
    report = blp_witness(traj)
    assert report.distances.shape == (22, len(T))
    assert report.is_monotone()
    assert np.all(report.backflow <= 1e-9)
    with pytest.raises(ValueError):
        blp_witness(traj, pairs=[])


def test_divisibility_of_semigroup():
    report = cp_divisibility_scan(fig2_trajectory())
    assert report.verdict
    assert report.interval_min.shape == (600,)
    assert not report.undefined.any()
    coarse = cp_divisibility_scan(fig2_trajectory(), stride=7)
    assert coarse.t_ends[-1] == T[-1]
    assert len(coarse.interval_min) == 86


def test_singular_map_gives_undefined_interval():
    maps = np.stack([IDENTITY_MAP, DEPOLARIZING_MAP, DEPOLARIZING_MAP])
    report = cp_divisibility_scan(MapTrajectory(np.array([0.0, 1.0, 2.0]), maps))
    assert report.undefined.tolist() == [False, True]
    assert report.verdict
    assert report.global_min == pytest.approx(0.25, abs=1e-15)


def test_pc_scan_separates_models():
    assert pc_scan(fig2_trajectory()).max() > 0.01
    assert pc_scan(fig2_trajectory(vartheta=np.pi / 2)).max() < 1e-12
    pc = pc_trajectory(PCRates(omega0=3.0, gamma_plus=0.2, gamma_minus=0.6, gamma_z=0.3), T)
    assert pc_scan(pc).max() < 1e-12


def test_fig2_extrema_counts():
    traj = fig2_trajectory()
    counts = []
    for phi in (0.0, np.pi / 2):
        p, c = traj.observables(pure_state(np.pi / 3, phi))
        counts.append((len(extrema_profile(T, p)), len(extrema_profile(T, np.abs(c)))))
    assert counts == [(3, 7), (2, 7)]


def test_transversal_decay_rate_oscillates():
    # |c| itself decreases in steps at vartheta = 0; the oscillation sits in its log-derivative
    traj = fig2_trajectory(vartheta=0.0)
    _, c = traj.observables(pure_state(np.pi / 3, 0.0))
    assert extrema_profile(T, np.abs(c)).is_monotone
    rate = -np.diff(np.log(np.abs(c))) / np.diff(T)
    assert len(extrema_profile(T[1:], rate)) >= 10


def test_pure_dephasing_keeps_population():
    p, _ = fig2_trajectory(vartheta=np.pi / 2).observables(pure_state(np.pi / 3, 0.0))
    assert np.ptp(p) < 1e-10


def test_verdicts_fig2_headline():
    v = verdicts(fig2_trajectory(), pure_state(np.pi / 3, 0.0))
    ev = v.pop("evidence")
    assert v == {"cp_divisible": True, "blp_monotone": True, "phase_covariant": False,
                 "p_monotone": False, "c_monotone": False}
    assert ev["undefined_intervals"] == 0
    assert ev["max_pc_residual"] > 0.01


def test_verdicts_pc_semigroup_all_true():
    L = pc_generator(PCRates(omega0=10.0, gamma_plus=1.0, gamma_minus=1.0, gamma_z=1.0), 0.0)
    v = verdicts(semigroup_trajectory(L, T), pure_state(np.pi / 3, 0.0))
    v.pop("evidence")
    assert all(v.values())


def test_mimic_verdicts_default_scale():
    traj = pc_trajectory(mimic_pc_rates(1.0, 10.0, np.pi / 2), T)
    v = verdicts(traj, pure_state(np.pi / 3, np.pi / 2))
    v.pop("evidence")
    assert v == {"cp_divisible": False, "blp_monotone": True, "phase_covariant": True,
                 "p_monotone": True, "c_monotone": True}


def test_mimic_verdicts_literal_scale():
    traj = pc_trajectory(mimic_pc_rates(1.0, 10.0, np.pi / 2, dephasing_scale=1.0), T)
    v = verdicts(traj, pure_state(np.pi / 3, np.pi / 2))
    ev = v.pop("evidence")
    assert v == {"cp_divisible": False, "blp_monotone": False, "phase_covariant": True,
                 "p_monotone": True, "c_monotone": False}
    # the x pair registers the backflow
    report = blp_witness(traj)
    assert report.max_increase[-1] > 1e-3
    assert ev["blp_total_backflow"] > 0.01
