import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubitmarkov.errors import MissingCutoffError, NonHermitianHamiltonianError, QuadratureError
from qubitmarkov.generators import (
    LindbladTerm,
    PCRates,
    Rate,
    SpinBosonParams,
    as_rate,
    general_generator,
    mimic_pc_rates,
    noise_rate,
    npc_generator,
    npc_jump_operator,
    ohmic_rate,
    pc_generator,
    pc_hamiltonian,
    pc_lindblad_terms,
    semigroup_rate,
)
from qubitmarkov.states import SIGMA_X, SIGMA_Z

rates = st.floats(-2, 5, allow_nan=False)


@settings(max_examples=40)
@given(rates, rates, rates, rates, st.floats(0, 20, allow_nan=False))
def test_pc_generator_matches_lindblad_form(gp, gm, gz, h, w0):
    r = PCRates(omega0=w0, h=h, gamma_plus=gp, gamma_minus=gm, gamma_z=gz)
    direct = general_generator(pc_hamiltonian(r), pc_lindblad_terms(r), 0.7)
    assert np.allclose(pc_generator(r, 0.7), direct, atol=1e-12)


def test_pc_generator_entries():
    L = pc_generator(PCRates(omega0=2.0, gamma_plus=0.5, gamma_minus=1.5, gamma_z=0.25), 0.0)
    expected = np.array([
        [0, 0, 0, 0],
        [0, -1.5, -2.0, 0],
        [0, 2.0, -1.5, 0],
        [-1.0, 0, 0, -2.0],
    ])
    assert np.allclose(L, expected)


@pytest.mark.parametrize("vartheta", [0.0, np.pi / 3, np.pi / 2, 1.1])
def test_npc_generator_matches_lindblad_form(vartheta):
    p = SpinBosonParams.from_semigroup_rate(10.0, vartheta, 0.8)
    terms = [LindbladTerm(semigroup_rate(p), npc_jump_operator(vartheta))]
    direct = general_generator(5.0 * SIGMA_Z, terms, 0.0)
    assert np.allclose(npc_generator(p), direct, atol=1e-12)


def test_npc_generator_is_unital_and_trace_preserving():
    L = npc_generator(SpinBosonParams.from_semigroup_rate(3.0, 0.4, 1.0))
    assert np.all(L[0] == 0)
    assert np.all(L[:, 0] == 0)


def test_semigroup_rate_round_trip():
    p = SpinBosonParams.from_semigroup_rate(10.0, 0.0, 1.3, beta=2.0)
    assert semigroup_rate(p) == pytest.approx(1.3, abs=1e-15)
    assert noise_rate(p, 5.0) == semigroup_rate(p)


def test_ohmic_rate_limits():
    p = SpinBosonParams(omega0=1.0, vartheta=0.0, lam=1.0, beta=1.0, omega_c=1e6)
    assert float(ohmic_rate(p, 0.0)) == 0.0
    assert float(ohmic_rate(p, 1e9)) == pytest.approx(np.pi / 2, abs=1e-12)
    with pytest.raises(MissingCutoffError):
        ohmic_rate(SpinBosonParams(1.0, 0.0, 1.0, 1.0), 1.0)


def test_spin_boson_validation():
    with pytest.raises(ValueError):
        SpinBosonParams(1.0, 0.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        SpinBosonParams(1.0, 0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        SpinBosonParams(1.0, 0.0, 1.0, 1.0, omega_c=-2.0)


def test_non_hermitian_hamiltonian_rejected():
    with pytest.raises(NonHermitianHamiltonianError):
        general_generator(np.array([[0, 1], [0, 0]]), [], 0.0)


def test_time_dependent_operator():
    term = LindbladTerm(1.0, lambda t: np.cos(t) * SIGMA_X)
    assert np.allclose(term.operator_at(0.0), SIGMA_X)


def test_rate_integrals():
    r = as_rate(lambda t: t**2)
    assert r.integral(0.0, 3.0) == pytest.approx(9.0, abs=1e-12)
    c = as_rate(2.5)
    assert c.is_constant and not r.is_constant
    assert c.integral(1.0, 3.0) == pytest.approx(5.0)
    assert as_rate(c) is c


def test_rate_quadrature_failure():
    wild = Rate(fn=lambda t: 1 / np.sqrt(abs(t - 0.5)) * np.sin(1e4 * t))
    with np.errstate(divide="ignore"), pytest.raises(QuadratureError):
        wild.integral(0.0, 1.0)


def test_mimic_rates_default_and_literal_scale():
    gamma, w0 = 0.7, 10.0
    half = mimic_pc_rates(gamma, w0, 0.0)
    full = mimic_pc_rates(gamma, w0, 0.0, dephasing_scale=1.0)
    assert float(full.gamma_z(0.0)) == pytest.approx(-gamma)
    assert float(half.gamma_z(0.0)) == pytest.approx(-gamma / 2)
    assert float(half.h(np.pi / 40)) == pytest.approx(-gamma)
    assert float(half.gamma_plus(1.0)) == float(half.gamma_minus(1.0)) == gamma


@given(st.floats(0, np.pi), st.floats(0.1, 3.0))
def test_mimic_antiderivatives_agree_with_quadrature(phi, t):
    r = mimic_pc_rates(1.0, 10.0, phi)
    for rate in (r.h, r.gamma_z):
        assert rate.integral(0.0, t) == pytest.approx(Rate(fn=rate.fn).integral(0.0, t), abs=1e-10)


def test_mimic_rates_without_precession():
    r = mimic_pc_rates(1.0, 0.0, np.pi / 2)
    assert r.gamma_z.integral(0.0, 2.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        mimic_pc_rates(-1.0, 10.0, 0.0)
