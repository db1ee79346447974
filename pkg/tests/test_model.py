"""Hamiltonian construction and the dissipative generators."""

import numpy as np
import pytest

from vapor_eit.model import (
    AtomParams,
    ExchangeModel,
    FieldParams,
    build_hamiltonian,
    exchange_rhs_direct,
    exchange_rhs_effective,
    lindblad_rhs,
    master_rhs,
)
from vapor_eit.steady import build_liouvillian, propagate

from conftest import random_density

PAPER_FIELDS = FieldParams.from_amplitudes(probe=0.001, coupling=1.0)


def test_hamiltonian_demo_parameters():
    # omega_p3 = omega_p4 = 0.001, omega_c3 = -omega_c4 = 1, resonant coupling
    atom = AtomParams(omega43=26.0)
    h = build_hamiltonian(atom, PAPER_FIELDS)
    assert np.array_equal(np.diag(-2.0 * h).real, [0.0, 0.0, 0.0, -52.0])
    assert h[0, 2] == -0.5 * 0.001  # probe on |1>-|3>
    assert h[1, 2] == -0.5 * 1.0    # coupling on |2>-|3>
    assert h[1, 3] == +0.5 * 1.0    # sign-flipped coupling on |2>-|4>


def test_hamiltonian_zero_inputs_is_zero_matrix():
    atom = AtomParams(omega43=0.0)
    h = build_hamiltonian(atom, FieldParams())
    assert np.array_equal(h, np.zeros((4, 4)))


def test_hamiltonian_exactly_hermitian(rng):
    for _ in range(20):
        atom = AtomParams(omega43=float(rng.uniform(0, 30)))
        fields = FieldParams(*rng.uniform(-2, 2, size=6))
        h = build_hamiltonian(atom, fields)
        assert np.array_equal(h, h.conj().T)


def test_rhs_ground_state_is_dark_without_fields():
    rho = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    out = lindblad_rhs(rho, AtomParams(), FieldParams())
    assert np.abs(out).max() == 0.0


def test_rhs_excited_decay_rates():
    # |3> decays at gamma31 + gamma32, populating both ground states
    rho = np.diag([0.0, 0.0, 1.0, 0.0]).astype(complex)
    atom = AtomParams(gamma31=0.5, gamma32=0.5)
    out = lindblad_rhs(rho, atom, FieldParams())
    assert np.allclose(out, np.diag([0.5, 0.5, -1.0, 0.0]), atol=1e-15)


def test_rhs_preserves_trace_and_hermiticity(rng):
    atom = AtomParams(gamma3_deph=0.1, gamma4_deph=0.05, gamma2_deph=0.02)
    for _ in range(50):
        rho = random_density(rng)
        out = lindblad_rhs(rho, atom, PAPER_FIELDS)
        assert abs(np.trace(out)) <= 1e-13
        assert np.abs(out - out.conj().T).max() <= 1e-13


@pytest.mark.parametrize("exchange", [ExchangeModel.direct(0.03), ExchangeModel.effective(0.03)])
def test_exchange_preserves_trace_and_hermiticity(rng, exchange):
    for _ in range(50):
        rho = random_density(rng)
        out = master_rhs(rho, AtomParams(), PAPER_FIELDS, exchange)
        assert abs(np.trace(out)) <= 1e-13
        assert np.abs(out - out.conj().T).max() <= 1e-13


def test_exchange_direct_values():
    rho = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    out = exchange_rhs_direct(rho, 0.01)
    assert np.allclose(out, np.diag([-0.005, 0.005, 0.0, 0.0]), atol=1e-18)

    balanced = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
    assert np.abs(exchange_rhs_direct(balanced, 0.7)).max() == 0.0

    assert abs(np.trace(exchange_rhs_direct(random_density(np.random.default_rng(3)), 0.2))) <= 1e-15


def test_exchange_effective_values():
    balanced = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
    assert np.abs(exchange_rhs_effective(balanced, 0.4)).max() == 0.0

    # balanced populations with a ground coherence c: the coherence decays at
    # the full rate (each of the two channels contributes half)
    c = 0.2 + 0.1j
    rho = balanced.copy()
    rho[0, 1] = c
    rho[1, 0] = np.conj(c)
    out = exchange_rhs_effective(rho, 0.05)
    assert abs(out[0, 1] - (-0.05 * c)) <= 1e-15
    assert abs(np.trace(out)) <= 1e-15


def test_population_flows_from_excited_to_ground():
    # fields and dephasing off: population conserved, excited levels only drain
    atom = AtomParams(gamma31=0.4, gamma32=0.6, gamma41=0.3, gamma42=0.2)
    lv = build_liouvillian(atom, FieldParams())
    rho = np.diag([0.1, 0.2, 0.4, 0.3]).astype(complex)
    excited_prev = 0.7
    for _ in range(10):
        rho = propagate(rho, lv, t_final=1.2, dt=0.01)
        excited = (rho[2, 2] + rho[3, 3]).real
        assert abs(np.trace(rho) - 1.0) <= 1e-12
        assert excited < excited_prev
        excited_prev = excited
    assert excited_prev < 1e-2


def _three_level_rhs(rho3, omega_p, omega_c, delta_p, delta_c, g31, g32):
    """Standalone Lambda-system generator written out longhand."""
    h = -0.5 * np.array(
        [
            [0.0, 0.0, omega_p],
            [0.0, 2.0 * (delta_p - delta_c), omega_c],
            [omega_p, omega_c, 2.0 * delta_p],
        ],
        dtype=complex,
    )
    out = -1j * (h @ rho3 - rho3 @ h)
    for i, rate in ((0, g31), (1, g32)):
        c = np.zeros((3, 3), dtype=complex)
        c[i, 2] = 1.0
        cdc = c.conj().T @ c
        out += rate * (c @ rho3 @ c.conj().T) - 0.5 * rate * (cdc @ rho3 + rho3 @ cdc)
    return out


def test_level4_decoupling_matches_three_level_model(rng):
    atom = AtomParams(gamma41=0.0, gamma42=0.0)
    fields = FieldParams(omega_p3=0.3, omega_p4=0.0, omega_c3=1.1, omega_c4=0.0,
                         delta_p=0.7, delta_c=-0.2)
    for _ in range(20):
        rho3 = random_density(rng, n=3)
        rho4 = np.zeros((4, 4), dtype=complex)
        rho4[:3, :3] = rho3
        out4 = lindblad_rhs(rho4, atom, fields)
        out3 = _three_level_rhs(rho3, 0.3, 1.1, 0.7, -0.2, atom.gamma31, atom.gamma32)
        assert np.abs(out4[:3, :3] - out3).max() <= 1e-10
        assert np.abs(out4[3, :]).max() == 0.0
        assert np.abs(out4[:, 3]).max() == 0.0


def test_parameter_validation():
    with pytest.raises(ValueError):
        AtomParams(gamma31=-0.1)
    with pytest.raises(ValueError):
        AtomParams(omega43=-1.0)
    with pytest.raises(ValueError):
        AtomParams(dipole_signs=(1, 1, 2, -1))
    with pytest.raises(ValueError):
        ExchangeModel("direct", -0.5)
    with pytest.raises(ValueError):
        ExchangeModel("bogus", 0.1)
    with pytest.raises(ValueError):
        ExchangeModel("none", 0.1)


def test_from_amplitudes_sign_pattern():
    f = FieldParams.from_amplitudes(probe=0.001, coupling=1.0, signs=(1, 1, 1, -1))
    assert (f.omega_p3, f.omega_p4, f.omega_c3, f.omega_c4) == (0.001, 0.001, 1.0, -1.0)
