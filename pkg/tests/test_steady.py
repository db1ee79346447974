"""Superoperator form, steady-state solver and RK4 propagation."""

import numpy as np
import pytest

from vapor_eit.model import AtomParams, ExchangeModel, FieldParams, master_rhs
from vapor_eit.steady import (
    DegenerateSteadyState,
    StepTooLarge,
    ZeroProbe,
    build_liouvillian,
    liouvillian_family,
    propagate,
    steady_state,
    susceptibility,
)
from vapor_eit.validate import random_parameters

from conftest import random_density

IDENTITY_VEC = np.eye(4).reshape(16)
PAPER_FIELDS = FieldParams.from_amplitudes(probe=0.001, coupling=1.0)


def test_liouvillian_action_matches_direct_generator(rng):
    for _ in range(100):
        atom, fields, exchange = random_parameters(rng)
        rho = random_density(rng)
        lv = build_liouvillian(atom, fields, exchange)
        direct = master_rhs(rho, atom, fields, exchange)
        assert np.abs((lv @ rho.reshape(16)).reshape(4, 4) - direct).max() <= 1e-12


def test_liouvillian_left_null_vector(rng):
    for _ in range(50):
        atom, fields, exchange = random_parameters(rng)
        lv = build_liouvillian(atom, fields, exchange)
        assert np.abs(IDENTITY_VEC @ lv).max() <= 1e-12


def test_liouvillian_rate_free_is_imaginary_diagonal():
    atom = AtomParams(omega43=26.0, gamma31=0.0, gamma32=0.0, gamma41=0.0, gamma42=0.0)
    lv = build_liouvillian(atom, FieldParams(delta_p=1.5, delta_c=0.5))
    assert np.abs(lv - np.diag(np.diag(lv))).max() == 0.0
    assert np.abs(np.diag(lv).real).max() == 0.0


def test_liouvillian_demo_configuration_has_rank_15():
    lv = build_liouvillian(AtomParams(), PAPER_FIELDS)
    singvals = np.linalg.svd(lv, compute_uv=False)
    assert int(np.sum(singvals > 1e-12 * singvals[0])) == 15


def test_liouvillian_family_reassembles_detunings(rng):
    atom, fields, exchange = random_parameters(rng)
    base, l_dp, l_dc = liouvillian_family(atom, fields, exchange)
    from dataclasses import replace

    for dp, dc in ((0.3, -1.2), (5.0, 2.0)):
        direct = build_liouvillian(atom, replace(fields, delta_p=dp, delta_c=dc), exchange)
        assert np.abs(base + dp * l_dp + dc * l_dc - direct).max() <= 1e-12


def test_steady_state_balanced_ground_equilibrium():
    lv = build_liouvillian(AtomParams(), FieldParams(), ExchangeModel.effective(0.01))
    rho = steady_state(lv)
    assert np.abs(rho - np.diag([0.5, 0.5, 0.0, 0.0])).max() <= 1e-12


def test_steady_state_degenerate_without_fields_or_decay():
    with pytest.raises(DegenerateSteadyState):
        steady_state(build_liouvillian(AtomParams(), FieldParams()))


def test_steady_state_degenerate_with_dark_sectors():
    # coupling off and |3>->|2> closed: |2> and |4> become disconnected traps
    atom = AtomParams(gamma31=1.0, gamma32=0.0, gamma41=0.0, gamma42=0.0)
    fields = FieldParams(omega_p3=1e-3)
    with pytest.raises(DegenerateSteadyState):
        steady_state(build_liouvillian(atom, fields))


def test_steady_state_demo_transparency_dip():
    atom = AtomParams()
    from dataclasses import replace

    def im_chi(delta):
        lv = build_liouvillian(atom, replace(PAPER_FIELDS, delta_p=delta))
        return susceptibility(steady_state(lv), PAPER_FIELDS).imag

    assert im_chi(0.0) < 0.05 * im_chi(0.5)


def test_propagate_identity_for_zero_generator():
    rho0 = random_density(np.random.default_rng(7))
    out = propagate(rho0, np.zeros((16, 16), dtype=complex), t_final=1.0, dt=0.1)
    assert np.array_equal(out, rho0)


def test_propagate_exponential_decay():
    atom = AtomParams(gamma31=1.0, gamma32=0.0, gamma41=0.0, gamma42=0.0)
    lv = build_liouvillian(atom, FieldParams())
    rho0 = np.diag([0.0, 0.0, 1.0, 0.0]).astype(complex)
    out = propagate(rho0, lv, t_final=1.0, dt=1e-3)
    assert abs(out[2, 2].real - np.exp(-1.0)) <= 1e-8


def test_propagate_agrees_with_steady_state_on_demo_scan():
    from dataclasses import replace

    atom = AtomParams()
    for delta in (-2.0, 0.0, 0.5, 3.0):
        lv = build_liouvillian(atom, replace(PAPER_FIELDS, delta_p=delta))
        rho_direct = steady_state(lv)
        rho0 = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
        rho_rk4 = propagate(rho0, lv, t_final=120.0, dt=0.05)
        assert np.abs(rho_direct - rho_rk4).max() <= 1e-6


def test_propagate_rejects_unstable_step():
    lv = build_liouvillian(AtomParams(), PAPER_FIELDS)
    rho0 = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    with pytest.raises(StepTooLarge):
        propagate(rho0, lv, t_final=400.0, dt=1.0)


def test_propagate_trace_drift_stays_tiny():
    lv = build_liouvillian(AtomParams(), PAPER_FIELDS, ExchangeModel.direct(0.01))
    rho0 = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    out = propagate(rho0, lv, t_final=200.0, dt=0.05)
    assert abs(np.trace(out) - 1.0) <= 1e-9


def test_susceptibility_arithmetic():
    rho = np.zeros((4, 4), dtype=complex)
    rho[2, 0] = 0.001j
    fields = FieldParams(omega_p3=0.001, omega_p4=0.001)
    assert susceptibility(rho, fields) == 1j

    # a term with exactly zero probe amplitude is dropped
    rho[3, 0] = 123.0
    assert susceptibility(rho, FieldParams(omega_p3=0.001, omega_p4=0.0)) == 1j

    with pytest.raises(ZeroProbe):
        susceptibility(rho, FieldParams())


def test_steady_state_invariant_under_time_rescaling():
    base_atom = AtomParams()
    rho_ref = steady_state(build_liouvillian(base_atom, PAPER_FIELDS, ExchangeModel.direct(0.01)))
    for lam in (0.5, 3.0):
        atom = AtomParams(
            omega43=base_atom.omega43 * lam,
            gamma31=0.5 * lam,
            gamma32=0.5 * lam,
            gamma41=0.5 * lam,
            gamma42=0.5 * lam,
        )
        fields = FieldParams.from_amplitudes(probe=0.001 * lam, coupling=lam)
        rho = steady_state(build_liouvillian(atom, fields, ExchangeModel.direct(0.01 * lam)))
        assert np.abs(rho - rho_ref).max() <= 1e-10


def test_two_level_absorption_is_even_in_detuning():
    # coupling off, |4> decoupled: Im chi must be symmetric about resonance
    atom = AtomParams(gamma31=1.0, gamma32=0.0, gamma41=0.5, gamma42=0.5)
    fields = FieldParams(omega_p3=1e-4)
    from dataclasses import replace

    deltas = np.linspace(0.25, 5.0, 20)
    lvs = np.stack(
        [
            build_liouvillian(atom, replace(fields, delta_p=float(s * d)))
            for d in deltas
            for s in (+1, -1)
        ]
    )
    rho0 = np.zeros((2 * deltas.size, 4, 4), dtype=complex)
    rho0[:, 0, 0] = 1.0
    rho = propagate(rho0, lvs, t_final=60.0, dt=0.1)
    im = np.array([susceptibility(r, fields).imag for r in rho]).reshape(-1, 2)
    assert np.abs(im[:, 0] - im[:, 1]).max() <= 1e-9
