"""Liouvillian construction, steady-state solve and probe susceptibility.

The density matrix is flattened row-major, vec(rho)[4*i + j] = rho[i, j], so
a sandwich map rho -> A rho B vectorizes as kron(A, B.T).  The steady state
is obtained by replacing the d(rho_11)/dt row of the 16x16 generator with the
trace condition and solving the resulting square system.
"""

from __future__ import annotations

import numpy as np

from .model import (
    N_LEVELS,
    AtomParams,
    ExchangeModel,
    FieldParams,
    build_hamiltonian,
    sigma_op,
)

DIM = N_LEVELS * N_LEVELS

#: Relative singular-value cutoff below which the constrained steady-state
#: system is treated as rank deficient.
DEGENERACY_RTOL = 1e-12
#: Maximum allowed 2-norm of L @ vec(rho_ss).
RESIDUAL_TOL = 1e-10

_IDENTITY_VEC = np.eye(N_LEVELS, dtype=complex).reshape(DIM)

__all__ = [
    "DegenerateSteadyState",
    "SolverFailure",
    "StepTooLarge",
    "ZeroProbe",
    "build_liouvillian",
    "liouvillian_family",
    "steady_state",
    "steady_state_batch",
    "propagate",
    "susceptibility",
    "susceptibility_batch",
]


class DegenerateSteadyState(Exception):
    """The generator has more than one steady direction; the solve is not unique."""


class SolverFailure(Exception):
    """The linear solve produced a residual above tolerance."""


class StepTooLarge(Exception):
    """Fixed-step integration lost trace or Hermiticity beyond tolerance."""


class ZeroProbe(Exception):
    """Susceptibility requested with both probe Rabi frequencies zero."""


def _left_multiply(a: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> a @ rho."""
    return np.kron(a, np.eye(N_LEVELS, dtype=complex))


def _right_multiply(b: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> rho @ b."""
    return np.kron(np.eye(N_LEVELS, dtype=complex), b.T)


def _sandwich(c: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> c @ rho @ c^dag."""
    return np.kron(c, c.conj())


def _dissipator_super(rate: float, c: np.ndarray) -> np.ndarray:
    cdc = c.conj().T @ c
    return rate * _sandwich(c) - 0.5 * rate * (_left_multiply(cdc) + _right_multiply(cdc))


def build_liouvillian(
    atom: AtomParams,
    fields: FieldParams,
    exchange: ExchangeModel | None = None,
) -> np.ndarray:
    """16x16 generator L with d vec(rho)/dt = L vec(rho).

    Includes the commutator, the radiative and dephasing channels and the
    selected exchange variant.  The affine feed term of the direct exchange
    model is folded in as feed * trace(rho), which coincides with the matrix
    form on the physical unit-trace manifold and keeps L linear.
    """
    h = build_hamiltonian(atom, fields)
    lv = -1j * (_left_multiply(h) - _right_multiply(h))
    for (i, j), rate_name in (
        ((1, 3), "gamma31"),
        ((2, 3), "gamma32"),
        ((1, 4), "gamma41"),
        ((2, 4), "gamma42"),
        ((3, 3), "gamma3_deph"),
        ((4, 4), "gamma4_deph"),
        ((2, 2), "gamma2_deph"),
    ):
        rate = getattr(atom, rate_name)
        if rate != 0.0:
            lv += _dissipator_super(rate, sigma_op(i, j))
    if exchange is not None and exchange.kind != "none" and exchange.rate != 0.0:
        r = exchange.rate
        if exchange.kind == "direct":
            feed = 0.5 * r * (sigma_op(1, 1) + sigma_op(2, 2))
            lv += -r * np.eye(DIM, dtype=complex)
            lv += np.outer(feed.reshape(DIM), _IDENTITY_VEC)
        else:
            lv += _dissipator_super(r, sigma_op(1, 2))
            lv += _dissipator_super(r, sigma_op(2, 1))
    return lv


def liouvillian_family(
    atom: AtomParams,
    fields: FieldParams,
    exchange: ExchangeModel | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Decompose L(delta_p, delta_c) = base + delta_p * l_dp + delta_c * l_dc.

    The generator is affine in both detunings, so sweeping them (detuning
    scans, Doppler shifts) only needs two rank-16 updates instead of a full
    rebuild per point.
    """
    from dataclasses import replace

    base = build_liouvillian(atom, replace(fields, delta_p=0.0, delta_c=0.0), exchange)
    l_dp = build_liouvillian(atom, replace(fields, delta_p=1.0, delta_c=0.0), exchange) - base
    l_dc = build_liouvillian(atom, replace(fields, delta_p=0.0, delta_c=1.0), exchange) - base
    return base, l_dp, l_dc


def steady_state_batch(lvs: np.ndarray) -> np.ndarray:
    """Steady states of a stack of generators, shape (..., 16, 16) -> (..., 4, 4).

    Identical semantics to steady_state applied elementwise; the stacked form
    exists so detuning scans and velocity-class averages amortize the LAPACK
    calls.
    """
    lvs = np.asarray(lvs, dtype=complex)
    batch = lvs.shape[:-2]
    constrained = lvs.copy()
    constrained[..., 0, :] = _IDENTITY_VEC
    rhs = np.zeros(batch + (DIM,), dtype=complex)
    rhs[..., 0] = 1.0

    singvals = np.linalg.svd(constrained, compute_uv=False)
    ratios = singvals[..., -1] / singvals[..., 0]
    if np.any(ratios < DEGENERACY_RTOL):
        index = int(np.argmin(ratios))
        exc = DegenerateSteadyState(
            f"steady manifold is not unique (sigma_min/sigma_max = {float(ratios.min()):.3e}); "
            "add fields or ground-state decay"
        )
        exc.batch_index = index
        raise exc

    vec = np.linalg.solve(constrained, rhs[..., None])[..., 0]
    residual = np.linalg.norm((lvs @ vec[..., None])[..., 0], axis=-1)
    if np.any(residual > RESIDUAL_TOL):
        exc = SolverFailure(
            f"steady-state residual {float(residual.max()):.3e} exceeds {RESIDUAL_TOL:.1e}"
        )
        exc.batch_index = int(np.argmax(residual))
        raise exc

    rho = vec.reshape(batch + (N_LEVELS, N_LEVELS))
    return 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))


def steady_state(lv: np.ndarray) -> np.ndarray:
    """Unique unit-trace kernel element of a trace-preserving generator.

    Solved by replacing the d(rho_11)/dt row with the trace condition.
    Raises DegenerateSteadyState when the constrained system is numerically
    rank deficient (steady manifold of dimension > 1) and SolverFailure when
    the solution fails the residual check.
    """
    return steady_state_batch(lv[None])[0]


def propagate(rho0: np.ndarray, lv: np.ndarray, t_final: float, dt: float) -> np.ndarray:
    """Fixed-step classical RK4 integration of d vec(rho)/dt = L vec(rho).

    Serves as the independent cross-check for steady_state: the fixed points
    of the RK4 map coincide with the kernel of L, so running long enough
    converges to the true steady state regardless of step size.  Drift of
    trace or Hermiticity beyond 1e-6 raises StepTooLarge (the usual cause is
    dt outside the stability region of the fastest detuning).

    Both arguments broadcast over leading batch axes: lv may be (..., 16, 16)
    with rho0 (..., 4, 4) to integrate a stack of generators in lockstep.
    """
    if dt <= 0 or t_final <= 0:
        raise ValueError("t_final and dt must be positive")
    n_steps = max(1, int(round(t_final / dt)))
    step = t_final / n_steps

    batch = rho0.shape[:-2]
    vec = rho0.astype(complex).reshape(batch + (DIM, 1)).copy()
    trace0 = np.einsum("...ii->...", rho0.astype(complex))
    check_every = 64
    for k in range(n_steps):
        k1 = lv @ vec
        k2 = lv @ (vec + 0.5 * step * k1)
        k3 = lv @ (vec + 0.5 * step * k2)
        k4 = lv @ (vec + step * k3)
        vec += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if k % check_every == check_every - 1:
            rho = vec.reshape(batch + (N_LEVELS, N_LEVELS))
            drift = float(np.max(np.abs(np.einsum("...ii->...", rho) - trace0)))
            herm = float(np.max(np.abs(rho - np.conj(np.swapaxes(rho, -1, -2)))))
            if drift > 1e-6 or herm > 1e-6:
                raise StepTooLarge(
                    f"trace drift {drift:.3e} / Hermiticity defect {herm:.3e} "
                    f"after {k + 1} steps of dt={step:.3e}"
                )
    return vec.reshape(rho0.shape)


def susceptibility(rho: np.ndarray, fields: FieldParams) -> complex:
    """Probe susceptibility rho_31/omega_p3 + rho_41/omega_p4.

    A term whose probe Rabi frequency is exactly zero is dropped (the ratio
    vanishes linearly with the probe); with both zero there is no probe to
    respond to and ZeroProbe is raised.  The proportionality constant is
    fixed to one.
    """
    if fields.omega_p3 == 0.0 and fields.omega_p4 == 0.0:
        raise ZeroProbe("both probe Rabi frequencies are zero")
    chi = 0.0 + 0.0j
    if fields.omega_p3 != 0.0:
        chi += rho[2, 0] / fields.omega_p3
    if fields.omega_p4 != 0.0:
        chi += rho[3, 0] / fields.omega_p4
    return complex(chi)


def susceptibility_batch(rhos: np.ndarray, fields: FieldParams) -> np.ndarray:
    """susceptibility applied over leading batch axes of a density-matrix stack."""
    if fields.omega_p3 == 0.0 and fields.omega_p4 == 0.0:
        raise ZeroProbe("both probe Rabi frequencies are zero")
    chi = np.zeros(rhos.shape[:-2], dtype=complex)
    if fields.omega_p3 != 0.0:
        chi = chi + rhos[..., 2, 0] / fields.omega_p3
    if fields.omega_p4 != 0.0:
        chi = chi + rhos[..., 3, 0] / fields.omega_p4
    return chi
