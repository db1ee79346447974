"""Four-level double-Lambda atom: parameters, Hamiltonian, dissipative generators.

Basis ordering is (|1>, |2>, |3>, |4>): two ground hyperfine states |1>, |2>
below two excited hyperfine states |3>, |4> split by omega43.  A weak probe
couples |1> to both excited states and a strong coupling field couples |2> to
both, forming two Lambda paths that share the same two-photon detuning
delta = delta_p - delta_c.

Units: every rate, Rabi frequency and detuning is dimensionless, expressed in
units of the total radiative decay rate of |3> (gamma31 + gamma32); hbar = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N_LEVELS = 4

__all__ = [
    "N_LEVELS",
    "AtomParams",
    "FieldParams",
    "ExchangeModel",
    "sigma_op",
    "build_hamiltonian",
    "lindblad_rhs",
    "exchange_rhs_direct",
    "exchange_rhs_effective",
    "exchange_rhs",
    "master_rhs",
    "hermiticity_defect",
    "validate_density_matrix",
]


def sigma_op(i: int, j: int) -> np.ndarray:
    """Transition operator |i><j| with 1-based level labels."""
    op = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    op[i - 1, j - 1] = 1.0
    return op


@dataclass(frozen=True)
class AtomParams:
    """Static atomic structure: splitting, decay and dephasing rates.

    gamma31/gamma32 (gamma41/gamma42) are the radiative rates from |3> (|4>)
    into the two ground states; the gamma*_deph rates are pure dephasing.
    dipole_signs = (s31, s41, s32, s42) records the relative sign pattern of
    the four transition dipole moments and is consumed by
    ``FieldParams.from_amplitudes``.
    """

    omega43: float = 26.0
    gamma31: float = 0.5
    gamma32: float = 0.5
    gamma41: float = 0.5
    gamma42: float = 0.5
    gamma3_deph: float = 0.0
    gamma4_deph: float = 0.0
    gamma2_deph: float = 0.0
    dipole_signs: tuple[int, int, int, int] = (1, 1, 1, -1)

    @property
    def gamma3_total(self) -> float:
        return self.gamma31 + self.gamma32

    def __post_init__(self) -> None:
        rates = {
            "gamma31": self.gamma31,
            "gamma32": self.gamma32,
            "gamma41": self.gamma41,
            "gamma42": self.gamma42,
            "gamma3_deph": self.gamma3_deph,
            "gamma4_deph": self.gamma4_deph,
            "gamma2_deph": self.gamma2_deph,
        }
        for name, value in rates.items():
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value}")
        if self.omega43 < 0:
            raise ValueError(f"omega43 must be >= 0, got {self.omega43}")
        if len(self.dipole_signs) != 4 or any(s not in (1, -1) for s in self.dipole_signs):
            raise ValueError(f"dipole_signs must be four entries of +1/-1, got {self.dipole_signs}")


@dataclass(frozen=True)
class FieldParams:
    """Probe/coupling Rabi frequencies (real) and detunings.

    delta_p is measured from the |1>-|3> transition, delta_c from |2>-|3>.
    """

    omega_p3: float = 0.0
    omega_p4: float = 0.0
    omega_c3: float = 0.0
    omega_c4: float = 0.0
    delta_p: float = 0.0
    delta_c: float = 0.0

    @classmethod
    def from_amplitudes(
        cls,
        probe: float,
        coupling: float,
        delta_p: float = 0.0,
        delta_c: float = 0.0,
        signs: tuple[int, int, int, int] = (1, 1, 1, -1),
    ) -> "FieldParams":
        """Build the four Rabi frequencies from single probe/coupling amplitudes.

        The dipole-sign pattern distributes the amplitudes over the two
        transitions of each field, e.g. the default pattern gives
        omega_c4 = -omega_c3.
        """
        s31, s41, s32, s42 = signs
        return cls(
            omega_p3=s31 * probe,
            omega_p4=s41 * probe,
            omega_c3=s32 * coupling,
            omega_c4=s42 * coupling,
            delta_p=delta_p,
            delta_c=delta_c,
        )


@dataclass(frozen=True)
class ExchangeModel:
    """Ground-state relaxation caused by atoms transiting the beam.

    kind "direct" relaxes the whole density matrix toward an equal ground
    mixture at the atom exchange rate; kind "effective" uses a pair of
    population-exchange jump channels between |1> and |2>.  Both leave a
    closed system untouched when kind is "none".
    """

    kind: str = "none"
    rate: float = 0.0

    _KINDS = ("none", "direct", "effective")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"exchange kind must be one of {self._KINDS}, got {self.kind!r}")
        if self.rate < 0:
            raise ValueError(f"exchange rate must be >= 0, got {self.rate}")
        if self.kind == "none" and self.rate != 0.0:
            raise ValueError("exchange kind 'none' cannot carry a nonzero rate")

    @classmethod
    def none(cls) -> "ExchangeModel":
        return cls("none", 0.0)

    @classmethod
    def direct(cls, rate: float) -> "ExchangeModel":
        return cls("direct", rate)

    @classmethod
    def effective(cls, rate: float) -> "ExchangeModel":
        return cls("effective", rate)


def build_hamiltonian(atom: AtomParams, fields: FieldParams) -> np.ndarray:
    """Rotating-frame Hamiltonian of the driven four-level system.

    Returns -m/2 where m carries the diagonal
    (0, 2(delta_p - delta_c), 2 delta_p, 2(delta_p - omega43)) and the four
    Rabi frequencies on the probe/coupling off-diagonals.  Real symmetric by
    construction since all Rabi frequencies are real.
    """
    dp = fields.delta_p
    dc = fields.delta_c
    m = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    m[0, 2] = m[2, 0] = fields.omega_p3
    m[0, 3] = m[3, 0] = fields.omega_p4
    m[1, 2] = m[2, 1] = fields.omega_c3
    m[1, 3] = m[3, 1] = fields.omega_c4
    m[1, 1] = 2.0 * (dp - dc)
    m[2, 2] = 2.0 * dp
    m[3, 3] = 2.0 * (dp - atom.omega43)
    return -0.5 * m


def _lindblad_term(rate: float, c: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """(rate/2) * (2 c rho c^dag - c^dag c rho - rho c^dag c)."""
    cdc = c.conj().T @ c
    return rate * (c @ rho @ c.conj().T) - 0.5 * rate * (cdc @ rho + rho @ cdc)


# Radiative jump channels (operator indices are 1-based level labels) and the
# pure-dephasing projectors, paired with their AtomParams rate attribute.
_RADIATIVE_CHANNELS = (((1, 3), "gamma31"), ((2, 3), "gamma32"), ((1, 4), "gamma41"), ((2, 4), "gamma42"))
_DEPHASING_CHANNELS = (((3, 3), "gamma3_deph"), ((4, 4), "gamma4_deph"), ((2, 2), "gamma2_deph"))


def lindblad_rhs(rho: np.ndarray, atom: AtomParams, fields: FieldParams) -> np.ndarray:
    """d(rho)/dt for the closed-plus-radiative system (no exchange).

    Commutator with the Hamiltonian plus the four radiative decay channels
    and the three pure-dephasing channels, all in standard Lindblad form.
    """
    h = build_hamiltonian(atom, fields)
    out = -1j * (h @ rho - rho @ h)
    for (i, j), rate_name in _RADIATIVE_CHANNELS + _DEPHASING_CHANNELS:
        rate = getattr(atom, rate_name)
        if rate != 0.0:
            out += _lindblad_term(rate, sigma_op(i, j), rho)
    return out


def exchange_rhs_direct(rho: np.ndarray, rate: float) -> np.ndarray:
    """Atom-exchange relaxation: -r rho + (r/2)(|1><1| + |2><2|).

    Fresh atoms enter the beam in an even ground-state mixture while driven
    atoms leave; the feed term is constant, so this generator is affine and
    only trace-free on unit-trace input.
    """
    if rate < 0:
        raise ValueError(f"exchange rate must be >= 0, got {rate}")
    out = -rate * rho.astype(complex)
    out[0, 0] += 0.5 * rate
    out[1, 1] += 0.5 * rate
    return out


def exchange_rhs_effective(rho: np.ndarray, rate: float) -> np.ndarray:
    """Ground-state exchange as two Lindblad channels |1><2| and |2><1|.

    Each channel carries the full rate; together they relax the ground
    populations toward balance and damp the ground coherence at the same
    rate.
    """
    if rate < 0:
        raise ValueError(f"exchange rate must be >= 0, got {rate}")
    out = _lindblad_term(rate, sigma_op(1, 2), rho)
    out += _lindblad_term(rate, sigma_op(2, 1), rho)
    return out


def exchange_rhs(rho: np.ndarray, exchange: ExchangeModel) -> np.ndarray:
    """Dispatch to the configured exchange variant (zero matrix for 'none')."""
    if exchange.kind == "direct":
        return exchange_rhs_direct(rho, exchange.rate)
    if exchange.kind == "effective":
        return exchange_rhs_effective(rho, exchange.rate)
    return np.zeros((N_LEVELS, N_LEVELS), dtype=complex)


def master_rhs(
    rho: np.ndarray,
    atom: AtomParams,
    fields: FieldParams,
    exchange: ExchangeModel | None = None,
) -> np.ndarray:
    """Full generator: radiative/dephasing master equation plus exchange."""
    out = lindblad_rhs(rho, atom, fields)
    if exchange is not None and exchange.kind != "none":
        out += exchange_rhs(rho, exchange)
    return out


def hermiticity_defect(rho: np.ndarray) -> float:
    """Max-abs deviation of rho from its conjugate transpose."""
    return float(np.max(np.abs(rho - rho.conj().T)))


def validate_density_matrix(
    rho: np.ndarray,
    herm_tol: float = 1e-12,
    trace_tol: float = 1e-10,
    eig_tol: float = 1e-10,
) -> None:
    """Raise ValueError unless rho is Hermitian, unit-trace and PSD within tolerance."""
    if rho.shape != (N_LEVELS, N_LEVELS):
        raise ValueError(f"density matrix must be {N_LEVELS}x{N_LEVELS}, got {rho.shape}")
    defect = hermiticity_defect(rho)
    if defect > herm_tol:
        raise ValueError(f"density matrix not Hermitian (defect {defect:.3e})")
    trace_err = abs(np.trace(rho) - 1.0)
    if trace_err > trace_tol:
        raise ValueError(f"density matrix trace deviates from 1 by {trace_err:.3e}")
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if min_eig < -eig_tol:
        raise ValueError(f"density matrix not PSD (min eigenvalue {min_eig:.3e})")
