"""Detuning scans, paper-figure presets, spectrum metrics and comparisons.

A scenario fixes the atom, the field template and the optional exchange and
Doppler settings; running it sweeps the two-photon detuning delta by setting
delta_p = delta_c + delta at every grid point.  Scan points are independent,
so the sweep can fan out over worker processes; assembly is index-ordered and
therefore bit-identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from .doppler import DopplerConfig, velocity_grid
from .model import AtomParams, ExchangeModel, FieldParams
from .steady import liouvillian_family, steady_state_batch, susceptibility_batch

DEFAULT_DELTA_GRID = np.linspace(-5.0, 5.0, 601)

#: Exchange rate used by the decayed variants of the coupling-detuning presets.
PRESET_DECAY = ExchangeModel.effective(0.01)

PRESET_NAMES = ("fig2", "fig3", "fig4_direct", "fig4_effective", "fig5a", "fig5b")

__all__ = [
    "DEFAULT_DELTA_GRID",
    "PRESET_DECAY",
    "PRESET_NAMES",
    "UnknownPreset",
    "GridTooNarrow",
    "GridMismatch",
    "Scenario",
    "Spectrum",
    "EitMetrics",
    "SpectrumComparison",
    "preset",
    "with_exchange",
    "run_scenario",
    "eit_metrics",
    "compare_spectra",
]


class UnknownPreset(Exception):
    """Requested preset name is not defined."""


class GridTooNarrow(Exception):
    """Metrics need the scan to cover at least |delta| <= 3."""


class GridMismatch(Exception):
    """Spectra to compare were taken on different delta grids."""


@dataclass(frozen=True, eq=False)
class Scenario:
    """One complete scan configuration."""

    name: str
    atom: AtomParams
    fields_template: FieldParams
    exchange: ExchangeModel
    doppler: DopplerConfig | None
    delta_grid: np.ndarray

    def __post_init__(self) -> None:
        grid = np.asarray(self.delta_grid, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("delta_grid must be a 1-D array with at least two points")
        if not np.all(np.diff(grid) > 0):
            raise ValueError("delta_grid must be strictly increasing")
        object.__setattr__(self, "delta_grid", grid)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Scan result: two-photon detuning versus complex susceptibility."""

    delta: np.ndarray
    re_chi: np.ndarray
    im_chi: np.ndarray

    def __post_init__(self) -> None:
        delta = np.asarray(self.delta, dtype=float)
        re = np.asarray(self.re_chi, dtype=float)
        im = np.asarray(self.im_chi, dtype=float)
        if not (delta.shape == re.shape == im.shape) or delta.ndim != 1:
            raise ValueError("delta, re_chi and im_chi must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
            raise ValueError("susceptibility values must be finite")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "re_chi", re)
        object.__setattr__(self, "im_chi", im)

    @property
    def points(self) -> Iterator[tuple[float, float, float]]:
        return zip(self.delta.tolist(), self.re_chi.tolist(), self.im_chi.tolist())

    def __len__(self) -> int:
        return self.delta.size


@dataclass(frozen=True)
class EitMetrics:
    """Shape summary of an absorption scan around two-photon resonance.

    dip_depth compares Im chi at the grid point nearest delta = 0 against the
    absorption baseline max over 1 <= |delta| <= 3; values below one mean the
    resonance is transparent relative to its surroundings.  peak_asymmetry is
    the larger/smaller ratio of the side maxima on the two half-windows
    0 < |delta| <= 3, and n_local_maxima counts strict local maxima of Im chi
    within |delta| <= 3.
    """

    dip_depth: float
    is_transparent: bool
    peak_asymmetry: float
    baseline: float
    n_local_maxima: int


@dataclass(frozen=True)
class SpectrumComparison:
    """Scalar agreement metrics between two absorption spectra."""

    linf_rel: float
    correlation: float


def _default_atom() -> AtomParams:
    return AtomParams()


def _fields(delta_c: float, atom: AtomParams) -> FieldParams:
    return FieldParams.from_amplitudes(
        probe=0.001, coupling=1.0, delta_p=delta_c, delta_c=delta_c, signs=atom.dipole_signs
    )


def preset(name: str, delta_grid: np.ndarray | None = None) -> Scenario:
    """Scan configurations reproducing the published demonstration curves.

    fig2: bare double-Lambda scan, coupling resonant, no broadening.
    fig3: fig2 Doppler-averaged at 320 K (transparency replaced by absorption).
    fig4_direct / fig4_effective: fig3 plus ground-state exchange decay 0.01
        in the two model variants (transparency restored).
    fig5a / fig5b: no broadening, coupling resonant / centered between the two
        excited states; these are the decay-free baselines of the overlay
        pairs (add PRESET_DECAY via with_exchange for the partner curve).
    """
    grid = DEFAULT_DELTA_GRID if delta_grid is None else np.asarray(delta_grid, dtype=float)
    atom = _default_atom()
    builders = {
        "fig2": lambda: Scenario("fig2", atom, _fields(0.0, atom), ExchangeModel.none(), None, grid),
        "fig3": lambda: Scenario("fig3", atom, _fields(0.0, atom), ExchangeModel.none(), DopplerConfig(), grid),
        "fig4_direct": lambda: Scenario(
            "fig4_direct", atom, _fields(0.0, atom), ExchangeModel.direct(0.01), DopplerConfig(), grid
        ),
        "fig4_effective": lambda: Scenario(
            "fig4_effective", atom, _fields(0.0, atom), ExchangeModel.effective(0.01), DopplerConfig(), grid
        ),
        "fig5a": lambda: Scenario("fig5a", atom, _fields(0.0, atom), ExchangeModel.none(), None, grid),
        "fig5b": lambda: Scenario(
            "fig5b", atom, _fields(0.5 * atom.omega43, atom), ExchangeModel.none(), None, grid
        ),
    }
    try:
        build = builders[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}") from None
    return build()


def with_exchange(scenario: Scenario, exchange: ExchangeModel, suffix: str | None = None) -> Scenario:
    """Copy of a scenario with a different exchange model (optionally renamed)."""
    name = scenario.name if suffix is None else f"{scenario.name}_{suffix}"
    return replace(scenario, name=name, exchange=exchange)


def _chi_block(scenario: Scenario, start: int, stop: int) -> np.ndarray:
    """Susceptibility for a contiguous slice of the delta grid.

    Velocity classes (and, without Doppler, the scan points themselves) are
    solved as one stacked batch; the class reduction is a fixed-order dot
    with the quadrature weights, so results are independent of how the grid
    is split across workers.
    """
    base, l_dp, l_dc = liouvillian_family(scenario.atom, scenario.fields_template, scenario.exchange)
    fields = scenario.fields_template
    dc = fields.delta_c
    deltas = scenario.delta_grid[start:stop]

    def solve_stack(dps: np.ndarray, dcs: np.ndarray) -> np.ndarray:
        lvs = base[None] + dps[:, None, None] * l_dp[None] + dcs[:, None, None] * l_dc[None]
        return susceptibility_batch(steady_state_batch(lvs), fields)

    if scenario.doppler is None:
        dps = dc + deltas
        try:
            return solve_stack(dps, np.full_like(dps, dc))
        except Exception as exc:
            index = getattr(exc, "batch_index", None)
            at = f" [at delta {deltas[index]:g}]" if index is not None else ""
            exc.args = (f"{exc.args[0] if exc.args else exc!r}{at}",)
            raise

    grid = velocity_grid(scenario.doppler)
    shifts = np.array([vc.shift for vc in grid])
    weights = np.array([vc.weight for vc in grid])
    out = np.empty(deltas.size, dtype=complex)
    for i, delta in enumerate(deltas):
        try:
            chi = solve_stack(dc + delta + shifts, dc + shifts)
        except Exception as exc:
            index = getattr(exc, "batch_index", None)
            at = f" at Doppler shift {shifts[index]:g}" if index is not None else ""
            exc.args = (f"{exc.args[0] if exc.args else exc!r} [at delta {delta:g}{at}]",)
            raise
        out[i] = np.dot(weights, chi)
    return out


def _chi_chunk_task(args: tuple[Scenario, int, int]) -> np.ndarray:
    return _chi_block(*args)


def run_scenario(scenario: Scenario, workers: int = 1) -> Spectrum:
    """Sweep the delta grid and return the spectrum.

    With workers > 1 the grid is split into contiguous chunks solved in
    separate processes; every point is computed by the same code path, so the
    result does not depend on the split or on scheduling order.
    """
    n = scenario.delta_grid.size
    if workers <= 1 or n < 4:
        chi = _chi_block(scenario, 0, n)
    else:
        bounds = np.linspace(0, n, min(workers, n) + 1).astype(int)
        tasks = [(scenario, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_chi_chunk_task, tasks))
        chi = np.concatenate(chunks)
    return Spectrum(scenario.delta_grid.copy(), chi.real.copy(), chi.imag.copy())


def eit_metrics(spectrum: Spectrum) -> EitMetrics:
    """Dip depth, transparency flag and side-peak asymmetry of a scan."""
    delta = spectrum.delta
    im = spectrum.im_chi
    if delta.min() > -3.0 or delta.max() < 3.0:
        raise GridTooNarrow(
            f"metrics need the grid to span |delta| <= 3, got [{delta.min():g}, {delta.max():g}]"
        )

    center = int(np.argmin(np.abs(delta)))
    dip = float(im[center])

    band = (np.abs(delta) >= 1.0) & (np.abs(delta) <= 3.0)
    baseline = float(im[band].max())
    if baseline <= 0:
        raise ValueError(f"absorption baseline must be positive, got {baseline:g}")

    left = (delta >= -3.0) & (delta < 0.0)
    right = (delta > 0.0) & (delta <= 3.0)
    left_max = float(im[left].max())
    right_max = float(im[right].max())
    lo, hi = sorted((left_max, right_max))
    asymmetry = float("inf") if lo <= 0 else hi / lo

    interior = (im[1:-1] > im[:-2]) & (im[1:-1] > im[2:])
    in_band = np.abs(delta[1:-1]) <= 3.0
    n_max = int(np.count_nonzero(interior & in_band))

    dip_depth = dip / baseline
    return EitMetrics(
        dip_depth=dip_depth,
        is_transparent=bool(dip_depth < 1.0),
        peak_asymmetry=asymmetry,
        baseline=baseline,
        n_local_maxima=n_max,
    )


def compare_spectra(a: Spectrum, b: Spectrum) -> SpectrumComparison:
    """L-inf relative difference and normalized correlation of Im chi."""
    if a.delta.shape != b.delta.shape or not np.array_equal(a.delta, b.delta):
        raise GridMismatch("spectra were taken on different delta grids")
    scale = max(float(np.max(np.abs(a.im_chi))), float(np.max(np.abs(b.im_chi))))
    if scale == 0.0:
        return SpectrumComparison(linf_rel=0.0, correlation=1.0)
    linf = float(np.max(np.abs(a.im_chi - b.im_chi))) / scale
    da = a.im_chi - a.im_chi.mean()
    db = b.im_chi - b.im_chi.mean()
    norm = float(np.linalg.norm(da) * np.linalg.norm(db))
    corr = 1.0 if norm == 0.0 and linf == 0.0 else float(np.dot(da, db) / norm)
    return SpectrumComparison(linf_rel=linf, correlation=min(1.0, max(-1.0, corr)))
