"""Spectrum export/import and the batch figure-reproduction entry point."""

from __future__ import annotations

import json
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import scenario_to_dict
from .scenarios import (
    PRESET_DECAY,
    Scenario,
    Spectrum,
    compare_spectra,
    eit_metrics,
    preset,
    run_scenario,
    with_exchange,
)

__all__ = ["export_spectrum", "load_spectrum", "reproduce_figures", "reproduction_curves"]

CSV_HEADER = "delta,re_chi,im_chi"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def export_spectrum(
    spectrum: Spectrum,
    fmt: str,
    path: str | Path,
    scenario: Scenario | None = None,
) -> Path:
    """Write a spectrum as CSV or JSON (17 significant digits, lossless).

    CSV is the bare three-column table; JSON wraps the same points in a
    metadata block echoing the scenario, the code version and a timestamp.
    """
    path = Path(path)
    if fmt == "csv":
        lines = [CSV_HEADER]
        lines.extend(f"{_fmt(d)},{_fmt(re)},{_fmt(im)}" for d, re, im in spectrum.points)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif fmt == "json":
        payload = {
            "metadata": {
                "scenario": scenario_to_dict(scenario) if scenario is not None else None,
                "version": __version__,
                "timestamp": datetime.now(timezone.utc).isoformat(),
            },
            "points": [
                {"delta": d, "re_chi": re, "im_chi": im} for d, re, im in spectrum.points
            ],
        }
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    return path


def load_spectrum(path: str | Path) -> Spectrum:
    """Read back a CSV or JSON spectrum file."""
    path = Path(path)
    if path.suffix == ".json":
        payload = json.loads(path.read_text(encoding="utf-8"))
        pts = payload["points"]
        return Spectrum(
            np.array([p["delta"] for p in pts]),
            np.array([p["re_chi"] for p in pts]),
            np.array([p["im_chi"] for p in pts]),
        )
    rows = path.read_text(encoding="utf-8").strip().splitlines()
    if not rows or rows[0].strip() != CSV_HEADER:
        raise ValueError(f"{path}: not a spectrum CSV (missing '{CSV_HEADER}' header)")
    data = np.array([[float(v) for v in row.split(",")] for row in rows[1:]])
    return Spectrum(data[:, 0], data[:, 1], data[:, 2])


def reproduction_curves(delta_grid: np.ndarray | None = None) -> list[Scenario]:
    """The eight scan configurations behind the demonstration figures."""
    fig5a = preset("fig5a", delta_grid)
    fig5b = preset("fig5b", delta_grid)
    return [
        preset("fig2", delta_grid),
        preset("fig3", delta_grid),
        preset("fig4_direct", delta_grid),
        preset("fig4_effective", delta_grid),
        with_exchange(fig5a, fig5a.exchange, "nodecay"),
        with_exchange(fig5a, PRESET_DECAY, "decay"),
        with_exchange(fig5b, fig5b.exchange, "nodecay"),
        with_exchange(fig5b, PRESET_DECAY, "decay"),
    ]


#: curves overlaid per rendered figure.
FIGURE_GROUPS = {
    "fig2": ("fig2",),
    "fig3": ("fig3",),
    "fig4": ("fig4_direct", "fig4_effective"),
    "fig5a": ("fig5a_nodecay", "fig5a_decay"),
    "fig5b": ("fig5b_nodecay", "fig5b_decay"),
}


def reproduce_figures(
    out_dir: str | Path,
    workers: int = 1,
    delta_grid: np.ndarray | None = None,
    make_plots: bool = True,
) -> dict:
    """Run every demonstration curve, exporting CSVs, metrics and figures.

    Writes one CSV per curve, a ``summary.json`` with the EIT metrics and
    pairwise comparisons, and (unless disabled) one rendered PNG per figure.
    Per-curve failures are recorded in the summary instead of aborting the
    remaining curves.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    spectra: dict[str, Spectrum] = {}
    summary: dict = {"curves": {}, "comparisons": {}, "errors": {}}
    for scenario in reproduction_curves(delta_grid):
        try:
            spectrum = run_scenario(scenario, workers=workers)
            csv_path = export_spectrum(spectrum, "csv", out_dir / f"{scenario.name}.csv")
            spectra[scenario.name] = spectrum
            summary["curves"][scenario.name] = {
                "csv": csv_path.name,
                "metrics": asdict(eit_metrics(spectrum)),
            }
        except Exception as exc:
            summary["errors"][scenario.name] = f"{type(exc).__name__}: {exc}"

    def dip(name: str) -> float | None:
        entry = summary["curves"].get(name)
        return None if entry is None else entry["metrics"]["dip_depth"]

    if "fig4_direct" in spectra and "fig4_effective" in spectra:
        cmp = compare_spectra(spectra["fig4_direct"], spectra["fig4_effective"])
        summary["comparisons"]["fig4_direct_vs_effective"] = asdict(cmp)
    for fig in ("fig5a", "fig5b"):
        base, decayed = dip(f"{fig}_nodecay"), dip(f"{fig}_decay")
        if base is not None and decayed is not None:
            summary["comparisons"][f"{fig}_decay_dip_shift"] = abs(decayed - base)

    if make_plots:
        from .plots import render_figure

        for fig_name, curve_names in FIGURE_GROUPS.items():
            curves = [(name, spectra[name]) for name in curve_names if name in spectra]
            if curves:
                png = render_figure(out_dir / f"{fig_name}.png", fig_name, curves)
                summary.setdefault("figures", {})[fig_name] = png.name

    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    return summary
