"""Headless rendering of absorption spectra to image files."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .scenarios import Spectrum

__all__ = ["render_figure"]

_STYLES = ("-", "--", ":", "-.")


def render_figure(
    path: str | Path,
    title: str,
    curves: Sequence[tuple[str, Spectrum]],
    dpi: int = 150,
) -> Path:
    """Plot Im chi versus two-photon detuning for one or more curves."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for (label, spectrum), style in zip(curves, _STYLES * (len(curves) // len(_STYLES) + 1)):
        ax.plot(spectrum.delta, spectrum.im_chi, style, label=label, linewidth=1.2)
    ax.set_xlabel(r"$\delta$  ($\Gamma_3$ units)")
    ax.set_ylabel(r"Im $\chi$  (arb. units)")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if len(curves) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path
