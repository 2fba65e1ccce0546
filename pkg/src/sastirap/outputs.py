"""CSV, manifest and quicklook-plot emission.

The CSV contract: comma separators, LF line endings, a '#' comment preamble
naming the fixed parameters, and floats printed with 12 significant digits.
Every bundle carries a manifest that is itself a valid configuration
document; feeding it back through the same subcommand reproduces the data
files byte for byte (nothing time- or host-dependent is written).

Plots are convenience SVG quicklooks; the CSVs are the product.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .expconfig import ExperimentSpec, render_spec

__all__ = [
    "OutputBundle",
    "format_number",
    "resolve_out_dir",
    "write_csv",
    "write_manifest",
]

OUT_DIR_ENV = "SASTIRAP_OUTDIR"


@dataclass
class OutputBundle:
    """Paths of the files one subcommand emitted."""

    out_dir: Path
    manifest: Path
    data_files: list[Path]
    plot_files: list[Path]

    def all_files(self) -> list[Path]:
        return [self.manifest, *self.data_files, *self.plot_files]


def format_number(value: float) -> str:
    """12-significant-digit decimal rendering used in all data files."""
    return f"{value:.12g}"


def resolve_out_dir(cli_out: str | None, spec_out: str | None) -> Path:
    """Output directory precedence: --out flag, spec key, environment, cwd."""
    chosen = cli_out or spec_out or os.environ.get(OUT_DIR_ENV) or "."
    path = Path(chosen)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_csv(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[float]],
    preamble: dict[str, object] | None = None,
) -> Path:
    """Write one data file in the package CSV dialect."""
    lines = []
    for key, value in (preamble or {}).items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"# {key} = {value}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(format_number(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def write_manifest(path: Path, spec: ExperimentSpec, command: str) -> Path:
    """Write the resolved configuration as a re-runnable document."""
    text = (
        f"# sastirap {__version__}\n"
        f"# command: {command}\n"
        f"{render_spec(spec)}"
    )
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


def _matplotlib():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_trajectory(path: Path, trajectory) -> Path:
    plt = _matplotlib()
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(trajectory.times, trajectory.p1, label="p1")
    ax.plot(trajectory.times, trajectory.p2, label="p2")
    ax.plot(trajectory.times, trajectory.p3, label="p3")
    ax.plot(trajectory.times, trajectory.total, "k--", lw=0.8, label="P")
    ax.set_xlabel("t / T")
    ax.set_ylabel("population")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_sweep_panel(path: Path, panel) -> Path:
    plt = _matplotlib()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for tau_c, sweep in panel.blocks:
        label = "no noise" if tau_c is None else f"tau_c={tau_c:g}"
        means = [r.mean_fidelity for r in sweep.results]
        ax.plot(sweep.omega0_values, means, label=label)
        if tau_c is not None:
            lo = [r.ci_low for r in sweep.results]
            hi = [r.ci_high for r in sweep.results]
            ax.fill_between(sweep.omega0_values, lo, hi, alpha=0.2)
    title = f"gamma={panel.gamma:g}"
    if panel.delay is not None:
        title += f", delay tau={panel.delay:g}"
    ax.set_title(title, fontsize=9)
    ax.set_xlabel("omega0 * T")
    ax.set_ylabel("fidelity")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_noise_validation(
    path: Path, centers, density, analytic_density, lags, empirical_r, analytic_r
) -> Path:
    plt = _matplotlib()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
    ax1.plot(centers, density, drawstyle="steps-mid", label="sampled")
    ax1.plot(centers, analytic_density, label="analytic")
    ax1.set_xlabel("noise value")
    ax1.set_ylabel("density")
    ax1.legend(fontsize=8)
    ax2.plot(lags, empirical_r, label="sampled")
    ax2.plot(lags, analytic_r, "--", label="analytic")
    ax2.set_xlabel("lag / T")
    ax2.set_ylabel("autocorrelation")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_spectrum(path: Path, omegas, psd_curves, ft_curves) -> Path:
    plt = _matplotlib()
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    for label, values in psd_curves:
        ax.plot(omegas, values, "r-", lw=1.0, alpha=0.7)
        ax.annotate(label, (omegas[len(omegas) // 10], values[len(values) // 10]),
                    fontsize=7, color="darkred")
    for label, values in ft_curves:
        ax.plot(omegas, values, "b--", lw=1.0, alpha=0.7)
        ax.annotate(label, (omegas[len(omegas) // 4], values[len(values) // 4]),
                    fontsize=7, color="navy")
    ax.set_xlabel("omega * T")
    ax.set_ylabel("spectral amplitude")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
