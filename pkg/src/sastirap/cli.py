"""Command-line front end.

Subcommands:
  run            one trajectory with its full population time series
  sweep          fidelity-versus-amplitude Monte Carlo sweep grid
  noise-validate histogram and autocorrelation of the noise generator
  spectrum       noise power spectral density and counterdiabatic-pulse
                 Fourier transforms
  area           pulse areas over the protocol window

Every subcommand reads a key = value configuration (--config), writes its
data as CSV plus a re-runnable manifest, and exits 0 on success, 2 on a
configuration error, 3 on numerical divergence and 4 on an I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .ensemble import (
    EnsembleConfig,
    EnsembleRunError,
    default_omega0_grid,
    sweep_matrix,
)
from .expconfig import ExperimentSpec, SpecParseError, parse_spec
from .integrator import (
    IntegrationDivergedError,
    RunConfig,
    SimGrid,
    default_grid,
    simulate_run,
)
from .noise import OUParams, analytic_autocorrelation, analytic_spectrum, generate_series, sample_stats
from .outputs import (
    OutputBundle,
    format_number,
    plot_noise_validation,
    plot_spectrum,
    plot_sweep_panel,
    plot_trajectory,
    resolve_out_dir,
    write_csv,
    write_manifest,
)
from .pulses import (
    ProtocolConfig,
    PulseFamily,
    cd_fourier_analytic,
    pulse_area,
    sample_pulses,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DIVERGED = 3
EXIT_IO = 4


def _protocol(spec: ExperimentSpec) -> ProtocolConfig:
    return ProtocolConfig(
        family=spec.family,
        omega0=spec.omega0,
        tau=spec.tau_over_T,
        cd_enabled=spec.cd,
    )


def _noise(spec: ExperimentSpec) -> OUParams | None:
    if spec.tau_c is None:
        return None
    return OUParams(sigma=spec.sigma, tau_c=spec.tau_c)


def _grid(spec: ExperimentSpec, protocol: ProtocolConfig) -> SimGrid:
    if spec.dt is not None:
        return SimGrid.from_step(*protocol.window(), spec.dt)
    return default_grid(protocol, _noise(spec))


def _tau_c_tag(tau_c: float | None) -> str:
    return "nonoise" if tau_c is None else f"tauc{tau_c:g}"


def cmd_run(spec: ExperimentSpec, out_dir: Path, workers: int, plots: bool) -> OutputBundle:
    protocol = _protocol(spec)
    noise = _noise(spec)
    cfg = RunConfig(
        protocol=protocol,
        gamma=spec.gamma,
        noise=noise,
        noise_enabled=noise is not None,
        seed=spec.seed,
        record_trajectory=True,
    )
    grid = _grid(spec, protocol)
    result = simulate_run(cfg, grid)
    traj = result.trajectory
    preamble = {
        "family": spec.family.value,
        "omega0": spec.omega0,
        "gamma": spec.gamma,
        "cd": spec.cd,
        "seed": spec.seed,
        "dt": grid.dt,
        "fidelity": format_number(result.fidelity),
        "total_population": format_number(result.total_population),
    }
    if spec.family is PulseFamily.GAUSSIAN:
        preamble["tau_over_T"] = spec.tau_over_T
    if noise is not None:
        preamble["sigma"] = spec.sigma
        preamble["tau_c"] = spec.tau_c
    csv_path = write_csv(
        out_dir / "trajectory.csv",
        ["t", "p1", "p2", "p3", "P"],
        zip(traj.times, traj.p1, traj.p2, traj.p3, traj.total),
        preamble,
    )
    manifest = write_manifest(out_dir / "manifest.txt", spec, "run")
    plot_files = []
    if plots:
        plot_files.append(plot_trajectory(out_dir / "trajectory.svg", traj))
    return OutputBundle(out_dir, manifest, [csv_path], plot_files)


def cmd_sweep(spec: ExperimentSpec, out_dir: Path, workers: int, plots: bool) -> OutputBundle:
    protocol = _protocol(spec)
    base = EnsembleConfig(
        run=RunConfig(
            protocol=protocol,
            noise=OUParams(sigma=spec.sigma, tau_c=1.0),  # tau_c replaced per block
            noise_enabled=False,
        ),
        n_runs=spec.n_runs,
        master_seed=spec.seed,
    )
    delays = list(spec.delays) if spec.family is PulseFamily.GAUSSIAN else [None]
    omega0_values = (
        np.asarray(spec.omega0_values, dtype=float)
        if spec.omega0_values is not None
        else default_omega0_grid()
    )
    panels = sweep_matrix(
        base,
        gammas=list(spec.gammas),
        tau_cs=list(spec.tau_cs),
        delays=delays,
        omega0_values=omega0_values,
        workers=workers,
        dt_override=spec.dt,
    )
    data_files = []
    plot_files = []
    for panel in panels:
        stem = f"sweep_gamma{panel.gamma:g}"
        if panel.delay is not None:
            stem += f"_delay{panel.delay:g}"
        header = ["omega0"]
        columns = [omega0_values]
        for tau_c, sweep in panel.blocks:
            tag = _tau_c_tag(tau_c)
            header += [f"mean_F_{tag}", f"ci_low_{tag}", f"ci_high_{tag}", f"mean_P_{tag}"]
            columns.append([r.mean_fidelity for r in sweep.results])
            columns.append([r.ci_low for r in sweep.results])
            columns.append([r.ci_high for r in sweep.results])
            columns.append([r.mean_total_population for r in sweep.results])
        preamble = {
            "family": spec.family.value,
            "cd": spec.cd,
            "gamma": panel.gamma,
            "sigma": spec.sigma,
            "n_runs": spec.n_runs,
            "master_seed": spec.seed,
        }
        if panel.delay is not None:
            preamble["tau_over_T"] = panel.delay
        data_files.append(
            write_csv(out_dir / f"{stem}.csv", header, zip(*columns), preamble)
        )
        if plots:
            plot_files.append(plot_sweep_panel(out_dir / f"{stem}.svg", panel))
    manifest = write_manifest(out_dir / "manifest.txt", spec, "sweep")
    return OutputBundle(out_dir, manifest, data_files, plot_files)


def cmd_noise_validate(
    spec: ExperimentSpec, out_dir: Path, workers: int, plots: bool
) -> OutputBundle:
    noise = _noise(spec)
    if noise is None:
        raise SpecParseError(0, "noise-validate requires the tau_c key")
    dt = spec.dt if spec.dt is not None else noise.tau_c / 10.0
    series = generate_series(
        noise, spec.n_samples, dt, seed=spec.seed, strict_dt=spec.strict_dt
    )
    density, edges = np.histogram(series, bins=spec.bins, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    hist_path = write_csv(
        out_dir / "noise_histogram.csv",
        ["bin_center", "density"],
        zip(centers, density),
        {"sigma": spec.sigma, "tau_c": spec.tau_c, "n_samples": spec.n_samples,
         "dt": dt, "seed": spec.seed},
    )
    max_lag = max(1, round(spec.max_lag_over_tau_c * noise.tau_c / dt))
    stats = sample_stats(series, dt, max_lag=max_lag)
    analytic_r = np.array(
        [analytic_autocorrelation(lag, noise) for lag in stats.lags]
    )
    corr_path = write_csv(
        out_dir / "noise_autocorrelation.csv",
        ["lag", "empirical_R", "analytic_R"],
        zip(stats.lags, stats.autocorr, analytic_r),
        {"sigma": spec.sigma, "tau_c": spec.tau_c, "n_samples": spec.n_samples,
         "dt": dt, "seed": spec.seed,
         "mean": format_number(stats.mean),
         "variance": format_number(stats.variance)},
    )
    manifest = write_manifest(out_dir / "manifest.txt", spec, "noise-validate")
    plot_files = []
    if plots:
        sigma = noise.sigma
        if sigma > 0:
            analytic_density = np.exp(-(centers**2) / (2 * sigma**2)) / np.sqrt(
                2 * np.pi * sigma**2
            )
        else:
            analytic_density = np.zeros_like(centers)
        plot_files.append(
            plot_noise_validation(
                out_dir / "noise_validation.svg",
                centers, density, analytic_density,
                stats.lags, stats.autocorr, analytic_r,
            )
        )
    return OutputBundle(out_dir, manifest, [hist_path, corr_path], plot_files)


def cmd_spectrum(spec: ExperimentSpec, out_dir: Path, workers: int, plots: bool) -> OutputBundle:
    omegas = np.linspace(0.0, spec.omega_max, spec.n_omega)
    header = ["omega"]
    columns = [omegas]
    psd_curves = []
    for tau_c in spec.tau_cs:
        if tau_c is None:
            continue
        params = OUParams(sigma=spec.sigma, tau_c=tau_c)
        values = np.array([analytic_spectrum(w, params) for w in omegas])
        header.append(f"S_{_tau_c_tag(tau_c)}")
        columns.append(values)
        psd_curves.append((f"tau_c={tau_c:g}", values))
    ft_curves = []
    for delay in spec.delays:
        values = np.array([cd_fourier_analytic(w, delay) for w in omegas])
        header.append(f"Fd_delay{delay:g}")
        columns.append(values)
        ft_curves.append((f"tau={delay:g}", values))
    csv_path = write_csv(
        out_dir / "spectrum.csv",
        header,
        zip(*columns),
        {"sigma": spec.sigma, "family": spec.family.value},
    )
    manifest = write_manifest(out_dir / "manifest.txt", spec, "spectrum")
    plot_files = []
    if plots:
        plot_files.append(
            plot_spectrum(out_dir / "spectrum.svg", omegas, psd_curves, ft_curves)
        )
    return OutputBundle(out_dir, manifest, [csv_path], plot_files)


def cmd_area(spec: ExperimentSpec, out_dir: Path, workers: int, plots: bool) -> OutputBundle:
    protocol = _protocol(spec)
    window = protocol.window()
    pump = pulse_area(lambda t: sample_pulses(t, protocol).omega_p, window)
    stokes = pulse_area(lambda t: sample_pulses(t, protocol).omega_s, window)
    cd = pulse_area(lambda t: sample_pulses(t, protocol).omega_d, window)
    for name, value in (("pump_area", pump), ("stokes_area", stokes), ("cd_area", cd)):
        print(f"{name} = {format_number(value)}")
    csv_path = write_csv(
        out_dir / "area.csv",
        ["pump_area", "stokes_area", "cd_area"],
        [(pump, stokes, cd)],
        {"family": spec.family.value, "omega0": spec.omega0,
         **({"tau_over_T": spec.tau_over_T} if spec.family is PulseFamily.GAUSSIAN else {}),
         "window": f"[{window[0]:g}, {window[1]:g}]"},
    )
    manifest = write_manifest(out_dir / "manifest.txt", spec, "area")
    return OutputBundle(out_dir, manifest, [csv_path], [])


_COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "noise-validate": cmd_noise_validate,
    "spectrum": cmd_spectrum,
    "area": cmd_area,
}


def _nonnegative_int(token: str) -> int:
    value = int(token, 0)
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sastirap",
        description="Three-level population-transfer simulator with "
        "dissipation and colored dephasing noise.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in _COMMANDS.items():
        p = sub.add_parser(name, help=func.__doc__)
        p.add_argument("--config", required=True, help="configuration file path")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument(
            "--seed", type=_nonnegative_int, default=None, help="override the seed key"
        )
        p.add_argument(
            "--workers",
            type=int,
            default=os.cpu_count() or 1,
            help="worker processes for ensembles (default: all cores)",
        )
        p.add_argument("--no-plots", action="store_true", help="skip SVG quicklooks")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
        spec = parse_spec(text)
        if args.seed is not None:
            spec = replace(spec, seed=args.seed)
        out_dir = resolve_out_dir(args.out, spec.out_dir)
        bundle = _COMMANDS[args.command](
            spec, out_dir, max(1, args.workers), plots=not args.no_plots
        )
    except SpecParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except (IntegrationDivergedError, EnsembleRunError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DIVERGED
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    for path in bundle.all_files():
        print(path)
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
