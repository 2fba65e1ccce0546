"""Deterministic Monte Carlo ensembles and amplitude sweeps.

Runs are embarrassingly parallel: each gets its own seed derived from the
ensemble master seed and its run index, workers own all mutable state, and
the reduction (compensated mean in fixed run-index order, then empirical
quantiles) happens after every run finishes. Results are therefore
bit-identical for a given master seed no matter how many workers execute the
map.

The reported 98% interval is the empirical [0.01, 0.99] quantile pair of the
per-run fidelities, i.e. the range containing 98% of the stochastic runs, not
a parametric confidence interval.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .integrator import (
    IntegrationDivergedError,
    RunConfig,
    SimGrid,
    default_grid,
    simulate_run,
)
from .noise import OUParams

__all__ = [
    "EnsembleConfig",
    "EnsembleResult",
    "SweepResult",
    "SweepPanel",
    "EnsembleRunError",
    "derive_seed",
    "run_ensemble",
    "empirical_quantile",
    "sweep_amplitude",
    "sweep_matrix",
]

DEFAULT_N_RUNS = 200
INTERVAL_COVERAGE = 0.98


def derive_seed(*keys: int) -> int:
    """Collapse an integer key path into one stable 64-bit seed."""
    ss = np.random.SeedSequence(list(keys))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class EnsembleConfig:
    """A run template plus how many stochastic copies to execute.

    The template's own seed is ignored; run i uses
    derive_seed(master_seed, i).
    """

    run: RunConfig
    n_runs: int = DEFAULT_N_RUNS
    master_seed: int = 0
    grid: SimGrid | None = None

    def __post_init__(self) -> None:
        if self.n_runs < 1:
            raise ValueError(f"n_runs must be >= 1, got {self.n_runs}")


@dataclass(frozen=True)
class EnsembleResult:
    """Mean fidelity with the empirical 98% interval and the raw samples."""

    mean_fidelity: float
    ci_low: float
    ci_high: float
    mean_total_population: float
    samples: np.ndarray


@dataclass(frozen=True)
class SweepResult:
    """One ensemble per amplitude value, plus the fixed parameters."""

    omega0_values: np.ndarray
    results: tuple[EnsembleResult, ...]
    metadata: dict


@dataclass(frozen=True)
class SweepPanel:
    """All noise blocks of one (gamma, delay) panel.

    blocks maps the noise correlation time (None = noise off) to the sweep
    computed with that noise setting.
    """

    gamma: float
    delay: float | None
    blocks: tuple[tuple[float | None, SweepResult], ...]


class EnsembleRunError(RuntimeError):
    """One or more runs of an ensemble diverged."""

    def __init__(self, failures: list[tuple[int, int]]) -> None:
        indices = [run for run, _ in failures]
        super().__init__(
            f"{len(failures)} run(s) diverged (run index, step): {failures}; "
            f"failing runs: {indices}"
        )
        self.run_indices = indices


def _execute_run(args: tuple[RunConfig, SimGrid, int]) -> tuple[float, float] | tuple[None, int]:
    cfg, grid, seed = args
    try:
        result = simulate_run(replace(cfg, seed=seed, record_trajectory=False), grid)
    except IntegrationDivergedError as err:
        return None, err.step
    return result.fidelity, result.total_population


def _kahan_mean(values: np.ndarray) -> float:
    # Compensated summation in array order keeps the mean bit-stable
    # against future accumulation-order refactors.
    total = 0.0
    carry = 0.0
    for v in values:
        y = float(v) - carry
        t = total + y
        carry = (t - total) - y
        total = t
    return total / values.size


def empirical_quantile(samples: np.ndarray, q: float) -> float:
    """Linearly interpolated order statistic at rank q * (n - 1)."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("empty samples")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"quantile fraction must be in [0, 1], got {q}")
    ordered = np.sort(samples)
    rank = q * (ordered.size - 1)
    lo = math.floor(rank)
    hi = min(lo + 1, ordered.size - 1)
    frac = rank - lo
    value = ordered[lo] * (1.0 - frac) + ordered[hi] * frac
    # rounding must not push the result outside the bracketing samples
    return float(min(max(value, ordered[lo]), ordered[hi]))


def run_ensemble(cfg: EnsembleConfig, workers: int = 1) -> EnsembleResult:
    """Execute n_runs independent trajectories and reduce to summary stats.

    Any diverged run aborts the ensemble with the complete list of failing
    run indices. workers > 1 distributes runs over a process pool; the
    reduction is unaffected.
    """
    grid = cfg.grid
    if grid is None:
        grid = default_grid(
            cfg.run.protocol, cfg.run.noise if cfg.run.noise_enabled else None
        )
    tasks = [
        (cfg.run, grid, derive_seed(cfg.master_seed, i)) for i in range(cfg.n_runs)
    ]
    if workers > 1 and cfg.n_runs > 1:
        chunk = max(1, cfg.n_runs // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_execute_run, tasks, chunksize=chunk))
    else:
        outcomes = [_execute_run(task) for task in tasks]

    failures = [(i, step) for i, (fid, step) in enumerate(outcomes) if fid is None]
    if failures:
        raise EnsembleRunError(failures)

    fidelities = np.array([fid for fid, _ in outcomes])
    totals = np.array([total for _, total in outcomes])
    tail = 0.5 * (1.0 - INTERVAL_COVERAGE)
    return EnsembleResult(
        mean_fidelity=_kahan_mean(fidelities),
        ci_low=empirical_quantile(fidelities, tail),
        ci_high=empirical_quantile(fidelities, 1.0 - tail),
        mean_total_population=_kahan_mean(totals),
        samples=fidelities,
    )


def _sweep_metadata(cfg: EnsembleConfig) -> dict:
    run = cfg.run
    meta = {
        "family": run.protocol.family.value,
        "cd_enabled": run.protocol.cd_enabled,
        "gamma": run.gamma,
        "n_runs": cfg.n_runs,
        "master_seed": cfg.master_seed,
    }
    if run.protocol.family.value == "gaussian":
        meta["tau_over_T"] = run.protocol.tau
    if run.noise_enabled and run.noise is not None:
        meta["sigma"] = run.noise.sigma
        meta["tau_c"] = run.noise.tau_c
    else:
        meta["tau_c"] = None
    return meta


def sweep_amplitude(
    base: EnsembleConfig,
    omega0_values: np.ndarray,
    workers: int = 1,
) -> SweepResult:
    """One ensemble per peak amplitude.

    Point i runs under master seed derive_seed(base.master_seed, i), so the
    points are statistically independent yet individually reproducible.
    """
    omega0_values = np.asarray(omega0_values, dtype=float)
    if omega0_values.size == 0:
        raise ValueError("omega0_values must be nonempty")
    if (omega0_values < 0).any():
        raise ValueError("omega0_values must be nonnegative")
    results = []
    for i, omega0 in enumerate(omega0_values):
        point = replace(
            base,
            run=replace(
                base.run, protocol=replace(base.run.protocol, omega0=float(omega0))
            ),
            master_seed=derive_seed(base.master_seed, i),
        )
        results.append(run_ensemble(point, workers=workers))
    return SweepResult(
        omega0_values=omega0_values,
        results=tuple(results),
        metadata=_sweep_metadata(base),
    )


def default_omega0_grid() -> np.ndarray:
    """61 uniform amplitudes covering [0, 60] / T."""
    return np.linspace(0.0, 60.0, 61)


def sweep_matrix(
    base: EnsembleConfig,
    gammas: list[float],
    tau_cs: list[float | None],
    delays: list[float | None],
    omega0_values: np.ndarray | None = None,
    workers: int = 1,
    dt_override: float | None = None,
) -> list[SweepPanel]:
    """Cartesian sweep over dissipation, noise correlation time and delay.

    Yields one panel per (gamma, delay) pair with one amplitude sweep per
    tau_c entry (None = noise off). The noise strength sigma is taken from
    the template's noise parameters (5/T when the template has none). Block
    b of the product enumeration, in (gamma, delay, tau_c) order, uses
    master seed derive_seed(master_seed, b). Any grid on the base config is
    ignored: each block needs its own step (tau_c enters the step rule),
    rebuilt per point unless dt_override pins the step for every block.
    """
    if not gammas or not tau_cs or not delays:
        raise ValueError("gammas, tau_cs and delays must be nonempty")
    if omega0_values is None:
        omega0_values = default_omega0_grid()

    panels = []
    block = 0
    for gamma in gammas:
        for delay in delays:
            blocks = []
            for tau_c in tau_cs:
                protocol = base.run.protocol
                if delay is not None:
                    protocol = replace(protocol, tau=float(delay))
                run = replace(
                    base.run,
                    protocol=protocol,
                    gamma=float(gamma),
                    noise=(
                        None
                        if tau_c is None
                        else OUParams(
                            sigma=base.run.noise.sigma if base.run.noise else 5.0,
                            tau_c=float(tau_c),
                        )
                    ),
                    noise_enabled=tau_c is not None,
                )
                grid = None
                if dt_override is not None:
                    grid = SimGrid.from_step(*protocol.window(), dt_override)
                sub = replace(
                    base,
                    run=run,
                    master_seed=derive_seed(base.master_seed, block),
                    grid=grid,
                )
                blocks.append((tau_c, sweep_amplitude(sub, omega0_values, workers)))
                block += 1
            panels.append(
                SweepPanel(gamma=float(gamma), delay=delay, blocks=tuple(blocks))
            )
    return panels
