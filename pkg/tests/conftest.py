"""Shared fixtures.

The Monte Carlo ensembles used by both the statistical property tests and the
acceptance suite take tens of seconds each, so they are computed once per
session here.
"""

from __future__ import annotations

import pytest

from sastirap import (
    EnsembleConfig,
    OUParams,
    ProtocolConfig,
    PulseFamily,
    RunConfig,
    run_ensemble,
)

MASTER_SEED = 0
N_RUNS = 200
SIGMA = 5.0


def make_ensemble_config(
    family: str,
    omega0: float,
    tau: float = 0.75,
    gamma: float = 0.0,
    cd_enabled: bool = True,
    tau_c: float | None = None,
    sigma: float = SIGMA,
    n_runs: int = N_RUNS,
    master_seed: int = MASTER_SEED,
) -> EnsembleConfig:
    protocol = ProtocolConfig(
        family=PulseFamily(family), omega0=omega0, tau=tau, cd_enabled=cd_enabled
    )
    run = RunConfig(
        protocol=protocol,
        gamma=gamma,
        noise=None if tau_c is None else OUParams(sigma=sigma, tau_c=tau_c),
        noise_enabled=tau_c is not None,
    )
    return EnsembleConfig(run=run, n_runs=n_runs, master_seed=master_seed)


@pytest.fixture(scope="session")
def sincos_small_amplitude_by_tauc():
    """Sin-cos superadiabatic protocol at omega0 = 2/T for the three noise
    correlation times; mean fidelity drops as tau_c grows."""
    return {
        tau_c: run_ensemble(
            make_ensemble_config("sincos", omega0=2.0, tau_c=tau_c)
        )
        for tau_c in (0.008, 0.08, 0.8)
    }


@pytest.fixture(scope="session")
def gaussian_large_amplitude_by_tauc():
    """Plain Gaussian protocol (no counterdiabatic drive) at omega0 = 60/T,
    delay tau = T/2; the intermediate correlation time hurts the most."""
    return {
        tau_c: run_ensemble(
            make_ensemble_config(
                "gaussian", omega0=60.0, tau=0.5, cd_enabled=False, tau_c=tau_c
            )
        )
        for tau_c in (0.008, 0.08, 0.8)
    }


@pytest.fixture(scope="session")
def gaussian_small_amplitude_by_delay():
    """Gaussian superadiabatic protocol at omega0 = 2/T, tau_c = 0.08T;
    larger pump-Stokes delay broadens the counterdiabatic spectrum and
    improves the noisy fidelity."""
    return {
        delay: run_ensemble(
            make_ensemble_config("gaussian", omega0=2.0, tau=delay, tau_c=0.08)
        )
        for delay in (0.25, 1.0 / 3.0, 0.5, 0.75)
    }
