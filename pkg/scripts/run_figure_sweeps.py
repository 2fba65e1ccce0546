#!/usr/bin/env python3
"""Fidelity-versus-amplitude sweep grids for both pulse families.

Produces, per delay and dissipation rate, one CSV panel with the mean
fidelity and empirical 98% interval for the noise-free case and the three
noise correlation times. The quick mode (default) thins the amplitude grid
and the ensemble so the whole set finishes in minutes; --full runs the
complete 61-point, 200-run grid (hours on one core).
"""

import argparse
import sys
from pathlib import Path

from sastirap.cli import main as cli_main


def build_config(family: str, cd: bool, quick: bool) -> str:
    lines = [
        f"family = {family}",
        f"cd = {'on' if cd else 'off'}",
        "sigma = 5",
        "seed = 0",
    ]
    if quick:
        lines.append("gammas = 0, 10")
        lines.append("tau_cs = off, 0.08")
        lines.append("n_runs = 20")
        lines.append("omega0_values = " + ", ".join(str(v) for v in range(0, 61, 10)))
        if family == "gaussian":
            lines.append("delays = 1/4, 3/4")
    else:
        lines.append("gammas = 0, 1, 4, 10")
        lines.append("tau_cs = off, 0.008, 0.08, 0.8")
        lines.append("n_runs = 200")
        if family == "gaussian":
            lines.append("delays = 1/4, 1/3, 1/2, 3/4")
    return "\n".join(lines) + "\n"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/sweeps", help="output root directory")
    parser.add_argument("--full", action="store_true", help="full grid, 200 runs")
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args()

    out_root = Path(args.out)
    out_root.mkdir(parents=True, exist_ok=True)
    for family in ("gaussian", "sincos"):
        for cd in (False, True):
            tag = f"{family}_{'sa' if cd else 'plain'}"
            cfg_path = out_root / f"{tag}.cfg"
            cfg_path.write_text(build_config(family, cd, quick=not args.full))
            argv = [
                "sweep",
                "--config", str(cfg_path),
                "--out", str(out_root / tag),
            ]
            if args.workers:
                argv += ["--workers", str(args.workers)]
            print(f"== sweep {tag} ==")
            code = cli_main(argv)
            if code != 0:
                return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
