#!/usr/bin/env python3
"""Self-validation data for the colored-noise generator.

Emits the histogram of a long noise series against the stationary Gaussian
density and the empirical autocorrelation against sigma^2 exp(-|lag|/tau_c),
plus the spectral-overlap picture: Lorentzian noise spectra for the three
correlation times next to the counterdiabatic-pulse transforms for the four
delays.
"""

import argparse
import sys
from pathlib import Path

from sastirap.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/noise", help="output root directory")
    parser.add_argument("--samples", type=int, default=1_000_000)
    args = parser.parse_args()

    out_root = Path(args.out)
    out_root.mkdir(parents=True, exist_ok=True)
    cfg_path = out_root / "noise.cfg"
    cfg_path.write_text(
        "family = gaussian\n"
        "sigma = 5\n"
        "tau_c = 0.08\n"
        f"n_samples = {args.samples}\n"
        "seed = 0\n"
    )
    code = cli_main(
        ["noise-validate", "--config", str(cfg_path), "--out", str(out_root / "validation")]
    )
    if code != 0:
        return code
    return cli_main(
        ["spectrum", "--config", str(cfg_path), "--out", str(out_root / "spectrum")]
    )


if __name__ == "__main__":
    sys.exit(main())
