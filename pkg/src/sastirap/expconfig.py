"""Line-oriented key = value experiment configuration.

A configuration document is UTF-8 text with one `key = value` pair per line;
`#` starts a comment anywhere and blank lines are skipped. The only required
key is `family`. Defaults: sigma = 5 (in 1/T), n_runs = 200, gamma = 0 and
noise off unless tau_c is given. Unknown keys are rejected by name, malformed
values are rejected with their line number.

render() writes a document that parses back to an identical spec (floats are
emitted at full precision), which is what makes emitted manifests re-runnable
bit for bit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, fields

from .pulses import PulseFamily

__all__ = ["ExperimentSpec", "SpecParseError", "parse_spec", "render_spec"]

DEFAULT_GAMMAS = (0.0, 1.0, 4.0, 10.0)
DEFAULT_TAU_CS = (None, 0.008, 0.08, 0.8)
DEFAULT_DELAYS = (0.25, 1.0 / 3.0, 0.5, 0.75)


class SpecParseError(ValueError):
    """Configuration rejected; line is 1-based, 0 for document-level errors."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class ExperimentSpec:
    """Fully resolved experiment parameters.

    tau_c = None means dephasing noise is off; delays/gammas/tau_cs are the
    sweep axes (tau_c entries of None mark the noise-free block). All rates
    are in units of 1/T and times in units of T; t_scale only relabels axes
    in plots.
    """

    family: PulseFamily
    omega0: float = 5.0
    tau_over_T: float = 0.75
    gamma: float = 0.0
    sigma: float = 5.0
    tau_c: float | None = None
    cd: bool = True
    n_runs: int = 200
    seed: int = 0
    dt: float | None = None
    out_dir: str | None = None
    t_scale: float = 1.0
    omega0_values: tuple[float, ...] | None = None
    gammas: tuple[float, ...] = DEFAULT_GAMMAS
    tau_cs: tuple[float | None, ...] = DEFAULT_TAU_CS
    delays: tuple[float, ...] = DEFAULT_DELAYS
    n_samples: int = 1_000_000
    bins: int = 61
    max_lag_over_tau_c: float = 5.0
    omega_max: float = 20.0
    n_omega: int = 401
    strict_dt: bool = False

    @property
    def noise_enabled(self) -> bool:
        return self.tau_c is not None


_BOOL_TOKENS = {
    "true": True,
    "on": True,
    "yes": True,
    "1": True,
    "false": False,
    "off": False,
    "no": False,
    "0": False,
}

#: Keys that only apply to the Gaussian family.
_GAUSSIAN_ONLY = ("tau_over_T", "delays")


def _parse_number(token: str, line: int) -> float:
    token = token.strip()
    try:
        if "/" in token:
            num, den = token.split("/", 1)
            return float(num) / float(den)
        return float(token)
    except (ValueError, ZeroDivisionError) as err:
        raise SpecParseError(line, f"unparsable number {token!r}") from err


def _parse_bool(token: str, line: int) -> bool:
    try:
        return _BOOL_TOKENS[token.strip().lower()]
    except KeyError:
        raise SpecParseError(line, f"unparsable boolean {token!r}") from None


def _parse_int(token: str, line: int) -> int:
    try:
        return int(token.strip(), 0)
    except ValueError:
        raise SpecParseError(line, f"unparsable integer {token!r}") from None


def _parse_float_list(token: str, line: int, allow_off: bool = False) -> tuple:
    values = []
    for part in token.split(","):
        part = part.strip()
        if not part:
            continue
        if allow_off and part.lower() in ("off", "none"):
            values.append(None)
        else:
            values.append(_parse_number(part, line))
    return tuple(values)


_PARSERS = {
    "family": lambda tok, ln: _parse_family(tok, ln),
    "omega0": _parse_number,
    "tau_over_T": _parse_number,
    "gamma": _parse_number,
    "sigma": _parse_number,
    "tau_c": _parse_number,
    "cd": _parse_bool,
    "n_runs": _parse_int,
    "seed": _parse_int,
    "dt": _parse_number,
    "out_dir": lambda tok, ln: tok.strip(),
    "t_scale": _parse_number,
    "omega0_values": _parse_float_list,
    "gammas": _parse_float_list,
    "tau_cs": lambda tok, ln: _parse_float_list(tok, ln, allow_off=True),
    "delays": _parse_float_list,
    "n_samples": _parse_int,
    "bins": _parse_int,
    "max_lag_over_tau_c": _parse_number,
    "omega_max": _parse_number,
    "n_omega": _parse_int,
    "strict_dt": _parse_bool,
}


def _parse_family(token: str, line: int) -> PulseFamily:
    try:
        return PulseFamily(token.strip().lower())
    except ValueError:
        names = ", ".join(f.value for f in PulseFamily)
        raise SpecParseError(
            line, f"unknown family {token.strip()!r} (expected one of: {names})"
        ) from None


def _validate(spec: ExperimentSpec, lines: dict[str, int]) -> None:
    def bad(key: str, message: str) -> SpecParseError:
        return SpecParseError(lines.get(key, 0), message)

    if spec.omega0 < 0:
        raise bad("omega0", f"omega0 must be nonnegative, got {spec.omega0}")
    if spec.tau_over_T <= 0:
        raise bad("tau_over_T", f"tau_over_T must be positive, got {spec.tau_over_T}")
    if spec.gamma < 0:
        raise bad("gamma", f"gamma must be nonnegative, got {spec.gamma}")
    if spec.sigma < 0:
        raise bad("sigma", f"sigma must be nonnegative, got {spec.sigma}")
    if spec.tau_c is not None and spec.tau_c <= 0:
        raise bad("tau_c", f"tau_c must be positive, got {spec.tau_c}")
    if spec.n_runs < 1:
        raise bad("n_runs", f"n_runs must be >= 1, got {spec.n_runs}")
    if spec.seed < 0:
        raise bad("seed", f"seed must be nonnegative, got {spec.seed}")
    if spec.dt is not None and spec.dt <= 0:
        raise bad("dt", f"dt must be positive, got {spec.dt}")
    if spec.t_scale <= 0:
        raise bad("t_scale", f"t_scale must be positive, got {spec.t_scale}")
    if spec.n_samples < 2:
        raise bad("n_samples", f"n_samples must be >= 2, got {spec.n_samples}")
    if spec.bins < 1:
        raise bad("bins", f"bins must be >= 1, got {spec.bins}")
    if spec.n_omega < 2:
        raise bad("n_omega", f"n_omega must be >= 2, got {spec.n_omega}")
    if spec.omega_max <= 0:
        raise bad("omega_max", f"omega_max must be positive, got {spec.omega_max}")
    if spec.max_lag_over_tau_c <= 0:
        raise bad(
            "max_lag_over_tau_c",
            f"max_lag_over_tau_c must be positive, got {spec.max_lag_over_tau_c}",
        )
    if spec.omega0_values is not None:
        if not spec.omega0_values:
            raise bad("omega0_values", "omega0_values must be nonempty")
        if any(v < 0 for v in spec.omega0_values):
            raise bad("omega0_values", "omega0_values must be nonnegative")
    for key in ("gammas", "delays", "tau_cs"):
        if not getattr(spec, key):
            raise bad(key, f"{key} must be nonempty")
    if any(g < 0 for g in spec.gammas):
        raise bad("gammas", "gammas must be nonnegative")
    if any(d <= 0 for d in spec.delays):
        raise bad("delays", "delays must be positive")
    if any(tc is not None and tc <= 0 for tc in spec.tau_cs):
        raise bad("tau_cs", "tau_c entries must be positive or 'off'")


def parse_spec(text: str) -> ExperimentSpec:
    """Parse a configuration document into a fully defaulted ExperimentSpec."""
    values: dict[str, object] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecParseError(lineno, f"expected 'key = value', got {raw.strip()!r}")
        key, _, token = line.partition("=")
        key = key.strip()
        token = token.strip()
        if key == "T":  # accepted alias for the axis-label scale
            key = "t_scale"
        if key not in _PARSERS:
            raise SpecParseError(lineno, f"unknown key {key!r}")
        if key in values:
            raise SpecParseError(lineno, f"duplicate key {key!r}")
        if not token:
            raise SpecParseError(lineno, f"missing value for key {key!r}")
        values[key] = _PARSERS[key](token, lineno)
        lines[key] = lineno

    if "family" not in values:
        raise SpecParseError(0, "missing required key 'family'")

    if values["family"] is PulseFamily.SINCOS:
        for key in _GAUSSIAN_ONLY:
            if key in values:
                warnings.warn(
                    f"key {key!r} is ignored for the sin-cos family",
                    UserWarning,
                    stacklevel=2,
                )
                del values[key]

    spec = ExperimentSpec(**values)  # type: ignore[arg-type]
    _validate(spec, lines)
    return spec


def _format_value(value: object) -> str:
    if isinstance(value, PulseFamily):
        return value.value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join("off" if v is None else repr(float(v)) for v in value)
    return str(value)


def render_spec(spec: ExperimentSpec) -> str:
    """Write a spec as a document that parses back to an equal spec."""
    out = []
    skip = set(_GAUSSIAN_ONLY) if spec.family is PulseFamily.SINCOS else set()
    for f in fields(spec):
        value = getattr(spec, f.name)
        if f.name in skip or value is None:
            continue
        out.append(f"{f.name} = {_format_value(value)}")
    return "\n".join(out) + "\n"
