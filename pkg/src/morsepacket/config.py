"""Run configuration: flat ``key = value`` files merged with command-line overrides.

Precedence is command line > file > defaults.  Unknown keys are rejected.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
import math
from pathlib import Path

from .exceptions import MorsePacketError
from .morse import HI, MoleculeParams, SpatialGrid
from .phasespace import MomentumGrid

__all__ = ["ConfigError", "RunConfig", "TimePoint", "build_config", "parse_time", "read_config_file"]


class ConfigError(MorsePacketError, ValueError):
    """Invalid or unknown configuration entry."""


@dataclass(frozen=True)
class TimePoint:
    """Either an absolute time (a.u.) or a fraction of the revival time."""

    absolute: float | None = None
    fraction: Fraction | None = None

    def resolve(self, t_revival):
        return float(self.fraction) * t_revival if self.fraction is not None else self.absolute

    @property
    def label(self):
        if self.fraction is not None:
            if self.fraction == 0:
                return "t0"
            return f"Trev{self.fraction.numerator}_{self.fraction.denominator}"
        return f"t{self.absolute:g}"

    def __str__(self):
        if self.fraction is not None:
            return "0" if self.fraction == 0 else f"{self.fraction.numerator}/{self.fraction.denominator} T_rev"
        return f"{self.absolute:g} a.u."


def parse_time(text):
    """Parse ``"r/q"`` (fraction of T_rev, coprime) or a plain nonnegative real."""
    text = str(text).strip()
    if "/" in text:
        num, _, den = text.partition("/")
        try:
            r, q = int(num), int(den)
        except ValueError:
            raise ConfigError(f"time fraction {text!r} must be 'r/q' with integers") from None
        if q <= 0 or r < 0:
            raise ConfigError(f"time fraction {text!r} must have r >= 0 and q > 0")
        if math.gcd(r, q) != 1:
            raise ConfigError(f"time fraction {text!r} is not in lowest terms (r, q not coprime)")
        return TimePoint(fraction=Fraction(r, q))
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"cannot parse time {text!r}") from None
    if not (math.isfinite(value) and value >= 0):
        raise ConfigError(f"time {text!r} must be finite and nonnegative")
    if value == 0:
        return TimePoint(fraction=Fraction(0))
    return TimePoint(absolute=value)


#: Times of the four coordinate-space snapshots: 0, T_rev/8, T_rev/4, T_rev/2.
DEFAULT_TIMES = tuple(parse_time(t) for t in ("0", "1/8", "1/4", "1/2"))
DEFAULT_ALPHAS = (1.4, 2.5)


@dataclass(frozen=True)
class RunConfig:
    params: MoleculeParams = HI
    alphas: tuple = DEFAULT_ALPHAS
    times: tuple = ()
    grid_points: int = 4096
    x_min: float = -0.8
    x_max: float = 4.0
    p_points: int = 512
    p_max: float = 80.0
    out: Path = field(default_factory=lambda: Path("out"))
    precision: int = 12

    @property
    def grid(self):
        return SpatialGrid(self.x_min, self.x_max, self.grid_points)

    @property
    def p_axis(self):
        return MomentumGrid.symmetric(self.p_max, self.p_points)

    @property
    def effective_times(self):
        return self.times or DEFAULT_TIMES


def _float(key, text):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a real number, got {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: must be finite, got {text!r}")
    return value


def _int(key, text):
    try:
        value = int(str(text).strip())
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None
    return value


def _list(text):
    if isinstance(text, (list, tuple)):
        return list(text)
    return [item for item in (s.strip() for s in str(text).split(",")) if item]


_PARAM_KEYS = ("D", "beta", "mu", "r0")
KNOWN_KEYS = _PARAM_KEYS + (
    "alpha", "time", "grid_points", "x_min", "x_max", "p_points", "p_max", "out", "precision",
)


def read_config_file(path):
    """Read a flat ``key = value`` file (``#`` starts a comment)."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown configuration key {key!r}")
        values[key] = value.strip()
    return values


def build_config(file_values=None, overrides=None):
    """Merge defaults, file values and command-line overrides into a RunConfig.

    Both mappings use the keys in ``KNOWN_KEYS``; ``None`` entries in
    ``overrides`` mean "not given".
    """
    merged = dict(file_values or {})
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    unknown = sorted(set(merged) - set(KNOWN_KEYS))
    if unknown:
        raise ConfigError(f"unknown configuration key {unknown[0]!r}")

    cfg = RunConfig()
    changes = {}
    if any(k in merged for k in _PARAM_KEYS):
        physical = {k: _float(k, merged[k]) if k in merged else getattr(HI, k) for k in _PARAM_KEYS}
        try:
            changes["params"] = MoleculeParams(**physical)
        except MorsePacketError as exc:
            raise ConfigError(str(exc)) from None
    if "alpha" in merged:
        alphas = tuple(_float("alpha", a) for a in _list(merged["alpha"]))
        if any(a < 0 for a in alphas):
            raise ConfigError("alpha: values must be nonnegative")
        changes["alphas"] = alphas or DEFAULT_ALPHAS
    if "time" in merged:
        changes["times"] = tuple(parse_time(t) for t in _list(merged["time"]))
    for key in ("grid_points", "p_points", "precision"):
        if key in merged:
            changes[key] = _int(key, merged[key])
    for key in ("x_min", "x_max", "p_max"):
        if key in merged:
            changes[key] = _float(key, merged[key])
    if "out" in merged:
        changes["out"] = Path(merged["out"])
    cfg = replace(cfg, **changes)

    if cfg.grid_points < 16:
        raise ConfigError("grid_points must be at least 16")
    if cfg.p_points < 4:
        raise ConfigError("p_points must be at least 4")
    if not cfg.x_min < cfg.x_max:
        raise ConfigError("x_min must be smaller than x_max")
    if not cfg.p_max > 0:
        raise ConfigError("p_max must be positive")
    if not 1 <= cfg.precision <= 17:
        raise ConfigError("precision must lie in 1..17")
    return cfg
