"""Run configuration: flat key=value files and range validation.

Config files hold one ``key=value`` pair per line with ``#`` comments.
Recognized keys are the tuning-table identifiers plus ``algebra`` and
``seed``:

    lr, epoch, batch_size, DEV_Number, DNN_Number, L2_Weight, algebra, seed

Keys for the convolutional/recurrent model variants (CNN_*, LSTM_*) are
recognized but rejected with an explanatory message: this package
implements only the development-layer classifier.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .algebra import ALGEBRA_KINDS

# Tuning-table ranges; sweeps may only propose values inside these.
SWEEP_RANGES = {
    "lr": (0.001, 0.01),
    "epoch": (100, 150, 300),
    "batch_size": (32, 64, 128),
    "DEV_Number": ("int_range", 16, 32),
    "DNN_Number": ("int_range", 16, 64),
    "L2_Weight": ("float_range", 0.0, 0.05),
}

_UNSUPPORTED_PREFIXES = ("CNN_", "LSTM_")

_KEY_TYPES = {
    "lr": float,
    "epoch": int,
    "batch_size": int,
    "DEV_Number": int,
    "DNN_Number": int,
    "L2_Weight": float,
    "algebra": str,
    "seed": int,
}


@dataclass(frozen=True)
class RunConfig:
    """One complete training run."""

    lr: float = 0.001
    epochs: int = 100
    batch_size: int = 32
    dev_order: int = 16
    hidden_width: int = 16
    l2_weight: float = 0.0
    algebra: str = "so"
    seed: int = 0

    def __post_init__(self):
        if self.algebra not in ALGEBRA_KINDS:
            raise ValueError(f"algebra must be one of {ALGEBRA_KINDS}, got {self.algebra!r}")
        if not 2 <= self.dev_order <= 64:
            raise ValueError(f"DEV_Number must lie in [2, 64], got {self.dev_order}")
        if self.algebra == "sp" and self.dev_order % 2 != 0:
            raise ValueError("the symplectic algebra needs an even DEV_Number")
        if self.lr <= 0 or self.epochs < 1 or self.batch_size < 1:
            raise ValueError("lr, epoch, and batch_size must be positive")
        if self.l2_weight < 0:
            raise ValueError("L2_Weight must be nonnegative")
        if self.hidden_width < 1:
            raise ValueError("DNN_Number must be >= 1")

    def get(self, key):
        return getattr(self, _FIELD_OF_KEY[key])

    def with_value(self, key, value) -> "RunConfig":
        return replace(self, **{_FIELD_OF_KEY[key]: value})

    def to_key_values(self):
        """The flat-file representation, in canonical key order."""
        return {
            "lr": self.lr,
            "epoch": self.epochs,
            "batch_size": self.batch_size,
            "DEV_Number": self.dev_order,
            "DNN_Number": self.hidden_width,
            "L2_Weight": self.l2_weight,
            "algebra": self.algebra,
            "seed": self.seed,
        }


_FIELD_OF_KEY = {
    "lr": "lr",
    "epoch": "epochs",
    "batch_size": "batch_size",
    "DEV_Number": "dev_order",
    "DNN_Number": "hidden_width",
    "L2_Weight": "l2_weight",
    "algebra": "algebra",
    "seed": "seed",
}


class ConfigError(ValueError):
    pass


def parse_key_value_lines(text, source="config"):
    """Parse ``key=value`` lines, returning an ordered dict of strings."""
    pairs = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}, line {line_no}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in pairs:
            raise ConfigError(f"{source}, line {line_no}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def _convert(key, raw, source):
    try:
        return _KEY_TYPES[key](raw)
    except ValueError:
        raise ConfigError(
            f"{source}: key {key!r} expects a {_KEY_TYPES[key].__name__}, got {raw!r}"
        ) from None


def parse_config(text, source="config", base: RunConfig | None = None) -> RunConfig:
    """Build a RunConfig from flat text, starting from ``base`` defaults."""
    pairs = parse_key_value_lines(text, source)
    cfg = base if base is not None else RunConfig()
    for key, raw in pairs.items():
        if any(key.startswith(p) for p in _UNSUPPORTED_PREFIXES):
            raise ConfigError(
                f"{source}: hyperparameter {key!r} belongs to the convolutional/"
                "recurrent model variants, which this package does not implement; "
                f"supported keys: {sorted(_KEY_TYPES)}"
            )
        if key not in _KEY_TYPES:
            raise ConfigError(
                f"{source}: unknown key {key!r}; supported keys: {sorted(_KEY_TYPES)}"
            )
        cfg = cfg.with_value(key, _convert(key, raw, source))
    return cfg


def load_config(path, base: RunConfig | None = None) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read(), source=str(path), base=base)


def config_lines(cfg: RunConfig):
    return [f"{key}={value}" for key, value in cfg.to_key_values().items()]


def value_in_sweep_range(key, value) -> bool:
    """Whether a candidate value is admissible for sweeping ``key``."""
    spec = SWEEP_RANGES.get(key)
    if spec is None:
        return False
    if spec[0] == "int_range":
        return float(value).is_integer() and spec[1] <= int(value) <= spec[2]
    if spec[0] == "float_range":
        return spec[1] <= float(value) <= spec[2]
    return value in spec
