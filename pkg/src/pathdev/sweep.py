"""Coordinate-descent hyperparameter search.

One hyperparameter is tuned at a time while the rest stay fixed; a full
cycle over the sweep list is a pass, and the search stops early when a
pass changes nothing.  Candidates must stay inside the tuning-table
ranges and are rejected at parse time otherwise.  The objective is
validation specificity under the NPV = 1 constraint; ties prefer the
smaller candidate value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import (
    SWEEP_RANGES,
    ConfigError,
    RunConfig,
    parse_key_value_lines,
    value_in_sweep_range,
)


@dataclass(frozen=True)
class SweepSpec:
    """Ordered (hyperparameter, candidates) pairs plus a pass budget."""

    coordinates: tuple  # of (key, tuple of candidate values)
    passes: int = 2

    def __post_init__(self):
        if self.passes < 1:
            raise ValueError(f"passes must be >= 1, got {self.passes}")
        if not self.coordinates:
            raise ValueError("sweep needs at least one hyperparameter")
        for key, values in self.coordinates:
            if key not in SWEEP_RANGES:
                raise ValueError(
                    f"{key!r} is not sweepable; choose from {sorted(SWEEP_RANGES)}"
                )
            if not values:
                raise ValueError(f"no candidate values for {key!r}")
            for v in values:
                if not value_in_sweep_range(key, v):
                    raise ValueError(f"candidate {v!r} for {key!r} is out of range")


def parse_sweep(text, source="sweep") -> SweepSpec:
    """Parse a sweep file: candidate lists ``key=v1,v2,...`` in sweep
    order, plus an optional ``passes=N`` line."""
    pairs = parse_key_value_lines(text, source)
    passes = 2
    coordinates = []
    for key, raw in pairs.items():
        if key == "passes":
            try:
                passes = int(raw)
            except ValueError:
                raise ConfigError(f"{source}: passes expects an integer, got {raw!r}") from None
            continue
        if key not in SWEEP_RANGES:
            raise ConfigError(
                f"{source}: {key!r} is not sweepable; choose from {sorted(SWEEP_RANGES)}"
            )
        values = []
        for part in raw.split(","):
            part = part.strip()
            if not part:
                continue
            value = float(part) if key in ("lr", "L2_Weight") else int(part)
            if not value_in_sweep_range(key, value):
                raise ConfigError(f"{source}: candidate {part!r} for {key!r} is out of range")
            values.append(value)
        if not values:
            raise ConfigError(f"{source}: no candidate values for {key!r}")
        coordinates.append((key, tuple(values)))
    try:
        return SweepSpec(coordinates=tuple(coordinates), passes=passes)
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def check_base_config(base: RunConfig, spec: SweepSpec):
    """Every sweepable field of the base must already be in range, so no
    evaluated configuration can fall outside the table."""
    for key in SWEEP_RANGES:
        if not value_in_sweep_range(key, base.get(key)):
            raise ConfigError(
                f"base config value {base.get(key)!r} for {key!r} is outside "
                "the sweepable range; fix it before sweeping"
            )


def coordinate_descent(base: RunConfig, spec: SweepSpec, evaluate):
    """Run the search.

    ``evaluate(config)`` must return a dict with at least a
    ``specificity`` entry (higher is better).  Returns
    (best_config, best_result, leaderboard) where the leaderboard lists
    one dict per training run with the full replayable configuration.
    """
    check_base_config(base, spec)
    leaderboard = []
    current = base
    current_result = evaluate(current)
    leaderboard.append(_row(current, current_result, 0, "base", None))
    run_no = 1
    for pass_no in range(1, spec.passes + 1):
        changed = False
        for key, candidates in spec.coordinates:
            # the adopted value comes from the candidate list alone; the
            # incumbent survives only when it is itself a candidate
            best_value = None
            best_result = None
            for value in candidates:
                if value == current.get(key):
                    result = current_result
                else:
                    candidate_cfg = current.with_value(key, value)
                    result = evaluate(candidate_cfg)
                    leaderboard.append(_row(candidate_cfg, result, pass_no, key, run_no))
                    run_no += 1
                if best_value is None or _better(result, value, best_result, best_value):
                    best_value, best_result = value, result
            if best_value != current.get(key):
                current = current.with_value(key, best_value)
                changed = True
            current_result = best_result
        if not changed:
            break
    return current, current_result, leaderboard


def _better(result, value, incumbent_result, incumbent_value):
    a, b = result["specificity"], incumbent_result["specificity"]
    if a != b:
        return a > b
    return value < incumbent_value


def _row(cfg: RunConfig, result, pass_no, coordinate, run_no):
    row = {"run": run_no, "pass": pass_no, "coordinate": coordinate}
    row.update({f"config.{k}": v for k, v in cfg.to_key_values().items()})
    row.update(result)
    return row
