"""Labeled time-series datasets and their CSV interchange format.

Two files describe a dataset: a values CSV with header
``series_id,t,ch_0,...,ch_{d-1}`` (rows grouped by series, ordered by t)
and a labels CSV with header ``series_id,label``.  Floats are written
with repr so that re-emitting a dataset is byte-stable.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np

from .validation import check_series

SPLIT_TAGS = ("train", "validation", "test")


@dataclass(frozen=True)
class Sample:
    """One labeled series, optionally assigned to a split."""

    series_id: str
    series: np.ndarray  # (N+1, d)
    label: int
    split: str | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "series", check_series(self.series, "series"))
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label}")
        if self.split is not None and self.split not in SPLIT_TAGS:
            raise ValueError(f"split must be one of {SPLIT_TAGS}, got {self.split}")


@dataclass(frozen=True)
class Dataset:
    """A list of samples sharing a channel count."""

    samples: tuple

    def __post_init__(self):
        samples = tuple(self.samples)
        if samples:
            d = samples[0].series.shape[1]
            for s in samples:
                if s.series.shape[1] != d:
                    raise ValueError(
                        f"inconsistent channel count: {s.series.shape[1]} vs {d}"
                    )
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    @property
    def channels(self) -> int:
        if not self.samples:
            raise ValueError("empty dataset has no channel count")
        return self.samples[0].series.shape[1]

    def labels(self) -> np.ndarray:
        return np.array([s.label for s in self.samples], dtype=int)

    def subset(self, split: str) -> "Dataset":
        return Dataset(tuple(s for s in self.samples if s.split == split))

    def with_splits(self, tags) -> "Dataset":
        if len(tags) != len(self.samples):
            raise ValueError("one split tag per sample required")
        return Dataset(
            tuple(replace(s, split=t) for s, t in zip(self.samples, tags))
        )


class CsvFormatError(ValueError):
    """Malformed dataset CSV; the message carries the offending line."""


def _parse_error(path, line_no, message):
    return CsvFormatError(f"{path}, line {line_no}: {message}")


def load_series(values_path):
    """Read a values CSV into an ordered {series_id: (N+1, d) array}."""
    series = {}
    with open(values_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 3 or header[:2] != ["series_id", "t"]:
            raise _parse_error(values_path, 1, "expected header series_id,t,ch_0,...")
        channel_names = header[2:]
        expected = [f"ch_{i}" for i in range(len(channel_names))]
        if channel_names != expected:
            raise _parse_error(
                values_path, 1, f"channel columns must be {expected}, got {channel_names}"
            )
        rows = {}
        order = []
        last_id = None
        last_t = None
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise _parse_error(
                    values_path, line_no, f"expected {len(header)} fields, got {len(row)}"
                )
            sid = row[0]
            try:
                t = float(row[1])
            except ValueError:
                raise _parse_error(values_path, line_no, f"bad t value {row[1]!r}") from None
            try:
                values = [float(v) for v in row[2:]]
            except ValueError:
                raise _parse_error(
                    values_path, line_no, f"bad channel value in {row[2:]!r}"
                ) from None
            if sid != last_id:
                if sid in rows:
                    raise _parse_error(
                        values_path, line_no, f"series {sid!r} rows are not contiguous"
                    )
                rows[sid] = []
                order.append(sid)
                last_t = None
            elif last_t is not None and t <= last_t:
                raise _parse_error(
                    values_path, line_no, f"t must be strictly increasing within series {sid!r}"
                )
            rows[sid].append(values)
            last_id, last_t = sid, t
    for sid in order:
        series[sid] = np.asarray(rows[sid], dtype=np.float64)
    return series


def load_labels(labels_path):
    """Read a labels CSV into an ordered {series_id: 0|1}."""
    labels = {}
    with open(labels_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["series_id", "label"]:
            raise _parse_error(labels_path, 1, "expected header series_id,label")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise _parse_error(labels_path, line_no, f"expected 2 fields, got {len(row)}")
            sid, raw = row
            if raw not in ("0", "1"):
                raise _parse_error(labels_path, line_no, f"label must be 0 or 1, got {raw!r}")
            if sid in labels:
                raise _parse_error(labels_path, line_no, f"duplicate label for series {sid!r}")
            labels[sid] = int(raw)
    return labels


def load_dataset(values_path, labels_path) -> Dataset:
    """Assemble a dataset from its two CSV files."""
    series = load_series(values_path)
    labels = load_labels(labels_path)
    missing = [sid for sid in series if sid not in labels]
    if missing:
        raise CsvFormatError(f"{labels_path}: no label for series {missing[0]!r}")
    extra = [sid for sid in labels if sid not in series]
    if extra:
        raise CsvFormatError(f"{values_path}: no values for labeled series {extra[0]!r}")
    samples = tuple(
        Sample(series_id=sid, series=series[sid], label=labels[sid]) for sid in series
    )
    return Dataset(samples)


def write_dataset(dataset: Dataset, values_path, labels_path):
    """Emit a dataset in the interchange format."""
    if not len(dataset):
        raise ValueError("refusing to write an empty dataset")
    d = dataset.channels
    with open(values_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series_id", "t"] + [f"ch_{i}" for i in range(d)])
        for sample in dataset:
            for t, point in enumerate(sample.series):
                writer.writerow([sample.series_id, t] + [repr(float(v)) for v in point])
    with open(labels_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series_id", "label"])
        for sample in dataset:
            writer.writerow([sample.series_id, sample.label])
