"""Confusion counts, NPV/specificity, and decision-threshold selection.

Probabilities refer to the positive class (label 1); a sample is
classified negative exactly when its probability falls strictly below
the decision threshold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class EvalReport:
    """Counts plus the two target ratios; None marks an undefined ratio."""

    counts: ConfusionCounts
    npv: float | None
    specificity: float | None
    threshold: float | None = None

    def to_dict(self):
        return {
            "tp": self.counts.tp,
            "tn": self.counts.tn,
            "fp": self.counts.fp,
            "fn": self.counts.fn,
            "npv": self.npv,
            "specificity": self.specificity,
            "threshold": self.threshold,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def report_from_dict(data) -> EvalReport:
    counts = ConfusionCounts(
        tp=int(data["tp"]), tn=int(data["tn"]), fp=int(data["fp"]), fn=int(data["fn"])
    )
    return EvalReport(
        counts=counts,
        npv=data["npv"],
        specificity=data["specificity"],
        threshold=data["threshold"],
    )


def classify(probs, threshold):
    """Predicted labels: negative iff probability < threshold."""
    probs = np.asarray(probs, dtype=np.float64)
    return (probs >= threshold).astype(int)


def confusion(labels, predictions) -> ConfusionCounts:
    labels = np.asarray(labels, dtype=int)
    predictions = np.asarray(predictions, dtype=int)
    if labels.shape != predictions.shape:
        raise ValueError("labels and predictions must have equal length")
    return ConfusionCounts(
        tp=int(((labels == 1) & (predictions == 1)).sum()),
        tn=int(((labels == 0) & (predictions == 0)).sum()),
        fp=int(((labels == 0) & (predictions == 1)).sum()),
        fn=int(((labels == 1) & (predictions == 0)).sum()),
    )


def metrics(counts: ConfusionCounts, threshold: float | None = None) -> EvalReport:
    """NPV = tn/(tn+fn) and specificity = tn/(tn+fp); undefined ratios
    are reported as None, never as 0/0."""
    npv = None if counts.tn + counts.fn == 0 else counts.tn / (counts.tn + counts.fn)
    spec = None if counts.tn + counts.fp == 0 else counts.tn / (counts.tn + counts.fp)
    return EvalReport(counts=counts, npv=npv, specificity=spec, threshold=threshold)


def select_threshold(probs, labels):
    """Pick the threshold with NPV = 1 that maximizes specificity.

    Candidates are the sorted unique probabilities plus the sentinels 0
    and 1.  A candidate satisfies the NPV constraint when it produces no
    false negatives; predicting no negatives at all counts as satisfying
    (vacuous NPV) with specificity scored 0.  Ties break towards the
    smaller threshold.  Returns (threshold, EvalReport); the report's
    specificity carries the selection score, so a vacuously satisfied
    candidate reports 0.0 rather than an undefined ratio.
    """
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels, dtype=int)
    if probs.size == 0:
        raise ValueError("cannot select a threshold from empty inputs")
    if probs.shape != labels.shape:
        raise ValueError("probs and labels must have equal length")

    candidates = np.unique(np.concatenate([probs, [0.0, 1.0]]))
    best = None
    for tau in candidates:
        counts = confusion(labels, classify(probs, tau))
        if counts.fn != 0:
            continue
        report = metrics(counts, threshold=float(tau))
        score = 0.0 if report.specificity is None else report.specificity
        if best is None or score > best[0]:
            best = (score, float(tau), report)
    score, tau, report = best  # tau = 0 always satisfies, so best exists
    if report.specificity is None:
        report = EvalReport(
            counts=report.counts, npv=report.npv, specificity=score, threshold=tau
        )
    return tau, report
