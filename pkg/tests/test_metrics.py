import json

import numpy as np
import pytest

from pathdev.metrics import (
    ConfusionCounts,
    classify,
    confusion,
    metrics,
    report_from_dict,
    select_threshold,
)

from helpers import brute_force_threshold


class TestConfusion:
    def test_counts(self):
        labels = [1, 1, 0, 0, 1]
        preds = [1, 0, 0, 1, 1]
        c = confusion(labels, preds)
        assert (c.tp, c.tn, c.fp, c.fn) == (2, 1, 1, 1)
        assert c.total == 5

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            ConfusionCounts(tp=-1, tn=0, fp=0, fn=0)

    def test_classify_strict_inequality(self):
        np.testing.assert_array_equal(classify([0.3, 0.5, 0.7], 0.5), [0, 1, 1])


class TestMetrics:
    def test_perfect_npv(self):
        rep = metrics(ConfusionCounts(tp=0, tn=5, fp=0, fn=0))
        assert rep.npv == 1.0

    def test_specificity_quarter(self):
        rep = metrics(ConfusionCounts(tp=0, tn=3, fp=9, fn=0))
        assert rep.specificity == 0.25

    def test_direct_ratios(self):
        rep = metrics(ConfusionCounts(tp=0, tn=10, fp=5, fn=2))
        assert rep.npv == pytest.approx(10 / 12)
        assert rep.specificity == pytest.approx(10 / 15)

    def test_undefined_reported_as_none(self):
        rep = metrics(ConfusionCounts(tp=4, tn=0, fp=0, fn=0))
        assert rep.npv is None
        assert rep.specificity is None

    def test_json_round_trip(self):
        rep = metrics(ConfusionCounts(tp=1, tn=2, fp=3, fn=0), threshold=0.4)
        data = json.loads(rep.to_json())
        assert data["tn"] == 2
        assert data["threshold"] == 0.4
        back = report_from_dict(data)
        assert back == rep

    def test_json_null_for_undefined(self):
        rep = metrics(ConfusionCounts(tp=4, tn=0, fp=0, fn=0))
        data = json.loads(rep.to_json())
        assert data["npv"] is None
        assert data["specificity"] is None


class TestSelectThreshold:
    def test_clean_separation(self):
        tau, rep = select_threshold([0.1, 0.2, 0.6, 0.9], [0, 0, 1, 1])
        assert tau == 0.6
        assert rep.specificity == 1.0
        assert rep.npv == 1.0

    def test_all_positive_degenerate(self):
        tau, rep = select_threshold([0.5, 0.9], [1, 1])
        assert tau == 0.0
        assert rep.specificity == 0.0
        assert rep.counts.tn + rep.counts.fn == 0

    def test_blocked_by_low_positive(self):
        # any threshold above 0.4 misclassifies the positive; specificity 0
        tau, rep = select_threshold([0.4, 0.5], [1, 0])
        assert rep.specificity == 0.0
        assert rep.counts.fn == 0
        assert tau == 0.0  # ties break to the smaller threshold

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            select_threshold([], [])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="equal length"):
            select_threshold([0.5], [1, 0])

    def test_returned_threshold_keeps_npv_one(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(1, 40))
            probs = np.round(rng.uniform(size=n), 2)  # rounded to force ties
            labels = rng.integers(0, 2, size=n)
            tau, rep = select_threshold(probs, labels)
            assert rep.counts.fn == 0

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            n = int(rng.integers(1, 50))
            probs = np.round(rng.uniform(size=n), 1)
            labels = rng.integers(0, 2, size=n)
            tau, rep = select_threshold(probs, labels)
            ref_tau, ref_spec = brute_force_threshold(probs, labels)
            assert tau == ref_tau
            assert rep.specificity == ref_spec
