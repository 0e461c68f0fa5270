import numpy as np
import pytest

from pathdev.dataset import Dataset, Sample
from pathdev.sampling import augment_training_split, smote, split, stratified_split


def make_dataset(n_pos, n_neg, n_points=6, channels=2, seed=0):
    rng = np.random.default_rng(seed)
    samples = []
    for i in range(n_pos + n_neg):
        samples.append(
            Sample(
                series_id=f"s{i:04d}",
                series=rng.normal(size=(n_points, channels)),
                label=1 if i < n_pos else 0,
            )
        )
    return Dataset(tuple(samples))


class TestSmote:
    def test_midpoint_formula(self):
        # lambda = 0.5 on the segment (0,0) -> (2,2) gives (1,1)
        a = np.array([0.0, 0.0])
        b = np.array([2.0, 2.0])
        assert np.array_equal(a + 0.5 * (b - a), [1.0, 1.0])

    def test_lambda_zero_endpoint(self):
        a = np.array([3.0, -1.0])
        b = np.array([5.0, 5.0])
        assert np.array_equal(a + 0.0 * (b - a), a)

    def test_outputs_lie_on_parent_segments(self):
        rng = np.random.default_rng(1)
        minority = rng.normal(size=(12, 4))
        out = smote(minority, k=3, target_count=40, seed=7)
        for point in out:
            lam = _recover_lambda(point, minority)
            assert lam is not None and -1e-12 <= lam <= 1.0 + 1e-12

    def test_count_arithmetic(self):
        rng = np.random.default_rng(2)
        minority = rng.normal(size=(10, 3))
        out = smote(minority, k=5, target_count=30, seed=3)
        assert out.shape == (30, 3)

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(3)
        minority = rng.normal(size=(8, 2))
        a = smote(minority, k=2, target_count=10, seed=11)
        b = smote(minority, k=2, target_count=10, seed=11)
        np.testing.assert_array_equal(a, b)
        c = smote(minority, k=2, target_count=10, seed=12)
        assert not np.array_equal(a, c)

    def test_too_few_samples_rejected(self):
        with pytest.raises(ValueError, match="more minority samples"):
            smote(np.zeros((5, 2)), k=5, target_count=1)

    def test_bad_k_rejected(self):
        with pytest.raises(ValueError, match="k must be"):
            smote(np.zeros((5, 2)), k=0, target_count=1)


class TestStratifiedSplit:
    def test_hundred_samples_split_80_10_10(self):
        labels = [0] * 50 + [1] * 50
        tags = stratified_split(labels, seed=0)
        assert tags.count("train") == 80
        assert tags.count("validation") == 10
        assert tags.count("test") == 10

    def test_deterministic(self):
        labels = [0] * 30 + [1] * 20
        assert stratified_split(labels, seed=5) == stratified_split(labels, seed=5)
        assert stratified_split(labels, seed=5) != stratified_split(labels, seed=6)

    def test_preserves_class_balance(self):
        labels = np.array([0] * 50 + [1] * 50)
        tags = np.array(stratified_split(labels, seed=1))
        for tag in ("train", "validation", "test"):
            share = labels[tags == tag].mean()
            count = (tags == tag).sum()
            assert abs(share * count - 0.5 * count) <= 1.0

    def test_partition_is_exact(self):
        labels = [0] * 37 + [1] * 23
        tags = stratified_split(labels, seed=2)
        assert len(tags) == 60
        assert all(t in ("train", "validation", "test") for t in tags)

    def test_too_small_rejected(self):
        with pytest.raises(ValueError, match="at least 10"):
            stratified_split([0, 1, 0], seed=0)

    def test_floor_rounding_remainder_to_train(self):
        labels = [0] * 19  # floor(1.9) = 1 each for val/test, 17 train
        tags = stratified_split(labels, seed=3)
        assert tags.count("validation") == 1
        assert tags.count("test") == 1
        assert tags.count("train") == 17


class TestSplitDataset:
    def test_tags_assigned(self):
        data = make_dataset(20, 30)
        tagged = split(data, seed=4)
        assert len(tagged.subset("train")) == 40
        assert len(tagged.subset("validation")) == 5
        assert len(tagged.subset("test")) == 5

    def test_every_sample_in_exactly_one_split(self):
        data = make_dataset(15, 15)
        tagged = split(data, seed=5)
        total = sum(len(tagged.subset(t)) for t in ("train", "validation", "test"))
        assert total == len(tagged)


class TestAugmentTrainingSplit:
    def test_balances_minority(self):
        data = split(make_dataset(13, 50), seed=6)
        train = data.subset("train")
        before = train.labels()
        augmented = augment_training_split(data, seed=6)
        after = augmented.subset("train").labels()
        assert (after == 0).sum() == (after == 1).sum()
        # only the training split grew
        assert len(augmented.subset("validation")) == len(data.subset("validation"))
        assert len(augmented.subset("test")) == len(data.subset("test"))
        assert (after == 1).sum() > (before == 1).sum()

    def test_balanced_left_unchanged(self):
        data = split(make_dataset(25, 25), seed=7)
        augmented = augment_training_split(data, seed=7)
        assert len(augmented) == len(data)

    def test_synthetic_series_have_training_tag_and_minority_label(self):
        data = split(make_dataset(13, 50), seed=8)
        augmented = augment_training_split(data, seed=8)
        synthetic = [s for s in augmented if s.series_id.startswith("smote_")]
        assert synthetic
        assert all(s.split == "train" and s.label == 1 for s in synthetic)


def _recover_lambda(point, minority, atol=1e-9):
    """Find parents a, b with point = a + lam (b - a); return lam."""
    for i in range(len(minority)):
        a = minority[i]
        for j in range(len(minority)):
            if i == j:
                continue
            direction = minority[j] - a
            offset = point - a
            denom = float(direction @ direction)
            if denom == 0.0:
                continue
            lam = float(offset @ direction) / denom
            if np.allclose(offset, lam * direction, atol=atol):
                return lam
    return None
