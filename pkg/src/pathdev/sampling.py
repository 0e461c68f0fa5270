"""Minority oversampling and stratified dataset splitting."""

from __future__ import annotations

import numpy as np

from .dataset import Dataset, Sample
from .validation import check_finite


def smote(minority, k=5, target_count=1, seed=0):
    """Synthesize minority samples by segment interpolation.

    Each synthetic point is a + lambda * (b - a) for a uniformly chosen
    minority vector ``a``, ``b`` one of its ``k`` Euclidean nearest
    minority neighbors, and lambda ~ Uniform(0, 1).  Deterministic per
    seed.

    Parameters
    ----------
    minority : array, shape (n, f)
        Flattened minority-class vectors; requires n > k.
    k : int
        Neighborhood size, >= 1.
    target_count : int
        Number of synthetic vectors to generate.
    seed : int

    Returns
    -------
    array, shape (target_count, f)
    """
    minority = np.asarray(minority, dtype=np.float64)
    if minority.ndim != 2:
        raise ValueError(f"minority must be 2-D, got shape {minority.shape}")
    check_finite(minority, "minority")
    n = minority.shape[0]
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n <= k:
        raise ValueError(f"need more minority samples ({n}) than neighbors k={k}")
    if target_count < 0:
        raise ValueError(f"target_count must be >= 0, got {target_count}")

    # stable argsort keeps neighbor choice deterministic under ties
    sq = np.einsum("ij,ij->i", minority, minority)
    dists = sq[:, None] + sq[None, :] - 2.0 * (minority @ minority.T)
    np.fill_diagonal(dists, np.inf)
    neighbors = np.argsort(dists, axis=1, kind="stable")[:, :k]

    rng = np.random.default_rng(seed)
    out = np.empty((target_count, minority.shape[1]))
    for i in range(target_count):
        a_idx = int(rng.integers(0, n))
        b_idx = int(neighbors[a_idx, int(rng.integers(0, k))])
        lam = rng.uniform(0.0, 1.0)
        a = minority[a_idx]
        out[i] = a + lam * (minority[b_idx] - a)
    return out


def stratified_split(labels, seed=0):
    """Assign 80/10/10 split tags, stratified by label.

    Per class: floor(0.1 n) to validation, floor(0.1 n) to test, the
    remainder to train.  Deterministic per seed.
    """
    labels = np.asarray(labels, dtype=int)
    n = len(labels)
    if n < 10:
        raise ValueError(f"need at least 10 samples to split, got {n}")
    rng = np.random.default_rng(seed)
    tags = np.empty(n, dtype=object)
    for cls in sorted(set(labels.tolist())):
        idx = np.flatnonzero(labels == cls)
        perm = rng.permutation(idx)
        n_val = len(idx) // 10
        n_test = len(idx) // 10
        tags[perm[:n_val]] = "validation"
        tags[perm[n_val : n_val + n_test]] = "test"
        tags[perm[n_val + n_test :]] = "train"
        if len(idx) >= 10 and (n_val == 0 or n_test == 0 or len(idx) - n_val - n_test == 0):
            raise ValueError(f"class {cls} with {len(idx)} samples left a split empty")
    return tags.tolist()


def split(dataset: Dataset, seed=0) -> Dataset:
    """Return a copy of the dataset with split tags assigned."""
    return dataset.with_splits(stratified_split(dataset.labels(), seed=seed))


def augment_training_split(dataset: Dataset, k=5, seed=0) -> Dataset:
    """Balance the training split by oversampling its minority class.

    Synthetic series interpolate flattened training series of the
    minority label up to the majority count; other splits are untouched.
    Requires equal-length training series.  A training split with fewer
    than two minority samples is returned unchanged (nothing to
    interpolate); otherwise k shrinks to the largest feasible value.
    """
    train = [s for s in dataset if s.split == "train"]
    if not train:
        raise ValueError("dataset has no training split")
    labels = np.array([s.label for s in train])
    counts = {cls: int((labels == cls).sum()) for cls in (0, 1)}
    minority_label = 0 if counts[0] < counts[1] else 1
    deficit = counts[1 - minority_label] - counts[minority_label]
    if deficit <= 0:
        return dataset
    minority = [s for s in train if s.label == minority_label]
    if len(minority) < 2:
        return dataset
    shapes = {s.series.shape for s in minority}
    if len(shapes) != 1:
        raise ValueError("oversampling requires equal-length minority series")
    shape = shapes.pop()
    flat = np.stack([s.series.ravel() for s in minority])
    k_eff = min(k, len(minority) - 1)
    synthetic = smote(flat, k=k_eff, target_count=deficit, seed=seed)
    extra = tuple(
        Sample(
            series_id=f"smote_{i:05d}",
            series=vec.reshape(shape),
            label=minority_label,
            split="train",
        )
        for i, vec in enumerate(synthetic)
    )
    return Dataset(dataset.samples + extra)
