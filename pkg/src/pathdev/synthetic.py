"""Synthetic planar-arc benchmark.

Two classes of 2-D paths trace circular arcs of the same radius and
sweep distribution but opposite orientation (counter-clockwise is the
positive class).  Start angle, radius, and sweep are randomized, so the
chord between endpoints carries no class signal; orientation only shows
up in the order increments are traversed.  Each path is additionally
resampled at a random non-uniform speed, which leaves the development
endpoint invariant, and jittered with Gaussian noise.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset, Sample


def make_arc(rng, label=None, steps=30, noise=0.02):
    """One arc path of shape (steps+1, 2) and its orientation label."""
    if label is None:
        label = int(rng.integers(0, 2))
    orientation = 1.0 if label == 1 else -1.0
    radius = rng.uniform(0.7, 1.3)
    start_angle = rng.uniform(0.0, 2.0 * np.pi)
    sweep = rng.uniform(0.6 * np.pi, 1.4 * np.pi)
    # random speed profile: nondecreasing positions built from positive gaps
    gaps = rng.uniform(0.2, 1.8, size=steps)
    positions = np.concatenate([[0.0], np.cumsum(gaps)])
    positions /= positions[-1]
    angles = start_angle + orientation * sweep * positions
    path = radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    path += rng.normal(0.0, noise, size=path.shape)
    return path, label


def make_arc_dataset(n_samples, steps=30, noise=0.02, seed=0) -> Dataset:
    """An exactly class-balanced arc dataset with ``n_samples`` series."""
    rng = np.random.default_rng(seed)
    labels = rng.permutation([0] * (n_samples // 2) + [1] * (n_samples - n_samples // 2))
    samples = []
    for i, label in enumerate(labels):
        path, _ = make_arc(rng, label=int(label), steps=steps, noise=noise)
        samples.append(Sample(series_id=f"arc_{i:05d}", series=path, label=int(label)))
    return Dataset(tuple(samples))
