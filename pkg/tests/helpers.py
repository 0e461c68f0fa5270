"""Shared oracles for the test suite.

Everything here is intentionally independent of the library code paths it
checks: finite differences, high-precision series evaluation, and plain
exhaustive loops.
"""

import numpy as np
import scipy.linalg


def rel_err(got, ref):
    """Frobenius-relative error, safe when the reference is zero."""
    got = np.asarray(got, dtype=float)
    ref = np.asarray(ref, dtype=float)
    denom = np.linalg.norm(ref)
    diff = np.linalg.norm(got - ref)
    if denom == 0.0:
        return diff
    return diff / denom


def expm_highprec(a, dps=40):
    """Matrix exponential via mpmath at ``dps`` decimal digits."""
    import mpmath as mp

    with mp.workdps(dps):
        e = mp.expm(mp.matrix(np.asarray(a).tolist()))
        return np.array([[float(e[i, j]) for j in range(e.cols)] for i in range(e.rows)])


def fd_dexp(a, x, h=1e-5):
    """Central finite difference of the exponential along ``x``."""
    return (scipy.linalg.expm(a + h * x) - scipy.linalg.expm(a - h * x)) / (2 * h)


def fd_grad(f, arr, h=1e-5):
    """Entrywise central finite-difference gradient of a scalar function."""
    arr = np.asarray(arr, dtype=float)
    grad = np.zeros_like(arr)
    it = np.nditer(arr, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        plus = arr.copy()
        plus[idx] += h
        minus = arr.copy()
        minus[idx] -= h
        grad[idx] = (f(plus) - f(minus)) / (2 * h)
    return grad


def random_norm_bounded(rng, shape, max_norm):
    """Gaussian draw rescaled to a uniformly random Frobenius norm."""
    a = rng.normal(size=shape)
    return a * (rng.uniform(0.1, 1.0) * max_norm / np.linalg.norm(a))


def brute_force_threshold(probs, labels):
    """Exhaustive reference for NPV-constrained threshold selection.

    Tries every candidate (sorted unique probabilities plus 0 and 1);
    keeps those with zero false negatives; returns the one maximizing
    specificity (0 when no true-negative labels exist), ties broken by
    the smaller threshold.  Returns (threshold, specificity).
    """
    probs = list(map(float, probs))
    labels = list(map(int, labels))
    candidates = sorted(set(probs) | {0.0, 1.0})
    best = None
    for tau in candidates:
        tn = fn = fp = tp = 0
        for p, y in zip(probs, labels):
            predicted_negative = p < tau
            if predicted_negative and y == 0:
                tn += 1
            elif predicted_negative and y == 1:
                fn += 1
            elif not predicted_negative and y == 0:
                fp += 1
            else:
                tp += 1
        if fn != 0:
            continue
        spec = tn / (tn + fp) if (tn + fp) > 0 else 0.0
        if best is None or spec > best[1]:
            best = (tau, spec)
    return best
