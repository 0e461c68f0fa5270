"""Dense square-matrix kernels.

Products, the Hilbert-Schmidt inner product, the matrix exponential, and
the directional derivative of the exponential map.  Every kernel accepts
stacks of matrices with shape (..., m, m); leading dimensions broadcast.
All arithmetic is float64: the gradient checks downstream are infeasible
in single precision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .validation import check_finite, check_same_order, check_square

# Largest factorial below float64 overflow is 170!.
_MAX_TERMS_LIMIT = 170


class AccuracyWarning(UserWarning):
    """A truncated series stopped before its term norm reached tolerance."""


@dataclass(frozen=True)
class DexpConfig:
    """Truncation control for the exponential-derivative series.

    Parameters
    ----------
    max_terms : int
        Number of series terms summed before giving up.
    tolerance : float
        Early-stop threshold on the Frobenius norm of the running term.
    """

    max_terms: int = 30
    tolerance: float = 1e-15

    def __post_init__(self):
        if not 1 <= self.max_terms <= _MAX_TERMS_LIMIT:
            raise ValueError(
                f"max_terms must be in [1, {_MAX_TERMS_LIMIT}], got {self.max_terms}"
            )
        if self.tolerance < 0:
            raise ValueError(f"tolerance must be >= 0, got {self.tolerance}")


def mat_mul(a, b):
    """Matrix product of two stacks of equal-order square matrices."""
    a = check_square(a, "a")
    b = check_square(b, "b")
    check_same_order(a, b)
    return a @ b


def hs_inner(a, b):
    """Hilbert-Schmidt inner product tr(a^T b)."""
    a = check_square(a, "a")
    b = check_square(b, "b")
    check_same_order(a, b)
    return np.einsum("...ij,...ij->...", a, b)


def frob_norm(a):
    """Frobenius norm over the trailing two axes."""
    a = np.asarray(a, dtype=np.float64)
    return np.sqrt(np.einsum("...ij,...ij->...", a, a))


def matrix_exp(a):
    """Matrix exponential by scaling-and-squaring with a Taylor core.

    The argument is scaled by a power of two until its Frobenius norm is
    at most 1/2, the series sum(B^k / k!) is accumulated until the term
    norm falls below working precision, and the result is squared back.
    Relative accuracy is ~1e-14 for norms up to ~10.

    Parameters
    ----------
    a : array, shape (..., m, m)
        Stack of square matrices with finite entries.

    Returns
    -------
    array, shape (..., m, m)
    """
    a = check_square(a, "a")
    check_finite(a, "a")
    m = a.shape[-1]
    if a.size == 0:
        return a.copy()

    max_norm = float(np.max(frob_norm(a)))
    squarings = max(0, math.ceil(math.log2(max_norm / 0.5))) if max_norm > 0.5 else 0
    b = a / (2.0**squarings)

    eye = np.broadcast_to(np.eye(m), a.shape).copy()
    term = eye.copy()
    out = eye
    for k in range(1, 24):
        term = term @ b / k
        out = out + term
        if float(np.max(frob_norm(term))) <= 1e-17 * max(1.0, float(np.max(frob_norm(out)))):
            break
    for _ in range(squarings):
        out = out @ out
    return out


def dexp(a, x, cfg: DexpConfig | None = None):
    """Directional derivative of the matrix exponential at ``a`` along ``x``.

    Evaluates the series sum_k (-ad_a)^k (exp(a) x) / (k+1)!, where
    ad_a(y) = a y - y a, truncated per ``cfg``.  This equals
    lim_{h->0} (exp(a + h x) - exp(a)) / h.

    Parameters
    ----------
    a : array, shape (..., m, m)
        Point of evaluation.
    x : array, shape (..., m, m)
        Direction.
    cfg : DexpConfig, optional
        Truncation control; defaults to ``DexpConfig()``.

    Returns
    -------
    array, shape (..., m, m)

    Warns
    -----
    AccuracyWarning
        If the last summed term still exceeds ``cfg.tolerance``.
    """
    a = check_square(a, "a")
    x = check_square(x, "x")
    check_same_order(a, x)
    check_finite(a, "a")
    check_finite(x, "x")
    return _dexp_series(a, x, matrix_exp(a), cfg)


def _dexp_series(a, x, exp_a, cfg):
    """Series core of :func:`dexp`; ``exp_a`` must equal matrix_exp(a)."""
    if cfg is None:
        cfg = DexpConfig()
    term = exp_a @ x
    out = term.copy()
    last_norm = float(np.max(frob_norm(term)))
    for k in range(1, cfg.max_terms):
        # (-ad_a) applied to the running term:  t a - a t.
        term = term @ a - a @ term
        contrib = term / math.factorial(k + 1)
        out += contrib
        last_norm = float(np.max(frob_norm(contrib)))
        if last_norm <= cfg.tolerance:
            return out
    if last_norm > cfg.tolerance:
        warnings.warn(
            f"dexp series not converged after {cfg.max_terms} terms; "
            f"last term norm {last_norm:.3e} exceeds tolerance {cfg.tolerance:.3e}",
            AccuracyWarning,
            stacklevel=3,
        )
    return out


def grad_through_exp(a, grad_f_at_exp_a, cfg: DexpConfig | None = None):
    """Hilbert-Schmidt gradient of f(exp(.)) at ``a``.

    Given the gradient of f evaluated at exp(a), returns the gradient of
    the composition, which is the exponential derivative evaluated at the
    transpose point: dexp(a^T, grad).

    Parameters
    ----------
    a : array, shape (..., m, m)
    grad_f_at_exp_a : array, shape (..., m, m)
    cfg : DexpConfig, optional

    Returns
    -------
    array, shape (..., m, m)
    """
    a = check_square(a, "a")
    return dexp(np.swapaxes(a, -1, -2), grad_f_at_exp_a, cfg)
