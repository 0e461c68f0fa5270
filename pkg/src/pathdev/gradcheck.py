"""Numerical validation of the backward pass against finite differences."""

from __future__ import annotations

import numpy as np

from .development import backward, forward
from .linalg import hs_inner, matrix_exp


def _endpoint_from_raw_theta(theta, x):
    """Development endpoint for raw generators, no algebra validation."""
    m = theta.shape[-1]
    z = np.eye(m)
    for n in range(1, x.shape[0]):
        emb = np.einsum("j,jpq->pq", x[n] - x[n - 1], theta)
        z = z @ matrix_exp(emb)
    return z


def finite_difference_gradient(theta, x, c, h=1e-5):
    """Entrywise central differences of hs_inner(c, z_N) over theta."""
    grad = np.zeros_like(theta)
    it = np.nditer(theta, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        plus = theta.copy()
        plus[idx] += h
        minus = theta.copy()
        minus[idx] -= h
        grad[idx] = (
            float(hs_inner(c, _endpoint_from_raw_theta(plus, x)))
            - float(hs_inner(c, _endpoint_from_raw_theta(minus, x)))
        ) / (2 * h)
    return grad


def check_configuration(algebra, channels, order, steps, seed, corrupt=False):
    """Max relative error of the backward pass for one configuration.

    Draws generators, a random path, and a random endpoint loss
    gradient; compares the backward pass with central finite
    differences.  ``corrupt`` perturbs the computed gradient first (a
    negative control for the harness itself).
    """
    from .development import init_params

    rng = np.random.default_rng(seed)
    params = init_params(algebra, channels, order, scale=0.4, seed=seed)
    x = rng.normal(0.0, 0.5, size=(steps + 1, channels)).cumsum(axis=0)
    c = rng.normal(size=(order, order))
    out = forward(params, x, static_only=False)
    grad = backward(params, x, out, c)
    if corrupt:
        grad = grad.copy()
        grad[0, 0, 0] += 1e-2
    reference = finite_difference_gradient(params.theta, x, c)
    denom = max(float(np.linalg.norm(reference)), 1e-12)
    return float(np.linalg.norm(grad - reference)) / denom


def default_suite(channels=3, order=4, steps=10):
    """Seeded configurations covering the supported algebras up to the
    requested dimensions."""
    configs = []
    for algebra in ("so", "sl", "sp"):
        # the symplectic algebra needs an even order; round down
        base_order = order - order % 2 if algebra == "sp" else order
        configs.append((algebra, 1, 2, min(3, steps)))
        configs.append((algebra, min(2, channels), base_order, min(6, steps)))
        configs.append((algebra, channels, base_order, steps))
    # a degenerate constant path must give an exactly zero gradient
    configs.append(("so", 1, 2, 0))
    return configs


def run_suite(channels=3, order=4, steps=10, seed=7, corrupt=False, tol=1e-4):
    """Run the whole suite; returns (all_passed, rows of printable text)."""
    if channels > 4 or order > 5 or steps > 12:
        raise ValueError("gradient check dims are capped at d<=4, m<=5, N<=12")
    rows = []
    all_ok = True
    for i, (algebra, d, m, n) in enumerate(default_suite(channels, order, steps)):
        err = check_configuration(algebra, d, m, n, seed=seed + i, corrupt=corrupt)
        ok = err <= tol
        all_ok &= ok
        rows.append(
            f"{'PASS' if ok else 'FAIL'} algebra={algebra} d={d} m={m} N={n} "
            f"max_rel_err={err:.3e}"
        )
    return all_ok, rows
