"""The path development layer.

A d-channel series x = (x_0, ..., x_N) is mapped to a sequence of group
elements by embedding each increment into a matrix Lie algebra through
trainable generators theta = (theta_1, ..., theta_d) and chaining the
exponentials:

    z_0 = I,    z_n = z_{n-1} @ exp(sum_j theta_j * (x_n - x_{n-1})_j)

The backward pass returns the Hilbert-Schmidt gradient of a loss on the
emitted sequence with respect to theta.  Writing J_n for the embedded
increment and E_n = exp(J_n), the gradient accumulates right-to-left:

    a_N = G_N,          a_n = G_n + a_{n+1} @ E_{n+1}^T
    dL/dJ_n = dexp(J_n^T, z_{n-1}^T @ a_n)
    dL/dtheta_j = sum_n dL/dJ_n * (x_n - x_{n-1})_j

where G_n is the supplied gradient on z_n.  The recursion is validated
against central finite differences (see tests); that check is the
normative contract for this module.

Functions ending in ``_stack`` process a batch of equal-length series at
once and are the fast path used by training; the un-suffixed functions
are the single-series reference surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import check_kind, in_algebra, project
from .linalg import DexpConfig, _dexp_series, matrix_exp
from .validation import check_finite, check_series, check_vector

_MEMBERSHIP_TOL = 1e-10


@dataclass(frozen=True)
class DevParams:
    """Trainable generators constrained to a matrix Lie algebra.

    Attributes
    ----------
    algebra : str
        One of ``gl``, ``so``, ``sl``, ``sp``.
    theta : array, shape (d, m, m)
        One generator per input channel, each inside the algebra.
    """

    algebra: str
    theta: np.ndarray

    def __post_init__(self):
        check_kind(self.algebra)
        theta = np.asarray(self.theta, dtype=np.float64)
        if theta.ndim != 3 or theta.shape[-1] != theta.shape[-2]:
            raise ValueError(f"theta must have shape (d, m, m), got {theta.shape}")
        check_finite(theta, "theta")
        if not np.all(in_algebra(theta, self.algebra, _MEMBERSHIP_TOL)):
            raise ValueError(f"theta violates the {self.algebra} membership condition")
        object.__setattr__(self, "theta", theta)

    @property
    def channels(self) -> int:
        return self.theta.shape[0]

    @property
    def order(self) -> int:
        return self.theta.shape[-1]


@dataclass(frozen=True)
class DevOutput:
    """Forward-pass output: the group-element sequence or its endpoint.

    ``sequence`` is (N+1, m, m) with z_0 = I, or None when only the
    endpoint was materialized.  ``static`` is always z_N.
    """

    static: np.ndarray
    sequence: np.ndarray | None = field(default=None)

    @property
    def steps(self) -> int | None:
        return None if self.sequence is None else self.sequence.shape[0] - 1


def linear_embed(params: DevParams, v) -> np.ndarray:
    """Embed a d-vector into the algebra: sum_j theta_j * v_j."""
    v = check_vector(v, length=params.channels, name="v")
    return np.einsum("j,jpq->pq", v, params.theta)


def init_params(algebra, channels, order, scale=0.1, seed=0) -> DevParams:
    """Draw i.i.d. normal generators and project them onto the algebra.

    Deterministic per seed; entries have standard deviation ``scale``
    before projection.
    """
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    rng = np.random.default_rng(seed)
    raw = rng.normal(0.0, scale, size=(channels, order, order))
    return DevParams(algebra=algebra, theta=project(raw, algebra))


def _embed_increments(theta, x):
    """Increments of x embedded into the algebra, shape (..., N, m, m)."""
    inc = np.diff(x, axis=-2)
    return inc, np.einsum("...nj,jpq->...npq", inc, theta)


def forward(params: DevParams, x, static_only: bool = True) -> DevOutput:
    """Run the development recursion over one series.

    With ``static_only`` (the default for classification) only the
    endpoint z_N is materialized; pass False to keep the full sequence,
    which :func:`backward` requires.
    """
    x = check_series(x, "x")
    if x.shape[1] != params.channels:
        raise ValueError(
            f"series has {x.shape[1]} channels but params expect {params.channels}"
        )
    m = params.order
    _, j = _embed_increments(params.theta, x)
    exps = matrix_exp(j) if j.shape[0] else j.reshape(0, m, m)
    if static_only:
        z = np.eye(m)
        for e in exps:
            z = z @ e
        return DevOutput(static=z)
    seq = np.empty((x.shape[0], m, m))
    seq[0] = np.eye(m)
    for n, e in enumerate(exps, start=1):
        seq[n] = seq[n - 1] @ e
    return DevOutput(static=seq[-1], sequence=seq)


def forward_stack(params: DevParams, xs, static_only: bool = True):
    """Vectorized :func:`forward` over a batch of equal-length series.

    ``xs`` has shape (B, N+1, d); returns (B, m, m) endpoints or the full
    (B, N+1, m, m) sequence.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if xs.ndim != 3 or xs.shape[2] != params.channels:
        raise ValueError(
            f"xs must have shape (batch, n_points, {params.channels}), got {xs.shape}"
        )
    check_finite(xs, "xs")
    batch, n_points, _ = xs.shape
    m = params.order
    _, j = _embed_increments(params.theta, xs)
    exps = matrix_exp(j) if n_points > 1 else np.empty((batch, 0, m, m))
    if static_only:
        z = np.broadcast_to(np.eye(m), (batch, m, m)).copy()
        for n in range(n_points - 1):
            z = z @ exps[:, n]
        return z
    seq = np.empty((batch, n_points, m, m))
    seq[:, 0] = np.eye(m)
    for n in range(1, n_points):
        seq[:, n] = seq[:, n - 1] @ exps[:, n - 1]
    return seq


def backward(params: DevParams, x, z: DevOutput, grad_z, cfg: DexpConfig | None = None):
    """Gradient of a loss on the emitted sequence with respect to theta.

    Parameters
    ----------
    params, x
        The inputs that produced ``z``.
    z : DevOutput
        Forward output with the full sequence materialized.
    grad_z : array
        Either (m, m) — the gradient on the endpoint z_N alone — or
        (N+1, m, m) with one matrix per emitted step (the entry for the
        constant z_0 is ignored).
    cfg : DexpConfig, optional
        Series truncation for the exponential derivative.

    Returns
    -------
    array, shape (d, m, m)
        Raw (unprojected) gradient, one matrix per channel.
    """
    x = check_series(x, "x")
    if z.sequence is None:
        raise ValueError("backward needs a forward output with static_only=False")
    n_points = x.shape[0]
    m = params.order
    if z.sequence.shape != (n_points, m, m):
        raise ValueError(
            f"sequence shape {z.sequence.shape} does not match series of "
            f"{n_points} points and order {m}"
        )
    grad_z = np.asarray(grad_z, dtype=np.float64)
    if grad_z.shape == (m, m):
        full = np.zeros((n_points, m, m))
        full[-1] = grad_z
        grad_z = full
    elif grad_z.shape != (n_points, m, m):
        raise ValueError(
            f"grad_z must have shape ({m}, {m}) or ({n_points}, {m}, {m}), "
            f"got {grad_z.shape}"
        )
    grads = backward_stack(
        params, x[None], z.sequence[None], grad_z[None], cfg=cfg
    )
    return grads[0]


def backward_stack(params: DevParams, xs, sequences, grad_z, cfg: DexpConfig | None = None):
    """Vectorized :func:`backward` over a batch of equal-length series.

    ``xs`` is (B, N+1, d), ``sequences`` (B, N+1, m, m), ``grad_z``
    (B, N+1, m, m) or (B, m, m) for endpoint-only losses.  Returns
    per-sample gradients of shape (B, d, m, m).
    """
    xs = np.asarray(xs, dtype=np.float64)
    sequences = np.asarray(sequences, dtype=np.float64)
    grad_z = np.asarray(grad_z, dtype=np.float64)
    batch, n_points, d = xs.shape
    m = params.order
    static_loss = grad_z.ndim == 3
    if static_loss and grad_z.shape != (batch, m, m):
        raise ValueError(f"endpoint grad_z must have shape ({batch}, {m}, {m})")
    if not static_loss and grad_z.shape != (batch, n_points, m, m):
        raise ValueError(
            f"grad_z must have shape ({batch}, {n_points}, {m}, {m}), got {grad_z.shape}"
        )

    inc, j = _embed_increments(params.theta, xs)
    omega = np.zeros((batch, d, m, m))
    acc = np.zeros((batch, m, m))
    exp_next = None
    for n in range(n_points - 1, 0, -1):
        j_n = j[:, n - 1]
        exp_n = matrix_exp(j_n)
        if exp_next is not None:
            acc = acc @ np.swapaxes(exp_next, -1, -2)
        if static_loss:
            if n == n_points - 1:
                acc = acc + grad_z
        else:
            acc = acc + grad_z[:, n]
        j_t = np.swapaxes(j_n, -1, -2)
        direction = np.swapaxes(sequences[:, n - 1], -1, -2) @ acc
        dj = _dexp_series(j_t, direction, np.swapaxes(exp_n, -1, -2), cfg)
        omega += dj[:, None] * inc[:, n - 1][:, :, None, None]
        exp_next = exp_n
    return omega


def apply_update(params: DevParams, step) -> DevParams:
    """Subtract ``step`` from theta and project back onto the algebra."""
    step = np.asarray(step, dtype=np.float64)
    if step.shape != params.theta.shape:
        raise ValueError(
            f"step shape {step.shape} does not match theta {params.theta.shape}"
        )
    return DevParams(
        algebra=params.algebra,
        theta=project(params.theta - step, params.algebra),
    )
