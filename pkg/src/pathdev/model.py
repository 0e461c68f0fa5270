"""Classification head, loss, optimizer, and the training loop.

The endpoint of the development layer is flattened row-major, passed
through one ReLU hidden layer and a two-way softmax.  Head weights and
the algebra generators are trained jointly with Adam; after every step
the generators are projected back onto their algebra.  Each epoch ends
with a validation pass that picks the NPV-constrained decision threshold,
and the result of training is the epoch snapshot with the highest
validation specificity among epochs whose threshold kept NPV at 1 while
predicting at least one negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .development import DevParams, apply_update, backward_stack, forward_stack, init_params
from .metrics import EvalReport, select_threshold
from .validation import check_finite

_PROB_EPS = 1e-12
_INIT_SCALE = 0.2


class TrainingDivergedError(RuntimeError):
    """The training loss became non-finite."""


@dataclass(frozen=True)
class DenseHead:
    """One hidden ReLU layer over the flattened endpoint, two-way softmax."""

    w1: np.ndarray  # (hidden_width, m*m)
    b1: np.ndarray  # (hidden_width,)
    w2: np.ndarray  # (2, hidden_width)
    b2: np.ndarray  # (2,)

    def __post_init__(self):
        w1 = np.asarray(self.w1, dtype=np.float64)
        b1 = np.asarray(self.b1, dtype=np.float64)
        w2 = np.asarray(self.w2, dtype=np.float64)
        b2 = np.asarray(self.b2, dtype=np.float64)
        if w1.ndim != 2 or b1.shape != (w1.shape[0],):
            raise ValueError("w1/b1 shapes are inconsistent")
        if w2.shape != (2, w1.shape[0]) or b2.shape != (2,):
            raise ValueError("w2/b2 must map the hidden layer to 2 outputs")
        for name, arr in (("w1", w1), ("b1", b1), ("w2", w2), ("b2", b2)):
            check_finite(arr, name)
            object.__setattr__(self, name, arr)

    @property
    def hidden_width(self) -> int:
        return self.w1.shape[0]

    @property
    def input_order(self) -> int:
        return int(round(math.sqrt(self.w1.shape[1])))


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 0.001
    epochs: int = 100
    batch_size: int = 32
    l2_weight: float = 0.0
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if self.l2_weight < 0:
            raise ValueError(f"l2_weight must be >= 0, got {self.l2_weight}")
        if not (0 < self.adam_beta1 < 1 and 0 < self.adam_beta2 < 1):
            raise ValueError("adam betas must lie strictly inside (0, 1)")
        if self.adam_eps <= 0:
            raise ValueError("adam_eps must be positive")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: float
    val_specificity: float
    threshold: float


@dataclass(frozen=True)
class TrainResult:
    params: DevParams
    head: DenseHead
    threshold: float
    report: EvalReport
    trace: tuple
    best_epoch: int


def init_head(order, hidden_width, seed=0) -> DenseHead:
    """He-scaled weights, zero biases; deterministic per seed."""
    if hidden_width < 1:
        raise ValueError(f"hidden_width must be >= 1, got {hidden_width}")
    rng = np.random.default_rng(seed)
    n_in = order * order
    return DenseHead(
        w1=rng.normal(0.0, math.sqrt(2.0 / n_in), size=(hidden_width, n_in)),
        b1=np.zeros(hidden_width),
        w2=rng.normal(0.0, math.sqrt(2.0 / hidden_width), size=(2, hidden_width)),
        b2=np.zeros(2),
    )


def softmax(logits):
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def head_forward(head: DenseHead, z):
    """Class probabilities for one endpoint (m, m) or a stack (B, m, m)."""
    z = np.asarray(z, dtype=np.float64)
    single = z.ndim == 2
    flat = z.reshape(1, -1) if single else z.reshape(z.shape[0], -1)
    if flat.shape[1] != head.w1.shape[1]:
        raise ValueError(
            f"endpoint has {flat.shape[1]} entries but the head expects {head.w1.shape[1]}"
        )
    hidden = np.maximum(flat @ head.w1.T + head.b1, 0.0)
    probs = softmax(hidden @ head.w2.T + head.b2)
    return probs[0] if single else probs


def loss(pred, label, params_norms=0.0, l2_weight=0.0):
    """Binary cross-entropy on the class-1 probability plus L2 penalty.

    Probabilities at exactly 0 or 1 are clamped to [1e-12, 1 - 1e-12]
    before the logarithm.
    """
    if label not in (0, 1):
        raise ValueError(f"label must be 0 or 1, got {label}")
    y_hat = float(np.asarray(pred, dtype=np.float64).reshape(-1)[1])
    y_hat = min(max(y_hat, _PROB_EPS), 1.0 - _PROB_EPS)
    ce = -(label * math.log(y_hat) + (1 - label) * math.log(1.0 - y_hat))
    return ce + l2_weight * params_norms


def squared_param_norm(params: DevParams, head: DenseHead) -> float:
    """Sum of squared Frobenius norms of every trainable array."""
    total = float(np.sum(params.theta**2))
    for arr in (head.w1, head.b1, head.w2, head.b2):
        total += float(np.sum(arr**2))
    return total


class Adam:
    """Adam over a fixed list of parameter arrays; returns update steps."""

    def __init__(self, shapes, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros(s) for s in shapes]
        self.v = [np.zeros(s) for s in shapes]

    def step(self, grads):
        """Bias-corrected updates to subtract from the parameters."""
        self.t += 1
        updates = []
        for i, g in enumerate(grads):
            self.m[i] = self.beta1 * self.m[i] + (1 - self.beta1) * g
            self.v[i] = self.beta2 * self.v[i] + (1 - self.beta2) * g * g
            m_hat = self.m[i] / (1 - self.beta1**self.t)
            v_hat = self.v[i] / (1 - self.beta2**self.t)
            updates.append(self.lr * m_hat / (np.sqrt(v_hat) + self.eps))
        return updates


def _group_by_length(samples, indices):
    groups = {}
    for i in indices:
        groups.setdefault(samples[i].series.shape[0], []).append(i)
    return sorted(groups.items())


def predict_proba_samples(params: DevParams, head: DenseHead, samples):
    """Class probabilities for a list of samples, in input order."""
    probs = np.empty((len(samples), 2))
    for _, idxs in _group_by_length(samples, range(len(samples))):
        xs = np.stack([samples[i].series for i in idxs])
        z = forward_stack(params, xs)
        probs[idxs] = head_forward(head, z)
    return probs


def _batch_pass(params, head, samples, indices, l2_weight):
    """Mean loss and gradients over one mini-batch.

    Returns (loss, grads) with grads ordered [theta, w1, b1, w2, b2];
    summation order is fixed by the sorted length grouping, so repeated
    runs reduce identically.
    """
    m = params.order
    batch = len(indices)
    g_theta = np.zeros_like(params.theta)
    g_w1 = np.zeros_like(head.w1)
    g_b1 = np.zeros_like(head.b1)
    g_w2 = np.zeros_like(head.w2)
    g_b2 = np.zeros_like(head.b2)
    ce_sum = 0.0
    for _, idxs in _group_by_length(samples, indices):
        xs = np.stack([samples[i].series for i in idxs])
        ys = np.array([samples[i].label for i in idxs])
        seqs = forward_stack(params, xs, static_only=False)
        flat = seqs[:, -1].reshape(len(idxs), m * m)
        hidden_pre = flat @ head.w1.T + head.b1
        hidden = np.maximum(hidden_pre, 0.0)
        probs = softmax(hidden @ head.w2.T + head.b2)

        p1 = np.clip(probs[:, 1], _PROB_EPS, 1.0 - _PROB_EPS)
        ce_sum += float(-np.sum(ys * np.log(p1) + (1 - ys) * np.log(1.0 - p1)))

        dlogits = probs.copy()
        dlogits[np.arange(len(idxs)), ys] -= 1.0
        g_w2 += dlogits.T @ hidden
        g_b2 += dlogits.sum(axis=0)
        dpre = (dlogits @ head.w2) * (hidden_pre > 0)
        g_w1 += dpre.T @ flat
        g_b1 += dpre.sum(axis=0)
        grad_z = (dpre @ head.w1).reshape(len(idxs), m, m)
        g_theta += backward_stack(params, xs, seqs, grad_z).sum(axis=0)

    total = ce_sum / batch + l2_weight * squared_param_norm(params, head)
    grads = [
        g_theta / batch + 2.0 * l2_weight * params.theta,
        g_w1 / batch + 2.0 * l2_weight * head.w1,
        g_b1 / batch + 2.0 * l2_weight * head.b1,
        g_w2 / batch + 2.0 * l2_weight * head.w2,
        g_b2 / batch + 2.0 * l2_weight * head.b2,
    ]
    return total, grads


def train(data: Dataset, algebra: str, order: int, cfg: TrainConfig, hidden_width=16) -> TrainResult:
    """Mini-batch Adam over the generators and headweights.

    The reported train loss is the sample-weighted mean of batch losses
    (cross-entropy plus the L2 term at the weights current for that
    batch); validation loss is plain mean cross-entropy.  Deterministic
    for a fixed config and dataset.
    """
    train_samples = list(data.subset("train"))
    val_samples = list(data.subset("validation"))
    if not train_samples or not val_samples:
        raise ValueError("training requires nonempty train and validation splits")
    d = data.channels
    val_labels = np.array([s.label for s in val_samples])

    params = init_params(algebra, d, order, scale=_INIT_SCALE, seed=cfg.seed)
    head = init_head(order, hidden_width, seed=cfg.seed + 1)
    shuffler = np.random.default_rng(cfg.seed + 2)
    adam = Adam(
        [params.theta.shape, head.w1.shape, head.b1.shape, head.w2.shape, head.b2.shape],
        lr=cfg.lr,
        beta1=cfg.adam_beta1,
        beta2=cfg.adam_beta2,
        eps=cfg.adam_eps,
    )

    trace = []
    best = None  # (specificity, epoch, params, head, threshold, report)
    n = len(train_samples)
    for epoch in range(1, cfg.epochs + 1):
        order_perm = shuffler.permutation(n)
        loss_sum = 0.0
        for start in range(0, n, cfg.batch_size):
            batch_idx = order_perm[start : start + cfg.batch_size]
            batch_loss, grads = _batch_pass(
                params, head, train_samples, batch_idx, cfg.l2_weight
            )
            if not math.isfinite(batch_loss):
                raise TrainingDivergedError(
                    f"non-finite training loss at epoch {epoch}"
                )
            updates = adam.step(grads)
            params = apply_update(params, updates[0])
            head = DenseHead(
                w1=head.w1 - updates[1],
                b1=head.b1 - updates[2],
                w2=head.w2 - updates[3],
                b2=head.b2 - updates[4],
            )
            loss_sum += batch_loss * len(batch_idx)
        train_loss = loss_sum / n

        val_probs = predict_proba_samples(params, head, val_samples)
        p1 = np.clip(val_probs[:, 1], _PROB_EPS, 1.0 - _PROB_EPS)
        val_loss = float(
            -np.mean(val_labels * np.log(p1) + (1 - val_labels) * np.log(1.0 - p1))
        )
        tau, report = select_threshold(val_probs[:, 1], val_labels)
        spec_score = report.specificity if report.specificity is not None else 0.0
        trace.append(
            EpochRecord(
                epoch=epoch,
                train_loss=train_loss,
                val_loss=val_loss,
                val_specificity=spec_score,
                threshold=tau,
            )
        )
        eligible = report.counts.fn == 0 and report.counts.tn >= 1
        # ties go to the later (more converged) epoch
        if eligible and (best is None or spec_score >= best[0]):
            best = (spec_score, epoch, params, head, tau, report)

    if best is None:
        # no epoch produced an NPV-1 threshold with a predicted negative;
        # fall back to the final state
        last = trace[-1]
        tau, report = select_threshold(
            predict_proba_samples(params, head, val_samples)[:, 1], val_labels
        )
        best = (last.val_specificity, last.epoch, params, head, tau, report)

    _, best_epoch, best_params, best_head, best_tau, best_report = best
    return TrainResult(
        params=best_params,
        head=best_head,
        threshold=best_tau,
        report=best_report,
        trace=tuple(trace),
        best_epoch=best_epoch,
    )


def trace_lines(trace):
    """Line-oriented trace records, stable across reruns."""
    lines = ["epoch,train_loss,val_loss,val_specificity,threshold"]
    for rec in trace:
        lines.append(
            f"{rec.epoch},{rec.train_loss!r},{rec.val_loss!r},"
            f"{rec.val_specificity!r},{rec.threshold!r}"
        )
    return lines
