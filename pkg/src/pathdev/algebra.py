"""Matrix Lie algebra membership, projections, brackets, and group checks.

Supported real algebras, keyed by the tags used throughout the package
and on the command line:

    gl  all real m x m matrices
    so  skew-symmetric matrices          (group: orthogonal, det 1)
    sl  traceless matrices               (group: det 1)
    sp  a^T J + J a = 0, even order      (group: z^T J z = J)

J is fixed to the block form [[0, I], [-I, 0]].
"""

from __future__ import annotations

import numpy as np

from .linalg import frob_norm
from .validation import check_same_order, check_square

ALGEBRA_KINDS = ("gl", "so", "sl", "sp")


def check_kind(kind):
    if kind not in ALGEBRA_KINDS:
        raise ValueError(f"unknown algebra kind {kind!r}; expected one of {ALGEBRA_KINDS}")
    return kind


def symplectic_form(order: int) -> np.ndarray:
    """The 2m x 2m block matrix [[0, I], [-I, 0]]."""
    if order < 2 or order % 2 != 0:
        raise ValueError(f"symplectic order must be even and >= 2, got {order}")
    half = order // 2
    j = np.zeros((order, order))
    j[:half, half:] = np.eye(half)
    j[half:, :half] = -np.eye(half)
    return j


def bracket(x, y):
    """Matrix commutator [x, y] = xy - yx."""
    x = check_square(x, "x")
    y = check_square(y, "y")
    check_same_order(x, y)
    return x @ y - y @ x


def project(a, kind):
    """Hilbert-Schmidt orthogonal projection onto the algebra ``kind``.

    so: skew part (a - a^T)/2.  sl: remove the trace component.
    sp: (a + J a^T J)/2.  gl: identity map.  Idempotent, and the output
    satisfies :func:`in_algebra` to working precision.
    """
    a = check_square(a, "a")
    check_kind(kind)
    if kind == "gl":
        return a.copy()
    if kind == "so":
        return (a - np.swapaxes(a, -1, -2)) / 2.0
    if kind == "sl":
        m = a.shape[-1]
        trace = np.einsum("...ii->...", a) / m
        return a - trace[..., None, None] * np.eye(m)
    j = symplectic_form(a.shape[-1])
    return (a + j @ np.swapaxes(a, -1, -2) @ j) / 2.0


def in_algebra(a, kind, tol=1e-10):
    """Whether the defining algebra condition holds within ``tol``.

    Returns a bool for a single matrix, a boolean array for a stack.
    """
    a = check_square(a, "a")
    check_kind(kind)
    if kind == "gl":
        residual = np.zeros(a.shape[:-2])
    elif kind == "so":
        residual = frob_norm(a + np.swapaxes(a, -1, -2))
    elif kind == "sl":
        residual = np.abs(np.einsum("...ii->...", a))
    else:
        j = symplectic_form(a.shape[-1])
        residual = frob_norm(np.swapaxes(a, -1, -2) @ j + j @ a)
    ok = residual <= tol
    return bool(ok) if ok.ndim == 0 else ok


def group_check(z, kind, tol=1e-8):
    """Whether the group condition holds within ``tol``.

    so: z^T z = I and det(z) = 1.  sl: det(z) = 1.  sp: z^T J z = J.
    gl: |det(z)| > tol (invertibility).
    """
    z = check_square(z, "z")
    check_kind(kind)
    zt = np.swapaxes(z, -1, -2)
    eye = np.eye(z.shape[-1])
    if kind == "gl":
        ok = np.abs(np.linalg.det(z)) > tol
    elif kind == "so":
        ok = (frob_norm(zt @ z - eye) <= tol) & (np.abs(np.linalg.det(z) - 1.0) <= tol)
    elif kind == "sl":
        ok = np.abs(np.linalg.det(z) - 1.0) <= tol
    else:
        j = symplectic_form(z.shape[-1])
        ok = frob_norm(zt @ j @ z - j) <= tol
    ok = np.asarray(ok)
    return bool(ok) if ok.ndim == 0 else ok
