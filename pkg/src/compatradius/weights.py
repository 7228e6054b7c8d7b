"""Nearest feasible POVM weights for fixed directions.

Solves, for each batch member,

    min ||w - target||^2   s.t.   w >= 0,  sum(w) = 1,  sum_i w_i v_i = 0

through its dual. For multipliers ``lam`` the primal minimizer is
``w = max(0, target + A^T lam)`` with ``A = [1; V^T]``, so the problem
reduces to a small piecewise-linear root find handled by semismooth Newton
with Armijo backtracking on the concave dual.
"""

from __future__ import annotations

import numpy as np

RESIDUAL_TOL = 1e-12
MAX_ITERS = 60


def _dual_value(lam, target, A, b):
    w = np.maximum(0.0, target + np.einsum("bmn,bm->bn", A, lam))
    return np.einsum("bm,bm->b", lam, b) - 0.5 * np.einsum("bn,bn->b", w, w), w


def project_weights(vectors: np.ndarray, target: np.ndarray, lam0: np.ndarray | None = None,
                    return_multipliers: bool = False):
    """Batched projection; ``vectors`` (B, n, d), ``target`` (B, n).

    Returns ``(weights, ok)`` where ``ok`` flags batch members whose
    constraints were met to 1e-12. Infeasible members (origin outside the
    convex hull of the vectors) come back with ``ok == False``. ``lam0``
    warm-starts the multipliers.
    """
    vectors = np.asarray(vectors, dtype=float)
    target = np.asarray(target, dtype=float)
    B, n, d = vectors.shape
    A = np.concatenate([np.ones((B, 1, n)), np.swapaxes(vectors, 1, 2)], axis=1)
    b = np.zeros((B, d + 1))
    b[:, 0] = 1.0
    m = d + 1
    lam = np.zeros((B, m)) if lam0 is None else np.array(lam0, dtype=float)
    value, w = _dual_value(lam, target, A, b)
    active = np.ones(B, dtype=bool)
    eye = np.eye(m)
    for _ in range(MAX_ITERS):
        grad = b - np.einsum("bmn,bn->bm", A, w)
        res = np.max(np.abs(grad), axis=1)
        active &= res > RESIDUAL_TOL
        if not active.any():
            break
        idx = np.flatnonzero(active)
        Ai, wi, gi = A[idx], w[idx], grad[idx]
        # generalized Jacobian of max(0, .); counting the kink as active keeps
        # H nonsingular when the target itself sits on a face of the simplex
        z = target[idx] + np.einsum("bmn,bm->bn", Ai, lam[idx])
        support = (z >= 0).astype(float)
        H = np.einsum("bmn,bn,bkn->bmk", Ai, support, Ai) + 1e-12 * eye
        step = np.linalg.solve(H, gi[..., None])[..., 0]
        slope = np.einsum("bm,bm->b", gi, step)
        t = np.ones(len(idx))
        lam_i, val_i = lam[idx], value[idx]
        pending = np.ones(len(idx), dtype=bool)
        new_lam = lam_i.copy()
        new_val = val_i.copy()
        new_w = wi.copy()
        for _ in range(40):
            trial = lam_i + t[:, None] * step
            tv, tw = _dual_value(trial, target[idx], Ai, b[idx])
            good = pending & (tv >= val_i + 1e-4 * t * slope)
            new_lam[good], new_val[good], new_w[good] = trial[good], tv[good], tw[good]
            pending &= ~good
            if not pending.any():
                break
            t = np.where(pending, 0.5 * t, t)
        stalled = pending
        lam[idx], value[idx], w[idx] = new_lam, new_val, new_w
        active[idx[stalled]] = False
    grad = b - np.einsum("bmn,bn->bm", A, w)
    ok = np.max(np.abs(grad), axis=1) <= 1e-11
    if return_multipliers:
        return w, ok, lam
    return w, ok


def project_weights_single(vectors: np.ndarray, target: np.ndarray):
    w, ok = project_weights(np.asarray(vectors)[None], np.asarray(target)[None])
    return w[0], bool(ok[0])
