"""Child decompositions and local-hidden-state models for Werner states.

A child measurement ``(I + t.sigma) / 2`` is simulated by a parent POVM
when there are responses ``0 <= q_i <= 1`` with

    sum_i q_i alpha_i = 1/2,     2 sum_i q_i alpha_i eta_i n_i = t.

Feeding the singlet through the parent turns the same responses into an
LHS model with hidden states ``-eta_i n_i`` drawn with probability
``alpha_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .bloch import Assemblage, QubitPOVM, require_valid, unit_vector
from .errors import Infeasible, OutOfRange, ShapeMismatch

FEAS_TOL = 1e-10
OUTCOMES = ("+", "-")


@dataclass(frozen=True)
class ChildDecomposition:
    q: np.ndarray
    target: np.ndarray

    def residual(self, povm: QubitPOVM) -> float:
        A, b = _constraints(povm, self.target)
        return float(np.max(np.abs(A @ self.q - b)))


def _constraints(povm: QubitPOVM, target: np.ndarray):
    A = np.vstack([povm.alpha, 2.0 * (povm.alpha[:, None] * povm.vectors).T])
    b = np.concatenate([[0.5], np.asarray(target, dtype=float)])
    return A, b


def _polish(A: np.ndarray, b: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Re-solve the equalities for the variables strictly inside (0, 1)."""
    q = np.clip(q, 0.0, 1.0)
    free = (q > 1e-9) & (q < 1.0 - 1e-9)
    if not free.any():
        return q
    fixed_part = A[:, ~free] @ q[~free]
    sol, *_ = np.linalg.lstsq(A[:, free], b - fixed_part, rcond=None)
    trial = q.copy()
    trial[free] = sol
    if np.all(trial >= 0.0) and np.all(trial <= 1.0):
        if np.max(np.abs(A @ trial - b)) <= np.max(np.abs(A @ q - b)):
            return trial
    return q


def min_violation(povm: QubitPOVM, target) -> tuple[float, np.ndarray]:
    """Smallest achievable max-residual of the two constraint blocks over q in [0,1]^n.

    Phase-one LP: minimize s subject to |A q - b| <= s componentwise.
    """
    A, b = _constraints(povm, target)
    m, n = A.shape
    c = np.zeros(n + 1)
    c[-1] = 1.0
    slack = -np.ones((m, 1))
    A_ub = np.vstack([np.hstack([A, slack]), np.hstack([-A, slack])])
    b_ub = np.concatenate([b, -b])
    bounds = [(0.0, 1.0)] * n + [(0.0, None)]
    res = linprog(
        c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status != 0:
        raise Infeasible(f"LP solver failed: {res.message}")
    q = _polish(A, b, res.x[:n])
    return float(np.max(np.abs(A @ q - b))), q


def decompose_child(povm: QubitPOVM, target) -> ChildDecomposition:
    """Responses q simulating the unbiased child with Bloch vector ``target``."""
    require_valid(povm)
    target = np.asarray(target, dtype=float).reshape(3)
    if np.linalg.norm(target) > 1.0 + 1e-12:
        raise OutOfRange("child Bloch vector must have norm <= 1")
    violation, q = min_violation(povm, target)
    if violation > FEAS_TOL:
        raise Infeasible(
            f"target of norm {np.linalg.norm(target):.12g} is outside the compatible region "
            f"(min residual {violation:.3g})"
        )
    return ChildDecomposition(q, target)


def planar_response(n: int, theta: float) -> np.ndarray:
    """Closed-form responses of ``rotsym_planar(n)`` for the child along angle ``theta``.

    The child has Bloch vector ``R (cos theta, 0, sin theta)`` with ``R`` the
    rotationally symmetric planar radius. ``theta`` is measured from x
    towards z; entry ``i`` belongs to the effect at angle ``2 pi (i+1) / n``.
    """
    if n < 3:
        raise OutOfRange("n must be >= 3")
    if not math.isfinite(theta):
        raise OutOfRange("theta must be finite")
    unit = math.pi / (2 * n)
    # all angles below are integers in units of pi / (2n)
    half_edge = 2 if n % 2 == 0 else 1
    spacing = 2 * half_edge
    # region vertices sit along sums of n/2 consecutive effects (even n),
    # i.e. on effect directions when n = 2 mod 4 and between them when n = 0 mod 4
    base = n if n % 2 == 0 else 0
    k = round((theta / unit - base) / spacing)
    x = theta - (k * spacing + base) * unit
    m1 = k * spacing + base - half_edge
    m2 = k * spacing + base + half_edge
    i = np.arange(1, n + 1)

    def sign_towards(m: int) -> np.ndarray:
        diff = np.mod(4 * i - m + 2 * n, 4 * n) - 2 * n
        return np.where(np.abs(diff) < n, 1.0, np.where(np.abs(diff) == n, 0.0, -1.0))

    a = half_edge * unit
    w1 = math.sin(a - x)
    w2 = math.sin(a + x)
    p = 0.5 * (1.0 + (sign_towards(m1) * w1 + sign_towards(m2) * w2) / (2.0 * math.sin(a)))
    return np.clip(p, 0.0, 1.0)


def continuous_planar_response(t_angle: float, psi: np.ndarray) -> np.ndarray:
    """n -> infinity limit: respond + on the half circle facing the child direction."""
    return 0.5 * (1.0 + np.sign(np.cos(psi - t_angle)))


@dataclass(frozen=True)
class LHSModel:
    """Hidden states ``hidden_bloch[i]`` with probability ``p[i]``.

    ``response[a, x, i]`` is the probability of outcome ``OUTCOMES[a]`` for
    setting ``settings[x]`` given hidden index ``i``.
    """

    p: np.ndarray
    hidden_bloch: np.ndarray
    response: np.ndarray
    settings: np.ndarray

    def __len__(self) -> int:
        return len(self.p)

    def response_of(self, a: str, x: int, i: int) -> float:
        return float(self.response[OUTCOMES.index(a), x, i])

    def to_dict(self) -> dict:
        return {
            "p": self.p.tolist(),
            "hidden_bloch": self.hidden_bloch.tolist(),
            "settings": self.settings.tolist(),
            "response": {a: self.response[k].tolist() for k, a in enumerate(OUTCOMES)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LHSModel":
        settings = np.asarray(data["settings"], dtype=float).reshape(-1, 3)
        n = len(data["p"])
        response = np.stack(
            [np.asarray(data["response"][a], dtype=float).reshape(len(settings), n) for a in OUTCOMES]
        )
        return cls(
            np.asarray(data["p"], dtype=float),
            np.asarray(data["hidden_bloch"], dtype=float).reshape(-1, 3),
            response,
            settings,
        )


def build_lhs_werner(parent: QubitPOVM, r: float, settings) -> LHSModel:
    """LHS model for the Werner state with singlet weight ``r`` from a parent POVM."""
    require_valid(parent)
    if not 0.0 <= r <= 1.0:
        raise OutOfRange(f"r={r} outside [0, 1]")
    dirs = np.array([unit_vector(s) for s in settings], dtype=float).reshape(-1, 3)
    n = len(parent)
    response = np.empty((2, len(dirs), n))
    for x, d in enumerate(dirs):
        q = decompose_child(parent, r * d).q
        response[0, x] = q
        response[1, x] = 1.0 - q
    return LHSModel(parent.alpha.copy(), -parent.vectors.copy(), response, dirs)


def verify_lhs(model: LHSModel, assemblage: Assemblage, tol: float = 1e-9) -> tuple[bool, float]:
    """Largest deviation between the model's and the assemblage's (weight, weight*bloch) pairs."""
    n_set = len(assemblage.settings)
    if model.response.shape != (2, n_set, len(model.p)) or model.hidden_bloch.shape != (len(model.p), 3):
        raise ShapeMismatch(
            f"model response {model.response.shape} does not match "
            f"{n_set} settings and {len(model.p)} hidden states"
        )
    max_dev = 0.0
    for (a, x), (weight, bloch) in assemblage.entries.items():
        coeff = model.response[OUTCOMES.index(a), x] * model.p
        got = np.concatenate([[coeff.sum()], coeff @ model.hidden_bloch])
        want = np.concatenate([[weight], weight * np.asarray(bloch, dtype=float)])
        max_dev = max(max_dev, float(np.max(np.abs(got - want))))
    return max_dev <= tol, max_dev


def lhs_is_normalized(model: LHSModel, tol: float = 1e-12) -> bool:
    r = model.response
    return bool(
        abs(model.p.sum() - 1.0) <= tol
        and np.all(np.linalg.norm(model.hidden_bloch, axis=1) <= 1.0 + tol)
        and np.all((r >= 0.0) & (r <= 1.0))
        and np.all(np.abs(r.sum(axis=0) - 1.0) <= tol)
    )
