"""Named parent POVMs: rotationally symmetric planar, Platonic and Thomson."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from itertools import product

import numpy as np

from .bloch import QubitPOVM, require_valid
from .errors import InfeasibleWeights, OutOfRange
from .weights import project_weights_single

PHI = (1.0 + math.sqrt(5.0)) / 2.0


def rotsym_planar(n: int) -> QubitPOVM:
    """Equal-weight projective POVM on ``n`` equally spaced x-z directions."""
    if n < 2:
        raise OutOfRange("n must be >= 2")
    ang = 2.0 * math.pi * np.arange(1, n + 1) / n
    dirs = np.column_stack([np.cos(ang), np.zeros(n), np.sin(ang)])
    return QubitPOVM.from_arrays(np.full(n, 1.0 / n), 1.0, dirs, planar=True)


def rotsym_planar_radius_closed_form(n: int) -> float:
    if n < 3:
        raise OutOfRange("closed form needs n >= 3")
    if n % 2:
        x = math.pi / (2 * n)
        return math.cos(x) / math.tan(x) / n
    return 2.0 / (n * math.tan(math.pi / n))


class PlatonicKind(str, Enum):
    TETRAHEDRON = "tetrahedron"
    OCTAHEDRON = "octahedron"
    CUBE = "cube"
    ICOSAHEDRON = "icosahedron"
    DODECAHEDRON = "dodecahedron"

    @property
    def outcomes(self) -> int:
        return {"tetrahedron": 4, "octahedron": 6, "cube": 8, "icosahedron": 12, "dodecahedron": 20}[self.value]


def _signed(v) -> list[tuple[float, float, float]]:
    out = []
    for signs in product((1, -1), repeat=3):
        w = tuple(s * x for s, x in zip(signs, v))
        if w not in out:
            out.append(w)
    return out


def platonic_directions(kind: PlatonicKind | str) -> np.ndarray:
    kind = PlatonicKind(kind)
    s3 = math.sqrt(3.0)
    if kind is PlatonicKind.TETRAHEDRON:
        pts = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
        scale = 1 / s3
    elif kind is PlatonicKind.OCTAHEDRON:
        pts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
        scale = 1.0
    elif kind is PlatonicKind.CUBE:
        pts = _signed((1, 1, 1))
        scale = 1 / s3
    elif kind is PlatonicKind.ICOSAHEDRON:
        pts = [w for base in [(0, 1, PHI), (PHI, 0, 1), (1, PHI, 0)] for w in _signed(base)]
        scale = 1 / math.sqrt(1 + PHI**2)
    else:
        cube = np.array(_signed((1, 1, 1)), dtype=float) / s3
        rest = [w for base in [(0, 1, PHI**2), (PHI**2, 0, 1), (1, PHI**2, 0)] for w in _signed(base)]
        rest = np.array(rest, dtype=float) / math.sqrt(1 + PHI**4)
        return np.vstack([cube, rest])
    return np.array(pts, dtype=float) * scale


def platonic(kind: PlatonicKind | str) -> QubitPOVM:
    dirs = platonic_directions(kind)
    n = len(dirs)
    return QubitPOVM.from_arrays(np.full(n, 1.0 / n), 1.0, dirs)


def platonic_radius_closed_form(kind: PlatonicKind | str) -> float:
    kind = PlatonicKind(kind)
    return {
        PlatonicKind.TETRAHEDRON: 1 / 3,
        PlatonicKind.OCTAHEDRON: 1 / 3,
        PlatonicKind.CUBE: math.sqrt(6) / 6,
        PlatonicKind.ICOSAHEDRON: PHI**3 * math.sqrt(1 + (1 - PHI) ** 2) / (3 * (1 + PHI**2)),
        PlatonicKind.DODECAHEDRON: math.sqrt(5 / 6) * PHI**2 / 5,
    }[kind]


# -- Thomson problem -----------------------------------------------------------


@dataclass(frozen=True)
class ThomsonConfig:
    n: int
    restarts: int = 50
    seed: int = 0
    max_iters: int = 5000
    grad_tol: float = 1e-10
    energy: float | None = None


def coulomb_energy(points: np.ndarray) -> float:
    diff = points[:, None, :] - points[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    iu = np.triu_indices(len(points), 1)
    return float(np.sum(1.0 / dist[iu]))


def _energy_grad(points: np.ndarray):
    """Energies and tangential gradients for a batch of configurations (R, n, 3)."""
    diff = points[:, :, None, :] - points[:, None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    n = points.shape[1]
    dist[:, np.arange(n), np.arange(n)] = np.inf
    inv = 1.0 / dist
    energy = 0.5 * inv.sum(axis=(1, 2))
    grad = -np.einsum("rij,rijk->rik", inv**3, diff)
    tangent = grad - np.sum(grad * points, axis=2, keepdims=True) * points
    return energy, tangent


def _retract(points: np.ndarray) -> np.ndarray:
    return points / np.linalg.norm(points, axis=-1, keepdims=True)


def _descend(points: np.ndarray, max_iters: int, grad_tol: float):
    """Projected gradient descent on the sphere, batched over restarts.

    Trial steps follow Barzilai-Borwein and are halved until the Armijo
    condition holds.
    """
    R = len(points)
    energy, g = _energy_grad(points)
    step = np.full(R, 0.1)
    prev_pts, prev_g = None, None
    running = np.ones(R, dtype=bool)
    for _ in range(max_iters):
        gnorm = np.sqrt(np.sum(g * g, axis=(1, 2)))
        running &= gnorm >= grad_tol
        if not running.any():
            break
        if prev_pts is not None:
            s = points - prev_pts
            y = g - prev_g
            sy = np.sum(s * y, axis=(1, 2))
            ss = np.sum(s * s, axis=(1, 2))
            step = np.where(sy > 0, ss / np.where(sy > 0, sy, 1.0), step)
        pending = running.copy()
        new_pts, new_e, new_g = points.copy(), energy.copy(), g.copy()
        for _ in range(60):
            trial = _retract(points - step[:, None, None] * g)
            e_trial, g_trial = _energy_grad(trial)
            good = pending & (e_trial <= energy - 1e-4 * step * gnorm**2)
            new_pts[good], new_e[good], new_g[good] = trial[good], e_trial[good], g_trial[good]
            pending &= ~good
            if not pending.any():
                break
            step = np.where(pending, 0.5 * step, step)
        # no representable energy decrease means numerical convergence
        running &= ~pending & (new_e < energy - 4 * np.spacing(energy))
        prev_pts, prev_g = points, g
        points, energy, g = new_pts, new_e, new_g
    return points, energy


def thomson_points(cfg: ThomsonConfig) -> tuple[np.ndarray, float]:
    """Lowest-energy configuration over ``cfg.restarts`` random starts."""
    if cfg.n < 2:
        raise OutOfRange("n must be >= 2")
    rng = np.random.default_rng(cfg.seed)
    starts = _retract(rng.normal(size=(cfg.restarts, cfg.n, 3)))
    pts, energy = _descend(starts, cfg.max_iters, cfg.grad_tol)
    k = int(np.argmin(energy))
    return pts[k], float(energy[k])


def thomson(cfg: ThomsonConfig, repair_weights: bool = True) -> QubitPOVM:
    """Projective POVM on a minimum-energy Thomson configuration.

    A zero centroid (<= 1e-6) yields equal weights. Otherwise the weights
    closest to uniform that cancel the centroid are used, or
    :class:`InfeasibleWeights` is raised when ``repair_weights`` is off or
    no such weights exist.
    """
    if cfg.n < 4:
        raise OutOfRange("Thomson construction needs n >= 4")
    pts, _ = thomson_points(cfg)
    return povm_from_points(pts, repair_weights=repair_weights)


def povm_from_points(pts: np.ndarray, repair_weights: bool = True) -> QubitPOVM:
    n = len(pts)
    uniform = np.full(n, 1.0 / n)
    centroid = float(np.linalg.norm(pts.mean(axis=0)))
    if centroid <= 1e-6:
        # remove the residual drift; each pass at least halves it
        for _ in range(60):
            pts = _retract(pts - pts.mean(axis=0))
            if np.linalg.norm(pts.mean(axis=0)) <= 1e-12:
                return QubitPOVM.from_arrays(uniform, 1.0, pts)
    if not repair_weights:
        raise InfeasibleWeights(f"centroid norm {centroid:.3g} is not zero")
    w, ok = project_weights_single(pts, uniform)
    if not ok:
        raise InfeasibleWeights("no nonnegative weights cancel the centroid")
    povm = QubitPOVM.from_arrays(w, 1.0, pts)
    require_valid(povm)
    return povm


def thomson_energy(cfg: ThomsonConfig) -> ThomsonConfig:
    """Return ``cfg`` with the achieved energy filled in."""
    return replace(cfg, energy=thomson_points(cfg)[1])
