"""Random sampling plus local refinement of n-outcome parent POVMs.

Every sample is refined independently by annealed perturbation: each
round jitters all directions by Gaussian angles and all weights by
log-normal factors, re-projects the weights onto the feasible set and
keeps the move only if the radius grows. The angle scale of a sample
shrinks by 0.95 after every round in which its move was rejected.

Samples are processed in fixed-size chunks with seeds derived from
``(seed, chunk index)``, so results do not depend on the worker count.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bloch import QubitPOVM, require_valid
from .errors import OutOfRange, SamplingStuck
from .geometry import batch_radius_general, batch_radius_planar
from .radius import compat_radius
from .weights import project_weights

CHUNK = 250
MAX_ATTEMPTS = 1000
INITIAL_SCALE = 0.3
SCALE_DECAY = 0.95
SCALE_FLOOR = 1e-5


@dataclass(frozen=True)
class SearchConfig:
    n: int
    planar: bool = False
    samples: int = 1000
    refine_iters: int = 100
    seed: int = 0
    time_budget_ms: int | None = None

    def __post_init__(self):
        if self.n < 3:
            raise OutOfRange("n must be >= 3")
        if self.samples < 1:
            raise OutOfRange("samples must be >= 1")
        if self.refine_iters < 0:
            raise OutOfRange("refine_iters must be >= 0")


@dataclass
class SearchResult:
    best_povm: QubitPOVM
    best_radius: float
    history: list[tuple[int, float]] = field(default_factory=list)
    seed: int = 0
    budget_exhausted: bool = False

    def to_dict(self) -> dict:
        return {
            "best_radius": self.best_radius,
            "best_povm": self.best_povm.to_dict(),
            "history": [list(h) for h in self.history],
            "seed": self.seed,
            "budget_exhausted": self.budget_exhausted,
        }


# -- batched helpers -------------------------------------------------------------


def _random_directions(rng, B: int, n: int, planar: bool) -> np.ndarray:
    if planar:
        ang = rng.uniform(0.0, 2.0 * math.pi, size=(B, n))
        return np.stack([np.cos(ang), np.zeros_like(ang), np.sin(ang)], axis=-1)
    if n == 3:
        # three directions cancel only if coplanar with the origin, so draw
        # them on a uniformly random great circle
        normal = rng.normal(size=(B, 3))
        normal /= np.linalg.norm(normal, axis=1, keepdims=True)
        helper = np.where(np.abs(normal[:, :1]) < 0.9, [[1.0, 0, 0]], [[0, 1.0, 0]])
        u = np.cross(normal, helper)
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        w = np.cross(normal, u)
        ang = rng.uniform(0.0, 2.0 * math.pi, size=(B, n))
        return np.cos(ang)[..., None] * u[:, None, :] + np.sin(ang)[..., None] * w[:, None, :]
    d = rng.normal(size=(B, n, 3))
    return d / np.linalg.norm(d, axis=-1, keepdims=True)


def _plane_coords(dirs: np.ndarray, planar: bool) -> np.ndarray:
    return dirs[..., [0, 2]] if planar else dirs


def _radii(alpha: np.ndarray, dirs: np.ndarray, planar: bool) -> np.ndarray:
    if planar:
        return batch_radius_planar(alpha, dirs[..., [0, 2]])
    return batch_radius_general(alpha, dirs)


def _sample_batch(rng, B: int, n: int, planar: bool):
    """Draw ``B`` feasible POVMs: uniform directions, flat-simplex weights, projected."""
    dirs = np.empty((B, n, 3))
    alpha = np.empty((B, n))
    lam = np.empty((B, 3 if planar else 4))
    todo = np.arange(B)
    for _ in range(MAX_ATTEMPTS):
        d = _random_directions(rng, len(todo), n, planar)
        target = rng.dirichlet(np.ones(n), size=len(todo))
        w, ok, mult = project_weights(_plane_coords(d, planar), target, return_multipliers=True)
        dirs[todo[ok]], alpha[todo[ok]], lam[todo[ok]] = d[ok], w[ok], mult[ok]
        todo = todo[~ok]
        if len(todo) == 0:
            return dirs, alpha, lam
    raise SamplingStuck(f"no feasible {n}-outcome POVM after {MAX_ATTEMPTS} attempts")


def _perturb_directions(rng, dirs: np.ndarray, scale: np.ndarray, planar: bool) -> np.ndarray:
    if planar:
        ang = np.arctan2(dirs[..., 2], dirs[..., 0]) + scale[:, None] * rng.normal(size=dirs.shape[:2])
        return np.stack([np.cos(ang), np.zeros_like(ang), np.sin(ang)], axis=-1)
    kick = rng.normal(size=dirs.shape)
    kick -= np.sum(kick * dirs, axis=-1, keepdims=True) * dirs
    out = dirs + scale[:, None, None] * kick
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def _refine_chunk(cfg: SearchConfig, chunk_index: int, count: int, deadline: float | None):
    rng = np.random.default_rng([cfg.seed, chunk_index])
    dirs, alpha, lam = _sample_batch(rng, count, cfg.n, cfg.planar)
    radius = _radii(alpha, dirs, cfg.planar)
    scale = np.full(count, INITIAL_SCALE)
    trace = [float(radius.max())]
    exhausted = False
    for _ in range(cfg.refine_iters):
        if deadline is not None and time.monotonic() > deadline:
            exhausted = True
            break
        new_dirs = _perturb_directions(rng, dirs, scale, cfg.planar)
        target = alpha * np.exp(scale[:, None] * rng.normal(size=alpha.shape))
        target /= target.sum(axis=1, keepdims=True)
        new_alpha, ok, new_lam = project_weights(
            _plane_coords(new_dirs, cfg.planar), target, lam0=lam, return_multipliers=True
        )
        new_radius = np.where(ok, _radii(new_alpha, new_dirs, cfg.planar), -np.inf)
        better = new_radius > radius
        dirs[better], alpha[better], lam[better] = new_dirs[better], new_alpha[better], new_lam[better]
        radius = np.where(better, new_radius, radius)
        scale = np.where(better, scale, np.maximum(scale * SCALE_DECAY, SCALE_FLOOR))
        trace.append(float(radius.max()))
    k = int(np.argmax(radius))
    return float(radius[k]), dirs[k], alpha[k], trace, exhausted


def _workers() -> int:
    env = os.environ.get("COMPAT_THREADS")
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


def maximize_radius(cfg: SearchConfig) -> SearchResult:
    """Best radius over ``cfg.samples`` refined random POVMs; deterministic in ``cfg``."""
    deadline = None
    if cfg.time_budget_ms is not None:
        deadline = time.monotonic() + cfg.time_budget_ms / 1000.0
    sizes = [min(CHUNK, cfg.samples - s) for s in range(0, cfg.samples, CHUNK)]
    jobs = list(enumerate(sizes))
    if _workers() > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=_workers()) as pool:
            outs = list(pool.map(lambda j: _refine_chunk(cfg, j[0], j[1], deadline), jobs))
    else:
        outs = [_refine_chunk(cfg, i, c, deadline) for i, c in jobs]
    # strict '>' keeps the smallest chunk index on ties
    best = max(range(len(outs)), key=lambda i: (outs[i][0], -i))
    _, dirs, alpha, _, _ = outs[best]
    rounds = max(len(o[3]) for o in outs)
    history = []
    running = -math.inf
    for t in range(rounds):
        level = max(o[3][min(t, len(o[3]) - 1)] for o in outs)
        running = max(running, level)
        history.append((t, running))
    povm = QubitPOVM.from_arrays(alpha, 1.0, dirs, planar=cfg.planar)
    require_valid(povm)
    value = compat_radius(povm).value
    return SearchResult(povm, value, history, cfg.seed, any(o[4] for o in outs))


def sample_povm(n: int, planar: bool, seed: int) -> QubitPOVM:
    """One random feasible projective POVM (η_i = 1)."""
    if n < 3:
        raise OutOfRange("n must be >= 3")
    rng = np.random.default_rng(seed)
    dirs, alpha, _ = _sample_batch(rng, 1, n, planar)
    return QubitPOVM.from_arrays(alpha[0], 1.0, dirs[0], planar=planar)
