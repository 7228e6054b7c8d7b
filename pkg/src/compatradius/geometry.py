"""Hyperplane objective, facet-normal candidates and a sampled oracle.

For a POVM with effects ``alpha_i (I + eta_i n_i.sigma)`` the quantity

    f(c0, c) = sum_i alpha_i |c0 + eta_i c.n_i|,   |c| = 1,

is the distance from the origin to the supporting plane of the unbiased
compatible region with normal ``c``. Its infimum is the compatibility
radius, and it is attained at a normal of a facet of the 4-d zonotope
generated by ``(1, eta_i n_i)``: every facet normal is orthogonal to three
generators (two in the planar case).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .bloch import QubitPOVM, require_valid
from .errors import NotPlanar, OutOfRange, TooFewEffects

DEGENERATE_TOL = 1e-10
DEDUP_QUANTUM = 1e-9
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
DIRECTION_TOL = 1e-12
MIN_GAIN = 1e-15  # refinement steps must beat roundoff


@dataclass(frozen=True)
class HyperplaneCandidate:
    c0: float
    c: tuple[float, float, float]
    source: tuple[int, ...]


@dataclass(frozen=True)
class OracleConfig:
    """Grid resolution for :func:`sampled_min`.

    ``seed`` only fixes a rotation of the lattice; the lattice itself is
    deterministic.
    """

    grid_points: int = 20000
    seed: int = 0
    starts: int = 8

    def __post_init__(self):
        if self.grid_points < 100:
            raise OutOfRange("grid_points must be >= 100")


def objective(povm: QubitPOVM, c0: float, c) -> float:
    c = np.asarray(c, dtype=float)
    return float(np.sum(povm.alpha * np.abs(c0 + povm.vectors @ c)))


def objective_many(povm: QubitPOVM, c0: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Vectorized :func:`objective` over K hyperplanes; ``c`` has shape (K, 3)."""
    proj = np.asarray(c0, dtype=float)[:, None] + np.asarray(c, dtype=float) @ povm.vectors.T
    return np.abs(proj) @ povm.alpha


@lru_cache(maxsize=None)
def triple_indices(n: int) -> np.ndarray:
    return np.array(list(combinations(range(n), 3)), dtype=np.intp).reshape(-1, 3)


@lru_cache(maxsize=None)
def pair_indices(n: int) -> np.ndarray:
    return np.array(list(combinations(range(n), 2)), dtype=np.intp).reshape(-1, 2)


def distinct_direction_count(povm: QubitPOVM) -> int:
    dirs = povm.directions
    kept: list[np.ndarray] = []
    for d in dirs:
        if all(np.max(np.abs(d - k)) > DIRECTION_TOL for k in kept):
            kept.append(d)
    return len(kept)


def triple_normals(vectors: np.ndarray):
    """Normals of affine planes through triples of rows of ``vectors``.

    ``vectors`` may carry leading batch axes: shape (..., n, 3). Returns
    ``(c0, c, ok)`` with shapes (..., T), (..., T, 3), (..., T); rows with
    ``ok == False`` are degenerate and hold zeros.
    """
    n = vectors.shape[-2]
    idx = triple_indices(n)
    vx = vectors[..., idx[:, 0], :]
    vy = vectors[..., idx[:, 1], :]
    vz = vectors[..., idx[:, 2], :]
    cross = np.cross(vx - vy, vx - vz)
    norm = np.linalg.norm(cross, axis=-1)
    ok = norm >= DEGENERATE_TOL
    c = np.where(ok[..., None], cross / np.where(ok, norm, 1.0)[..., None], 0.0)
    c0 = -np.einsum("...k,...k->...", c, vx)
    return c0, c, ok


def pair_normals_planar(vectors_xz: np.ndarray):
    """Planar analogue of :func:`triple_normals` on (..., n, 2) x-z vectors.

    The normal ``(c0, cx, cz)`` is the cross product of the embedded
    generators ``(1, x_a, z_a)`` and ``(1, x_b, z_b)``, scaled to unit
    in-plane part.
    """
    n = vectors_xz.shape[-2]
    idx = pair_indices(n)
    a = vectors_xz[..., idx[:, 0], :]
    b = vectors_xz[..., idx[:, 1], :]
    c0 = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    cx = a[..., 1] - b[..., 1]
    cz = b[..., 0] - a[..., 0]
    norm = np.hypot(cx, cz)
    ok = norm >= DEGENERATE_TOL
    scale = np.where(ok, norm, 1.0)
    c0 = np.where(ok, c0 / scale, 0.0)
    c = np.stack([cx / scale, np.zeros_like(cx), cz / scale], axis=-1)
    c = np.where(ok[..., None], c, 0.0)
    return c0, c, ok


def _dedup(c0: np.ndarray, c: np.ndarray, sources: np.ndarray):
    # both orientations are emitted later, so fix the sign before comparing
    key = np.round(np.column_stack([c0, c]) / DEDUP_QUANTUM).astype(np.int64)
    lead = key[np.arange(len(key)), np.argmax(key != 0, axis=1)]
    key *= np.where(lead < 0, -1, 1)[:, None]
    _, first = np.unique(key, axis=0, return_index=True)
    first = np.sort(first)
    return c0[first], c[first], sources[first]


def _emit(c0, c, sources) -> list[HyperplaneCandidate]:
    c0 = np.clip(c0, -1.0, 1.0)
    out = []
    for k in range(len(c0)):
        src = tuple(int(i) for i in sources[k])
        out.append(HyperplaneCandidate(float(c0[k]), tuple(map(float, c[k])), src))
        out.append(HyperplaneCandidate(float(-c0[k]), tuple(map(float, -c[k])), src))
    return out


def facet_candidates(povm: QubitPOVM) -> list[HyperplaneCandidate]:
    """Hyperplanes through every non-degenerate triple of effect vectors.

    Both orientations of each plane are returned. If the effect vectors are
    collinear (possible only with eta < 1) a single plane through the origin
    perpendicular to their common line is returned instead.
    """
    require_valid(povm)
    if distinct_direction_count(povm) < 3:
        raise TooFewEffects("need at least 3 distinct effect directions")
    c0, c, ok = triple_normals(povm.vectors)
    sources = triple_indices(len(povm))
    if not ok.any():
        c = _perpendicular(povm.vectors)[None, :]
        return _emit(np.zeros(1), c, np.array([[0, 1, 2]]))
    return _emit(*_dedup(c0[ok], c[ok], sources[ok]))


def facet_candidates_planar(povm: QubitPOVM) -> list[HyperplaneCandidate]:
    require_valid(povm)
    if not povm.planar:
        raise NotPlanar("POVM is not flagged planar")
    if distinct_direction_count(povm) < 2:
        raise TooFewEffects("need at least 2 distinct effect directions")
    c0, c, ok = pair_normals_planar(povm.vectors[:, [0, 2]])
    sources = pair_indices(len(povm))
    if not ok.any():
        c = _perpendicular(povm.vectors)[None, :]
        return _emit(np.zeros(1), c, np.array([[0, 1]]))
    return _emit(*_dedup(c0[ok], c[ok], sources[ok]))


def _perpendicular(vectors: np.ndarray) -> np.ndarray:
    """A unit vector orthogonal to the dominant line through ``vectors`` (x-z plane preferred)."""
    _, _, vt = np.linalg.svd(vectors)
    line = vt[0]
    c = np.array([-line[2], 0.0, line[0]])
    if np.linalg.norm(c) < 0.5:
        c = np.cross(line, [1.0, 0.0, 0.0])
    return c / np.linalg.norm(c)


# -- batched radius evaluation (used by the search module) -------------------


def batch_radius_general(alpha: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Facet-minimum radius for a batch: alpha (B, n), vectors (B, n, 3)."""
    c0, c, ok = triple_normals(vectors)
    proj = c0[..., None] + np.einsum("btk,bik->bti", c, vectors)
    vals = np.einsum("bti,bi->bt", np.abs(proj), alpha)
    vals = np.where(ok, vals, np.inf)
    return vals.min(axis=-1)


def batch_radius_planar(alpha: np.ndarray, vectors_xz: np.ndarray) -> np.ndarray:
    """Planar facet-minimum radius for a batch: alpha (B, n), vectors (B, n, 2)."""
    c0, c, ok = pair_normals_planar(vectors_xz)
    proj = c0[..., None] + np.einsum("btk,bik->bti", c[..., [0, 2]], vectors_xz)
    vals = np.einsum("bti,bi->bt", np.abs(proj), alpha)
    vals = np.where(ok, vals, np.inf)
    return vals.min(axis=-1)


# -- sampled oracle ------------------------------------------------------------


def fibonacci_sphere(count: int) -> np.ndarray:
    k = np.arange(count) + 0.5
    z = 1.0 - 2.0 * k / count
    rho = np.sqrt(1.0 - z * z)
    phi = k * GOLDEN_ANGLE
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def _random_rotation(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def best_offset(povm: QubitPOVM, c: np.ndarray):
    """Exact ``min over c0`` of the objective for each row of ``c``.

    The objective is piecewise linear and convex in ``c0``, minimized at
    minus the alpha-weighted median of ``eta_i c.n_i``.
    Returns ``(values, c0)``.
    """
    t = np.atleast_2d(c) @ povm.vectors.T
    order = np.argsort(t, axis=1)
    ts = np.take_along_axis(t, order, axis=1)
    cum = np.cumsum(povm.alpha[order], axis=1)
    pos = np.argmax(cum >= 0.5 * cum[:, -1:] - 1e-15, axis=1)
    median = ts[np.arange(len(ts)), pos]
    values = np.abs(t - median[:, None]) @ povm.alpha
    return values, -median


def _tangent_basis(c: np.ndarray):
    helper = np.array([1.0, 0.0, 0.0]) if abs(c[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(c, helper)
    u /= np.linalg.norm(u)
    return u, np.cross(c, u)


def _refine_circle(povm: QubitPOVM, c: np.ndarray, step: float):
    """Compass search over the in-plane angle of ``c``."""
    best_val = float(best_offset(povm, c[None, :])[0][0])
    while step > 1e-11:
        ang = math.atan2(c[2], c[0]) + step * np.array([-1.0, 1.0])
        trials = np.column_stack([np.cos(ang), np.zeros(2), np.sin(ang)])
        vals, _ = best_offset(povm, trials)
        k = int(np.argmin(vals))
        if vals[k] < best_val - MIN_GAIN:
            best_val, c = float(vals[k]), trials[k]
        else:
            step *= 0.5
    return best_val, c


def _refine_sphere(povm: QubitPOVM, c: np.ndarray, h: float, half: int = 10, patience: int = 3):
    """Zooming patch search on the sphere around ``c``.

    A ``(2 half + 1)^2`` grid with spacing ``h`` in the tangent plane moves
    to its best point until the centre wins. The objective descends along
    thin wedges around its kinks, so the patch is rotated by the golden
    angle ``patience`` times before ``h`` shrinks by 3. After every
    successful move the same displacement is extrapolated by powers of 2,
    so the search does not crawl along long narrow valleys.
    """
    t = np.arange(-half, half + 1, dtype=float)
    reach = 2.0 ** np.arange(1, 41)
    X, Y = (g.ravel() for g in np.meshgrid(t, t))
    best_val = float(best_offset(povm, c[None, :])[0][0])
    spin, fails = 0.0, 0
    while h > 1e-11:
        u, w = _tangent_basis(c)
        a = math.cos(spin) * X - math.sin(spin) * Y
        b = math.sin(spin) * X + math.cos(spin) * Y
        pts = c[None, :] + h * (a[:, None] * u + b[:, None] * w)
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        vals, _ = best_offset(povm, pts)
        k = int(np.argmin(vals))
        if vals[k] < best_val - MIN_GAIN:
            step = pts[k] - c
            best_val, c, fails = float(vals[k]), pts[k], 0
            ext = c[None, :] + reach[:, None] * step
            ext /= np.linalg.norm(ext, axis=1, keepdims=True)
            ext_vals, _ = best_offset(povm, ext)
            j = int(np.argmin(ext_vals))
            if ext_vals[j] < best_val - MIN_GAIN:
                best_val, c = float(ext_vals[j]), ext[j]
        else:
            fails += 1
            spin += GOLDEN_ANGLE
            if fails >= patience:
                h /= 3.0
                fails = 0
    return best_val, c


def _distinct_starts(grid: np.ndarray, values: np.ndarray, count: int, separation: float) -> list[int]:
    """Indices of the lowest grid values, at most one per ``separation`` neighbourhood.

    The best raw grid values tend to crowd into one basin; spreading the
    starts lets refinement reach thin basins elsewhere.
    """
    cos_sep = math.cos(separation)
    chosen: list[int] = []
    for k in np.argsort(values):
        if all(grid[k] @ grid[j] < cos_sep for j in chosen):
            chosen.append(int(k))
            if len(chosen) == count:
                break
    return chosen


def sampled_minimum(povm: QubitPOVM, cfg: OracleConfig = OracleConfig()):
    """Grid-plus-refinement minimum of the objective; returns ``(value, c0, c)``."""
    require_valid(povm)
    if povm.planar:
        offset = np.random.default_rng(cfg.seed).uniform(0, 2 * math.pi / cfg.grid_points)
        ang = offset + np.arange(cfg.grid_points) * (2 * math.pi / cfg.grid_points)
        grid = np.column_stack([np.cos(ang), np.zeros_like(ang), np.sin(ang)])
        spacing = 2 * math.pi / cfg.grid_points
    else:
        grid = fibonacci_sphere(cfg.grid_points) @ _random_rotation(cfg.seed).T
        spacing = math.sqrt(4 * math.pi / cfg.grid_points)
    values = np.empty(len(grid))
    chunk = 20000
    for s in range(0, len(grid), chunk):
        values[s:s + chunk], _ = best_offset(povm, grid[s:s + chunk])
    best = (float(values.min()), grid[int(np.argmin(values))])
    for k in _distinct_starts(grid, values, cfg.starts, 4.0 * spacing):
        if povm.planar:
            val, c = _refine_circle(povm, grid[k].copy(), 2.0 * spacing)
        else:
            val, c = _refine_sphere(povm, grid[k].copy(), spacing / 4.0)
        if val < best[0]:
            best = (val, c)
    val, c = best
    _, c0 = best_offset(povm, c[None, :])
    return val, float(c0[0]), c


def sampled_min(povm: QubitPOVM, cfg: OracleConfig = OracleConfig()) -> float:
    """Independent oracle for the radius: dense direction grid plus local search."""
    return sampled_minimum(povm, cfg)[0]
