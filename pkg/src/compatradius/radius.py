"""Compatibility radii by exact facet enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import geometry
from .bloch import QubitPOVM, require_valid, symmetric_extension
from .errors import ConsistencyError, TooFewEffects

TIE_TOL = 1e-12


class Method(str, Enum):
    FACET_GENERAL = "facet_general"
    FACET_PLANAR = "facet_planar"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class RadiusResult:
    value: float
    witness_c0: float
    witness_c: tuple[float, float, float]
    method: Method

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "witness_c0": self.witness_c0,
            "witness_c": list(self.witness_c),
            "method": self.method.value,
        }


def _select(values: np.ndarray, c0: np.ndarray, c: np.ndarray, method: Method) -> RadiusResult:
    best = float(values.min())
    if best < -TIE_TOL:
        raise ConsistencyError(f"negative radius {best}")
    near = np.flatnonzero(values <= best + TIE_TOL)
    # lexicographic tie-break on (c0, cx, cy, cz)
    keys = np.column_stack([c0[near], c[near]])
    order = np.lexsort(keys.T[::-1])
    k = near[order[0]]
    return RadiusResult(
        float(values[k]), float(c0[k]), tuple(float(v) for v in c[k]), method
    )


def compat_radius(povm: QubitPOVM) -> RadiusResult:
    """Radius of the largest ball of noisy spin measurements the POVM simulates.

    Uses the planar pair candidates when ``povm.planar`` is set, otherwise
    the triple candidates. The witness ``(c0, c)`` attains the minimum.
    """
    if povm.planar:
        cands = geometry.facet_candidates_planar(povm)
        method = Method.FACET_PLANAR
    else:
        cands = geometry.facet_candidates(povm)
        method = Method.FACET_GENERAL
    c0 = np.array([h.c0 for h in cands])
    c = np.array([h.c for h in cands])
    values = geometry.objective_many(povm, c0, c)
    return _select(values, c0, c, method)


def compat_radius_sym(povm: QubitPOVM) -> RadiusResult:
    """Radius of the symmetric extension: min over c of sum_i alpha_i eta_i |c.n_i|.

    Candidate normals are pairwise cross products of the effect vectors
    (in-plane perpendiculars for planar POVMs). When every pair is parallel
    the region is a segment and any perpendicular normal gives 0.
    """
    require_valid(povm)
    if geometry.distinct_direction_count(povm) < 2:
        raise TooFewEffects("need at least 2 distinct effect directions")
    v = povm.vectors
    if povm.planar:
        c = np.column_stack([-v[:, 2], np.zeros(len(v)), v[:, 0]])
    else:
        idx = geometry.pair_indices(len(povm))
        c = np.cross(v[idx[:, 0]], v[idx[:, 1]])
    norm = np.linalg.norm(c, axis=1)
    ok = norm >= geometry.DEGENERATE_TOL
    if ok.any():
        c = c[ok] / norm[ok, None]
    else:
        c = geometry._perpendicular(v)[None, :]
    c = np.vstack([c, -c])
    values = np.abs(c @ v.T) @ povm.alpha
    return _select(values, np.zeros(len(c)), c, Method.SYMMETRIC)


def inradius_chain_check(povm: QubitPOVM, tol: float = 1e-9):
    """Return ``(r, r_sym, r <= r_sym + tol)``."""
    r = compat_radius(povm).value
    r_sym = compat_radius_sym(povm).value
    return r, r_sym, r <= r_sym + tol


def symmetrized_radius_via_extension(povm: QubitPOVM) -> RadiusResult:
    """Facet radius of ``symmetric_extension(povm)``; cross-check for :func:`compat_radius_sym`."""
    return compat_radius(symmetric_extension(povm))
