"""Qubit POVMs in Bloch form and Werner-state assemblages.

An effect is stored as ``alpha * (I + eta * n.sigma)`` with ``n`` a unit
vector. A POVM is an ordered tuple of effects plus an explicit planar flag
(all directions in the x-z plane); planar algorithms are only used when
the flag is set.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DegeneratePOVM, InvalidPOVM, OutOfRange

TOL_POVM = 1e-9
UNIT_TOL = 1e-9
MIN_ALPHA = 1e-12


def unit_vector(v: Sequence[float], tol: float = UNIT_TOL) -> tuple[float, float, float]:
    """Return ``v`` renormalized to unit length.

    Inputs farther than ``tol`` from unit norm are rejected with
    :class:`OutOfRange` rather than silently rescaled.
    """
    arr = np.asarray(v, dtype=float).reshape(3)
    if not np.all(np.isfinite(arr)):
        raise OutOfRange(f"non-finite direction {arr!r}")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > tol:
        raise OutOfRange(f"direction {arr.tolist()} has norm {norm}, expected 1")
    arr = arr / norm
    return (float(arr[0]), float(arr[1]), float(arr[2]))


@dataclass(frozen=True)
class QubitEffect:
    """The positive operator ``alpha * (I + eta * n.sigma)``."""

    alpha: float
    eta: float
    n: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "n", unit_vector(self.n))


@dataclass(frozen=True)
class QubitPOVM:
    effects: tuple[QubitEffect, ...]
    planar: bool = False

    def __post_init__(self):
        object.__setattr__(self, "effects", tuple(self.effects))

    @classmethod
    def from_arrays(cls, alpha, eta, directions, planar: bool = False) -> "QubitPOVM":
        """Build a POVM from parallel arrays, dropping effects with alpha < 1e-12."""
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        eta = np.broadcast_to(np.asarray(eta, dtype=float), alpha.shape)
        directions = np.asarray(directions, dtype=float).reshape(-1, 3)
        if not (len(alpha) == len(eta) == len(directions)):
            raise InvalidPOVM("alpha, eta and directions must have equal length")
        effects = [
            QubitEffect(a, e, d)
            for a, e, d in zip(alpha, eta, directions)
            if a >= MIN_ALPHA
        ]
        return cls(tuple(effects), planar=planar)

    @classmethod
    def from_dict(cls, data: dict) -> "QubitPOVM":
        effects = data["effects"]
        return cls.from_arrays(
            [e["alpha"] for e in effects],
            [e.get("eta", 1.0) for e in effects],
            [e["n"] for e in effects],
            planar=bool(data.get("planar", False)),
        )

    def to_dict(self) -> dict:
        return {
            "effects": [
                {"alpha": e.alpha, "eta": e.eta, "n": list(e.n)} for e in self.effects
            ],
            "planar": self.planar,
        }

    def __len__(self) -> int:
        return len(self.effects)

    @cached_property
    def alpha(self) -> np.ndarray:
        return np.array([e.alpha for e in self.effects], dtype=float)

    @cached_property
    def eta(self) -> np.ndarray:
        return np.array([e.eta for e in self.effects], dtype=float)

    @cached_property
    def directions(self) -> np.ndarray:
        return np.array([e.n for e in self.effects], dtype=float).reshape(-1, 3)

    @cached_property
    def vectors(self) -> np.ndarray:
        """Purity-scaled Bloch vectors ``eta_i * n_i``, shape (n, 3)."""
        return self.eta[:, None] * self.directions

    def rotated(self, rotation: np.ndarray) -> "QubitPOVM":
        """Apply a common orthogonal matrix to every direction."""
        dirs = self.directions @ np.asarray(rotation, dtype=float).T
        return QubitPOVM.from_arrays(self.alpha, self.eta, dirs, planar=False)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[tuple[str, float], ...] = ()

    def magnitude(self, name: str) -> float | None:
        for key, value in self.violations:
            if key == name:
                return value
        return None


def validate_povm(povm: QubitPOVM, tol: float = TOL_POVM) -> ValidationReport:
    """Check weights, completion and planarity; never raises."""
    if tol <= 0:
        raise OutOfRange("tol must be positive")
    violations: list[tuple[str, float]] = []
    if len(povm) == 0:
        return ValidationReport(False, (("empty", 1.0),))
    alpha, eta = povm.alpha, povm.eta
    dev = abs(float(alpha.sum()) - 1.0)
    if dev > tol:
        violations.append(("weight-sum", dev))
    completion = float(np.linalg.norm(alpha @ povm.vectors))
    if completion > tol:
        violations.append(("completion", completion))
    for i, (a, e) in enumerate(zip(alpha, eta)):
        if a < -tol or a > 1 + tol:
            violations.append((f"alpha[{i}]", float(max(-a, a - 1))))
        if e < -tol or e > 1 + tol:
            violations.append((f"eta[{i}]", float(max(-e, e - 1))))
    if povm.planar:
        off_plane = float(np.max(np.abs(povm.directions[:, 1])))
        if off_plane > tol:
            violations.append(("planarity", off_plane))
    return ValidationReport(not violations, tuple(violations))


def require_valid(povm: QubitPOVM, tol: float = TOL_POVM) -> None:
    report = validate_povm(povm, tol)
    if not report.valid:
        detail = ", ".join(f"{k}={v:.3g}" for k, v in report.violations)
        raise InvalidPOVM(f"invalid POVM: {detail}")


def symmetric_extension(povm: QubitPOVM) -> QubitPOVM:
    """Split every effect into two half-weight effects along +n and -n."""
    require_valid(povm)
    alpha = np.repeat(povm.alpha / 2.0, 2)
    eta = np.repeat(povm.eta, 2)
    dirs = np.empty((2 * len(povm), 3))
    dirs[0::2] = povm.directions
    dirs[1::2] = -povm.directions
    return QubitPOVM.from_arrays(alpha, eta, dirs, planar=povm.planar)


def rank1_reduce(povm: QubitPOVM) -> QubitPOVM:
    """Replace each effect by a projective one with weight alpha*eta / sum(alpha*eta).

    Effects with alpha*eta == 0 disappear. The compatibility radius never
    decreases under this map.
    """
    require_valid(povm)
    weights = povm.alpha * povm.eta
    total = float(weights.sum())
    if total <= 0.0:
        raise DegeneratePOVM("all effects are proportional to the identity")
    keep = weights > 0.0
    return QubitPOVM.from_arrays(
        weights[keep] / total, 1.0, povm.directions[keep], planar=povm.planar
    )


@dataclass(frozen=True)
class Assemblage:
    """Bob's subnormalized states keyed by (outcome, setting index).

    Each value is ``(weight, bloch)`` for the operator
    ``weight * (I + bloch.sigma) / 2``. Outcomes are ``"+"`` and ``"-"``.
    """

    entries: dict = field(default_factory=dict)
    settings: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))

    def to_dict(self) -> dict:
        return {
            "settings": np.asarray(self.settings).tolist(),
            "entries": [
                {"outcome": a, "setting": x, "weight": w, "bloch": list(map(float, b))}
                for (a, x), (w, b) in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Assemblage":
        entries = {
            (e["outcome"], int(e["setting"])): (float(e["weight"]), np.asarray(e["bloch"], dtype=float))
            for e in data["entries"]
        }
        return cls(entries, np.asarray(data["settings"], dtype=float).reshape(-1, 3))


def werner_assemblage(r: float, settings: Iterable[Sequence[float]]) -> Assemblage:
    """Assemblage of the Werner state under spin measurements along ``settings``.

    Outcome ``+`` along ``n`` leaves Bob with ``(I - r n.sigma) / 4``.
    """
    if not 0.0 <= r <= 1.0:
        raise OutOfRange(f"r={r} outside [0, 1]")
    dirs = np.array([unit_vector(s) for s in settings], dtype=float).reshape(-1, 3)
    entries = {}
    for x, n in enumerate(dirs):
        entries[("+", x)] = (0.5, -r * n)
        entries[("-", x)] = (0.5, r * n)
    return Assemblage(entries, dirs)


def load_json(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(data, path: str | Path | None = None) -> str:
    text = json.dumps(data, indent=2, default=_json_default)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_povm(path: str | Path) -> QubitPOVM:
    return QubitPOVM.from_dict(load_json(path))


def rotation_matrix(axis: Sequence[float], angle: float) -> np.ndarray:
    """Rodrigues rotation about ``axis`` by ``angle`` radians."""
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + math.sin(angle) * K + (1 - math.cos(angle)) * (K @ K)
