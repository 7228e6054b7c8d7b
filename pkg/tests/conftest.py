import os

import numpy as np
import pytest
from hypothesis import HealthCheck, Phase, settings

from compatradius import QubitPOVM, platonic, rotsym_planar
from compatradius.weights import project_weights_single

settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    max_examples=60,
    phases=[Phase.explicit, Phase.reuse, Phase.generate, Phase.target, Phase.shrink],
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))


def random_povm(rng, n, planar=False, rank1=True, max_tries=1000):
    """Feasible POVM with random directions, purities and near-Dirichlet weights."""
    for _ in range(max_tries):
        if planar or n == 3:
            # three general directions must share a great circle to cancel
            ang = rng.uniform(0, 2 * np.pi, n)
            dirs = np.column_stack([np.cos(ang), np.zeros(n), np.sin(ang)])
            if not planar:
                dirs = dirs @ random_rotation(rng).T
        else:
            dirs = rng.normal(size=(n, 3))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        eta = np.ones(n) if rank1 else rng.uniform(0.05, 1.0, n)
        vecs = eta[:, None] * dirs
        if planar:
            vecs = vecs[:, [0, 2]]
        w, ok = project_weights_single(vecs, rng.dirichlet(np.ones(n)))
        if ok and np.count_nonzero(w > 1e-12) >= 3:
            return QubitPOVM.from_arrays(w, eta, dirs, planar=planar)
    raise RuntimeError("could not sample a feasible POVM")


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return q


@pytest.fixture
def tetra():
    return platonic("tetrahedron")


@pytest.fixture
def rotsym3():
    return rotsym_planar(3)


@pytest.fixture
def antipodal():
    return QubitPOVM.from_arrays([0.5, 0.5], 1.0, [[0, 0, 1], [0, 0, -1]])
