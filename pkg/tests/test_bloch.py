import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from compatradius import (
    QubitPOVM,
    compat_radius,
    platonic,
    rank1_reduce,
    symmetric_extension,
    validate_povm,
    werner_assemblage,
)
from compatradius.bloch import Assemblage, QubitEffect, load_povm, rotation_matrix, unit_vector
from compatradius.errors import DegeneratePOVM, InvalidPOVM, OutOfRange

from conftest import random_povm

PAULI = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def werner_oracle(r, n, outcome):
    """Bob's conditional state by explicit 4x4 partial trace; returns (weight, bloch)."""
    psi = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    rho = r * np.outer(psi, psi.conj()) + (1 - r) * np.eye(4) / 4
    sign = 1 if outcome == "+" else -1
    M = 0.5 * (np.eye(2) + sign * sum(c * s for c, s in zip(n, PAULI)))
    sigma = np.einsum("abac->bc", (np.kron(M, np.eye(2)) @ rho).reshape(2, 2, 2, 2))
    weight = np.trace(sigma).real
    bloch = np.array([np.trace(sigma @ s).real for s in PAULI]) / weight
    return weight, bloch


def test_tetrahedron_is_valid(tetra):
    report = validate_povm(tetra, 1e-9)
    assert report.valid and report.violations == ()


def test_weight_sum_violation():
    povm = QubitPOVM.from_arrays([0.5, 0.4], 1.0, [[0, 0, 1], [0, 0, -1]])
    report = validate_povm(povm, 1e-9)
    assert not report.valid
    assert report.magnitude("weight-sum") == pytest.approx(0.1)


def test_completion_violation():
    povm = QubitPOVM.from_arrays([0.5, 0.5], 1.0, [[0, 0, 1], [0, 0, 1]])
    assert validate_povm(povm, 1e-9).magnitude("completion") == pytest.approx(1.0)


def test_planarity_violation():
    dirs = [[1, 0, 0], [-0.5, 0.1, 0.8], [-0.5, -0.1, -0.8]]
    dirs = [np.array(d) / np.linalg.norm(d) for d in dirs]
    povm = QubitPOVM.from_arrays([1 / 3] * 3, 1.0, dirs, planar=True)
    assert validate_povm(povm, 1e-9).magnitude("planarity") > 0.09


def test_empty_povm_reported():
    assert not validate_povm(QubitPOVM((), False), 1e-9).valid


@pytest.mark.parametrize("bad", [[1.0, 0.0, 1e-4], [2.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
def test_unit_vector_rejects_non_unit(bad):
    with pytest.raises(OutOfRange):
        unit_vector(bad)


def test_unit_vector_renormalizes_near_unit():
    v = unit_vector([1.0 + 5e-10, 0.0, 0.0])
    assert v == (1.0, 0.0, 0.0)


@pytest.mark.parametrize("field, value, name", [("alpha", 1.5, "alpha[0]"), ("eta", -0.1, "eta[0]")])
def test_effect_range_violations_reported(field, value, name):
    kwargs = {"alpha": [0.5, 0.5], "eta": [0.5, 0.5], "directions": [[0, 0, 1], [0, 0, -1]]}
    kwargs[field] = [value, 0.5]
    report = validate_povm(QubitPOVM.from_arrays(**kwargs), 1e-9)
    assert report.magnitude(name) == pytest.approx(abs(value) if value < 0 else value - 1)


def test_effect_normalizes_direction():
    assert QubitEffect(0.5, 1.0, (0.0, 0.0, 1.0 + 1e-10)).n == (0.0, 0.0, 1.0)


def test_tiny_weights_are_dropped():
    povm = QubitPOVM.from_arrays([0.5, 0.5, 1e-14], 1.0, [[0, 0, 1], [0, 0, -1], [1, 0, 0]])
    assert len(povm) == 2


def test_json_round_trip(tmp_path, tetra):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(tetra.to_dict()), encoding="utf-8")
    again = load_povm(path)
    assert np.array_equal(again.directions, tetra.directions)
    assert np.array_equal(again.alpha, tetra.alpha)


def test_symmetric_extension_of_tetrahedron_is_cube(tetra):
    ext = symmetric_extension(tetra)
    cube = platonic("cube")
    key = lambda d: sorted(map(tuple, np.round(d, 12)))
    assert key(ext.directions) == key(cube.directions)
    assert np.allclose(ext.alpha, 1 / 8)


def test_symmetric_extension_of_maximally_mixed():
    povm = QubitPOVM.from_arrays([1.0], 0.0, [[0, 0, 1]])
    ext = symmetric_extension(povm)
    assert np.allclose(ext.alpha, 0.5) and np.allclose(ext.eta, 0.0)
    assert np.allclose(ext.directions, [[0, 0, 1], [0, 0, -1]])


def test_symmetric_extension_keeps_symmetric_radius():
    pair = QubitPOVM.from_arrays([0.5, 0.5], 1.0, [[0, 0, 1], [0, 0, -1]], planar=True)
    ext = symmetric_extension(pair)
    assert len(ext) == 4 and np.allclose(ext.alpha, 0.25)
    assert compat_radius(ext).value == pytest.approx(compat_radius(pair).value, abs=1e-12)


def test_symmetric_extension_rejects_invalid():
    with pytest.raises(InvalidPOVM):
        symmetric_extension(QubitPOVM.from_arrays([0.5, 0.5], 1.0, [[0, 0, 1], [0, 0, 1]]))


def test_rank1_reduce_identity_on_projective(tetra):
    out = rank1_reduce(tetra)
    assert np.array_equal(out.alpha, tetra.alpha) and np.array_equal(out.directions, tetra.directions)


def test_rank1_reduce_hand_example():
    povm = QubitPOVM.from_arrays([0.4, 0.2, 0.4], [1.0, 0.0, 1.0], [[1, 0, 0], [0, 0, 1], [-1, 0, 0]])
    out = rank1_reduce(povm)
    assert np.allclose(out.alpha, [0.5, 0.5])
    assert np.allclose(out.eta, 1.0)
    assert np.allclose(out.directions, [[1, 0, 0], [-1, 0, 0]])


def test_rank1_reduce_degenerate():
    povm = QubitPOVM.from_arrays([0.5, 0.5], 0.0, [[0, 0, 1], [1, 0, 0]])
    with pytest.raises(DegeneratePOVM):
        rank1_reduce(povm)


@given(st.integers(0, 2**32 - 1), st.integers(3, 8), st.booleans())
def test_rank1_reduce_output_valid(seed, n, planar):
    povm = random_povm(np.random.default_rng(seed), n, planar, rank1=False)
    assert validate_povm(rank1_reduce(povm), 1e-9).valid


@given(st.integers(0, 2**32 - 1), st.integers(3, 6))
def test_symmetric_extension_twice(seed, n):
    povm = random_povm(np.random.default_rng(seed), n)
    once = symmetric_extension(povm)
    twice = symmetric_extension(once)
    assert len(twice) == 4 * len(povm)
    assert compat_radius(twice).value == pytest.approx(compat_radius(once).value, abs=1e-9)


def test_werner_r0_is_maximally_mixed():
    a = werner_assemblage(0.0, [[0.3, 0.4, np.sqrt(0.75)]])
    for outcome in "+-":
        w, b = a.entries[(outcome, 0)]
        assert w == 0.5 and np.allclose(b, 0)


@pytest.mark.parametrize(
    "r, n",
    [(1.0, (0, 0, 1)), (0.5, (1, 0, 0)), (0.37, (0.6, 0.0, 0.8)), (0.9, (0.48, 0.6, 0.64))],
)
def test_werner_matches_partial_trace(r, n):
    a = werner_assemblage(r, [n])
    for outcome in "+-":
        w, b = a.entries[(outcome, 0)]
        w_ref, b_ref = werner_oracle(r, np.asarray(n, dtype=float), outcome)
        assert w == pytest.approx(w_ref, abs=1e-12)
        assert np.allclose(b, b_ref, atol=1e-12)


def test_werner_singlet_z():
    a = werner_assemblage(1.0, [[0, 0, 1]])
    assert np.allclose(a.entries[("+", 0)][1], [0, 0, -1])
    assert np.allclose(a.entries[("-", 0)][1], [0, 0, 1])


@given(st.floats(0, 1), st.integers(0, 1000))
def test_werner_no_signalling(r, seed):
    s = np.random.default_rng(seed).normal(size=(5, 3))
    a = werner_assemblage(r, s / np.linalg.norm(s, axis=1, keepdims=True))
    for x in range(5):
        (wp, bp), (wm, bm) = a.entries[("+", x)], a.entries[("-", x)]
        assert wp + wm == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(wp * bp + wm * bm, 0.0, atol=1e-12)


@pytest.mark.parametrize("r", [-0.01, 1.01])
def test_werner_out_of_range(r):
    with pytest.raises(OutOfRange):
        werner_assemblage(r, [[0, 0, 1]])


def test_assemblage_round_trip():
    a = werner_assemblage(0.3, [[0, 0, 1], [1, 0, 0]])
    b = Assemblage.from_dict(json.loads(json.dumps(a.to_dict())))
    assert b.entries.keys() == a.entries.keys()
    for k in a.entries:
        assert np.allclose(a.entries[k][1], b.entries[k][1])


def test_rotation_matrix_is_orthogonal():
    R = rotation_matrix([1, 2, 3], 0.7)
    assert np.allclose(R @ R.T, np.eye(3)) and np.linalg.det(R) == pytest.approx(1.0)
