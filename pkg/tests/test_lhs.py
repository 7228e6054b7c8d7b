import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from compatradius import (
    LHSModel,
    build_lhs_werner,
    compat_radius,
    decompose_child,
    planar_response,
    platonic,
    rotsym_planar,
    rotsym_planar_radius_closed_form,
    verify_lhs,
    werner_assemblage,
)
from compatradius.errors import Infeasible, OutOfRange, ShapeMismatch
from compatradius.lhs import continuous_planar_response, lhs_is_normalized, min_violation

from conftest import random_povm


def unit_settings(seed, count):
    s = np.random.default_rng(seed).normal(size=(count, 3))
    return s / np.linalg.norm(s, axis=1, keepdims=True)


@pytest.mark.parametrize("target", [[0, 0, 0], [0, 0, 0.3], [0.1, -0.2, 0.2]])
def test_decompose_inside_region(tetra, target):
    dec = decompose_child(tetra, target)
    assert np.all((dec.q >= 0) & (dec.q <= 1))
    assert dec.residual(tetra) <= 1e-12


def test_decompose_zero_target_is_half(tetra):
    q = decompose_child(tetra, [0, 0, 0]).q
    assert np.dot(q, tetra.alpha) == pytest.approx(0.5, abs=1e-14)


def test_decompose_outside_region(tetra):
    with pytest.raises(Infeasible):
        decompose_child(tetra, [0, 0, 0.9])


def test_decompose_rejects_long_target(tetra):
    with pytest.raises(OutOfRange):
        decompose_child(tetra, [0, 0, 1.1])


@pytest.mark.parametrize("kind", ["tetrahedron", "cube", "icosahedron"])
def test_violation_jumps_across_the_radius(kind):
    povm = platonic(kind)
    res = compat_radius(povm)
    c = np.asarray(res.witness_c)
    inside, _ = min_violation(povm, (res.value - 1e-9) * c)
    outside, _ = min_violation(povm, (res.value + 1e-6) * c)
    assert inside <= 1e-12 and outside > 1e-8


@given(st.integers(0, 2**32 - 1), st.integers(4, 8))
def test_every_direction_reachable_at_radius(seed, n):
    rng = np.random.default_rng(seed)
    povm = random_povm(rng, n)
    r = compat_radius(povm).value
    d = rng.normal(size=3)
    dec = decompose_child(povm, (r - 1e-9) * d / np.linalg.norm(d))
    assert dec.residual(povm) <= 1e-10


@pytest.mark.parametrize("n", range(3, 33))
def test_planar_response_on_dense_grid(n):
    povm = rotsym_planar(n)
    R = rotsym_planar_radius_closed_form(n)
    for theta in np.linspace(-math.pi, math.pi, 401):
        q = planar_response(n, theta)
        assert np.all((q >= 0) & (q <= 1))
        assert np.dot(q, povm.alpha) == pytest.approx(0.5, abs=1e-12)
        got = 2 * (q * povm.alpha) @ povm.vectors
        assert np.allclose(got, R * np.array([math.cos(theta), 0, math.sin(theta)]), atol=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.4, math.pi / 3, 2.5, -1.0])
def test_continuous_response_reaches_two_over_pi(theta):
    # uniform hidden directions psi on the circle; the child Bloch vector is
    # 2 * E[q(psi) n(psi)]
    f = lambda psi, comp: continuous_planar_response(theta, psi) * comp(psi) / math.pi
    edges = [theta - math.pi / 2, theta + math.pi / 2]
    pts = [(e + math.pi) % (2 * math.pi) - math.pi for e in edges]
    x, _ = quad(f, -math.pi, math.pi, args=(math.cos,), points=pts, epsabs=1e-13)
    z, _ = quad(f, -math.pi, math.pi, args=(math.sin,), points=pts, epsabs=1e-13)
    assert math.hypot(x, z) == pytest.approx(2 / math.pi, abs=1e-6)
    assert math.atan2(z, x) == pytest.approx(theta, abs=1e-9)


def test_planar_response_tends_to_continuous_limit():
    n = 4001
    theta = 0.3
    q = planar_response(n, theta)
    psi = 2 * math.pi * np.arange(1, n + 1) / n
    ref = continuous_planar_response(theta, psi)
    assert np.mean(np.abs(q - ref)) < 1e-3


@pytest.mark.parametrize("theta", [math.nan, math.inf])
def test_planar_response_rejects_non_finite(theta):
    with pytest.raises(OutOfRange):
        planar_response(5, theta)


@pytest.mark.parametrize("parent", ["tetrahedron", "rotsym5", "icosahedron"])
def test_build_and_verify(parent):
    povm = platonic(parent) if parent != "rotsym5" else rotsym_planar(5)
    r = compat_radius(povm).value
    settings = unit_settings(4, 50)
    if povm.planar:
        settings[:, 1] = 0.0
        settings /= np.linalg.norm(settings, axis=1, keepdims=True)
    model = build_lhs_werner(povm, r, settings)
    ok, dev = verify_lhs(model, werner_assemblage(r, settings))
    assert ok and dev <= 1e-9
    assert lhs_is_normalized(model)


def test_model_fails_for_different_state(tetra):
    settings = unit_settings(0, 20)
    model = build_lhs_werner(tetra, 0.3, settings)
    ok, dev = verify_lhs(model, werner_assemblage(0.2, settings))
    assert not ok and dev > 1e-3


def test_build_above_radius_raises(tetra):
    with pytest.raises(Infeasible):
        build_lhs_werner(tetra, 0.34, [[0, 0, 1], compat_radius(tetra).witness_c])


def test_empty_settings(tetra):
    model = build_lhs_werner(tetra, 0.2, np.empty((0, 3)))
    assert model.response.shape == (2, 0, 4)
    assert verify_lhs(model, werner_assemblage(0.2, np.empty((0, 3)))) == (True, 0.0)


def test_shape_mismatch(tetra):
    model = build_lhs_werner(tetra, 0.2, unit_settings(1, 3))
    with pytest.raises(ShapeMismatch):
        verify_lhs(model, werner_assemblage(0.2, unit_settings(1, 4)))


@pytest.mark.parametrize("r", [-0.1, 1.2])
def test_build_rejects_bad_r(tetra, r):
    with pytest.raises(OutOfRange):
        build_lhs_werner(tetra, r, [[0, 0, 1]])


def test_model_round_trip(tetra):
    model = build_lhs_werner(tetra, 0.25, unit_settings(2, 5))
    again = LHSModel.from_dict(model.to_dict())
    assert np.array_equal(again.response, model.response)
    assert again.response_of("-", 3, 2) == model.response_of("-", 3, 2)
