import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from compatradius import (
    SearchConfig,
    compat_radius,
    maximize_radius,
    planar_radius_upper,
    sample_povm,
    simplex_radius_cap,
    validate_povm,
)
from compatradius.errors import OutOfRange


@pytest.mark.parametrize("n, planar", [(4, True), (5, False)])
def test_deterministic_in_seed(n, planar):
    cfg = SearchConfig(n, planar, samples=300, refine_iters=20, seed=7)
    a, b = maximize_radius(cfg), maximize_radius(cfg)
    assert a.best_radius == b.best_radius
    assert np.array_equal(a.best_povm.directions, b.best_povm.directions)
    assert a.history == b.history


def test_worker_count_does_not_change_result(monkeypatch):
    cfg = SearchConfig(5, False, samples=600, refine_iters=10, seed=1)
    monkeypatch.setenv("COMPAT_THREADS", "1")
    one = maximize_radius(cfg)
    monkeypatch.setenv("COMPAT_THREADS", "3")
    three = maximize_radius(cfg)
    assert one.best_radius == three.best_radius and one.history == three.history


@pytest.mark.parametrize("n, planar", [(3, True), (4, False), (6, True), (6, False)])
def test_history_is_monotone_and_consistent(n, planar):
    res = maximize_radius(SearchConfig(n, planar, samples=250, refine_iters=30, seed=2))
    vals = [v for _, v in res.history]
    assert [t for t, _ in res.history] == list(range(31))
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert res.best_radius == pytest.approx(vals[-1], abs=1e-12)
    assert res.best_radius == pytest.approx(compat_radius(res.best_povm).value, abs=1e-12)
    assert validate_povm(res.best_povm, 1e-9).valid


@pytest.mark.parametrize("n", [3, 5, 8])
def test_planar_search_respects_cap(n):
    res = maximize_radius(SearchConfig(n, True, samples=250, refine_iters=40, seed=0))
    assert res.best_radius <= planar_radius_upper(n) + 1e-9


@pytest.mark.parametrize("n, planar", [(3, True), (4, False)])
def test_simplex_searches_approach_cap(n, planar):
    res = maximize_radius(SearchConfig(n, planar, samples=250, refine_iters=100, seed=0))
    cap = simplex_radius_cap(n, planar)
    assert cap - 1e-2 <= res.best_radius <= cap + 1e-9


def test_general_three_outcomes_are_stuck_at_zero():
    res = maximize_radius(SearchConfig(3, False, samples=100, refine_iters=10))
    assert res.best_radius == pytest.approx(0.0, abs=1e-9)


def test_budget_stops_refinement():
    res = maximize_radius(SearchConfig(6, False, samples=250, refine_iters=10**6, time_budget_ms=50))
    assert res.budget_exhausted
    assert res.best_radius > 0


@pytest.mark.parametrize("kwargs", [{"n": 2}, {"n": 4, "samples": 0}, {"n": 4, "refine_iters": -1}])
def test_config_validation(kwargs):
    with pytest.raises(OutOfRange):
        SearchConfig(**kwargs)


@given(st.integers(3, 9), st.booleans(), st.integers(0, 2**32 - 1))
def test_sample_povm_is_feasible(n, planar, seed):
    povm = sample_povm(n, planar, seed)
    assert len(povm) <= n and povm.planar == planar
    assert validate_povm(povm, 1e-9).valid
    assert np.all(povm.eta == 1.0)


def test_sample_povm_is_seeded():
    a, b = sample_povm(6, False, 11), sample_povm(6, False, 11)
    assert np.array_equal(a.directions, b.directions) and np.array_equal(a.alpha, b.alpha)


def test_result_serializes():
    res = maximize_radius(SearchConfig(4, True, samples=10, refine_iters=2))
    d = res.to_dict()
    assert d["best_radius"] == res.best_radius and len(d["history"]) == 3
