import numpy as np
import pytest

from papkit.simplex import solve_simplex

from helpers import enumerate_vertices_best


def test_single_variable():
    # maximize 0.5 t s.t. 0.05 t <= 0.05, t in [0, 1]
    res = solve_simplex([0.5], [[0.05]], ["<="], [0.05], [0.0], [1.0])
    assert res.status == "optimal"
    assert res.x[0] == pytest.approx(1.0)
    assert res.objective == pytest.approx(0.5)


def test_binding_constraint():
    res = solve_simplex([1.0], [[0.5]], ["<="], [0.2], [0.0], [1.0])
    assert res.status == "optimal"
    assert res.x[0] == pytest.approx(0.4)


def test_equality_constraint():
    # maximize x1 with x1 + x2 == 1
    res = solve_simplex([1.0, 0.0], [[1.0, 1.0]], ["=="], [1.0], [0.0, 0.0], [1.0, 1.0])
    assert res.status == "optimal"
    assert res.x[0] == pytest.approx(1.0)
    assert res.x[1] == pytest.approx(0.0)


def test_negative_lower_bounds():
    # maximize x1 - x2, box [-2, 3] x [-1, 4], x1 + x2 <= 2
    res = solve_simplex(
        [1.0, -1.0], [[1.0, 1.0]], ["<="], [2.0], [-2.0, -1.0], [3.0, 4.0]
    )
    assert res.status == "optimal"
    assert res.objective == pytest.approx(4.0)  # x = (3, -1)


def test_infeasible_detected():
    res = solve_simplex(
        [1.0], [[1.0], [-1.0]], ["<=", "<="], [0.2, -0.5], [0.0], [1.0]
    )
    assert res.status == "infeasible"


def test_phase1_equality_away_from_origin():
    # x1 + x2 == 1.5 is infeasible at the all-lower start
    res = solve_simplex(
        [1.0, 2.0], [[1.0, 1.0]], ["=="], [1.5], [0.0, 0.0], [1.0, 1.0]
    )
    assert res.status == "optimal"
    assert res.objective == pytest.approx(0.5 + 2.0)  # x = (0.5, 1)


def test_unbounded_detected():
    res = solve_simplex([1.0], np.zeros((1, 1)), ["<="], [1.0], [0.0], [np.inf])
    assert res.status == "unbounded"


def test_degenerate_ties_terminate():
    # several redundant constraints force degenerate pivots
    a = [[1.0, 0.0], [1.0, 0.0], [1.0, 1.0]]
    res = solve_simplex([1.0, 1.0], a, ["<="] * 3, [0.0, 0.0, 1.0], [0.0, 0.0], [1.0, 1.0])
    assert res.status == "optimal"
    assert res.objective == pytest.approx(1.0)


def test_vertex_certificate_shape():
    res = solve_simplex([0.5], [[0.05]], ["<="], [0.05], [0.0], [1.0])
    # one basic variable per row; actives = nonbasic bounds + binding rows
    assert len(res.basis) == 1


def random_feasible_instance(rng, nvars, nrows):
    a = rng.normal(size=(nrows, nvars))
    senses = ["<="] * nrows
    # keep the box feasible: rhs at least the row value at an interior point
    x0 = rng.uniform(0.2, 0.8, nvars)
    b = a @ x0 + rng.uniform(0.0, 1.0, nrows)
    c = rng.normal(size=nvars)
    return c, a, senses, b, np.zeros(nvars), np.ones(nvars)


@pytest.mark.parametrize("seed", range(12))
def test_random_instances_match_vertex_enumeration(seed):
    rng = np.random.default_rng(seed)
    nvars = int(rng.integers(2, 5))
    nrows = int(rng.integers(1, 5))
    c, a, senses, b, lb, ub = random_feasible_instance(rng, nvars, nrows)
    res = solve_simplex(c, a, senses, b, lb, ub)
    assert res.status == "optimal"
    want = enumerate_vertices_best(c, a, senses, b, lb, ub)
    assert res.objective == pytest.approx(want, abs=1e-9)
    # feasibility of the returned point
    assert np.all(a @ res.x <= b + 1e-9)
    assert np.all(res.x >= lb - 1e-9) and np.all(res.x <= ub + 1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_random_instances_with_equalities(seed):
    rng = np.random.default_rng(100 + seed)
    nvars = int(rng.integers(3, 6))
    a_eq = rng.normal(size=(1, nvars))
    x0 = rng.uniform(0.2, 0.8, nvars)
    b_eq = a_eq @ x0
    a_ub = rng.normal(size=(2, nvars))
    b_ub = a_ub @ x0 + rng.uniform(0.1, 1.0, 2)
    a = np.vstack([a_eq, a_ub])
    b = np.concatenate([b_eq, b_ub])
    senses = ["=="] + ["<="] * 2
    c = rng.normal(size=nvars)
    res = solve_simplex(c, a, senses, b, np.zeros(nvars), np.ones(nvars))
    assert res.status == "optimal"
    want = enumerate_vertices_best(c, a, senses, b, np.zeros(nvars), np.ones(nvars))
    assert res.objective == pytest.approx(want, abs=1e-9)
    assert abs(a_eq @ res.x - b_eq) < 1e-9


def test_deterministic_across_runs():
    rng = np.random.default_rng(5)
    c, a, senses, b, lb, ub = random_feasible_instance(rng, 4, 3)
    r1 = solve_simplex(c, a, senses, b, lb, ub)
    r2 = solve_simplex(c, a, senses, b, lb, ub)
    np.testing.assert_array_equal(r1.x, r2.x)
    assert r1.iterations == r2.iterations
    np.testing.assert_array_equal(r1.basis, r2.basis)
