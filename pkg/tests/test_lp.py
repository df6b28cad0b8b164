import numpy as np
import pytest
from scipy import stats

from papkit import (
    AvailabilityModel,
    DiscreteProblem,
    Grid,
    build_interim_prior,
    build_lp,
    check_monotonicity,
    check_size_control,
    discretize_gaussian,
    interim_expected_power,
    known_j_lr_test,
    optimal_pap,
    solve_lp,
    worst_case_completion,
)
from papkit.discretize import ModelError
from papkit.subsets import enumerate_subsets

from helpers import (
    enumerate_vertices_best,
    rule_power_by_summation,
    sec2_problem,
    twocell_problem,
)


class TestBuildLp:
    def test_counting_n1(self):
        prob = twocell_problem()
        lp = build_lp(prob, signal=0)
        # 2 t vars + 1 empty-set var; 1 size row + 2 monotonicity rows
        assert lp.nvars == 3
        assert lp.nrows == 3
        assert lp.senses == ["<="] * 3
        np.testing.assert_array_equal(lp.lb, 0.0)
        np.testing.assert_array_equal(lp.ub, 1.0)

    def test_counting_n2(self):
        g = 5
        prob = sec2_problem(cells=g)
        lp = build_lp(prob, signal=0)
        assert lp.nvars == g * g + 2 * g + 1
        assert lp.nrows == 1 + 3 * g * g

    def test_objective_is_prior_mass(self):
        prob = sec2_problem(cells=6)
        lp = build_lp(prob, signal=0)
        assert lp.objective.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(lp.objective >= 0.0)
        # the empty-set variable carries P(J = {})
        empties = [k for k, v in enumerate(lp.variables) if v.mask == 0]
        assert len(empties) == 1
        assert lp.objective[empties[0]] == pytest.approx(0.05, abs=1e-12)

    def test_unknown_signal(self):
        prob = twocell_problem()
        with pytest.raises(ModelError):
            build_lp(prob, signal="nope")


class TestSolveLp:
    def test_twocell_instance(self):
        prob = twocell_problem()
        lp = build_lp(prob, signal=0)
        sol = solve_lp(lp)
        assert sol.status == "optimal"
        assert sol.objective == pytest.approx(0.5, abs=1e-9)

    def test_alpha_near_zero_forces_zero(self):
        # alpha = 0 is outside the model; a strictly positive null table
        # with tiny alpha pins every t at (almost) zero anyway
        prob = twocell_problem(alpha=1e-12)
        lp = build_lp(prob, signal=0)
        sol = solve_lp(lp)
        assert sol.status == "optimal"
        assert sol.objective <= 1e-10

    @pytest.mark.parametrize("seed", range(10))
    def test_random_small_lps_match_enumeration(self, seed):
        rng = np.random.default_rng(200 + seed)
        nvars = int(rng.integers(2, 7))
        nrows = int(rng.integers(1, 4))
        a = rng.normal(size=(nrows, nvars))
        x0 = rng.uniform(0.2, 0.8, nvars)
        b = a @ x0 + rng.uniform(0.0, 0.5, nrows)
        c = rng.uniform(0.0, 1.0, nvars)
        from papkit.simplex import solve_simplex

        res = solve_simplex(c, a, ["<="] * nrows, b, np.zeros(nvars), np.ones(nvars))
        want = enumerate_vertices_best(c, a, ["<="] * nrows, b, np.zeros(nvars), np.ones(nvars))
        assert res.status == "optimal"
        assert res.objective == pytest.approx(want, abs=1e-9)


class TestOptimalPap:
    def test_twocell_rejects_high_cell(self):
        prob = twocell_problem()
        pap = optimal_pap(prob, signal=0)
        assert pap.power == pytest.approx(0.5, abs=1e-9)
        np.testing.assert_allclose(pap.rule.full_table(), [0.0, 1.0], atol=1e-9)
        # exhaustive check over the 2-cell polytope at its vertices
        lp = build_lp(prob, signal=0)
        want = enumerate_vertices_best(
            lp.objective, lp.dense_matrix(), lp.senses, lp.rhs, lp.lb, lp.ub
        )
        assert pap.power == pytest.approx(want, abs=1e-9)

    def test_prior_equal_to_null_gives_alpha(self):
        grid = Grid.regular(1, 8, -8, 8)
        null = discretize_gaussian([0.0], [[1.0]], grid).probs
        prior = build_interim_prior(
            [(1.0, null)], AvailabilityModel.degenerate(1, 1), grid
        )
        prob = DiscreteProblem(grid=grid, null_table=null, priors=(prior,), alpha=0.07)
        pap = optimal_pap(prob, signal=0)
        assert pap.power == pytest.approx(0.07, abs=1e-9)

    def test_dominates_conservative_completion(self):
        prob = sec2_problem(cells=10)
        grid = prob.grid
        z = stats.norm.ppf(0.95)
        m1, m2 = np.meshgrid(grid.midpoints[0], grid.midpoints[1], indexing="ij")
        conservative = worst_case_completion(((m1 + m2) / np.sqrt(2) > z).astype(float))
        pap = optimal_pap(prob, signal=0)
        cons_power = rule_power_by_summation(conservative, prob.prior(0))
        assert pap.power >= cons_power - 1e-9
        # and the returned rule is feasible
        assert check_monotonicity(pap.rule, prob, tol=0.0).passed
        assert check_size_control(pap.rule, prob).passed

    def test_completion_fixed_point(self):
        prob = sec2_problem(cells=6)
        pap = optimal_pap(prob, signal=0)
        again = worst_case_completion(pap.rule.full_table())
        for mask in enumerate_subsets(2):
            np.testing.assert_array_equal(pap.rule.table(mask), again.table(mask))

    def test_power_matches_completed_rule_power(self):
        prob = sec2_problem(cells=8)
        pap = optimal_pap(prob, signal=0)
        direct = rule_power_by_summation(pap.rule, prob.prior(0))
        assert direct == pytest.approx(pap.power, abs=1e-9)


class TestInterimPower:
    def test_constant_rules(self):
        prob = sec2_problem(cells=4)
        from papkit import TestRuleTable

        ones = TestRuleTable.constant((4, 4), 1.0)
        frac = TestRuleTable.constant((4, 4), 0.05)
        assert interim_expected_power(ones, prob.prior(0)) == pytest.approx(1.0, abs=1e-9)
        assert interim_expected_power(frac, prob.prior(0)) == pytest.approx(0.05, abs=1e-9)

    def test_conservative_matches_analytic_value(self):
        # completed sum test under atom theta = 0.3, p = (0.9, 0.5):
        # 0.45 * Phi(sqrt(2) * 0.3 - z) up to discretization error
        prob = sec2_problem(cells=64, theta=0.3, span=5.0)
        grid = prob.grid
        z = stats.norm.ppf(0.95)
        m1, m2 = np.meshgrid(grid.midpoints[0], grid.midpoints[1], indexing="ij")
        rule = worst_case_completion(((m1 + m2) / np.sqrt(2) > z).astype(float))
        got = interim_expected_power(rule, prob.prior(0))
        want = 0.45 * stats.norm.cdf(np.sqrt(2) * 0.3 - z)
        assert got == pytest.approx(want, abs=5e-3)
        oracle = rule_power_by_summation(rule, prob.prior(0))
        assert got == pytest.approx(oracle, abs=1e-12)


class TestKnownJLrTest:
    def test_matches_optimal_pap_on_twocell(self):
        prob = twocell_problem()
        rule = known_j_lr_test(prob, signal=0)
        pap = optimal_pap(prob, signal=0)
        got = interim_expected_power(rule, prob.prior(0))
        assert got == pytest.approx(pap.power, abs=1e-9)
        np.testing.assert_allclose(rule.table(0b1), pap.rule.table(0b1), atol=1e-9)

    def test_prior_equal_to_null_rejects_alpha_everywhere(self):
        grid = Grid.regular(1, 6, -8, 8)
        null = discretize_gaussian([0.0], [[1.0]], grid).probs
        prior = build_interim_prior(
            [(1.0, null)], AvailabilityModel.degenerate(1, 1), grid
        )
        prob = DiscreteProblem(grid=grid, null_table=null, priors=(prior,), alpha=0.05)
        rule = known_j_lr_test(prob, signal=0)
        np.testing.assert_allclose(rule.table(0b1), np.full(6, 0.05), atol=1e-9)
        size = float((rule.table(0b1) * null).sum())
        assert size == pytest.approx(0.05, abs=1e-12)

    def test_diagonal_prior_gives_sum_upper_set(self):
        # two iid statistics, prior atoms on the diagonal: the rejection
        # region is an upper set in x1 + x2
        grid = Grid.regular(2, 10, -6, 6)
        null = discretize_gaussian([0.0, 0.0], np.eye(2), grid).probs
        atoms = [
            (0.5, discretize_gaussian([0.6, 0.6], np.eye(2), grid).probs),
            (0.5, discretize_gaussian([1.2, 1.2], np.eye(2), grid).probs),
        ]
        prior = build_interim_prior(atoms, AvailabilityModel.degenerate(2, 0b11), grid)
        prob = DiscreteProblem(grid=grid, null_table=null, priors=(prior,), alpha=0.05)
        rule = known_j_lr_test(prob, signal=0)
        t = rule.full_table()
        m1, m2 = np.meshgrid(grid.midpoints[0], grid.midpoints[1], indexing="ij")
        sums = m1 + m2
        hard_reject = sums[t >= 1.0 - 1e-9]
        accept = sums[t <= 1e-9]
        assert hard_reject.min() > accept.max()
        size = float((t * null).sum())
        assert size == pytest.approx(0.05, abs=1e-9)

    def test_needs_degenerate_availability(self):
        prob = sec2_problem(cells=4)
        with pytest.raises(ModelError):
            known_j_lr_test(prob, signal=0)

    @pytest.mark.parametrize("seed", range(10))
    def test_random_degenerate_instances_match_lp(self, seed):
        rng = np.random.default_rng(300 + seed)
        n = 2
        cells = int(rng.integers(2, 5))
        grid = Grid.regular(n, cells, -8, 8)
        null = rng.random(grid.shape)
        null /= null.sum()
        atom = rng.random(grid.shape)
        atom /= atom.sum()
        known = int(rng.integers(1, 4))
        prior = build_interim_prior(
            [(1.0, atom)], AvailabilityModel.degenerate(n, known), grid
        )
        alpha = float(rng.uniform(0.02, 0.2))
        prob = DiscreteProblem(grid=grid, null_table=null, priors=(prior,), alpha=alpha)
        lr = known_j_lr_test(prob, signal=0)
        pap = optimal_pap(prob, signal=0)
        lr_power = interim_expected_power(lr, prob.prior(0))
        assert lr_power == pytest.approx(pap.power, abs=1e-9)


def active_constraint_rank(lp, sol, tol=1e-7):
    """Rank of the constraints binding at the solution (vertex check)."""
    a = lp.dense_matrix()
    active_rows = []
    resid = a @ sol.x - lp.rhs
    for i, sense in enumerate(lp.senses):
        if sense == "==" or abs(resid[i]) <= tol:
            active_rows.append(a[i])
    for j in range(lp.nvars):
        if abs(sol.x[j] - lp.lb[j]) <= tol or abs(sol.x[j] - lp.ub[j]) <= tol:
            row = np.zeros(lp.nvars)
            row[j] = 1.0
            active_rows.append(row)
    return np.linalg.matrix_rank(np.array(active_rows), tol=1e-9)


class TestVertexCertificate:
    def test_twocell_solution_is_a_vertex(self):
        prob = twocell_problem()
        lp = build_lp(prob, signal=0)
        sol = solve_lp(lp)
        assert active_constraint_rank(lp, sol) == lp.nvars

    def test_sec2_solution_is_a_vertex(self):
        prob = sec2_problem(cells=4)
        lp = build_lp(prob, signal=0)
        sol = solve_lp(lp)
        assert active_constraint_rank(lp, sol) == lp.nvars
