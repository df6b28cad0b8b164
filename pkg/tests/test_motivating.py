import numpy as np
import pytest
from scipy import stats

from papkit.motivating import MotivatingConfig, make_rule, power_curve


def sec2_config(**kw):
    base = dict(n=2, availability=[0.9, 0.5], alpha=0.05, reps=20_000, seed=3)
    base.update(kw)
    return MotivatingConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        MotivatingConfig(n=2, availability=[0.9], reps=20_000)
    with pytest.raises(ValueError):
        MotivatingConfig(n=2, availability=[0.9, 1.5], reps=20_000)
    with pytest.raises(ValueError):
        MotivatingConfig(n=2, availability=[0.9, 0.5], reps=100)


def test_unknown_kind():
    with pytest.raises(ValueError):
        make_rule("a6", sec2_config())


class TestRuleDecisions:
    def test_conservative_never_rejects_partial(self):
        cfg = sec2_config()
        rule = make_rule("a3", cfg)
        x = np.array([[5.0, 5.0]])
        assert not rule.reject(x, np.array([[True, False]]))[0]
        assert rule.reject(x, np.array([[True, True]]))[0]

    def test_naive_rejects_on_single_high_statistic(self):
        cfg = sec2_config()
        rule = make_rule("a2", cfg)
        x = np.array([[cfg.z + 1.0, -9.0]])
        j = np.array([[True, True]])
        assert rule.reject(x, j)[0]
        # hidden when unavailable
        assert not rule.reject(x, np.array([[False, True]]))[0]

    def test_naive_empty_set_never_rejects(self):
        cfg = sec2_config()
        rule = make_rule("a2", cfg)
        assert not rule.reject(np.array([[3.0, 3.0]]), np.array([[False, False]]))[0]

    def test_naive_best_response_matches_subset_enumeration(self):
        # prefix-of-sorted scan equals the max over all reported subsets
        cfg = MotivatingConfig(n=4, availability=[0.8] * 4, reps=10_000, seed=1)
        rule = make_rule("a2", cfg)
        rng = np.random.default_rng(0)
        x = rng.normal(size=(200, 4))
        j = rng.random((200, 4)) < 0.8
        got = rule.reject(x, j)
        z = cfg.z
        for r in range(200):
            best = -np.inf
            for mask in range(1, 16):
                stats_in = [i for i in range(4) if (mask >> i) & 1]
                if not all(j[r, i] for i in stats_in):
                    continue
                best = max(best, x[r, stats_in].sum() / np.sqrt(len(stats_in)))
            assert got[r] == (best > z)

    def test_pap_rule_uses_realized_set(self):
        cfg = sec2_config()
        rule = make_rule("a5", cfg)
        x = np.array([[2.0, 2.0], [2.0, -9.0], [0.0, 0.0]])
        j = np.array([[True, True], [True, False], [False, False]])
        got = rule.reject(x, j)
        assert got[0]          # (2+2)/sqrt(2) = 2.83 > z
        assert got[1]          # registered {1}: 2.0 > z
        assert not got[2]      # nothing registered

    def test_a5_matches_a1_when_everything_observed(self):
        cfg = sec2_config()
        a1 = make_rule("a1", cfg)
        a5 = make_rule("a5", cfg)
        rng = np.random.default_rng(4)
        x = rng.normal(size=(1000, 2))
        j = np.ones((1000, 2), dtype=bool)
        np.testing.assert_array_equal(a1.reject(x, j), a5.reject(x, j))

    def test_a4_tracks_configured_statistic(self):
        cfg = sec2_config()
        rule = make_rule("a4", cfg, single_statistic=1)
        x = np.array([[5.0, 0.0], [0.0, 5.0]])
        j = np.ones((2, 2), dtype=bool)
        got = rule.reject(x, j)
        assert not got[0] and got[1]


class TestAnalyticFormulas:
    def test_a1_size_exact(self):
        cfg = sec2_config()
        assert make_rule("a1", cfg).analytic_power(0.0) == pytest.approx(0.05)

    def test_a5_size_at_zero(self):
        # sum over nonempty sets of P(J) * alpha = alpha * (1 - P(empty))
        cfg = sec2_config()
        got = make_rule("a5", cfg).analytic_power(0.0)
        assert got == pytest.approx(0.05 * (1 - 0.05), abs=1e-12)

    def test_a3_plateau_is_full_availability_probability(self):
        cfg = sec2_config()
        got = make_rule("a3", cfg).analytic_power(50.0)
        assert got == pytest.approx(0.45, abs=1e-9)

    def test_a4_formula(self):
        cfg = sec2_config()
        want = 0.9 * stats.norm.cdf(0.7 - cfg.z)
        assert make_rule("a4", cfg).analytic_power(0.7) == pytest.approx(want)


class TestPowerCurve:
    def test_analytic_agrees_with_mc_within_3_se(self):
        cfg = sec2_config(reps=40_000, theta_grid=np.linspace(0.0, 3.0, 7))
        curve = power_curve(("a1", "a3", "a4", "a5"), cfg)
        mc_se = np.sqrt(np.maximum(curve.mc * (1 - curve.mc), 1e-12) / cfg.reps)
        assert np.all(np.abs(curve.power - curve.mc) <= 3 * mc_se + 1e-12)

    def test_size_control_at_null(self):
        cfg = sec2_config(reps=40_000, theta_grid=np.array([0.0]))
        curve = power_curve(("a1", "a3", "a4", "a5"), cfg)
        for kind in ("a1", "a3", "a4", "a5"):
            k = curve.row(kind)
            assert curve.mc[k, 0] <= 0.05 + 3 * curve.se[k, 0]

    def test_naive_exceeds_size(self):
        cfg = sec2_config(reps=40_000, theta_grid=np.array([0.0]))
        curve = power_curve(("a2",), cfg)
        se = np.sqrt(curve.mc[0, 0] * (1 - curve.mc[0, 0]) / cfg.reps)
        assert curve.mc[0, 0] > 0.05 + 3 * se

    def test_dominance_a3_a4_below_a5(self):
        cfg = sec2_config(reps=40_000, theta_grid=np.linspace(0.25, 3.0, 6))
        curve = power_curve(("a3", "a4", "a5"), cfg)
        se = np.sqrt(np.maximum(curve.power * (1 - curve.power), 1e-12) / cfg.reps)
        a3, a4, a5 = (curve.row(k) for k in ("a3", "a4", "a5"))
        assert np.all(curve.power[a3] <= curve.power[a5] + 3 * se[a5])
        assert np.all(curve.power[a4] <= curve.power[a5] + 3 * se[a5])

    def test_deterministic_for_seed(self):
        cfg = sec2_config(reps=20_000)
        c1 = power_curve(("a1", "a2"), cfg)
        c2 = power_curve(("a1", "a2"), cfg)
        np.testing.assert_array_equal(c1.mc, c2.mc)
        np.testing.assert_array_equal(c1.power, c2.power)

    def test_empty_theta_grid_rejected(self):
        cfg = sec2_config(theta_grid=np.array([]))
        with pytest.raises(ValueError):
            power_curve(("a1",), cfg)

    def test_csv_rows_shape(self):
        cfg = sec2_config(reps=20_000, theta_grid=np.array([0.0, 1.0]))
        curve = power_curve(("a1", "a2"), cfg)
        rows = list(curve.csv_rows())
        assert len(rows) == 4
        assert rows[0][1] == "a1"
