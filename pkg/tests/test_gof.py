import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from lorenzkit.errors import DomainError, ValidationError
from lorenzkit.gof import full_report, iim, ks_two_sample, mae, mas, mse, r_squared

ACTUAL = np.array([0.0360, 0.0510, 0.0620, 0.0720, 0.0830, 0.0940, 0.1070, 0.1210, 0.1440, 0.2300])
ESTIMATE = np.array([0.0349, 0.0487, 0.0609, 0.0727, 0.0843, 0.0964, 0.1094, 0.1245, 0.1454, 0.2229])

shares = st.lists(st.floats(0.01, 1.0), min_size=10, max_size=10).map(lambda v: np.array(v) / sum(v))


class TestScalarStatistics:
    def test_malta_table_values(self):
        assert r_squared(ACTUAL, ESTIMATE) == pytest.approx(0.9970, abs=5e-5)
        assert mse(ACTUAL, ESTIMATE) == pytest.approx(0.00001, abs=5e-6)
        assert mae(ACTUAL, ESTIMATE) == pytest.approx(0.0023, abs=5e-5)
        assert mas(ACTUAL, ESTIMATE) == pytest.approx(0.0071, abs=5e-5)
        # IIM is sensitive to the 4-decimal rounding of the estimates
        assert iim(ACTUAL, ESTIMATE) == pytest.approx(0.0003, abs=2e-4)

    def test_perfect_fit(self):
        rep = full_report(ACTUAL, ACTUAL)
        assert rep.r_squared == 1.0
        assert rep.mse == rep.mae == rep.mas == rep.iim == 0.0
        assert rep.ks_d == 0.0 and rep.ks_p == 1.0

    def test_against_numpy_definitions(self):
        rng = np.random.default_rng(7)
        a, e = rng.random(10), rng.random(10)
        assert mse(a, e) == pytest.approx(np.mean((a - e) ** 2))
        assert r_squared(a, e) == pytest.approx(1 - np.sum((a - e) ** 2) / np.sum((a - a.mean()) ** 2))

    def test_constant_actual_values(self):
        with pytest.raises(DomainError):
            r_squared([0.1] * 10, ESTIMATE)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            mse(ACTUAL, ESTIMATE[:9])

    def test_empty(self):
        with pytest.raises(ValidationError):
            mae([], [])

    def test_iim_needs_positive_values(self):
        with pytest.raises(DomainError):
            iim([0.0, 1.0], [0.5, 0.5])

    @settings(max_examples=100, deadline=None)
    @given(shares, shares)
    def test_iim_non_negative(self, a, e):
        assert iim(a, e) >= -1e-15


class TestKolmogorovSmirnov:
    def test_statistic_matches_scipy(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a, b = rng.random(10), rng.random(12)
            d, _ = ks_two_sample(a, b)
            assert d == pytest.approx(stats.ks_2samp(a, b).statistic, abs=1e-12)

    def test_ties(self):
        a = [0.1, 0.2, 0.2, 0.3]
        b = [0.2, 0.2, 0.4]
        assert ks_two_sample(a, b)[0] == pytest.approx(stats.ks_2samp(a, b).statistic)

    def test_published_d_and_p(self):
        actual = [0.0074, 0.0178, 0.0263, 0.0353, 0.0459, 0.0583, 0.0759, 0.1026, 0.1535, 0.4769]
        est = [0.0059, 0.0078, 0.0128, 0.0228, 0.0396, 0.0649, 0.1006, 0.1489, 0.2142, 0.3826]
        d, p = ks_two_sample(actual, est)
        assert d == pytest.approx(0.2)
        assert p == pytest.approx(0.975, abs=1e-3)

    def test_empty_sample(self):
        with pytest.raises(ValidationError):
            ks_two_sample([], [1.0])


class TestReport:
    def test_as_dict_fields(self):
        d = full_report(ACTUAL, ESTIMATE).as_dict()
        assert set(d) == {"r_squared", "mse", "mae", "mas", "iim", "ks_d", "ks_p", "method"}
        assert d["method"] == "asymptotic-stephens"
