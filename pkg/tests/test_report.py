import pytest

from lorenzkit.dataio import GroupedDistribution, builtin_dataset
from lorenzkit.report import best_tail, decile_rows, run_fit, run_simple
from lorenzkit.simple import TailShareObservation


@pytest.fixture(scope="module")
def usa():
    return builtin_dataset()[2]


class TestBestTail:
    def test_ten_percent_reads_deciles(self, usa):
        obs = best_tail(usa, 0.1)
        assert (obs.bottom_share, obs.top_share) == (0.0179, 0.3046)
        assert obs.published_ratio is None

    def test_five_percent_uses_published_ratio(self, usa):
        assert best_tail(usa, 0.05).ratio == 0.029

    def test_missing_tail(self):
        rec = GroupedDistribution("X", 2000, 0.3, None, (TailShareObservation(0.1, 0.03, 0.25),))
        with pytest.raises(LookupError):
            best_tail(rec, 0.05)


class TestRuns:
    def test_simple_without_deciles_has_no_gof(self):
        rec = GroupedDistribution("X", 2000, 0.3, None, (TailShareObservation(0.1, 0.03, 0.25),))
        run = run_simple(rec)
        assert run.gof is None
        assert run.shares.sum() == pytest.approx(1.0)

    def test_explicit_observation(self, usa):
        run = run_simple(usa, observation=TailShareObservation(0.05, 0.006, 0.196))
        assert run.estimate.params.weight == pytest.approx(0.1827, abs=1e-4)

    def test_fit_needs_deciles(self):
        rec = GroupedDistribution("X", 2000, 0.3, None, (TailShareObservation(0.1, 0.03, 0.25),))
        with pytest.raises(LookupError):
            run_fit(rec)

    def test_unknown_model(self, usa):
        with pytest.raises(ValueError):
            run_fit(usa, "lognormal")


def test_decile_rows_layout():
    rows = decile_rows({"a": [0.1] * 10})
    assert [r["decile"] for r in rows] == [f"D{i}" for i in range(1, 11)]
    assert rows[0] == {"decile": "D1", "a": 0.1}
