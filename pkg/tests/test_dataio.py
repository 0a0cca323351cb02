import csv
import io
import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorenzkit.dataio import (
    GroupedDistribution,
    builtin_dataset,
    format_number,
    parse_grouped_csv,
    write_grouped_csv,
    write_report_csv,
)
from lorenzkit.errors import ValidationError
from lorenzkit.simple import TailShareObservation

HEADER = "country,year,gini,d1,d2,d3,d4,d5,d6,d7,d8,d9,d10,bottom10,top10\n"
USA_ROW = "USA,2016,0.411,0.0179,0.0344,0.0457,0.0572,0.0693,0.0832,0.1005,0.1245,0.1625,0.3046,0.018,0.305\n"


def _parse(text):
    return parse_grouped_csv(io.StringIO(text))


class TestParse:
    def test_basic_row(self):
        (rec,) = _parse(HEADER + USA_ROW)
        assert rec.country == "USA" and rec.year == 2016
        assert rec.decile_shares[0] == 0.0179
        assert rec.tail(0.1).top_share == 0.305
        assert rec.tail(0.05) is None

    def test_comments_blank_lines_and_case(self):
        text = "# source: survey\n\n" + HEADER.upper().replace("COUNTRY", "Country") + "\n" + USA_ROW
        assert len(_parse(text)) == 1

    def test_tail_only_record(self):
        (rec,) = _parse("country,year,gini,bottom5,top5,ratio5\nX,2020,0.4,0.01,0.2,0.049\n")
        assert rec.decile_shares is None
        assert rec.tail(0.05).ratio == 0.049

    def test_empty_input(self):
        assert _parse("") == []

    def test_missing_required_column(self):
        with pytest.raises(ValidationError, match="gini"):
            _parse("country,year\nX,2020\n")

    @pytest.mark.parametrize(
        "row,needle",
        [
            (USA_ROW.replace("0.0457", "abc"), "column 'd3'"),
            (USA_ROW.replace("2016", "20x6"), "column 'year'"),
            (USA_ROW.replace("0.0344", ""), "column 'd2'"),
            (USA_ROW.replace("0.411", "nan"), "column 'gini'"),
            (USA_ROW.replace(",0.305", ","), "column 'top10'"),
        ],
    )
    def test_malformed_values_name_row_and_column(self, row, needle):
        with pytest.raises(ValidationError) as info:
            _parse(HEADER + row)
        assert "row 1" in str(info.value)
        assert needle in str(info.value)

    def test_invariant_failures(self):
        with pytest.raises(ValidationError, match="decrease"):
            _parse(HEADER + USA_ROW.replace("0.0572", "0.0400").replace("0.3046", "0.3218"))
        with pytest.raises(ValidationError, match="sum"):
            _parse(HEADER + USA_ROW.replace("0.3046", "0.3346"))
        with pytest.raises(ValidationError, match="top10"):
            _parse(HEADER + USA_ROW.replace(",0.305", ",0.330"))

    def test_soft_share_sum_warning(self, caplog):
        with caplog.at_level(logging.WARNING):
            (rec,) = _parse(HEADER + USA_ROW.replace("0.3046", "0.3096").replace(",0.305", ",0.310"))
        assert rec.warnings
        assert "sum to" in caplog.text


class TestGroupedDistribution:
    def test_gini_range(self):
        with pytest.raises(ValidationError):
            GroupedDistribution("X", 2000, 1.0)

    def test_decile_tail(self):
        rec = builtin_dataset()[0]
        obs = rec.decile_tail()
        assert (obs.bottom_share, obs.top_share) == (0.0360, 0.2300)

    def test_decile_tail_needs_deciles(self):
        rec = GroupedDistribution("X", 2000, 0.3, None, (TailShareObservation(0.1, 0.03, 0.25),))
        with pytest.raises(ValidationError):
            rec.decile_tail()


class TestBuiltin:
    def test_four_countries(self):
        recs = builtin_dataset()
        assert [r.country for r in recs] == ["Malta", "Taiwan", "USA", "Côte d'Ivoire"]
        assert [r.gini for r in recs] == [0.287, 0.315, 0.411, 0.590]

    def test_share_sums(self):
        sums = [round(sum(r.decile_shares), 4) for r in builtin_dataset()]
        assert sums == [1.0, 1.0001, 0.9998, 0.9999]

    def test_published_ratios(self):
        recs = builtin_dataset()
        assert [r.tail(0.1).ratio for r in recs] == [0.157, 0.133, 0.059, 0.016]
        assert [r.tail(0.05).ratio for r in recs] == [0.115, 0.088, 0.029, 0.006]


class TestRoundTrip:
    def test_builtin(self):
        buf = io.StringIO()
        write_grouped_csv(builtin_dataset(), buf)
        assert parse_grouped_csv(io.StringIO(buf.getvalue())) == builtin_dataset()

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.floats(0.01, 1.0), min_size=10, max_size=10),
        st.floats(0.0, 0.95),
        st.integers(1900, 2100),
    )
    def test_generated(self, raw, g, year):
        shares = tuple(sorted(v / sum(raw) for v in raw))
        rec = GroupedDistribution("Somewhere, Inc", year, g, shares)
        buf = io.StringIO()
        write_grouped_csv([rec], buf)
        assert parse_grouped_csv(io.StringIO(buf.getvalue())) == [rec]


class TestReportCsv:
    def test_crlf_and_precision(self):
        buf = io.StringIO()
        write_report_csv([{"decile": "D1", "share": 0.034912, "n": 3, "ok": True}], buf, precision={"share": 4})
        assert buf.getvalue() == "decile,share,n,ok\r\nD1,0.0349,3,true\r\n"

    def test_quotes_fields(self):
        buf = io.StringIO()
        write_report_csv([{"country": "Côte d'Ivoire, West Africa"}], buf)
        (row,) = list(csv.DictReader(io.StringIO(buf.getvalue())))
        assert row["country"] == "Côte d'Ivoire, West Africa"

    def test_unknown_column(self):
        with pytest.raises(ValidationError):
            write_report_csv([{"a": 1}, {"b": 2}], io.StringIO(), columns=["a"])

    @pytest.mark.parametrize(
        "value,digits,text",
        [(None, None, ""), (0.1234567, None, "0.123457"), (0.5, 2, "0.50"), (7, 3, "7"), (float("inf"), 2, "inf")],
    )
    def test_format_number(self, value, digits, text):
        assert format_number(value, digits) == text
