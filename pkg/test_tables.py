"""
Tests for the dimension tables
"""
import pytest

from core.tables import (MULTI_ERROR_ROWS, SINGLE_ERROR_LITERATURE, format_dimension, gc_table_dimension,
                         multi_error_table, parse_dimension, render_table, table_report)


def test_format_dimension():
    assert format_dimension(3) == "3"
    assert format_dimension(3 ** 5) == "3^5"
    assert format_dimension(11) == "11"
    assert format_dimension(11 * 3 ** 6) == "11 x 3^6"
    assert parse_dimension("11 x 3^6") == 8019


@pytest.mark.parametrize("n", range(4, 17))
def test_gc_columns_match_published(n):
    linear = SINGLE_ERROR_LITERATURE[n][3]
    nonlinear = SINGLE_ERROR_LITERATURE[n][4]
    assert gc_table_dimension(3, n, "linear") == parse_dimension(linear)
    if n % 2:
        assert gc_table_dimension(3, n, "nonlinear") == parse_dimension(nonlinear)


def test_single_error_table():
    df = table_report("II")
    assert list(df["n"]) == list(range(4, 17))
    assert df["matches_published"].all()
    row8 = df[df["n"] == 8].iloc[0]
    assert row8["GC_linear_expr"] == "3^5"
    row13 = df[df["n"] == 13].iloc[0]
    assert row13["GC_nonlinear_expr"] == "11 x 3^6"


def test_multi_error_table():
    df = multi_error_table()
    assert len(df) == len(MULTI_ERROR_ROWS)
    first = df.iloc[0]
    assert (first["t"], first["n"], first["K"], first["log3_K"]) == (2, 10, 5, 1.465)
    row = df[(df["t"] == 3) & (df["n"] == 18)].iloc[0]
    assert row["K"] == 125
    assert row["log3_K"] == pytest.approx(4.395)


def test_unavailable_entries_are_not_synthesized():
    df = table_report("III")
    row = df[(df["t"] == 4) & (df["n"] == 18)].iloc[0]
    assert row["k_stabilizer"] == "unavailable"
    assert row["css"] == "unavailable"


def test_unknown_table():
    with pytest.raises(ValueError):
        table_report("IV")


def test_render():
    text = render_table(multi_error_table())
    assert "log3_K" in text.splitlines()[0]
