import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iotnet import (
    EmptyNetworkError,
    IOTable,
    ParseError,
    RegistryError,
    parse_iot,
    to_network,
    validate_balance,
    write_iot,
)
from iotnet.iot import format_iot, parse_iot_text

TWO_SECTOR_CSV = """\
sector,01,02,final_use,total_output
01,0,1,3,4
02,2,0,2,4
value_added,1,3,,
total_input,4,4,,
"""


def balanced_table(W, F, sectors=None, aux=None):
    """Build a table that satisfies both identities by construction."""
    W = np.asarray(W, dtype=float)
    F = np.asarray(F, dtype=float)
    Y = W.sum(axis=1) + F
    X = Y - W.sum(axis=0)
    sectors = sectors or [f"{i + 1:02d}" for i in range(len(W))]
    return IOTable(sectors, W, F, X, Y, aux or {})


def test_parse_two_sector_csv(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text(TWO_SECTOR_CSV)
    t = parse_iot(path, "csv")
    assert t.sectors == ("01", "02")
    np.testing.assert_array_equal(t.W, [[0, 1], [2, 0]])
    np.testing.assert_array_equal(t.F, [3, 2])
    np.testing.assert_array_equal(t.X, [1, 3])
    np.testing.assert_array_equal(t.Y, [4, 4])
    assert t.aux == {}


def test_parse_negative_w_names_cell():
    text = TWO_SECTOR_CSV.replace("02,2,0,2,4", "02,-1,0,2,4")
    with pytest.raises(ParseError) as err:
        parse_iot_text(text)
    assert err.value.row == 3 and err.value.column == 2


def test_parse_non_numeric_cell():
    text = TWO_SECTOR_CSV.replace("01,0,1,3,4", "01,0,abc,3,4")
    with pytest.raises(ParseError, match="non-numeric") as err:
        parse_iot_text(text)
    assert (err.value.row, err.value.column) == (2, 3)


def test_parse_empty_table():
    with pytest.raises(ParseError, match="empty table"):
        parse_iot_text("sector,final_use,total_output\nvalue_added,,\ntotal_input,,\n")
    with pytest.raises(ParseError, match="empty table"):
        parse_iot_text('{"sectors": [], "W": [], "F": [], "X": [], "Y": []}', "json")


@pytest.mark.parametrize("text, message", [
    ("sectr,01,final_use,total_output\n", "header"),
    ("sector,01,02,total_output\n", "final_use"),
    ("sector,01,02,final_use,total_output,extra\n", "aux"),
    (TWO_SECTOR_CSV.replace("02,2,0,2,4\n", ""), "expected"),
    (TWO_SECTOR_CSV.replace("02,2,0,2,4", "03,2,0,2,4"), "does not match"),
    (TWO_SECTOR_CSV.replace("total_input,4,4", "total_input,4,5"), "disagrees"),
    (TWO_SECTOR_CSV.replace("value_added,1,3,,", "value_added,1,3,7,"), "unexpected"),
])
def test_parse_malformed(text, message):
    with pytest.raises(ParseError, match=message):
        parse_iot_text(text)


def test_parse_non_square_json():
    text = '{"sectors": ["01", "02"], "W": [[0, 1]], "F": [1, 1], "X": [1, 1], "Y": [1, 1]}'
    with pytest.raises(ParseError):
        parse_iot_text(text, "json")


def test_strict_registry():
    text = TWO_SECTOR_CSV.replace("02", "99")
    assert parse_iot_text(text).sectors == ("01", "99")
    with pytest.raises(RegistryError):
        parse_iot_text(text, strict_registry=True)


def test_aux_columns_and_json_roundtrip(tmp_path):
    t = balanced_table([[1.5, 0.25], [2, 0]], [3.1, -2], aux={"export": [0.5, 1.0]})
    for fmt in ("csv", "json"):
        path = tmp_path / f"t.{fmt}"
        write_iot(t, path)
        back = parse_iot(path)
        assert back == t
        write_iot(back, tmp_path / f"again.{fmt}")
        assert (tmp_path / f"again.{fmt}").read_text() == path.read_text()


finite = st.floats(min_value=0, max_value=1e9, allow_nan=False, allow_subnormal=False)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(finite, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(st.floats(-1e9, 1e9, allow_nan=False, allow_subnormal=False), min_size=n, max_size=n),
)))
def test_roundtrip_property(data):
    W, F = data
    # negative final use allowed, but total output must stay nonnegative
    F = np.maximum(F, -np.asarray(W).sum(axis=1))
    t = balanced_table(W, F)
    for fmt in ("csv", "json"):
        assert parse_iot_text(format_iot(t, fmt), fmt) == t


def test_validate_balanced_by_construction():
    t = balanced_table([[0, 1], [2, 0]], [3, 2])
    rep = validate_balance(t, 1e-6)
    assert rep.passed and rep.failing_sectors == ()


def test_validate_detects_perturbed_output():
    t = balanced_table([[0, 1], [2, 0]], [3, 2])
    bad = IOTable(t.sectors, t.W, t.F, t.X, t.Y + np.array([10.0, 0.0]))
    rep = validate_balance(bad, 1e-6)
    assert not rep.passed
    assert ("01", "row", pytest.approx(10 / 14)) in rep.failing_sectors
    assert {s for s, _, _ in rep.failing_sectors} == {"01"}


def test_validate_all_zero_table():
    z = np.zeros(2)
    assert validate_balance(IOTable(["01", "02"], np.zeros((2, 2)), z, z, z), 1e-6).passed


@pytest.mark.parametrize("c", [1e-3, 7.0, 1e6])
def test_validate_scale_equivariance(c):
    good = balanced_table([[10, 20], [30, 5]], [40, 60])
    bad = IOTable(good.sectors, good.W, good.F, good.X, good.Y * (1 + 1e-3))
    # residuals are relative to max(1, |Y|); outputs stay >= 1 at every tested scale
    for t in (good, bad):
        assert validate_balance(t.scaled(c), 1e-6).passed == validate_balance(t, 1e-6).passed


def test_to_network_edges():
    g = to_network(balanced_table([[0, 1], [2, 0]], [3, 2]))
    assert g.nodes == ("01", "02")
    assert g.edges() == [("01", "02", 1.0), ("02", "01", 2.0)]


def test_to_network_self_loop_and_isolated():
    g = to_network(balanced_table([[5, 0], [0, 0]], [1, 1]))
    assert g.edges() == [("01", "01", 5.0)]
    assert g.n_nodes == 2


def test_to_network_empty():
    with pytest.raises(EmptyNetworkError, match="empty network"):
        to_network(balanced_table([[0, 0], [0, 0]], [1, 1]))


def test_to_network_preserves_flow_and_attributes():
    rng = np.random.default_rng(3)
    W = np.round(rng.uniform(0, 5, size=(6, 6)) * (rng.random((6, 6)) < 0.6), 2)
    t = balanced_table(W, rng.uniform(1, 9, 6), aux={"export": rng.uniform(0, 1, 6)})
    g = to_network(t)
    assert g.total_weight == pytest.approx(W.sum(), rel=1e-15)
    np.testing.assert_array_equal(g.node_attrs["value_added"], t.X)
    np.testing.assert_array_equal(g.node_attrs["export"], t.aux["export"])
