import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hedrop.constants import K_B
from hedrop.errors import MonotonicityError, OutOfRangeError, TableParseError, UnsupportedRegimeError
from hedrop.heprops import (Interpolation, Isotope, PropertyTable, latent_heat, load_isotope, load_property_table,
                            resolve_data_dir, specific_heat, vapor_pressure, viscosity_he3)

TABLE = """# vapor_pressure, Pa, test
T_K,value
1.0,10.0
2.0,100.0
4.0,1000.0
"""


def test_parse_metadata_and_values():
    t = load_property_table(TABLE, Interpolation.LOG_LINEAR)
    assert (t.quantity, t.units, t.source) == ("vapor_pressure", "Pa", "test")
    assert t.valid_range == (1.0, 4.0)
    assert t(2.0) == pytest.approx(100.0)
    # log-linear midpoint is the geometric mean
    assert t(1.5) == pytest.approx(math.sqrt(10.0 * 100.0))


def test_sources_are_equivalent(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text(TABLE)
    tables = [load_property_table(s) for s in (TABLE, TABLE.encode(), path, str(path), io.StringIO(TABLE))]
    for t in tables[1:]:
        np.testing.assert_array_equal(t.values, tables[0].values)


@pytest.mark.parametrize("text, row", [
    ("T_K,value\n1.0,2.0\n2.0,abc\n", 3),
    ("T_K,value\n1.0,2.0,3.0\n", 2),
    ("T,v\n1.0,2.0\n", 1),
])
def test_parse_errors_carry_row(text, row):
    with pytest.raises(TableParseError) as err:
        load_property_table(text)
    assert err.value.row == row


def test_non_monotone_grid():
    with pytest.raises(MonotonicityError):
        load_property_table("T_K,value\n1.0,1.0\n1.0,2.0\n")


def test_out_of_range_raises():
    t = load_property_table(TABLE)
    with pytest.raises(OutOfRangeError):
        t(0.5)
    with pytest.raises(OutOfRangeError):
        t(5.0)


def test_extrapolation_below():
    t = load_property_table(TABLE).with_extrapolation(lambda T: -1.0)
    assert t(0.1) == -1.0


def test_log_log_power_law_exact():
    T = np.array([0.1, 0.2, 0.5, 1.0])
    t = PropertyTable(T, T**3, Interpolation.LOG_LOG)
    assert t(0.3) == pytest.approx(0.3**3, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=1.0, max_value=4.0))
def test_interpolants_stay_within_knots(T):
    t = load_property_table(TABLE, Interpolation.LOG_LINEAR)
    assert 10.0 * (1 - 1e-12) <= t(T) <= 1000.0 * (1 + 1e-12)


def test_isotope_parse():
    assert Isotope.parse("he3") is Isotope.HE3
    assert Isotope.parse("4He") is Isotope.HE4
    with pytest.raises(ValueError):
        Isotope.parse("Ne")


def test_fixed_points(he4, he3):
    # lambda point of 4He: 5.042 kPa at 2.1768 K
    assert vapor_pressure(he4, 2.1768) == pytest.approx(5042, rel=0.005)
    # 3He normal boiling point 3.19 K lies above the table; extrapolate the last interval
    t = he3.vapor_pressure_table
    T = t.temperatures[-2:]
    slope = np.log(t.values[-1] / t.values[-2]) / (T[1] - T[0])
    assert t.values[-1] * np.exp(slope * (3.1905 - T[1])) == pytest.approx(101325, rel=0.05)


def test_he4_arrhenius_tail(he4):
    lo = he4.vapor_pressure_table.valid_range[0]
    p1, p2 = vapor_pressure(he4, 0.3), vapor_pressure(he4, 0.25)
    # ratio set by E0 = 7.14 K and the T^(5/2) prefactor
    expected = (0.3 / 0.25) ** 2.5 * math.exp(-7.14 * (1 / 0.3 - 1 / 0.25))
    assert p1 / p2 == pytest.approx(expected, rel=1e-10)
    assert vapor_pressure(he4, lo * (1 - 1e-9)) == pytest.approx(vapor_pressure(he4, lo), rel=1e-6)


def test_vapor_pressure_monotone(he4, he3):
    for iso in (he4, he3):
        lo, hi = iso.vapor_pressure_table.valid_range
        T = np.linspace(max(lo, 0.2), hi, 200)
        assert np.all(np.diff([vapor_pressure(iso, x) for x in T]) > 0)


def test_latent_heat_near_binding_energy(he4):
    assert latent_heat(he4, 0.3) / K_B == pytest.approx(7.14, rel=0.15)


def test_specific_heat_scales_with_n(he3):
    assert specific_heat(he3, 2e10, 0.5) == pytest.approx(2 * specific_heat(he3, 1e10, 0.5))
    with pytest.raises(ValueError):
        specific_heat(he3, 0, 0.5)


def test_viscosity_window():
    assert viscosity_he3(1.0) == pytest.approx(3e-6)
    assert viscosity_he3(0.5) == pytest.approx(12e-6)
    with pytest.raises(UnsupportedRegimeError):
        viscosity_he3(2.0)


def test_data_dir_env(monkeypatch, tmp_path):
    monkeypatch.setenv("HEDROP_DATA_DIR", str(tmp_path))
    assert resolve_data_dir() == tmp_path
    with pytest.raises(FileNotFoundError, match="he4_vapor_pressure.csv"):
        load_isotope("He4")


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 1.5))
def test_viscosity_t_squared_constant(T):
    assert viscosity_he3(T) * T**2 == pytest.approx(3e-6, rel=1e-14)


def test_properties_nonnegative(he4, he3):
    for iso in (he4, he3):
        for table in (iso.vapor_pressure_table, iso.latent_heat_table):
            assert np.all(table.values >= 0)
