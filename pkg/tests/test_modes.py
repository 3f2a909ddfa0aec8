import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import spherical_jn

from hedrop.modes import (Drop, sound_mode_frequency, spectrum, spherical_bessel_zero, surface_mode,
                          surface_mode_frequency, zpf_amplitude)

# tabulated first zeros of j_l (Abramowitz & Stegun 10.1)
J_ZEROS = {(0, 1): np.pi, (1, 1): 4.493409458, (2, 1): 5.763459197, (1, 2): 7.725251837, (3, 1): 6.987932000}


@pytest.mark.parametrize("key, value", J_ZEROS.items())
def test_bessel_zeros(key, value):
    assert spherical_bessel_zero(*key) == pytest.approx(value, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 20), st.integers(1, 6))
def test_bessel_zero_is_root_and_ordered(l, n):
    x = spherical_bessel_zero(l, n)
    assert abs(spherical_jn(l, x)) < 1e-12
    if n > 1:
        assert x - spherical_bessel_zero(l, n - 1) > np.pi * 0.99


def test_rayleigh_frequency(drop4, oracle):
    assert surface_mode_frequency(drop4, 2) == pytest.approx(oracle["omega_vib_he4"], rel=1e-12)
    assert surface_mode_frequency(drop4, 1) == 0.0


def test_zpf(drop4, oracle):
    x, dr = zpf_amplitude(drop4)
    assert x == pytest.approx(oracle["x_zpf_he4"], rel=1e-12)
    assert dr / x == pytest.approx(np.sqrt(5 / (16 * np.pi)))
    assert surface_mode(drop4, 2).zpf == x


def test_sound_mode(drop4, oracle):
    assert sound_mode_frequency(drop4, 1, 0).frequency == pytest.approx(oracle["sound_l0_n1_he4"], rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(1e-5, 1e-2))
def test_scaling_with_radius(R):
    from hedrop.heprops import load_isotope
    d1 = Drop(load_isotope("He4"), R)
    d2 = d1.replace(radius=2 * R)
    assert surface_mode_frequency(d1, 3) / surface_mode_frequency(d2, 3) == pytest.approx(2**1.5)
    assert sound_mode_frequency(d1, 1, 2).frequency / sound_mode_frequency(d2, 1, 2).frequency == pytest.approx(2)


def test_spectrum_count(drop4):
    rows = spectrum(drop4, 10, 3)
    assert len(rows) == 9 + 3 * 11
    assert {r[0] for r in rows} == {"surface", "sound"}


def test_drop_validation(he4):
    with pytest.raises(ValueError):
        Drop(he4, -1.0)
    with pytest.raises(ValueError):
        surface_mode(Drop(he4, 1e-3), 2, m=3)
