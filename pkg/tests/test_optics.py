import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hedrop.errors import UnsupportedRegimeError
from hedrop.optics import (Q_BULK_FLOOR, WgmMode, angular_factor, bryan_shift, coupling_g0, coupling_general,
                           free_spectral_range, load_h2_fixture, q_radiative, q_surface_scattering,
                           q_surface_scattering_h2, q_total, surface_scattering_q, wgm_splitting)

LAM = 1e-6


def test_equatorial_mode(drop4):
    wgm = WgmMode.equatorial(drop4, LAM)
    assert wgm.m == wgm.l == round(2 * np.pi * 1e-3 * np.sqrt(1.057) / LAM)
    with pytest.raises(ValueError):
        WgmMode(10, 11, 1, LAM)


def test_g0(drop4, oracle):
    assert coupling_g0(drop4, WgmMode.equatorial(drop4, LAM)) == pytest.approx(oracle["g0_he4"], rel=1e-12)


def test_general_coupling_reduces_to_g0_at_large_l(drop4):
    wgm = WgmMode.equatorial(drop4, LAM)
    # (3 l^2/(l(l+1)) - 1)/2 = 1 - 3/(2(l+1))
    ratio = coupling_general(drop4, wgm) / coupling_g0(drop4, wgm)
    assert ratio == pytest.approx(1 - 1.5 / (wgm.l + 1), rel=1e-12)
    polar = WgmMode(wgm.l, 0, 1, LAM)
    assert coupling_general(drop4, polar) == pytest.approx(-0.5 * coupling_g0(drop4, wgm), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5000), st.data())
def test_angular_factor_range(l, data):
    m = data.draw(st.integers(-l, l))
    f = angular_factor(l, m)
    assert -0.5 <= f <= 1.0
    assert f == angular_factor(l, -m)


def test_splitting(drop4, oracle):
    s = wgm_splitting(drop4, 6460, 0.01e-3, LAM)
    assert s.fsr_hz == pytest.approx(oracle["fsr_he4_hz"], rel=1e-12)
    assert len(s.shifts) == 6461
    assert 1e12 <= s.bandwidth_hz <= 10e12
    assert s.bandwidth / free_spectral_range(drop4) > 10


def test_surface_q_closed_form(drop4, oracle):
    assert q_surface_scattering(drop4, LAM) == pytest.approx(oracle["q_surface_he4_300mK"], rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1e-3, 5e-3), st.floats(0.05, 2.0))
def test_surface_q_scalings(R, T):
    q = surface_scattering_q(R, T, LAM, 1.057, 3.75e-4)
    assert surface_scattering_q(2 * R, T, LAM, 1.057, 3.75e-4) == pytest.approx(2 * q)
    assert surface_scattering_q(R, 2 * T, LAM, 1.057, 3.75e-4) == pytest.approx(q / 2)


def test_quadrature_within_factor_two():
    for R in np.geomspace(0.1e-3, 5e-3, 9):
        a = surface_scattering_q(R, 0.3, LAM, 1.057, 3.75e-4)
        b = surface_scattering_q(R, 0.3, LAM, 1.057, 3.75e-4, method="quadrature")
        assert 0.5 < a / b < 2


def test_zero_temperature_is_lossless():
    assert surface_scattering_q(1e-3, 0.0, LAM, 1.057, 3.75e-4) == np.inf


def test_radiative(drop4):
    assert q_radiative(drop4, LAM) > 1e25
    small = drop4.replace(radius=0.5e-6)
    with pytest.raises(UnsupportedRegimeError):
        q_radiative(small, LAM)
    # tunnelling loss falls steeply with size
    assert q_radiative(drop4.replace(radius=20e-6), LAM) < q_radiative(drop4.replace(radius=40e-6), LAM)


def test_total_and_dominant(drop4):
    b = q_total(drop4, LAM)
    assert b.dominant == "surface"
    assert b.q_total < min(b.q_surface, b.q_radiative, Q_BULK_FLOOR)
    cold = q_total(drop4.replace(temperature=1e-6), LAM)
    assert cold.dominant == "bulk"


def test_bryan_shift():
    assert [bryan_shift(m, 2.0) for m in range(-2, 3)] == [2.0, 1.0, 0.0, -1.0, -2.0]
    with pytest.raises(ValueError):
        bryan_shift(3, 1.0)


def test_h2_fixture():
    fx = load_h2_fixture()
    assert set(fx) >= {"dielectric", "surface_tension_N_per_m", "temperature_K", "wavelength_m", "radius_m"}
    q = q_surface_scattering_h2(fx)
    assert 1e8 <= q <= 4e8
