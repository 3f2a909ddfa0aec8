"""Regenerate the bundled helium property tables in src/hedrop/data/.

The tables are desk-scale approximations (a few percent), assembled as:

* vapour pressure: ITS-90 helium vapour-pressure equations inside their
  ranges (He4 1.25-5.0 K, He3 0.65-3.2 K). Below those ranges the
  ideal-vapour / incompressible-liquid relation

      P = g (m / 2 pi hbar^2)^(3/2) (k_B T)^(5/2) exp(-E0/k_B T) exp(-int_0^T s dT' / k_B T)

  is used with the liquid entropy s integrated from the specific-heat table
  below, rescaled to join the ITS-90 value at the range boundary.
* specific heat: He4 phonon + roton gas below 1 K, smoothed saturated-liquid
  values above (Donnelly & Barenghi 1998 magnitudes); He3 smoothed
  saturated-liquid values (Greywall 1983 magnitudes).
* latent heat per atom: E0 + (5/2) k_B T - h_liquid(T) while the vapour is
  dilute, blended into smoothed compilation values near the critical region.

Run from the repository root:  python3 tools/make_property_tables.py
"""
from pathlib import Path

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

HBAR = 1.054571817e-34
KB = 1.380649e-23
NA = 6.02214076e23
U = 1.66053906660e-27
M4 = 4.002602 * U
M3 = 3.0160293 * U
E0_HE4 = 7.14  # K
E0_HE3 = 2.5  # K

OUT = Path(__file__).resolve().parents[1] / "src" / "hedrop" / "data"

ITS90_HE4_LOW = ([1.392408, 0.527153, 0.166756, 0.050988, 0.026514, 0.001975,
                  -0.017976, 0.005409, 0.013259], 5.6, 2.9, (1.6, 8.6))
ITS90_HE4_HIGH = ([3.146631, 1.357655, 0.413923, 0.091159, 0.016349, 0.001826,
                   -0.004325, -0.004973], 10.3, 1.9, (8.4, 12.5))
ITS90_HE3 = ([1.053447, 0.980106, 0.676380, 0.372692, 0.151656, -0.002263,
              0.006596, 0.088966, -0.004770, -0.054943], 7.3, 4.3, (2.6, 12.5))
T_LAMBDA = 2.1768


def its90_pressure(T, coeffs):
    A, B, C, (lo, hi) = coeffs

    def temperature(lnp):
        x = (lnp - B) / C
        return sum(a * x**i for i, a in enumerate(A))

    return float(np.exp(brentq(lambda lnp: temperature(lnp) - T, lo, hi, xtol=1e-14)))


def ideal_vapour(T, m, e0, g, entropy_integral=0.0):
    pref = g * (m / (2 * np.pi * HBAR**2)) ** 1.5 * (KB * T) ** 2.5
    return pref * np.exp(-e0 / T - entropy_integral / T)


# --- specific heat ---------------------------------------------------------

def he4_phonon_roton_cv(T):
    """Specific heat of He II per kg from the phonon and roton gases."""
    rho, v = 145.0, 238.0
    phonon = 2 * np.pi**2 * KB**4 * T**3 / (15 * HBAR**3 * v**3 * rho)
    delta = 8.65 * KB
    p0 = 1.91e10 * HBAR
    mu = 0.16 * M4

    def energy(t):
        n = 2 * p0**2 * np.sqrt(mu * KB * t) * np.exp(-delta / (KB * t)) / ((2 * np.pi) ** 1.5 * HBAR**3)
        return n * (delta + 0.5 * KB * t)

    h = 1e-4 * T
    roton = (energy(T + h) - energy(T - h)) / (2 * h) / rho
    return phonon + roton


HE4_CS_SMOOTH = {  # J/(g K), saturated liquid
    1.1: 0.175, 1.2: 0.28, 1.3: 0.42, 1.4: 0.61, 1.5: 0.86, 1.6: 1.2,
    1.7: 1.65, 1.8: 2.3, 1.9: 3.3, 2.0: 4.9, 2.05: 6.1, 2.1: 8.0,
    2.14: 10.8, 2.16: 14.0, 2.17: 19.0, 2.18: 8.5, 2.2: 6.0, 2.3: 3.6,
    2.5: 2.55, 2.75: 2.3, 3.0: 2.4, 3.25: 2.6, 3.5: 2.85, 3.75: 3.2,
    4.0: 3.65, 4.2: 4.1,
}

HE3_C_OVER_R = {
    0.02: 0.055, 0.03: 0.08, 0.05: 0.125, 0.07: 0.16, 0.1: 0.205, 0.15: 0.26,
    0.2: 0.30, 0.3: 0.355, 0.4: 0.39, 0.5: 0.42, 0.6: 0.445, 0.7: 0.465,
    0.8: 0.49, 1.0: 0.53, 1.2: 0.575, 1.5: 0.65, 1.8: 0.74, 2.0: 0.81,
    2.2: 0.89, 2.5: 1.02, 2.8: 1.2, 3.0: 1.36,
}


def he4_specific_heat_grid():
    low = [0.05, 0.07, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55,
           0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0]
    T = np.array(low + sorted(HE4_CS_SMOOTH))
    per_kg = np.array([he4_phonon_roton_cv(t) for t in low]
                      + [1e3 * HE4_CS_SMOOTH[t] for t in sorted(HE4_CS_SMOOTH)])
    return T, per_kg * M4  # J/(K atom)


def he3_specific_heat_grid():
    T = np.array(sorted(HE3_C_OVER_R))
    return T, np.array([HE3_C_OVER_R[t] for t in T]) * KB


def entropy_and_enthalpy(T, c):
    """Per-atom entropy and enthalpy (J/K, J) on a fine grid from T=0."""
    fine = np.geomspace(T[0] * 1e-3, T[-1], 20000)
    # power-law continuation below the first knot
    slope = np.log(c[1] / c[0]) / np.log(T[1] / T[0])
    cf = np.where(fine < T[0], c[0] * (fine / T[0]) ** slope,
                  np.exp(np.interp(np.log(fine), np.log(T), np.log(c))))
    s0 = cf[0] / slope
    h0 = cf[0] * fine[0] / (slope + 1)
    s = s0 + cumulative_trapezoid(cf / fine, fine, initial=0.0)
    h = h0 + cumulative_trapezoid(cf, fine, initial=0.0)
    return fine, s, h


# --- writers ---------------------------------------------------------------

def write(name, quantity, units, source, T, values):
    lines = [f"# {quantity}, {units}, {source}", "T_K,value"]
    lines += [f"{t:.6g},{v:.8e}" for t, v in zip(T, values)]
    (OUT / name).write_text("\n".join(lines) + "\n", encoding="utf-8")


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    # He4 ------------------------------------------------------------------
    T4c, c4 = he4_specific_heat_grid()
    f4, s4, h4 = entropy_and_enthalpy(T4c, c4)
    s_lambda = np.interp(2.17, f4, s4) / M4 / 1e3
    print(f"He4 entropy at lambda: {s_lambda:.3f} J/(g K) (literature ~1.57)")
    print(f"He4 enthalpy at 4.0 K: {np.interp(4.0, f4, h4) / M4 / 1e3:.2f} J/g")
    write("he4_specific_heat.csv", "specific_heat", "J/(K atom)",
          "phonon+roton gas below 1 K; smoothed saturated-liquid values above "
          "(Donnelly & Barenghi 1998 magnitudes)", T4c, c4)

    T4p = np.round(np.concatenate([np.arange(0.65, 1.25, 0.025), np.arange(1.25, 2.15, 0.05),
                                   [T_LAMBDA], np.arange(2.25, 4.2, 0.1), [4.2]]), 6)
    p4 = []
    scale = its90_pressure(1.25, ITS90_HE4_LOW) / ideal_vapour(
        1.25, M4, E0_HE4, 1, np.interp(1.25, f4, np.cumsum(np.gradient(f4) * s4)) / KB)
    for t in T4p:
        if t < 1.25:
            sint = np.interp(t, f4, np.cumsum(np.gradient(f4) * s4)) / KB
            p4.append(scale * ideal_vapour(t, M4, E0_HE4, 1, sint))
        elif t <= T_LAMBDA:
            p4.append(its90_pressure(t, ITS90_HE4_LOW))
        else:
            p4.append(its90_pressure(t, ITS90_HE4_HIGH))
    print(f"He4 low-T rescale factor at 1.25 K: {scale:.4f}")
    write("he4_vapor_pressure.csv", "vapor_pressure", "Pa",
          "ITS-90 He4 vapour-pressure equations above 1.25 K; ideal-vapour relation "
          "(E0 = 7.14 K) joined at 1.25 K below", T4p, p4)

    T4l = np.array([0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.2, 1.4,
                    1.6, 1.8, 2.0, 2.17, 2.5, 3.0, 3.5, 4.0, 4.2])
    ideal4 = E0_HE4 * KB + 2.5 * KB * T4l - np.interp(T4l, f4, h4)
    compiled4 = {2.5: 93.0, 3.0: 91.5, 3.5: 88.5, 4.0: 85.0, 4.2: 83.0}  # J/mol
    l4 = np.array([compiled4[t] / NA if t in compiled4 else v for t, v in zip(T4l, ideal4)])
    write("he4_latent_heat.csv", "latent_heat", "J/atom",
          "E0 + 5/2 k_B T - h_liquid(T) below 2.2 K (dilute vapour); smoothed "
          "compilation values above", T4l, l4)

    # He3 ------------------------------------------------------------------
    T3c, c3 = he3_specific_heat_grid()
    f3, s3, h3 = entropy_and_enthalpy(T3c, c3)
    write("he3_specific_heat.csv", "specific_heat", "J/(K atom)",
          "smoothed saturated-liquid values (Greywall 1983 magnitudes)", T3c, c3)

    sint3 = np.cumsum(np.gradient(f3) * s3) / KB
    T3p = np.round(np.concatenate([np.arange(0.05, 0.3, 0.01), np.arange(0.3, 0.65, 0.025),
                                   np.arange(0.65, 1.0, 0.05), np.arange(1.0, 3.0, 0.1), [3.0]]), 6)
    scale3 = its90_pressure(0.65, ITS90_HE3) / ideal_vapour(0.65, M3, E0_HE3, 2, np.interp(0.65, f3, sint3))
    print(f"He3 low-T rescale factor at 0.65 K: {scale3:.4f}")
    p3 = [scale3 * ideal_vapour(t, M3, E0_HE3, 2, np.interp(t, f3, sint3)) if t < 0.65
          else its90_pressure(t, ITS90_HE3) for t in T3p]
    write("he3_vapor_pressure.csv", "vapor_pressure", "Pa",
          "ITS-90 He3 vapour-pressure equation above 0.65 K; ideal-vapour relation "
          "(E0 = 2.5 K, spin degeneracy 2) joined at 0.65 K below", T3p, p3)

    T3l = np.array([0.0, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 1.0, 1.2,
                    1.5, 2.0, 2.5, 3.0])
    ideal3 = E0_HE3 * KB + 2.5 * KB * T3l - np.interp(T3l, f3, h3)
    compiled3 = {1.5: 42.0, 2.0: 41.0, 2.5: 37.0, 3.0: 29.0}  # J/mol
    l3 = np.array([compiled3[t] / NA if t in compiled3 else v for t, v in zip(T3l, ideal3)])
    write("he3_latent_heat.csv", "latent_heat", "J/atom",
          "E0 + 5/2 k_B T - h_liquid(T) below 1.5 K (dilute vapour); smoothed "
          "compilation values above", T3l, l3)
    print("He3 latent heat J/mol:", np.round(l3 * NA, 2))
    print("He4 latent heat J/mol:", np.round(l4 * NA, 2))


if __name__ == "__main__":
    main()
