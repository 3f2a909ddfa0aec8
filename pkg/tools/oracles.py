"""Independent oracle for the closed-form golden values used by the tests.

Plain ``math`` with its own copy of the constants, so it shares no code with
the package. Run from the repository root to refresh the golden file:

    python3 tools/oracles.py > tests/golden/oracle_values.json
"""
import json
import math

HBAR = 1.054571817e-34
KB = 1.380649e-23
C = 299792458.0
AMU = 1.66053906660e-27

HE4 = dict(rho=145.0, sigma=3.75e-4, c=238.0, eps=1.057, m=4.002602 * AMU)
HE3 = dict(rho=81.0, sigma=1.52e-4, c=183.0, eps=1.042, m=3.0160293 * AMU)


def rayleigh(p, R, l=2):
    return math.sqrt(l * (l - 1) * (l + 2) * p["sigma"] / (p["rho"] * R**3))


def x_zpf(p, R):
    return math.sqrt(HBAR * rayleigh(p, R) / (8 * p["sigma"]))


def g0(p, R, lam):
    # equatorial radius change of the l=2, m=0 zero-point motion, Y20 at the equator
    dr = math.sqrt(5 / (16 * math.pi)) * x_zpf(p, R)
    return 2 * math.pi * C / lam * dr / R


def q_surface(p, R, T, lam):
    k0 = 2 * math.pi / lam
    return 2 * R / (math.pi * k0 * math.sqrt(p["eps"] - 1)) * p["sigma"] / (KB * T)


def q_ripplon(p, R, T, l=2):
    k = (l * (l - 1) * (l + 2)) ** (1 / 3) / R
    w = rayleigh(p, R, l)
    inv = math.pi**2 / 90 * HBAR * k / (p["rho"] * w) * (KB * T / (HBAR * p["c"])) ** 4
    return 1 / inv


def q_chandrasekhar(p, R, mu, l=2):
    w = rayleigh(p, R, l)
    return w * R**2 * p["rho"] / (mu * (l - 1) * (2 * l + 1))


def g_l(p, R, lam):
    w = 2 * math.pi * C / lam
    inertia = 8 * math.pi / 15 * p["rho"] * R**5
    # bulge dR = rho R^4 Omega^2 / (24 sigma) with Omega = hbar L / I
    return w / R * p["rho"] * R**4 / (24 * p["sigma"]) * (HBAR / inertia) ** 2


def sqrt_s_l(p, R, lam, omega, power, q_opt):
    w = 2 * math.pi * C / lam
    L = 8 * math.pi / 15 * p["rho"] * R**5 * omega
    flux = power / (HBAR * w)
    # d(omega)/dL = 2 g_L L / hbar^2; shot-noise frequency resolution w / (2 Q sqrt(flux))
    dw_dl = 2 * g_l(p, R, lam) * L / HBAR**2
    return w / (2 * q_opt * math.sqrt(flux)) / dw_dl / HBAR


def main():
    R, lam = 1e-3, 1e-6
    spin = 2 * math.pi
    L3 = 8 * math.pi / 15 * HE3["rho"] * R**5 * spin
    out = {
        "omega_vib_he4": rayleigh(HE4, R),
        "x_zpf_he4": x_zpf(HE4, R),
        "g0_he4": g0(HE4, R, lam),
        "sound_l0_n1_he4": HE4["c"] * math.pi / R,
        "q_surface_he4_300mK": q_surface(HE4, R, 0.3, lam),
        "q_ripplon_he4_300mK": q_ripplon(HE4, R, 0.3),
        "q_viscous_he3_1K": q_chandrasekhar(HE3, R, 3.0e-6),
        "g_l_over_omega_he3": g_l(HE3, R, lam) / (2 * math.pi * C / lam),
        "l_z_hbar_he3_1Hz": L3 / HBAR,
        "detuning_per_hbar_he3_1Hz": 2 * g_l(HE3, R, lam) * L3 / HBAR,
        "sqrt_s_l_he3_1Hz": sqrt_s_l(HE3, R, lam, spin, 10e-6, 1e10),
        "bulge_he3_1Hz": HE3["rho"] * R**4 * spin**2 / (24 * HE3["sigma"]),
        "fsr_he4_hz": C / (2 * math.pi * R * math.sqrt(HE4["eps"])),
    }
    print(json.dumps(out, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
