"""Physical constants (CODATA 2018 exact/recommended values)."""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    k_B: float = 1.380649e-23  # J/K
    c: float = 299792458.0  # m/s
    amu: float = 1.66053906660e-27  # kg


CONSTANTS = PhysicalConstants()

HBAR = CONSTANTS.hbar
K_B = CONSTANTS.k_B
C_LIGHT = CONSTANTS.c
TWO_PI = 2.0 * np.pi
