"""Material and thermodynamic properties of liquid 3He and 4He.

Static numbers (density, surface tension, sound speed, dielectric constant)
are single values; temperature-dependent quantities come from the CSV tables
bundled in ``hedrop/data`` (or a user-supplied data directory).
"""
from __future__ import annotations

import csv
import enum
import io
import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np

from .constants import CONSTANTS, K_B
from .errors import MonotonicityError, OutOfRangeError, TableParseError, UnsupportedRegimeError

DATA_DIR_ENV = "HEDROP_DATA_DIR"

# temperature below which the 4He vapour pressure follows the Arrhenius law
ARRHENIUS_STITCH_HE4 = 0.65


class Isotope(str, enum.Enum):
    HE3 = "He3"
    HE4 = "He4"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        for iso in cls:
            if iso.value.lower() == key or key == iso.value.lower()[2:] + "he":
                return iso
        raise ValueError(f"unknown isotope {value!r}; expected He3 or He4")


class Interpolation(str, enum.Enum):
    LINEAR = "linear"
    LOG_LINEAR = "log-linear"  # log(value) linear in T
    LOG_LOG = "log-log"  # log(value) linear in log(T)


@dataclass(frozen=True, eq=False)
class PropertyTable:
    """Tabulated property on a strictly increasing temperature grid.

    Queries outside ``valid_range`` raise :class:`OutOfRangeError` unless an
    extrapolation law has been registered for that side with
    :meth:`with_extrapolation`.
    """

    temperatures: np.ndarray
    values: np.ndarray
    interpolation: Interpolation = Interpolation.LINEAR
    quantity: str = ""
    units: str = ""
    source: str = ""
    below: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __post_init__(self):
        T = np.array(self.temperatures, dtype=float)
        v = np.array(self.values, dtype=float)
        if T.ndim != 1 or T.shape != v.shape:
            raise TableParseError("temperature and value columns differ in shape")
        if T.size == 0:
            raise TableParseError("empty table")
        if T.size > 1 and np.any(np.diff(T) <= 0):
            bad = int(np.argmax(np.diff(T) <= 0)) + 1
            raise MonotonicityError(f"temperature grid not strictly increasing at knot {bad} (T={T[bad]!r})")
        interp = Interpolation(self.interpolation)
        if interp is not Interpolation.LINEAR and np.any(v <= 0):
            raise TableParseError(f"{interp.value} interpolation needs positive values")
        if interp is Interpolation.LOG_LOG and np.any(T <= 0):
            raise TableParseError("log-log interpolation needs positive temperatures")
        T.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "temperatures", T)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "interpolation", interp)

    @property
    def valid_range(self):
        return float(self.temperatures[0]), float(self.temperatures[-1])

    def __len__(self):
        return self.temperatures.size

    def with_extrapolation(self, below):
        """Return a copy that evaluates ``below(T)`` for T under the grid."""
        return PropertyTable(self.temperatures, self.values, self.interpolation,
                             self.quantity, self.units, self.source, below)

    def __call__(self, T):
        T = float(T)
        lo, hi = self.valid_range
        if T < lo:
            if self.below is not None:
                return float(self.below(T))
            raise OutOfRangeError(f"{self.quantity or 'property'} queried at T={T!r} K below table minimum {lo} K")
        if T > hi:
            raise OutOfRangeError(f"{self.quantity or 'property'} queried at T={T!r} K above table maximum {hi} K")
        x, y = self.temperatures, self.values
        if self.interpolation is Interpolation.LINEAR:
            return float(np.interp(T, x, y))
        if self.interpolation is Interpolation.LOG_LINEAR:
            return float(np.exp(np.interp(T, x, np.log(y))))
        return float(np.exp(np.interp(np.log(T), np.log(x), np.log(y))))


def load_property_table(source, interpolation=Interpolation.LINEAR):
    """Parse a two-column ``T_K,value`` CSV into a :class:`PropertyTable`.

    ``source`` may be bytes, text, a path or a binary/text stream. An optional
    leading ``# quantity, units, source`` comment line is kept as metadata.
    """
    text = _read_source(source)
    quantity = units = provenance = ""
    rows = []
    header_seen = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if not header_seen and not quantity:
                parts = [p.strip() for p in stripped.lstrip("#").split(",", 2)]
                parts += [""] * (3 - len(parts))
                quantity, units, provenance = parts
            continue
        cells = next(csv.reader([stripped]))
        if not header_seen:
            if [c.strip() for c in cells] != ["T_K", "value"]:
                raise TableParseError(f"expected header 'T_K,value', got {stripped!r}", row=lineno)
            header_seen = True
            continue
        if len(cells) != 2:
            raise TableParseError(f"expected 2 columns, got {len(cells)}", row=lineno)
        try:
            rows.append((float(cells[0]), float(cells[1])))
        except ValueError:
            raise TableParseError(f"non-numeric cell in {stripped!r}", row=lineno) from None
    if not header_seen:
        raise TableParseError("missing 'T_K,value' header")
    if not rows:
        raise TableParseError("empty table")
    T, v = zip(*rows)
    return PropertyTable(np.array(T), np.array(v), Interpolation(interpolation), quantity, units, provenance)


def _read_source(source):
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    if isinstance(source, str):
        if "\n" not in source and os.path.exists(source):
            return Path(source).read_text(encoding="utf-8")
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def resolve_data_dir(data_dir=None):
    """Explicit argument, then ``$HEDROP_DATA_DIR``, then the bundled tables."""
    if data_dir is not None:
        return Path(data_dir)
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("hedrop") / "data"))


@dataclass(frozen=True, eq=False)
class IsotopeProperties:
    isotope: Isotope
    density: float  # kg/m^3
    surface_tension: float  # N/m
    sound_speed: float  # m/s
    dielectric: float
    atomic_mass: float  # kg
    binding_energy: float  # J, latent heat per atom at T -> 0
    vapor_pressure_table: PropertyTable
    latent_heat_table: PropertyTable
    specific_heat_table: PropertyTable
    viscosity_ref: Optional[tuple] = None  # (Pa s, K); 3He only

    @property
    def refractive_index(self):
        return float(np.sqrt(self.dielectric))


# Single-number material data. He4 density and sound speed are not quoted in
# the source material and are validated against the 23 Hz / 120 kHz anchors.
_STATIC = {
    Isotope.HE4: dict(density=145.0, surface_tension=3.75e-4, sound_speed=238.0,
                      dielectric=1.057, atomic_mass=4.002602 * CONSTANTS.amu, e0_kelvin=7.14),
    # dielectric constant from Clausius-Mossotti scaling of He4 with number density
    Isotope.HE3: dict(density=81.0, surface_tension=1.52e-4, sound_speed=183.0,
                      dielectric=1.042, atomic_mass=3.0160293 * CONSTANTS.amu, e0_kelvin=2.5),
}

HE3_VISCOSITY_REF = (3.0e-6, 1.0)  # 30 microPoise at 1 K


def _table_path(data_dir, isotope, quantity):
    path = data_dir / f"{isotope.value.lower()}_{quantity}.csv"
    if not path.exists():
        raise FileNotFoundError(f"missing property data file: {path}")
    return path


@lru_cache(maxsize=None)
def _load_isotope_cached(isotope, data_dir):
    static = _STATIC[isotope]
    m = static["atomic_mass"]
    e0 = static["e0_kelvin"] * K_B
    vp = load_property_table(_table_path(data_dir, isotope, "vapor_pressure"), Interpolation.LOG_LINEAR)
    lh = load_property_table(_table_path(data_dir, isotope, "latent_heat"), Interpolation.LINEAR)
    sh = load_property_table(_table_path(data_dir, isotope, "specific_heat"), Interpolation.LOG_LOG)
    if isotope is Isotope.HE4:
        vp = vp.with_extrapolation(_arrhenius_below(vp, e0))
    return IsotopeProperties(
        isotope=isotope,
        density=static["density"],
        surface_tension=static["surface_tension"],
        sound_speed=static["sound_speed"],
        dielectric=static["dielectric"],
        atomic_mass=m,
        binding_energy=e0,
        vapor_pressure_table=vp,
        latent_heat_table=lh,
        specific_heat_table=sh,
        viscosity_ref=HE3_VISCOSITY_REF if isotope is Isotope.HE3 else None,
    )


def _arrhenius_below(table, e0):
    t0 = table.valid_range[0]
    prefactor = table(t0) / (t0**2.5 * np.exp(-e0 / (K_B * t0)))

    def arrhenius(T):
        if T <= 0:
            return 0.0
        return prefactor * T**2.5 * np.exp(-e0 / (K_B * T))

    return arrhenius


def load_isotope(isotope, data_dir=None):
    """Properties of ``isotope`` with tables read from ``data_dir``."""
    return _load_isotope_cached(Isotope.parse(isotope), resolve_data_dir(data_dir).resolve())


def vapor_pressure(iso, T):
    """Saturated vapour pressure in Pa."""
    if T <= 0:
        raise ValueError(f"temperature must be positive, got {T!r}")
    return iso.vapor_pressure_table(T)


def latent_heat(iso, T):
    """Latent heat per evaporated atom in J."""
    return iso.latent_heat_table(T)


def specific_heat(iso, N, T):
    """Heat capacity in J/K of a drop holding ``N`` atoms."""
    if N <= 0:
        raise ValueError(f"atom number must be positive, got {N!r}")
    return N * iso.specific_heat_table(T)


def viscosity_he3(T, mu_ref=HE3_VISCOSITY_REF[0], T_ref=HE3_VISCOSITY_REF[1]):
    """Dynamic viscosity of normal-fluid 3He, mu ~ T^-2 (Fermi liquid)."""
    if T <= 1e-3:
        raise UnsupportedRegimeError(f"T={T!r} K: 3He is superfluid below ~1 mK")
    if T > 1.5:
        raise UnsupportedRegimeError(f"T={T!r} K is above the T^-2 viscosity window (<= 1.5 K)")
    return mu_ref * (T_ref / T) ** 2
