"""Levitated superfluid helium drops: material data, vibrational and optical modes,
loss models, evaporative cooling and rotation."""

__version__ = "0.1.0"
