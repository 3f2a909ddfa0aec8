"""Coupled rigid rotation and l = 2 surface vibration of a drop."""
from .algebra import (M_VALUES, basis_phi, euler_to_matrix, generator_set, matrix_to_euler,
                      rotation_matrix_W)
from .dynamics import (BryanSpectrum, RovibTrajectory, energy, equations_of_motion, integrate,
                       lab_angular_momentum, linearized_spectrum, spin_equilibrium_state, state_derivatives,
                       write_trajectory_csv)
from .lagrangian import (DeformationAmplitudes, EulerAngles, PhysicalScale, RotorVibState, RovibParams,
                         equatorial_bulge, equilibrium_bulge, equilibrium_bulge_si, lagrangian, lagrangian_q)
