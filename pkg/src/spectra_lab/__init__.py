"""spectra_lab: eigenvalue comparison bounds and a discrete spectral-geometry lab."""

from . import constants, moser, matrix_stability, sphere_check, mesh

__all__ = ["constants", "moser", "matrix_stability", "sphere_check", "mesh"]
__version__ = "0.1.0"
