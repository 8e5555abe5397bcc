"""Casimir energies, forces and electromagnetic eigenmodes of symmetric layered media."""

from .dielectric import (
    VACUUM,
    Constant,
    Drude,
    Medium,
    Oscillator,
    PerfectConductor,
    Plasma,
    Tabulated,
    eval_imag_axis,
    eval_real_axis,
    ingest_tabulated,
    plasma_frequency_from_density,
)
from .errors import *  # noqa: F401,F403
from .scattering import LayerConfig, Pol, dispersion_function, s_matrix
from .spectrum import (
    find_modes,
    single_interface_plasmon,
    spectrum_bounds,
    trace_dispersion,
)

__version__ = "0.1.0"
