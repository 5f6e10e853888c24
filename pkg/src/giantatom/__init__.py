"""Single-photon scattering off a phonon-dressed giant atom in a coupled-resonator waveguide."""
from .model import (
    SystemParams, ScatteringPoint, EmitterBlock, dispersion, wavevector_of_energy,
    wavevector_of_detuning, scattering_point, q_roots, exact_emitter_block,
)
from .analytic import ReflectionValue, reflection_analytic, reflection_at_q_zero, reflection_rate
from .solver import ScatteringSolution, solve_scattering, solve_scattering_merged, resonances

__version__ = "0.1.0"
