"""Coherent wave packets of the Morse oscillator: fractional revivals and sub-Planck phase-space structure."""

from .coherent import CoefficientVector, EvolvedState, autocorrelation, cs_coefficients, evolve, synthesize
from .morse import (
    DEFAULT_GRID,
    HI,
    MoleculeParams,
    SpatialGrid,
    WaveFunction,
    bound_level_max,
    eigenfunction,
    energy,
    lambda_param,
    overlap,
    potential,
)
from .phasespace import (
    DEFAULT_P_AXIS,
    MomentumGrid,
    Moments,
    PhaseSpaceField,
    marginals,
    moments,
    sub_planck_area,
    wigner,
    wigner_parts_eighth,
)
from .revival import (
    FractionalDecomposition,
    Timescales,
    classical_wavepacket,
    even_odd_split,
    gauss_amplitudes,
    reconstruct_fractional,
    timescales,
)

__version__ = "0.1.0"
