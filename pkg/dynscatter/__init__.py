"""dynscatter: one-dimensional scattering by transfer-matrix evolution and inverse design."""

from dynscatter.amplitudes import (
    Route,
    ScatteringAmplitudes,
    SpectralFlags,
    amplitudes_from_matrix,
    classify,
    matrix_from_amplitudes,
    scatter,
    sweep,
)
from dynscatter.design import design, design_sweep, verify_design
from dynscatter.evolution import evolve_transfer
from dynscatter.jost import solve_jost, solve_riccati, solve_s
from dynscatter.numerics import ArcPath, Complex2x2, IntegratorConfig
from dynscatter.potential import Potential, barrier, closure, modulated_exponential, sampled

__version__ = "1.0.0"

__all__ = [
    "ArcPath",
    "Complex2x2",
    "IntegratorConfig",
    "Potential",
    "Route",
    "ScatteringAmplitudes",
    "SpectralFlags",
    "amplitudes_from_matrix",
    "barrier",
    "classify",
    "closure",
    "design",
    "design_sweep",
    "evolve_transfer",
    "matrix_from_amplitudes",
    "modulated_exponential",
    "sampled",
    "scatter",
    "solve_jost",
    "solve_riccati",
    "solve_s",
    "sweep",
    "verify_design",
]
