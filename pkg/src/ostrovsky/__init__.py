"""Spectral-stability laboratory for peaked waves of the reduced Ostrovsky equations."""
from .waves import (C_STAR, BreakingField, ConvergenceError, NoSolutionError, WaveProfile,
                    breaking_indicator, peaked_derivative, peaked_profile, profile_fourier,
                    smooth_wave_solve)
from .spectral_ops import (FourierVector, OperatorMatrix, assemble_K, assemble_multiplier,
                           assemble_operator)
from .spectra import (PseudospectrumField, SpectrumResult, compare_pseudospectra, eigenvalues,
                      pseudospectrum_field, smallest_singular, strip_estimate)

__version__ = "0.1.0"
