"""Entangled-pair correlations, OPA spectra and photocount-difference statistics."""

from ._core import (
    CoverageError,
    IntegrationError,
    TruncationError,
    ValidationError,
    __version__,
    bin_sigma2,
    cavity_moments,
    conditional_stats,
    conjugate_projection,
    filter_moments,
    fig3_sweep,
    fluorescence_fwhm,
    fluorescence_spectrum,
    haar_unitary,
    homodyne_moments,
    log_grid,
    magic_bullet_trials,
    normalization_integral,
    phase_sensitive_spectrum,
    run_cli,
    sample_homodyne,
    schmidt_coefficients,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
