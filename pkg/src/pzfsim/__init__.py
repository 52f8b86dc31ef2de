"""Hybrid phase-aligned / baseband zero-forcing precoding simulator for
massive multiuser MIMO downlinks.

The package pairs exact Monte Carlo spectral-efficiency measurement with the
matching closed-form large-array rate expressions.  See README.md for the
command-line interface; ``kernel_backend`` records whether the compiled or
the pure-python hot kernels were selected at import.
"""

from ._kernels import BACKEND as kernel_backend
from ._version import __version__
from .analysis import SystemScale, fczf_asymptotic_rate, pzf_rate_bound
from .channels import MmWaveParams, mmwave_channel, rayleigh_channel, ula_response
from .errors import (
    ConfigError,
    DimensionError,
    DomainError,
    HarnessError,
    PzfSimError,
    SingularMatrixError,
)
from .harness import (
    CouplingStats,
    SimulationConfig,
    SweepCell,
    SweepResult,
    coupling_statistics,
    run_sweep,
    write_csv,
)
from .metrics import LinkBudget, sinr_per_user, sum_spectral_efficiency
from .numerics import (
    complex_gaussian_matrix,
    exponential_integral_scaled,
    exponential_integral_scaled_sum,
    frobenius_norm,
    gram_inverse,
    hermitian,
    rng_from_seed,
)
from .precoders import (
    QuantizationSpec,
    baseband_zf,
    bmimo_precoder,
    effective_channel,
    full_zf,
    pzf_rf,
    quantize_rf,
)

__all__ = [
    "__version__",
    "kernel_backend",
    "ConfigError",
    "DimensionError",
    "DomainError",
    "HarnessError",
    "PzfSimError",
    "SingularMatrixError",
    "SystemScale",
    "fczf_asymptotic_rate",
    "pzf_rate_bound",
    "MmWaveParams",
    "mmwave_channel",
    "rayleigh_channel",
    "ula_response",
    "CouplingStats",
    "SimulationConfig",
    "SweepCell",
    "SweepResult",
    "coupling_statistics",
    "run_sweep",
    "write_csv",
    "LinkBudget",
    "sinr_per_user",
    "sum_spectral_efficiency",
    "complex_gaussian_matrix",
    "exponential_integral_scaled",
    "exponential_integral_scaled_sum",
    "frobenius_norm",
    "gram_inverse",
    "hermitian",
    "rng_from_seed",
    "QuantizationSpec",
    "baseband_zf",
    "bmimo_precoder",
    "effective_channel",
    "full_zf",
    "pzf_rf",
    "quantize_rf",
]
