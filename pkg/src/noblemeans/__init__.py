"""Random noble means substitutions.

Random local mixtures of the conjugate rules a -> a^i b a^(m-i), b -> a:
word sampling, topological entropy, subword frequencies via the window lift,
exact cut-and-project geometry, and the mixed diffraction spectrum of the
golden-mean case, each backed by independent brute-force cross-checks.
"""
from ._kernels import backend
from .entropy import (
    EntropyResult,
    complexity_exact,
    complexity_formula,
    empirical_entropy,
    entropy_series,
    generation_count,
    generation_lengths,
    generation_set,
)
from .errors import NumericError, ResourceLimitError
from .frequencies import (
    cylinder_measure,
    empirical_frequencies,
    induced_matrix,
    induced_substitution,
    matrix_spectrum,
    perron_frequencies,
)
from .geometry import (
    PointSet,
    QuadraticInteger,
    autocorrelation_coefficients,
    empirical_density,
    realize,
    star_map,
    window_bounds,
    window_check,
)
from .diffraction import (
    FourierModulePoint,
    SpectrumTable,
    ac_density,
    amplitude_variance,
    amplitude_variance_closed_form,
    bragg_intensity,
    diffraction_table,
    exhaustive_moments,
    fourier_module_points,
    letter_amplitudes,
    mean_amplitude,
    monte_carlo_spectrum,
    pure_point_estimate,
    spectrum_export,
    spectrum_load,
)
from .substitution import (
    abelianization,
    deterministic_substitute,
    is_legal,
    iterate_random,
    legal_words,
    letter_images,
    random_substitute,
    substitution_matrix,
)
from .words import NobleMeansFamily, conjugate_multiplier, make_rng, multiplier

__version__ = "0.1.0"
