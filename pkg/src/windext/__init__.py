"""Winding-number criteria for holomorphic and meromorphic extendibility of
functions sampled on the unit circle."""
from .catalog import CatalogCase, Truth, make_case, random_case
from .criteria import (
    CertificationResult,
    MeromorphicExtension,
    ProbeFamily,
    WitnessResult,
    certify_by_deflation,
    certify_meromorphic_extension,
    classify_with_factors,
    deflated_witness_search,
    probe_winding,
    reduce_nonvanishing,
    shift_criterion_test,
    witness_search,
)
from .decompose import (
    factorize_nonvanishing,
    hermite_newton_coefficients,
    jet_at_point,
    newton_decompose,
    riesz_split,
)
from .errors import WindextError
from .extension import (
    ExtensionReport,
    RationalFunction,
    holomorphic_test,
    meromorphic_test,
    pole_locations,
    rational_recover,
)
from .spectral import (
    BoundaryFunction,
    CircleGrid,
    FourierSeries,
    Location,
    Polynomial,
    ZeroFactor,
    ZeroFactorSet,
    analyze,
    conjugate_reflect,
    load_samples,
    resample,
    save_samples,
    synthesize,
)
from .winding import WindingReport, check_zero_count_bound, phase_trace, winding_number, zero_count

__version__ = "0.1.0"
