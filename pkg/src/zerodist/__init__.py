"""Zero-distribution statistics of complex polynomials.

Size measures on the unit circle, a certified simultaneous root
finder, exact circle discrepancy, power-sum identities, Fejer-style
smoothing, and a certificate layer that verifies every bound on each
analyzed instance.
"""
from .certify import (
    CONSTANTS,
    CertificateReport,
    CertItem,
    DeltaSchedule,
    certificate_report,
    check_band,
    check_coefficient_bounds,
    check_identities,
    check_theorem1,
    check_theorem2,
    check_theorem2_plusminus,
    delta_schedule,
)
from .equidist import (
    DiscrepancyResult,
    SmoothedIndicator,
    SmoothingKernel,
    UnitAngleSet,
    build_smoothed_indicator,
    count_in_arc,
    damped_power_sum,
    damped_power_sum_integral,
    discrepancy,
    discrepancy_bruteforce,
    kernel_fourier,
    kernel_value,
    power_sum,
    power_sum_integral,
    schur_reduce,
    sin_abs_partial,
    sin_abs_tail_bound,
    smoothed_sum,
    smoothed_sum_direct,
)
from .families import (
    FamilySpec,
    binomial_pow,
    build_family,
    digits_pi,
    fekete,
    legendre_symbol,
    lehmer,
    littlewood,
    roots_of_unity,
    shrunk_power,
)
from .measures import MeasureReport, H_of, h_of, mahler, measure_report, script_M, \
    theorem1_identity_residual
from .poly import (
    Arc,
    Polynomial,
    eval_on_circle,
    from_roots,
    normalize_monic,
    read_coeffs,
    reduce_angle,
    write_coeffs,
)
from .quadrature import QuadResult, integrate_periodic, mean_log_abs, mean_log_plus
from .report import AnalysisReport, analyze_polynomial, canonical_json
from .rootfind import RootFindingError, RootSet, find_roots, verify_roots

__version__ = "0.1.0"
