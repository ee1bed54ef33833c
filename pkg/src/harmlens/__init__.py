"""Harmonic maps on the unit disk built from atomic measures.

Construction (kernel sums, the shear integral), resolution-limited geometric
certification (univalence, typical reality, convexity in a direction), and
extremal searches (critical scalings, collision witnesses, radius brackets,
coefficient extremes). A compiled segment-intersection core is used when the
extension built; a pure-Python fallback keeps everything functional without it.
"""

__version__ = "0.1.0"

from .certify import (
    OUTCOME_CERTIFIED,
    OUTCOME_COLLISION,
    OUTCOME_INCONCLUSIVE,
    CheckResult,
    ScanResult,
    UnivalenceVerdict,
    boundary_univalence_certify,
    certification_contour,
    collision_search,
    direction_convexity_check,
    effective_exclusion,
    local_univalence_scan,
    starlike_boundary_check,
    typical_reality_check,
)
from .domains import (
    LENS_HALF_HEIGHT,
    SQRT2,
    CircleMeasure,
    Polyline,
    Region,
    SegmentMeasure,
    measure_pair_from_json,
    measure_pair_to_json,
    normalize_measure,
    on_lens_boundary_arc,
    region_boundary,
    region_contains,
    region_from_spec,
    sample_measures,
)
from .errors import (
    AccuracyError,
    BranchError,
    DegenerateError,
    DivisionError,
    DomainError,
    FalsificationError,
    HarmlensError,
    InvalidMeasureError,
    PoleError,
    SearchFailureError,
)
from .geometry import (
    HAVE_COMPILED_CORE,
    axis_crossing_counts,
    polyline_self_intersections,
    winding_number,
    winding_numbers,
)
from .kernels import (
    AnalyticEvaluator,
    ft_eval,
    ftR_deriv,
    ftR_eval,
    goodman_G,
    goodman_G_deriv,
    goodman_in_S,
    herglotz_eval,
    measure_to_series,
    named_evaluator,
    picard_deriv,
    picard_map,
    picard_u,
    psi,
    psi_inv,
    robertson_eval,
    robertson_evaluator,
    slit_rep_eval,
)
from .quadrature import path_integral, radial_mean
from .search import (
    GOODMAN_RADIUS,
    RadiusBracket,
    WitnessReport,
    coefficient_extremes,
    conjecture_scan,
    critical_t_for_boundary_point,
    nonconvexity_witness,
    picard_preimages,
    proposition_measure,
    radius_estimate,
    scaled_critical_T,
    theorem5_collision,
    theorem5_map,
    two_atom_boundary_residual,
)
from .series import PowerSeries
from .shear import (
    GenericHarmonicInput,
    HarmonicMap,
    SenseCheck,
    decompose,
    dilatation,
    eval_many,
    eval_map,
    harmonic_evaluator,
    hprime_gprime,
    jacobian,
    map_imag,
    sense_preserving_scan,
    shear,
)

__all__ = [
    "AccuracyError",
    "AnalyticEvaluator",
    "BranchError",
    "CheckResult",
    "CircleMeasure",
    "DegenerateError",
    "DivisionError",
    "DomainError",
    "FalsificationError",
    "GenericHarmonicInput",
    "GOODMAN_RADIUS",
    "HarmlensError",
    "HarmonicMap",
    "HAVE_COMPILED_CORE",
    "InvalidMeasureError",
    "LENS_HALF_HEIGHT",
    "OUTCOME_CERTIFIED",
    "OUTCOME_COLLISION",
    "OUTCOME_INCONCLUSIVE",
    "PoleError",
    "Polyline",
    "PowerSeries",
    "RadiusBracket",
    "Region",
    "ScanResult",
    "SearchFailureError",
    "SegmentMeasure",
    "SenseCheck",
    "SQRT2",
    "UnivalenceVerdict",
    "WitnessReport",
    "axis_crossing_counts",
    "boundary_univalence_certify",
    "certification_contour",
    "coefficient_extremes",
    "collision_search",
    "conjecture_scan",
    "critical_t_for_boundary_point",
    "decompose",
    "dilatation",
    "direction_convexity_check",
    "effective_exclusion",
    "eval_many",
    "eval_map",
    "ft_eval",
    "ftR_deriv",
    "ftR_eval",
    "goodman_G",
    "goodman_G_deriv",
    "goodman_in_S",
    "harmonic_evaluator",
    "herglotz_eval",
    "hprime_gprime",
    "jacobian",
    "local_univalence_scan",
    "map_imag",
    "measure_pair_from_json",
    "measure_pair_to_json",
    "measure_to_series",
    "named_evaluator",
    "nonconvexity_witness",
    "normalize_measure",
    "on_lens_boundary_arc",
    "path_integral",
    "picard_deriv",
    "picard_map",
    "picard_preimages",
    "picard_u",
    "polyline_self_intersections",
    "proposition_measure",
    "psi",
    "psi_inv",
    "radial_mean",
    "radius_estimate",
    "region_boundary",
    "region_contains",
    "region_from_spec",
    "robertson_eval",
    "robertson_evaluator",
    "sample_measures",
    "scaled_critical_T",
    "sense_preserving_scan",
    "shear",
    "slit_rep_eval",
    "starlike_boundary_check",
    "theorem5_collision",
    "theorem5_map",
    "two_atom_boundary_residual",
    "typical_reality_check",
    "winding_number",
    "winding_numbers",
]
