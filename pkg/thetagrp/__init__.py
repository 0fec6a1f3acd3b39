from ._base import Report, load_report
from .cohomology_model import (
    CohomologyError,
    chord_tangent_m,
    embedding_stats,
    verify_pullback_theta,
)
from .curves import (
    CurveError,
    DeterminantWeilFamily,
    HyperellipticCurve,
    period_matrix,
    residue_pairing_space,
    thomae_compare,
)
from .heisenberg import LPoint, RootOfUnity, ThetaGroup, all_points
from .spinor_quadratic import ChartError, QuadraticSpace, pfaffian, spinor_square_check
from .theta_analytic import (
    Characteristic,
    PeriodMatrix,
    PeriodMatrixError,
    TruncationError,
    analytic_weil_family,
    theta,
)
from .weil_normalize import (
    NormalizationError,
    PoleProximityError,
    SnapError,
    WeilFamily,
    igusa_alpha,
    moduli_point,
    symmetric_refine,
    weil_pairing,
)

__all__ = [
    "Report",
    "load_report",
    "CohomologyError",
    "chord_tangent_m",
    "embedding_stats",
    "verify_pullback_theta",
    "CurveError",
    "DeterminantWeilFamily",
    "HyperellipticCurve",
    "period_matrix",
    "residue_pairing_space",
    "thomae_compare",
    "LPoint",
    "RootOfUnity",
    "ThetaGroup",
    "all_points",
    "ChartError",
    "QuadraticSpace",
    "pfaffian",
    "spinor_square_check",
    "Characteristic",
    "PeriodMatrix",
    "PeriodMatrixError",
    "TruncationError",
    "analytic_weil_family",
    "theta",
    "NormalizationError",
    "PoleProximityError",
    "SnapError",
    "WeilFamily",
    "igusa_alpha",
    "moduli_point",
    "symmetric_refine",
    "weil_pairing",
]
