from .determinant import (
    DeterminantWeilFamily,
    ThomaeMatchError,
    ThomaeReport,
    negate_triple,
    theta_divisor_triple,
    thomae_compare,
    translate_triple,
    weil_function_determinant,
)
from .hyperelliptic import (
    CurveError,
    CurveFunction,
    CurvePoint,
    Divisor,
    HyperellipticCurve,
    ThetaCharacteristicDivisor,
    TwoTorsionDivisor,
    doubling_function,
    theta_characteristics,
    two_torsion_divisors,
)
from .periods import (
    JacobianFrame,
    PathError,
    abel_jacobi,
    period_matrix,
    riemann_divisor,
    torsion_characteristic,
)
from .residue import (
    ResiduePairingSpace,
    ResidueSpaceError,
    residue_census,
    residue_pairing_space,
    xi_corank,
)
from .riemann_roch import (
    RiemannRochError,
    SectionBasis,
    h0_theta_characteristic,
    linear_system_member,
    quadratic_differential_basis,
    riemann_roch_basis,
)

__all__ = [
    "CurveError",
    "CurveFunction",
    "CurvePoint",
    "Divisor",
    "HyperellipticCurve",
    "ThetaCharacteristicDivisor",
    "TwoTorsionDivisor",
    "doubling_function",
    "theta_characteristics",
    "two_torsion_divisors",
    "RiemannRochError",
    "SectionBasis",
    "riemann_roch_basis",
    "quadratic_differential_basis",
    "linear_system_member",
    "h0_theta_characteristic",
    "PathError",
    "JacobianFrame",
    "period_matrix",
    "abel_jacobi",
    "torsion_characteristic",
    "riemann_divisor",
    "ThomaeMatchError",
    "ThomaeReport",
    "DeterminantWeilFamily",
    "weil_function_determinant",
    "translate_triple",
    "negate_triple",
    "theta_divisor_triple",
    "thomae_compare",
    "ResidueSpaceError",
    "ResiduePairingSpace",
    "residue_pairing_space",
    "xi_corank",
    "residue_census",
]
