# -*- coding: utf-8 -*-
"""Determinantal Weil functions of a genus-2 curve and their comparison with theta quotients.

For a two-torsion class ``D_P = W_i - W_j`` and three points ``z = (z_1, z_2, z_3)``

    f_P(z) = prod_j psi(z_j)^(N/2) * (det h^P_k(z_j) / det h_k(z_j))^N

where ``h_k`` and ``h^P_k`` are the function parts of bases of ``H^0(2K)`` and
``H^0(2K + D_P)`` and ``psi = (x - e_i) / (x - e_j)`` has divisor ``2 D_P``. Both determinants
alternate under permutations of the ``z_j``, so ``f_P`` is a symmetric function of the triple
and descends to ``Sym^3 C``, which maps onto ``Jac^3 C``.

Translation by ``P`` is realised on triples through the linear system ``|z_1 + z_2 + z_3 - D_P|``
and ``x -> -x`` by the hyperelliptic involution, so :class:`DeterminantWeilFamily` plugs into
the normalization engine like the analytic backend.

"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from ..config import get_pole_tol
from ..heisenberg import LPoint
from ..theta_analytic import AnalyticWeilFamily, Characteristic, analytic_d
from ..weil_normalize import PoleProximityError, WeilFamily
from .hyperelliptic import (
    CurvePoint,
    Divisor,
    HyperellipticCurve,
    TwoTorsionDivisor,
    doubling_function,
    theta_characteristics,
    two_torsion_divisors,
)
from .periods import JacobianFrame, period_matrix, riemann_divisor, torsion_characteristic
from .riemann_roch import SectionBasis, linear_system_member, quadratic_differential_basis

__all__ = [
    "ThomaeMatchError",
    "Triple",
    "weil_function_determinant",
    "translate_triple",
    "negate_triple",
    "theta_divisor_triple",
    "DeterminantWeilFamily",
    "ThomaeReport",
    "thomae_compare",
]

logger = logging.getLogger(__name__)

Triple = Tuple[CurvePoint, CurvePoint, CurvePoint]

#: Constancy threshold (max coefficient of variation) for an accepted Thomae matching.
THOMAE_THRESHOLD = 1e-4
#: Random triples drawn per sample requested before giving up on pole-free ones.
SAMPLE_TRIES = 5


class ThomaeMatchError(RuntimeError):
    """No even characteristic makes the determinant/theta ratio constant."""

    def __init__(self, message: str, report: Optional["ThomaeReport"] = None) -> None:
        super().__init__(message)
        self.report = report


@lru_cache(maxsize=64)
def _twisted_basis(curve: HyperellipticCurve, D: Divisor) -> SectionBasis:
    return quadratic_differential_basis(curve, D)


def _pair_of(D: Divisor) -> Tuple[int, int]:
    plus = [p for p, m in D if m == 1 and p.is_weierstrass]
    minus = [p for p, m in D if m == -1 and p.is_weierstrass]
    if len(plus) != 1 or len(minus) != 1 or len(D.support) != 2:
        raise ValueError(f"expected a two-torsion divisor W_i - W_j, got {D.label}")
    return plus[0].weierstrass, minus[0].weierstrass


def _hadamard(matrix: npt.NDArray[np.complex128]) -> float:
    # |det M| <= product of column norms
    return float(np.prod(np.linalg.norm(matrix, axis=0)))


def weil_function_determinant(
    curve: HyperellipticCurve,
    D_P: Divisor,
    N: int,
    z: Sequence[CurvePoint],
    *,
    pole_tol: Optional[float] = None,
    allow_zero: bool = False,
) -> complex:
    """Evaluate the determinantal Weil function of ``D_P`` at the triple *z*.

    :param curve: Genus-2 curve.
    :param D_P: ``0`` or ``W_i - W_j``.
    :param N: Even level; the trivializer enters as ``psi^(N/2)``.
    :param z: Three affine, non-Weierstrass points.
    :param pole_tol: Relative threshold on both determinants (against the Hadamard bound).
    :param allow_zero: Accept a vanishing numerator determinant.
    :raises ValueError: If *N* is odd or *z* is not a triple.
    :raises PoleProximityError: If two points coincide, the reference determinant is small
        (``z`` sits on the theta divisor) or, unless *allow_zero*, the numerator is.

    """
    if N % 2:
        raise ValueError(f"determinantal Weil functions need an even level, got {N}")
    points = list(z)
    if len(points) != 3:
        raise ValueError(f"expected three points, got {len(points)}")
    pole_tol = get_pole_tol() if pole_tol is None else pole_tol
    if not D_P.terms:
        return 1.0 + 0.0j
    pair = _pair_of(D_P)
    for a in range(3):
        for b in range(a + 1, 3):
            if points[a] == points[b]:
                raise PoleProximityError(f"repeated point {points[a].label} in the triple")
    reference = _twisted_basis(curve, Divisor()).matrix(points)
    numerator = _twisted_basis(curve, D_P).matrix(points)
    det_ref = complex(np.linalg.det(reference))
    if abs(det_ref) < pole_tol * _hadamard(reference):
        raise PoleProximityError("reference determinant vanishes (triple on the theta divisor)")
    det_num = complex(np.linalg.det(numerator))
    if not allow_zero and abs(det_num) < pole_tol * _hadamard(numerator):
        raise PoleProximityError(f"determinant for {D_P.label} vanishes at the triple")
    psi = doubling_function(curve, pair)
    trivializer = np.prod([psi.evaluate(p) for p in points]) ** (N // 2)
    return complex(trivializer * (det_num / det_ref) ** N)


def translate_triple(
    curve: HyperellipticCurve, w: Sequence[CurvePoint], D: Divisor, rng: np.random.Generator
) -> Triple:
    """An effective representative of ``w_1 + w_2 + w_3 - D``."""
    if not D.terms:
        return tuple(w)  # type: ignore[return-value]
    member = linear_system_member(curve, Divisor.sum_of(w) - D, rng)
    return tuple(member.support)  # type: ignore[return-value]


def negate_triple(w: Sequence[CurvePoint]) -> Triple:
    """The hyperelliptic conjugate, ``x -> -x`` on ``Jac^3``."""
    return tuple(p.conjugate() for p in w)  # type: ignore[return-value]


def theta_divisor_triple(
    curve: HyperellipticCurve, D_P: Divisor, rng: np.random.Generator
) -> Triple:
    """A triple with ``w_1 + w_2 + w_3 ~ K + D_P + p`` for a random ``p``.

    The determinant for ``D_P`` vanishes there while the reference one does not.

    """
    p = curve.random_point(rng)
    member = linear_system_member(curve, curve.canonical_divisor() + D_P + Divisor.sum_of([p]), rng)
    return tuple(member.support)  # type: ignore[return-value]


class DeterminantWeilFamily(WeilFamily):
    """The level-2 determinantal Weil functions on ``C^3``.

    Torsion labels come from the Abel–Jacobi image of each ``W_i - W_j`` in *frame*, so the
    family is indexed by the same ``LPoint``s as the analytic family of ``frame.tau``.

    """

    def __init__(
        self,
        curve: HyperellipticCurve,
        frame: Optional[JacobianFrame] = None,
        *,
        seed: int = 0,
        pole_tol: Optional[float] = None,
    ) -> None:
        super().__init__(2, 2, analytic_d)
        self.curve = curve
        self.frame = period_matrix(curve) if frame is None else frame
        self.pole_tol = get_pole_tol() if pole_tol is None else pole_tol
        self._rng = np.random.default_rng(seed)
        self.labels: Dict[LPoint, TwoTorsionDivisor] = {}
        self.label_residual = 0.0
        for entry in two_torsion_divisors(curve):
            chi, residual = torsion_characteristic(self.frame, entry.divisor, 2)
            P = chi.to_lpoint()
            if P in self.labels:
                raise ValueError(
                    f"{entry.label} and {self.labels[P].label} share the label {chi.label}"
                )
            self.labels[P] = entry
            self.label_residual = max(self.label_residual, residual)
        logger.info(
            "labelled 16 two-torsion classes, worst lattice residual %.2e", self.label_residual
        )
        self.base_point = self.sample_point(np.random.default_rng(seed + 1))

    def divisor(self, P: LPoint) -> TwoTorsionDivisor:
        return self.labels[P]

    def evaluate(self, P: LPoint, x: Any, *, allow_zero: bool = False) -> complex:
        return weil_function_determinant(
            self.curve,
            self.labels[P].divisor,
            self.n,
            x,
            pole_tol=self.pole_tol,
            allow_zero=allow_zero,
        )

    def translate(self, x: Any, P: LPoint) -> Triple:
        return translate_triple(self.curve, x, self.labels[P].divisor, self._rng)

    def negate(self, x: Any) -> Triple:
        return negate_triple(x)

    def sample_point(self, rng: np.random.Generator) -> Triple:
        while True:
            w = tuple(self.curve.random_point(rng) for _ in range(3))
            if len(set(w)) == 3:
                return w  # type: ignore[return-value]


@dataclass
class ThomaeReport:
    """Outcome of :func:`thomae_compare`.

    ``per_point`` maps each torsion label to the mean ratio and the coefficients of variation of
    ``f_P / phi_P`` and of its square. ``candidates`` is the worst coefficient of variation for
    every even characteristic tried.

    """

    delta: str
    riemann_divisor: str
    riemann_residual: float
    delta_matches_riemann: bool
    sign: int
    sign_reason: str
    samples: int
    max_cv: float
    max_cv_squared: float
    per_point: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    candidates: Dict[str, float] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            "delta": self.delta,
            "riemann_divisor": self.riemann_divisor,
            "riemann_residual": self.riemann_residual,
            "delta_matches_riemann": self.delta_matches_riemann,
            "sign": self.sign,
            "sign_reason": self.sign_reason,
            "samples": self.samples,
            "max_cv": self.max_cv,
            "max_cv_squared": self.max_cv_squared,
            "per_point": self.per_point,
            "candidates": self.candidates,
        }


def _variation(values: npt.NDArray[np.complex128]) -> Tuple[complex, float]:
    if not np.all(np.isfinite(values)):
        return complex("nan"), float("inf")
    mean = complex(values.mean())
    if mean == 0:
        return mean, float("inf")
    return mean, float(np.std(values) / abs(mean))


def thomae_compare(
    curve: HyperellipticCurve,
    frame: Optional[JacobianFrame] = None,
    *,
    samples: int = 20,
    rng: Optional[np.random.Generator] = None,
    threshold: float = THOMAE_THRESHOLD,
    family: Optional[DeterminantWeilFamily] = None,
) -> ThomaeReport:
    """Compare ``f_P(w)`` with ``phi_P(AJ(w_1 + w_2 + w_3 - K - delta))`` over random triples.

    ``delta`` runs over the ten even theta characteristics; the one minimizing the worst
    coefficient of variation of ``f_P / phi_P`` over the nonzero ``P`` is selected. For level 2
    the translate direction is immaterial (``P = -P``) and the recorded sign is ``+1``.

    :raises ThomaeMatchError: If the best worst-case variation exceeds *threshold*.

    """
    rng = np.random.default_rng(0) if rng is None else rng
    frame = period_matrix(curve) if frame is None else frame
    family = DeterminantWeilFamily(curve, frame) if family is None else family
    analytic = AnalyticWeilFamily(2, frame.tau)
    prior, prior_residual = riemann_divisor(frame, rng)
    nonzero = [P for P in family.points if not P.is_zero]

    triples: List[Triple] = []
    values: Dict[LPoint, List[complex]] = {P: [] for P in nonzero}
    attempts = 0
    while len(triples) < samples:
        attempts += 1
        if attempts > SAMPLE_TRIES * samples:
            raise ThomaeMatchError(f"only {len(triples)} pole-free triples in {attempts} draws")
        w = family.sample_point(rng)
        try:
            row = {P: family.evaluate(P, w) for P in nonzero}
        except PoleProximityError as exc:
            logger.debug("triple rejected: %s", exc)
            continue
        triples.append(w)
        for P, value in row.items():
            values[P].append(value)
    sums = [sum(frame.point_integral(p) for p in w) for w in triples]

    scored = []
    for entry in theta_characteristics(curve):
        if entry.parity:
            continue
        offset = sum(m * frame.point_integral(p) for p, m in entry.divisor)
        stats: Dict[str, Dict[str, Any]] = {}
        worst = worst_squared = 0.0
        for P in nonzero:
            phi = np.array([analytic.theta_quotient_power(P, z - offset, 2) for z in sums])
            ratio = np.asarray(values[P], dtype=complex) / phi
            mean, cv = _variation(ratio)
            _, cv_squared = _variation(ratio**2)
            worst = max(worst, cv)
            worst_squared = max(worst_squared, cv_squared)
            stats[Characteristic.from_lpoint(P).label] = {
                "divisor": family.divisor(P).label,
                "mean": [mean.real, mean.imag],
                "cv": cv,
                "cv_squared": cv_squared,
            }
        logger.debug("delta %s: worst coefficient of variation %.2e", entry.label, worst)
        scored.append((worst, worst_squared, entry, stats))

    worst, worst_squared, best, stats = min(scored, key=lambda item: item[0])
    self_inverse = all(P == -P for P in nonzero)
    if not self_inverse:
        raise ThomaeMatchError(f"level {family.n} has points with P != -P; the sign is not fixed")
    report = ThomaeReport(
        delta=best.label,
        riemann_divisor=prior.label,
        riemann_residual=prior_residual,
        delta_matches_riemann=best.label == prior.label,
        sign=1,
        sign_reason=f"P = -P for all {len(nonzero)} nonzero 2-torsion points",
        samples=len(triples),
        max_cv=worst,
        max_cv_squared=worst_squared,
        per_point=stats,
        candidates={entry.label: score for score, _, entry, _ in scored},
    )
    logger.info(
        "thomae comparison: delta %s (riemann divisor %s), worst variation %.2e",
        best.label,
        prior.label,
        worst,
    )
    if worst > threshold:
        raise ThomaeMatchError(
            f"best characteristic {best.label} leaves variation {worst:.2e} > {threshold:.0e}",
            report,
        )
    return report
