# -*- coding: utf-8 -*-
"""Normalization of Weil sets.

A :class:`WeilFamily` is any indexed family ``{f_P}`` over the ``N``-torsion ``L`` that can be
evaluated on a torsor ``X`` and translated, ``t_P^* f(x) = f(x - P)``. The engine here never
looks inside a family; it only calls :meth:`WeilFamily.evaluate` and
:meth:`WeilFamily.translate`, so the analytic theta backend and the determinantal curve
backend are normalized by the same code.

Pipeline::

    gamma(P, Q)           = d(P,Q) f_{P+Q}(x0) / (f_P(x0) f_Q(x0 - P))
    normalized_power(P)   -> alpha_P^N  (closed form, exact sign eps(P))
    igusa_alpha(seeds)    -> alpha on all of L by induction along r_1, ..., r_2g
    symmetric_refine      -> pin alpha by alpha_{-P} f_{-P} = alpha_P f_P o [-1]
    moduli_point(delta)   -> (alpha_P f_P(delta))_P, normalized so the P = 0 entry is 1

Parity and Arf bookkeeping for level-2 characteristics lives at the bottom of the module.

"""

from __future__ import annotations

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .config import get_snap_tol
from .heisenberg import Character, LPoint, Pairing, RootOfUnity, all_points

__all__ = [
    "PoleProximityError",
    "SnapError",
    "NormalizationError",
    "InversionUnavailableError",
    "WeilFamily",
    "ScaledWeilFamily",
    "NormalizedPower",
    "NormalizationResult",
    "QuadraticFormZ2",
    "gamma",
    "normalized_power",
    "igusa_alpha",
    "symmetric_refine",
    "normal_law_residual",
    "inverse_law_residual",
    "character_twist",
    "weil_pairing",
    "weil_pairing_matrix",
    "is_nondegenerate",
    "moduli_point",
    "parity",
    "arf_invariant",
    "quadratic_form_from_characteristic",
]

logger = logging.getLogger(__name__)

#: Relative spread of gamma over check points above which a family is not a Weil set.
GAMMA_RTOL = 1e-7
#: Number of extra points at which gamma constancy is checked.
GAMMA_CHECK_POINTS = 3


class PoleProximityError(RuntimeError):
    """A Weil function was evaluated too close to one of its poles or zeros."""


class SnapError(RuntimeError):
    """A value expected on ``mu_N`` is too far from every ``N``-th root of unity."""


class NormalizationError(RuntimeError):
    """The normalization engine could not split the gamma cocycle."""


class InversionUnavailableError(RuntimeError):
    """The family's torsor has no inversion ``x -> -x``."""


class WeilFamily(ABC):
    """Indexed family ``P -> f_P`` of functions on a torsor under ``L = (Z/n)^(2g)``.

    Subclasses fix the torsor, the translation ``x -> x - P`` and a generic base point.
    ``evaluate(0, x)`` must be 1.

    """

    def __init__(self, n: int, g: int, d: Pairing) -> None:
        self.n = n
        self.g = g
        self.d = d
        self.base_point: Any = None

    @property
    def points(self) -> List[LPoint]:
        return all_points(self.n, self.g)

    def zero(self) -> LPoint:
        return LPoint.zero(self.n, self.g)

    @abstractmethod
    def evaluate(self, P: LPoint, x: Any, *, allow_zero: bool = False) -> complex:
        """Return ``f_P(x)``.

        :raises PoleProximityError: At a pole, or at a zero unless *allow_zero* is set.

        """

    @abstractmethod
    def translate(self, x: Any, P: LPoint) -> Any:
        """Return ``x - P``."""

    def negate(self, x: Any) -> Any:
        """Return ``-x``."""
        raise InversionUnavailableError(f"{type(self).__name__} has no inversion")

    @abstractmethod
    def sample_point(self, rng: np.random.Generator) -> Any:
        """Draw a point of the torsor in general position."""


class ScaledWeilFamily(WeilFamily):
    """``P -> c_P f_P`` for a base family and scalars ``c_P`` (missing scalars are 1)."""

    def __init__(self, base: WeilFamily, scalars: Mapping[LPoint, complex]) -> None:
        super().__init__(base.n, base.g, base.d)
        self.base = base
        self.scalars: Dict[LPoint, complex] = dict(scalars)
        self.base_point = base.base_point

    def scalar(self, P: LPoint) -> complex:
        return self.scalars.get(P, 1.0)

    def evaluate(self, P: LPoint, x: Any, *, allow_zero: bool = False) -> complex:
        return self.scalar(P) * self.base.evaluate(P, x, allow_zero=allow_zero)

    def translate(self, x: Any, P: LPoint) -> Any:
        return self.base.translate(x, P)

    def negate(self, x: Any) -> Any:
        return self.base.negate(x)

    def sample_point(self, rng: np.random.Generator) -> Any:
        return self.base.sample_point(rng)


def _check_points(family: WeilFamily, count: int) -> List[Any]:
    rng = np.random.default_rng(20240611)
    return [family.sample_point(rng) for _ in range(count)]


def _gamma_at(family: WeilFamily, P: LPoint, Q: LPoint, d: Pairing, x: Any) -> complex:
    top = d(P, Q).value * family.evaluate(P + Q, x)
    return top / (family.evaluate(P, x) * family.evaluate(Q, family.translate(x, P)))


def gamma(
    family: WeilFamily,
    P: LPoint,
    Q: LPoint,
    d: Optional[Pairing] = None,
    *,
    x0: Any = None,
    check: bool = True,
    rtol: float = GAMMA_RTOL,
) -> complex:
    """Return ``gamma(P, Q) = d(P,Q) f_{P+Q}(x0) / (f_P(x0) f_Q(x0 - P))``.

    :param family: Weil family.
    :param P: First torsion point.
    :param Q: Second torsion point.
    :param d: Pairing; defaults to the family's own.
    :param x0: Evaluation point; defaults to the family's base point.
    :param check: Re-evaluate at :data:`GAMMA_CHECK_POINTS` further points and require
        agreement to *rtol*.
    :raises PoleProximityError: If an evaluation point is not generic.
    :raises NormalizationError: If gamma depends on the evaluation point.

    """
    d = family.d if d is None else d
    x0 = family.base_point if x0 is None else x0
    value = _gamma_at(family, P, Q, d, x0)
    if check:
        for x in _check_points(family, GAMMA_CHECK_POINTS):
            other = _gamma_at(family, P, Q, d, x)
            spread = abs(other - value) / abs(value)
            if spread > rtol:
                raise NormalizationError(
                    f"gamma({P.coords}, {Q.coords}) is not constant (relative spread "
                    f"{spread:.2e}); the family is not a Weil set"
                )
    return value


@dataclass(frozen=True)
class NormalizedPower:
    """``tf_P^N = epsilon * constant * f_P^N``."""

    point: LPoint
    constant: complex
    epsilon: int
    family: WeilFamily = field(repr=False)

    @property
    def alpha_power(self) -> complex:
        """``alpha_P^N``."""
        return self.epsilon * self.constant

    def __call__(self, x: Any) -> complex:
        return self.alpha_power * self.family.evaluate(self.point, x) ** self.family.n


def _epsilon(P: LPoint, d: Pairing) -> int:
    n = P.n
    root = d(P, P) ** (n * (n - 1) // 2)
    if root.exponent == 0:
        return 1
    if 2 * root.exponent == n:
        return -1
    raise NormalizationError(f"eps({P.coords}) = {root} is not a sign")


def normalized_power(
    family: WeilFamily, P: LPoint, d: Optional[Pairing] = None, *, x0: Any = None
) -> NormalizedPower:
    """Return ``tf_P^N`` as a closed-form multiple of ``f_P^N``.

    The multiple is ``eps(P) prod_m f_{mP}(x0) / (f_P(x0)^N prod_m f_{mP}(x0 - P))`` over
    ``m = 1 .. N-1``, with ``eps(P) = d(P, P)^(N(N-1)/2)``: 1 for odd ``N`` and a sign for even
    ``N``.

    :raises PoleProximityError: If ``x0`` or ``x0 - P`` is not generic.

    """
    d = family.d if d is None else d
    x0 = family.base_point if x0 is None else x0
    if P.is_zero:
        return NormalizedPower(P, 1.0 + 0.0j, 1, family)
    n = family.n
    shifted = family.translate(x0, P)
    numerator = 1.0 + 0.0j
    denominator = family.evaluate(P, x0) ** n
    for m in range(1, n):
        numerator *= family.evaluate(m * P, x0)
        denominator *= family.evaluate(m * P, shifted)
    return NormalizedPower(P, numerator / denominator, _epsilon(P, d), family)


def _principal_root(value: complex, n: int) -> complex:
    return complex(np.abs(value) ** (1.0 / n) * np.exp(1j * np.angle(value) / n))


@dataclass(frozen=True, eq=False)
class NormalizationResult:
    """A normalization ``tf_P = alpha_P f_P`` of a Weil family.

    ``ambiguous[P]`` is set where ``alpha_P`` is only known up to sign: for even ``N``, every
    ``P`` with an odd coordinate. It is never set for odd ``N``.

    """

    n: int
    g: int
    d: Pairing
    alpha: Dict[LPoint, complex]
    ambiguous: Dict[LPoint, bool]
    family: ScaledWeilFamily
    closure_residual: float
    normal_residual: float
    seeds: Tuple[int, ...]
    symmetric: bool = False

    def tf(self, P: LPoint, x: Any, *, allow_zero: bool = False) -> complex:
        """Evaluate the normalized function ``tf_P(x)``."""
        return self.family.evaluate(P, x, allow_zero=allow_zero)

    @property
    def any_ambiguous(self) -> bool:
        return any(self.ambiguous.values())


def _sign_ambiguous(P: LPoint) -> bool:
    # alpha_P is fixed up to the sign character; it moves P exactly when a coordinate is odd
    return P.n % 2 == 0 and any(c % 2 for c in P.coords)


def _decompose(P: LPoint) -> List[int]:
    return list(P.coords)


def normal_law_residual(
    family: WeilFamily,
    d: Optional[Pairing] = None,
    *,
    samples: int = 50,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Worst relative residual of ``f_P(x) f_Q(x - P) = d(P,Q) f_{P+Q}(x)`` over random samples."""
    d = family.d if d is None else d
    rng = np.random.default_rng(0) if rng is None else rng
    points = family.points
    worst = 0.0
    for _ in range(samples):
        P = points[rng.integers(len(points))]
        Q = points[rng.integers(len(points))]
        x = family.sample_point(rng)
        lhs = family.evaluate(P, x) * family.evaluate(Q, family.translate(x, P))
        rhs = d(P, Q).value * family.evaluate(P + Q, x)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    return worst


def igusa_alpha(
    family: WeilFamily,
    d: Optional[Pairing] = None,
    seeds: Optional[Sequence[int]] = None,
    *,
    samples: int = 50,
    rng: Optional[np.random.Generator] = None,
) -> NormalizationResult:
    """Normalize *family* by induction along the coordinate basis ``r_1, ..., r_2g``.

    ``alpha(r_i)`` is the principal ``N``-th root of :func:`normalized_power` times
    ``zeta^seeds[i]``; then ``alpha((m+1) r_i) = alpha(m r_i) alpha(r_i) / gamma(m r_i, r_i)``
    and mixed points ``sum m_k r_k`` are reached by adding one basis multiple at a time in
    index order.

    :param family: Weil family to normalize.
    :param d: Pairing of the target normal set; defaults to the family's own.
    :param seeds: Exponents of ``mu_N`` multiplying ``alpha(r_i)``; all zero by default.
    :param samples: Number of random ``(P, Q, x)`` triples for the normal-law diagnostic.
    :param rng: Generator for the diagnostic samples.
    :raises NormalizationError: If a gamma evaluation fails; the offending pair is named.

    """
    d = family.d if d is None else d
    n, g = family.n, family.g
    seeds = tuple(int(s) % n for s in (seeds if seeds is not None else (0,) * (2 * g)))
    if len(seeds) != 2 * g:
        raise ValueError(f"expected {2 * g} seeds, got {len(seeds)}")

    def gamma_or_fail(P: LPoint, Q: LPoint) -> complex:
        try:
            return gamma(family, P, Q, d)
        except (PoleProximityError, NormalizationError) as exc:
            raise NormalizationError(f"gamma({P.coords}, {Q.coords}) failed: {exc}") from exc

    zero = family.zero()
    alpha: Dict[LPoint, complex] = {zero: 1.0 + 0.0j}
    multiples: Dict[Tuple[int, int], complex] = {}
    closure = 0.0
    for i in range(2 * g):
        r = LPoint.basis(n, g, i)
        power = normalized_power(family, r, d)
        base = _principal_root(power.alpha_power, n) * RootOfUnity(n, seeds[i]).value
        multiples[(i, 1)] = base
        for m in range(1, n):
            nxt = multiples[(i, m)] * base / gamma_or_fail(m * r, r)
            if m + 1 < n:
                multiples[(i, m + 1)] = nxt
            else:
                closure = max(closure, abs(nxt - 1.0))
        logger.debug("basis point r_%d: alpha = %s", i + 1, base)

    for P in family.points:
        if P.is_zero:
            continue
        partial = zero
        value = 1.0 + 0.0j
        for i, m in enumerate(_decompose(P)):
            if m == 0:
                continue
            step = m * LPoint.basis(n, g, i)
            if partial.is_zero:
                value = multiples[(i, m)]
            else:
                value = value * multiples[(i, m)] / gamma_or_fail(partial, step)
            partial = partial + step
        alpha[P] = value

    scaled = ScaledWeilFamily(family, alpha)
    residual = normal_law_residual(scaled, d, samples=samples, rng=rng)
    ambiguous = {P: _sign_ambiguous(P) for P in family.points}
    logger.info(
        "normalized level-%d family: closure residual %.2e, normal-law residual %.2e",
        n,
        closure,
        residual,
    )
    return NormalizationResult(n, g, d, alpha, ambiguous, scaled, closure, residual, seeds)


def symmetric_refine(
    family: WeilFamily,
    result: NormalizationResult,
    *,
    snap_tol: Optional[float] = None,
    samples: int = 50,
    rng: Optional[np.random.Generator] = None,
) -> NormalizationResult:
    """Twist a normalization by the character that makes it symmetric.

    The ratio ``rho(P) = tf_{-P}(x0) / tf_P(-x0)`` is a character with values in ``mu_N``;
    twisting by ``chi`` with ``chi^2 = rho`` gives ``tf_{-P} = tf_P o [-1]``. For odd ``N`` the
    square root is unique. For even ``N`` it is determined up to a sign character, so every
    ``P`` with an odd coordinate is flagged ambiguous.

    :raises InversionUnavailableError: If the family has no ``x -> -x``.
    :raises SnapError: If ``rho`` is not on ``mu_N``.
    :raises NormalizationError: If ``rho`` has no square root in ``mu_N``.

    """
    snap_tol = get_snap_tol() if snap_tol is None else snap_tol
    n, g = result.n, result.g
    x0 = family.base_point
    minus_x0 = family.negate(x0)
    twist = []
    for i in range(2 * g):
        r = LPoint.basis(n, g, i)
        rho, distance = RootOfUnity.snap(result.tf(-r, x0) / result.tf(r, minus_x0), n)
        if distance > snap_tol:
            raise SnapError(f"rho(r_{i + 1}) is {distance:.2e} away from mu_{n}")
        if n % 2:
            twist.append(rho.exponent * (n + 1) // 2)
        elif rho.exponent % 2:
            raise NormalizationError(f"rho(r_{i + 1}) = zeta^{rho.exponent} has no square root")
        else:
            twist.append(rho.exponent // 2)
    chi = Character(n, g, tuple(twist))
    alpha = {P: a * chi(P).value for P, a in result.alpha.items()}
    ambiguous = {P: _sign_ambiguous(P) for P in alpha}
    scaled = ScaledWeilFamily(family, alpha)
    residual = normal_law_residual(scaled, result.d, samples=samples, rng=rng)
    return NormalizationResult(
        n,
        g,
        result.d,
        alpha,
        ambiguous,
        scaled,
        result.closure_residual,
        residual,
        result.seeds,
        symmetric=True,
    )


def inverse_law_residual(family: WeilFamily, result: NormalizationResult) -> float:
    """Worst relative residual of ``alpha_P alpha_{-P} = gamma(P, -P)`` over all of ``L``."""
    worst = 0.0
    for P in family.points:
        expected = gamma(family, P, -P, result.d, check=False)
        worst = max(worst, abs(result.alpha[P] * result.alpha[-P] - expected) / abs(expected))
    return worst


def character_twist(
    first: NormalizationResult, second: NormalizationResult, *, snap_tol: Optional[float] = None
) -> Character:
    """Return ``chi`` with ``alpha'_P = chi(P) alpha_P``.

    :raises SnapError: If a ratio is off ``mu_N``.
    :raises NormalizationError: If the ratios do not form a character.

    """
    snap_tol = get_snap_tol() if snap_tol is None else snap_tol
    n, g = first.n, first.g
    ratios: Dict[LPoint, RootOfUnity] = {}
    for P, a in first.alpha.items():
        root, distance = RootOfUnity.snap(second.alpha[P] / a, n)
        if distance > snap_tol:
            raise SnapError(f"alpha ratio at {P.coords} is {distance:.2e} away from mu_{n}")
        ratios[P] = root
    chi = Character(n, g, tuple(ratios[LPoint.basis(n, g, i)].exponent for i in range(2 * g)))
    for P, root in ratios.items():
        if chi(P) != root:
            raise NormalizationError(f"alpha ratios are not a character (fails at {P.coords})")
    return chi


def weil_pairing(
    family: WeilFamily,
    P: LPoint,
    Q: LPoint,
    *,
    x: Any = None,
    snap_tol: Optional[float] = None,
) -> Tuple[RootOfUnity, float]:
    """Return ``e_N(P, Q) = f_P(x) f_Q(x - P) / (f_Q(x) f_P(x - Q))`` snapped to ``mu_N``.

    :returns: ``(root, snap distance)``.
    :raises SnapError: If the distance exceeds *snap_tol*.

    """
    snap_tol = get_snap_tol() if snap_tol is None else snap_tol
    x = family.base_point if x is None else x
    top = family.evaluate(P, x) * family.evaluate(Q, family.translate(x, P))
    bottom = family.evaluate(Q, x) * family.evaluate(P, family.translate(x, Q))
    root, distance = RootOfUnity.snap(top / bottom, family.n)
    if distance > snap_tol:
        raise SnapError(
            f"e_N({P.coords}, {Q.coords}) is {distance:.2e} away from mu_{family.n}"
        )
    return root, distance


def weil_pairing_matrix(
    family: WeilFamily, *, snap_tol: Optional[float] = None
) -> Tuple[npt.NDArray[np.int64], float]:
    """Exponents of ``e_N(r_i, r_j)`` on the coordinate basis, and the worst snap distance."""
    n, g = family.n, family.g
    basis = [LPoint.basis(n, g, i) for i in range(2 * g)]
    matrix = np.zeros((2 * g, 2 * g), dtype=np.int64)
    worst = 0.0
    for (i, P), (j, Q) in itertools.product(enumerate(basis), repeat=2):
        root, distance = weil_pairing(family, P, Q, snap_tol=snap_tol)
        matrix[i, j] = root.exponent
        worst = max(worst, distance)
    return matrix, worst


def _integer_det(matrix: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(int(v)) for v in row] for row in matrix]
    size = len(rows)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, size):
            factor = rows[r][col] / rows[col][col]
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return int(det)


def is_nondegenerate(matrix: npt.ArrayLike, n: int) -> bool:
    """Return whether an exponent matrix is invertible over ``Z/n``."""
    return int(np.gcd(_integer_det(np.asarray(matrix).tolist()) % n, n)) == 1


def moduli_point(result: NormalizationResult, delta: Any) -> npt.NDArray[np.complex128]:
    """Return ``(tf_P(delta))_P`` in lexicographic torsion order, scaled so ``P = 0`` gives 1.

    For even ``N`` entries at ambiguous points carry an unresolved sign; their squares do not.

    :raises PoleProximityError: If ``delta`` is a pole of some ``tf_P``.

    """
    points = all_points(result.n, result.g)
    values = np.array([result.tf(P, delta, allow_zero=True) for P in points], dtype=complex)
    return values / values[0]


def parity(chi: Any) -> int:
    """Return ``4 a.b mod 2`` for a half-integer characteristic; 1 means odd.

    :raises ValueError: If the denominator is not 2.

    """
    if chi.n != 2:
        raise ValueError(f"parity needs a half-integer characteristic, got denominator {chi.n}")
    return sum(x * y for x, y in zip(chi.a, chi.b)) % 2


def _eta(u: Sequence[int], v: Sequence[int], g: int) -> int:
    return (sum(u[i] * v[g + i] + u[g + i] * v[i] for i in range(g))) % 2


@dataclass(frozen=True)
class QuadraticFormZ2:
    """A quadratic refinement ``L`` of the mod-2 symplectic form on ``(Z/2)^(2g)``."""

    g: int
    values: Mapping[Tuple[int, ...], int]

    def __post_init__(self) -> None:
        vectors = list(itertools.product(range(2), repeat=2 * self.g))
        if set(self.values) != set(vectors):
            raise ValueError(f"values must cover all {len(vectors)} points of (Z/2)^{2 * self.g}")
        for u, v in itertools.product(vectors, repeat=2):
            w = tuple((x + y) % 2 for x, y in zip(u, v))
            if (self.values[w] + self.values[u] + self.values[v]) % 2 != _eta(u, v, self.g):
                raise ValueError(f"not a quadratic refinement: fails at u={u}, v={v}")

    def __call__(self, u: Sequence[int]) -> int:
        return self.values[tuple(int(x) % 2 for x in u)] % 2


def arf_invariant(q: QuadraticFormZ2) -> int:
    """Return 0 if ``sum (-1)^q(u) = +2^g`` and 1 if it is ``-2^g``.

    :raises ValueError: If the signed sum is neither.

    """
    total = sum(1 if q(u) == 0 else -1 for u in q.values)
    if total == 2**q.g:
        return 0
    if total == -(2**q.g):
        return 1
    raise ValueError(f"signed sum {total} is not +-2^{q.g}")


def quadratic_form_from_characteristic(chi: Any) -> QuadraticFormZ2:
    """Return ``f_L(u) = e(L + u) + e(L)`` for the half-integer characteristic *chi*.

    Its Arf invariant is :func:`parity` of *chi*.

    """
    g = len(chi.a)
    base = parity(chi)
    values = {}
    for u in itertools.product(range(2), repeat=2 * g):
        a = [(x + y) % 2 for x, y in zip(chi.a, u[:g])]
        b = [(x + y) % 2 for x, y in zip(chi.b, u[g:])]
        values[u] = (sum(x * y for x, y in zip(a, b)) + base) % 2
    return QuadraticFormZ2(g, values)
