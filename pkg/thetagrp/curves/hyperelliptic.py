# -*- coding: utf-8 -*-
"""Genus-2 curves ``y^2 = f(x)`` with ``f`` a monic sextic.

Places are affine points, the six Weierstrass points ``W_i = (e_i, 0)`` (branch points sorted
by real then imaginary part, 1-based labels) and the two points at infinity ``inf+`` / ``inf-``
on which ``y / x^3`` tends to ``+1`` / ``-1``. The canonical class is ``inf+ + inf-`` (the
divisor of ``dx/y``) and ``2 W_i ~ K`` for every ``i``; both identities are used as exact
divisor arithmetic throughout.

"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from numpy.polynomial import Polynomial

from .laurent import Laurent, affine_expansion, infinity_expansion, weierstrass_expansion

__all__ = [
    "CurveError",
    "HyperellipticCurve",
    "CurvePoint",
    "Divisor",
    "CurveFunction",
    "TwoTorsionDivisor",
    "ThetaCharacteristicDivisor",
    "two_torsion_divisors",
    "doubling_function",
    "two_torsion_doubling_check",
    "theta_characteristics",
]

logger = logging.getLogger(__name__)

#: Smallest accepted separation of two branch points.
MIN_BRANCH_SEPARATION = 1e-8
#: Relative residual ``|y^2 - f(x)| / scale`` accepted for an affine point.
ON_CURVE_RTOL = 1e-10
#: Default number of Laurent terms used when evaluating functions at special places.
DEFAULT_SERIES_PREC = 16


class CurveError(ValueError):
    """Degenerate curve data or a point that is not on the curve."""


@dataclass(frozen=True, slots=True)
class CurvePoint:
    """A place of the curve.

    ``infinity`` is ``0`` for affine points and ``+1`` / ``-1`` for ``inf+`` / ``inf-``;
    ``weierstrass`` is the 1-based index of a Weierstrass point and ``None`` otherwise.

    """

    x: Optional[complex] = None
    y: Optional[complex] = None
    infinity: int = 0
    weierstrass: Optional[int] = None

    @property
    def is_infinite(self) -> bool:
        return self.infinity != 0

    @property
    def is_weierstrass(self) -> bool:
        return self.weierstrass is not None

    @property
    def ramification(self) -> int:
        """Ramification index of ``x`` at this place (2 at Weierstrass points)."""
        return 2 if self.is_weierstrass else 1

    def conjugate(self) -> "CurvePoint":
        """The image under ``(x, y) -> (x, -y)``."""
        if self.is_infinite:
            return CurvePoint(infinity=-self.infinity)
        if self.is_weierstrass:
            return self
        return CurvePoint(self.x, -self.y)

    def sort_key(self) -> Tuple[float, ...]:
        if self.is_infinite:
            return (1.0, -float(self.infinity), 0.0, 0.0, 0.0)
        x, y = complex(self.x), complex(self.y)
        return (0.0, x.real, x.imag, y.real, y.imag)

    @property
    def label(self) -> str:
        if self.is_infinite:
            return "inf+" if self.infinity > 0 else "inf-"
        if self.is_weierstrass:
            return f"W{self.weierstrass}"
        return f"({complex(self.x):.6g}, {complex(self.y):.6g})"


@dataclass(frozen=True)
class Divisor:
    """A finite formal sum of places with integer multiplicities.

    Terms are merged, zero multiplicities dropped and the remainder kept in a canonical order,
    so equal divisors compare and hash equal.

    """

    terms: Tuple[Tuple[CurvePoint, int], ...] = ()

    def __post_init__(self) -> None:
        merged: Dict[CurvePoint, int] = {}
        for point, mult in self.terms:
            merged[point] = merged.get(point, 0) + int(mult)
        items = sorted(
            ((p, m) for p, m in merged.items() if m != 0), key=lambda item: item[0].sort_key()
        )
        object.__setattr__(self, "terms", tuple(items))

    @classmethod
    def of(cls, mapping: Mapping[CurvePoint, int]) -> "Divisor":
        return cls(tuple(mapping.items()))

    @classmethod
    def sum_of(cls, points: Iterable[CurvePoint]) -> "Divisor":
        return cls(tuple((p, 1) for p in points))

    def __iter__(self) -> Iterator[Tuple[CurvePoint, int]]:
        return iter(self.terms)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(self.terms + other.terms)

    def __neg__(self) -> "Divisor":
        return Divisor(tuple((p, -m) for p, m in self.terms))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __rmul__(self, k: int) -> "Divisor":
        return Divisor(tuple((p, k * m) for p, m in self.terms))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.terms)

    @property
    def support(self) -> List[CurvePoint]:
        return [p for p, _ in self.terms]

    def multiplicity(self, point: CurvePoint) -> int:
        for p, m in self.terms:
            if p == point:
                return m
        return 0

    def is_effective(self) -> bool:
        return all(m > 0 for _, m in self.terms)

    @property
    def label(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for p, m in self.terms:
            sign = "-" if m < 0 else "+"
            coeff = "" if abs(m) == 1 else str(abs(m))
            parts.append(f"{sign}{coeff}{p.label}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


@dataclass(frozen=True, eq=False)
class HyperellipticCurve:
    """``y^2 = prod_i (x - e_i)`` for six distinct branch points ``e_i``.

    :raises CurveError: If two branch points are closer than :data:`MIN_BRANCH_SEPARATION`
        ("discriminant" vanishes to working precision).

    """

    branch_points: Tuple[complex, ...]

    def __post_init__(self) -> None:
        points = tuple(
            sorted((complex(e) for e in self.branch_points), key=lambda e: (e.real, e.imag))
        )
        if len(points) != 6:
            raise CurveError(f"a genus-2 sextic needs 6 branch points, got {len(points)}")
        sep = min(abs(a - b) for a, b in itertools.combinations(points, 2))
        if sep < MIN_BRANCH_SEPARATION:
            raise CurveError(
                f"discriminant vanishes: branch points {sep:.2e} apart (minimum separation "
                f"{MIN_BRANCH_SEPARATION:g})"
            )
        object.__setattr__(self, "branch_points", points)

    @classmethod
    def from_coefficients(cls, coeffs_desc: Sequence[complex]) -> "HyperellipticCurve":
        """Build from the coefficients of a sextic, highest degree first.

        The sextic is made monic; the model changes by a constant rescaling of ``y``.

        """
        coeffs = np.asarray(coeffs_desc, dtype=complex)
        if coeffs.shape != (7,) or coeffs[0] == 0:
            raise CurveError("expected 7 coefficients of a degree-6 polynomial, leading first")
        roots = np.roots(coeffs / coeffs[0])
        return cls(tuple(complex(r) for r in roots))

    @cached_property
    def coefficients(self) -> npt.NDArray[np.complex128]:
        """Coefficients of ``f``, highest degree first."""
        return np.poly(np.array(self.branch_points))

    @cached_property
    def polynomial(self) -> Polynomial:
        return Polynomial(self.coefficients[::-1])

    @cached_property
    def scale(self) -> float:
        """Magnitude scale ``max(1, |e|)^6`` for on-curve residuals."""
        return max(1.0, max(abs(e) for e in self.branch_points)) ** 6

    @cached_property
    def min_separation(self) -> float:
        return min(abs(a - b) for a, b in itertools.combinations(self.branch_points, 2))

    def f(self, x: complex) -> complex:
        return complex(np.polyval(self.coefficients, x))

    def weierstrass(self, index: int) -> CurvePoint:
        """The Weierstrass point ``W_index`` (1-based)."""
        if not 1 <= index <= 6:
            raise ValueError(f"Weierstrass index must be in 1..6, got {index}")
        return CurvePoint(self.branch_points[index - 1], 0j, 0, index)

    def infinity(self, sign: int) -> CurvePoint:
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign}")
        return CurvePoint(infinity=sign)

    def canonical_divisor(self) -> Divisor:
        """``K = inf+ + inf-``, the divisor of ``dx/y``."""
        return Divisor(((self.infinity(1), 1), (self.infinity(-1), 1)))

    def point(self, x: complex, y: complex) -> CurvePoint:
        """Validate ``(x, y)`` and return it as a place.

        :raises CurveError: If ``|y^2 - f(x)|`` exceeds :data:`ON_CURVE_RTOL` times the scale.

        """
        x, y = complex(x), complex(y)
        residual = abs(y * y - self.f(x)) / max(self.scale, abs(x) ** 6)
        if residual > ON_CURVE_RTOL:
            raise CurveError(f"({x}, {y}) is off the curve (relative residual {residual:.2e})")
        for k, e in enumerate(self.branch_points, start=1):
            if x == e:
                return self.weierstrass(k)
        # canonical y, so the same place built twice compares equal
        root = complex(np.sqrt(complex(self.f(x))))
        return CurvePoint(x, root if abs(y - root) <= abs(y + root) else -root)

    def point_above(self, x: complex, sign: int = 1) -> CurvePoint:
        """The place over *x* with ``y = sign * sqrt(f(x))`` (principal square root)."""
        return self.point(x, sign * np.sqrt(complex(self.f(x))))

    def random_point(
        self, rng: np.random.Generator, clearance: Optional[float] = None
    ) -> CurvePoint:
        """Draw an affine point at least *clearance* away from every branch point."""
        clearance = 0.3 * self.min_separation if clearance is None else clearance
        centre = np.mean(self.branch_points)
        radius = max(abs(e - centre) for e in self.branch_points)
        while True:
            x = centre + radius * complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
            if min(abs(x - e) for e in self.branch_points) > clearance:
                return self.point_above(x, 1 if rng.uniform() < 0.5 else -1)

    def expansion(self, point: CurvePoint, prec: int) -> Tuple[Laurent, Laurent]:
        """Laurent series of ``(x, y)`` in the local parameter at *point*.

        The parameter is ``x - x0`` at ordinary points, ``y`` at Weierstrass points and
        ``1/x`` at infinity.

        """
        if point.is_infinite:
            return infinity_expansion(self.coefficients, point.infinity, prec)
        if point.is_weierstrass:
            return weierstrass_expansion(self.coefficients, point.x, prec)
        return affine_expansion(self.coefficients, point.x, point.y, prec)

    def places_over(self, x: complex) -> List[CurvePoint]:
        """Both places over an affine *x* (one if *x* is a branch point)."""
        for k, e in enumerate(self.branch_points, start=1):
            if x == e:
                return [self.weierstrass(k)]
        p = self.point_above(x)
        return [p, p.conjugate()]

    def to_json(self) -> Dict[str, List[List[float]]]:
        return {"branch_points": [[e.real, e.imag] for e in self.branch_points]}


def _horner(coeffs_asc: npt.NDArray[np.complex128], X: Laurent, prec: int) -> Laurent:
    result = Laurent.constant(0.0, prec)
    for c in coeffs_asc[::-1]:
        result = result * X + Laurent.constant(c, prec)
    return result


@dataclass(frozen=True, eq=False)
class CurveFunction:
    """The rational function ``(p(x) + q(x) y) / r(x)``.

    ``p`` and ``q`` are ascending coefficient vectors; ``r = prod (x - c)^m`` is given by its
    roots, which must coincide exactly with the ``x`` of any place over them so series
    expansions there see the exact cancellation.

    """

    curve: HyperellipticCurve
    p: npt.NDArray[np.complex128]
    q: npt.NDArray[np.complex128]
    denominator: Tuple[Tuple[complex, int], ...] = ()

    @property
    def denominator_degree(self) -> int:
        return sum(m for _, m in self.denominator)

    def r(self, x: complex) -> complex:
        value = 1.0 + 0.0j
        for c, m in self.denominator:
            value *= (x - c) ** m
        return value

    def __call__(self, point: CurvePoint) -> complex:
        return self.evaluate(point)

    def evaluate(self, point: CurvePoint) -> complex:
        """Value at *point*; special places go through the Laurent expansion.

        :raises ZeroDivisionError: If *point* is a pole.

        """
        if not point.is_infinite and not any(point.x == c for c, _ in self.denominator):
            x, y = complex(point.x), complex(point.y)
            num = np.polynomial.polynomial.polyval(x, self.p)
            if len(self.q):
                num += np.polynomial.polynomial.polyval(x, self.q) * y
            return complex(num / self.r(x))
        series = self.series(point, DEFAULT_SERIES_PREC)
        if series.valuation() < 0:
            raise ZeroDivisionError(f"pole at {point.label}")
        return series.coefficient(0) if series.val <= 0 else 0.0 + 0.0j

    def series(self, point: CurvePoint, prec: int) -> Laurent:
        """Laurent expansion at *point* with ``prec`` relative terms."""
        work = prec + len(self.p) + len(self.q) + 4
        X, Y = self.curve.expansion(point, work)
        numerator = _horner(np.asarray(self.p, dtype=complex), X, work)
        if len(self.q) and np.any(self.q):
            numerator = numerator + _horner(np.asarray(self.q, dtype=complex), X, work) * Y
        denom = Laurent.constant(1.0, work)
        for c, m in self.denominator:
            denom = denom * (X + Laurent.constant(-c, work)) ** m
        return numerator / denom

    def order_at(self, point: CurvePoint, prec: int = DEFAULT_SERIES_PREC) -> int:
        """Numerical order of vanishing at *point* (negative for poles)."""
        return self.series(point, prec).valuation()

    def norm_polynomial(self) -> Polynomial:
        """``p^2 - q^2 f``, vanishing at the ``x`` of every zero of ``p + q y`` or ``p - q y``."""
        p = Polynomial(self.p)
        q = Polynomial(self.q) if len(self.q) else Polynomial([0.0])
        return p * p - q * q * self.curve.polynomial

    def scaled(self, c: complex) -> "CurveFunction":
        return CurveFunction(self.curve, self.p * c, self.q * c, self.denominator)


class TwoTorsionDivisor(NamedTuple):
    """A two-torsion class ``W_i - W_j`` (or 0) with its doubling witness."""

    label: str
    pair: Optional[Tuple[int, int]]
    divisor: Divisor


class ThetaCharacteristicDivisor(NamedTuple):
    """A degree-1 class ``L`` with ``2L ~ K``; ``parity`` is 1 for odd classes."""

    label: str
    divisor: Divisor
    parity: int
    triple: Optional[Tuple[int, int, int]] = None


def two_torsion_divisors(curve: HyperellipticCurve) -> List[TwoTorsionDivisor]:
    """Return 0 and the fifteen ``W_i - W_j`` (``i < j``)."""
    out = [TwoTorsionDivisor("0", None, Divisor())]
    for i, j in itertools.combinations(range(1, 7), 2):
        D = Divisor(((curve.weierstrass(i), 1), (curve.weierstrass(j), -1)))
        out.append(TwoTorsionDivisor(f"W{i}-W{j}", (i, j), D))
    return out


def doubling_function(curve: HyperellipticCurve, pair: Tuple[int, int]) -> CurveFunction:
    """``(x - e_i) / (x - e_j)``, whose divisor is ``2 (W_i - W_j)``."""
    i, j = pair
    e_i, e_j = curve.branch_points[i - 1], curve.branch_points[j - 1]
    return CurveFunction(
        curve, np.array([-e_i, 1.0], dtype=complex), np.zeros(0, dtype=complex), ((e_j, 1),)
    )


def theta_characteristics(curve: HyperellipticCurve) -> List[ThetaCharacteristicDivisor]:
    """Return the six odd classes ``W_i`` and the ten even classes ``W_i + W_j - W_k``.

    Each even class is indexed by the triple ``{i, j, k}`` containing 1 of a splitting of the
    branch points into two triples; the complementary triple gives the same class.

    """
    out = [
        ThetaCharacteristicDivisor(f"W{i}", Divisor(((curve.weierstrass(i), 1),)), 1)
        for i in range(1, 7)
    ]
    for j, k in itertools.combinations(range(2, 7), 2):
        D = Divisor(
            (
                (curve.weierstrass(1), 1),
                (curve.weierstrass(j), 1),
                (curve.weierstrass(k), -1),
            )
        )
        out.append(ThetaCharacteristicDivisor(f"W1+W{j}-W{k}", D, 0, (1, j, k)))
    return out


def two_torsion_doubling_check(curve: HyperellipticCurve, entry: TwoTorsionDivisor) -> int:
    """Largest mismatch between ``div((x-e_i)/(x-e_j))`` and ``2 D`` at Weierstrass points."""
    if entry.pair is None:
        return 0
    psi = doubling_function(curve, entry.pair)
    worst = 0
    for k in range(1, 7):
        W = curve.weierstrass(k)
        worst = max(worst, abs(psi.order_at(W) - 2 * entry.divisor.multiplicity(W)))
    return worst
