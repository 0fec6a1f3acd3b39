# -*- coding: utf-8 -*-
"""Exact models of ``H*(A)``, ``H*(A x A)`` and ``H*(C^n)`` over the rationals.

``H*(A)`` of a ``g``-dimensional abelian variety is the exterior algebra on ``H^1``. Each factor
carries ``2g`` generators stored interleaved, ``(x_1, y_1, ..., x_g, y_g)``, so that
``Theta = sum x_i y_i`` satisfies ``int Theta^g = g!`` against the volume form ``x_1 y_1 ...``
in index order.

``H*(C^n)`` is modelled by Künneth tensors of the per-factor basis ``{1, a_1..a_g, b_1..b_g, pt}``
with ``a_i b_i = pt = -b_i a_i``. A tensor ``(c_1, ..., c_n)`` stands for
``pr_1^* c_1 ... pr_n^* c_n``, and products carry the Koszul sign
``(-1)^(sum_{i>j} deg x_i deg y_j)``.

"""

from __future__ import annotations

import bisect
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from scipy.special import comb

__all__ = [
    "CohomologyError",
    "ExteriorClass",
    "theta_class",
    "top_integral",
    "addition_pullback",
    "multiplication_pullback",
    "chord_tangent_m",
    "embedding_stats",
    "CurveProductAlgebra",
    "PairingCondition",
    "PullbackCheck",
    "verify_pullback_theta",
    "vertical_curve_test",
    "diagonal_curve_test",
    "solve_pullback_coefficients",
    "model_self_checks",
]

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Monomial = Tuple[int, ...]


class CohomologyError(ValueError):
    """An integral of a non-top class, or a cohomology identity that fails."""


def _merge_sign(a: Monomial, b: Monomial) -> int:
    # parity of the pairs (i in a, j in b) with i > j
    inversions = sum(len(a) - bisect.bisect_right(a, j) for j in b)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class ExteriorClass:
    """An element of the exterior algebra on ``ngens`` generators."""

    ngens: int
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {tuple(m): Fraction(c) for m, c in self.terms.items() if c != 0}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def one(cls, ngens: int) -> "ExteriorClass":
        return cls(ngens, {(): Fraction(1)})

    @classmethod
    def generator(cls, ngens: int, index: int) -> "ExteriorClass":
        if not 0 <= index < ngens:
            raise ValueError(f"generator {index} outside 0..{ngens - 1}")
        return cls(ngens, {(index,): Fraction(1)})

    def _check(self, other: "ExteriorClass") -> None:
        if other.ngens != self.ngens:
            raise ValueError(f"ambient mismatch: {self.ngens} vs {other.ngens} generators")

    def __add__(self, other: "ExteriorClass") -> "ExteriorClass":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return ExteriorClass(self.ngens, terms)

    def __neg__(self) -> "ExteriorClass":
        return ExteriorClass(self.ngens, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "ExteriorClass") -> "ExteriorClass":
        return self + (-other)

    def __rmul__(self, k: Scalar) -> "ExteriorClass":
        return ExteriorClass(self.ngens, {m: k * c for m, c in self.terms.items()})

    def __mul__(self, other: Union["ExteriorClass", Scalar]) -> "ExteriorClass":
        if not isinstance(other, ExteriorClass):
            return other * self
        self._check(other)
        terms: Dict[Monomial, Fraction] = {}
        for (a, ca), (b, cb) in itertools.product(self.terms.items(), other.terms.items()):
            if set(a).intersection(b):
                continue
            m = tuple(sorted(a + b))
            terms[m] = terms.get(m, Fraction(0)) + _merge_sign(a, b) * ca * cb
        return ExteriorClass(self.ngens, terms)

    def __pow__(self, k: int) -> "ExteriorClass":
        result = ExteriorClass.one(self.ngens)
        for _ in range(k):
            result = result * self
        return result

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> List[int]:
        return sorted({len(m) for m in self.terms})

    def homogeneous(self, degree: int) -> "ExteriorClass":
        return ExteriorClass(self.ngens, {m: c for m, c in self.terms.items() if len(m) == degree})

    def substitute(self, images: Sequence["ExteriorClass"]) -> "ExteriorClass":
        """Ring map sending generator ``i`` to ``images[i]``."""
        if len(images) != self.ngens:
            raise ValueError(f"need {self.ngens} images, got {len(images)}")
        target = images[0].ngens if images else 0
        result = ExteriorClass(target)
        for m, c in self.terms.items():
            product = ExteriorClass.one(target)
            for index in m:
                product = product * images[index]
            result = result + c * product
        return result


def theta_class(g: int, factor: int = 0, nfactors: int = 1) -> ExteriorClass:
    """``sum_i x_i y_i`` on factor *factor* of ``A^nfactors``."""
    ngens = 2 * g * nfactors
    offset = 2 * g * factor
    terms = {(offset + 2 * i, offset + 2 * i + 1): Fraction(1) for i in range(g)}
    return ExteriorClass(ngens, terms)


def top_integral(cls: ExteriorClass) -> Fraction:
    """Coefficient of the volume monomial.

    :raises CohomologyError: If a term of lower degree is present.

    """
    top = tuple(range(cls.ngens))
    stray = [m for m in cls.terms if m != top]
    if stray:
        raise CohomologyError(f"cannot integrate non-top terms {stray[:4]}")
    return cls.terms.get(top, Fraction(0))


def addition_pullback(cls: ExteriorClass) -> ExteriorClass:
    """``sigma^*`` for the group law ``A x A -> A``: ``u_j -> u_j + v_j``."""
    n = cls.ngens
    images = [
        ExteriorClass.generator(2 * n, j) + ExteriorClass.generator(2 * n, n + j) for j in range(n)
    ]
    return cls.substitute(images)


def multiplication_pullback(cls: ExteriorClass, n: int) -> ExteriorClass:
    """``[n]^*``, scaling the degree-``k`` part by ``n^k``."""
    return ExteriorClass(cls.ngens, {m: c * n ** len(m) for m, c in cls.terms.items()})


def chord_tangent_m(g: int) -> Fraction:
    """``-int (pr_1^* Theta)^(g-1) (3 pr_2^* Theta - sigma^* Theta)^(g+1) / (2 (g+1)! g!)``."""
    if g < 1:
        raise ValueError(f"genus must be positive, got {g}")
    first = theta_class(g, 0, 2)
    second = theta_class(g, 1, 2)
    summed = addition_pullback(theta_class(g))
    integral = top_integral(first ** (g - 1) * (3 * second - summed) ** (g + 1))
    m = -integral / (2 * math.factorial(g + 1) * math.factorial(g))
    logger.debug("chord-and-tangent twist for g=%d: %s", g, m)
    return m


def embedding_stats(g: int = 2, k: int = 6) -> Dict[str, int]:
    """Counts for the embedding of ``A`` by ``|k Theta|`` and its quadric ideal.

    ``h^0(k Theta) = k^g``; the ambient of the Plücker-type embedding has dimension
    ``C(3^g, 2^g) - 1``; quadrics are ``dim Sym^2 H^0(k Theta) - h^0(2k Theta)``.

    """
    sections = k**g
    ambient = int(comb(3**g, 2**g, exact=True)) - 1
    symmetric = int(comb(sections + 1, 2, exact=True))
    doubled = (2 * k) ** g
    return {
        "h0": sections,
        "ambient": ambient,
        "hyperplanes": ambient + 1 - sections,
        "h0_double": doubled,
        "sym2": symmetric,
        "quadrics": symmetric - doubled,
    }


KunnethClass = Dict[Tuple[int, ...], Fraction]


class CurveProductAlgebra:
    """``H*(C^n)`` for a curve of genus *g*, with Künneth tensors as keys.

    Per-factor index ``0`` is ``1``, ``1..g`` are ``a_i``, ``g+1..2g`` are ``b_i`` and
    ``2g+1`` is ``pt``.

    """

    def __init__(self, g: int, n: int) -> None:
        if g < 2:
            raise ValueError(f"the model needs 2g - 2 > 0, got g={g}")
        if n < 1:
            raise ValueError(f"need at least one factor, got n={n}")
        self.g = g
        self.n = n
        self.pt = 2 * g + 1

    def __repr__(self) -> str:
        return f"CurveProductAlgebra(g={self.g}, n={self.n})"

    def degree(self, index: int) -> int:
        if index == 0:
            return 0
        return 2 if index == self.pt else 1

    def _factor_product(self, x: int, y: int) -> Tuple[int, int]:
        if x == 0:
            return 1, y
        if y == 0:
            return 1, x
        g = self.g
        if 1 <= x <= g and y == x + g:
            return 1, self.pt
        if g < x <= 2 * g and y == x - g:
            return -1, self.pt
        return 0, 0

    def unit(self) -> KunnethClass:
        return {(0,) * self.n: Fraction(1)}

    def slot(self, factor: int, index: int, coeff: Scalar = 1) -> KunnethClass:
        """``pr_factor^*`` of a basis element."""
        key = [0] * self.n
        key[factor] = index
        return {tuple(key): Fraction(coeff)}

    @staticmethod
    def add(*classes: KunnethClass) -> KunnethClass:
        out: KunnethClass = {}
        for cls in classes:
            for key, c in cls.items():
                out[key] = out.get(key, Fraction(0)) + c
        return {key: c for key, c in out.items() if c != 0}

    @staticmethod
    def scale(cls: KunnethClass, k: Scalar) -> KunnethClass:
        return {key: k * c for key, c in cls.items() if k * c != 0}

    def mul(self, x: KunnethClass, y: KunnethClass) -> KunnethClass:
        out: KunnethClass = {}
        for (kx, cx), (ky, cy) in itertools.product(x.items(), y.items()):
            sign = 1
            key = []
            for i in range(self.n):
                s, index = self._factor_product(kx[i], ky[i])
                if s == 0:
                    break
                sign *= s
                key.append(index)
            else:
                koszul = sum(
                    self.degree(kx[i]) * self.degree(ky[j])
                    for i in range(self.n)
                    for j in range(i)
                )
                if koszul % 2:
                    sign = -sign
                k = tuple(key)
                out[k] = out.get(k, Fraction(0)) + sign * cx * cy
        return {key: c for key, c in out.items() if c != 0}

    def integrate(self, cls: KunnethClass) -> Fraction:
        """Coefficient of ``pt x ... x pt``."""
        return cls.get((self.pt,) * self.n, Fraction(0))

    def canonical_class(self, factor: int) -> KunnethClass:
        """``pr_factor^* K_C = (2g - 2) pt``."""
        return self.slot(factor, self.pt, 2 * self.g - 2)

    def canonical_sum(self) -> KunnethClass:
        return self.add(*(self.canonical_class(i) for i in range(self.n)))

    def diagonal_class(self, i: int, j: int) -> KunnethClass:
        """``pt_i + pt_j - sum_k (a_k^(i) b_k^(j) - b_k^(i) a_k^(j))``."""
        g = self.g
        parts = [self.slot(i, self.pt), self.slot(j, self.pt)]
        for k in range(1, g + 1):
            parts.append(self.scale(self.mul(self.slot(i, k), self.slot(j, k + g)), -1))
            parts.append(self.mul(self.slot(i, k + g), self.slot(j, k)))
        return self.add(*parts)

    def diagonal_sum(self) -> KunnethClass:
        return self.add(
            *(self.diagonal_class(i, j) for i, j in itertools.combinations(range(self.n), 2))
        )

    def abelian_sum_theta(self) -> KunnethClass:
        """``alpha^* Theta``.

        ``x_k`` pulls back to ``sum_i a_k^(i)`` and ``y_k`` to ``sum_i b_k^(i)``.

        """
        g = self.g
        parts = []
        for k in range(1, g + 1):
            x = self.add(*(self.slot(i, k) for i in range(self.n)))
            y = self.add(*(self.slot(i, k + g) for i in range(self.n)))
            parts.append(self.mul(x, y))
        return self.add(*parts)

    def restrict_vertical(self, cls: KunnethClass) -> Fraction:
        """Degree of *cls* on ``C x {p_2} x ... x {p_n}``."""
        key = (self.pt,) + (0,) * (self.n - 1)
        return cls.get(key, Fraction(0))

    def restrict_diagonal(self, cls: KunnethClass) -> Fraction:
        """Degree of *cls* on the small diagonal, multiplying slots in order."""
        total = Fraction(0)
        for key, c in cls.items():
            sign, index = 1, 0
            for slot in key:
                s, index = self._factor_product(index, slot)
                sign *= s
                if s == 0:
                    break
            if sign and index == self.pt:
                total += sign * c
        return total


@dataclass(frozen=True)
class PairingCondition:
    """``theta = a canonical - b diagonal`` after pairing with a test curve."""

    curve: str
    theta: Fraction
    canonical: Fraction
    diagonal: Fraction

    def holds(self, a: Fraction, b: Fraction) -> bool:
        return self.theta == a * self.canonical - b * self.diagonal


def _pairing_classes(g: int, n: int) -> Tuple[CurveProductAlgebra, Tuple[KunnethClass, ...]]:
    algebra = CurveProductAlgebra(g, n)
    return algebra, (algebra.abelian_sum_theta(), algebra.canonical_sum(), algebra.diagonal_sum())


def vertical_curve_test(g: int, n: int) -> PairingCondition:
    """Pair with ``C x {pt}``: ``g = (2g - 2) a - (n - 1) b``."""
    algebra, classes = _pairing_classes(g, n)
    values = [algebra.restrict_vertical(c) for c in classes]
    return PairingCondition("vertical", *values)


def diagonal_curve_test(g: int, n: int) -> PairingCondition:
    """Pair with the small diagonal: ``n^2 g = n (2g - 2) a + (2g - 2) n (n - 1) / 2 b``."""
    algebra, classes = _pairing_classes(g, n)
    values = [algebra.restrict_diagonal(c) for c in classes]
    return PairingCondition("diagonal", *values)


def solve_pullback_coefficients(g: int, n: int) -> Tuple[Fraction, Fraction]:
    """Solve the two pairing conditions for ``(a, b)``.

    :raises CohomologyError: If the conditions are degenerate (``n = 1``).

    """
    first, second = vertical_curve_test(g, n), diagonal_curve_test(g, n)
    det = -first.canonical * second.diagonal + first.diagonal * second.canonical
    if det == 0:
        raise CohomologyError(f"pairing conditions are degenerate for (g, n) = ({g}, {n})")
    a = (-first.theta * second.diagonal + first.diagonal * second.theta) / det
    b = (first.canonical * second.theta - second.canonical * first.theta) / det
    return a, b


@dataclass
class PullbackCheck:
    """Outcome of :func:`verify_pullback_theta`; ``mismatches`` lists differing monomials."""

    g: int
    n: int
    holds: bool
    terms: int
    mismatches: List[Tuple[Tuple[int, ...], str, str]] = field(default_factory=list)

    def to_json(self) -> Dict[str, object]:
        return {
            "g": self.g,
            "n": self.n,
            "holds": self.holds,
            "terms": self.terms,
            "mismatches": [[list(k), lhs, rhs] for k, lhs, rhs in self.mismatches],
        }


def verify_pullback_theta(g: int, n: int, *, strict: bool = False) -> PullbackCheck:
    """Compare ``(2g-2) alpha^* Theta`` with ``(g-1+n) sum K_i - (2g-2) sum Delta_ij``.

    :raises CohomologyError: If *strict* and the two sides differ.

    """
    algebra = CurveProductAlgebra(g, n)
    lhs = algebra.scale(algebra.abelian_sum_theta(), 2 * g - 2)
    rhs = algebra.add(
        algebra.scale(algebra.canonical_sum(), g - 1 + n),
        algebra.scale(algebra.diagonal_sum(), -(2 * g - 2)),
    )
    mismatches = [
        (key, str(lhs.get(key, 0)), str(rhs.get(key, 0)))
        for key in sorted(set(lhs) | set(rhs))
        if lhs.get(key, 0) != rhs.get(key, 0)
    ]
    check = PullbackCheck(g, n, not mismatches, len(set(lhs) | set(rhs)), mismatches)
    logger.info("pullback identity (g=%d, n=%d): %s", g, n, "holds" if check.holds else "fails")
    if strict and mismatches:
        raise CohomologyError(f"pullback identity fails at {mismatches[:4]}")
    return check


def model_self_checks(g: int, ns: Iterable[int] = (2, 3)) -> Dict[str, object]:
    """Normalization, self-intersection and ``[n]^*`` checks of the model."""
    theta = theta_class(g)
    volume = top_integral(theta**g) / math.factorial(g)
    algebra = CurveProductAlgebra(g, 2)
    delta = algebra.diagonal_class(0, 1)
    self_intersection = algebra.integrate(algebra.mul(delta, delta))
    scaling = all(multiplication_pullback(theta, k) == k * k * theta for k in ns)
    return {
        "theta_volume": str(volume),
        "diagonal_self_intersection": str(self_intersection),
        "multiplication_scaling": scaling,
        "passed": volume == 1 and self_intersection == -(2 * g - 2) and scaling,
    }
