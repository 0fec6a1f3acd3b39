# -*- coding: utf-8 -*-
"""Exact arithmetic in the finite theta group over ``L = (Z/n)^g x mu_n^g``.

Points of ``L`` are :class:`LPoint` objects whose first ``g`` residues are the ``a`` part and
whose last ``g`` residues are the ``b`` part; ``mu_n`` is identified with ``Z/n`` through
``zeta = exp(2 pi i / n)``, so every pairing returns a :class:`RootOfUnity` carrying an exact
exponent. A theta group element is a pair ``(lambda, P)`` with the group law::

    (lambda, P) . (nu, Q) = (lambda nu d(P, Q), P + Q)

for a bilinear ``d`` whose skew-symmetrization ``d(P, Q) / d(Q, P)`` is the standard symplectic
pairing :func:`symplectic_e`. Two choices of ``d`` are provided: :func:`standard_d`
(``d(P_i, Q_i) = zeta``, ``d(Q_i, P_i) = 1`` in the coordinate basis) and, for odd ``n``,
:func:`canonical_d_odd` (``e^((n+1)/2)``). A :class:`ThetaGroup` pins one of them.

The group acts on functions ``L -> C`` (:func:`heisenberg_action`) and on the
``n^g``-dimensional standard representation ``V0`` indexed by the first Lagrangian
(:func:`standard_rep_action`), whose commutant is one-dimensional.

"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from scipy.linalg import null_space

__all__ = [
    "AmbientMismatchError",
    "LPoint",
    "RootOfUnity",
    "ThetaGroupElement",
    "Character",
    "FunctionOnL",
    "Involution",
    "IOTA",
    "Pairing",
    "ThetaGroup",
    "all_points",
    "symplectic_e",
    "standard_d",
    "canonical_d_odd",
    "group_mul",
    "group_inverse",
    "commutator",
    "quasi_trivial_automorphism",
    "involution_iota",
    "heisenberg_action",
    "standard_rep_action",
    "commutant_dimension",
]

#: Largest distance between an exact exponent and the complex scalar it claims to describe.
_EXACT_CONSISTENCY_TOL = 1e-12


class AmbientMismatchError(ValueError):
    """Operands belong to theta groups with different ``(n, g)``."""


def _check_ambient(*items: Union["LPoint", "Character"]) -> Tuple[int, int]:
    n, g = items[0].n, items[0].g
    for item in items[1:]:
        if (item.n, item.g) != (n, g):
            raise AmbientMismatchError(
                f"ambient mismatch: (n, g) = ({n}, {g}) vs ({item.n}, {item.g})"
            )
    return n, g


@dataclass(frozen=True, slots=True)
class LPoint:
    """A point of ``(Z/n)^g x (Z/n)^g``, residues reduced into ``[0, n)``."""

    n: int
    g: int
    coords: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"modulus must be at least 2, got {self.n}")
        if self.g < 1:
            raise ValueError(f"genus must be at least 1, got {self.g}")
        if len(self.coords) != 2 * self.g:
            raise ValueError(f"expected {2 * self.g} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(int(c) % self.n for c in self.coords))

    @classmethod
    def zero(cls, n: int, g: int) -> "LPoint":
        return cls(n, g, (0,) * (2 * g))

    @classmethod
    def basis(cls, n: int, g: int, index: int) -> "LPoint":
        """Return the ``index``-th coordinate vector ``r_index`` (0-based)."""
        coords = [0] * (2 * g)
        coords[index] = 1
        return cls(n, g, tuple(coords))

    @property
    def a(self) -> Tuple[int, ...]:
        return self.coords[: self.g]

    @property
    def b(self) -> Tuple[int, ...]:
        return self.coords[self.g :]

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "LPoint") -> "LPoint":
        _check_ambient(self, other)
        return LPoint(self.n, self.g, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "LPoint":
        return LPoint(self.n, self.g, tuple(-x for x in self.coords))

    def __sub__(self, other: "LPoint") -> "LPoint":
        return self + (-other)

    def __rmul__(self, k: int) -> "LPoint":
        return LPoint(self.n, self.g, tuple(k * x for x in self.coords))

    def __mul__(self, k: int) -> "LPoint":
        return self.__rmul__(k)

    def order(self) -> int:
        """Return the additive order of the point."""
        for k in range(1, self.n + 1):
            if (k * self).is_zero:
                return k
        return self.n


def all_points(n: int, g: int) -> List[LPoint]:
    """Return every point of ``L`` in lexicographic coordinate order, zero first."""
    return [LPoint(n, g, c) for c in itertools.product(range(n), repeat=2 * g)]


@dataclass(frozen=True, slots=True)
class RootOfUnity:
    """``zeta^exponent`` with ``zeta = exp(2 pi i / n)``."""

    n: int
    exponent: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponent", int(self.exponent) % self.n)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if self.n != other.n:
            raise AmbientMismatchError(f"roots of unity of order {self.n} and {other.n}")
        return RootOfUnity(self.n, self.exponent + other.exponent)

    def __truediv__(self, other: "RootOfUnity") -> "RootOfUnity":
        return self * other.inverse()

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.n, self.exponent * k)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.n, -self.exponent)

    @property
    def value(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.exponent / self.n)

    @classmethod
    def one(cls, n: int) -> "RootOfUnity":
        return cls(n, 0)

    @classmethod
    def snap(cls, z: complex, n: int) -> Tuple["RootOfUnity", float]:
        """Return the nearest ``n``-th root of unity to *z* and the distance to it.

        :param z: Complex number expected to lie on ``mu_n``.
        :param n: Order of the root-of-unity group.
        :returns: ``(root, |z - root|)``.

        """
        exponent = int(round(cmath.phase(z) * n / (2 * cmath.pi))) % n
        root = cls(n, exponent)
        return root, abs(z - root.value)


#: A pairing ``L x L -> mu_n`` returning exact roots of unity.
Pairing = Callable[[LPoint, LPoint], RootOfUnity]


def symplectic_e(P: LPoint, Q: LPoint) -> RootOfUnity:
    """Standard symplectic pairing, exponent ``a . b' - a' . b``.

    :raises AmbientMismatchError: If *P* and *Q* live in different groups.

    """
    n, _ = _check_ambient(P, Q)
    exponent = sum(x * y for x, y in zip(P.a, Q.b)) - sum(x * y for x, y in zip(Q.a, P.b))
    return RootOfUnity(n, exponent)


def standard_d(P: LPoint, Q: LPoint) -> RootOfUnity:
    """Bilinear lift of :func:`symplectic_e` with exponent ``a . b'``."""
    n, _ = _check_ambient(P, Q)
    return RootOfUnity(n, sum(x * y for x, y in zip(P.a, Q.b)))


def canonical_d_odd(P: LPoint, Q: LPoint) -> RootOfUnity:
    """The symmetric-square-root lift ``e(P, Q)^((n+1)/2)``, defined for odd ``n`` only.

    :raises ValueError: If ``n`` is even.

    """
    n, _ = _check_ambient(P, Q)
    if n % 2 == 0:
        raise ValueError(f"canonical_d_odd needs an odd modulus, got n={n}")
    return symplectic_e(P, Q) ** ((n + 1) // 2)


@dataclass(frozen=True, slots=True)
class ThetaGroupElement:
    """An element ``(scalar, point)`` of the theta group.

    ``exponent`` is kept whenever the scalar is known to be ``zeta^exponent`` exactly; products
    of exact elements stay exact.

    """

    scalar: complex
    point: LPoint
    exponent: Optional[int] = None

    def __post_init__(self) -> None:
        if self.scalar == 0:
            raise ValueError("theta group scalar must be nonzero")
        if self.exponent is not None:
            object.__setattr__(self, "exponent", int(self.exponent) % self.point.n)
            expected = RootOfUnity(self.point.n, self.exponent).value
            if abs(complex(self.scalar) - expected) > _EXACT_CONSISTENCY_TOL:
                raise ValueError(
                    f"scalar {self.scalar} disagrees with exact exponent {self.exponent}"
                )

    @classmethod
    def exact(cls, exponent: int, point: LPoint) -> "ThetaGroupElement":
        return cls(RootOfUnity(point.n, exponent).value, point, exponent)

    @classmethod
    def identity(cls, n: int, g: int) -> "ThetaGroupElement":
        return cls.exact(0, LPoint.zero(n, g))

    def same_as(self, other: "ThetaGroupElement", tol: float = 1e-12) -> bool:
        """Compare exactly when both exponents are known, numerically otherwise."""
        if self.point != other.point:
            return False
        if self.exponent is not None and other.exponent is not None:
            return self.exponent == other.exponent
        return abs(self.scalar - other.scalar) <= tol


def _scale(x: ThetaGroupElement, root: RootOfUnity, point: LPoint) -> ThetaGroupElement:
    if x.exponent is not None:
        return ThetaGroupElement.exact(x.exponent + root.exponent, point)
    return ThetaGroupElement(x.scalar * root.value, point)


def group_mul(x: ThetaGroupElement, y: ThetaGroupElement, d: Pairing) -> ThetaGroupElement:
    """Return ``(lambda_x lambda_y d(P_x, P_y), P_x + P_y)``.

    :raises AmbientMismatchError: If the points live in different groups.

    """
    point = x.point + y.point
    root = d(x.point, y.point)
    if x.exponent is not None and y.exponent is not None:
        return ThetaGroupElement.exact(x.exponent + y.exponent + root.exponent, point)
    return ThetaGroupElement(x.scalar * y.scalar * root.value, point)


def group_inverse(x: ThetaGroupElement, d: Pairing) -> ThetaGroupElement:
    """Return the inverse ``(lambda^-1 d(P, -P)^-1, -P)``."""
    minus = -x.point
    root = d(x.point, minus).inverse()
    if x.exponent is not None:
        return ThetaGroupElement.exact(-x.exponent + root.exponent, minus)
    return ThetaGroupElement(root.value / x.scalar, minus)


def commutator(x: ThetaGroupElement, y: ThetaGroupElement, d: Pairing) -> ThetaGroupElement:
    """Return ``x y x^-1 y^-1``; its scalar is ``e(P_x, P_y)`` and its point is zero."""
    xy = group_mul(x, y, d)
    return group_mul(group_mul(xy, group_inverse(x, d), d), group_inverse(y, d), d)


@dataclass(frozen=True, slots=True)
class Character:
    """A character ``R -> zeta^(coords . R)`` of ``L``."""

    n: int
    g: int
    coords: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != 2 * self.g:
            raise ValueError(f"expected {2 * self.g} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(int(c) % self.n for c in self.coords))

    @classmethod
    def trivial(cls, n: int, g: int) -> "Character":
        return cls(n, g, (0,) * (2 * g))

    def __call__(self, R: LPoint) -> RootOfUnity:
        _check_ambient(self, R)
        return RootOfUnity(self.n, sum(c * r for c, r in zip(self.coords, R.coords)))

    def __mul__(self, other: "Character") -> "Character":
        _check_ambient(self, other)
        return Character(self.n, self.g, tuple(x + y for x, y in zip(self.coords, other.coords)))


def quasi_trivial_automorphism(chi: Character, x: ThetaGroupElement) -> ThetaGroupElement:
    """Apply ``alpha_chi(lambda, P) = (lambda chi(P), P)``."""
    return _scale(x, chi(x.point), x.point)


def involution_iota(x: ThetaGroupElement) -> ThetaGroupElement:
    """Return ``(lambda, -P)``.

    This is a set map; it is a homomorphism on pairs where ``d(P, Q) = d(-P, -Q)`` holds,
    which for bilinear ``d`` is every pair.

    """
    return ThetaGroupElement(x.scalar, -x.point, x.exponent)


@dataclass(frozen=True)
class FunctionOnL:
    """A complex-valued function on all of ``L``."""

    n: int
    g: int
    values: Mapping[LPoint, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.values) != self.n ** (2 * self.g):
            raise ValueError(
                f"function must be defined on all {self.n ** (2 * self.g)} points, "
                f"got {len(self.values)}"
            )

    @classmethod
    def from_callable(cls, n: int, g: int, fn: Callable[[LPoint], complex]) -> "FunctionOnL":
        return cls(n, g, {R: complex(fn(R)) for R in all_points(n, g)})

    @classmethod
    def delta(cls, R0: LPoint) -> "FunctionOnL":
        return cls.from_callable(R0.n, R0.g, lambda R: 1.0 if R == R0 else 0.0)

    def __getitem__(self, R: LPoint) -> complex:
        return self.values[R]

    def max_distance(self, other: "FunctionOnL") -> float:
        return max(abs(self.values[R] - other.values[R]) for R in self.values)


def heisenberg_action(x: ThetaGroupElement, h: FunctionOnL, d: Pairing) -> FunctionOnL:
    """Return ``R -> lambda h(R - P) d(R, P)^-1``."""
    P = x.point
    return FunctionOnL.from_callable(
        h.n, h.g, lambda R: x.scalar * h[R - P] * d(R, P).inverse().value
    )


class Involution:
    """Marker for the involution ``iota`` acting on ``V0``."""

    def __repr__(self) -> str:
        return "IOTA"


#: The involution ``e_l -> e_-l`` of the standard representation.
IOTA = Involution()


def _l1_index(n: int, g: int) -> Dict[Tuple[int, ...], int]:
    return {l: i for i, l in enumerate(itertools.product(range(n), repeat=g))}


def _rep_matrix(
    x: Union[ThetaGroupElement, Character, Involution], n: int, g: int, d: Pairing
) -> npt.NDArray[np.complex128]:
    index = _l1_index(n, g)
    dim = len(index)
    matrix = np.zeros((dim, dim), dtype=complex)
    if isinstance(x, Involution):
        for l, i in index.items():
            matrix[index[tuple(-c % n for c in l)], i] = 1.0
        return matrix
    if isinstance(x, Character):
        for l, i in index.items():
            matrix[i, i] = x(LPoint(n, g, l + (0,) * g)).value
        return matrix
    a, b = x.point.a, x.point.b
    # (lambda, (a, b)) = lambda d((a,0),(0,b))^-1 . (1, (a,0)) . (1, (0,b))
    scalar = x.scalar * d(LPoint(n, g, a + (0,) * g), LPoint(n, g, (0,) * g + b)).inverse().value
    for l, i in index.items():
        target = tuple((li - ai) % n for li, ai in zip(l, a))
        phase = RootOfUnity(n, sum(bi * li for bi, li in zip(b, l))).value
        matrix[index[target], i] = scalar * phase
    return matrix


def standard_rep_action(
    x: Union[ThetaGroupElement, Character, Involution],
    v: Sequence[complex],
    *,
    n: int,
    g: int,
    d: Pairing = standard_d,
) -> npt.NDArray[np.complex128]:
    """Act on a vector of the standard representation ``V0 = C^(n^g)``.

    Basis vectors ``e_l`` are indexed by ``l`` in ``(Z/n)^g`` in lexicographic order. A point
    ``(a, 0)`` translates (``e_l -> e_{l-a}``), a point ``(0, b)`` multiplies ``e_l`` by
    ``zeta^(b . l)``, a :class:`Character` acts diagonally by ``chi((l, 0))`` and :data:`IOTA`
    sends ``e_l`` to ``e_{-l}``.

    :param x: Theta group element, character of ``L`` or :data:`IOTA`.
    :param v: Vector of length ``n^g``.
    :param n: Modulus.
    :param g: Genus.
    :param d: Pairing the theta group is built on.
    :returns: The transformed vector.

    """
    vec = np.asarray(v, dtype=complex)
    if vec.shape != (n**g,):
        raise ValueError(f"expected a vector of length {n ** g}, got shape {vec.shape}")
    return _rep_matrix(x, n, g, d) @ vec


def commutant_dimension(n: int, g: int, d: Pairing = standard_d, rtol: float = 1e-9) -> int:
    """Return the dimension of the space of matrices commuting with the theta group on ``V0``.

    One means the standard representation is irreducible.

    """
    generators = [
        _rep_matrix(ThetaGroupElement.exact(0, LPoint.basis(n, g, k)), n, g, d)
        for k in range(2 * g)
    ]
    dim = n**g
    eye = np.eye(dim)
    # X M = M X  <=>  (M^T kron I - I kron M) vec(X) = 0 for column-major vec
    system = np.vstack([np.kron(M.T, eye) - np.kron(eye, M) for M in generators])
    return null_space(system, rcond=rtol).shape[1]


class ThetaGroup:
    """The theta group of ``(Z/n)^g x mu_n^g`` with one pinned pairing ``d``."""

    def __init__(self, n: int, g: int, d: Optional[Pairing] = None) -> None:
        self.n = n
        self.g = g
        self.d: Pairing = d if d is not None else standard_d

    def __repr__(self) -> str:
        return f"ThetaGroup(n={self.n}, g={self.g}, d={getattr(self.d, '__name__', self.d)})"

    def points(self) -> List[LPoint]:
        return all_points(self.n, self.g)

    def elements(self) -> Iterator[ThetaGroupElement]:
        """Iterate over the finite subgroup ``mu_n x L`` with exact scalars."""
        for point in self.points():
            for k in range(self.n):
                yield ThetaGroupElement.exact(k, point)

    def identity(self) -> ThetaGroupElement:
        return ThetaGroupElement.identity(self.n, self.g)

    def mul(self, x: ThetaGroupElement, y: ThetaGroupElement) -> ThetaGroupElement:
        return group_mul(x, y, self.d)

    def inv(self, x: ThetaGroupElement) -> ThetaGroupElement:
        return group_inverse(x, self.d)

    def commutator(self, x: ThetaGroupElement, y: ThetaGroupElement) -> ThetaGroupElement:
        return commutator(x, y, self.d)

    def act(self, x: ThetaGroupElement, h: FunctionOnL) -> FunctionOnL:
        return heisenberg_action(x, h, self.d)

    def rep_matrix(
        self, x: Union[ThetaGroupElement, Character, Involution]
    ) -> npt.NDArray[np.complex128]:
        return _rep_matrix(x, self.n, self.g, self.d)

    def commutant_dimension(self) -> int:
        return commutant_dimension(self.n, self.g, self.d)
