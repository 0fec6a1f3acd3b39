# -*- coding: utf-8 -*-
"""Riemann theta functions with rational characteristics.

``theta[a;b](z, tau) = sum_n exp(pi i (2 (n+a).(z+b) + (n+a) tau (n+a)))`` is summed over a
box of lattice points centred on the peak of the Gaussian, so the truncation radius depends
only on the smallest eigenvalue of ``Im tau`` and the requested relative tail. The same box and
summation order are used for every call, which keeps results bitwise reproducible.

The analytic normal Weil set ``phi_P = (theta[-a;-b] / theta[0;0])^N`` is exposed as an
:class:`AnalyticWeilFamily` so the normalization engine treats it like any other backend.

"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from .config import get_pole_tol, get_theta_max_radius, get_theta_tail
from .heisenberg import LPoint, RootOfUnity
from .weil_normalize import PoleProximityError, WeilFamily

__all__ = [
    "PeriodMatrixError",
    "TruncationError",
    "PeriodMatrix",
    "Characteristic",
    "TorusPoint",
    "TruncationParams",
    "truncation_for",
    "reduce_point",
    "theta",
    "theta_with_scale",
    "theta_constants",
    "automorphy_factor",
    "shift_identity_check",
    "torsion_points",
    "analytic_d",
    "analytic_weil_pairing",
    "AnalyticWeilFamily",
    "analytic_weil_family",
]

logger = logging.getLogger(__name__)

#: Largest asymmetry ``max|tau - tau^T|`` accepted for a period matrix.
SYMMETRY_TOL = 1e-12
#: Largest residual accepted when a lattice reduction is replayed.
REDUCTION_TOL = 1e-10

ComplexVector = npt.NDArray[np.complex128]


class PeriodMatrixError(ValueError):
    """The matrix is not a point of the Siegel upper half-space."""


class TruncationError(RuntimeError):
    """The requested theta tail bound cannot be met within the allowed radius."""


@dataclass(frozen=True, eq=False)
class PeriodMatrix:
    """A symmetric ``g x g`` complex matrix with positive-definite imaginary part."""

    tau: ComplexVector

    def __post_init__(self) -> None:
        tau = np.array(self.tau, dtype=complex)
        if tau.ndim != 2 or tau.shape[0] != tau.shape[1]:
            raise PeriodMatrixError(f"tau must be square, got shape {tau.shape}")
        asym = float(np.max(np.abs(tau - tau.T)))
        if asym > SYMMETRY_TOL:
            raise PeriodMatrixError(f"tau is not symmetric (max |tau - tau^T| = {asym:.3e})")
        tau = (tau + tau.T) / 2
        tau.setflags(write=False)
        object.__setattr__(self, "tau", tau)
        if self.min_imag_eigenvalue <= 0:
            raise PeriodMatrixError(
                f"Im tau is not positive definite (smallest eigenvalue "
                f"{self.min_imag_eigenvalue:.3e})"
            )

    @classmethod
    def from_pairs(cls, rows: Sequence[Sequence[Sequence[float]]]) -> "PeriodMatrix":
        """Build from a JSON-style matrix of ``[re, im]`` pairs."""
        try:
            tau = np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
        except (TypeError, ValueError) as exc:
            raise PeriodMatrixError(f"tau entries must be [re, im] pairs: {exc}") from exc
        return cls(tau)

    def to_pairs(self) -> List[List[List[float]]]:
        return [[[float(v.real), float(v.imag)] for v in row] for row in self.tau]

    @property
    def g(self) -> int:
        return self.tau.shape[0]

    @cached_property
    def imag(self) -> npt.NDArray[np.float64]:
        return self.tau.imag.copy()

    @cached_property
    def imag_inv(self) -> npt.NDArray[np.float64]:
        return np.linalg.inv(self.tau.imag)

    @cached_property
    def min_imag_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.tau.imag)[0])


@dataclass(frozen=True, slots=True)
class Characteristic:
    """The characteristic ``[a/n; b/n]`` with integer vectors reduced mod ``n``."""

    n: int
    a: Tuple[int, ...]
    b: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"denominator must be positive, got {self.n}")
        if len(self.a) != len(self.b):
            raise ValueError("a and b must have the same length")
        object.__setattr__(self, "a", tuple(int(x) % self.n for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) % self.n for x in self.b))

    @property
    def g(self) -> int:
        return len(self.a)

    @property
    def coords(self) -> Tuple[int, ...]:
        return self.a + self.b

    @property
    def a_vec(self) -> npt.NDArray[np.float64]:
        return np.array(self.a, dtype=float) / self.n

    @property
    def b_vec(self) -> npt.NDArray[np.float64]:
        return np.array(self.b, dtype=float) / self.n

    def point(self, tau: PeriodMatrix) -> ComplexVector:
        """Return the torsion point ``tau a/n + b/n`` in ``C^g``."""
        return tau.tau @ self.a_vec + self.b_vec

    def __neg__(self) -> "Characteristic":
        return Characteristic(self.n, tuple(-x for x in self.a), tuple(-x for x in self.b))

    def __add__(self, other: "Characteristic") -> "Characteristic":
        if self.n != other.n:
            raise ValueError(f"denominators differ: {self.n} vs {other.n}")
        return Characteristic(
            self.n,
            tuple(x + y for x, y in zip(self.a, other.a)),
            tuple(x + y for x, y in zip(self.b, other.b)),
        )

    def to_lpoint(self) -> LPoint:
        return LPoint(self.n, self.g, self.coords)

    @classmethod
    def from_lpoint(cls, P: LPoint) -> "Characteristic":
        return cls(P.n, P.a, P.b)

    @property
    def label(self) -> str:
        return "[" + " ".join(map(str, self.a)) + ";" + " ".join(map(str, self.b)) + f"]/{self.n}"


@dataclass(frozen=True, eq=False)
class TorusPoint:
    """A point of ``C^g`` with an optional reduction ``z = z0 + tau p + q``."""

    z: ComplexVector
    z0: Optional[ComplexVector] = None
    p: Optional[Tuple[int, ...]] = None
    q: Optional[Tuple[int, ...]] = None

    def verify(self, tau: PeriodMatrix) -> float:
        """Return the residual of the reduction witness, or 0 when there is none."""
        if self.z0 is None:
            return 0.0
        replay = self.z0 + tau.tau @ np.array(self.p, dtype=float) + np.array(self.q, dtype=float)
        return float(np.max(np.abs(replay - self.z)))


def reduce_point(z: Sequence[complex], tau: PeriodMatrix) -> TorusPoint:
    """Reduce *z* into the fundamental domain ``tau [0,1)^g + [0,1)^g``.

    :raises ArithmeticError: If the reduction cannot be replayed to :data:`REDUCTION_TOL`.

    """
    z = np.asarray(z, dtype=complex)
    x = tau.imag_inv @ z.imag
    p = np.floor(x).astype(int)
    shifted = z - tau.tau @ p
    q = np.floor(shifted.real).astype(int)
    point = TorusPoint(z, shifted - q, tuple(int(v) for v in p), tuple(int(v) for v in q))
    residual = point.verify(tau)
    if residual > REDUCTION_TOL:
        raise ArithmeticError(f"lattice reduction residual {residual:.3e}")
    return point


@dataclass(frozen=True, slots=True)
class TruncationParams:
    """Summation radius and the relative tail bound it achieves."""

    radius: int
    target: float
    bound: float


def _tail_bound(radius: int, g: int, lam: float) -> float:
    # Box offsets u with max|u| = k satisfy |u + delta|^2 >= (k - 1/2)^2 for |delta| <= 1/2.
    total = 0.0
    k = radius + 1
    while True:
        shell = (2 * k + 1) ** g - (2 * k - 1) ** g
        term = shell * math.exp(-math.pi * lam * (k - 0.5) ** 2)
        total += term
        if term < 1e-300 or term < total * 1e-17:
            return total
        k += 1


@lru_cache(maxsize=256)
def _radius_for(g: int, lam: float, target: float, max_radius: int) -> Tuple[int, float]:
    for radius in range(1, max_radius + 1):
        bound = _tail_bound(radius, g, lam)
        if bound <= target:
            return radius, bound
    raise TruncationError(
        f"theta tail target {target:.1e} needs radius > {max_radius} "
        f"(smallest eigenvalue of Im tau is {lam:.3e})"
    )


def truncation_for(
    tau: PeriodMatrix, target: Optional[float] = None, max_radius: Optional[int] = None
) -> TruncationParams:
    """Choose the smallest radius whose Gaussian tail bound meets *target*.

    The bound is relative to the peak term ``exp(pi c.Im(tau).c)``, ``c = Im(tau)^-1 Im z``, and
    is uniform in ``z`` and in the characteristic.

    :param tau: Period matrix.
    :param target: Relative tail target; defaults to :func:`~thetagrp.config.get_theta_tail`.
    :param max_radius: Largest radius tried; defaults to the configured maximum.
    :raises TruncationError: If no radius up to *max_radius* suffices.

    """
    target = get_theta_tail() if target is None else target
    max_radius = get_theta_max_radius() if max_radius is None else max_radius
    radius, bound = _radius_for(tau.g, round(tau.min_imag_eigenvalue, 15), target, max_radius)
    logger.debug("theta truncation radius %d (tail bound %.2e)", radius, bound)
    return TruncationParams(radius, target, bound)


@lru_cache(maxsize=32)
def _box(g: int, radius: int) -> npt.NDArray[np.float64]:
    offsets = np.array(list(itertools.product(range(-radius, radius + 1), repeat=g)), dtype=float)
    offsets.setflags(write=False)
    return offsets


CharacteristicLike = Union[Characteristic, Tuple[Sequence[float], Sequence[float]]]


def _char_vectors(chi: CharacteristicLike, g: int) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(chi, Characteristic):
        a, b = chi.a_vec, chi.b_vec
    else:
        a, b = np.asarray(chi[0], dtype=float), np.asarray(chi[1], dtype=float)
    if a.shape != (g,) or b.shape != (g,):
        raise ValueError(f"characteristic vectors must have length {g}")
    return a, b


def _as_vector(z: Union[TorusPoint, Sequence[complex]], g: int) -> ComplexVector:
    vec = np.asarray(z.z if isinstance(z, TorusPoint) else z, dtype=complex).reshape(-1)
    if vec.shape != (g,):
        raise ValueError(f"z must have length {g}, got {vec.shape}")
    return vec


def theta_with_scale(
    chi: CharacteristicLike,
    z: Union[TorusPoint, Sequence[complex]],
    tau: PeriodMatrix,
    trunc: Optional[TruncationParams] = None,
) -> Tuple[complex, float]:
    """Evaluate ``theta[a;b](z, tau)`` together with the peak term magnitude.

    The peak ``exp(pi c.Im(tau).c)`` is the natural scale of the value at *z*; the tail bound
    of *trunc* is relative to it and the pole guards compare against it.

    :returns: ``(value, scale)``.

    """
    g = tau.g
    trunc = truncation_for(tau) if trunc is None else trunc
    a, b = _char_vectors(chi, g)
    zv = _as_vector(z, g)
    c = tau.imag_inv @ zv.imag
    center = np.round(-c - a)
    m = _box(g, trunc.radius) + center + a
    quad = np.einsum("ki,ij,kj->k", m, tau.tau, m)
    exponent = 1j * np.pi * (2 * (m @ (zv + b)) + quad)
    peak = math.pi * float(c @ tau.imag @ c)
    value = complex(np.sum(np.exp(exponent - peak)))
    return value * math.exp(peak), math.exp(peak)


def theta(
    chi: CharacteristicLike,
    z: Union[TorusPoint, Sequence[complex]],
    tau: PeriodMatrix,
    trunc: Optional[TruncationParams] = None,
) -> complex:
    """Evaluate ``theta[a;b](z, tau)``.

    :param chi: A :class:`Characteristic` or a pair of real vectors ``(a, b)``.
    :param z: Point of ``C^g``.
    :param tau: Period matrix.
    :param trunc: Truncation; computed from the configured tail target when omitted.
    :raises TruncationError: If the tail target cannot be met.

    """
    return theta_with_scale(chi, z, tau, trunc)[0]


def theta_constants(
    n: int, tau: PeriodMatrix, trunc: Optional[TruncationParams] = None
) -> Dict[Characteristic, complex]:
    """Return ``theta[a;b](0, tau)`` for every ``n``-torsion characteristic."""
    zero = np.zeros(tau.g, dtype=complex)
    return {chi: theta(chi, zero, tau, trunc) for chi in torsion_points(n, tau.g)}


def automorphy_factor(
    chi: CharacteristicLike,
    p: Sequence[int],
    q: Sequence[int],
    z: Union[TorusPoint, Sequence[complex]],
    tau: PeriodMatrix,
) -> complex:
    """Return ``lambda`` with ``theta[a;b](z + p + tau q) = lambda theta[a;b](z)``.

    ``lambda = exp(2 pi i a.p - 2 pi i b.q - pi i q.tau.q - 2 pi i q.z)``.

    """
    g = tau.g
    a, b = _char_vectors(chi, g)
    zv = _as_vector(z, g)
    pv = np.asarray(p, dtype=float)
    qv = np.asarray(q, dtype=float)
    exponent = 2j * np.pi * (a @ pv) - 2j * np.pi * (b @ qv)
    exponent += -1j * np.pi * (qv @ tau.tau @ qv) - 2j * np.pi * (qv @ zv)
    return complex(np.exp(exponent))


def shift_identity_check(
    chi: CharacteristicLike,
    z: Union[TorusPoint, Sequence[complex]],
    tau: PeriodMatrix,
    trunc: Optional[TruncationParams] = None,
) -> float:
    """Residual of the shift identity for ``theta[a;b]``.

    ``theta[a;b](z) = exp(pi i a.tau.a + 2 pi i a.(z+b)) theta[0;0](z + tau a + b)``

    """
    g = tau.g
    a, b = _char_vectors(chi, g)
    zv = _as_vector(z, g)
    lhs = theta((a, b), zv, tau, trunc)
    prefactor = np.exp(1j * np.pi * (a @ tau.tau @ a) + 2j * np.pi * (a @ (zv + b)))
    rhs = prefactor * theta((np.zeros(g), np.zeros(g)), zv + tau.tau @ a + b, tau, trunc)
    return float(abs(lhs - rhs))


def torsion_points(n: int, g: int) -> List[Characteristic]:
    """Return the ``n^(2g)`` characteristics of ``n``-torsion points, ``(a, b)`` lexicographic."""
    if n < 2:
        raise ValueError(f"torsion order must be at least 2, got {n}")
    return [
        Characteristic(n, coords[:g], coords[g:])
        for coords in itertools.product(range(n), repeat=2 * g)
    ]


def analytic_d(
    P: Union[Characteristic, LPoint], Q: Union[Characteristic, LPoint]
) -> RootOfUnity:
    """Pairing of the analytic normal Weil set, ``exp(-2 pi i N a_P . f_Q)``.

    With ``P = tau a + b`` and ``Q = tau e + f`` this is the scalar in
    ``phi_P . t_P^* phi_Q = d(P, Q) phi_{P+Q}``. As an exponent mod ``N`` it is ``-a_P . b_Q``.

    """
    if P.n != Q.n:
        raise ValueError(f"torsion orders differ: {P.n} vs {Q.n}")
    return RootOfUnity(P.n, -sum(x * y for x, y in zip(P.a, Q.b)))


def analytic_weil_pairing(
    P: Union[Characteristic, LPoint], Q: Union[Characteristic, LPoint]
) -> RootOfUnity:
    """Return ``exp(2 pi i N (e.b - a.f))``, the skew-symmetrization of :func:`analytic_d`."""
    return analytic_d(P, Q) / analytic_d(Q, P)


class AnalyticWeilFamily(WeilFamily):
    """``P -> phi_P(z) = (theta[-a;-b](z) / theta[0;0](z))^N`` on ``C^g / Lambda_tau``.

    Translation is ``z -> z - P`` and inversion is ``z -> -z``.

    """

    def __init__(
        self,
        n: int,
        tau: PeriodMatrix,
        trunc: Optional[TruncationParams] = None,
        pole_tol: Optional[float] = None,
        base_point: Optional[ComplexVector] = None,
    ) -> None:
        super().__init__(n, tau.g, analytic_d)
        self.tau = tau
        self.trunc = truncation_for(tau) if trunc is None else trunc
        self.pole_tol = get_pole_tol() if pole_tol is None else pole_tol
        self._zero = np.zeros(tau.g)
        if base_point is None:
            # an irrational-looking point well away from the theta divisor of small tau
            u = np.array([0.1234 + 0.0713 * k for k in range(tau.g)])
            v = np.array([0.2718 + 0.1414 * k for k in range(tau.g)])
            base_point = tau.tau @ u + v
        self.base_point = np.asarray(base_point, dtype=complex)

    def characteristic(self, P: LPoint) -> Characteristic:
        return Characteristic.from_lpoint(P)

    def evaluate(self, P: LPoint, x: Any, *, allow_zero: bool = False) -> complex:
        z = np.asarray(x, dtype=complex)
        denominator, scale = theta_with_scale((self._zero, self._zero), z, self.tau, self.trunc)
        if abs(denominator) < self.pole_tol * scale:
            raise PoleProximityError(f"theta[0;0] vanishes at z={z} (|theta|/scale < tol)")
        if P.is_zero:
            return 1.0 + 0.0j
        chi = self.characteristic(P)
        numerator = theta((-chi.a_vec, -chi.b_vec), z, self.tau, self.trunc)
        if not allow_zero and abs(numerator) < self.pole_tol * scale:
            raise PoleProximityError(f"phi_{chi.label} vanishes at z={z}")
        return complex((numerator / denominator) ** self.n)

    def translate(self, x: Any, P: LPoint) -> ComplexVector:
        return np.asarray(x, dtype=complex) - self.characteristic(P).point(self.tau)

    def negate(self, x: Any) -> ComplexVector:
        return -np.asarray(x, dtype=complex)

    def sample_point(self, rng: np.random.Generator) -> ComplexVector:
        u = rng.uniform(0.0, 1.0, self.g)
        v = rng.uniform(0.0, 1.0, self.g)
        return self.tau.tau @ u + v

    def theta_quotient_power(self, P: LPoint, z: Any, power: int) -> complex:
        """Return ``(theta[-a;-b](z) / theta[0;0](z))^power`` without the pole guard."""
        chi = self.characteristic(P)
        numerator = theta((-chi.a_vec, -chi.b_vec), z, self.tau, self.trunc)
        denominator = theta((self._zero, self._zero), z, self.tau, self.trunc)
        return complex((numerator / denominator) ** power)


def analytic_weil_family(n: int, tau: PeriodMatrix, **kwargs: Any) -> AnalyticWeilFamily:
    """Return the analytic normal Weil set of level *n* on ``C^g / Lambda_tau``.

    :raises PeriodMatrixError: Never directly; *tau* is validated on construction.

    """
    if n < 2:
        raise ValueError(f"level must be at least 2, got {n}")
    return AnalyticWeilFamily(n, tau, **kwargs)

