# -*- coding: utf-8 -*-
"""Bases of ``L(D) = {h : div h + D >= 0}`` on a genus-2 curve.

Functions are sought as ``(p(x) + q(x) y) / r(x)``. The denominator ``r`` absorbs the poles
allowed at finite places; the degrees of ``p`` and ``q`` are bounded by the poles allowed at
infinity. Every remaining requirement (no poles at the conjugates of the roots of ``r``,
required zeros, exact pole orders at ``inf+`` and ``inf-``) is a linear condition on the
Laurent coefficients of the ansatz columns, and ``L(D)`` is the numerical null space.

"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from numpy.polynomial import Polynomial
from scipy import linalg

from ..config import get_null_tol
from .hyperelliptic import CurveFunction, CurvePoint, Divisor, HyperellipticCurve
from .laurent import Laurent

__all__ = [
    "RiemannRochError",
    "SectionBasis",
    "riemann_roch_basis",
    "quadratic_differential_basis",
    "verify_pole_orders",
    "linear_system_member",
    "h0_theta_characteristic",
]

logger = logging.getLogger(__name__)

#: Attempts at drawing a member of a linear system in general position.
MEMBER_TRIES = 12


class RiemannRochError(RuntimeError):
    """``L(D)`` came out with an unexpected dimension or a degenerate member."""


@dataclass(frozen=True, eq=False)
class SectionBasis:
    """A basis of ``L(divisor)``.

    With ``weight = m`` the functions are the coefficients of sections ``h (dx/y)^m`` of
    ``O(m K + D)``, in which case ``divisor = m (inf+ + inf-) + D``.

    ``gap`` is the ratio of the smallest retained to the largest discarded singular value
    (``inf`` when nothing was discarded); ``condition`` is ``sigma_max / sigma_min`` over the
    retained ones.

    """

    curve: HyperellipticCurve
    divisor: Divisor
    functions: Tuple[CurveFunction, ...]
    singular_values: Tuple[float, ...]
    gap: float
    condition: float
    weight: int = 0

    @property
    def dimension(self) -> int:
        return len(self.functions)

    @property
    def denominator(self) -> Tuple[Tuple[complex, int], ...]:
        return self.functions[0].denominator if self.functions else ()

    def combine(self, coeffs: npt.ArrayLike) -> CurveFunction:
        """Return ``sum_i coeffs[i] h_i``."""
        coeffs = np.asarray(coeffs, dtype=complex)
        p = sum(c * h.p for c, h in zip(coeffs, self.functions))
        q = sum(c * h.q for c, h in zip(coeffs, self.functions))
        return CurveFunction(self.curve, np.asarray(p), np.asarray(q), self.denominator)

    def matrix(self, points: List[CurvePoint]) -> npt.NDArray[np.complex128]:
        """``M[i, j] = h_i(points[j])``."""
        return np.array([[h.evaluate(z) for z in points] for h in self.functions], dtype=complex)


def _denominator(curve: HyperellipticCurve, D: Divisor) -> Tuple[Tuple[complex, int], ...]:
    roots: Dict[complex, int] = {}
    for point, mult in D:
        if mult <= 0 or point.is_infinite:
            continue
        m = -(-mult // point.ramification)
        roots[point.x] = max(roots.get(point.x, 0), m)
    return tuple(sorted(roots.items(), key=lambda item: (item[0].real, item[0].imag)))


def _condition_places(curve: HyperellipticCurve, D: Divisor, denominator) -> List[CurvePoint]:
    places: List[CurvePoint] = []
    for c, _ in denominator:
        places.extend(curve.places_over(c))
    for point in D.support:
        if not point.is_infinite and point not in places:
            places.append(point)
    places.extend([curve.infinity(1), curve.infinity(-1)])
    return places


def _columns_at(
    curve: HyperellipticCurve,
    point: CurvePoint,
    denominator: Tuple[Tuple[complex, int], ...],
    dp: int,
    dq: int,
    prec: int,
) -> List[Laurent]:
    X, Y = curve.expansion(point, prec)
    rinv = Laurent.constant(1.0, prec)
    for c, m in denominator:
        rinv = rinv * (X + Laurent.constant(-c, prec)) ** m
    rinv = rinv.inverse()
    columns: List[Laurent] = []
    power = Laurent.constant(1.0, prec)
    powers = []
    for _ in range(max(dp, dq) + 1):
        powers.append(power)
        power = power * X
    for i in range(dp + 1):
        columns.append(powers[i] * rinv)
    for j in range(dq + 1):
        columns.append(powers[j] * Y * rinv)
    return columns


def riemann_roch_basis(
    curve: HyperellipticCurve,
    D: Divisor,
    *,
    null_tol: Optional[float] = None,
    check_dimension: bool = True,
    weight: int = 0,
) -> SectionBasis:
    """Return a basis of ``L(D)``.

    :param curve: The curve.
    :param D: Any divisor; the Riemann–Roch dimension ``deg D - 1`` is enforced when
        ``deg D >= 3`` and *check_dimension* is set.
    :param null_tol: Relative singular-value threshold; defaults to the configured value.
    :param weight: Recorded on the result (see :class:`SectionBasis`).
    :raises RiemannRochError: If the null space has the wrong dimension.

    """
    null_tol = get_null_tol() if null_tol is None else null_tol
    denominator = _denominator(curve, D)
    deg_r = sum(m for _, m in denominator)
    n_inf = max(D.multiplicity(curve.infinity(1)), D.multiplicity(curve.infinity(-1)))
    dp = deg_r + n_inf
    dq = deg_r + n_inf - 3
    n_cols = max(dp + 1, 0) + max(dq + 1, 0)
    if n_cols == 0:
        return SectionBasis(curve, D, (), (), float("inf"), 1.0, weight)
    prec = 2 * deg_r + 2 * abs(n_inf) + max((abs(m) for _, m in D), default=0) + 10

    rows: List[npt.NDArray[np.complex128]] = []
    for point in _condition_places(curve, D, denominator):
        required = -D.multiplicity(point)
        columns = _columns_at(curve, point, denominator, dp, dq, prec)
        low = min((col.val for col in columns if not col.is_exact_zero()), default=required)
        for k in range(low, required):
            row = np.array([col.coefficient(k) for col in columns], dtype=complex)
            norm = np.max(np.abs(row))
            if norm > 0:
                rows.append(row / norm)

    if rows:
        A = np.vstack(rows)
        col_norms = np.linalg.norm(A, axis=0)
        col_norms[col_norms == 0] = 1.0
        A = A / col_norms
        _, s, vh = linalg.svd(A)
        rank = int(np.sum(s > null_tol * s[0])) if s.size and s[0] > 0 else 0
        null = vh[rank:].conj().T / col_norms[:, None]
    else:
        s = np.zeros(0)
        rank = 0
        null = np.eye(n_cols, dtype=complex)
    kept = s[:rank]
    dropped = s[rank:]
    gap = float("inf")
    if kept.size and dropped.size and dropped[0] > 0:
        gap = float(kept[-1] / dropped[0])
    condition = float(kept[0] / kept[-1]) if kept.size else 1.0
    dim = null.shape[1]
    logger.debug("L(%s): %d columns, rank %d, dim %d, gap %.2e", D.label, n_cols, rank, dim, gap)

    if check_dimension and D.degree >= 3 and dim != D.degree - 1:
        raise RiemannRochError(
            f"dim L({D.label}) = {dim}, expected {D.degree - 1} (singular values "
            f"{np.array2string(s, precision=2)}, gap {gap:.2e})"
        )
    functions = []
    np_cols = max(dp + 1, 0)
    for k in range(dim):
        v = null[:, k]
        v = v / v[np.argmax(np.abs(v))]
        functions.append(CurveFunction(curve, v[:np_cols].copy(), v[np_cols:].copy(), denominator))
    return SectionBasis(
        curve, D, tuple(functions), tuple(float(x) for x in s), gap, condition, weight
    )


def quadratic_differential_basis(
    curve: HyperellipticCurve, D: Divisor, *, null_tol: Optional[float] = None
) -> SectionBasis:
    """Basis of ``H^0(O(2K + D))`` as function parts ``h`` of ``h (dx/y)^2``."""
    twisted = 2 * curve.canonical_divisor() + D
    return riemann_roch_basis(curve, twisted, null_tol=null_tol, weight=2)


def verify_pole_orders(basis: SectionBasis, prec: int = 16) -> int:
    """Largest violation of ``ord_P(h) >= -mult_P(divisor)`` over the basis and the support.

    Returns 0 when every function passes. The points at infinity are always checked.

    """
    curve = basis.curve
    points = list(basis.divisor.support)
    for c, _ in basis.denominator:
        points.extend(p for p in curve.places_over(c) if p not in points)
    for inf in (curve.infinity(1), curve.infinity(-1)):
        if inf not in points:
            points.append(inf)
    worst = 0
    for h in basis.functions:
        for point in points:
            order = h.order_at(point, prec)
            worst = max(worst, -basis.divisor.multiplicity(point) - order)
    return worst


def _known_roots(
    curve: HyperellipticCurve, E: Divisor, denominator: Tuple[Tuple[complex, int], ...]
) -> List[complex]:
    # x-roots of p^2 - q^2 f coming from div(r) - E rather than from the new member
    known: Dict[CurvePoint, int] = {}
    for c, m in denominator:
        for place in curve.places_over(c):
            known[place] = known.get(place, 0) + m * place.ramification
    for point, mult in E:
        if not point.is_infinite:
            known[point] = known.get(point, 0) - mult
    roots: List[complex] = []
    for place, k in known.items():
        if k < 0:
            raise RiemannRochError(f"denominator does not absorb {E.label} at {place.label}")
        roots.extend([complex(place.x)] * k)
    return roots


def linear_system_member(
    curve: HyperellipticCurve,
    E: Divisor,
    rng: np.random.Generator,
    *,
    null_tol: Optional[float] = None,
) -> Divisor:
    """Draw an effective divisor ``Z ~ E`` of simple affine, non-Weierstrass support.

    A random ``h`` in ``L(E)`` has ``div h = Z - E``. The ``x`` of the points of ``Z`` are the
    roots of the norm ``p^2 - q^2 f`` left after removing those forced by ``div r - E``; the
    sign of ``y`` at each root is the one that makes ``p + q y`` vanish.

    :raises RiemannRochError: If no draw in :data:`MEMBER_TRIES` is in general position.

    """
    basis = riemann_roch_basis(curve, E, null_tol=null_tol)
    if basis.dimension < 2:
        raise RiemannRochError(f"|{E.label}| has no moving members (dim L = {basis.dimension})")
    known = _known_roots(curve, E, basis.denominator)
    clearance = 1e-3 * curve.min_separation
    for attempt in range(MEMBER_TRIES):
        coeffs = rng.standard_normal(basis.dimension) + 1j * rng.standard_normal(basis.dimension)
        h = basis.combine(coeffs)
        norm = h.norm_polynomial()
        expected = len(known) + E.degree
        coef = norm.coef
        if len(coef) - 1 > expected:
            lead = np.max(np.abs(coef))
            if np.max(np.abs(coef[expected + 1 :])) > 1e-9 * lead:
                logger.debug("draw %d of |%s| meets infinity, redrawing", attempt, E.label)
                continue
            coef = coef[: expected + 1]
        roots = list(Polynomial(coef).roots())
        if len(roots) != expected:
            continue
        for c in known:
            idx = int(np.argmin([abs(r - c) for r in roots]))
            roots.pop(idx)
        poly = Polynomial(coef)
        dpoly = poly.deriv()
        points: List[CurvePoint] = []
        for x0 in roots:
            for _ in range(3):
                step = poly(x0) / dpoly(x0) if dpoly(x0) != 0 else 0.0
                x0 = x0 - step
            if min(abs(x0 - e) for e in curve.branch_points) < clearance:
                break
            y0 = np.sqrt(complex(curve.f(x0)))
            p_val = np.polynomial.polynomial.polyval(x0, h.p)
            q_val = np.polynomial.polynomial.polyval(x0, h.q) if len(h.q) else 0.0
            plus, minus = abs(p_val + q_val * y0), abs(p_val - q_val * y0)
            size = abs(p_val) + abs(q_val * y0)
            if min(plus, minus) > 1e-6 * size or max(plus, minus) < 1e-3 * size:
                break
            points.append(curve.point(x0, y0 if plus < minus else -y0))
        else:
            xs = [p.x for p in points]
            if all(abs(a - b) > clearance for i, a in enumerate(xs) for b in xs[i + 1 :]):
                return Divisor.sum_of(points)
        logger.debug("member draw %d of |%s| degenerate, redrawing", attempt, E.label)
    raise RiemannRochError(
        f"no member of |{E.label}| in general position after {MEMBER_TRIES} draws"
    )


def h0_theta_characteristic(
    curve: HyperellipticCurve, E: Divisor, *, null_tol: Optional[float] = None
) -> int:
    """Numerical ``dim L(E)`` of a degree-1 class: 1 for ``W_i``, 0 for the even classes."""
    return riemann_roch_basis(curve, E, null_tol=null_tol, check_dimension=False).dimension
