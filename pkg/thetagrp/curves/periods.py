# -*- coding: utf-8 -*-
"""Period matrix and Abel–Jacobi map of a genus-2 curve.

Homology comes from a chain of branch points ``e_(1) .. e_(6)`` (sorted order, or the first
permutation whose straight segments keep clear of the other branch points). The cycle ``c_k``
runs from ``e_(k)`` to ``e_(k+1)`` on one sheet and back on the other, so consecutive cycles
meet once, and

    a1 = c1,  b1 = c2,  a2 = c1 + c3,  b2 = c4

is symplectic for one choice of orientations, which is found by trying all 16. Segment
integrals use ``x = m - h cos(theta)``; this removes the inverse square-root endpoint
singularities and leaves a smooth integrand for Gauss–Legendre.

Abel–Jacobi integrals start at the first chain point. Paths to affine points are polygons
that end at the base point with the substitution ``x = e + (x_a - e) s^2``; ``y`` is continued
along the nodes from the known value at the endpoint.

"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from ..config import get_quad_tol
from ..theta_analytic import (
    Characteristic,
    PeriodMatrix,
    TorusPoint,
    reduce_point,
    theta_with_scale,
)
from .hyperelliptic import (
    CurvePoint,
    Divisor,
    HyperellipticCurve,
    ThetaCharacteristicDivisor,
    theta_characteristics,
)

__all__ = [
    "PathError",
    "JacobianFrame",
    "period_matrix",
    "abel_jacobi",
    "torsion_characteristic",
    "riemann_divisor",
]

logger = logging.getLogger(__name__)

#: Relative symmetry residual accepted for ``A^-1 B``.
SYMMETRY_RTOL = 1e-6
#: First and last Gauss–Legendre orders tried on a path segment.
MIN_ORDER, MAX_ORDER = 32, 4096
#: Fraction of the smallest branch-point separation a path must keep clear.
CLEARANCE = 0.25
#: Largest rounding residual accepted by :func:`torsion_characteristic`.
TORSION_TOL = 1e-5


class PathError(RuntimeError):
    """An integration path could not be routed or its quadrature did not converge."""


Integrand = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.complex128]]


def _gauss(integrand: Integrand, quad_tol: float, what: str) -> Tuple[np.ndarray, int]:
    """Integrate over ``[0, 1]`` with doubling Gauss–Legendre orders until two agree."""
    previous = None
    order = MIN_ORDER
    while order <= MAX_ORDER:
        nodes, weights = np.polynomial.legendre.leggauss(order)
        s = 0.5 * (nodes + 1.0)
        value = integrand(s) @ (0.5 * weights)
        if previous is not None:
            change = np.max(np.abs(value - previous))
            if change <= quad_tol * max(1.0, float(np.max(np.abs(value)))):
                return value, order
        previous = value
        order *= 2
    raise PathError(f"quadrature along {what} did not converge by order {MAX_ORDER}")


def _continue_sqrt(squares: npt.NDArray[np.complex128], anchor: complex) -> np.ndarray:
    """Square roots of *squares*, continued from *anchor* through the ordered samples."""
    roots = np.sqrt(squares.astype(complex))
    out = np.empty_like(roots)
    prev = anchor
    for k, r in enumerate(roots):
        if abs(r - prev) > abs(r + prev):
            r = -r
        out[k] = r
        prev = r
    return out


def _segment_distance(point: complex, a: complex, b: complex) -> float:
    ab = b - a
    t = ((point - a) * np.conj(ab)).real / max(abs(ab) ** 2, 1e-300)
    t = min(1.0, max(0.0, t))
    return abs(point - (a + t * ab))


def _clear(curve: HyperellipticCurve, a: complex, b: complex, exclude: Sequence[complex]) -> bool:
    limit = CLEARANCE * curve.min_separation
    return all(
        _segment_distance(e, a, b) > limit for e in curve.branch_points if e not in exclude
    )


def _chain_order(curve: HyperellipticCurve) -> Tuple[int, ...]:
    points = curve.branch_points
    for order in itertools.permutations(range(6)):
        legs = [(points[order[k]], points[order[k + 1]]) for k in range(5)]
        if all(_clear(curve, a, b, (a, b)) for a, b in legs):
            return order
    raise PathError("no chain of straight segments between branch points keeps clear")


def _cycle_integral(
    curve: HyperellipticCurve, k: int, l: int, quad_tol: float
) -> Tuple[np.ndarray, int]:
    """``2 int_{e_k}^{e_l} (1, x) dx / y`` along the straight segment, one sheet."""
    e = curve.branch_points
    m, h = 0.5 * (e[k] + e[l]), 0.5 * (e[l] - e[k])
    others = [e[j] for j in range(6) if j not in (k, l)]
    # branch of sqrt(g) pinned by its value at theta = 0
    anchor = np.sqrt(complex(np.prod([e[k] - r for r in others])))

    def integrand(s: np.ndarray) -> np.ndarray:
        theta = np.pi * s
        x = m - h * np.cos(theta)
        g = np.prod([x - r for r in others], axis=0)
        root = _continue_sqrt(g, anchor)
        # dx / y = -i dtheta / sqrt(g) on this sheet; dtheta = pi ds
        base = -1j * np.pi / root
        return np.vstack([base, x * base])

    value, order = _gauss(integrand, quad_tol, f"segment e{k + 1}-e{l + 1}")
    return 2.0 * value, order


@dataclass(frozen=True, eq=False)
class JacobianFrame:
    """Periods and normalized period matrix of a genus-2 curve.

    ``A[i, j]`` and ``B[i, j]`` are the integrals of ``x^i dx/y`` over ``a_j`` and ``b_j``;
    ``tau = A^-1 B`` after symmetrization. ``cycles[k]`` holds the two integrals over the chain
    cycle ``c_(k+1)`` and ``chain`` the 0-based branch-point order used.

    """

    curve: HyperellipticCurve
    A: npt.NDArray[np.complex128]
    B: npt.NDArray[np.complex128]
    tau: PeriodMatrix
    chain: Tuple[int, ...]
    cycles: npt.NDArray[np.complex128]
    orientation: Tuple[int, ...]
    symmetry_residual: float
    riemann_residual: float
    quadrature_order: int
    quad_tol: float

    @property
    def base_index(self) -> int:
        """1-based label of the Weierstrass point the Abel–Jacobi map starts at."""
        return self.chain[0] + 1

    @property
    def base_point(self) -> CurvePoint:
        return self.curve.weierstrass(self.base_index)

    def normalize(self, integrals: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """Map integrals of ``(dx/y, x dx/y)`` to normalized coordinates."""
        return np.linalg.solve(self.A, np.asarray(integrals, dtype=complex))

    def point_integral(self, point: CurvePoint) -> npt.NDArray[np.complex128]:
        """Normalized ``AJ(point - base)``, unreduced.

        :raises PathError: At infinity (only ``inf+ + inf-`` is handled, by
            :func:`abel_jacobi`).

        """
        if point.is_infinite:
            raise PathError("a single point at infinity has no Abel–Jacobi path here")
        if point.is_weierstrass:
            position = self.chain.index(point.weierstrass - 1)
            return 0.5 * self.cycles[:position].sum(axis=0)
        return self.normalize(_affine_integral(self.curve, point, self.base_point, self.quad_tol))

    def to_json(self) -> Dict[str, object]:
        return {
            "tau": self.tau.to_pairs(),
            "chain": [k + 1 for k in self.chain],
            "orientation": list(self.orientation),
            "symmetry_residual": self.symmetry_residual,
            "riemann_residual": self.riemann_residual,
            "quadrature_order": self.quadrature_order,
        }


def period_matrix(
    curve: HyperellipticCurve, *, quad_tol: Optional[float] = None
) -> JacobianFrame:
    """Integrate ``(dx/y, x dx/y)`` over a symplectic basis and return the normalized frame.

    :raises PathError: If no chain keeps clear of the branch points, a quadrature does not
        converge, or no orientation gives a symmetric ``tau`` with positive imaginary part.

    """
    quad_tol = get_quad_tol() if quad_tol is None else quad_tol
    chain = _chain_order(curve)
    raw = []
    order = 0
    for k in range(5):
        value, used = _cycle_integral(curve, chain[k], chain[k + 1], quad_tol)
        raw.append(value)
        order = max(order, used)
    raw = np.array(raw)
    best = None
    for signs in itertools.product((1, -1), repeat=4):
        c = [signs[k] * raw[k] for k in range(4)]
        A = np.column_stack([c[0], c[0] + c[2]])
        B = np.column_stack([c[1], c[3]])
        tau = np.linalg.solve(A, B)
        residual = float(np.max(np.abs(tau - tau.T)) / max(1.0, np.max(np.abs(tau))))
        if residual > SYMMETRY_RTOL:
            continue
        sym = 0.5 * (tau + tau.T)
        if np.linalg.eigvalsh(sym.imag)[0] <= 0:
            continue
        best = (signs, A, B, sym, residual)
        break
    if best is None:
        raise PathError("no orientation of the chain cycles gives a Riemann matrix")
    signs, A, B, sym, residual = best
    riemann = float(np.max(np.abs(A @ B.T - B @ A.T)) / max(1.0, np.max(np.abs(A @ B.T))))
    cycles = np.array([np.linalg.solve(A, v) for v in raw])
    logger.info(
        "period matrix: chain %s, orientation %s, symmetry residual %.2e, order %d",
        [k + 1 for k in chain],
        signs,
        residual,
        order,
    )
    return JacobianFrame(
        curve=curve,
        A=A,
        B=B,
        tau=PeriodMatrix(sym),
        chain=tuple(chain),
        cycles=cycles,
        orientation=tuple(signs),
        symmetry_residual=residual,
        riemann_residual=riemann,
        quadrature_order=order,
        quad_tol=quad_tol,
    )


def _ordinary_leg(
    curve: HyperellipticCurve, xa: complex, ya: complex, xb: complex, quad_tol: float
) -> Tuple[np.ndarray, complex]:
    """Integral of ``(1, x) dx / y`` from ``(xa, ya)`` to the place over ``xb`` it continues to."""

    def integrand(s: np.ndarray) -> np.ndarray:
        x = xa + (xb - xa) * s
        y = _continue_sqrt(np.array([curve.f(v) for v in x]), ya)
        base = (xb - xa) / y
        return np.vstack([base, x * base])

    value, _ = _gauss(integrand, quad_tol, f"leg {xa:.3g} -> {xb:.3g}")
    # continue y to the far end on a fine grid
    grid = np.linspace(0.0, 1.0, 513)
    xs = xa + (xb - xa) * grid
    yb = _continue_sqrt(np.array([curve.f(v) for v in xs]), ya)[-1]
    return value, complex(yb)


def _branch_leg(
    curve: HyperellipticCurve, xa: complex, ya: complex, e: complex, quad_tol: float
) -> np.ndarray:
    """Integral of ``(1, x) dx / y`` from ``(xa, ya)`` into the branch point ``e``."""
    others = [r for r in curve.branch_points if r != e]

    def integrand(sigma: np.ndarray) -> np.ndarray:
        # walk sigma downwards from the known end so the root can be continued
        order = np.argsort(-sigma)
        sig = sigma[order]
        x = e + (xa - e) * sig**2
        squares = (xa - e) * np.prod([x - r for r in others], axis=0)
        Y = np.empty_like(squares)
        Y[order] = _continue_sqrt(squares, ya)
        xs = np.empty_like(x)
        xs[order] = x
        base = -2.0 * (xa - e) / Y
        return np.vstack([base, xs * base])

    value, _ = _gauss(integrand, quad_tol, f"leg {xa:.3g} -> e={e:.3g}")
    return value


def _route(curve: HyperellipticCurve, start: complex, end: complex) -> List[complex]:
    """Waypoints from *start* to the branch point *end* with every leg kept clear."""
    if _clear(curve, start, end, (end,)):
        return [start, end]
    length = abs(end - start)
    normal = 1j * (end - start) / length
    mid = 0.5 * (start + end)
    for k in (0.5, -0.5, 1.0, -1.0, 1.5, -1.5, 2.0, -2.0, 3.0, -3.0):
        u = mid + k * length * normal
        if _clear(curve, start, u, ()) and _clear(curve, u, end, (end,)):
            return [start, u, end]
    raise PathError(f"no clear path from {start:.4g} to the branch point {end:.4g}")


def _affine_integral(
    curve: HyperellipticCurve, point: CurvePoint, base: CurvePoint, quad_tol: float
) -> np.ndarray:
    """``int_base^point (1, x) dx / y`` along a routed polygon."""
    waypoints = _route(curve, complex(point.x), complex(base.x))
    total = np.zeros(2, dtype=complex)
    x, y = complex(point.x), complex(point.y)
    for nxt in waypoints[1:-1]:
        value, y = _ordinary_leg(curve, x, y, nxt, quad_tol)
        total += value
        x = nxt
    total += _branch_leg(curve, x, y, complex(base.x), quad_tol)
    return -total


def abel_jacobi(frame: JacobianFrame, D: Divisor, *, reduce: bool = True) -> TorusPoint:
    """Normalized Abel–Jacobi image of a degree-0 divisor.

    ``inf+`` and ``inf-`` may occur only with equal multiplicity; they then contribute
    ``AJ(K - 2 W_base) = 0``.

    :raises ValueError: If ``deg D != 0``.
    :raises PathError: On unpaired points at infinity or routing failure.

    """
    if D.degree != 0:
        raise ValueError(f"Abel–Jacobi needs a degree-0 divisor, got degree {D.degree}")
    curve = frame.curve
    n_plus = D.multiplicity(curve.infinity(1))
    n_minus = D.multiplicity(curve.infinity(-1))
    if n_plus != n_minus:
        raise PathError("inf+ and inf- must appear with equal multiplicity")
    z = np.zeros(2, dtype=complex)
    for point, mult in D:
        if point.is_infinite:
            continue
        z += mult * frame.point_integral(point)
    return reduce_point(z, frame.tau) if reduce else TorusPoint(z)


def torsion_characteristic(
    frame: JacobianFrame, D: Divisor, N: int = 2, *, tol: float = TORSION_TOL
) -> Tuple[Characteristic, float]:
    """Solve ``AJ(D) = tau a/N + b/N`` mod the lattice and round.

    :returns: ``(characteristic, residual)`` with the residual in units of the lattice.
    :raises ValueError: If the residual exceeds *tol*.

    """
    z = abel_jacobi(frame, D, reduce=False).z
    tau = frame.tau
    x = tau.imag_inv @ z.imag
    y = z.real - tau.tau.real @ x
    a = np.round(N * x)
    b = np.round(N * y)
    residual = float(max(np.max(np.abs(N * x - a)), np.max(np.abs(N * y - b))) / N)
    if residual > tol:
        raise ValueError(f"{D.label} is not {N}-torsion to tolerance (residual {residual:.2e})")
    chi = Characteristic(N, tuple(int(v) for v in a), tuple(int(v) for v in b))
    return chi, residual


def riemann_divisor(
    frame: JacobianFrame, rng: np.random.Generator, *, samples: int = 4
) -> Tuple[ThetaCharacteristicDivisor, float]:
    """The even theta characteristic ``kappa`` with ``theta(AJ(p - kappa)) = 0`` for all ``p``.

    :returns: ``(kappa, worst relative |theta|)`` over *samples* random points.

    """
    points = [frame.curve.random_point(rng) for _ in range(samples)]
    zero = (np.zeros(2), np.zeros(2))
    scores = []
    for entry in theta_characteristics(frame.curve):
        if entry.parity:
            continue
        worst = 0.0
        for p in points:
            z = abel_jacobi(frame, Divisor(((p, 1),)) - entry.divisor, reduce=False).z
            value, scale = theta_with_scale(zero, z, frame.tau)
            worst = max(worst, abs(value) / scale)
        logger.debug("riemann divisor candidate %s: %.2e", entry.label, worst)
        scores.append((entry, worst))
    return min(scores, key=lambda item: item[1])
