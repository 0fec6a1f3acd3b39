# -*- coding: utf-8 -*-
"""Quadratic spaces, isotropic frames and the Pfaffian square root of a Plücker coordinate.

Frames are ``2n x n`` matrices whose columns span an isotropic subspace. Everything works
over exact rationals (``dtype=object`` arrays of :class:`fractions.Fraction`) or complex
doubles, chosen by the dtype of the Gram matrix.

With split coordinates ``T = [F | W]`` (``F`` spanning ``V_0``, ``G`` becoming
``[[0, I], [I, 0]]``) a maximal isotropic ``U`` transverse to ``W`` is the graph
``{(x, A x)}`` of a skew ``A``. The Plücker coordinate ``s = det(U -> V / V_0)`` is then
``det(X) Pf(A)^2``, the square of the pure-spinor coordinate ``Pf(A)`` up to the chart
constant ``c = det(X)``.

"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from scipy import linalg

__all__ = [
    "ChartError",
    "QuadraticSpace",
    "as_exact",
    "det_exact",
    "pfaffian",
    "isotropy_residual",
    "hyperbolic_coordinates",
    "graph_chart",
    "intersection_parity",
    "SpinorCheck",
    "spinor_square_check",
    "random_quadratic_instance",
    "random_isotropic_frame",
    "random_skew",
    "spinor_suite",
]

logger = logging.getLogger(__name__)

Matrix = npt.NDArray[Any]

#: Relative tolerance for isotropy, skewness and chart transversality over doubles.
FLOAT_RTOL = 1e-7
#: Relative singular-value threshold for numerical ranks.
RANK_RTOL = 1e-8
#: Required separation between retained and discarded singular values.
RANK_GAP = 1e3
#: Shifted complements tried before a chart is declared undefined.
CHART_TRIES = 8


class ChartError(ValueError):
    """A frame is not isotropic, not maximal, or not transverse to the chart complement."""


def _is_exact(M: Matrix) -> bool:
    return np.asarray(M).dtype == object


def as_exact(M: npt.ArrayLike) -> Matrix:
    """Copy *M* into an object array of :class:`~fractions.Fraction`."""
    arr = np.asarray(M, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, value in np.ndenumerate(arr):
        out[idx] = Fraction(value)
    return out


def _identity(n: int, exact: bool) -> Matrix:
    if exact:
        return as_exact(np.eye(n, dtype=int))
    return np.eye(n, dtype=complex)


def _zeros(shape: Tuple[int, int], exact: bool) -> Matrix:
    if exact:
        return as_exact(np.zeros(shape, dtype=int))
    return np.zeros(shape, dtype=complex)


def det_exact(M: Matrix) -> Fraction:
    """Bareiss fraction-free determinant."""
    rows = [[Fraction(v) for v in row] for row in np.asarray(M, dtype=object)]
    size = len(rows)
    if size == 0:
        return Fraction(1)
    sign = 1
    previous = Fraction(1)
    for k in range(size - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if rows[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) / previous
        previous = rows[k][k]
    return sign * rows[-1][-1]


def _det(M: Matrix) -> Any:
    return det_exact(M) if _is_exact(M) else complex(np.linalg.det(M))


def _row_reduce(M: Matrix) -> Tuple[Matrix, List[int]]:
    R = as_exact(M)
    rows, cols = R.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if R[i, c] != 0), None)
        if pivot is None:
            continue
        R[[r, pivot]] = R[[pivot, r]]
        R[r] = R[r] / R[r, c]
        for i in range(rows):
            if i != r and R[i, c] != 0:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def _rank(M: Matrix, what: str) -> int:
    if _is_exact(M):
        return len(_row_reduce(M)[1])
    s = np.linalg.svd(np.asarray(M, dtype=complex), compute_uv=False)
    if not s.size or s[0] == 0:
        return 0
    kept = s > RANK_RTOL * s[0]
    if kept.any() and not kept.all() and s[kept][-1] < RANK_GAP * s[~kept][0]:
        raise ChartError(f"rank of {what} is ambiguous (singular values {s})")
    return int(kept.sum())


def _solve(M: Matrix, B: Matrix) -> Matrix:
    if not _is_exact(M):
        return np.linalg.solve(M, B)
    n = M.shape[0]
    R, pivots = _row_reduce(np.hstack([M, as_exact(B)]))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return R[:n, n:]


def _scale(M: Matrix) -> float:
    if _is_exact(M):
        return 1.0
    value = float(np.max(np.abs(np.asarray(M, dtype=complex)))) if np.size(M) else 0.0
    return value if value > 0 else 1.0


def _residual(M: Matrix, scale: float) -> float:
    if _is_exact(M):
        return float(max((abs(v) for v in M.flat), default=0))
    return float(np.max(np.abs(M))) / scale if np.size(M) else 0.0


def _is_zero(M: Matrix, scale: float) -> bool:
    if _is_exact(M):
        return all(v == 0 for v in M.flat)
    return _residual(M, scale) <= FLOAT_RTOL


@dataclass(frozen=True, eq=False)
class QuadraticSpace:
    """``V`` of dimension ``2n`` with a nondegenerate symmetric form ``G``."""

    gram: Matrix

    def __post_init__(self) -> None:
        G = np.asarray(self.gram)
        G = as_exact(G) if G.dtype == object else G.astype(complex)
        if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] % 2:
            raise ValueError(f"Gram matrix must be square of even size, got {G.shape}")
        if not _is_zero(G - G.T, _scale(G)):
            raise ValueError("Gram matrix is not symmetric")
        if _rank(G, "the Gram matrix") != G.shape[0]:
            raise ValueError("Gram matrix is degenerate")
        object.__setattr__(self, "gram", G)

    @classmethod
    def split(cls, n: int, *, exact: bool = True) -> "QuadraticSpace":
        """``[[0, I], [I, 0]]``."""
        G = _zeros((2 * n, 2 * n), exact)
        G[:n, n:] = _identity(n, exact)
        G[n:, :n] = _identity(n, exact)
        return cls(G)

    @property
    def exact(self) -> bool:
        return _is_exact(self.gram)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @property
    def n(self) -> int:
        return self.dim // 2

    def coerce(self, M: npt.ArrayLike) -> Matrix:
        """Bring a frame to this space's arithmetic."""
        return as_exact(M) if self.exact else np.asarray(M, dtype=complex)

    def pair(self, U: Matrix, V: Matrix) -> Matrix:
        return self.coerce(U).T @ self.gram @ self.coerce(V)


def isotropy_residual(space: QuadraticSpace, F: Matrix) -> float:
    """``max |F^T G F|``, relative to ``max |G| max |F|^2`` over doubles."""
    F = space.coerce(F)
    return _residual(space.pair(F, F), _scale(space.gram) * _scale(F) ** 2)


def _check_lagrangian(space: QuadraticSpace, F: Matrix, name: str) -> Matrix:
    F = space.coerce(F)
    if F.shape != (space.dim, space.n):
        raise ChartError(f"{name} must be {space.dim} x {space.n}, got {F.shape}")
    if not _is_zero(space.pair(F, F), _scale(space.gram) * _scale(F) ** 2):
        raise ChartError(f"{name} is not isotropic (residual {isotropy_residual(space, F):.2e})")
    if _rank(F, name) != space.n:
        raise ChartError(f"{name} does not have full column rank")
    return F


def hyperbolic_coordinates(space: QuadraticSpace, V0: Matrix) -> Matrix:
    """Return ``T = [F | W]`` with ``T^T G T = [[0, I], [I, 0]]`` and ``F`` the frame *V0*.

    ``W`` starts from standard vectors that make ``F^T G W`` invertible (the first such over
    the rationals, pivoted QR over doubles), is rescaled to ``F^T G W = I`` and then made
    isotropic by subtracting ``F (W^T G W) / 2``.

    :raises ChartError: If *V0* is not a maximal isotropic frame.

    """
    F = _check_lagrangian(space, V0, "V0")
    n, exact = space.n, space.exact
    row = F.T @ space.gram
    chosen: List[int] = []
    if exact:
        for k in range(space.dim):
            if _rank(row[:, chosen + [k]], "F^T G") == len(chosen) + 1:
                chosen.append(k)
            if len(chosen) == n:
                break
    else:
        _, _, order = linalg.qr(row, pivoting=True)
        chosen = sorted(int(k) for k in order[:n])
    W0 = _zeros((space.dim, n), exact)
    for col, k in enumerate(chosen):
        W0[k, col] = 1 if exact else 1.0
    P = F.T @ space.gram @ W0
    W = _solve(P.T, W0.T).T
    half = Fraction(1, 2) if exact else 0.5
    W = W - F @ (W.T @ space.gram @ W) * half
    return np.hstack([F, W])


def _chart(U: Matrix, T: Matrix) -> Tuple[Matrix, Matrix, Matrix]:
    n = T.shape[1] // 2
    coords = _solve(T, U)
    X, Y = coords[:n], coords[n:]
    exact = _is_exact(T)
    if exact:
        transverse = det_exact(X) != 0
    else:
        transverse = abs(np.linalg.det(X)) > FLOAT_RTOL * np.prod(np.linalg.norm(X, axis=0))
    if not transverse:
        raise ChartError("U is not transverse to the chart complement")
    A = _solve(X.T, Y.T).T
    if not _is_zero(A + A.T, _scale(A)):
        raise ChartError("chart matrix is not skew (U is not isotropic)")
    return A, X, Y


def graph_chart(U: Matrix, T: Matrix) -> Matrix:
    """The skew ``A`` with ``U = {(x, A x)}`` in the split coordinates *T*.

    :raises ChartError: If *U* meets the complement ``W`` or ``A`` is not skew.

    """
    T = np.asarray(T)
    U = as_exact(U) if _is_exact(T) else np.asarray(U, dtype=complex)
    return _chart(U, T)[0]


def pfaffian(A: Matrix) -> Any:
    """Pfaffian by skew elimination; exact for object arrays.

    Exact input pivots on the first nonzero entry of the row, floating input on the largest.
    Odd sizes return 0.

    :raises ValueError: If *A* is not skew.

    """
    exact = _is_exact(A)
    B = as_exact(A) if exact else np.array(A, dtype=complex)
    size = B.shape[0]
    if B.shape != (size, size) or not _is_zero(B + B.T, _scale(B)):
        raise ValueError("pfaffian needs a skew-symmetric matrix")
    zero = Fraction(0) if exact else 0.0 + 0.0j
    if size % 2:
        logger.debug("pfaffian of odd size %d is 0", size)
        return zero
    pf = Fraction(1) if exact else 1.0 + 0.0j
    for k in range(0, size - 1, 2):
        row = B[k, k + 1 :]
        if exact:
            j = next((i for i, v in enumerate(row) if v != 0), None)
        else:
            j = int(np.argmax(np.abs(row))) if row.size and np.any(row) else None
        if j is None:
            return zero
        j += k + 1
        if j != k + 1:
            B[[k + 1, j]] = B[[j, k + 1]]
            B[:, [k + 1, j]] = B[:, [j, k + 1]]
            pf = -pf
        pivot = B[k, k + 1]
        pf = pf * pivot
        if k + 2 < size:
            tau = B[k, k + 2 :] / pivot
            u = B[k + 1, k + 2 :]
            B[k + 2 :, k + 2 :] = B[k + 2 :, k + 2 :] + np.outer(u, tau) - np.outer(tau, u)
    return pf


def intersection_parity(U: Matrix, V0: Matrix, space: QuadraticSpace) -> int:
    """``dim(U cap V0) mod 2``, from ``dim = 2n - rank [U | V0]``.

    :raises ChartError: If either frame is not Lagrangian or the rank is ambiguous.

    """
    U = _check_lagrangian(space, U, "U")
    V0 = _check_lagrangian(space, V0, "V0")
    return (space.dim - _rank(np.hstack([U, V0]), "[U | V0]")) % 2


def random_skew(
    n: int, rng: np.random.Generator, *, exact: bool = True, rank: Optional[int] = None
) -> Matrix:
    """A random skew ``n x n`` matrix, of the given even *rank* when requested."""
    r = n - n % 2 if rank is None else rank
    if r % 2 or r > n:
        raise ValueError(f"skew matrices of size {n} have even rank <= {n}, got {r}")
    if exact:
        K = rng.integers(-3, 4, size=(r, r))
        C = rng.integers(-2, 3, size=(n, r)) if r < n else np.eye(n, dtype=int)
        return as_exact(C @ (K - K.T) @ C.T)
    K = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
    C = rng.standard_normal((n, r)) if r < n else np.eye(n)
    return C @ (K - K.T) @ C.T


@dataclass(frozen=True)
class SpinorCheck:
    """Result of :func:`spinor_square_check`.

    ``component`` is ``"even"`` when ``dim(U cap V0)`` is even and ``"odd"`` otherwise; on the
    odd component ``s = 0`` identically and no square root is taken (``v`` and ``c`` are
    ``None``). ``stabilized`` records that a hyperbolic plane was added to reach even ``n``.

    """

    component: str
    s: Any
    v: Any
    c: Any
    residual: float
    shifts: int = 0
    stabilized: bool = False

    def to_json(self) -> Dict[str, Any]:
        def encode(value: Any) -> Any:
            if value is None:
                return None
            if isinstance(value, Fraction):
                return str(value)
            value = complex(value)
            return [value.real, value.imag]

        return {
            "component": self.component,
            "s": encode(self.s),
            "v": encode(self.v),
            "c": encode(self.c),
            "residual": self.residual,
            "shifts": self.shifts,
            "stabilized": self.stabilized,
        }


def _stabilize(
    space: QuadraticSpace, U: Matrix, V0: Matrix
) -> Tuple[QuadraticSpace, Matrix, Matrix]:
    # V + H with V0 + l1 and U + l2 for the two isotropic lines of the hyperbolic plane H
    exact, dim, n = space.exact, space.dim, space.n
    G = _zeros((dim + 2, dim + 2), exact)
    G[:dim, :dim] = space.gram
    one = Fraction(1) if exact else 1.0
    G[dim, dim + 1] = G[dim + 1, dim] = one
    U2 = _zeros((dim + 2, n + 1), exact)
    V2 = _zeros((dim + 2, n + 1), exact)
    U2[:dim, :n] = U
    V2[:dim, :n] = V0
    U2[dim + 1, n] = one
    V2[dim, n] = one
    return QuadraticSpace(G), U2, V2


def spinor_square_check(
    U: Matrix,
    V0: Matrix,
    space: QuadraticSpace,
    *,
    rng: Optional[np.random.Generator] = None,
) -> SpinorCheck:
    """Verify ``s = c v^2`` with ``s = det(U -> V / V0)``, ``v = Pf(A)`` and ``c = det(X)``.

    Odd ``n`` is first stabilized by a hyperbolic plane, which multiplies ``s`` by a nonzero
    constant and keeps ``dim(U cap V0)``. When ``U`` meets the complement the chart is moved to
    ``W + F S`` for random skew ``S``; ``s`` is unchanged by the move.

    :raises ChartError: If no chart in :data:`CHART_TRIES` attempts contains ``U``.

    """
    rng = np.random.default_rng(0) if rng is None else rng
    if intersection_parity(U, V0, space):
        zero = Fraction(0) if space.exact else 0.0 + 0.0j
        return SpinorCheck("odd", zero, None, None, 0.0)
    U = space.coerce(U)
    V0 = space.coerce(V0)
    stabilized = bool(space.n % 2)
    if stabilized:
        space, U, V0 = _stabilize(space, U, V0)
    T = hyperbolic_coordinates(space, V0)
    n, exact = space.n, space.exact
    F, W = T[:, :n], T[:, n:]
    for attempt in range(CHART_TRIES):
        chart = T if attempt == 0 else np.hstack([F, W + F @ random_skew(n, rng, exact=exact)])
        try:
            A, X, Y = _chart(U, chart)
        except ChartError as exc:
            logger.debug("chart %d rejected: %s", attempt, exc)
            continue
        s, c, v = _det(Y), _det(X), pfaffian(A)
        if exact:
            residual = float(abs(s - c * v * v))
        else:
            residual = abs(s - c * v * v) / max(abs(s), abs(c) * abs(v) ** 2, 1e-300)
        return SpinorCheck("even", s, v, c, residual, attempt, stabilized)
    raise ChartError(f"no chart among {CHART_TRIES} shifted complements contains U")


def random_quadratic_instance(
    n: int, rng: np.random.Generator, *, exact: bool = True
) -> Tuple[QuadraticSpace, Matrix]:
    """``G = M^T J M`` for a random integer ``M`` and the Lagrangian ``V0 = M^-1 [I; 0]``."""
    J = QuadraticSpace.split(n, exact=exact).gram
    while True:
        M = rng.integers(-3, 4, size=(2 * n, 2 * n))
        if det_exact(as_exact(M)) != 0:
            break
    M = as_exact(M) if exact else M.astype(complex)
    block = _zeros((2 * n, n), exact)
    block[:n] = _identity(n, exact)
    return QuadraticSpace(M.T @ J @ M), _solve(M, block)


def random_isotropic_frame(
    space: QuadraticSpace,
    V0: Matrix,
    rng: np.random.Generator,
    *,
    rank: Optional[int] = None,
) -> Matrix:
    """``T [I; A]`` for a random skew ``A`` of the given rank, so ``dim(U cap V0) = n - rank``."""
    T = hyperbolic_coordinates(space, V0)
    n = space.n
    A = random_skew(n, rng, exact=space.exact, rank=rank)
    return T @ np.vstack([_identity(n, space.exact), A])


def spinor_suite(
    n: int = 4, instances: int = 100, *, rng: Optional[np.random.Generator] = None
) -> Dict[str, Any]:
    """Exact ``s = c v^2`` on random instances plus ``det = Pf^2`` for sizes 2 to 8."""
    rng = np.random.default_rng(0) if rng is None else rng
    failures = 0
    degenerate = 0
    for _ in range(instances):
        space, V0 = random_quadratic_instance(n, rng)
        rank = None if rng.random() < 0.8 else max(0, n - n % 2 - 2)
        U = random_isotropic_frame(space, V0, rng, rank=rank)
        check = spinor_square_check(U, V0, space, rng=rng)
        if check.residual != 0:
            failures += 1
        if check.s == 0:
            degenerate += 1
            if check.v not in (0, None):
                failures += 1
    pfaffian_failures = 0
    for size in (2, 4, 6, 8):
        for _ in range(5):
            A = random_skew(size, rng)
            pf = pfaffian(A)
            if pf * pf != det_exact(A):
                pfaffian_failures += 1
    logger.info(
        "spinor suite: %d/%d instances exact, %d degenerate, %d Pfaffian failures",
        instances - failures,
        instances,
        degenerate,
        pfaffian_failures,
    )
    return {
        "n": n,
        "instances": instances,
        "failures": failures,
        "degenerate": degenerate,
        "pfaffian_failures": pfaffian_failures,
        "passed": failures == 0 and pfaffian_failures == 0,
    }
