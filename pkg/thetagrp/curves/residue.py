# -*- coding: utf-8 -*-
"""Residue pairing spaces attached to theta characteristics of a genus-2 curve.

For a theta characteristic ``E`` fix ``D`` in ``|K + E|`` (degree 3) and the differential
``omega`` with ``div omega = 2 E``. ``V`` is the space of principal parts
``c_-1 t^-1 + c_0`` at the three points of ``D``, paired by

    phi(u, v) = sum_{p in D} Res_p (u v omega)

``V_0`` is the image of ``H^0(E + D)`` and ``V_1`` the regular parts. Both are Lagrangian and
``V_0 cap V_1 = H^0(E)``, so the corank of ``V_1 -> V / V_0`` recovers ``h^0(E)``.

When the support of ``E`` meets ``D`` (always the case for the odd classes ``W_i``, whose
linear system ``|K + W_i|`` has ``W_i`` as base point) ``E`` is replaced by a linearly
equivalent ``E' = Z - Q_4 - Q_5`` with ``Z`` in ``|E + Q_4 + Q_5|``. At a Weierstrass point of
``D`` the local parameter is ``y``.

"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List

import numpy as np
import numpy.typing as npt
from scipy import linalg

from .hyperelliptic import (
    CurveFunction,
    CurvePoint,
    Divisor,
    HyperellipticCurve,
    ThetaCharacteristicDivisor,
    theta_characteristics,
)
from .riemann_roch import (
    RiemannRochError,
    h0_theta_characteristic,
    linear_system_member,
    riemann_roch_basis,
)

__all__ = [
    "ResidueSpaceError",
    "ResiduePairingSpace",
    "residue_pairing_space",
    "xi_corank",
    "residue_census",
]

logger = logging.getLogger(__name__)

#: Singular values below ``CORANK_RTOL * sigma_max`` count as zero.
CORANK_RTOL = 1e-7
#: Required ratio between the smallest nonzero and the largest zero singular value.
CORANK_GAP = 1e3
#: Terms kept in the local expansions.
RESIDUE_PREC = 8
#: Draws of ``Q_4, Q_5`` before giving up on a representative disjoint from ``D``.
SHIFT_TRIES = 8


class ResidueSpaceError(RuntimeError):
    """The residue pairing space could not be built or read cleanly."""


@dataclass(frozen=True, eq=False)
class ResiduePairingSpace:
    """The pairing space of one theta characteristic.

    At each point of ``D`` with ``omega = (w_0 + w_1 t + ...) dt`` the coordinates are
    ``u = c_-1`` and ``v = w_0 c_0 + w_1 c_-1 / 2``, so ``gram`` is the ``6 x 6`` split form,
    one block ``[[0, 1], [1, 0]]`` per point, whatever the size of ``omega`` there. The columns
    of ``V0`` and ``V1`` span the two Lagrangians.

    """

    characteristic: ThetaCharacteristicDivisor
    representative: Divisor
    D: Divisor
    omega: CurveFunction
    gram: npt.NDArray[np.complex128]
    V0: npt.NDArray[np.complex128]
    V1: npt.NDArray[np.complex128]
    symmetry_residual: float
    isotropy_v0: float
    isotropy_v1: float

    @property
    def dimension(self) -> int:
        return self.gram.shape[0]


def _representative(
    curve: HyperellipticCurve, E: Divisor, D: Divisor, rng: np.random.Generator
) -> Divisor:
    blocked = set(D.support)
    if not blocked.intersection(E.support):
        return E
    for attempt in range(SHIFT_TRIES):
        shift = Divisor.sum_of([curve.random_point(rng), curve.random_point(rng)])
        try:
            Z = linear_system_member(curve, E + shift, rng)
        except RiemannRochError as exc:
            logger.debug("shift %d for %s failed: %s", attempt, E.label, exc)
            continue
        candidate = Z - shift
        if not blocked.intersection(candidate.support) and len(candidate.support) == 5:
            return candidate
    raise ResidueSpaceError(f"no representative of {E.label} avoids {D.label}")


def _pairing_divisor(
    curve: HyperellipticCurve, entry: ThetaCharacteristicDivisor, rng: np.random.Generator
) -> Divisor:
    if entry.parity:
        # |K + W_i| = W_i + |K|, and the moving part is p + conj(p)
        p = curve.random_point(rng)
        return entry.divisor + Divisor.sum_of([p, p.conjugate()])
    return linear_system_member(curve, curve.canonical_divisor() + entry.divisor, rng)


def _isotropy(gram: np.ndarray, F: np.ndarray) -> float:
    # relative to the size of the summed terms, not of the result
    terms = np.abs(F).T @ np.abs(gram) @ np.abs(F)
    return float(np.max(np.abs(F.T @ gram @ F)) / max(float(np.max(terms)), np.finfo(float).tiny))


def _principal_part(f: CurveFunction, point: CurvePoint) -> npt.NDArray[np.complex128]:
    series = f.series(point, RESIDUE_PREC)
    return np.array([series.coefficient(-1), series.coefficient(0)], dtype=complex)


def residue_pairing_space(
    curve: HyperellipticCurve,
    entry: ThetaCharacteristicDivisor,
    rng: np.random.Generator,
) -> ResiduePairingSpace:
    """Build ``(V, phi, V_0, V_1)`` for the theta characteristic *entry*.

    :raises ResidueSpaceError: If ``D`` is not reduced, ``omega`` is not unique up to scale,
        ``H^0(E + D)`` is not 3-dimensional, or ``omega`` vanishes on ``D``.

    """
    D = _pairing_divisor(curve, entry, rng)
    if D.degree != 3 or len(D.support) != 3:
        raise ResidueSpaceError(f"pairing divisor {D.label} is not three simple points")
    E = _representative(curve, entry.divisor, D, rng)

    omega_space = riemann_roch_basis(
        curve, curve.canonical_divisor() - 2 * E, check_dimension=False
    )
    if omega_space.dimension != 1:
        raise ResidueSpaceError(
            f"expected a unique differential with divisor 2({E.label}), "
            f"found {omega_space.dimension}"
        )
    omega = omega_space.functions[0]
    sections = riemann_roch_basis(curve, E + D)
    if sections.dimension != 3:
        raise ResidueSpaceError(f"dim H^0({(E + D).label}) = {sections.dimension}, expected 3")

    size = 2 * len(D.support)
    gram = np.zeros((size, size), dtype=complex)
    F0 = np.zeros((size, sections.dimension), dtype=complex)
    F1 = np.zeros((size, len(D.support)), dtype=complex)
    for k, point in enumerate(D.support):
        X, Y = curve.expansion(point, RESIDUE_PREC)
        w = omega.series(point, RESIDUE_PREC) * X.derivative() / Y
        w0, w1 = w.coefficient(0), w.coefficient(1)
        if abs(w0) < 1e-12 * max(1.0, abs(w1)):
            raise ResidueSpaceError(f"omega vanishes at {point.label}")
        # Res (a t^-1 + b)(a' t^-1 + b')(w0 + w1 t) dt = w1 a a' + w0 (a b' + a' b), which is
        # u v' + u' v in u = a, v = w0 b + w1 a / 2
        to_split = np.array([[1.0, 0.0], [w1 / 2, w0]])
        gram[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = [[0.0, 1.0], [1.0, 0.0]]
        for j, f in enumerate(sections.functions):
            F0[2 * k : 2 * k + 2, j] = to_split @ _principal_part(f, point)
        F1[2 * k + 1, k] = 1.0
    F0 = F0 / np.linalg.norm(F0, axis=0)

    symmetry = float(np.max(np.abs(gram - gram.T)))
    iso0 = _isotropy(gram, F0)
    iso1 = _isotropy(gram, F1)
    logger.info(
        "residue space for %s: D = %s, isotropy residuals %.2e / %.2e",
        entry.label,
        D.label,
        iso0,
        iso1,
    )
    return ResiduePairingSpace(entry, E, D, omega, gram, F0, F1, symmetry, iso0, iso1)


def xi_corank(space: ResiduePairingSpace, *, rtol: float = CORANK_RTOL) -> int:
    """Corank of ``V_1 -> V / V_0``, read through ``phi`` as ``V_1 -> V_0^*``.

    :raises ResidueSpaceError: If the zero and nonzero singular values are not separated by
        :data:`CORANK_GAP`.

    """
    basis0 = linalg.orth(space.V0)
    s = linalg.svd(basis0.T @ space.gram @ space.V1, compute_uv=False)
    if s[0] == 0:
        return len(s)
    zero = s < rtol * s[0]
    if zero.any() and not zero.all():
        gap = float(s[~zero][-1] / max(s[zero][0], np.finfo(float).tiny))
        if gap < CORANK_GAP:
            raise ResidueSpaceError(
                f"singular values {np.array2string(s, precision=2)} have no clear gap"
            )
    return int(zero.sum())


def residue_census(
    curve: HyperellipticCurve, rng: np.random.Generator
) -> List[Dict[str, object]]:
    """Parity, ``h^0`` and corank for all sixteen theta characteristics."""
    rows = []
    for entry in theta_characteristics(curve):
        space = residue_pairing_space(curve, entry, rng)
        corank = xi_corank(space)
        h0 = h0_theta_characteristic(curve, entry.divisor)
        rows.append(
            {
                "characteristic": entry.label,
                "parity": entry.parity,
                "h0": h0,
                "corank": corank,
                "isotropy_v0": space.isotropy_v0,
                "isotropy_v1": space.isotropy_v1,
                "consistent": corank == h0 and corank % 2 == entry.parity,
            }
        )
    return rows
