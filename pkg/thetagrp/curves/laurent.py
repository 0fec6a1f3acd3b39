# -*- coding: utf-8 -*-
"""Truncated Laurent series in a local parameter ``t``.

A :class:`Laurent` is ``sum_k coeffs[k] t^(val + k)`` known to ``len(coeffs)`` terms. Products
keep the smaller relative precision; sums keep the smaller absolute precision. Leading
coefficients that are exactly zero are stripped, which is how denominators ``x - c`` at a point
over ``c`` acquire their valuation.

"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import numpy.typing as npt
from numpy.polynomial import Polynomial

__all__ = [
    "Laurent",
    "series_sqrt",
    "series_reversion",
    "taylor_coefficients",
    "affine_expansion",
    "weierstrass_expansion",
    "infinity_expansion",
]


@dataclass(frozen=True, eq=False)
class Laurent:
    """A truncated Laurent series."""

    val: int
    coeffs: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=complex)
        nonzero = np.flatnonzero(coeffs != 0)
        if nonzero.size and nonzero[0] > 0:
            object.__setattr__(self, "val", self.val + int(nonzero[0]))
            coeffs = coeffs[nonzero[0] :]
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def constant(cls, c: complex, prec: int) -> "Laurent":
        coeffs = np.zeros(prec, dtype=complex)
        coeffs[0] = c
        return cls(0, coeffs)

    @classmethod
    def monomial(cls, c: complex, power: int, prec: int) -> "Laurent":
        coeffs = np.zeros(prec, dtype=complex)
        coeffs[0] = c
        return cls(power, coeffs)

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    @property
    def end(self) -> int:
        """First exponent that is not known."""
        return self.val + self.prec

    def is_exact_zero(self) -> bool:
        return not np.any(self.coeffs)

    def coefficient(self, k: int) -> complex:
        """Return the coefficient of ``t^k``.

        :raises ValueError: If ``t^k`` is beyond the known precision.

        """
        if k >= self.end:
            raise ValueError(f"coefficient of t^{k} unknown (series known below t^{self.end})")
        if k < self.val:
            return 0.0 + 0.0j
        return complex(self.coeffs[k - self.val])

    def valuation(self, rtol: float = 1e-9) -> int:
        """First exponent whose coefficient exceeds ``rtol`` times the largest known one."""
        scale = float(np.max(np.abs(self.coeffs))) if self.prec else 0.0
        for k, c in enumerate(self.coeffs):
            if abs(c) > rtol * scale:
                return self.val + k
        return self.end

    def __add__(self, other: "Laurent") -> "Laurent":
        low = min(self.val, other.val)
        end = min(self.end, other.end)
        coeffs = np.zeros(max(end - low, 0), dtype=complex)
        for series in (self, other):
            take = min(series.prec, end - series.val)
            if take > 0:
                coeffs[series.val - low : series.val - low + take] += series.coeffs[:take]
        return Laurent(low, coeffs)

    def __neg__(self) -> "Laurent":
        return Laurent(self.val, -self.coeffs)

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def scale(self, c: complex) -> "Laurent":
        return Laurent(self.val, self.coeffs * c)

    def __mul__(self, other: "Laurent") -> "Laurent":
        prec = min(self.prec, other.prec)
        coeffs = np.convolve(self.coeffs[:prec], other.coeffs[:prec])[:prec]
        return Laurent(self.val + other.val, coeffs)

    def inverse(self) -> "Laurent":
        """Return ``1 / self``.

        :raises ZeroDivisionError: If the series is identically zero to known precision.

        """
        if self.is_exact_zero():
            raise ZeroDivisionError("inverse of a zero series")
        a = self.coeffs
        b = np.zeros(self.prec, dtype=complex)
        b[0] = 1.0 / a[0]
        for k in range(1, self.prec):
            b[k] = -np.dot(a[1 : k + 1], b[k - 1 :: -1][:k]) / a[0]
        return Laurent(-self.val, b)

    def __truediv__(self, other: "Laurent") -> "Laurent":
        return self * other.inverse()

    def __pow__(self, k: int) -> "Laurent":
        if k < 0:
            return self.inverse() ** (-k)
        result = Laurent.constant(1.0, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def truncate(self, end: int) -> "Laurent":
        """Drop every term from ``t^end`` on."""
        keep = max(0, min(self.prec, end - self.val))
        return Laurent(self.val, self.coeffs[:keep])

    def derivative(self) -> "Laurent":
        """Term-wise ``d/dt``."""
        powers = np.arange(self.val, self.end)
        return Laurent(self.val - 1, self.coeffs * powers)


def series_sqrt(coeffs: Sequence[complex], lead_root: complex, prec: int) -> np.ndarray:
    """Power-series square root ``s`` of ``F = sum F_k t^k`` with ``s_0 = lead_root``.

    ``lead_root**2`` must equal ``F_0`` and be nonzero.

    """
    F = np.zeros(prec, dtype=complex)
    F[: min(prec, len(coeffs))] = np.asarray(coeffs, dtype=complex)[:prec]
    s = np.zeros(prec, dtype=complex)
    s[0] = lead_root
    for m in range(1, prec):
        s[m] = (F[m] - np.dot(s[1:m], s[m - 1 : 0 : -1])) / (2 * s[0])
    return s


def series_reversion(g_coeffs: Sequence[complex], prec: int) -> np.ndarray:
    """Invert ``s = G(X) = sum_{k>=1} g_k X^k`` as ``X(s) = sum_{j>=1} c_j s^j``.

    ``g_coeffs[k]`` is ``g_k`` (index 0 ignored); ``g_1`` must be nonzero. Returns ``c`` with
    ``c[0] = 0``.

    """
    g = np.zeros(prec + 1, dtype=complex)
    g[: min(prec + 1, len(g_coeffs))] = np.asarray(g_coeffs, dtype=complex)[: prec + 1]
    if g[1] == 0:
        raise ZeroDivisionError("series reversion needs a nonzero linear term")
    X = np.zeros(prec, dtype=complex)
    X[1 % prec] = 1.0 / g[1]
    # fixed point X = (s - sum_{k>=2} g_k X^k) / g_1, one correct order per sweep
    for _ in range(prec):
        higher = np.zeros(prec, dtype=complex)
        power = X.copy()
        for k in range(2, prec + 1):
            power = np.convolve(power, X)[:prec]
            if not np.any(power):
                break
            higher += g[k] * power
        nxt = -higher / g[1]
        nxt[1] += 1.0 / g[1]
        X = nxt
    X[0] = 0.0
    return X


def taylor_coefficients(coeffs_desc: Sequence[complex], x0: complex) -> np.ndarray:
    """Ascending coefficients of ``f(x0 + t)`` for ``f`` given by descending coefficients."""
    f = Polynomial(np.asarray(coeffs_desc, dtype=complex)[::-1])
    return np.asarray(f(Polynomial([x0, 1.0])).coef, dtype=complex)


def affine_expansion(
    coeffs_desc: Sequence[complex], x0: complex, y0: complex, prec: int
) -> Tuple[Laurent, Laurent]:
    """``(x, y)`` at an affine point with ``y0 != 0`` in the parameter ``t = x - x0``."""
    X = np.zeros(prec, dtype=complex)
    X[0] = x0
    if prec > 1:
        X[1] = 1.0
    Y = series_sqrt(taylor_coefficients(coeffs_desc, x0), y0, prec)
    return Laurent(0, X), Laurent(0, Y)


def weierstrass_expansion(
    coeffs_desc: Sequence[complex], e: complex, prec: int
) -> Tuple[Laurent, Laurent]:
    """``(x, y)`` at the ramification point over the root ``e`` in the parameter ``t = y``."""
    g = taylor_coefficients(coeffs_desc, e)
    g[0] = 0.0
    half = prec // 2 + 1
    c = series_reversion(g, half)
    X = np.zeros(prec, dtype=complex)
    X[0::2] = c[: len(X[0::2])]
    X[0] = e
    Y = np.zeros(prec, dtype=complex)
    Y[1 % prec] = 1.0
    return Laurent(0, X), Laurent(0, Y)


def infinity_expansion(
    coeffs_desc: Sequence[complex], sign: int, prec: int
) -> Tuple[Laurent, Laurent]:
    """``(x, y)`` at ``inf_sign`` in the parameter ``t = 1/x``, where ``y / x^3 -> sign``.

    Requires a monic sextic.

    """
    X = np.zeros(prec, dtype=complex)
    X[0] = 1.0
    S = series_sqrt(np.asarray(coeffs_desc, dtype=complex), 1.0, prec)
    return Laurent(-1, X), Laurent(-3, sign * S)
