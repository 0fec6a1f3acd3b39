"""Numerical checks of the Riemann theta function and the analytic Weil family.

- ``theta[0;0](0, i)`` against the closed form ``pi^(1/4) / Gamma(3/4)`` (to 1e-12);
- quasi-periodicity under ``z -> z + p + tau q`` and the characteristic shift identity, both
  to 1e-8 relative, on a genus-1 and a genus-2 period matrix;
- the heat equation ``d theta / d tau = (1 / 4 pi i) d^2 theta / dz^2`` by finite differences;
- exactly 6 of the 16 half-period theta constants vanish in genus 2 (the odd ones);
- ``phi_P = (theta[-a;-b] / theta[0;0])^N`` obeys the normal-set law with the pairing
  ``analytic_d`` and the inverse law ``phi_P(z) phi_{-P}(z - P) = d(P, -P)``;
- malformed period matrices, unreachable tail targets and poles raise.

Pure numerics, seeded; no network. Run from the repository root::

    python tests/test_theta_analytic.py
"""

import itertools
import sys

import numpy as np
from scipy.special import gamma as gamma_fn

from thetagrp.heisenberg import LPoint, RootOfUnity, all_points, symplectic_e
from thetagrp.theta_analytic import (
    Characteristic,
    PeriodMatrix,
    PeriodMatrixError,
    TruncationError,
    analytic_d,
    analytic_weil_family,
    analytic_weil_pairing,
    automorphy_factor,
    reduce_point,
    shift_identity_check,
    theta,
    theta_constants,
    torsion_points,
    truncation_for,
)
from thetagrp.weil_normalize import PoleProximityError, normal_law_residual

results = []


def check(label, condition, detail=""):
    results.append((label, bool(condition)))
    print(f"{'PASS' if condition else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))


rng = np.random.default_rng(11)
TAU1 = PeriodMatrix(np.array([[0.2 + 1.1j]]))
TAU2 = PeriodMatrix(np.array([[0.3 + 1.2j, 0.1 + 0.25j], [0.1 + 0.25j, -0.2 + 1.0j]]))
TAU_DIAG = PeriodMatrix(np.diag([1j, 2j]))


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


# ---------------------------------------------------------------- period matrices

try:
    PeriodMatrix(np.array([[1j, 0.1], [0.2, 1j]]))
except PeriodMatrixError as exc:
    check("an asymmetric tau is rejected", "symmetric" in str(exc))
else:
    check("an asymmetric tau is rejected", False, "accepted")

try:
    PeriodMatrix(np.array([[1j, 0], [0, -1j]]))
except PeriodMatrixError as exc:
    check("Im tau must be positive definite", "positive definite" in str(exc))
else:
    check("Im tau must be positive definite", False, "accepted")

pairs = TAU2.to_pairs()
check(
    "tau survives the [re, im] round trip",
    np.allclose(PeriodMatrix.from_pairs(pairs).tau, TAU2.tau),
)

try:
    truncation_for(PeriodMatrix(np.array([[0.01j]])), target=1e-14, max_radius=2)
except TruncationError as exc:
    check("an unreachable tail target raises", "radius" in str(exc))
else:
    check("an unreachable tail target raises", False, "returned")

trunc = truncation_for(TAU2, target=1e-12)
check("the chosen radius meets the tail bound", trunc.bound <= 1e-12, f"radius {trunc.radius}")

# ---------------------------------------------------------------- theta values

oracle = np.pi**0.25 / gamma_fn(0.75)
value = theta(([0.0], [0.0]), [0.0], PeriodMatrix(np.array([[1j]])))
check(
    "theta_3(0, i) matches pi^(1/4)/Gamma(3/4)",
    abs(value - oracle) < 1e-12,
    f"{value.real:.15f}",
)

for name, tau in (("g=1", TAU1), ("g=2", TAU2)):
    g = tau.g
    worst_quasi = worst_shift = 0.0
    for chi in torsion_points(3, g)[:9]:
        z = rng.normal(size=g) + 1j * rng.normal(size=g) * 0.3
        p = rng.integers(-2, 3, size=g)
        q = rng.integers(-2, 3, size=g)
        moved = theta(chi, z + p + tau.tau @ q, tau)
        expected = automorphy_factor(chi, p, q, z, tau) * theta(chi, z, tau)
        worst_quasi = max(worst_quasi, rel(moved, expected))
        scale = abs(theta(chi, z, tau))
        worst_shift = max(worst_shift, shift_identity_check(chi, z, tau) / scale)
    check(f"{name} quasi-periodicity", worst_quasi < 1e-8, f"{worst_quasi:.1e}")
    check(f"{name} shift identity", worst_shift < 1e-8, f"{worst_shift:.1e}")

# d theta / d tau = (1 / 4 pi i) d^2 theta / dz^2 in genus 1
h = 1e-4
z0 = np.array([0.13 + 0.07j])
chi = Characteristic(2, (1,), (0,))
t = TAU1.tau[0, 0]
up = theta(chi, z0, PeriodMatrix(np.array([[t + h]])))
down = theta(chi, z0, PeriodMatrix(np.array([[t - h]])))
d_tau = (up - down) / (2 * h)
d_zz = (theta(chi, z0 + h, TAU1) - 2 * theta(chi, z0, TAU1) + theta(chi, z0 - h, TAU1)) / h**2
heat = rel(d_tau, d_zz / (4j * np.pi))
check("heat equation by finite differences", heat < 1e-4, f"{heat:.1e}")

constants = theta_constants(2, TAU2)
vanishing = [chi for chi, v in constants.items() if abs(v) < 1e-10]
odd = [chi for chi in constants if sum(x * y for x, y in zip(chi.a, chi.b)) % 2]
check("six half-period theta constants vanish in genus 2", len(vanishing) == 6, len(vanishing))
check("the vanishing ones are the odd characteristics", set(vanishing) == set(odd))

reduced = reduce_point(np.array([3.7 + 2.9j, -1.2 + 4.4j]), TAU2)
check("lattice reduction replays", reduced.verify(TAU2) < 1e-10)
x = TAU2.imag_inv @ reduced.z0.imag
check("reduced point lies in the fundamental domain", np.all((x >= -1e-12) & (x < 1 + 1e-12)))

# ---------------------------------------------------------------- characteristics and pairings

check("n^(2g) torsion characteristics", len(torsion_points(3, 2)) == 81)
P = LPoint(3, 2, (1, 2, 0, 1))
check("characteristic <-> point round trip", Characteristic.from_lpoint(P).to_lpoint() == P)
check("label names a and b", Characteristic(2, (1, 0), (0, 1)).label == "[1 0;0 1]/2")

half_a = LPoint(2, 1, (1, 0))
half_b = LPoint(2, 1, (0, 1))
check("N=2: d(tau/2, 1/2) = -1", analytic_d(half_a, half_b) == RootOfUnity(2, 1))
check(
    "N=3: d(tau/3, 1/3) = exp(-2 pi i / 3)",
    analytic_d(LPoint(3, 1, (1, 0)), LPoint(3, 1, (0, 1))) == RootOfUnity(3, 2),
)
check("d(P, 0) = d(0, P) = 1", analytic_d(half_a, LPoint.zero(2, 1)).exponent == 0)
check(
    "analytic pairing is e(Q, P)",
    all(
        analytic_weil_pairing(Q, R) == symplectic_e(R, Q)
        for Q, R in itertools.product(all_points(3, 1), repeat=2)
    ),
)

# ---------------------------------------------------------------- analytic Weil family

for n, tau in ((2, TAU1), (3, TAU1), (2, TAU_DIAG)):
    family = analytic_weil_family(n, tau)
    residual = normal_law_residual(family, samples=30, rng=np.random.default_rng(3))
    check(f"N={n}, g={tau.g}: normal-set law", residual < 1e-8, f"{residual:.1e}")
    worst = 0.0
    for Q in family.points:
        z = family.sample_point(rng)
        lhs = family.evaluate(Q, z) * family.evaluate(-Q, family.translate(z, Q))
        worst = max(worst, abs(lhs - analytic_d(Q, -Q).value))
    check(f"N={n}, g={tau.g}: inverse law", worst < 1e-8, f"{worst:.1e}")
    z = family.sample_point(rng)
    check(f"N={n}, g={tau.g}: f_0 = 1", family.evaluate(family.zero(), z) == 1.0)

family = analytic_weil_family(2, TAU1)
pole = np.array([(1.0 + TAU1.tau[0, 0]) / 2])
try:
    family.evaluate(LPoint(2, 1, (1, 0)), pole)
except PoleProximityError:
    check("evaluation at a zero of theta[0;0] raises", True)
else:
    check("evaluation at a zero of theta[0;0] raises", False, "returned a value")

try:
    analytic_weil_family(1, TAU1)
except ValueError:
    check("level 1 is rejected", True)
else:
    check("level 1 is rejected", False, "accepted")

# ------------------------------------------------------------------------------ summary
failed = [label for label, ok in results if not ok]
print(f"\n{len(results) - len(failed)}/{len(results)} passed")
if failed:
    for label in failed:
        print("  FAILED:", label)
    sys.exit(1)
