"""Checks of the normalization engine on the analytic theta family.

A normal analytic family is scrambled by random nonzero scalars and handed to the engine, which
never sees the original:

- ``gamma(P, 0) = 1`` and gamma is identically 1 on an already normal family;
- at level 3, :func:`igusa_alpha` followed by :func:`symmetric_refine` recovers the original
  scalars exactly (to 1e-8); at level 2 it recovers their squares, and flags as sign-ambiguous
  exactly the points with an odd coordinate;
- changing the seeds twists the normalization by the expected character;
- the Weil pairing matrix is alternating and nondegenerate;
- level-2 characteristics split 10 even / 6 odd, and the Arf invariant of the attached
  quadratic form is the parity;
- a family whose gamma drifts with ``x`` and a family without inversion are refused.

Pure numerics, seeded; no network. Run from the repository root::

    python tests/test_weil_normalize.py
"""

import itertools
import sys

import numpy as np

from thetagrp.heisenberg import Character, LPoint, RootOfUnity
from thetagrp.theta_analytic import (
    Characteristic,
    PeriodMatrix,
    analytic_weil_family,
    analytic_weil_pairing,
    theta,
    torsion_points,
)
from thetagrp.weil_normalize import (
    InversionUnavailableError,
    NormalizationError,
    QuadraticFormZ2,
    ScaledWeilFamily,
    WeilFamily,
    arf_invariant,
    character_twist,
    gamma,
    igusa_alpha,
    inverse_law_residual,
    is_nondegenerate,
    moduli_point,
    normalized_power,
    parity,
    quadratic_form_from_characteristic,
    symmetric_refine,
    weil_pairing,
    weil_pairing_matrix,
)

results = []


def check(label, condition, detail=""):
    results.append((label, bool(condition)))
    print(f"{'PASS' if condition else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))


TAU1 = PeriodMatrix(np.array([[0.15 + 1.05j]]))
TAU2 = PeriodMatrix(np.array([[0.3 + 1.2j, 0.1 + 0.25j], [0.1 + 0.25j, -0.2 + 1.0j]]))


def scramble(family, rng):
    scalars = {}
    for P in family.points:
        if P.is_zero:
            scalars[P] = 1.0 + 0.0j
        else:
            scalars[P] = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
    return scalars


class DriftingFamily(WeilFamily):
    """Analytic family times ``exp(0.3 x_1)`` off zero: gamma is no longer constant."""

    def __init__(self, base):
        super().__init__(base.n, base.g, base.d)
        self.base = base
        self.base_point = base.base_point

    def evaluate(self, P, x, *, allow_zero=False):
        value = self.base.evaluate(P, x, allow_zero=allow_zero)
        return value if P.is_zero else value * np.exp(0.3 * np.asarray(x)[0])

    def translate(self, x, P):
        return self.base.translate(x, P)

    def sample_point(self, rng):
        return self.base.sample_point(rng)


class NoInversionFamily(DriftingFamily):
    def evaluate(self, P, x, *, allow_zero=False):
        return self.base.evaluate(P, x, allow_zero=allow_zero)


# ---------------------------------------------------------------- gamma

family = analytic_weil_family(3, TAU1)
zero = family.zero()
r1 = LPoint.basis(3, 1, 0)
check("gamma(P, 0) = 1", abs(gamma(family, r1, zero) - 1.0) < 1e-10)
worst = max(abs(gamma(family, P, Q) - 1.0) for P, Q in itertools.product(family.points, repeat=2))
check("gamma is 1 on a normal family", worst < 1e-8, f"{worst:.1e}")
power = normalized_power(family, r1)
check("alpha^N is 1 on a normal family", abs(power.alpha_power - 1.0) < 1e-8, power.alpha_power)

# ---------------------------------------------------------------- recovery after scrambling

rng = np.random.default_rng(5)
for n, tau in ((3, TAU1), (3, TAU2), (2, TAU1), (2, TAU2)):
    family = analytic_weil_family(n, tau)
    scalars = scramble(family, rng)
    scrambled = ScaledWeilFamily(family, scalars)
    result = igusa_alpha(scrambled, samples=30, rng=rng)
    tag = f"N={n}, g={tau.g}"
    if n % 2:
        check(f"{tag}: odd level leaves nothing ambiguous", not result.any_ambiguous)
    check(f"{tag}: closure alpha(N r_i) = 1", result.closure_residual < 1e-8)
    check(f"{tag}: normal-set law", result.normal_residual < 1e-8, f"{result.normal_residual:.1e}")
    inverse = inverse_law_residual(scrambled, result)
    check(f"{tag}: inverse law", inverse < 1e-8, f"{inverse:.1e}")
    if n % 2:
        result = symmetric_refine(scrambled, result, samples=30, rng=rng)
        drift = max(abs(result.alpha[P] * scalars[P] - 1.0) for P in family.points)
        check(f"{tag}: symmetric refinement recovers the scalars", drift < 1e-8, f"{drift:.1e}")
        check(f"{tag}: no point is ambiguous", not result.any_ambiguous)
    else:
        drift = max(abs((result.alpha[P] * scalars[P]) ** 2 - 1.0) for P in family.points)
        check(f"{tag}: squares of the scalars are recovered", drift < 1e-8, f"{drift:.1e}")
        flagged = {P for P, flag in result.ambiguous.items() if flag}
        odd = {P for P in family.points if any(c % 2 for c in P.coords)}
        check(f"{tag}: sign flags sit exactly on points with an odd coordinate", flagged == odd)
        check(f"{tag}: flags cover every point", set(result.ambiguous) == set(family.points))

# ---------------------------------------------------------------- seeds and characters

family = analytic_weil_family(3, TAU2)
scrambled = ScaledWeilFamily(family, scramble(family, rng))
plain = igusa_alpha(scrambled, samples=10, rng=rng)
seeded = igusa_alpha(scrambled, seeds=(1, 0, 2, 0), samples=10, rng=rng)
chi = character_twist(plain, seeded)
check("seed change is a character twist", chi == Character(3, 2, (1, 0, 2, 0)), chi.coords)
refined = symmetric_refine(scrambled, seeded, samples=10, rng=rng)
again = symmetric_refine(scrambled, plain, samples=10, rng=rng)
check(
    "symmetric refinement forgets the seeds",
    character_twist(again, refined) == Character.trivial(3, 2),
)

try:
    igusa_alpha(scrambled, seeds=(1, 2), samples=5, rng=rng)
except ValueError as exc:
    check("a short seed vector is rejected", "seeds" in str(exc))
else:
    check("a short seed vector is rejected", False, "accepted")

# ---------------------------------------------------------------- pairing and moduli

matrix, snap = weil_pairing_matrix(refined.family)
check("pairing matrix is alternating", np.all((matrix + matrix.T) % 3 == 0), matrix.tolist())
check("pairing matrix has a zero diagonal", np.all(np.diag(matrix) == 0))
check("pairing is nondegenerate mod 3", is_nondegenerate(matrix, 3))
check("pairing values snap cleanly", snap < 1e-8, f"{snap:.1e}")
P, Q = LPoint(3, 2, (1, 0, 2, 1)), LPoint(3, 2, (0, 2, 1, 1))
root, _ = weil_pairing(refined.family, P, Q)
check("pairing agrees with the analytic value", root == analytic_weil_pairing(P, Q), root)
check("degenerate matrices are spotted", not is_nondegenerate([[0, 3], [-3, 0]], 3))

delta = np.zeros(2, dtype=complex)
moduli = moduli_point(refined, delta)
reference = Characteristic(3, (0, 0), (0, 0))
expected = np.array(
    [
        (theta(Characteristic.from_lpoint(-R), delta, TAU2) / theta(reference, delta, TAU2)) ** 3
        for R in family.points
    ]
)
gap = float(np.max(np.abs(moduli - expected)))
check("moduli at 0 are cubed theta-constant quotients", gap < 1e-7, f"{gap:.1e}")
check("moduli start with 1", abs(moduli[0] - 1.0) < 1e-12)

# ---------------------------------------------------------------- refusals

try:
    igusa_alpha(DriftingFamily(analytic_weil_family(3, TAU1)), samples=5)
except NormalizationError as exc:
    check("a drifting gamma is refused", "gamma" in str(exc))
else:
    check("a drifting gamma is refused", False, "normalized")

plain_family = NoInversionFamily(analytic_weil_family(3, TAU1))
try:
    symmetric_refine(plain_family, igusa_alpha(plain_family, samples=5))
except InversionUnavailableError:
    check("symmetric refinement needs an inversion", True)
else:
    check("symmetric refinement needs an inversion", False, "refined")

# ---------------------------------------------------------------- parity and Arf

characteristics = torsion_points(2, 2)
odd = sum(parity(c) for c in characteristics)
check("genus 2: 6 odd and 10 even characteristics", (odd, len(characteristics)) == (6, 16))
arf_ok = all(
    arf_invariant(quadratic_form_from_characteristic(c)) == parity(c) for c in characteristics
)
check("Arf invariant of the attached form is the parity", arf_ok)

standard = QuadraticFormZ2(1, {(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 1})
check("xy has Arf invariant 0", arf_invariant(standard) == 0)
twisted = QuadraticFormZ2(1, {(0, 0): 0, (1, 0): 1, (0, 1): 1, (1, 1): 1})
check("xy + x^2 + y^2 has Arf invariant 1", arf_invariant(twisted) == 1)

try:
    QuadraticFormZ2(1, {(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 0})
except ValueError as exc:
    check("the zero form is not a refinement", "refinement" in str(exc))
else:
    check("the zero form is not a refinement", False, "accepted")

try:
    parity(Characteristic(3, (1,), (0,)))
except ValueError:
    check("parity needs denominator 2", True)
else:
    check("parity needs denominator 2", False, "accepted")

check("RootOfUnity snapping is exact for -1", RootOfUnity.snap(-1.0, 2)[0] == RootOfUnity(2, 1))

# ------------------------------------------------------------------------------ summary
failed = [label for label, ok in results if not ok]
print(f"\n{len(results) - len(failed)}/{len(results)} passed")
if failed:
    for label in failed:
        print("  FAILED:", label)
    sys.exit(1)
