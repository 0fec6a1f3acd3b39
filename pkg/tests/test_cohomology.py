"""Exact checks of the cohomology model of a principally polarized abelian variety.

All arithmetic is over ``fractions.Fraction``:

- ``int Theta^g = g!`` and integrating a class that is not top-degree raises;
- ``[n]^*`` scales degree-``k`` classes by ``n^k``;
- the chord-and-tangent twist is ``m(g) = 3 2^g / 4`` for ``g = 1 .. 4``;
- the ``|6 Theta|`` embedding of a surface: 36 sections, ``P^125``, 90 hyperplanes, 522
  quadrics;
- on ``C^n`` the diagonal has self-intersection ``-(2g - 2)``, and
  ``(2g-2) alpha^* Theta = (g-1+n) sum K_i - (2g-2) sum Delta_ij`` for
  ``(g, n) = (2,2), (2,3), (3,3), (3,4)``, with ``(a, b)`` recovered from two test curves.

No network. Run from the repository root::

    python tests/test_cohomology.py
"""

import math
import sys
from fractions import Fraction

from thetagrp.cohomology_model import (
    CohomologyError,
    CurveProductAlgebra,
    ExteriorClass,
    addition_pullback,
    chord_tangent_m,
    diagonal_curve_test,
    embedding_stats,
    model_self_checks,
    multiplication_pullback,
    solve_pullback_coefficients,
    theta_class,
    top_integral,
    verify_pullback_theta,
    vertical_curve_test,
)

results = []


def check(label, condition, detail=""):
    results.append((label, bool(condition)))
    print(f"{'PASS' if condition else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))


# ---------------------------------------------------------------- exterior algebra

for g in (1, 2, 3):
    theta = theta_class(g)
    check(f"g={g}: int Theta^g = g!", top_integral(theta**g) == math.factorial(g))

try:
    top_integral(theta_class(2))
except CohomologyError as exc:
    check("integrating a degree-2 class raises", "non-top" in str(exc))
else:
    check("integrating a degree-2 class raises", False, "integrated")

x = ExteriorClass.generator(4, 0)
check("odd generators square to zero", (x * x).is_zero)
y = ExteriorClass.generator(4, 1)
check("odd generators anticommute", (x * y + y * x).is_zero)
check("[3]^* Theta = 9 Theta", multiplication_pullback(theta_class(2), 3) == 9 * theta_class(2))

product = theta_class(2, 0, 2) ** 2 * theta_class(2, 1, 2) ** 2
check("int pr_1^* Theta^2 pr_2^* Theta^2 = 4 on A x A", top_integral(product) == 4)
summed = addition_pullback(theta_class(2))
check("sigma^* Theta has degree 2", summed.degrees() == [2], summed.degrees())

# ---------------------------------------------------------------- chord-and-tangent twist

for g, expected in ((1, Fraction(3, 2)), (2, 3), (3, 6), (4, 12)):
    m = chord_tangent_m(g)
    check(f"m({g}) = {expected}", m == expected, m)

try:
    chord_tangent_m(0)
except ValueError:
    check("genus 0 is rejected", True)
else:
    check("genus 0 is rejected", False, "accepted")

# ---------------------------------------------------------------- embedding counts

stats = embedding_stats(2, 6)
check("h^0(6 Theta) = 36", stats["h0"] == 36)
check("ambient is P^125", stats["ambient"] == 125)
check("90 independent hyperplanes contain A", stats["hyperplanes"] == 90)
check("522 quadrics", stats["quadrics"] == 522, stats)
check("sym2 - h0_double = quadrics", stats["sym2"] - stats["h0_double"] == stats["quadrics"])

# ---------------------------------------------------------------- curve products

for g in (2, 3):
    algebra = CurveProductAlgebra(g, 2)
    delta = algebra.diagonal_class(0, 1)
    value = algebra.integrate(algebra.mul(delta, delta))
    check(f"g={g}: Delta^2 = -(2g - 2)", value == -(2 * g - 2), value)
    checks = model_self_checks(g)
    check(f"g={g}: model self-checks", checks["passed"], checks)

for g, n in ((2, 2), (2, 3), (3, 3), (3, 4)):
    result = verify_pullback_theta(g, n)
    check(f"(g, n) = ({g}, {n}): alpha^* Theta identity", result.holds, result.mismatches[:3])
    a, b = solve_pullback_coefficients(g, n)
    expected = (Fraction(g - 1 + n, 2 * g - 2), Fraction(1))
    check(f"(g, n) = ({g}, {n}): (a, b) = {expected}", (a, b) == expected, (a, b))
    vertical = vertical_curve_test(g, n)
    diagonal = diagonal_curve_test(g, n)
    check(f"(g, n) = ({g}, {n}): vertical curve condition", vertical.holds(a, b))
    check(f"(g, n) = ({g}, {n}): diagonal curve condition", diagonal.holds(a, b))

check("vertical pairing of alpha^* Theta is g", vertical_curve_test(2, 3).theta == 2)
check("diagonal pairing of alpha^* Theta is n^2 g", diagonal_curve_test(2, 3).theta == 18)
check("the check serializes", verify_pullback_theta(2, 2).to_json()["holds"] is True)

try:
    solve_pullback_coefficients(2, 1)
except CohomologyError as exc:
    check("n = 1 is degenerate", "degenerate" in str(exc))
else:
    check("n = 1 is degenerate", False, "solved")

# ------------------------------------------------------------------------------ summary
failed = [label for label, ok in results if not ok]
print(f"\n{len(results) - len(failed)}/{len(results)} passed")
if failed:
    for label in failed:
        print("  FAILED:", label)
    sys.exit(1)
