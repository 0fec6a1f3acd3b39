"""Exact checks of Pfaffians and the spinor square ``s = c v^2``.

Everything runs over the rationals (``fractions.Fraction`` object arrays), so the residuals
below are compared with 0, not with a tolerance:

- ``det A = Pf(A)^2`` for random integer skew matrices of sizes 2 to 8, plus a worked example;
- hyperbolic coordinates put the Gram matrix in split form ``[[0, I], [I, 0]]``;
- ``s = c v^2`` on the even component, ``s = 0`` on the odd one, and odd ``n`` is stabilized by
  a hyperbolic plane;
- non-isotropic frames and malformed Gram matrices are refused.

No network. Run from the repository root::

    python tests/test_spinor.py
"""

import sys
from fractions import Fraction

import numpy as np

from thetagrp.spinor_quadratic import (
    ChartError,
    QuadraticSpace,
    as_exact,
    det_exact,
    hyperbolic_coordinates,
    intersection_parity,
    pfaffian,
    random_isotropic_frame,
    random_quadratic_instance,
    random_skew,
    spinor_square_check,
    spinor_suite,
)

results = []


def check(label, condition, detail=""):
    results.append((label, bool(condition)))
    print(f"{'PASS' if condition else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))


rng = np.random.default_rng(17)

# ---------------------------------------------------------------- determinants and Pfaffians

check("det [[1, 2], [3, 4]] = -2", det_exact(as_exact([[1, 2], [3, 4]])) == -2)
check("det of the empty matrix is 1", det_exact(as_exact(np.zeros((0, 0)))) == 1)

A = as_exact(np.zeros((4, 4), dtype=int))
A[0, 1], A[1, 0] = 2, -2
A[2, 3], A[3, 2] = 4, -4
check("Pf with a12 = 2, a34 = 4 is 8", pfaffian(A) == 8, pfaffian(A))
A[0, 2], A[2, 0] = 1, -1
A[1, 3], A[3, 1] = 3, -3
check("Pf = a12 a34 - a13 a24 + a14 a23", pfaffian(A) == 2 * 4 - 1 * 3, pfaffian(A))
check("Pf of odd size is 0", pfaffian(random_skew(5, rng)) == 0)

mismatches = 0
for size in (2, 4, 6, 8):
    for _ in range(10):
        S = random_skew(size, rng)
        pf = pfaffian(S)
        mismatches += pf * pf != det_exact(S)
check("det = Pf^2 exactly for sizes 2-8", mismatches == 0, f"{mismatches} mismatches")
check("a rank-2 skew 4x4 has Pf 0", pfaffian(random_skew(4, rng, rank=2)) == 0)

S = random_skew(6, rng, exact=False)
pf = pfaffian(S)
rel = abs(pf * pf - np.linalg.det(S)) / abs(np.linalg.det(S))
check("det = Pf^2 in floating point", rel < 1e-10, f"{rel:.1e}")

try:
    pfaffian(as_exact([[0, 1], [2, 0]]))
except ValueError as exc:
    check("Pf of a non-skew matrix raises", "skew" in str(exc))
else:
    check("Pf of a non-skew matrix raises", False, "returned")

# ---------------------------------------------------------------- quadratic spaces

for gram, why in (
    (np.eye(3, dtype=int), "even size"),
    ([[0, 1], [2, 0]], "symmetric"),
    ([[1, 1], [1, 1]], "degenerate"),
):
    try:
        QuadraticSpace(as_exact(gram))
    except ValueError as exc:
        check(f"Gram matrix refused: {why}", why in str(exc), str(exc))
    else:
        check(f"Gram matrix refused: {why}", False, "accepted")

space, V0 = random_quadratic_instance(3, rng)
T = hyperbolic_coordinates(space, V0)
split = QuadraticSpace.split(3).gram
check("hyperbolic coordinates are split", np.all(T.T @ space.gram @ T == split))
check("T starts with the frame V0", np.all(T[:, :3] == V0))

# ---------------------------------------------------------------- spinor square

space, V0 = random_quadratic_instance(4, rng)
T = hyperbolic_coordinates(space, V0)
U = T @ np.vstack([as_exact(np.eye(4, dtype=int)), A])
result = spinor_square_check(U, V0, space, rng=rng)
check("transverse U is on the even component", result.component == "even")
check("s = c v^2 exactly", result.s == result.c * result.v**2 and result.residual == 0)
check("graph of A: c = 1, v = Pf(A) = 5, s = 25", (result.c, result.v, result.s) == (1, 5, 25))
check("s is a rational", isinstance(result.s, Fraction))
check("no stabilization at n = 4", not result.stabilized)

U = random_isotropic_frame(space, V0, rng, rank=2)
result = spinor_square_check(U, V0, space, rng=rng)
check("dim(U cap V0) = 2 stays even", result.component == "even")
check("s and v vanish together", result.s == 0 and result.v == 0)

space, V0 = random_quadratic_instance(3, rng)
U = random_isotropic_frame(space, V0, rng)
result = spinor_square_check(U, V0, space, rng=rng)
check("n = 3 graph frames meet V0 in odd dimension", intersection_parity(U, V0, space) == 1)
check("odd component has s = 0 and no root", result.component == "odd" and result.s == 0)
check("odd component records no v", result.v is None and result.c is None)

T = hyperbolic_coordinates(space, V0)
U = T @ np.vstack([random_skew(3, rng, rank=2), as_exact(np.eye(3, dtype=int))])
result = spinor_square_check(U, V0, space, rng=rng)
check("n = 3 transverse frame is even", result.component == "even")
check("odd n is stabilized by a hyperbolic plane", result.stabilized)
check("stabilized square is exact", result.residual == 0)
check("the check serializes Fractions as strings", isinstance(result.to_json()["s"], str))

plane = QuadraticSpace.split(2)
frame = as_exact(np.vstack([np.eye(2, dtype=int), np.zeros((2, 2), dtype=int)]))
diagonal = as_exact(np.vstack([np.eye(2, dtype=int), np.eye(2, dtype=int)]))
try:
    spinor_square_check(diagonal, frame, plane)
except ChartError as exc:
    check("a non-isotropic U is refused", "not isotropic" in str(exc))
else:
    check("a non-isotropic U is refused", False, "accepted")

# ---------------------------------------------------------------- suites

suite = spinor_suite(4, 40, rng=rng)
check("suite n = 4 passes", suite["passed"], suite)
check("suite counts degenerate instances", 0 <= suite["degenerate"] <= 40)
suite = spinor_suite(3, 20, rng=rng)
check("suite n = 3 passes", suite["passed"], suite)

# ------------------------------------------------------------------------------ summary
failed = [label for label, ok in results if not ok]
print(f"\n{len(results) - len(failed)}/{len(results)} passed")
if failed:
    for label in failed:
        print("  FAILED:", label)
    sys.exit(1)
