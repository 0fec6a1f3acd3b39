"""Exact checks of the finite theta group.

Everything here is exact arithmetic on exponents, so the checks are exhaustive wherever the
group is small enough and sampled (with a fixed seed) where it is not:

- associativity, identity and inverses of ``(lambda, P) . (nu, Q) = (lambda nu d(P,Q), P+Q)``;
- the commutator of ``(1, P)`` and ``(1, Q)`` is ``(e(P, Q), 0)``, and ``d(P,Q) / d(Q,P) = e``
  for both lifts of the pairing;
- characters act as automorphisms and the involution respects the group law;
- the action on functions ``L -> C`` and the standard representation are homomorphisms, and
  the standard representation has a one-dimensional commutant.

No network, no randomness beyond a seeded generator. Run from the repository root::

    python tests/test_heisenberg.py
"""

import itertools
import sys

import numpy as np

from thetagrp.heisenberg import (
    IOTA,
    AmbientMismatchError,
    Character,
    FunctionOnL,
    LPoint,
    RootOfUnity,
    ThetaGroup,
    ThetaGroupElement,
    all_points,
    canonical_d_odd,
    involution_iota,
    quasi_trivial_automorphism,
    standard_d,
    standard_rep_action,
    symplectic_e,
)

results = []


def check(label, condition, detail=""):
    results.append((label, bool(condition)))
    print(f"{'PASS' if condition else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))


AMBIENTS = [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)]
#: Above this many points, triple products are sampled rather than enumerated.
EXHAUSTIVE_LIMIT = 20
rng = np.random.default_rng(7)


def triples(points):
    if len(points) <= EXHAUSTIVE_LIMIT:
        return itertools.product(points, repeat=3)
    picks = rng.integers(len(points), size=(2000, 3))
    return ((points[i], points[j], points[k]) for i, j, k in picks)


# ------------------------------------------------------------------ points and roots of unity

P = LPoint(3, 1, (4, -1))
check("LPoint residues are reduced", P.coords == (1, 2), P.coords)
check("a and b split the coordinates", (P.a, P.b) == ((1,), (2,)))
check("3 * P is zero", (3 * P).is_zero)
check("order of (1, 2) mod 3 is 3", P.order() == 3)
check("all_points lists n^(2g) points, zero first", len(all_points(2, 2)) == 16)
check("all_points starts at zero", all_points(3, 2)[0].is_zero)

try:
    LPoint(2, 2, (0, 1, 1))
except ValueError as exc:
    check("a wrong coordinate count is rejected", "coordinates" in str(exc))
else:
    check("a wrong coordinate count is rejected", False, "accepted")

try:
    LPoint(2, 1, (1, 0)) + LPoint(3, 1, (1, 0))
except AmbientMismatchError:
    check("points of different groups do not add", True)
else:
    check("points of different groups do not add", False, "added")

root, distance = RootOfUnity.snap(np.exp(2j * np.pi * 2 / 5) * 1.0000001, 5)
check("snap finds zeta_5^2", root == RootOfUnity(5, 2), root)
check("snap reports the distance", distance < 1e-6, f"{distance:.1e}")
check("roots of unity multiply exactly", RootOfUnity(4, 3) * RootOfUnity(4, 2) == RootOfUnity(4, 1))
check("inverse of zeta_6^5 is zeta_6", RootOfUnity(6, 5).inverse() == RootOfUnity(6, 1))

# ------------------------------------------------------------------------------ group law

for n, g in AMBIENTS:
    group = ThetaGroup(n, g)
    points = group.points()
    elements = [ThetaGroupElement.exact(k, Q) for Q in points for k in (0, 1)]
    identity = group.identity()

    assoc = all(
        group.mul(group.mul(x, y), z).same_as(group.mul(x, group.mul(y, z)))
        for x, y, z in triples([ThetaGroupElement.exact(1, Q) for Q in points])
    )
    check(f"({n},{g}) associativity", assoc)
    check(
        f"({n},{g}) identity is two-sided",
        all(
            group.mul(identity, x).same_as(x) and group.mul(x, identity).same_as(x)
            for x in elements
        ),
    )
    check(
        f"({n},{g}) x . x^-1 is the identity",
        all(group.mul(x, group.inv(x)).same_as(identity) for x in elements),
    )
    commutators_ok = True
    skew_ok = True
    for Q, R in itertools.product(points, repeat=2):
        c = group.commutator(ThetaGroupElement.exact(0, Q), ThetaGroupElement.exact(0, R))
        commutators_ok &= c.point.is_zero and c.exponent == symplectic_e(Q, R).exponent
        skew_ok &= standard_d(Q, R) / standard_d(R, Q) == symplectic_e(Q, R)
        if n % 2:
            skew_ok &= canonical_d_odd(Q, R) / canonical_d_odd(R, Q) == symplectic_e(Q, R)
    check(f"({n},{g}) commutator is e(P, Q)", commutators_ok)
    check(f"({n},{g}) skew-symmetrization of d is e", skew_ok)

group = ThetaGroup(3, 1)
check("mu_3 x L has 27 elements", sum(1 for _ in group.elements()) == 27)
check(
    "e is alternating: e(P, P) = 1",
    all(symplectic_e(Q, Q).exponent == 0 for Q in all_points(4, 1)),
)

try:
    canonical_d_odd(LPoint(2, 1, (1, 0)), LPoint(2, 1, (0, 1)))
except ValueError as exc:
    check("the symmetric lift needs an odd modulus", "odd" in str(exc))
else:
    check("the symmetric lift needs an odd modulus", False, "accepted n=2")

# ---------------------------------------------------------------- automorphisms

group = ThetaGroup(3, 1)
chi = Character(3, 1, (1, 2))
hom = all(
    quasi_trivial_automorphism(chi, group.mul(x, y)).same_as(
        group.mul(quasi_trivial_automorphism(chi, x), quasi_trivial_automorphism(chi, y))
    )
    for x, y in itertools.product(list(group.elements()), repeat=2)
)
check("characters act as automorphisms", hom)
hom = all(
    involution_iota(group.mul(x, y)).same_as(group.mul(involution_iota(x), involution_iota(y)))
    for x, y in itertools.product(list(group.elements()), repeat=2)
)
check("iota respects the group law for bilinear d", hom)
check("characters compose additively", (chi * chi).coords == (2, 1))

# ---------------------------------------------------------------- representations

group = ThetaGroup(2, 2)
h = FunctionOnL.from_callable(2, 2, lambda R: complex(1 + sum(R.coords), R.coords[0]))
worst = 0.0
for x, y in itertools.product([ThetaGroupElement.exact(1, Q) for Q in group.points()], repeat=2):
    lhs = group.act(x, group.act(y, h))
    rhs = group.act(group.mul(x, y), h)
    worst = max(worst, lhs.max_distance(rhs))
check("the action on functions is a homomorphism", worst < 1e-12, f"{worst:.1e}")

delta = FunctionOnL.delta(LPoint(2, 2, (0, 0, 0, 0)))
moved = group.act(ThetaGroupElement.exact(0, LPoint(2, 2, (1, 0, 1, 1))), delta)
check("translates of a delta are deltas", abs(moved[LPoint(2, 2, (1, 0, 1, 1))]) == 1.0)

for n, g in [(2, 2), (3, 1), (4, 1)]:
    group = ThetaGroup(n, g)
    worst = 0.0
    for Q, R in itertools.product(group.points(), repeat=2):
        x, y = ThetaGroupElement.exact(0, Q), ThetaGroupElement.exact(0, R)
        lhs = group.rep_matrix(group.mul(x, y))
        rhs = group.rep_matrix(x) @ group.rep_matrix(y)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    check(f"({n},{g}) standard representation is a homomorphism", worst < 1e-12, f"{worst:.1e}")
    check(f"({n},{g}) commutant is one-dimensional", group.commutant_dimension() == 1)

v = np.arange(1, 5, dtype=complex)
swapped = standard_rep_action(IOTA, v, n=2, g=2)
check("IOTA is an involution on V0", np.allclose(standard_rep_action(IOTA, swapped, n=2, g=2), v))
shifted = standard_rep_action(ThetaGroupElement.exact(0, LPoint(2, 2, (1, 0, 0, 0))), v, n=2, g=2)
check("(a, 0) permutes the basis", sorted(shifted.real) == sorted(v.real))

try:
    standard_rep_action(IOTA, np.ones(3), n=2, g=2)
except ValueError:
    check("a vector of the wrong length is rejected", True)
else:
    check("a vector of the wrong length is rejected", False, "accepted")

# ------------------------------------------------------------------------------ summary
failed = [label for label, ok in results if not ok]
print(f"\n{len(results) - len(failed)}/{len(results)} passed")
if failed:
    for label in failed:
        print("  FAILED:", label)
    sys.exit(1)
