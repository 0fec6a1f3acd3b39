# -*- coding: utf-8 -*-
"""Command-line front end: each command runs one pipeline and writes a JSON report.

    thetagrp torus-moduli --tau tau.json --N 3 --seed 1
    thetagrp curve-thomae --curve curve.json --seed 1
    thetagrp spinor-suite --seed 1
    thetagrp cohomology

The exit code is 0 iff every recorded check passed and no stage raised.

"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from contextlib import contextmanager
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence

import numpy as np

from ._base import Report
from .cohomology_model import (
    chord_tangent_m,
    embedding_stats,
    model_self_checks,
    solve_pullback_coefficients,
    verify_pullback_theta,
)
from .config import (
    get_null_tol,
    get_pole_tol,
    get_quad_tol,
    get_save_db,
    get_seed,
    get_snap_tol,
    get_theta_tail,
)
from .curves import (
    DeterminantWeilFamily,
    HyperellipticCurve,
    ThomaeMatchError,
    h0_theta_characteristic,
    linear_system_member,
    period_matrix,
    residue_pairing_space,
    theta_characteristics,
    thomae_compare,
    xi_corank,
)
from .curves.periods import TORSION_TOL
from .heisenberg import LPoint, all_points
from .spinor_quadratic import QuadraticSpace, spinor_square_check, spinor_suite
from .theta_analytic import (
    Characteristic,
    PeriodMatrix,
    analytic_weil_family,
    analytic_weil_pairing,
    theta,
)
from .weil_normalize import (
    NormalizationResult,
    ScaledWeilFamily,
    WeilFamily,
    igusa_alpha,
    inverse_law_residual,
    is_nondegenerate,
    moduli_point,
    symmetric_refine,
    weil_pairing_matrix,
)

__all__ = [
    "main",
    "build_parser",
    "load_curve",
    "load_tau",
    "cmd_torus_moduli",
    "cmd_curve_thomae",
    "cmd_spinor_suite",
    "cmd_cohomology",
]

logger = logging.getLogger(__name__)

#: ``y^2 = x^6 - 1``, used when no ``--curve`` is given.
DEFAULT_BRANCH_POINTS = tuple(complex(np.exp(1j * np.pi * k / 3)) for k in range(6))
#: Tolerance of the normal-set law after normalization.
NORMAL_LAW_TOL = 1e-7
#: Tolerance of moduli entries against theta-constant quotients.
MODULI_TOL = 1e-6
#: Coefficient of variation accepted for the squared determinant/theta ratios.
SQUARE_CV_TOL = 1e-5
#: Isotropy residual accepted for residue pairing spaces.
ISOTROPY_TOL = 1e-7
#: Period-matrix symmetry residual accepted before a curve is used.
SYMMETRY_TOL = 1e-6


class _StageAbort(Exception):
    """A stage failed and was recorded; the remaining stages are skipped."""


@contextmanager
def _stage(report: Report, name: str) -> Iterator[None]:
    logger.info("stage %s", name)
    try:
        yield
    except (ValueError, RuntimeError) as exc:
        report.fail_stage(name, exc)
        raise _StageAbort(name) from exc


def _load_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc


def _complex(pair: Any) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if isinstance(pair, (list, tuple)) and len(pair) == 2:
        return complex(float(pair[0]), float(pair[1]))
    raise ValueError(f"expected a number or [re, im], got {pair!r}")


def load_curve(path: Optional[str]) -> HyperellipticCurve:
    """Read ``{"branch_points": [[re, im], ...]}`` or ``{"coefficients": [...]}``.

    Without a path the curve ``y^2 = x^6 - 1`` is returned.

    :raises CurveError: If the branch points collide (vanishing discriminant).
    :raises ValueError: If the file is unreadable or has neither key.

    """
    if path is None:
        return HyperellipticCurve(DEFAULT_BRANCH_POINTS)
    data = _load_json(path)
    if "branch_points" in data:
        return HyperellipticCurve(tuple(_complex(e) for e in data["branch_points"]))
    if "coefficients" in data:
        return HyperellipticCurve.from_coefficients([_complex(c) for c in data["coefficients"]])
    raise ValueError(f"{path}: expected 'branch_points' or 'coefficients'")


def load_tau(path: str) -> PeriodMatrix:
    """Read ``{"tau": [[[re, im], ...], ...]}``.

    :raises PeriodMatrixError: If ``tau`` is not a Riemann matrix.

    """
    data = _load_json(path)
    if "tau" not in data:
        raise ValueError(f"{path}: expected a 'tau' key")
    return PeriodMatrix.from_pairs(data["tau"])


def _seed(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else get_seed()
    if seed is None:
        raise ValueError("a seed is required: pass --seed or set THETAGRP_SEED")
    return seed


def _label(path: Optional[str], fallback: str) -> str:
    if path is None:
        return fallback
    return os.path.splitext(os.path.basename(path))[0]


def _base_config(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "seed": args.seed if args.seed is not None else get_seed(),
        "pole_tol": get_pole_tol(),
        "snap_tol": get_snap_tol(),
        "null_tol": get_null_tol(),
        "quad_tol": get_quad_tol(),
        "theta_tail": get_theta_tail(),
    }


def _torsion_label(P: LPoint) -> str:
    return Characteristic.from_lpoint(P).label


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _pairing_checks(report: Report, family: WeilFamily) -> None:
    matrix, worst = weil_pairing_matrix(family)
    n, g = family.n, family.g
    basis = [LPoint.basis(n, g, i) for i in range(2 * g)]
    expected = np.array(
        [[analytic_weil_pairing(P, Q).exponent for Q in basis] for P in basis], dtype=np.int64
    )
    report.add_array("pairing_matrix", matrix)
    report.add_section("pairing", {"exponents": matrix, "modulus": n, "snap_distance": worst})
    report.check("pairing_snap", worst < get_snap_tol(), worst, get_snap_tol())
    report.check("pairing_matches_analytic", bool(np.array_equal(matrix, expected)))
    report.check("pairing_alternating", bool(np.all((matrix + matrix.T) % n == 0)))
    report.check("pairing_nondegenerate", is_nondegenerate(matrix, n))


def _moduli_checks(
    report: Report,
    result: NormalizationResult,
    delta: Any,
    oracle: Dict[LPoint, complex],
) -> None:
    points = all_points(result.n, result.g)
    vector = moduli_point(result, delta)
    squares = vector**2
    even = result.n % 2 == 0
    worst = 0.0
    rows = []
    for P, value, square in zip(points, vector, squares):
        target = oracle[P] ** 2 if even else oracle[P]
        got = square if even else value
        error = _relative(got, target) if abs(target) > MODULI_TOL else abs(got)
        worst = max(worst, error)
        rows.append(
            {
                "point": _torsion_label(P),
                "value": value,
                "square": square,
                "ambiguous": result.ambiguous[P],
                "theta_quotient": oracle[P],
            }
        )
    report.add_array("moduli_vector", vector)
    report.add_array("moduli_squares", squares)
    report.add_section(
        "moduli",
        {
            "ordering": "lexicographic (a, b) exponents, a first",
            "compared": "squares" if even else "values",
            "entries": rows,
        },
    )
    report.check("moduli_zero_entry", abs(vector[0] - 1.0) < MODULI_TOL, vector[0], MODULI_TOL)
    report.check("moduli_match_theta_constants", worst < MODULI_TOL, worst, MODULI_TOL)


def _theta_oracle(n: int, tau: PeriodMatrix) -> Dict[LPoint, complex]:
    """``(theta[-a;-b](0) / theta[0;0](0))^n`` for every torsion point."""
    zero = np.zeros(tau.g, dtype=complex)
    null = theta((np.zeros(tau.g), np.zeros(tau.g)), zero, tau)
    out = {}
    for P in all_points(n, tau.g):
        chi = Characteristic.from_lpoint(P)
        out[P] = complex((theta((-chi.a_vec, -chi.b_vec), zero, tau) / null) ** n)
    return out


def cmd_torus_moduli(args: argparse.Namespace) -> Report:
    """Normalize a scrambled analytic family on ``C^g / Lambda_tau`` and read off its moduli."""
    config = _base_config(args)
    config.update({"N": args.N, "tau": args.tau, "samples": args.samples})
    report = Report("torus-moduli", config)
    try:
        with _stage(report, "parse"):
            if args.tau is None:
                raise ValueError("torus-moduli needs --tau FILE")
            tau = load_tau(args.tau)
            rng = np.random.default_rng(_seed(args))
            report.add_section("tau", tau.to_pairs())
        with _stage(report, "torsion"):
            family = analytic_weil_family(args.N, tau)
            oracle = _theta_oracle(args.N, tau)
            report.add_section(
                "torsion",
                [
                    {"point": _torsion_label(P), "coords": list(P.coords), "theta_quotient": v}
                    for P, v in oracle.items()
                ],
            )
        with _stage(report, "normalization"):
            phases = rng.uniform(0.0, 1.0, len(family.points))
            moduli = rng.uniform(0.5, 2.0, len(family.points))
            scalars = {
                P: (1.0 + 0.0j if P.is_zero else m * np.exp(2j * np.pi * u))
                for P, u, m in zip(family.points, phases, moduli)
            }
            scrambled = ScaledWeilFamily(family, scalars)
            result = igusa_alpha(scrambled, samples=args.samples, rng=rng)
            if args.N % 2:
                result = symmetric_refine(scrambled, result, samples=args.samples, rng=rng)
            inverse = inverse_law_residual(scrambled, result)
            report.add_section(
                "normalization",
                {
                    "alpha": [[_torsion_label(P), a] for P, a in result.alpha.items()],
                    "closure_residual": result.closure_residual,
                    "normal_residual": result.normal_residual,
                    "inverse_residual": inverse,
                    "symmetric": result.symmetric,
                },
            )
            report.check(
                "normal_law",
                result.normal_residual < NORMAL_LAW_TOL,
                result.normal_residual,
                NORMAL_LAW_TOL,
            )
            report.check("inverse_law", inverse < NORMAL_LAW_TOL, inverse, NORMAL_LAW_TOL)
            if args.N % 2:
                report.check("unambiguous_odd_level", not result.any_ambiguous)
        with _stage(report, "pairing"):
            _pairing_checks(report, result.family)
        with _stage(report, "moduli"):
            _moduli_checks(report, result, np.zeros(tau.g, dtype=complex), oracle)
    except _StageAbort:
        pass
    return report


def cmd_curve_thomae(args: argparse.Namespace) -> Report:
    """Period matrix, determinantal Weil functions and the Thomae comparison for one curve."""
    config = _base_config(args)
    config.update(
        {"N": 2, "curve": args.curve, "samples": args.samples, "threshold": args.tol}
    )
    report = Report("curve-thomae", config)
    try:
        with _stage(report, "parse"):
            if args.N != 2:
                raise ValueError(f"the curve backend is level 2, got --N {args.N}")
            curve = load_curve(args.curve)
            rng = np.random.default_rng(_seed(args))
            report.add_section("curve", curve.to_json())
        with _stage(report, "period_matrix"):
            frame = period_matrix(curve)
            report.add_section("frame", frame.to_json())
            report.check(
                "tau_symmetric",
                frame.symmetry_residual < SYMMETRY_TOL,
                frame.symmetry_residual,
                SYMMETRY_TOL,
            )
        with _stage(report, "torsion"):
            family = DeterminantWeilFamily(curve, frame, seed=_seed(args))
            report.add_section(
                "torsion",
                [
                    {"point": _torsion_label(P), "divisor": entry.label}
                    for P, entry in sorted(family.labels.items(), key=lambda kv: kv[0].coords)
                ],
            )
            report.check(
                "torsion_labels",
                family.label_residual < TORSION_TOL,
                family.label_residual,
                TORSION_TOL,
            )
        with _stage(report, "thomae"):
            try:
                thomae = thomae_compare(
                    curve,
                    frame,
                    samples=args.samples,
                    rng=rng,
                    threshold=args.tol,
                    family=family,
                )
            except ThomaeMatchError as exc:
                if exc.report is not None:
                    report.add_section("thomae", exc.report.to_json())
                raise
            report.add_section("thomae", thomae.to_json())
            report.check("thomae_constancy", thomae.max_cv < args.tol, thomae.max_cv, args.tol)
            report.check(
                "thomae_square_constancy",
                thomae.max_cv_squared < SQUARE_CV_TOL,
                thomae.max_cv_squared,
                SQUARE_CV_TOL,
            )
        with _stage(report, "normalization"):
            result = igusa_alpha(family, samples=args.samples, rng=rng)
            report.add_section(
                "normalization",
                {
                    "alpha": [[_torsion_label(P), a] for P, a in result.alpha.items()],
                    "closure_residual": result.closure_residual,
                    "normal_residual": result.normal_residual,
                },
            )
            report.check(
                "normal_law",
                result.normal_residual < MODULI_TOL,
                result.normal_residual,
                MODULI_TOL,
            )
        with _stage(report, "pairing"):
            _pairing_checks(report, family)
        with _stage(report, "moduli"):
            delta = next(e for e in theta_characteristics(curve) if e.label == thomae.delta)
            # sum w in |K + delta| maps to the origin of the Jacobian
            member = linear_system_member(curve, curve.canonical_divisor() + delta.divisor, rng)
            _moduli_checks(report, result, tuple(member.support), _theta_oracle(2, frame.tau))
    except _StageAbort:
        pass
    return report


def cmd_spinor_suite(args: argparse.Namespace) -> Report:
    """Exact spinor-square suite plus the residue pairing census of one curve."""
    config = _base_config(args)
    config.update({"n": args.n, "instances": args.instances, "curve": args.curve})
    report = Report("spinor-suite", config)
    try:
        with _stage(report, "parse"):
            curve = load_curve(args.curve)
            rng = np.random.default_rng(_seed(args))
        with _stage(report, "spinor"):
            suite = spinor_suite(args.n, args.instances, rng=rng)
            report.add_section("spinor", suite)
            report.check("spinor_square", suite["failures"] == 0, suite["failures"], 0)
            report.check(
                "pfaffian_square", suite["pfaffian_failures"] == 0, suite["pfaffian_failures"], 0
            )
        with _stage(report, "residue"):
            rows: List[Dict[str, Any]] = []
            for entry in theta_characteristics(curve):
                space = residue_pairing_space(curve, entry, rng)
                corank = xi_corank(space)
                spinor = spinor_square_check(
                    space.V1, space.V0, QuadraticSpace(space.gram), rng=rng
                )
                rows.append(
                    {
                        "characteristic": entry.label,
                        "parity": entry.parity,
                        "h0": h0_theta_characteristic(curve, entry.divisor),
                        "corank": corank,
                        "isotropy_v0": space.isotropy_v0,
                        "isotropy_v1": space.isotropy_v1,
                        "spinor_component": spinor.component,
                    }
                )
            report.add_section("residue", rows)
            coranks = [row["corank"] for row in rows]
            worst = max(max(r["isotropy_v0"], r["isotropy_v1"]) for r in rows)
            report.check(
                "corank_counts",
                sorted(coranks) == [0] * 10 + [1] * 6,
                {"zero": coranks.count(0), "one": coranks.count(1)},
            )
            report.check("corank_equals_h0", all(r["corank"] == r["h0"] for r in rows))
            report.check("lagrangians_isotropic", worst < ISOTROPY_TOL, worst, ISOTROPY_TOL)
            report.check(
                "spinor_component_is_parity",
                all(r["spinor_component"] == ("odd" if r["parity"] else "even") for r in rows),
            )
    except _StageAbort:
        pass
    return report


def cmd_cohomology(args: argparse.Namespace) -> Report:
    """Exact cohomology identities: chord-and-tangent twist, embedding counts, pullback."""
    report = Report("cohomology", {"genera": [1, 2, 3, 4]})
    pairs = [(2, 2), (2, 3), (3, 3), (3, 4)]
    try:
        with _stage(report, "chord_tangent"):
            values = {g: chord_tangent_m(g) for g in (1, 2, 3, 4)}
            report.add_section("chord_tangent_m", {str(g): m for g, m in values.items()})
            report.check("m_genus_2", values[2] == 3, values[2])
            report.check(
                "m_closed_form",
                all(m == Fraction(3 * 2**g, 4) for g, m in values.items()),
                values,
            )
        with _stage(report, "embedding"):
            stats = embedding_stats(2, 6)
            report.add_section("embedding", stats)
            report.check(
                "embedding_counts",
                (stats["ambient"], stats["hyperplanes"], stats["quadrics"]) == (125, 90, 522),
                stats,
            )
        with _stage(report, "pullback"):
            checks = [verify_pullback_theta(g, n) for g, n in pairs]
            report.add_section("pullback", [c.to_json() for c in checks])
            for c in checks:
                report.check(f"pullback_g{c.g}_n{c.n}", c.holds, c.terms)
            coefficients = {}
            for g, n in pairs:
                a, b = solve_pullback_coefficients(g, n)
                coefficients[f"g{g}_n{n}"] = [a, b]
                report.check(
                    f"coefficients_g{g}_n{n}",
                    (a, b) == (Fraction(g - 1 + n, 2 * g - 2), 1),
                    [a, b],
                )
            report.add_section("coefficients", coefficients)
        with _stage(report, "model"):
            for g in (2, 3):
                model = model_self_checks(g)
                report.add_section(f"model_g{g}", model)
                report.check(f"model_g{g}", bool(model["passed"]), model)
    except _StageAbort:
        pass
    return report


COMMANDS = {
    "torus-moduli": cmd_torus_moduli,
    "curve-thomae": cmd_curve_thomae,
    "spinor-suite": cmd_spinor_suite,
    "cohomology": cmd_cohomology,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetagrp",
        description="Theta groups, Weil functions and theta formulae with JSON reports.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--curve", help="JSON file with branch_points or coefficients.")
    parser.add_argument("--tau", help="JSON file with a period matrix.")
    parser.add_argument("--N", type=int, default=2, help="Torsion level (default: 2).")
    parser.add_argument("--seed", type=int, default=None, help="PRNG seed (or THETAGRP_SEED).")
    parser.add_argument(
        "--tol", type=float, default=1e-4, help="Thomae constancy threshold (default: 1e-4)."
    )
    parser.add_argument(
        "--samples", type=int, default=20, help="Random samples per diagnostic (default: 20)."
    )
    parser.add_argument("--n", type=int, default=4, help="Spinor suite half-dimension.")
    parser.add_argument("--instances", type=int, default=100, help="Spinor suite instances.")
    parser.add_argument("--out", help="Report path (default: numbered file in the data folder).")
    parser.add_argument("--no-h5", action="store_true", help="Skip the HDF5 sibling.")
    parser.add_argument(
        "--save-db", action="store_true", default=None, help="Log the report to MongoDB."
    )
    parser.add_argument("--log-level", default="WARNING", help="Logging level (default: WARNING).")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    report = COMMANDS[args.command](args)
    label = _label(args.curve or args.tau, args.command)
    save_db = args.save_db if args.save_db is not None else get_save_db()
    path = report.save(label, args.out, h5=not args.no_h5, save_db=save_db)
    status = "passed" if report.passed else "FAILED"
    print(f"{args.command}: {status} ({path})")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
