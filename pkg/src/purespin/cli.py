"""Command-line front end: verification suites with deterministic JSON reports.

Reports are reproducible byte for byte for a fixed configuration: all
randomness derives from the --seed argument, scalars are written as decimal
strings, and keys are sorted.  Subcommands:

    clifford            engine conformance checks (relations, groups, idempotent)
    spinor              purity round trips and pairing/transversality agreement
    dirac               image / preimage / strong-check on JSON matrices
    conjugacy-volume    class volume densities on a chosen conjugacy class
    integrability       (d+η) residuals of the invariant spinors
    qham verify         moment axioms for a chosen model space
    verify-all          the full acceptance suite

The only environment knob is PURESPIN_THREADS (sample-level parallelism).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .bilinear import BilinearSpace, LagrangianSubspace, random_orthogonal, transverse
from .clifford import CliffordAlgebra, factor_into_reflections, pin_lift_from_reflections
from .dirac import dirac_image, dirac_preimage, is_strong_dirac, kappa_embed
from .geometry import (
    PinLift,
    cartan_dirac_integrability,
    conjugacy_volume_top,
    ghjw_matrix,
    random_class_point,
    su2_class_from_trace,
)
from .groups import get_model
from .moment import (
    DoubleFactory,
    conjugacy_qham_point,
    exp_orbit_qham_point,
    minimal_degeneracy,
    moment_condition_residual,
    qham_volume_top,
    strong_dirac_equivalence,
)
from .multivector import Multivector
from .spinor import DoubledSpace, chevalley_pairing, spinor_of_lagrangian
from .suites import map_samples, run_all

SCHEMA = "purespin-report/1"


def _stringify(obj):
    """Scalars to decimal strings (floats via repr, exact values verbatim)."""
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return repr(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return f"{z.real!r}{z.imag:+}j"
    if isinstance(obj, np.ndarray):
        return _stringify(obj.tolist())
    return obj


def emit_report(command: str, config: dict, checks: list[dict], out: str | None) -> int:
    passed = all(c.get("passed", True) for c in checks)
    config = {k: v for k, v in config.items() if not callable(v) and k != "out"}
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "config": _stringify(config),
        "checks": _stringify(checks),
        "passed": passed,
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return 0 if passed else 1


# --------------------------------------------------------------------------- #
# subcommands

def cmd_clifford(args) -> int:
    rng = np.random.default_rng(args.seed)
    from .bilinear import make_split_space
    space = make_split_space(args.n)
    algebra = CliffordAlgebra(space)
    checks = []
    worst = 0.0
    for _ in range(args.samples):
        v = rng.standard_normal(2 * args.n)
        w = rng.standard_normal(2 * args.n)
        anti = (algebra.vector(v) * algebra.vector(w) + algebra.vector(w) * algebra.vector(v)).mv
        expect = Multivector.scalar(2 * args.n, space.pairing(v, w))
        worst = max(worst, (anti - expect).norm())
    checks.append({"name": "generator-relations", "passed": worst < 1e-9,
                   "max_residual": worst})
    members_ok = True
    for _ in range(args.samples):
        vectors = factor_into_reflections(_split_orthogonal(space, rng), space)
        lift = pin_lift_from_reflections(algebra, vectors)
        member, _ = algebra.group_action(lift.g.mv)
        members_ok = members_ok and member
    checks.append({"name": "pin-lift-membership", "passed": members_ok})
    return emit_report("clifford", vars(args), checks, args.out)


def _split_orthogonal(space, rng):
    """Random element of O(n,n) from reflections in random non-isotropic vectors."""
    m = np.eye(space.dim)
    from .clifford import reflection_matrix
    count = 0
    while count < space.dim:
        w = rng.standard_normal(space.dim)
        if abs(space.pairing(w, w)) < 0.3:
            continue
        m = reflection_matrix(w, space) @ m
        count += 1
    return m


def cmd_spinor(args) -> int:
    rng = np.random.default_rng(args.seed)
    doubled = DoubledSpace(args.n)
    b_eye = BilinearSpace(np.eye(args.n))
    worst = 0.0
    agree = True
    for _ in range(args.samples):
        k1 = kappa_embed(random_orthogonal(args.n, rng), b_eye)
        k2 = kappa_embed(random_orthogonal(args.n, rng), b_eye)
        lag1 = LagrangianSubspace(doubled.space, k1[:, :args.n], check=False)
        lag2 = LagrangianSubspace(doubled.space, k2[:, args.n:], check=False)
        ps1 = spinor_of_lagrangian(doubled, lag1)
        ps2 = spinor_of_lagrangian(doubled, lag2)
        worst = max(worst, ps1.null.distance(lag1), ps2.null.distance(lag2))
        pairing = abs(float(chevalley_pairing(ps1.form, ps2.form)))
        agree = agree and ((pairing > 1e-8) == transverse(lag1, lag2))
    checks = [
        {"name": "purity-round-trip", "passed": worst < 1e-9, "max_distance": worst},
        {"name": "pairing-transversality", "passed": agree},
    ]
    return emit_report("spinor", vars(args), checks, args.out)


def cmd_dirac(args) -> int:
    payload = json.loads(open(args.input).read() if args.input else sys.stdin.read())
    a = np.array(payload["matrix"], dtype=float)
    n_out, n_in = a.shape
    doubled_in = DoubledSpace(n_in)
    doubled_out = DoubledSpace(n_out)
    basis = np.array(payload["dirac_basis"], dtype=float)
    lag = LagrangianSubspace(doubled_in.space if args.op != "preimage" else doubled_out.space,
                             basis)
    checks = []
    if args.op == "image":
        image, strong = dirac_image(a, lag, doubled_out)
        checks.append({"name": "image", "passed": True, "basis": image.basis.tolist(),
                       "strong": strong})
    elif args.op == "preimage":
        pre, nonzero = dirac_preimage(a, lag, doubled_in)
        checks.append({"name": "preimage", "passed": True, "basis": pre.basis.tolist(),
                       "pullback_nonzero": nonzero})
    else:
        checks.append({"name": "strong-check", "passed": True,
                       "strong": is_strong_dirac(a, lag)})
    return emit_report(f"dirac-{args.op}", {"op": args.op}, checks, args.out)


def cmd_conjugacy_volume(args) -> int:
    model = get_model(args.group)
    pin = PinLift(model)
    rng = np.random.default_rng(args.seed)
    if model.name == "su2":
        g0 = su2_class_from_trace(args.class_trace)
    else:
        g0 = model.random_element(rng)
    pts = [random_class_point(model, g0, rng) for _ in range(args.samples)]

    def record(item):
        idx, pt = item
        omega = ghjw_matrix(pt)
        dens = conjugacy_volume_top(pt, pin)
        return {
            "index": idx,
            "point": np.asarray(pt.g).tolist(),
            "ghjw_rank": int(np.linalg.matrix_rank(omega, tol=1e-8)) if omega.size else 0,
            "density": dens,
            "passed": abs(dens) > 1e-6,
        }

    checks = map_samples(record, list(enumerate(pts)))
    return emit_report("conjugacy-volume", vars(args), checks, args.out)


def cmd_integrability(args) -> int:
    model = get_model(args.group)
    if not model.liftable:
        raise SystemExit(f"group {model.name!r} has no global lift")
    pin = PinLift(model)
    rng = np.random.default_rng(args.seed)
    checks = []
    for idx in range(args.points):
        g = model.random_element(rng)
        rep = cartan_dirac_integrability(model, g, pin)
        checks.append({
            "index": idx,
            "phi_residual": rep["phi_residual"],
            "psi_residual": rep["psi_residual"],
            "xi_fit_coefficient": rep["xi_fit_coefficient"],
            "passed": rep["phi_residual"] < 1e-4 < rep["psi_residual"],
        })
    return emit_report("integrability", vars(args), checks, args.out)


def cmd_qham(args) -> int:
    if args.action != "verify":
        raise SystemExit("usage: purespin qham verify ...")
    model = get_model(args.group)
    pin = PinLift(model) if model.liftable else None
    rng = np.random.default_rng(args.seed)
    factory = DoubleFactory(model)
    checks = []
    for idx in range(args.samples):
        if args.space == "class":
            trace = float(rng.uniform(-1.9, 1.9))
            g0 = su2_class_from_trace(trace) if model.name == "su2" else model.random_element(rng)
            p = conjugacy_qham_point(model, random_class_point(model, g0, rng).g)
        elif args.space == "double":
            p = factory.double_point(model.random_element(rng), model.random_element(rng))
        elif args.space == "fused-double":
            p = factory.fused_double_point(model.random_element(rng), model.random_element(rng))
        elif args.space == "exp":
            p = exp_orbit_qham_point(model, model.random_algebra(rng, 0.8))
        else:
            raise SystemExit(f"unknown space {args.space!r}")
        residual = moment_condition_residual(p)
        md = minimal_degeneracy(p)
        eq = strong_dirac_equivalence(p) if p.model is model else {"agree": True}
        entry = {
            "index": idx,
            "moment_residual": residual,
            "minimal_degeneracy": md,
            "equivalence_agrees": eq["agree"],
            "passed": residual < 1e-8 and md["original"] and md["elegant"] and eq["agree"],
        }
        if pin is not None and p.model is model:
            entry["volume_density"] = qham_volume_top(p, pin)
        checks.append(entry)
    return emit_report("qham-verify", vars(args), checks, args.out)


def cmd_verify_all(args) -> int:
    from .suites import TOLERANCES
    reports = run_all(args.seed)
    config = dict(vars(args))
    config["tolerances"] = TOLERANCES
    return emit_report("verify-all", config, reports, args.out)


# --------------------------------------------------------------------------- #

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="purespin",
                                     description="pure-spinor / Dirac-geometry verifier")
    parser.add_argument("--version", action="version", version=f"purespin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clifford", help="Clifford engine conformance")
    p.add_argument("--n", type=int, default=3, help="split form signature (n,n)")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_clifford)

    p = sub.add_parser("spinor", help="pure spinor round trips")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spinor)

    p = sub.add_parser("dirac", help="linear Dirac maps on JSON matrices")
    p.add_argument("op", choices=["image", "preimage", "strong-check"])
    p.add_argument("--input", help="JSON file with 'matrix' and 'dirac_basis' (default stdin)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dirac)

    p = sub.add_parser("conjugacy-volume", help="class volume densities")
    p.add_argument("--group", default="su2")
    p.add_argument("--class-trace", type=float, default=0.0, dest="class_trace")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_conjugacy_volume)

    p = sub.add_parser("integrability", help="(d+η) residual tables")
    p.add_argument("--group", default="su2")
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_integrability)

    p = sub.add_parser("qham", help="moment axiom verification")
    p.add_argument("action", choices=["verify"])
    p.add_argument("--space", choices=["class", "double", "fused-double", "exp"],
                   default="class")
    p.add_argument("--group", default="su2")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--report", choices=["json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_qham)

    p = sub.add_parser("verify-all", help="full acceptance suite")
    p.add_argument("--group", default="su2")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_all)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as err:
        raise SystemExit(f"error: {err}")


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
