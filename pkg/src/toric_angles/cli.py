"""Command line front end.

Exit codes: 0 success, 1 negative mathematical answer, 2 input error,
3 solver failure. Results go to stdout as JSON, messages to stderr.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import fixtures
from .correspondence import (
    DEFAULT_MAX_ITER,
    angles_to_reeb,
    build_volume_function,
    default_tol,
    reeb_to_angles,
)
from .exceptions import (
    ConeFileError,
    FixtureCheckFailed,
    MathematicalNegative,
    SolverFailure,
    ToricError,
)
from .invariants import integrated_scalar_identity, log_futaki, total_transversal_scalar
from .lattice_cone import angles_cone_membership, cartier_klt, check_good, dual_cone, kernel_basis
from .polytope import moments, slice
from .potential import SymplecticPotential, abreu_scalar_curvature, metric_at
from .serialize import dumps
from .validation import parse_vector_arg

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3


def load_cone(path):
    """Read a cone file, or a bundled fixture given as ``fixture:<name>``."""
    if path.startswith("fixture:"):
        try:
            return fixtures.get(path.split(":", 1)[1]).cone()
        except KeyError as exc:
            raise ConeFileError(str(exc.args[0])) from None
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConeFileError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConeFileError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "normals" not in data:
        raise ConeFileError(f"{path}: expected an object with a 'normals' list")
    normals = data["normals"]
    if not isinstance(normals, list) or not all(
        isinstance(v, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in v)
        for v in normals
    ):
        raise ConeFileError(f"{path}: normals must be a list of integer lists")
    dim = data.get("dim")
    if dim is not None and any(len(v) != dim for v in normals):
        raise ConeFileError(f"{path}: normals do not have length dim = {dim}")
    return check_good(normals, name=data.get("name"))


def _vector(text, flag):
    try:
        return parse_vector_arg(text)
    except (ValueError, ZeroDivisionError):
        raise ConeFileError(f"cannot parse {flag} {text!r}") from None


def cmd_check_good(args):
    cone = load_cone(args.cone)
    out = cone.to_json()
    out["rays"] = [list(u) for u in cone.rays]
    out["faces"] = len(cone.faces)
    out["good"] = True
    return out


def cmd_dual(args):
    cone = load_cone(args.cone)
    return {"dual_rays": [list(u) for u in dual_cone(cone)], "dual_facets": [list(u) for u in cone.rays]}


def cmd_angles_cone(args):
    cone = load_cone(args.cone)
    beta = _vector(args.beta, "--beta")
    m = angles_cone_membership(cone, beta)
    out = {"member": m.member, "kernel_basis": [list(e) for e in kernel_basis(cone)]}
    if m.member:
        out["witness"] = list(m.witness)
        return out
    out["eta"] = list(m.eta)
    out["pairing"] = m.pairing
    raise _Negative(out, f"beta is not in the angles' cone: <beta, eta> = {m.pairing}")


def cmd_reeb_to_angles(args):
    cone = load_cone(args.cone)
    xi = _vector(args.xi, "--xi")
    if args.exact:
        xi = [Fraction(x) for x in xi]
    else:
        xi = [float(x) for x in xi]
    return reeb_to_angles(cone, xi)


def cmd_angles_to_reeb(args):
    cone = load_cone(args.cone)
    beta = _vector(args.beta, "--beta")
    res = angles_to_reeb(
        cone, beta, tol=args.tol, max_iter=args.max_iter, certify=args.certify,
        xi0=_vector(args.xi0, "--xi0") if args.xi0 else None,
    )
    out = res.to_json()
    out["residual"] = res.residuals["beta"]
    return out


def cmd_volume(args):
    cone = load_cone(args.cone)
    xi = _vector(args.xi, "--xi")
    P = slice(cone, xi)
    m = moments(P)
    vf = build_volume_function(cone)
    return {
        "xi": list(P.xi),
        "volume_delta": m.euclid_volume_delta,
        "volume_function": vf(P.xi),
        "chart_volume": m.volume,
        "chart_drop": P.drop,
        "barycenter": list(m.barycenter),
        "vertices": [list(v) for v in P.vertices],
        "gradient": list(vf.gradient(P.xi)),
    }


def cmd_futaki(args):
    cone = load_cone(args.cone)
    xi = _vector(args.xi, "--xi")
    beta = _vector(args.beta, "--beta")
    rep = log_futaki(cone, xi, beta)
    out = {
        "vanishes": rep.vanishes,
        "verdicts": list(rep.verdicts()),
        "L_values": list(rep.L_values),
        "A_beta": list(rep.A_beta),
        "barycenter_interior": list(rep.barycenter_interior),
        "barycenter_boundary": list(rep.barycenter_boundary),
        "gap": rep.gap,
        "total_scalar": total_transversal_scalar(cone, xi, beta),
        "volume_balance": integrated_scalar_identity(cone, xi, beta),
    }
    return out


def cmd_scalar(args):
    cone = load_cone(args.cone)
    xi = _vector(args.xi, "--xi")
    beta = _vector(args.beta, "--beta")
    pot = SymplecticPotential.build("canonical_xi", cone, beta, xi=xi)
    if args.point:
        x = [float(t) for t in _vector(args.point, "--point")]
    else:
        # a point of the cone well inside: the sum of the rays
        x = [float(sum(col)) for col in zip(*cone.rays)]
    est = abreu_scalar_curvature(pot, x, args.step)
    sample = metric_at(pot, x)
    return {
        "point": x,
        "scalar_curvature": est.value,
        "error_indicator": est.error,
        "reeb_check": sample.reeb_check,
        "hessian_condition": sample.condition,
    }


def cmd_klt(args):
    cone = load_cone(args.cone)
    beta = _vector(args.beta, "--beta")
    rays = [[int(x) for x in _vector(r, "--ray")] for r in args.ray]
    cert = cartier_klt(cone, beta, rays)
    return {
        "interior_point": list(cert.interior_point),
        "is_r_cartier": cert.is_r_cartier,
        "discrepancies": {",".join(map(str, k)): v for k, v in cert.discrepancies.items()},
        "is_klt": cert.is_klt,
        "is_q_gorenstein": cert.is_q_gorenstein,
    }


def cmd_fixtures(args):
    if args.action == "list":
        return [f.to_json() for f in fixtures.FIXTURES.values()]
    if args.action == "run":
        if not args.name:
            raise ConeFileError("fixtures run needs a fixture name")
        try:
            results = [fixtures.run_fixture(args.name)]
        except KeyError as exc:
            raise ConeFileError(str(exc.args[0])) from None
    else:
        results = fixtures.run_all()
    failed = [c for r in results for c in r["checks"] if not c["passed"]]
    if failed:
        first = FixtureCheckFailed(failed[0]["check"], citation=failed[0]["citation"])
        raise _Negative(results, f"{len(failed)} fixture check(s) failed; first: {first} ({first.citation})")
    return results


class _Negative(Exception):
    """Carries a JSON payload out of a command that answers in the negative."""

    def __init__(self, payload, message):
        super().__init__(message)
        self.payload = payload


def build_parser():
    p = argparse.ArgumentParser(
        prog="toric-angles",
        description="Reeb vectors and cone angles of toric Calabi-Yau cone metrics.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def cone_cmd(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("cone", help="cone JSON file, or fixture:<name>")
        sp.set_defaults(func=func)
        return sp

    cone_cmd("check-good", cmd_check_good, "validate a cone and list its rays")
    cone_cmd("dual", cmd_dual, "extreme rays of the dual cone")
    sp = cone_cmd("angles-cone", cmd_angles_cone, "membership in the angles' cone")
    sp.add_argument("--beta", required=True)
    sp = cone_cmd("reeb-to-angles", cmd_reeb_to_angles, "cone angles of a Reeb vector")
    sp.add_argument("--xi", required=True)
    sp.add_argument("--exact", action="store_true", help="rational arithmetic, p/q output")
    sp = cone_cmd("angles-to-reeb", cmd_angles_to_reeb, "Reeb vector of an angle vector")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    sp.add_argument("--xi0", default=None, help="initial Reeb vector")
    sp.add_argument("--certify", action="store_true", help="exact residuals at the result")
    sp = cone_cmd("volume", cmd_volume, "volume and barycenter of the slice")
    sp.add_argument("--xi", required=True)
    sp = cone_cmd("futaki", cmd_futaki, "log Futaki invariant and scalar curvature integrals")
    sp.add_argument("--xi", required=True)
    sp.add_argument("--beta", required=True)
    sp = cone_cmd("scalar", cmd_scalar, "scalar curvature of the canonical potential")
    sp.add_argument("--xi", required=True)
    sp.add_argument("--beta", required=True)
    sp.add_argument("--point", default=None)
    sp.add_argument("--step", type=float, default=1e-3)
    sp = cone_cmd("klt", cmd_klt, "Cartier witness and discrepancies")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--ray", action="append", default=[], help="interior ray; repeatable")

    sp = sub.add_parser("fixtures", help="bundled example cones")
    sp.add_argument("action", nargs="?", default="list", choices=["list", "run", "run-all"])
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_fixtures)
    return p


def _exact_output(args):
    return args.command != "reeb-to-angles" or args.exact


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "tol", None) is None and args.command == "angles-to-reeb":
        try:
            args.tol = default_tol()
        except ValueError:
            print("error: TORIC_CY_TOL is not a number", file=sys.stderr)
            return EXIT_INPUT
    try:
        result = args.func(args)
    except _Negative as neg:
        print(dumps(neg.payload, exact=_exact_output(args)))
        print(f"error: {neg}", file=sys.stderr)
        return EXIT_NEGATIVE
    except ToricError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("eta", "pairing", "ray", "facets", "divisors", "last_iterate", "citation"):
            if getattr(exc, attr, None) is not None:
                payload[attr] = getattr(exc, attr)
        print(dumps(payload))
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, MathematicalNegative):
            return EXIT_NEGATIVE
        if isinstance(exc, SolverFailure):
            return EXIT_SOLVER
        return EXIT_INPUT
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(dumps(result, exact=_exact_output(args)))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
