"""Bundled example cones with known values.

Every check carries a citation string naming the worked example it
reproduces. ``run_fixture`` evaluates the checks of one cone;
``run_all`` evaluates every cone in name order.
"""

from dataclasses import dataclass
from fractions import Fraction as F

from . import _linalg as la
from . import lattice_cone as lc
from .correspondence import angles_to_reeb, build_volume_function, reeb_to_angles
from .invariants import r_invariant


@dataclass(frozen=True)
class Check:
    description: str
    citation: str
    run: object  # cone -> (passed, detail)


@dataclass(frozen=True)
class Fixture:
    name: str
    normals: tuple
    provenance: str
    checks: tuple = ()

    def cone(self):
        return lc.check_good(self.normals, name=self.name)

    def to_json(self):
        return {
            "name": self.name,
            "dim": len(self.normals[0]),
            "normals": [list(v) for v in self.normals],
            "provenance": self.provenance,
        }


def _forward(xi, beta):
    beta = tuple(F(b) for b in beta)

    def run(cone):
        got = reeb_to_angles(cone, [F(x) for x in xi]).beta
        return got == beta, {"beta": got}

    return run


def _backward(beta, xi, atol=1e-9):
    def run(cone):
        got = angles_to_reeb(cone, beta).xi
        err = max(abs(a - float(b)) for a, b in zip(got, xi))
        return err < atol, {"xi": got, "error": err}

    return run


def _relation(eta):
    # eta is in the kernel of A^T: sum_a eta_a beta_a = 0 cuts out the angles' cone
    def run(cone):
        basis = lc.kernel_basis(cone)
        in_kernel = all(la.dot([v[i] for v in cone.normals], eta) == 0 for i in range(cone.dim))
        return in_kernel and len(basis) >= 1, {"eta": list(eta), "kernel_basis": basis}

    return run


def _kernel_is(eta):
    def run(cone):
        basis = lc.kernel_basis(cone)
        return basis == [tuple(eta)], {"kernel_basis": basis}

    return run


def _r_value(value, beta=None):
    def run(cone):
        r = r_invariant(cone)
        ok = r.value == value and (beta is None or r.beta == tuple(beta))
        return ok, {"R": r.value, "beta": r.beta}

    return run


def _q_gorenstein(expected):
    def run(cone):
        got = lc.is_q_gorenstein(cone)
        return got == expected, {"q_gorenstein": got}

    return run


def _klt(beta, ray, witness, discrepancy):
    def run(cone):
        cert = lc.cartier_klt(cone, beta, [ray])
        d = cert.discrepancies[tuple(ray)]
        ok = cert.interior_point == tuple(witness) and d == discrepancy and cert.is_klt
        return ok, {"p": cert.interior_point, "discrepancy": d}

    return run


def _conifold_volume(cone):
    # the closed form, up to one constant, at sample points of the Reeb cone
    vf = build_volume_function(cone)
    ratios = set()
    for xi in [(1, 1, 3), (1, 2, 4), (F(1, 2), F(1, 3), 1), (2, 3, 7), (F(3, 2), 1, 5)]:
        x1, x2, x3 = (F(t) for t in xi)
        closed = x3 / (x1 * x2 * (x3 - x2) * (x3 - x1))
        ratios.add(vf((x1, x2, x3)) / closed)
    return len(ratios) == 1, {"constant": next(iter(ratios)) if len(ratios) == 1 else sorted(ratios)}


def _flat(dim):
    def run(cone):
        beta = tuple(F(k + 1, k + 2) for k in range(dim))
        xi = tuple(1 / b for b in beta)
        fwd = reeb_to_angles(cone, xi).beta
        back = angles_to_reeb(cone, beta).xi
        err = max(abs(a - float(b)) for a, b in zip(back, xi))
        return fwd == beta and err < 1e-9, {"beta": fwd, "xi": back}

    return run


FLAT = "flat model: the octant with Reeb vector (1/beta_1, ..., 1/beta_{n+1})"
P1P1 = "cone over P1 x P1: beta_1 + beta_3 = beta_2 + beta_4"
DP1 = "dP1: barycenter angles (13/12, 7/6, 13/12, 5/6) at Reeb vector (0,0,3), R = 6/7"
DP2 = "dP2: barycenter angles (19/21, 23/21, 19/21, 23/21, 25/21), R = 21/25"
DP3 = "dP3: equal angles correspond to the regular Reeb vector (0,0,3)"
CONIFOLD = "conifold subcone of the P1 x P1 cone"
OAB = "O(a,b) over P1 x P1: Reeb vector (0,0,3) and angles (a/2, b/2, a/2, b/2)"
POLAR = "dP1 with polarization D1 + 2 D2: angles (5/9, 7/9, 4/9, 7/9), R = 9/7"
YPQ = "Y^{p,q}: (p+q) beta_1 + (p-q) beta_3 = p beta_2 + p beta_4"


def _octant(dim):
    normals = tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))
    ones = tuple([1] * dim)
    return Fixture(
        f"octant{dim}",
        normals,
        f"C^{dim}, the flat cone",
        (
            Check("forward map at (1,...,1)", FLAT, _forward(ones, ones)),
            Check("both directions at beta_k = (k+1)/(k+2)", FLAT, _flat(dim)),
            Check("Q-Gorenstein", FLAT, _q_gorenstein(True)),
        ),
    )


def _ypq(p, q):
    normals = ((1, 0, 0), (1, p - q - 1, p - q), (1, p, p), (1, 1, 0))
    return Fixture(
        f"ypq_{p}_{q}",
        normals,
        f"Y^{{{p},{q}}} toric Calabi-Yau cone",
        (
            Check("kernel relation", YPQ, _kernel_is(la.primitive((p + q, -p, p - q, -p)))),
            Check("Q-Gorenstein", YPQ, _q_gorenstein(True)),
        ),
    )


def _build():
    out = [_octant(k) for k in (2, 3, 4, 5)]
    out.append(Fixture(
        "p1p1",
        ((1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)),
        "anticanonical cone over P1 x P1",
        (
            Check("kernel relation", P1P1, _kernel_is((1, -1, 1, -1))),
            Check("regular Reeb vector gives equal angles", P1P1, _forward((0, 0, 3), (1, 1, 1, 1))),
        ),
    ))
    out.append(Fixture(
        "dp1",
        ((1, 0, 1), (0, -1, 1), (-1, -1, 1), (0, 1, 1)),
        "anticanonical cone over the blow up of P2 at one point",
        (
            Check("forward map at (0,0,3)", DP1,
                  _forward((0, 0, 3), (F(13, 12), F(7, 6), F(13, 12), F(5, 6)))),
            Check("R-invariant", DP1, _r_value(F(6, 7))),
            Check("kernel relation 2 b1 + 2 b3 = 3 b2 + b4", DP1, _kernel_is((2, -3, 2, -1))),
            Check("backward map at the barycenter angles", DP1,
                  _backward((F(13, 12), F(7, 6), F(13, 12), F(5, 6)), (0, 0, 3))),
        ),
    ))
    out.append(Fixture(
        "dp2",
        ((1, 0, 1), (0, -1, 1), (0, 1, 1), (-1, 0, 1), (-1, -1, 1)),
        "anticanonical cone over the blow up of P2 at two points",
        (
            Check("forward map at (0,0,3)", DP2,
                  _forward((0, 0, 3), (F(19, 21), F(23, 21), F(19, 21), F(23, 21), F(25, 21)))),
            Check("R-invariant", DP2, _r_value(F(21, 25))),
            Check("relation b1 + 3 b4 = 2 b3 + 2 b5", DP2, _relation((1, 0, -2, 3, -2))),
            Check("relation b2 + 2 b4 = b3 + 2 b5", DP2, _relation((0, 1, -1, 2, -2))),
        ),
    ))
    out.append(Fixture(
        "dp3",
        ((1, 0, 1), (0, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, 0, 1), (0, -1, 1)),
        "anticanonical cone over the blow up of P2 at three points",
        (
            Check("backward map at equal angles", DP3, _backward((1,) * 6, (0, 0, 3))),
            Check("forward map at (0,0,3)", DP3, _forward((0, 0, 3), (1,) * 6)),
            Check("relation b1 + 3 b5 = 2 b4 + 2 b6", DP3, _relation((1, 0, 0, -2, 3, -2))),
            Check("relation b2 + 2 b5 = 2 b4 + b6", DP3, _relation((0, 1, 0, -2, 2, -1))),
        ),
    ))
    out.append(Fixture(
        "conifold",
        ((0, 0, 1), (0, 1, 1), (1, 1, 1), (1, 0, 1)),
        "conifold, the double cover of the P1 x P1 cone",
        (
            Check("volume proportional to x3 / (x1 x2 (x3 - x2) (x3 - x1))", CONIFOLD, _conifold_volume),
            Check("Cartier witness and discrepancy of (1,1,2)", CONIFOLD,
                  _klt((1, 1, 1, 1), (1, 1, 2), (0, 0, 1), 1)),
        ),
    ))
    out.append(Fixture(
        "oab_1_2",
        ((1, 0, 0), (0, 1, 0), (-1, 0, 1), (0, -1, 2)),
        "cone over the rectangle [0,1] x [0,2]",
        (
            Check("regular Reeb vector", OAB, _forward((0, 0, 3), (F(1, 2), 1, F(1, 2), 1))),
            Check("not Q-Gorenstein", OAB, _q_gorenstein(False)),
        ),
    ))
    out.append(Fixture(
        "dp1_polarized",
        ((1, 0, -1), (1, -1, 0), (-1, 0, 2), (0, 1, 0)),
        "cone over the quadrilateral (1,0), (1,1), (2,2), (2,0)",
        (
            Check("R-invariant and angles", POLAR,
                  _r_value(F(9, 7), (F(5, 9), F(7, 9), F(4, 9), F(7, 9)))),
            Check("not Q-Gorenstein", POLAR, _q_gorenstein(False)),
        ),
    ))
    out += [_ypq(2, 1), _ypq(3, 1), _ypq(3, 2)]
    return {f.name: f for f in sorted(out, key=lambda f: f.name)}


FIXTURES = _build()


def get(name):
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


def run_fixture(name):
    fx = get(name)
    cone = fx.cone()
    results = []
    for check in fx.checks:
        try:
            passed, detail = check.run(cone)
        except Exception as exc:  # reported, not raised: run-all must finish
            passed, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        results.append({
            "check": check.description,
            "citation": check.citation,
            "passed": bool(passed),
            "detail": detail,
        })
    return {"name": name, "passed": all(r["passed"] for r in results), "checks": results}


def run_all():
    return [run_fixture(name) for name in sorted(FIXTURES)]
