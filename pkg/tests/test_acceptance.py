"""Acceptance gate: one test per headline criterion, each timed against its
budget and reported as a single PASS/FAIL line."""

import contextlib
import math
import time
from fractions import Fraction as F

import numpy as np
import pytest

from oracles import central_gradient, central_jacobian, random_angles, random_reeb
from toric_angles import _linalg as la
from toric_angles import correspondence as cr
from toric_angles import invariants as inv
from toric_angles import lattice_cone as lc
from toric_angles import polytope as pt
from toric_angles import potential as po
from toric_angles.fixtures import FIXTURES

NAMES = sorted(FIXTURES)


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(label, budget):
        start = time.perf_counter()
        ok, note = False, ""
        try:
            yield
            elapsed = time.perf_counter() - start
            ok = elapsed < budget
            note = f"{elapsed:.2f}s of {budget:g}s"
        except AssertionError as exc:
            note = f"assertion failed: {exc}"
            raise
        finally:
            if not note:
                note = "error"
            with capsys.disabled():
                print(f"\n[{'PASS' if ok else 'FAIL'}] {label} ({note})")
        assert ok, f"{label} exceeded {budget}s"

    return run


def octant(dim):
    return lc.check_good([[int(i == j) for j in range(dim)] for i in range(dim)])


def test_dp1_exact(cones, criterion):
    with criterion("dP1 correspondence, exact", 1):
        beta = cr.reeb_to_angles(cones["dp1"], (F(0), F(0), F(3))).beta
        assert beta == (F(13, 12), F(7, 6), F(13, 12), F(5, 6))


def test_dp2_exact(cones, criterion):
    with criterion("dP2 correspondence, exact", 1):
        beta = cr.reeb_to_angles(cones["dp2"], (F(0), F(0), F(3))).beta
        assert beta == (F(19, 21), F(23, 21), F(19, 21), F(23, 21), F(25, 21))


def test_dp3_inverse(cones, criterion):
    with criterion("dP3 inverse, numerical", 1):
        xi = cr.angles_to_reeb(cones["dp3"], [1] * 6).xi
        assert max(abs(a - b) for a, b in zip(xi, (0, 0, 3))) < 1e-9


def test_flat_model(rng, criterion):
    with criterion("flat model, n <= 4", 5):
        for dim in (2, 3, 4, 5):
            cone = octant(dim)
            for _ in range(100):
                beta = tuple(F(rng.randint(1, 30), rng.randint(1, 30)) for _ in range(dim))
                xi = tuple(1 / b for b in beta)
                assert cr.reeb_to_angles(cone, xi).beta == beta
                back = cr.angles_to_reeb(cone, beta).xi
                assert max(abs(a - float(b)) for a, b in zip(back, xi)) < 1e-9


def test_conifold_volume(cones, rng, criterion):
    with criterion("conifold volume formula", 1):
        vf = cr.build_volume_function(cones["conifold"])
        ratios = set()
        for _ in range(10):
            x1, x2 = F(rng.randint(1, 9), rng.randint(1, 9)), F(rng.randint(1, 9), rng.randint(1, 9))
            x3 = max(x1, x2) + F(rng.randint(1, 9), rng.randint(1, 9))
            ratios.add(vf((x1, x2, x3)) * x1 * x2 * (x3 - x2) * (x3 - x1) / x3)
        assert ratios == {F(1, 48)}


def test_r_invariants(cones, criterion):
    with criterion("R-invariants", 1):
        assert inv.r_invariant(cones["dp1"]).value == F(6, 7)
        assert inv.r_invariant(cones["dp2"]).value == F(21, 25)
        r = inv.r_invariant(cones["dp1_polarized"])
        assert r.value == F(9, 7)
        target = (F(5, 9), F(7, 9), F(4, 9), F(7, 9))
        assert len({b / t for b, t in zip(r.beta, target)}) == 1


def test_ypq_relation(criterion):
    with criterion("Y^{p,q} angles' cone relation", 1):
        for p, q in [(2, 1), (3, 1), (3, 2)]:
            cone = lc.check_good([[1, 0, 0], [1, p - q - 1, p - q], [1, p, p], [1, 1, 0]])
            assert lc.kernel_basis(cone) == [la.primitive((p + q, -p, p - q, -p))]


def test_three_sphere_volumes(rng, criterion):
    with criterion("S^3 volume identity", 1):
        cone = octant(2)
        for _ in range(20):
            b1, b2 = F(rng.randint(1, 20), rng.randint(1, 20)), F(rng.randint(1, 20), rng.randint(1, 20))
            out = inv.integrated_scalar_identity(cone, (1 / b1, 1 / b2), (b1, b2))
            assert out.link_volume == pt.PiMultiple(2 * b1 * b2, 2)
            assert out.is_pair and out.balance_lhs == out.balance_rhs


def test_property_suite(cones, rng, criterion):
    with criterion("property suite (a)-(g)", 60):
        for name in NAMES:
            cone = cones[name]
            vf = cr.build_volume_function(cone)
            # (a) round trips, both directions
            for _ in range(100):
                xi = random_reeb(cone, rng)
                back = cr.angles_to_reeb(cone, cr.reeb_to_angles(cone, xi).beta).xi
                assert max(abs(a - float(b)) for a, b in zip(back, xi)) < 1e-9 * max(abs(float(b)) for b in xi)
                beta, _ = random_angles(cone, rng)
                again = cr.reeb_to_angles(cone, cr.angles_to_reeb(cone, beta).xi).beta
                assert max(abs(a - float(b)) for a, b in zip(again, beta)) < 1e-9 * float(max(beta))
            # (b) homogeneity of both maps
            xi = random_reeb(cone, rng)
            t = F(rng.randint(2, 9), rng.randint(1, 9))
            assert cr.reeb_to_angles(cone, [t * x for x in xi]).beta == tuple(
                b / t for b in cr.reeb_to_angles(cone, xi).beta
            )
            beta, _ = random_angles(cone, rng)
            x1 = np.array(cr.angles_to_reeb(cone, beta).xi)
            x2 = np.array(cr.angles_to_reeb(cone, [t * b for b in beta]).xi)
            assert np.max(np.abs(x2 - x1 / float(t))) < 1e-9 * np.max(np.abs(x1))
            # (c) gradient and Hessian against finite differences
            for _ in range(10):
                xf = np.array([float(x) for x in random_reeb(cone, rng)])
                h = 1e-5 * np.linalg.norm(xf)
                _, g, H = vf.evaluate_np(xf)
                fd_g = central_gradient(vf.value_np, xf, h)
                fd_H = central_jacobian(lambda x: vf.evaluate_np(x)[1], xf, h)
                assert np.max(np.abs(fd_g - g)) / np.max(np.abs(g)) < 1e-6
                assert np.max(np.abs(fd_H - H)) / np.max(np.abs(H)) < 1e-6
            # (d) Futaki vanishes at solver output, not at a perturbation of it
            beta, _ = random_angles(cone, rng)
            res = cr.angles_to_reeb(cone, beta)
            assert inv.log_futaki(cone, res.xi, beta, tol=100 * cr.DEFAULT_TOL).vanishes
            q = np.array([float(x) for x in res.monotone_point])
            d = cr._slice_basis(q)[:, 0]
            moved = np.array(res.xi) + 1e-2 * np.linalg.norm(res.xi) * d
            rep = inv.log_futaki(cone, moved.tolist(), beta)
            assert max(abs(float(v)) for v in rep.L_values) > 1e-6 and not rep.vanishes
            # (e) Reeb identity of the canonical potential
            xi_f = [float(sum(v[i] for v in cone.normals)) for i in range(cone.dim)]
            pot = po.SymplecticPotential.build("canonical_xi", cone, beta, xi=xi_f)
            for _ in range(1000 // len(NAMES) + 1):
                w = [rng.uniform(0.2, 3) for _ in cone.rays]
                x = [sum(c * u[i] for c, u in zip(w, cone.rays)) for i in range(cone.dim)]
                assert po.metric_at(pot, x).reeb_check < 1e-13 * math.hypot(*xi_f)
            # (g) klt discrepancies on random angles, interior rays from the normals
            rays = []
            for _ in range(3):
                w = [rng.randint(1, 3) for _ in cone.normals]
                rays.append(tuple(sum(c * v[i] for c, v in zip(w, cone.normals)) for i in range(cone.dim)))
            for _ in range(1000 // len(NAMES) + 1):
                b, _ = random_angles(cone, rng, hi=40, den=20)
                cert = lc.cartier_klt(cone, b, rays)
                assert all(a > -1 for a in cert.discrepancies.values())
        # (f) flat scalar curvature
        for dim in (2, 3, 4):
            beta = [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(dim)]
            pot = po.SymplecticPotential.build("guillemin_beta", octant(dim), beta)
            for _ in range(5):
                x = [rng.uniform(0.5, 3) for _ in range(dim)]
                assert abs(po.abreu_scalar_curvature(pot, x, 1e-3).value) < 1e-6
