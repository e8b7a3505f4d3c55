import math
from fractions import Fraction as F

import numpy as np
import pytest

from oracles import central_gradient, central_jacobian, random_angles, random_reeb
from toric_angles import _linalg as la
from toric_angles import correspondence as cr
from toric_angles import lattice_cone as lc
from toric_angles import polytope as pt
from toric_angles.exceptions import (
    MaxIterations,
    NotInAnglesCone,
    ReebNotInterior,
    SolverFailure,
)
from toric_angles.fixtures import FIXTURES

NAMES = sorted(FIXTURES)


def octant(dim):
    return lc.check_good([[int(i == j) for j in range(dim)] for i in range(dim)])


def rel_err(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


# fixed values


def test_dp1_forward_exact(cones):
    res = cr.reeb_to_angles(cones["dp1"], (F(0), F(0), F(3)))
    assert res.beta == (F(13, 12), F(7, 6), F(13, 12), F(5, 6))
    assert all(isinstance(b, F) for b in res.beta)


def test_dp2_forward_exact(cones):
    res = cr.reeb_to_angles(cones["dp2"], (F(0), F(0), F(3)))
    assert res.beta == (F(19, 21), F(23, 21), F(19, 21), F(23, 21), F(25, 21))


def test_dp3_backward(cones):
    res = cr.angles_to_reeb(cones["dp3"], [1] * 6)
    assert max(abs(a - b) for a, b in zip(res.xi, (0, 0, 3))) < 1e-9


def test_dp3_forward_equal_angles(cones):
    assert cr.reeb_to_angles(cones["dp3"], (F(0), F(0), F(3))).beta == (1,) * 6


@pytest.mark.parametrize("dim", [2, 3, 4, 5])
def test_flat_model_both_directions(dim, rng):
    cone = octant(dim)
    for _ in range(100):
        beta = tuple(F(rng.randint(1, 30), rng.randint(1, 30)) for _ in range(dim))
        xi = tuple(1 / b for b in beta)
        assert cr.reeb_to_angles(cone, xi).beta == beta
        back = cr.angles_to_reeb(cone, beta).xi
        assert max(abs(a - float(b)) for a, b in zip(back, xi)) < 1e-9


def test_conifold_volume_closed_form(cones, rng):
    # hand value: at xi = (1, 1, 3) the truncated cone splits into two
    # tetrahedra of volumes 1/192 and 1/96, total 1/64 = c * 3/4
    vf = cr.build_volume_function(cones["conifold"])
    c = F(1, 48)
    for _ in range(10):
        x1, x2 = F(rng.randint(1, 9), rng.randint(1, 9)), F(rng.randint(1, 9), rng.randint(1, 9))
        x3 = max(x1, x2) + F(rng.randint(1, 9), rng.randint(1, 9))
        assert vf((x1, x2, x3)) == c * x3 / (x1 * x2 * (x3 - x2) * (x3 - x1))


def ypq_reeb(p, q):
    # closed form of the Sasaki-Einstein Reeb vector at equal angles
    linv = (3 * q * q - 2 * p * p + p * math.sqrt(4 * p * p - 3 * q * q)) / q
    b = (3 * p - 3 * q + linv) / 2
    return (3.0, b, b)


@pytest.mark.parametrize("p, q", [(2, 1), (3, 1), (3, 2)])
def test_ypq_equal_angles_closed_form(p, q, cones):
    res = cr.angles_to_reeb(cones[f"ypq_{p}_{q}"], [1, 1, 1, 1])
    assert max(abs(a - b) for a, b in zip(res.xi, ypq_reeb(p, q))) < 1e-9


def test_ypq_21_grid_refinement(cones):
    # minimise vol on the slice by successive grid refinement, no derivatives
    cone = cones["ypq_2_1"]
    vf = cr.build_volume_function(cone)
    q = np.array([float(x) for x in cr.monotone_point(cone, [1, 1, 1, 1])])
    N = cr._slice_basis(q)
    base = q * 0.5 / float(q @ q)
    center = np.linalg.lstsq(N, np.array(ypq_reeb(2, 1)) * 1.1 - base, rcond=None)[0]
    width = 1.0
    for _ in range(40):
        grid = np.linspace(-width, width, 21)
        best = None
        for s in grid:
            for t in grid:
                y = center + np.array([s, t])
                val = vf.value_np(base + N @ y)
                if best is None or val < best[0]:
                    best = (val, y)
        center = best[1]
        width /= 4
    xi = base + N @ center
    solver = cr.angles_to_reeb(cone, [1, 1, 1, 1]).xi
    assert np.max(np.abs(xi - np.array(solver))) < 1e-7


@pytest.mark.parametrize("name", ["dp1", "dp3", "ypq_3_2", "oab_1_2", "octant4"])
def test_solution_minimises_volume_and_matches_barycenter(name, cones, rng):
    cone = cones[name]
    beta, p = random_angles(cone, rng)
    res = cr.angles_to_reeb(cone, beta)
    q = np.array([float(x) for x in res.monotone_point])
    assert np.max(np.abs(np.array(res.barycenter) - q)) < 1e-12
    vf = cr.build_volume_function(cone)
    V0 = vf.value_np(res.xi)
    N = cr._slice_basis(q)
    for _ in range(20):
        d = N @ np.array([rng.uniform(-1, 1) for _ in range(N.shape[1])])
        xi = np.array(res.xi) + 1e-2 * d * np.linalg.norm(res.xi) / np.linalg.norm(d)
        assert abs(float(xi @ q) - 0.5) < 1e-12
        assert vf.value_np(xi) > V0
        bary = pt.moments(pt.slice(cone, xi.tolist())).barycenter
        assert np.linalg.norm(np.array(bary) - q) > 1e-6


# volume function


@pytest.mark.parametrize("name", NAMES)
def test_volume_function_matches_slice(name, cones, rng):
    cone = cones[name]
    vf = cr.build_volume_function(cone)
    for _ in range(20):
        xi = random_reeb(cone, rng)
        P = pt.slice(cone, xi)
        m = pt.moments(P)
        assert vf(xi) == m.euclid_volume_delta
        # cone over P_xi: height (1/2)/|xi|, area chart * |xi| / |xi_k|
        assert vf(xi) == m.volume / (2 * cone.dim * abs(xi[P.drop]))


@pytest.mark.parametrize("name", NAMES)
def test_volume_function_independent_of_triangulation(name, cones, rng):
    cone = cones[name]
    xi = random_reeb(cone, rng)
    P = pt.slice(cone, xi, order=tuple(reversed(range(len(cone.rays)))))
    assert cr.build_volume_function(cone)(xi) == pt.euclid_volume_delta(P)


@pytest.mark.parametrize("name", NAMES)
def test_gradient_is_barycenter(name, cones, rng):
    cone = cones[name]
    vf = cr.build_volume_function(cone)
    for _ in range(5):
        xi = random_reeb(cone, rng)
        bary = pt.moments(pt.slice(cone, xi)).barycenter
        V = vf(xi)
        assert vf.gradient(xi) == tuple(-2 * cone.dim * V * b for b in bary)


@pytest.mark.parametrize("name", NAMES)
def test_gradient_and_hessian_against_finite_differences(name, cones, rng):
    cone = cones[name]
    vf = cr.build_volume_function(cone)
    for _ in range(50):
        xi = np.array([float(x) for x in random_reeb(cone, rng)])
        h = 1e-5 * np.linalg.norm(xi)
        V, g, H = vf.evaluate_np(xi)
        assert rel_err(central_gradient(vf.value_np, xi, h), g) < 1e-6
        Hfd = central_jacobian(lambda x: vf.evaluate_np(x)[1], xi, h)
        assert rel_err(Hfd, H) < 1e-6
        assert rel_err(vf.gradient(xi.tolist()), g) < 1e-12


@pytest.mark.parametrize("name", NAMES)
def test_volume_homogeneity_and_euler(name, cones, rng):
    cone = cones[name]
    vf = cr.build_volume_function(cone)
    xi = random_reeb(cone, rng)
    t = F(rng.randint(2, 9), rng.randint(1, 9))
    assert vf([t * x for x in xi]) == vf(xi) / t ** cone.dim
    assert la.dot(vf.gradient(xi), xi) == -cone.dim * vf(xi)


# round trips and homogeneity


@pytest.mark.parametrize("name", NAMES)
def test_round_trip_from_reeb(name, cones, rng):
    cone = cones[name]
    for _ in range(100):
        xi = random_reeb(cone, rng)
        beta = cr.reeb_to_angles(cone, xi).beta
        back = cr.angles_to_reeb(cone, beta).xi
        assert rel_err(back, [float(x) for x in xi]) < 1e-9


@pytest.mark.parametrize("name", NAMES)
def test_round_trip_from_angles(name, cones, rng):
    cone = cones[name]
    for _ in range(100):
        beta, _ = random_angles(cone, rng)
        xi = cr.angles_to_reeb(cone, beta).xi
        again = cr.reeb_to_angles(cone, xi).beta
        assert rel_err(again, [float(b) for b in beta]) < 1e-9


@pytest.mark.parametrize("name", NAMES)
def test_both_maps_are_minus_one_homogeneous(name, cones, rng):
    cone = cones[name]
    xi = random_reeb(cone, rng)
    t = F(rng.randint(2, 9), rng.randint(1, 9))
    beta = cr.reeb_to_angles(cone, xi).beta
    assert cr.reeb_to_angles(cone, [t * x for x in xi]).beta == tuple(b / t for b in beta)
    b, _ = random_angles(cone, rng)
    x1 = np.array(cr.angles_to_reeb(cone, b).xi)
    x2 = np.array(cr.angles_to_reeb(cone, [t * v for v in b]).xi)
    assert rel_err(x2, x1 / float(t)) < 1e-9


def test_monotone_point_is_barycenter_at_solution(cones):
    cone = cones["dp1"]
    beta = (F(13, 12), F(7, 6), F(13, 12), F(5, 6))
    q = cr.monotone_point(cone, beta)
    assert q == pt.moments(pt.slice(cone, (F(0), F(0), F(3)))).barycenter


# Weil-Petersson form


@pytest.mark.parametrize("name", ["dp1", "dp2", "ypq_3_1", "octant3", "octant5"])
def test_weil_petersson_hessian(name, cones, rng):
    cone = cones[name]
    vf = cr.build_volume_function(cone)
    for _ in range(10):
        xi = random_reeb(cone, rng)
        H = cr.weil_petersson_hessian(cone, xi)
        g = vf.log_gradient(xi)
        # Euler identities of a degree -(n+1) function
        assert la.dot(g, xi) == -cone.dim
        assert tuple(la.dot(row, xi) for row in H) == tuple(-x for x in g)
        t = F(rng.randint(2, 9), rng.randint(1, 9))
        Ht = cr.weil_petersson_hessian(cone, [t * x for x in xi])
        assert Ht == tuple(tuple(x / t ** 2 for x in row) for row in H)
        Hf = np.array(H, dtype=float)
        assert np.all(np.linalg.eigvalsh(Hf) > 0)
        xf = np.array([float(x) for x in xi])
        fd = central_jacobian(lambda x: np.array(vf.evaluate_np(x)[1]) / vf.value_np(x), xf, 1e-5 * np.linalg.norm(xf))
        assert rel_err(fd, Hf) < 1e-6


# errors and options


def test_angles_outside_the_cone(cones):
    with pytest.raises(NotInAnglesCone) as err:
        cr.angles_to_reeb(cones["dp1"], [2, 1, 1, 1])
    assert err.value.pairing != 0


def test_reeb_outside_the_cone(cones):
    with pytest.raises(ReebNotInterior):
        cr.reeb_to_angles(cones["dp1"], (0, 0, -3))
    with pytest.raises(ReebNotInterior):
        cr.angles_to_reeb(cones["dp1"], [1, 1, 1, 1], xi0=(0, 0, -3))


def test_max_iterations_carries_last_iterate(cones):
    with pytest.raises(MaxIterations) as err:
        cr.angles_to_reeb(cones["ypq_3_2"], [1, 1, 1, 1], max_iter=1)
    assert isinstance(err.value, SolverFailure)
    assert len(err.value.last_iterate) == 3


def test_bad_tolerance(cones):
    with pytest.raises(ValueError):
        cr.angles_to_reeb(cones["dp1"], [1, 1, 1, 1], tol=0)


def test_env_tolerance(cones, monkeypatch):
    monkeypatch.setenv("TORIC_CY_TOL", "1e-6")
    assert cr.default_tol() == 1e-6
    res = cr.angles_to_reeb(cones["dp3"], [1] * 6)
    assert res.residuals["gradient"] < 1e-6
    monkeypatch.delenv("TORIC_CY_TOL")
    assert cr.default_tol() == cr.DEFAULT_TOL


def test_certify_gives_exact_residuals(cones):
    res = cr.angles_to_reeb(cones["dp1_polarized"], [F(5, 9), F(7, 9), F(4, 9), F(7, 9)], certify=True)
    cert = res.certificate
    assert all(isinstance(x, F) for x in cert["xi"])
    assert cert["beta_residual"] < 1e-12
    assert cert["barycenter_residual"] < 1e-12
    assert cert["slice_residual"] < 1e-15


def test_initial_point_does_not_change_answer(cones):
    a = cr.angles_to_reeb(cones["dp2"], [1, 1, 1, 1, 1]).xi
    b = cr.angles_to_reeb(cones["dp2"], [1, 1, 1, 1, 1], xi0=(1, -1, 7)).xi
    assert rel_err(a, b) < 1e-9


def test_result_json(cones):
    out = cr.angles_to_reeb(cones["dp3"], [1] * 6).to_json()
    assert set(out) == {"xi", "beta", "barycenter", "monotone_point", "volume", "residuals", "iterations"}
