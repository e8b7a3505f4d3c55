"""Reeb vectors to cone angles and back.

Forward: ``beta_a = 2(n+1) l_a(bar P_xi)``, exact for rational ``xi``.

Backward: for ``beta`` in the angles' cone with witness ``p`` (``L(p) = beta``)
put ``q = p / (2(n+1))`` and minimise ``vol(Delta_xi)`` over the slice
``{<xi, q> = 1/2}`` of the Reeb cone. The volume is the rational function

    vol(Delta_xi) = sum_sigma c_sigma / prod_i <xi, u_i>

over the simplicial cones of a triangulation, whose gradient satisfies
``grad vol = -2(n+1) vol(Delta_xi) bar(P_xi)``. Its critical points on the
slice are therefore exactly the Reeb vectors with ``bar(P_xi) = q``.
"""

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from . import _linalg as la
from . import polytope as pt
from .exceptions import LineSearchFailure, MaxIterations, ReebNotInterior, VerificationFailure
from .lattice_cone import require_membership
from .validation import check_angle_vector, check_vector, is_exact

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200


def default_tol():
    env = os.environ.get("TORIC_CY_TOL")
    return float(env) if env else DEFAULT_TOL


@dataclass(frozen=True)
class VolumeFunction:
    """``xi -> vol(Delta_xi)`` as a sum of simplicial-cone terms.

    ``terms`` holds ``(c_sigma, (u_1, ..., u_{n+1}))`` pairs. Plain calls
    work in the arithmetic of ``xi`` (exact for Fractions); the ``*_np``
    methods are vectorised float versions used by the solver.
    """

    cone: object
    terms: tuple
    _U: np.ndarray = field(repr=False, compare=False, hash=False)
    _c: np.ndarray = field(repr=False, compare=False, hash=False)

    def _pairings(self, xi):
        out = []
        for _, us in self.terms:
            s = [la.dot(xi, u) for u in us]
            if any(not x > 0 for x in s):
                raise ReebNotInterior(f"{list(xi)} is not in the interior of the dual cone")
            out.append(s)
        return out

    def __call__(self, xi):
        total = 0
        for (c, _), s in zip(self.terms, self._pairings(xi)):
            prod = 1
            for x in s:
                prod = prod * x
            total = total + c / prod
        return total

    def gradient(self, xi):
        dim = self.cone.dim
        g = [0] * dim
        for (c, us), s in zip(self.terms, self._pairings(xi)):
            prod = 1
            for x in s:
                prod = prod * x
            T = c / prod
            for u, x in zip(us, s):
                g = [gi - T * ui / x for gi, ui in zip(g, u)]
        return tuple(g)

    def hessian(self, xi):
        dim = self.cone.dim
        H = [[0] * dim for _ in range(dim)]
        for (c, us), s in zip(self.terms, self._pairings(xi)):
            prod = 1
            for x in s:
                prod = prod * x
            T = c / prod
            w = [[ui / x for ui in u] for u, x in zip(us, s)]
            tot = [sum(col) for col in zip(*w)]
            for i in range(dim):
                for j in range(dim):
                    H[i][j] = H[i][j] + T * (tot[i] * tot[j] + sum(r[i] * r[j] for r in w))
        return tuple(tuple(r) for r in H)

    def log_gradient(self, xi):
        V = self(xi)
        return tuple(g / V for g in self.gradient(xi))

    def log_hessian(self, xi):
        """Hessian of ``log vol``, the Weil-Petersson form on the Reeb cone."""
        V = self(xi)
        g = self.gradient(xi)
        H = self.hessian(xi)
        return tuple(
            tuple(H[i][j] / V - g[i] * g[j] / (V * V) for j in range(len(g)))
            for i in range(len(g))
        )

    def evaluate_np(self, xi):
        """Value, gradient and Hessian at a float ``xi`` (numpy arrays)."""
        xi = np.asarray(xi, dtype=float)
        s = self._U @ xi  # (terms, n+1)
        if np.any(s <= 0):
            raise ReebNotInterior(f"{xi.tolist()} is not in the interior of the dual cone")
        T = self._c / np.prod(s, axis=1)
        w = self._U / s[:, :, None]
        tot = w.sum(axis=1)
        V = T.sum()
        g = -(T[:, None] * tot).sum(axis=0)
        H = np.einsum("t,ti,tj->ij", T, tot, tot) + np.einsum("t,tki,tkj->ij", T, w, w)
        return V, g, H

    def value_np(self, xi):
        s = self._U @ np.asarray(xi, dtype=float)
        if np.any(s <= 0):
            return np.inf
        return float((self._c / np.prod(s, axis=1)).sum())


@lru_cache(maxsize=128)
def build_volume_function(cone):
    simplices, _ = pt._combinatorics(cone, None)
    dim = cone.dim
    const = Fraction(1, 2 ** dim * factorial(dim))
    terms = []
    for s in simplices:
        us = tuple(cone.rays[j] for j in s)
        terms.append((abs(la.det(la.frac_matrix(us))) * const, us))
    U = np.array([[list(u) for u in us] for _, us in terms], dtype=float)
    c = np.array([float(t[0]) for t in terms])
    return VolumeFunction(cone, tuple(terms), U, c)


@dataclass(frozen=True)
class CorrespondenceResult:
    xi: tuple
    beta: tuple
    barycenter: tuple  # bar(P_xi), ambient coordinates
    monotone_point: tuple  # q_beta; equals the barycenter at a solution
    volume: object  # vol(Delta_xi)
    residuals: dict
    iterations: int = 0
    certificate: dict = None

    def to_json(self):
        out = {
            "xi": list(self.xi),
            "beta": list(self.beta),
            "barycenter": list(self.barycenter),
            "monotone_point": list(self.monotone_point),
            "volume": self.volume,
            "residuals": dict(self.residuals),
            "iterations": self.iterations,
        }
        if self.certificate is not None:
            out["certificate"] = dict(self.certificate)
        return out


def _angles_at(cone, xi):
    P = pt.slice(cone, xi)
    m = pt.moments(P)
    k = 2 * cone.dim
    beta = tuple(k * x for x in cone.L(m.barycenter))
    return beta, m


def reeb_to_angles(cone, xi):
    xi = pt.check_reeb(cone, xi)
    beta, m = _angles_at(cone, xi)
    return CorrespondenceResult(
        xi=xi,
        beta=beta,
        barycenter=m.barycenter,
        monotone_point=m.barycenter,
        volume=m.euclid_volume_delta,
        residuals={"barycenter": 0 * xi[0]},
    )


def monotone_point(cone, beta):
    """``q_beta = p / (2(n+1))`` for the witness ``L(p) = beta``."""
    p = require_membership(cone, beta)
    k = 2 * cone.dim
    return tuple(x / k for x in p)


def _slice_basis(q):
    # orthonormal basis of the orthogonal complement of q
    q = q / np.linalg.norm(q)
    _, _, vt = np.linalg.svd(q[None, :])
    return vt[1:].T


def angles_to_reeb(cone, beta, tol=None, max_iter=DEFAULT_MAX_ITER, certify=False, xi0=None):
    """Reeb vector of the Calabi-Yau cone metric with cone angles ``2 pi beta``.

    Damped Newton on the slice ``{<xi, q_beta> = 1/2}``, stopped when the
    scale free gradient ``|N^T grad vol| |xi| / vol`` drops below ``tol``
    (``N`` an orthonormal frame of the slice). The answer is then checked by
    running the forward map through the polytope engine. ``certify`` repeats
    that check in exact arithmetic at the binary value of the result.
    """
    if tol is None:
        tol = default_tol()
    if not tol > 0:
        raise ValueError("tol must be positive")
    beta = check_angle_vector(beta, cone.d)
    q_exact = monotone_point(cone, beta)
    q = np.array([float(x) for x in q_exact])
    vf = build_volume_function(cone)
    rays = np.array(cone.rays, dtype=float)
    N = _slice_basis(q)

    if xi0 is None:
        start = np.zeros(cone.dim)
        for b, v in zip(beta, cone.normals):
            start += np.array(v, dtype=float) / float(b)
    else:
        start = np.array(check_vector(xi0, cone.dim, "initial Reeb vector", exact=False))
        if np.any(rays @ start <= 0):
            raise ReebNotInterior("initial Reeb vector is not in the interior of the dual cone")
    xi = start * (0.5 / float(start @ q))

    V, g, H = vf.evaluate_np(xi)
    iterations = 0
    while True:
        rg = N.T @ g
        crit = float(np.linalg.norm(rg) * np.linalg.norm(xi) / V)
        if crit < tol:
            break
        if iterations >= max_iter:
            raise MaxIterations(
                f"no convergence after {max_iter} Newton steps (gradient {crit:.3e})",
                last_iterate=tuple(xi.tolist()),
            )
        rH = N.T @ H @ N
        try:
            Lc = np.linalg.cholesky(rH)
        except np.linalg.LinAlgError:
            raise LineSearchFailure(
                "volume Hessian not positive definite on the slice", last_iterate=tuple(xi.tolist())
            ) from None
        step = -N @ np.linalg.solve(Lc.T, np.linalg.solve(Lc, rg))
        slope = float(g @ step)
        alpha = 1.0
        slack = 8 * np.finfo(float).eps * V
        while True:
            trial = xi + alpha * step
            if np.all(rays @ trial > 0):
                Vt = vf.value_np(trial)
                if Vt <= V + 1e-4 * alpha * slope + slack:
                    break
            alpha /= 2
            if alpha < 1e-12:
                raise LineSearchFailure(
                    f"line search stalled (gradient {crit:.3e})", last_iterate=tuple(xi.tolist())
                )
        xi = trial
        # stay on the slice despite rounding
        xi = xi + (0.5 - float(xi @ q)) * q / float(q @ q)
        V, g, H = vf.evaluate_np(xi)
        iterations += 1

    xi_out = tuple(float(x) for x in xi)
    beta_f, m = _angles_at(cone, xi_out)
    scale = max(abs(float(b)) for b in beta)
    beta_res = max(abs(a - float(b)) for a, b in zip(beta_f, beta)) / scale
    qn = float(np.linalg.norm(q))
    bary_res = float(np.linalg.norm(np.array(m.barycenter) - q)) / qn
    residuals = {"gradient": crit, "beta": beta_res, "barycenter": bary_res}
    bound = max(10 * tol, 1e-13)
    if beta_res > bound or bary_res > bound:
        raise VerificationFailure(
            f"forward map at the solution misses beta by {beta_res:.3e} "
            f"(barycenter gap {bary_res:.3e})",
            last_iterate=xi_out,
        )
    cert = None
    if certify:
        xq = tuple(Fraction(x) for x in xi_out)
        beta_q, mq = _angles_at(cone, xq)
        b_exact = tuple(Fraction(b) for b in beta)
        cert = {
            "xi": xq,
            "beta_residual": max(abs(a - b) for a, b in zip(beta_q, b_exact)),
            "barycenter_residual": max(abs(a - b) for a, b in zip(mq.barycenter, q_exact)),
            "slice_residual": abs(la.dot(xq, q_exact) - Fraction(1, 2)),
        }
    return CorrespondenceResult(
        xi=xi_out,
        beta=tuple(beta),
        barycenter=m.barycenter,
        monotone_point=tuple(q_exact),
        volume=m.euclid_volume_delta,
        residuals=residuals,
        iterations=iterations,
        certificate=cert,
    )


def weil_petersson_hessian(cone, xi):
    """Hessian of ``xi -> log vol(Delta_xi)``; exact for rational ``xi``."""
    xi = pt.check_reeb(cone, xi)
    return build_volume_function(cone).log_hessian(xi)
