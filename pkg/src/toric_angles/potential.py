"""Symplectic potentials on the moment cone.

Two families are supported:

* ``guillemin_beta``: ``G = 1/2 sum_a beta_a^{-1} l_a log l_a``;
* ``canonical_xi``: the same plus ``1/2 l_xi log l_xi - 1/2 l_inf log l_inf``
  with ``l_xi = <xi, .>`` and ``l_inf = sum_a beta_a^{-1} l_a``.

Every piece is ``c/2 f log f`` for a linear ``f = <v, .>``, contributing
``c/2 v (1 + log f)`` to the gradient and ``c/2 v v^T / f`` to the Hessian.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _linalg as la
from .exceptions import OutsideCone, SingularHessian, StepTooLarge
from .validation import check_angle_vector, check_vector

KINDS = ("guillemin_beta", "canonical_xi")


@dataclass(frozen=True)
class SymplecticPotential:
    kind: str
    cone: object
    beta: tuple
    xi: tuple = None
    pieces: tuple = field(default=(), repr=False)  # (c, v) with term c/2 <v,x> log <v,x>

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}; expected one of {KINDS}")

    @classmethod
    def build(cls, kind, cone, beta, xi=None):
        beta = check_angle_vector(beta, cone.d)
        pieces = [(1 / b, tuple(v)) for b, v in zip(beta, cone.normals)]
        if kind == "canonical_xi":
            if xi is None:
                raise ValueError("canonical_xi potentials need a Reeb vector")
            xi = check_vector(xi, cone.dim, "Reeb vector")
            l_inf = [sum(v[i] / b for b, v in zip(beta, cone.normals)) for i in range(cone.dim)]
            pieces += [(1, tuple(xi)), (-1, tuple(l_inf))]
        return cls(kind, cone, beta, xi, tuple(pieces))

    def _values(self, x):
        out = []
        for c, v in self.pieces:
            f = la.dot(v, x)
            if not f > 0:
                raise OutsideCone(f"point {list(x)} is not in the interior of the cone")
            out.append(f)
        return out

    def evaluate(self, x):
        """Value, gradient and Hessian at ``x`` (floats; gradient uses logarithms)."""
        x = [float(t) for t in x]
        return self._assemble(x, log=True)

    def hessian(self, x):
        """Hessian only; exact for rational ``x``."""
        return self._assemble(list(x), log=False)[2]

    def _assemble(self, x, log):
        dim = self.cone.dim
        fs = self._values(x)
        value = 0.0
        grad = [0.0] * dim
        H = [[0 * x[0]] * dim for _ in range(dim)]
        for (c, v), f in zip(self.pieces, fs):
            if log:
                lf = math.log(f)
                value += 0.5 * float(c) * f * lf
                grad = [g + 0.5 * float(c) * vi * (1 + lf) for g, vi in zip(grad, v)]
            for i in range(dim):
                for j in range(dim):
                    H[i][j] = H[i][j] + c * v[i] * v[j] / (2 * f)
        return value, tuple(grad), tuple(tuple(r) for r in H)


def eval_potential(pot, x):
    x = check_vector(x, pot.cone.dim, "point")
    return pot.evaluate(x)


@dataclass(frozen=True)
class MetricSample:
    point: tuple
    hessian: np.ndarray
    inverse: np.ndarray
    condition: float
    reeb_vector: np.ndarray  # 2 G_ij x_i
    reeb_check: float  # |2 Hess x - xi|, canonical_xi only

    def metric(self):
        """Block diagonal ``G_ij dx dx + G^ij dtheta dtheta`` in (x, theta) order."""
        dim = len(self.point)
        g = np.zeros((2 * dim, 2 * dim))
        g[:dim, :dim] = self.hessian
        g[dim:, dim:] = self.inverse
        return g


def metric_at(pot, x, max_condition=1e12):
    x = check_vector(x, pot.cone.dim, "point", exact=False)
    H = np.array(pot.evaluate(x)[2])
    cond = float(np.linalg.cond(H))
    if not cond < max_condition:
        raise SingularHessian(f"Hessian condition number {cond:.3e} exceeds {max_condition:.0e}")
    inv = np.linalg.inv(H)
    reeb = 2 * H @ np.array(x)
    check = float("nan")
    if pot.xi is not None:
        check = float(np.linalg.norm(reeb - np.array(pot.xi, dtype=float)))
    return MetricSample(tuple(x), H, inv, cond, reeb, check)


def _inverse_hessian(pot, x):
    return np.linalg.inv(np.array(pot.hessian([float(t) for t in x]), dtype=float))


def _abreu(pot, x, h):
    # R = -sum_ij d_i d_j G^{ij}: central second differences for diagonal
    # entries, the four point mixed stencil otherwise
    dim = len(x)
    e = np.eye(dim) * h
    Ginv = lambda y: _inverse_hessian(pot, y)
    g0 = Ginv(x)
    total = 0.0
    for i in range(dim):
        total += (Ginv(x + e[i])[i, i] - 2 * g0[i, i] + Ginv(x - e[i])[i, i]) / h ** 2
        for j in range(i + 1, dim):
            mixed = (
                Ginv(x + e[i] + e[j])[i, j]
                - Ginv(x + e[i] - e[j])[i, j]
                - Ginv(x - e[i] + e[j])[i, j]
                + Ginv(x - e[i] - e[j])[i, j]
            ) / (4 * h ** 2)
            total += 2 * mixed
    return -total


@dataclass(frozen=True)
class ScalarCurvatureEstimate:
    value: float  # estimate at step h/2, Richardson corrected
    coarse: float  # estimate at step h
    fine: float  # estimate at step h/2
    error: float  # |fine - coarse| / 3, second order Richardson indicator


def abreu_scalar_curvature(pot, x, h=1e-3):
    x = np.array(check_vector(x, pot.cone.dim, "point", exact=False))
    if not h > 0:
        raise ValueError("step must be positive")
    for v in pot.cone.normals:
        if la.dot(v, x) <= 10 * h * math.sqrt(la.dot(v, v)):
            raise StepTooLarge(
                f"point is within 10 steps of the facet with normal {list(v)}; reduce the step"
            )
    coarse = float(_abreu(pot, x, h))
    fine = float(_abreu(pot, x, h / 2))
    return ScalarCurvatureEstimate(fine + (fine - coarse) / 3, coarse, fine, abs(fine - coarse) / 3)
