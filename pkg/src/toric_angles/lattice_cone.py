"""Good rational polyhedral cones and their lattice certificates.

A cone is given by primitive inward facet normals ``v_a``; it is the set
``C = {x : <v_a, x> >= 0}``. Extreme rays come from an exact double
description run, faces from the ray/facet incidence, and Lerman's goodness
condition from Smith normal forms of the facet normals at each face.

The angles' cone is the image of ``L(p) = (<v_1,p>, ..., <v_d,p>)``
intersected with the positive orthant; membership is decided exactly and
non-membership comes with a kernel certificate.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import _linalg as la
from .exceptions import (
    DimensionMismatch,
    NotFullDimensional,
    NotGood,
    NotInAnglesCone,
    NotPrimitive,
    NotRCartier,
    NotStrictlyConvex,
    RayOutsideCone,
    RedundantNormal,
)
from .validation import check_angle_vector, check_vector, is_exact


def extreme_rays(inequalities):
    """Extreme rays of the pointed cone ``{x : <a, x> >= 0 for a in inequalities}``.

    Double description method in exact integer arithmetic. Rays are returned
    as primitive integer tuples in lexicographic order. Adjacency of two rays
    is decided combinatorially: their common zero set must not be contained
    in the zero set of any third ray.
    """
    A = [tuple(int(x) for x in row) for row in inequalities]
    if not A:
        raise ValueError("no inequalities")
    dim = len(A[0])
    basis = []
    for i, row in enumerate(A):
        if la.rank([A[j] for j in basis] + [row]) > len(basis):
            basis.append(i)
        if len(basis) == dim:
            break
    if len(basis) < dim:
        raise NotStrictlyConvex("inequalities do not have full rank; the cone contains a line")

    B = la.frac_matrix([A[i] for i in basis])
    # columns of B^{-1}: ray j is tight on every basis row except j
    rays = []
    for j in range(dim):
        e = [Fraction(int(i == j)) for i in range(dim)]
        col = la.solve(B, e)
        rays.append((la.primitive(col), frozenset(basis[i] for i in range(dim) if i != j)))

    for k, a in enumerate(A):
        if k in basis:
            continue
        plus, zero, minus = [], [], []
        for r, z in rays:
            s = la.dot(a, r)
            if s > 0:
                plus.append((r, z, s))
            elif s < 0:
                minus.append((r, z, s))
            else:
                zero.append((r, z | {k}))
        new = []
        for rp, zp, sp in plus:
            for rm, zm, sm in minus:
                common = zp & zm
                if len(common) < dim - 2:
                    continue
                if any(common <= z for r, z in rays if r is not rp and r is not rm):
                    continue
                combo = [sp * y - sm * x for x, y in zip(rp, rm)]
                new.append((la.primitive(combo), common | {k}))
        rays = [(r, z) for r, z, _ in plus] + zero + new

    unique = sorted({r for r, _ in rays})
    return unique


@dataclass(frozen=True)
class GoodCone:
    """A validated good cone. Build it with :func:`check_good`."""

    dim: int
    normals: tuple
    rays: tuple
    incidence: tuple  # incidence[a][j]: ray j lies on facet a
    faces: tuple = field(repr=False)  # (ray index set, facet index set) per face
    name: str = None

    @property
    def d(self):
        return len(self.normals)

    @property
    def n(self):
        return self.dim - 1

    def ell(self, a, x):
        return la.dot(self.normals[a], x)

    def L(self, x):
        """The facet map ``x -> (l_1(x), ..., l_d(x))``."""
        return tuple(la.dot(v, x) for v in self.normals)

    def contains(self, x, strict=False):
        vals = self.L(x)
        return all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals)

    def reeb_pairings(self, xi):
        return tuple(la.dot(xi, u) for u in self.rays)

    def in_reeb_cone(self, xi):
        return all(s > 0 for s in self.reeb_pairings(xi))

    def to_json(self):
        out = {"dim": self.dim, "normals": [list(v) for v in self.normals]}
        if self.name:
            out["name"] = self.name
        return out


def _face_lattice(rays, incidence):
    """Nonempty ray sets of faces, with the facets containing each.

    The apex (empty ray set) is excluded; the full cone is included.
    """
    facet_sets = [frozenset(j for j, on in enumerate(row) if on) for row in incidence]
    faces = {frozenset(range(len(rays)))}
    frontier = [s for s in facet_sets if s]
    while frontier:
        nxt = []
        for f in frontier:
            if f in faces:
                continue
            faces.add(f)
            for s in facet_sets:
                g = f & s
                if g and g not in faces:
                    nxt.append(g)
        frontier = nxt
    out = []
    for f in sorted(faces, key=lambda s: (len(s), sorted(s))):
        containing = frozenset(a for a, s in enumerate(facet_sets) if f <= s)
        out.append((f, containing))
    return tuple(out)


def check_good(normals, name=None):
    """Validate facet normals and return the corresponding :class:`GoodCone`."""
    normals = [tuple(v) for v in normals]
    if not normals:
        raise DimensionMismatch("no normals given")
    dim = len(normals[0])
    if any(len(v) != dim for v in normals):
        raise DimensionMismatch("normals have inconsistent lengths")
    for a, v in enumerate(normals):
        if any(int(x) != x for x in v):
            raise NotPrimitive(f"normal {a} = {list(v)} is not an integer vector")
    normals = [tuple(int(x) for x in v) for v in normals]
    for a, v in enumerate(normals):
        if la.content(v) != 1:
            raise NotPrimitive(f"normal {a} = {list(v)} is not primitive (content {la.content(v)})")
    if len(normals) < dim or la.rank(normals) < dim:
        raise NotStrictlyConvex("normals do not span the ambient space; the cone contains a line")
    seen = {}
    for a, v in enumerate(normals):
        if v in seen:
            raise RedundantNormal(f"normal {a} repeats normal {seen[v]}")
        seen[v] = a

    rays = extreme_rays(normals)
    if not rays:
        raise NotFullDimensional("the cone is the origin")
    s = [sum(col) for col in zip(*rays)]
    flat = [a for a, v in enumerate(normals) if la.dot(v, s) == 0]
    if flat:
        raise NotFullDimensional(f"the cone lies in the hyperplanes of normals {flat}")
    incidence = tuple(tuple(la.dot(v, u) == 0 for u in rays) for v in normals)
    for a, row in enumerate(incidence):
        on = [rays[j] for j, t in enumerate(row) if t]
        if not on or la.rank(on) != dim - 1:
            raise RedundantNormal(f"normal {a} = {list(normals[a])} does not cut a facet")

    faces = _face_lattice(rays, incidence)
    for face_rays, facets in faces:
        if len(facets) < 2:
            continue
        sub = [normals[a] for a in sorted(facets)]
        divisors = la.smith_diagonal(sub)
        if any(e != 1 for e in divisors):
            raise NotGood(
                f"normals {sorted(facets)} of the face spanned by rays "
                f"{[list(rays[j]) for j in sorted(face_rays)]} generate a non-saturated "
                f"sublattice (elementary divisors {divisors})",
                facets=sorted(facets),
                divisors=divisors,
            )
    return GoodCone(dim, tuple(normals), tuple(rays), incidence, faces, name)


def dual_cone(cone):
    """Primitive generators of the extreme rays of the dual cone ``C*``."""
    return extreme_rays(cone.rays)


def kernel_basis(cone):
    """Primitive integer basis of ``ker A^T`` where ``A`` has rows ``v_a``.

    Each vector is scaled to be primitive with first nonzero entry positive.
    """
    At = la.transpose([list(v) for v in cone.normals])
    out = []
    for vec in la.nullspace(At, cone.d):
        p = la.primitive(vec)
        if next(x for x in p if x) < 0:
            p = tuple(-x for x in p)
        out.append(p)
    return out


@dataclass(frozen=True)
class Membership:
    member: bool
    witness: tuple = None  # p with l_a(p) = beta_a
    eta: tuple = None  # violated kernel relation
    pairing: object = None  # <beta, eta>

    def __bool__(self):
        return self.member


def angles_cone_membership(cone, beta):
    """Decide ``beta`` in the angles' cone and return a witness or certificate.

    Exact for rational ``beta``. For floating input the witness is the least
    squares solution and membership is decided with a relative tolerance of
    ``1e-12`` on the kernel pairings.
    """
    beta = check_angle_vector(beta, cone.d)
    if is_exact(beta):
        p = la.solve_exact([list(v) for v in cone.normals], list(beta))
        if p is not None:
            return Membership(True, witness=tuple(p))
        for eta in kernel_basis(cone):
            pairing = la.dot(beta, eta)
            if pairing != 0:
                return Membership(False, eta=eta, pairing=pairing)
        raise AssertionError("inconsistent system with a trivial kernel certificate")

    import numpy as np

    A = np.array(cone.normals, dtype=float)
    b = np.array(beta)
    p, *_ = np.linalg.lstsq(A, b, rcond=None)
    scale = max(1.0, float(np.abs(b).max()))
    for eta in kernel_basis(cone):
        pairing = float(np.dot(b, eta))
        if abs(pairing) > 1e-12 * scale * float(np.abs(eta).sum()):
            return Membership(False, eta=eta, pairing=pairing)
    return Membership(True, witness=tuple(float(x) for x in p))


def require_membership(cone, beta, error=NotInAnglesCone):
    m = angles_cone_membership(cone, beta)
    if not m.member:
        raise error(
            f"angle vector is not in the angles' cone: <beta, eta> = {m.pairing} "
            f"for kernel relation eta = {list(m.eta)}",
            eta=m.eta,
            pairing=m.pairing,
        )
    return m.witness


def chern_class_criterion(cone, beta):
    """Vanishing of ``c1(H) - sum (1 - beta_a)[Sigma_a]`` on the link.

    The relation ``sum beta_a [Sigma_a] = 0`` in degree two cohomology holds
    exactly when ``beta`` lies in the image of the facet map, so this is the
    membership flag read on the Sasakian side.
    """
    return angles_cone_membership(cone, beta).member


@dataclass(frozen=True)
class LogPairCertificate:
    interior_point: tuple
    is_r_cartier: bool
    discrepancies: dict
    is_klt: bool
    is_q_gorenstein: bool


def in_dual_cone(cone, v):
    """True when ``v`` is a nonzero nonnegative combination of the normals."""
    return any(x != 0 for x in v) and all(la.dot(u, v) >= 0 for u in cone.rays)


def is_q_gorenstein(cone):
    ones = tuple(Fraction(1) for _ in range(cone.d))
    return la.solve_exact([list(v) for v in cone.normals], list(ones)) is not None


def cartier_klt(cone, beta, interior_rays=()):
    """Cartier witness and discrepancies of the pair ``(X, sum (1 - beta_a) D_a)``.

    Each queried ray ``v'`` must lie in the cone generated by the normals;
    its discrepancy is ``<p, v'> - 1`` for the witness ``p``.
    """
    beta = check_angle_vector(beta, cone.d)
    p = require_membership(cone, beta, error=NotRCartier)
    discrepancies = {}
    for v in interior_rays:
        v = tuple(int(x) for x in v)
        if len(v) != cone.dim:
            raise DimensionMismatch(f"ray {list(v)} has the wrong length")
        if not in_dual_cone(cone, v):
            raise RayOutsideCone(f"ray {list(v)} is not in the cone spanned by the normals")
        discrepancies[v] = la.dot(p, v) - 1
    klt = all(a > -1 for a in discrepancies.values())
    if not klt:
        raise AssertionError("an R-Cartier pair with positive angles must be klt")
    return LogPairCertificate(tuple(p), True, discrepancies, klt, is_q_gorenstein(cone))

