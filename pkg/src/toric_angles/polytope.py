"""Transversal polytopes ``P_xi = C ∩ {<xi, x> = 1/2}`` and their integrals.

Everything is computed from a triangulation. The combinatorics (placing
triangulation, boundary simplices, facet incidence) are always decided in
exact rational arithmetic; numbers are carried in the type of ``xi``:
``Fraction`` inputs give exact results, float inputs give floats.

Chart convention: the ambient coordinate ``k`` with the largest ``|xi_k|``
(smallest index on ties) is dropped, and the remaining coordinates, shifted
by the first vertex, are the affine coordinates on ``H_xi``. Volumes taken
in this chart are labelled ``chart``; barycenters, ratios and everything that
feeds the Reeb/angle correspondence do not depend on the chart.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import _linalg as la
from .exceptions import DegeneratePolytope, NotAffine, ReebNotInterior
from .validation import check_angle_vector, check_vector, is_exact


def check_reeb(cone, xi):
    xi = check_vector(xi, cone.dim, "Reeb vector")
    for u, s in zip(cone.rays, cone.reeb_pairings(xi)):
        if not s > 0:
            raise ReebNotInterior(
                f"Reeb vector {list(xi)} pairs to {s} with extreme ray {list(u)}; "
                "it must be strictly positive on every ray",
                ray=u,
                pairing=s,
            )
    return xi


def _hyperplane(points, opposite):
    """Outward oriented hyperplane ``(normal, offset)`` through ``points``.

    ``opposite`` lies strictly on the inner side: ``normal . opposite < offset``.
    """
    dim = len(opposite)
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    ker = la.nullspace(diffs, dim)
    if len(ker) != 1:
        raise DegeneratePolytope("degenerate simplex facet")
    normal = ker[0]
    offset = la.dot(normal, p0)
    if la.dot(normal, opposite) > offset:
        normal = [-x for x in normal]
        offset = -offset
    return normal, offset


def placing_triangulation(points, order=None):
    """Placing triangulation of points in convex position in ``Q^n``.

    Returns ``(simplices, boundary)``: simplices as sorted index tuples and the
    boundary ``(n-1)``-simplices of the hull as frozensets of indices.
    """
    pts = [[Fraction(x) for x in p] for p in points]
    n = len(pts[0])
    order = list(range(len(pts))) if order is None else list(order)
    init = []
    for i in order:
        cand = init + [i]
        diffs = [[a - b for a, b in zip(pts[j], pts[cand[0]])] for j in cand[1:]]
        if not diffs or la.rank(diffs) == len(diffs):
            init = cand
        if len(init) == n + 1:
            break
    if len(init) < n + 1:
        raise DegeneratePolytope("points do not span the hyperplane")

    simplices = [tuple(sorted(init))]
    boundary = {}
    for j in init:
        face = frozenset(init) - {j}
        boundary[face] = _hyperplane([pts[i] for i in sorted(face)], pts[j])

    for i in order:
        if i in init:
            continue
        p = pts[i]
        visible = [f for f, (nrm, off) in boundary.items() if la.dot(nrm, p) > off]
        if not visible:
            continue  # not a vertex of the current hull
        for f in visible:
            simplex = tuple(sorted(f | {i}))
            simplices.append(simplex)
            for j in simplex:
                face = frozenset(simplex) - {j}
                if face in boundary:
                    del boundary[face]
                else:
                    boundary[face] = _hyperplane([pts[k] for k in sorted(face)], pts[j])
    return simplices, set(boundary)


@dataclass(frozen=True)
class TransversalPolytope:
    cone: object
    xi: tuple
    drop: int
    origin: tuple
    basis: tuple  # tangent vectors of H_xi lifting the chart unit vectors
    vertices: tuple  # ambient coordinates; vertex j sits on ray j
    chart_vertices: tuple
    simplices: tuple
    boundary: tuple  # (facet index a, boundary simplex) pairs
    facet_map: tuple  # facet_map[a]: vertex indices on F_a ∩ P_xi
    exact: bool

    @property
    def n(self):
        return self.cone.dim - 1

    def to_chart(self, x):
        k = self.drop
        return tuple(x[j] - self.origin[j] for j in range(len(x)) if j != k)

    def from_chart(self, y):
        x = list(self.origin)
        for t, c in zip(self.basis, y):
            x = [a + c * b for a, b in zip(x, t)]
        return tuple(x)

    def chart_gradient(self, w):
        """Chart coefficients of the linear form ``<w, .>`` restricted to ``H_xi``."""
        return tuple(la.dot(w, t) for t in self.basis)


@lru_cache(maxsize=256)
def _combinatorics(cone, order):
    """Triangulation and labelled boundary of the slices of ``cone``.

    Positive rescaling of the rays preserves every orientation sign used by
    the placing algorithm, so one exact run at the reference Reeb vector
    ``sum_a v_a`` serves every Reeb vector.
    """
    dim = cone.dim
    xi0 = [sum(col) for col in zip(*cone.normals)]
    pairs = cone.reeb_pairings(xi0)
    drop = max(range(dim), key=lambda k: (abs(xi0[k]), -k))
    pts = [[Fraction(u[j], 2 * s) for j in range(dim) if j != drop] for u, s in zip(cone.rays, pairs)]
    simplices, bnd = placing_triangulation(pts, order)
    facet_sets = [
        frozenset(j for j, on in enumerate(row) if on) for row in cone.incidence
    ]
    boundary = []
    for face in bnd:
        owners = [a for a, verts in enumerate(facet_sets) if face <= verts]
        if len(owners) != 1:
            raise DegeneratePolytope(f"boundary simplex {sorted(face)} not on a unique facet")
        boundary.append((owners[0], tuple(sorted(face))))
    boundary.sort()
    return tuple(simplices), tuple(boundary)


def slice(cone, xi, drop=None, order=None):
    """Transversal polytope of ``cone`` at the Reeb vector ``xi``.

    ``drop`` overrides the chart coordinate; ``order`` overrides the vertex
    insertion order of the placing triangulation.
    """
    xi = check_reeb(cone, xi)
    exact = is_exact(xi)
    dim = cone.dim
    if drop is None:
        drop = max(range(dim), key=lambda k: (abs(xi[k]), -k))
    if xi[drop] == 0:
        raise ValueError("cannot drop a coordinate where xi vanishes")
    half = Fraction(1, 2) if exact else 0.5
    vertices = tuple(
        tuple(x * half / s for x in u) for u, s in zip(cone.rays, cone.reeb_pairings(xi))
    )
    simplices, bnd = _combinatorics(cone, None if order is None else tuple(order))

    origin = vertices[0]
    basis = []
    for j in range(dim):
        if j == drop:
            continue
        t = [0 * xi[0]] * dim
        t[j] = 1 + 0 * xi[0]
        t[drop] = -xi[j] / xi[drop]
        basis.append(tuple(t))
    chart_vertices = tuple(tuple(v[j] - origin[j] for j in range(dim) if j != drop) for v in vertices)

    facet_map = tuple(
        tuple(j for j, on in enumerate(row) if on) for row in cone.incidence
    )
    return TransversalPolytope(
        cone, xi, drop, origin, tuple(basis), vertices, chart_vertices,
        simplices, bnd, facet_map, exact,
    )


@dataclass(frozen=True)
class PolytopeMoments:
    volume: object  # chart measure of P_xi
    barycenter: tuple  # ambient coordinates
    second_moments: tuple  # ambient (n+1)x(n+1) matrix of ∫ x_i x_j dx~
    euclid_volume_delta: object  # Lebesgue volume of Delta_xi
    simplex_volumes: tuple  # chart volume of each simplex, same order as P.simplices


def euclid_volume_delta(P):
    """Volume of the truncated cone ``{x in C : <xi, x> <= 1/2}`` from the rays."""
    n1 = P.cone.dim
    rays = P.cone.rays
    pair = P.cone.reeb_pairings(P.xi)
    half = Fraction(1, 2) if P.exact else 0.5
    total = 0
    for s in P.simplices:
        U = [list(rays[j]) for j in s]
        prod = 1
        for j in s:
            prod = prod * pair[j]
        total = total + abs(la.det(la.frac_matrix(U))) * half ** n1 / (factorial(n1) * prod)
    return total


def moments(P):
    n = P.n
    dim = n + 1
    vols = []
    vol = 0
    first = [0] * dim
    second = [[0] * dim for _ in range(dim)]
    for s in P.simplices:
        v = la.simplex_volume([P.chart_vertices[j] for j in s])
        vols.append(v)
        pts = [P.vertices[j] for j in s]
        tot = [sum(p[i] for p in pts) for i in range(dim)]
        vol = vol + v
        first = [f + v * t / (n + 1) for f, t in zip(first, tot)]
        c = v / ((n + 1) * (n + 2))
        for i in range(dim):
            for j in range(i, dim):
                m = sum(p[i] * p[j] for p in pts) + tot[i] * tot[j]
                second[i][j] = second[i][j] + c * m
    if not vol > 0 or any(not v > 0 for v in vols):
        raise DegeneratePolytope("transversal polytope has a degenerate simplex")
    for i in range(dim):
        for j in range(i):
            second[i][j] = second[j][i]
    bary = tuple(f / vol for f in first)
    return PolytopeMoments(
        vol, bary, tuple(tuple(r) for r in second), euclid_volume_delta(P), tuple(vols)
    )


def facet_transversal(P, a, beta_a):
    """Chart vector ``u`` tangent to ``H_xi`` with ``beta_a^{-1} l_a(u) = 1``."""
    g = P.chart_gradient(P.cone.normals[a])
    g2 = la.dot(g, g)
    return tuple(beta_a * x / g2 for x in g)


def _sigma_measure(P, u, face):
    w = [P.chart_vertices[j] for j in face]
    cols = [list(u)] + [[a - b for a, b in zip(p, w[0])] for p in w[1:]]
    return abs(la.det(la.transpose(cols))) / factorial(P.n - 1)


@dataclass(frozen=True)
class BoundaryMeasure:
    beta: tuple
    transversals: tuple  # chart vector u_a per facet
    facet_measures: tuple  # sigma_{xi,beta}(F_a ∩ P_xi)
    densities: tuple  # sigma relative to chart Euclidean (n-1)-measure, = beta_a / |grad l_a|

    @property
    def total(self):
        return sum(self.facet_measures)


def boundary_measure(P, beta):
    beta = check_angle_vector(beta, P.cone.d, exact=P.exact)
    us, meas, dens = [], [], []
    for a in range(P.cone.d):
        u = facet_transversal(P, a, beta[a])
        us.append(u)
        meas.append(sum(_sigma_measure(P, u, f) for b, f in P.boundary if b == a))
        g = P.chart_gradient(P.cone.normals[a])
        dens.append(float(beta[a]) / float(la.dot(g, g)) ** 0.5)
    return BoundaryMeasure(beta, tuple(us), tuple(meas), tuple(dens))


@dataclass(frozen=True)
class AffineFunction:
    """``f(x) = constant + <linear, x>`` in ambient coordinates."""

    constant: object
    linear: tuple

    def __call__(self, x):
        return self.constant + la.dot(self.linear, x)


def as_affine(P, f):
    """Coerce ``f`` to an :class:`AffineFunction` on ``H_xi``.

    Accepts an :class:`AffineFunction`, a ``(constant, linear)`` pair, or a
    callable; a callable is interpolated from its values at the chart origin
    and the chart unit points, then checked at every vertex.
    """
    if isinstance(f, AffineFunction):
        return f
    if isinstance(f, tuple) and len(f) == 2 and not callable(f):
        return AffineFunction(f[0], tuple(f[1]))
    if not callable(f):
        raise NotAffine("expected an affine function")
    n = P.n
    zero = [0 * P.xi[0]] * n
    f0 = f(P.from_chart(zero))
    grad = []
    for i in range(n):
        e = list(zero)
        e[i] = 1 + 0 * P.xi[0]
        grad.append(f(P.from_chart(e)) - f0)

    def model(y):
        return f0 + la.dot(grad, y)

    for v, y in zip(P.vertices, P.chart_vertices):
        got, want = f(v), model(y)
        if P.exact and got != want:
            raise NotAffine("function is not affine on the transversal hyperplane")
        if not P.exact and abs(got - want) > 1e-9 * (1 + abs(want)):
            raise NotAffine("function is not affine on the transversal hyperplane")
    # express as ambient affine function supported on the chart coordinates
    k = P.drop
    lin = [0 * P.xi[0]] * P.cone.dim
    it = iter(grad)
    for j in range(P.cone.dim):
        if j != k:
            lin[j] = next(it)
    const = f0 - la.dot(lin, P.origin)
    return AffineFunction(const, tuple(lin))


def boundary_integrals(P, beta, f):
    """Per-facet integrals ``∫_{F_a ∩ P} f sigma_{xi,beta}`` of an affine ``f``.

    Returns ``(per_facet, total)``.
    """
    beta = check_angle_vector(beta, P.cone.d, exact=P.exact)
    f = as_affine(P, f)
    per = []
    for a in range(P.cone.d):
        u = facet_transversal(P, a, beta[a])
        acc = 0
        for b, face in P.boundary:
            if b != a:
                continue
            m = _sigma_measure(P, u, face)
            mean = sum(f(P.vertices[j]) for j in face) / len(face)
            acc = acc + m * mean
        per.append(acc)
    return tuple(per), sum(per)


def interior_integral(P, f):
    """``∫_{P_xi} f dx~`` for an affine ``f`` (chart measure)."""
    f = as_affine(P, f)
    acc = 0
    for s in P.simplices:
        v = la.simplex_volume([P.chart_vertices[j] for j in s])
        acc = acc + v * sum(f(P.vertices[j]) for j in s) / len(s)
    return acc


@dataclass(frozen=True)
class PiMultiple:
    """The real number ``coefficient * pi**power`` with an exact coefficient."""

    coefficient: object
    power: int

    @property
    def value(self):
        from math import pi

        return float(self.coefficient) * pi ** self.power


@dataclass(frozen=True)
class FacetVolumes:
    reduced: tuple  # |v_a|^{-1} vol(F_a), exact for rational xi
    facet_volumes: tuple  # Lebesgue n-volume of F_a = Delta_xi ∩ {l_a = 0}
    delta_volume: object  # vol(Delta_xi)
    link_volume: PiMultiple  # vol(S) = 2(n+1)(2 pi)^{n+1} vol(Delta_xi)
    divisor_volumes: tuple  # vol(Sigma_a) = 2n(2 pi)^n |v_a|^{-1} vol(F_a)


def facet_volumes(P):
    n = P.n
    dim = n + 1
    reduced = []
    for a, v in enumerate(P.cone.normals):
        acc = 0
        vv = la.dot(v, v)
        for b, face in P.boundary:
            if b != a:
                continue
            rows = [list(v)] + [list(P.vertices[j]) for j in face]
            acc = acc + abs(la.det(rows)) / (vv * factorial(n))
        reduced.append(acc)
    vols = tuple(float(r) * float(la.dot(v, v)) ** 0.5 for r, v in zip(reduced, P.cone.normals))
    dv = euclid_volume_delta(P)
    link = PiMultiple(2 * dim * 2 ** dim * dv, dim)
    div = tuple(PiMultiple(2 * n * 2 ** n * r, n) for r in reduced)
    return FacetVolumes(tuple(reduced), vols, dv, link, div)
