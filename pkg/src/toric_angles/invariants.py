"""Obstruction side quantities: log Futaki invariant, total transversal scalar
curvature, the integrated scalar curvature identity and the R-invariant."""

from dataclasses import dataclass
from fractions import Fraction

from . import _linalg as la
from . import polytope as pt
from .correspondence import reeb_to_angles
from .exceptions import NotAConeOverPolytope, SingularMomentMatrix
from .lattice_cone import angles_cone_membership
from .validation import check_angle_vector

FUTAKI_TOL = 1e-10


def _chart_coordinate(P, i):
    # x~_i as an ambient affine function; i = 0 is the constant 1
    dim = P.cone.dim
    one = 1 + 0 * P.xi[0]
    if i == 0:
        return pt.AffineFunction(one, tuple([0 * one] * dim))
    k = [j for j in range(dim) if j != P.drop][i - 1]
    lin = [0 * one] * dim
    lin[k] = one
    return pt.AffineFunction(-P.origin[k], tuple(lin))


@dataclass(frozen=True)
class FutakiReport:
    L_values: tuple  # on 1, x~_1, ..., x~_n
    A_beta: tuple  # A_0, A_1, ..., A_n in the chart of the slice
    barycenter_interior: tuple
    barycenter_boundary: tuple
    boundary_mass: object  # int sigma_{xi,beta} over the boundary
    gap: float  # |bar interior - bar boundary| / radius of P_xi
    L_scaled: float  # max |L(x~_i)| / (boundary mass * radius)
    A_scaled: float  # max_{i>0} |A_i| * radius / (mean of A over P_xi)
    tol: float

    @property
    def vanishes(self):
        return self.gap < self.tol

    def verdicts(self):
        """The three vanishing tests, which agree away from the tolerance edge."""
        return (self.L_scaled < self.tol, self.A_scaled < self.tol, self.gap < self.tol)


def log_futaki(cone, xi, beta, tol=FUTAKI_TOL):
    P = pt.slice(cone, xi)
    beta = check_angle_vector(beta, cone.d, exact=P.exact)
    m = pt.moments(P)
    n = P.n
    basis = [_chart_coordinate(P, i) for i in range(n + 1)]
    bnd = [pt.boundary_integrals(P, beta, f)[1] for f in basis]
    inner = [pt.interior_integral(P, f) for f in basis]
    mass = bnd[0]
    L = tuple(b - mass / m.volume * c for b, c in zip(bnd, inner))

    # moment matrix of the chart basis from the ambient moments
    def moment(f, g):
        S = m.second_moments
        first = [m.volume * b for b in m.barycenter]
        q = sum(f.linear[i] * g.linear[j] * S[i][j] for i in range(n + 1) for j in range(n + 1))
        lin = la.dot(f.linear, first) * g.constant + la.dot(g.linear, first) * f.constant
        return q + lin + f.constant * g.constant * m.volume

    M = [[moment(f, g) for g in basis] for f in basis]
    try:
        A = tuple(la.solve(M, [2 * b for b in bnd]))
    except ZeroDivisionError:
        raise SingularMomentMatrix("moment matrix of the transversal polytope is singular") from None

    dim = cone.dim
    coords = [
        pt.AffineFunction(0 * P.xi[0], tuple(int(i == j) + 0 * P.xi[0] for j in range(dim)))
        for i in range(dim)
    ]
    bary_b = tuple(pt.boundary_integrals(P, beta, f)[1] / mass for f in coords)
    radius = max(
        sum((float(a) - float(b)) ** 2 for a, b in zip(v, m.barycenter)) ** 0.5 for v in P.vertices
    )
    gap = sum((float(a) - float(b)) ** 2 for a, b in zip(m.barycenter, bary_b)) ** 0.5 / radius
    L_scaled = max(abs(float(x)) for x in L) / (float(mass) * radius)
    # mean of A over P_xi, 2 mass / vol by the first row of the system; A_0
    # alone is the value at the chart origin and may vanish
    A_scaled = max(abs(float(a)) for a in A[1:]) * radius * float(m.volume) / (2 * float(mass))
    return FutakiReport(L, A, m.barycenter, bary_b, mass, gap, L_scaled, A_scaled, tol)


@dataclass(frozen=True)
class TransversalScalar:
    value: object  # 2 sum_a beta_a sigma_{xi,1}(F_a ∩ P_xi)
    cross_check: object  # 2 (n / lambda_xi) vol(P_xi); None when beta is not in the angles' cone
    lam: object  # lambda_xi


def total_transversal_scalar(cone, xi, beta):
    P = pt.slice(cone, xi)
    beta = check_angle_vector(beta, cone.d, exact=P.exact)
    ones = tuple(1 + 0 * P.xi[0] for _ in beta)
    unit = pt.boundary_measure(P, ones).facet_measures
    value = 2 * sum(b * s for b, s in zip(beta, unit))
    member = angles_cone_membership(cone, beta)
    if not member:
        return TransversalScalar(value, None, None)
    lam = 1 / (2 * la.dot(P.xi, member.witness))
    vol = pt.moments(P).volume
    cross = 2 * P.n / lam * vol
    if P.exact:
        ok = cross == value
    else:
        ok = abs(float(cross) - float(value)) <= 1e-10 * abs(float(value))
    if not ok:
        raise AssertionError(f"boundary measure identity fails: {value} vs {cross}")
    return TransversalScalar(value, cross, lam)


@dataclass(frozen=True)
class IntegratedScalar:
    """Both sides of the integrated scalar curvature identity.

    All volumes are exact rational multiples of a power of pi; ``rhs`` is the
    right hand side of the integral formula, ``balance_lhs`` and
    ``balance_rhs`` the two sides of the volume balance that holds when the
    scalar curvature vanishes.
    """

    link_volume: pt.PiMultiple
    divisor_volumes: tuple
    rhs: pt.PiMultiple
    balance_lhs: pt.PiMultiple
    balance_rhs: pt.PiMultiple
    is_pair: bool

    @property
    def balanced(self):
        a, b = self.balance_lhs.coefficient, self.balance_rhs.coefficient
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a == b
        return abs(float(a) - float(b)) <= 1e-9 * abs(float(b))


def integrated_scalar_identity(cone, xi, beta):
    P = pt.slice(cone, xi)
    beta = check_angle_vector(beta, cone.d, exact=P.exact)
    fv = pt.facet_volumes(P)
    n = P.n
    weighted = sum(b * r for b, r in zip(beta, fv.reduced))
    # (2 pi / n) sum beta vol(Sigma_a) = 2^{n+2} pi^{n+1} sum beta rho_a
    rhs = pt.PiMultiple(2 ** (n + 2) * weighted - 2 * (n + 1) * fv.link_volume.coefficient, n + 1)
    lhs_bal = pt.PiMultiple(2 * n * 2 ** n * weighted, n + 1)
    rhs_bal = pt.PiMultiple(n * (n + 1) * fv.link_volume.coefficient, n + 1)
    forward = reeb_to_angles(cone, P.xi).beta
    if P.exact:
        is_pair = tuple(forward) == tuple(beta)
    else:
        is_pair = max(abs(a - b) for a, b in zip(forward, beta)) <= 1e-9 * max(beta)
    out = IntegratedScalar(fv.link_volume, fv.divisor_volumes, rhs, lhs_bal, rhs_bal, is_pair)
    if is_pair and not out.balanced:
        raise AssertionError("volume balance fails for a Reeb vector and its angles")
    return out


@dataclass(frozen=True)
class RInvariant:
    beta: tuple
    value: object


def r_invariant(cone):
    """``R = 1 / max_a beta_a`` at the regular Reeb vector ``(0, ..., 0, n+1)``."""
    if any(u[-1] <= 0 for u in cone.rays):
        raise NotAConeOverPolytope(
            "some extreme ray has nonpositive last coordinate; not a cone over a polytope"
        )
    xi = [Fraction(0)] * (cone.dim - 1) + [Fraction(cone.dim)]
    beta = reeb_to_angles(cone, xi).beta
    return RInvariant(beta, 1 / max(beta))
