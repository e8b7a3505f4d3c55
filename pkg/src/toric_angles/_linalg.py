"""Small dense linear algebra over exact rationals (and floats where noted).

Matrices are lists of rows. Nothing here is fast; the cones this package
handles have dimension at most five and a dozen facets, where exactness is
worth far more than speed.
"""

from fractions import Fraction
from math import factorial, gcd


def frac_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def rref(rows):
    """Reduced row echelon form over the rationals.

    Returns ``(R, pivots)`` with ``R`` a new matrix and ``pivots`` the list of
    pivot columns.
    """
    R = frac_matrix(rows)
    if not R:
        return R, []
    m, ncols = len(R), len(R[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(rows):
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(rows)
    ncols = len(R[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -R[i][f]
        basis.append(x)
    return basis


def transpose(rows):
    return [list(col) for col in zip(*rows)]


def solve_exact(A, b):
    """Solve ``A x = b`` for a full column rank ``A``; ``None`` if inconsistent."""
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    k = len(A[0])
    if k in pivots:
        return None
    if len(pivots) < k:
        raise ValueError("matrix does not have full column rank")
    x = [Fraction(0)] * k
    for i, pc in enumerate(pivots):
        x[pc] = R[i][k]
    return x


def det(M):
    """Determinant by Gaussian elimination with partial pivoting.

    Works for ``Fraction`` entries (exact) and for floats.
    """
    A = [list(row) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    result = 1
    for c in range(n):
        p = max(range(c, n), key=lambda i: abs(A[i][c]))
        if A[p][c] == 0:
            return A[p][c] * 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        piv = A[c][c]
        result = result * piv
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = A[i][c] / piv
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return sign * result


def solve(M, b):
    """Solve a square system; generic over Fraction and float."""
    n = len(M)
    A = [list(row) + [bi] for row, bi in zip(M, b)]
    for c in range(n):
        p = max(range(c, n), key=lambda i: abs(A[i][c]))
        if A[p][c] == 0:
            raise ZeroDivisionError("singular matrix")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c] / piv
                A[i] = [a - f * x for a, x in zip(A[i], A[c])]
    return [A[i][n] / A[i][i] for i in range(n)]


def simplex_volume(points):
    """Lebesgue volume of the simplex spanned by ``len(points) = k + 1`` points in R^k."""
    k = len(points) - 1
    p0 = points[0]
    edges = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return abs(det(edges)) / factorial(k)


def primitive(vec):
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in vec]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def content(vec):
    g = 0
    for x in vec:
        g = gcd(g, int(x))
    return g


def smith_diagonal(rows):
    """Nonzero elementary divisors of an integer matrix.

    Plain Smith reduction by unimodular row and column operations; only the
    diagonal is kept.
    """
    A = [[int(x) for x in row] for row in rows]
    if not A or not A[0]:
        return []
    m, n = len(A), len(A[0])
    divisors = []
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        changed = True
            if changed:
                continue
            # divisibility of the remaining block
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                 if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        divisors.append(abs(A[t][t]))
        t += 1
    return divisors
