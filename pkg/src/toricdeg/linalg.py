"""Exact integer and rational linear algebra.

Everything here works on plain Python ints and fractions.Fraction, so all
results are bit-exact regardless of magnitude.  Matrices are lists of row
tuples/lists; vectors are tuples/lists.
"""

from fractions import Fraction
from math import gcd


def vec_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive_vector(v):
    """Divide an integer vector by the gcd of its entries (0 stays 0)."""
    g = vec_gcd(v)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * x for x in v)


def clear_denominators(v):
    """Scale a rational vector to a primitive integer vector (same ray)."""
    fracs = [Fraction(x) for x in v]
    lcm = 1
    for f in fracs:
        d = f.denominator
        lcm = lcm * d // gcd(lcm, d)
    ints = [int(f * lcm) for f in fracs]
    return primitive_vector(ints)


def row_reduce(rows):
    """Fraction Gauss-Jordan.  Returns (rref_rows, pivot_columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows):
    if not rows:
        return 0
    return len(row_reduce(rows)[1])


def solve(rows, rhs):
    """One rational solution of A x = b, or None if inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    m, pivots = row_reduce(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][ncols]
    return tuple(x)


def nullspace(rows):
    """Rational basis of the right kernel of A."""
    if not rows:
        return []
    ncols = len(rows[0])
    m, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(tuple(v))
    return basis


def hnf(rows):
    """Row-style Hermite normal form of an integer matrix.

    Returns (H, U) with U unimodular, U*A = H_full, and H the list of the
    nonzero rows of H_full.  Canonical: pivots positive, entries above each
    pivot reduced into [0, pivot).
    """
    A = [list(map(int, r)) for r in rows]
    n = len(A)
    ncols = len(A[0]) if n else 0
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    r = 0
    for c in range(ncols):
        # Euclidean sweep on column c below row r.
        while True:
            nz = [i for i in range(r, n) if A[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[i0] = A[i0], A[r]
            U[r], U[i0] = U[i0], U[r]
            done = True
            for i in range(r + 1, n):
                if A[i][c] != 0:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if A[i][c] != 0:
                        done = False
            if done:
                break
        if r < n and A[r][c] != 0:
            if A[r][c] < 0:
                A[r] = [-x for x in A[r]]
                U[r] = [-x for x in U[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
        if r == n:
            break
    H = [tuple(row) for row in A[:r]]
    return H, U


def integer_kernel(rows):
    """HNF basis of {x in Z^n : A x = 0} (a saturated sublattice)."""
    if not rows:
        return []
    ncols = len(rows[0])
    At = [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]
    H, U = hnf(At)
    nzero = len(H)
    ker = [tuple(U[i]) for i in range(nzero, ncols)]
    if not ker:
        return []
    return [tuple(r) for r in hnf(ker)[0]]


def snf_diagonal(rows):
    """Diagonal of the Smith normal form (nonzero entries, divisibility chain)."""
    A = [list(map(int, r)) for r in rows]
    diag = []
    while A and any(any(x for x in row) for row in A):
        # move a minimal nonzero entry to (0,0)
        best = None
        for i, row in enumerate(A):
            for j, x in enumerate(row):
                if x and (best is None or abs(x) < abs(best[2])):
                    best = (i, j, x)
        i0, j0, _ = best
        A[0], A[i0] = A[i0], A[0]
        for row in A:
            row[0], row[j0] = row[j0], row[0]
        # clear first row and column
        dirty = True
        while dirty:
            dirty = False
            for i in range(1, len(A)):
                if A[i][0]:
                    q = A[i][0] // A[0][0]
                    A[i] = [a - q * b for a, b in zip(A[i], A[0])]
                    if A[i][0]:
                        A[0], A[i] = A[i], A[0]
                        dirty = True
            for j in range(1, len(A[0])):
                if A[0][j]:
                    q = A[0][j] // A[0][0]
                    for row in A:
                        row[j] -= q * row[0]
                    if A[0][j]:
                        for row in A:
                            row[0], row[j] = row[j], row[0]
                        dirty = True
        # enforce divisibility: fold any non-multiple into the pivot block
        d = abs(A[0][0])
        offender = None
        for i in range(1, len(A)):
            for j in range(1, len(A[0])):
                if A[i][j] % d:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            A[0] = [a + b for a, b in zip(A[0], A[offender])]
            continue
        diag.append(d)
        A = [row[1:] for row in A[1:]]
    return diag


def det(rows):
    """Exact determinant of a square integer/rational matrix (fraction-free for ints)."""
    n = len(rows)
    if n == 0:
        return 1
    if any(not isinstance(x, int) for row in rows for x in row):
        m = [[Fraction(x) for x in row] for row in rows]
        sign = 1
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                sign = -sign
            for i in range(c + 1, n):
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        out = Fraction(sign)
        for i in range(n):
            out *= m[i][i]
        return out
    # Bareiss
    m = [list(map(int, row)) for row in rows]
    sign = 1
    prev = 1
    for c in range(n - 1):
        if m[c][c] == 0:
            piv = next((i for i in range(c + 1, n) if m[i][c] != 0), None)
            if piv is None:
                return 0
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[i][j] * m[c][c] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def lattice_index(generators):
    """Index of the Z-span of the generators inside its saturation.

    Always finite: saturation/span is the torsion of the quotient, whose
    order is the product of the Smith diagonal entries.
    """
    gens = [g for g in generators if any(g)]
    if not gens:
        return 1
    out = 1
    for d in snf_diagonal(gens):
        out *= d
    return out


def index_in_ambient(generators, ambient_rank):
    """Index [Z^d : span(generators)], or None when the span has lower rank."""
    gens = [g for g in generators if any(g)]
    if rank(gens) < ambient_rank:
        return None
    return lattice_index(gens)


def saturation_basis(generators, ambient_dim):
    """HNF basis of the saturation of span(generators) inside Z^ambient_dim."""
    gens = [g for g in generators if any(g)]
    if not gens:
        return []
    # functionals annihilating the generators; their joint kernel is the saturation
    ker = integer_kernel([list(g) for g in gens])
    if not ker:
        return [tuple(1 if i == j else 0 for j in range(ambient_dim))
                for i in range(ambient_dim)]
    return integer_kernel(ker)


def quotient_map(subspace_generators, ambient_dim):
    """Projection Z^d -> Z^k onto the free quotient by the saturated span.

    Returns (proj_rows, k, torsion) where proj_rows is a k x d integer matrix
    whose kernel is the saturation of span(subspace_generators), and torsion
    is the index of span inside its saturation.
    """
    gens = [g for g in subspace_generators if any(g)]
    if not gens:
        ident = [tuple(1 if i == j else 0 for j in range(ambient_dim))
                 for i in range(ambient_dim)]
        return ident, ambient_dim, 1
    torsion = lattice_index(gens)
    # The rows of the kernel of gens^T (as functionals) give a surjection
    # Z^d -> Z^k with kernel exactly the saturation.
    proj = integer_kernel([list(g) for g in gens])
    k = len(proj)
    return [tuple(r) for r in proj], k, torsion


def barycentric(simplex, x):
    """Affine coordinates of x w.r.t. an affinely independent point list.

    Returns rational coefficients c with sum(c)=1, sum(c_i * p_i) = x, or
    None when x is outside the affine hull.
    """
    d = len(simplex[0])
    rows = [[Fraction(p[j]) for p in simplex] for j in range(d)]
    rows.append([Fraction(1)] * len(simplex))
    rhs = [Fraction(x[j]) for j in range(d)] + [Fraction(1)]
    return solve(rows, rhs)
