"""Exact rational linear programming.

A small dense two-phase simplex over exact rationals.  Variables are free
(unrestricted sign) unless stated otherwise; internally each free variable is
split into a difference of nonnegative parts.  Pivoting uses Dantzig's rule
with a switch to Bland's rule after a stall budget, so termination is
guaranteed while typical solves stay fast.

gmpy2.mpq is used for tableau arithmetic when available (it is a drop-in
exact rational, just faster); results are converted back to Fraction.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction


class LPError(Exception):
    pass


def _to_fraction(q):
    # plain ints inside, so no gmpy2 types leak out of this module
    f = Fraction(q) if not isinstance(q, Fraction) else q
    return Fraction(int(f.numerator), int(f.denominator))


class LPResult:
    def __init__(self, status, value=None, x=None):
        self.status = status  # 'optimal' | 'infeasible' | 'unbounded'
        self.value = value
        self.x = x

    def __repr__(self):
        return f"LPResult({self.status}, value={self.value})"


def solve_lp(objective, a_ub=None, b_ub=None, a_eq=None, b_eq=None,
             maximize=True):
    """Optimize objective . x over free x with A_ub x <= b_ub, A_eq x = b_eq."""
    a_ub = a_ub or []
    b_ub = b_ub or []
    a_eq = a_eq or []
    b_eq = b_eq or []
    n = len(objective)
    rows = []
    rhs = []
    senses = []
    for row, b in zip(a_ub, b_ub):
        rows.append(list(row))
        rhs.append(b)
        senses.append("<")
    for row, b in zip(a_eq, b_eq):
        rows.append(list(row))
        rhs.append(b)
        senses.append("=")
    m = len(rows)

    # columns: x+ (n), x- (n), slacks (one per '<' row), then artificials
    nslack = sum(1 for s in senses if s == "<")
    ncols = 2 * n + nslack
    T = []
    slack_i = 0
    basis = []
    art_cols = []
    for i in range(m):
        neg = rhs[i] < 0
        row = [_Q(x) for x in rows[i]]
        if neg:
            row = [-x for x in row]
        full = row + [-x for x in row] + [_Q(0)] * nslack
        if senses[i] == "<":
            full[2 * n + slack_i] = _Q(-1) if neg else _Q(1)
            slack_i += 1
        T.append(full)
        b = _Q(rhs[i])
        rhs[i] = -b if neg else b

    # artificial columns; reuse a positive slack as basis when possible
    for i in range(m):
        col = None
        for j in range(2 * n, ncols):
            if T[i][j] == 1 and all(T[k][j] == 0 for k in range(m) if k != i):
                col = j
                break
        if col is None:
            for row_k in T:
                row_k.append(_Q(0))
            T[i].append(_Q(1))
            col = ncols
            ncols += 1
            art_cols.append(col)
        basis.append(col)

    b_col = [rhs[i] for i in range(m)]

    def pivot(pr, pc):
        pv = T[pr][pc]
        T[pr] = [x / pv for x in T[pr]]
        b_col[pr] /= pv
        for i in range(m):
            if i != pr and T[i][pc] != 0:
                f = T[i][pc]
                T[i] = [a - f * c for a, c in zip(T[i], T[pr])]
                b_col[i] -= f * b_col[pr]
        basis[pr] = pc

    def run_phase(costs):
        # reduced costs for a min problem; costs indexed per column
        zrow = [_Q(0)] * ncols
        zval = _Q(0)
        for i in range(m):
            c = costs[basis[i]]
            if c != 0:
                zrow = [z - c * t for z, t in zip(zrow, T[i])]
                zval -= c * b_col[i]
        zrow = [z + c for z, c in zip(zrow, costs)]
        stall = 0
        budget = 50 * (m + ncols)
        while True:
            if stall < budget:
                pc = None
                best = _Q(0)
                for j in range(ncols):
                    if zrow[j] < best:
                        best = zrow[j]
                        pc = j
            else:  # Bland
                pc = next((j for j in range(ncols) if zrow[j] < 0), None)
            if pc is None:
                return -zval, zrow
            pr = None
            best_ratio = None
            for i in range(m):
                if T[i][pc] > 0:
                    ratio = b_col[i] / T[i][pc]
                    if (best_ratio is None or ratio < best_ratio
                            or (ratio == best_ratio and basis[i] < basis[pr])):
                        best_ratio = ratio
                        pr = i
            if pr is None:
                return None, zrow  # unbounded
            f = T[pr][pc]
            zf = zrow[pc]
            pivot(pr, pc)
            zrow = [z - zf * t for z, t in zip(zrow, T[pr])]
            zval -= zf * b_col[pr]
            stall += 1

    if art_cols:
        costs1 = [_Q(0)] * ncols
        for c in art_cols:
            costs1[c] = _Q(1)
        opt1, _ = run_phase(costs1)
        if opt1 is None or opt1 != 0:
            return LPResult("infeasible")
        # drive leftover artificials out of the basis; a stuck artificial row
        # is an all-zero (redundant) constraint and gets dropped
        art = set(art_cols)
        drop = []
        for i in range(m):
            if basis[i] in art:
                pc = next((j for j in range(ncols)
                           if j not in art and T[i][j] != 0), None)
                if pc is None:
                    drop.append(i)
                else:
                    pivot(i, pc)
        for i in reversed(drop):
            del T[i], b_col[i], basis[i]
        m = len(T)
        keep = [j for j in range(ncols) if j not in art]
        for i in range(m):
            T[i] = [T[i][j] for j in keep]
        remap = {old: new for new, old in enumerate(keep)}
        basis[:] = [remap[b] for b in basis]
        ncols = len(keep)

    sign = -1 if maximize else 1
    costs2 = [_Q(0)] * ncols
    for j in range(n):
        costs2[j] = sign * _Q(objective[j])
        costs2[n + j] = -sign * _Q(objective[j])
    opt2, _ = run_phase(costs2)
    if opt2 is None:
        return LPResult("unbounded")
    x = [_Q(0)] * (2 * n)
    for i in range(m):
        if basis[i] < 2 * n:
            x[basis[i]] = b_col[i]
    sol = tuple(_to_fraction(x[j] - x[n + j]) for j in range(n))
    value = _to_fraction(-opt2 if maximize else opt2)
    return LPResult("optimal", value, sol)


def max_uniform_slack(strict_rows, strict_rhs, eq_rows=None, eq_rhs=None,
                      cap=1):
    """Maximize e subject to row . x + e <= rhs (componentwise), 0 <= e <= cap.

    This is the shared pattern for openness certificates: the strict system
    row . x < rhs is solvable iff the optimum e is positive.  Returns
    (eps, x) with eps a Fraction (the optimum, 0 when only weak solutions
    exist) or None when even the weak system is infeasible.
    """
    if not strict_rows:
        return Fraction(cap), ()
    n = len(strict_rows[0])
    a_ub = [list(row) + [1] for row in strict_rows]
    b_ub = list(strict_rhs)
    a_ub.append([0] * n + [1])
    b_ub.append(cap)
    a_ub.append([0] * n + [-1])
    b_ub.append(0)
    a_eq = [list(r) + [0] for r in (eq_rows or [])]
    objective = [0] * n + [1]
    res = solve_lp(objective, a_ub, b_ub, a_eq, list(eq_rhs or []),
                   maximize=True)
    if res.status == "infeasible":
        return None
    if res.status != "optimal":
        raise LPError(f"unexpected LP status {res.status}")
    return res.value, res.x[:n]
