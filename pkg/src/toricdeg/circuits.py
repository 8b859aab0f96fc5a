"""Circuits and extended circuits of a point configuration.

A circuit is a minimal affinely dependent subset; it carries a primitive
integer relation, unique up to sign.  Standalone circuits are oriented so
that (p, q) = (#positive, #negative entries) has p <= q, breaking ties by
making the first nonzero entry positive; wall circuits in the MMP module are
oriented separately (origin entry negative).
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from . import linalg as la
from .config import lifted_matrix
from .subdivision import Triangulation


class CircuitError(Exception):
    pass


@dataclass(frozen=True)
class Circuit:
    """Minimal dependent subset with its primitive relation.

    `relation` is a full-length vector over the ambient configuration,
    nonzero exactly on `support`.  `zero_set` holds the extra points of an
    extended circuit (a spanning (d+2)-subset); it is empty for plain
    circuits.  `torsion_order` is the torsion of the cokernel of the lifted
    point matrix on support + zero_set.
    """
    support: tuple
    relation: tuple
    zero_set: tuple = ()
    torsion_order: int = 1

    @property
    def positive(self):
        return tuple(i for i in self.support if self.relation[i] > 0)

    @property
    def negative(self):
        return tuple(i for i in self.support if self.relation[i] < 0)

    @property
    def members(self):
        return tuple(sorted(self.support + self.zero_set))

    def signature(self):
        p, q, r = len(self.positive), len(self.negative), len(self.zero_set)
        return (p, q, r) if r else (p, q)

    def oriented(self, negative_at=None):
        """Copy with the canonical orientation, or with a forced negative entry."""
        rel = list(self.relation)
        if negative_at is not None:
            if rel[negative_at] == 0:
                raise CircuitError(f"index {negative_at} is not in the support")
            if rel[negative_at] > 0:
                rel = [-x for x in rel]
        else:
            p = sum(1 for x in rel if x > 0)
            q = sum(1 for x in rel if x < 0)
            flip = p > q
            if p == q:
                first = next(rel[i] for i in self.support)
                flip = first < 0
            if flip:
                rel = [-x for x in rel]
        return Circuit(self.support, tuple(rel), self.zero_set,
                       self.torsion_order)

    def label(self):
        return {"support": list(self.support), "relation":
                [self.relation[i] for i in self.support]}


def _subset_relation(config, subset):
    """Primitive relation when the subset is a circuit, else None."""
    pts = [config.points[i] for i in subset]
    ker = la.integer_kernel(lifted_matrix(pts))
    if len(ker) != 1:
        return None
    rel = ker[0]
    if any(x == 0 for x in rel):
        return None
    return rel


def _torsion(config, members):
    pts = [config.points[i] for i in members]
    out = 1
    for x in la.snf_diagonal(lifted_matrix(pts)):
        out *= x
    return out


def find_circuits(config):
    """All circuits of the configuration, canonically oriented."""
    n = len(config)
    out = []
    for k in range(3, config.dim + 3):
        for subset in combinations(range(n), k):
            rel = _subset_relation(config, subset)
            if rel is None:
                continue
            full = [0] * n
            for i, x in zip(subset, rel):
                full[i] = x
            circ = Circuit(subset, tuple(full),
                           torsion_order=_torsion(config, subset))
            out.append(circ.oriented())
    return out


def extended_circuit(config, members):
    """Extended circuit on a spanning (d+2)-subset, canonically oriented."""
    members = tuple(sorted(members))
    if len(members) != config.dim + 2:
        raise CircuitError(f"an extended circuit needs d+2 = {config.dim + 2} points")
    pts = [config.points[i] for i in members]
    ker = la.integer_kernel(lifted_matrix(pts))
    if len(ker) != 1:
        raise CircuitError("subset does not span (relation lattice rank != 1)")
    rel = ker[0]
    full = [0] * len(config)
    support = []
    for i, x in zip(members, rel):
        full[i] = x
        if x:
            support.append(i)
    zero = tuple(i for i in members if full[i] == 0)
    circ = Circuit(tuple(support), tuple(full), zero,
                   torsion_order=_torsion(config, members))
    return circ.oriented()


def circuit_triangulations(config, circ):
    """The two triangulations T_+/T_- of a spanning extended circuit."""
    members = circ.members
    if len(members) != config.dim + 2:
        raise CircuitError("circuit does not span the configuration dimension")
    t_plus = Triangulation.make([tuple(j for j in members if j != i)
                                 for i in circ.positive])
    t_minus = Triangulation.make([tuple(j for j in members if j != i)
                                  for i in circ.negative])
    return t_plus, t_minus


def _local_cells(circ, sign):
    # exchange cells live on the support; zero-set points of an extended
    # circuit end up inside the separating J-sets instead
    side = circ.positive if sign > 0 else circ.negative
    return [frozenset(j for j in circ.support if j != i) for i in side]


def is_supported(tri, circ, sign):
    """Separating J-sets when `tri` is supported on the circuit, else None."""
    cells = set(tri.cells)
    cell_sets = [set(c) for c in tri.cells]
    side = _local_cells(circ, sign)
    js = set()
    for sigma in side:
        hosts = [c for c in cell_sets if sigma <= c]
        if not hosts:
            return None
        for c in hosts:
            js.add(frozenset(c - sigma))
    for j in js:
        for sigma in side:
            if tuple(sorted(j | sigma)) not in cells:
                return None
    return sorted(tuple(sorted(j)) for j in js)


def modify(tri, circ):
    """Circuit modification s_C: exchange T_+/T_- across every separating J."""
    js = is_supported(tri, circ, +1)
    if js is not None:
        frm, to = _local_cells(circ, +1), _local_cells(circ, -1)
    else:
        js = is_supported(tri, circ, -1)
        if js is None:
            raise CircuitError("triangulation is not supported on the circuit")
        frm, to = _local_cells(circ, -1), _local_cells(circ, +1)
    cells = set(tri.cells)
    for j in js:
        jset = set(j)
        for sigma in frm:
            cells.discard(tuple(sorted(jset | sigma)))
        for sigma in to:
            cells.add(tuple(sorted(jset | sigma)))
    return Triangulation.make(cells)


@dataclass(frozen=True)
class CircuitScalars:
    volume: int                # v_A = Vol(Q), torsion times primitive sum
    d_plus: int
    d_minus: int
    critical_value: tuple      # coprime (numerator, denominator), denominator > 0
    twist: tuple               # ((i, j), Fraction multiple of 2*pi) pairs
    torsion_warning: bool = False


def circuit_scalars(circ):
    """Projective critical value, gerbe weights and boundary twist data."""
    a = circ.relation
    pos, neg = circ.positive, circ.negative
    vol = circ.torsion_order * sum(a[i] for i in pos)
    d_plus = 0
    for i in pos:
        d_plus = gcd(d_plus, a[i])
    d_minus = 0
    for j in neg:
        d_minus = gcd(d_minus, -a[j])
    num = 1
    for i in pos:
        num *= a[i] ** a[i]
    den = 1
    for j in neg:
        den *= a[j] ** (-a[j])
    g = gcd(abs(num), abs(den))
    num //= g
    den //= g
    if den < 0:
        num, den = -num, -den
    twist = tuple(((i, j), Fraction(-gcd(a[i], -a[j]), lcm(a[i], -a[j])))
                  for i in pos for j in neg)
    return CircuitScalars(vol, d_plus, d_minus, (num, den), twist,
                          torsion_warning=circ.torsion_order != 1)


@dataclass(frozen=True)
class MorseData:
    hessian: tuple           # (p+q-2)-square, rows of Fractions
    morse_signature: tuple   # (t_plus, t_minus, corner)


def _congruence_signature(matrix):
    """(positive, negative) inertia by exact symmetric congruence."""
    m = [list(row) for row in matrix]
    pos = neg = 0
    while m:
        k = len(m)
        piv = next((i for i in range(k) if m[i][i] != 0), None)
        if piv is None:
            ij = next(((i, j) for i in range(k) for j in range(k) if m[i][j] != 0),
                      None)
            if ij is None:
                break
            i, j = ij
            for r in range(k):
                m[r][i] += m[r][j]
            for c in range(k):
                m[i][c] += m[j][c]
            piv = i
        if piv != 0:
            m[0], m[piv] = m[piv], m[0]
            for r in m:
                r[0], r[piv] = r[piv], r[0]
        d = m[0][0]
        if d > 0:
            pos += 1
        else:
            neg += 1
        nxt = []
        for i in range(1, len(m)):
            f = Fraction(m[i][0], 1) / d
            nxt.append([m[i][j] - f * m[0][j] for j in range(1, len(m))])
        m = nxt
    return pos, neg


def morse_data(circ):
    """Hessian at the stratified critical point and its exact signature.

    Indices are taken in the order positives, zeros, negatives; the stated
    matrix lives on the tangent space of the corner stratum and its
    congruence signature, after the (-1)^q normalization, must equal
    (q-1, p-1; r).
    """
    a = circ.relation
    pos = list(circ.positive)
    neg = list(circ.negative)
    p, q = len(pos), len(neg)
    r = len(circ.zero_set)
    a0 = a[pos[0]]
    a_last = a[neg[-1]]
    diag = [a[i] for i in pos[1:]] + [a[j] for j in neg[:-1]]
    k = p + q - 2
    sc = circuit_scalars(circ)
    c_val = Fraction(sc.critical_value[0], sc.critical_value[1])
    factor = -c_val * a0 * a0
    hess = [[factor * (Fraction(1, diag[i]) if i == j else 0)
             + factor * Fraction(1, a_last)
             for j in range(k)] for i in range(k)]
    signed = [[x if q % 2 == 0 else -x for x in row] for row in hess]
    tpos, tneg = _congruence_signature(signed)
    if (tpos, tneg) != (q - 1, p - 1):
        raise CircuitError(
            f"congruence signature {(tpos, tneg)} disagrees with (q-1, p-1) "
            f"= {(q - 1, p - 1)} for relation {circ.relation}")
    return MorseData(tuple(tuple(row) for row in hess), (tpos, tneg, r))
