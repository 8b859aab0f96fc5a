"""Exact convex hulls of rational point sets in any (small) dimension.

Gift wrapping with ridge pivoting over exact rationals.  Degenerate inputs
(points interior to facets, non-simplicial facets, hulls of lower dimension
than the ambient space) are handled without perturbation: a facet is stored
as the full set of input points lying on its supporting hyperplane.

Facet normals follow the outward convention normal . p <= offset.
"""

from fractions import Fraction
from itertools import combinations

from . import linalg as la


class HullError(Exception):
    pass


def _affine_frame(points):
    """Base point and a maximal independent set of direction vectors."""
    p0 = points[0]
    dirs = []
    rows = []
    for p in points[1:]:
        d = la.vec_sub(p, p0)
        if la.rank(rows + [list(d)]) > len(dirs):
            dirs.append(d)
            rows.append(list(d))
    return p0, dirs


class Hull:
    """Convex hull of a finite rational point set."""

    def __init__(self, points):
        if not points:
            raise HullError("empty point set")
        self.points = [tuple(p) for p in points]
        self.ambient_dim = len(self.points[0])
        p0, dirs = _affine_frame(self.points)
        self.dim = len(dirs)
        self._p0 = p0
        self._dirs = dirs
        # rational coordinates of every point in the affine frame
        if self.dim == 0:
            self._red = [() for _ in self.points]
        else:
            bt = [[Fraction(dirs[i][j]) for i in range(self.dim)]
                  for j in range(self.ambient_dim)]
            self._red = []
            for p in self.points:
                rhs = [Fraction(x) for x in la.vec_sub(p, p0)]
                coords = la.solve(bt, rhs)
                if coords is None:
                    raise HullError("inconsistent affine frame")
                self._red.append(coords)
        self.facets = self._compute_facets()
        self._vertices = None

    # -- facet computation ------------------------------------------------

    def _compute_facets(self):
        m = self.dim
        self._red_normals = []
        if m == 0:
            return []
        idx = list(range(len(self._red)))
        raw = _wrap_facets(self._red, idx, m, {})
        facets = []
        for u_red, members in sorted(raw):
            u_amb = self._lift_functional(u_red)
            off = max(la.dot(u_amb, p) for p in self.points)
            mem = tuple(sorted(i for i in range(len(self.points))
                               if la.dot(u_amb, self.points[i]) == off))
            facets.append((u_amb, off, mem))
            self._red_normals.append(u_red)
        return facets

    def _lift_functional(self, u_red):
        """Reduced-coordinate functional -> primitive integer ambient covector."""
        # u_red acts on frame coordinates; compose with x -> coords(x - p0).
        # coords solves B^T c = x - p0, so the ambient row is u_red . B^+.
        m = self.dim
        n = self.ambient_dim
        # Solve for an ambient row w with w . dirs[i] = u_red[i]; any solution
        # restricted to the affine span gives the same facet.
        rows = [list(self._dirs[i]) for i in range(m)]
        w = la.solve(rows, list(u_red))
        if w is None:
            raise HullError("functional lift failed")
        return la.clear_denominators(w) if any(w) else tuple([0] * n)

    # -- faces ------------------------------------------------------------

    @property
    def vertices(self):
        """Indices of extreme points, ascending."""
        if self._vertices is None:
            if self.dim == 0:
                self._vertices = (0,)
            else:
                out = []
                for i in range(len(self.points)):
                    normals = [list(self._red_normals[k])
                               for k, f in enumerate(self.facets)
                               if i in set(f[2])]
                    if normals and la.rank(normals) == self.dim:
                        out.append(i)
                self._vertices = tuple(sorted(out))
        return self._vertices

    def edges(self):
        """Sorted vertex-index pairs spanning the 1-faces."""
        if self.dim == 0:
            return []
        if self.dim == 1:
            vs = self.vertices
            return [tuple(sorted(vs))] if len(vs) == 2 else []
        verts = self.vertices
        vset = set(verts)
        out = []
        incid = {i: frozenset(k for k, f in enumerate(self.facets)
                              if i in set(f[2])) for i in verts}
        for a, b in combinations(verts, 2):
            common = incid[a] & incid[b]
            if not common:
                continue
            members = set.intersection(*(set(self.facets[k][2]) for k in common))
            pts = [self.points[i] for i in members]
            if la.rank([list(la.vec_sub(p, pts[0])) for p in pts[1:]]) == 1:
                ends = members & vset
                if {a, b} <= ends and len(ends) == 2:
                    out.append((a, b))
        return sorted(out)

    def contains(self, x):
        x = tuple(x)
        for u, off, _ in self.facets:
            if la.dot(u, x) > off:
                return False
        if self.dim == self.ambient_dim:
            return True
        # lower-dimensional hull: x must also lie in the affine span
        if self.dim == 0:
            return x == self._p0
        bt = [[Fraction(self._dirs[i][j]) for i in range(self.dim)]
              for j in range(self.ambient_dim)]
        rhs = [Fraction(v) for v in la.vec_sub(x, self._p0)]
        return la.solve(bt, rhs) is not None

    def minimal_face(self, x):
        """(dim, member point indices) of the smallest face containing x."""
        if not self.contains(x):
            raise HullError(f"point {x} is outside the hull")
        tight = [f for f in self.facets if la.dot(f[0], x) == f[1]]
        if not tight:
            return self.dim, tuple(range(len(self.points)))
        members = set.intersection(*(set(f[2]) for f in tight))
        pts = [self.points[i] for i in sorted(members)]
        fdim = la.rank([list(la.vec_sub(p, pts[0])) for p in pts[1:]])
        return fdim, tuple(sorted(members))


def _wrap_facets(red, idx, adim, cache):
    """Gift-wrap facets of the points red[i], i in idx, of affine dimension adim.

    The points may sit inside an affine subspace of their coordinate space
    (this happens in the recursion on facet point sets).  Returns
    [(functional, member_index_tuple)]; functionals are primitive integer
    covectors on the full coordinate space whose restriction to the affine
    hull supports the corresponding facet.
    """
    key = frozenset(idx)
    if key in cache:
        return cache[key]
    pts = {i: red[i] for i in idx}
    if adim == 1:
        # any coordinate that varies is monotone along the line
        ncoords = len(red[idx[0]])
        col = next(j for j in range(ncoords) if len({p[j] for p in pts.values()}) > 1)
        vals = [(p[col], i) for i, p in pts.items()]
        mx = max(v for v, _ in vals)
        mn = min(v for v, _ in vals)
        e = tuple(1 if j == col else 0 for j in range(ncoords))
        res = [(e, tuple(sorted(i for v, i in vals if v == mx))),
               (tuple(-x for x in e), tuple(sorted(i for v, i in vals if v == mn)))]
        cache[key] = res
        return res

    first = _initial_facet(pts, adim)
    done = {}  # facet member set -> representative functional
    queue = [first]
    while queue:
        u, members = queue.pop()
        if members in done:
            continue
        done[members] = u
        sub = _wrap_facets(red, list(members), adim - 1, cache)
        for _, ridge in sub:
            nu, nmem = _pivot(pts, u, members, ridge)
            if nmem not in done:
                queue.append((nu, nmem))
    res = sorted((u, members) for members, u in done.items())
    cache[key] = res
    return res


def _support(pts, u):
    best = None
    for p in pts.values():
        v = la.dot(u, p)
        if best is None or v > best:
            best = v
    members = tuple(sorted(i for i, p in pts.items() if la.dot(u, p) == best))
    return best, members


def _aff_rank(pts, members):
    base = pts[members[0]]
    rows = [list(la.vec_sub(pts[i], base)) for i in members[1:]]
    return la.rank(rows)


def _dir_nullspace(pts, members):
    """Basis of functionals vanishing on the directions of aff(members)."""
    ncoords = len(pts[members[0]])
    base = pts[members[0]]
    rows = [list(la.vec_sub(pts[i], base)) for i in members[1:]]
    rows = [r for r in rows if any(r)]
    if not rows:
        return [tuple(Fraction(1) if j == k else Fraction(0)
                      for j in range(ncoords)) for k in range(ncoords)]
    return la.nullspace(rows)


def _initial_facet(pts, adim):
    """Rotate a supporting functional until its face has dimension adim - 1."""
    some = next(iter(pts.values()))
    ncoords = len(some)
    col = next(j for j in range(ncoords) if len({p[j] for p in pts.values()}) > 1)
    u = tuple(Fraction(1) if j == col else Fraction(0) for j in range(ncoords))
    val, members = _support(pts, u)
    while _aff_rank(pts, members) < adim - 1:
        base = pts[members[0]]
        advanced = False
        for w in _dir_nullspace(pts, members):
            plus = [i for i, p in pts.items()
                    if la.dot(w, la.vec_sub(p, base)) > 0]
            if not plus:
                w = tuple(-x for x in w)
                plus = [i for i, p in pts.items()
                        if la.dot(w, la.vec_sub(p, base)) > 0]
            if not plus:
                continue
            tstar = min((val - la.dot(u, pts[i]))
                        / la.dot(w, la.vec_sub(pts[i], base)) for i in plus)
            u_new = tuple(a + tstar * b for a, b in zip(u, w))
            val_new, members_new = _support(pts, u_new)
            # a w parallel to u on the affine hull collapses the rotation
            # (everything becomes an argmax); skip such candidates
            if _aff_rank(pts, members_new) >= adim:
                continue
            u, val, members = u_new, val_new, members_new
            advanced = True
            break
        if not advanced:
            raise HullError("points do not span the stated dimension")
    ui = la.clear_denominators(u)
    _, mem = _support(pts, ui)
    return ui, mem


def _pivot(pts, u, members, ridge):
    """Rotate the facet (u, members) around one of its ridges to the neighbor."""
    base = pts[ridge[0]]
    ridge_rank = _aff_rank(pts, ridge)
    off_ridge = next(i for i in members if i not in set(ridge)
                     and _aff_rank(pts, tuple(ridge) + (i,)) > ridge_rank)
    w = None
    for cand in _dir_nullspace(pts, ridge):
        v = la.dot(cand, la.vec_sub(pts[off_ridge], base))
        if v != 0:
            w = tuple(-x for x in cand) if v > 0 else cand
            break
    if w is None:
        raise HullError("degenerate ridge")
    # neighbor normal = t* u + w, the extreme supporting combination in the
    # pencil through the ridge: t* = max b_p / (-a_p) over points off the facet
    ratios = []
    for i, p in pts.items():
        a = la.dot(u, la.vec_sub(p, base))
        if a < 0:
            ratios.append(la.dot(w, la.vec_sub(p, base)) / Fraction(-a))
    if not ratios:
        raise HullError("facet has no opposite points")
    tstar = max(ratios)
    nu = tuple(tstar * Fraction(a) + b for a, b in zip(u, w))
    nu = la.clear_denominators(nu)
    _, nmem = _support(pts, nu)
    return nu, nmem


def brute_force_facets(points):
    """Independent facet oracle: try every spanning subset (small inputs only)."""
    h = Hull(points)  # reuse the affine reduction only
    m = h.dim
    red = h._red
    n = len(points)
    found = {}
    if m == 0:
        return []
    for sub in combinations(range(n), m):
        base = red[sub[0]]
        rows = [list(la.vec_sub(red[i], base)) for i in sub[1:]]
        if la.rank(rows) != m - 1:
            continue
        ns = la.nullspace(rows)
        if len(ns) != 1:
            continue
        u = la.clear_denominators(ns[0])
        vals = [la.dot(u, p) for p in red]
        c = la.dot(u, base)
        if all(v <= c for v in vals):
            pass
        elif all(v >= c for v in vals):
            u = tuple(-x for x in u)
            c = -c
            vals = [-v for v in vals]
        else:
            continue
        members = tuple(sorted(i for i in range(n) if vals[i] == c))
        found[u] = members
    out = []
    for u_red, members in sorted(found.items()):
        u_amb = h._lift_functional(u_red)
        off = max(la.dot(u_amb, p) for p in h.points)
        out.append((u_amb, off, members))
    return sorted(out, key=lambda f: (f[0], f[1]))


def lower_facets(lifted_points):
    """Facets of the lower hull of lifted points (last coordinate = height).

    Returns a list of member index tuples; when the lift is affine (hull not
    full-dimensional) the single trivial cell covering everything is returned.
    """
    h = Hull(lifted_points)
    if h.dim < len(lifted_points[0]):
        return [tuple(range(len(lifted_points)))]
    out = [f[2] for f in h.facets if f[0][-1] < 0]
    return sorted(out)
