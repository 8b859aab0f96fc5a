"""Sharpened-pencil functionals, monotone path vertices and radar screens.

The monotone path polytope of Sec(A) relative to the pencil functional f is
the fiber polytope of the projection f: its vertices are the coherent
f-monotone edge paths.  Vertex-hood of a candidate path is decided by an
exact LP in the sweep functional theta; the same paths feed the independent
Minkowski-integral hull oracle used by the verification suite.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import cos, gcd, pi, sin

from . import linalg as la
from .hull import Hull
from .lp import max_uniform_slack
from .subdivision import gale_coordinates


class PencilError(Exception):
    pass


@dataclass(frozen=True)
class SharpenedPencil:
    """Index subset A' of the configuration; functional sum of e_alpha duals."""
    sharp_set: tuple

    def value(self, phi):
        return sum(phi[i] for i in self.sharp_set)


def make_pencil(config, sharp_set):
    sharp = tuple(sorted(set(sharp_set)))
    if not sharp:
        raise PencilError("A' must be nonempty")
    if any(i < 0 or i >= len(config) for i in sharp):
        raise PencilError("A' indices out of range")
    return SharpenedPencil(sharp)


def f_values(secpoly, pencil):
    """Map triangulation -> f(phi_T)."""
    return {t: pencil.value(secpoly.gkz[t]) for t in secpoly.triangulations}


@dataclass(frozen=True)
class MonotonePathVertex:
    sequence: tuple        # triangulations, f strictly increasing
    f_values: tuple
    circuit_labels: tuple  # circuit per step, canonically oriented
    decorations: tuple     # (m_j, e_j, d_j) per step
    coherence_theta: tuple


def _monotone_paths(secpoly, fvals):
    """All f-monotone edge paths from min-value to max-value GKZ vertices."""
    fmin = min(fvals.values())
    fmax = max(fvals.values())
    if fmin == fmax:
        if len(secpoly.triangulations) == 1:
            t = secpoly.triangulations[0]
            return [((t,), ())], fmin, fmax
        raise PencilError("pencil functional is constant on the secondary polytope")
    adj = {}
    for a, b, circ in secpoly.edges:
        adj.setdefault(a, []).append((b, circ))
        adj.setdefault(b, []).append((a, circ))
    paths = []

    def extend(path, labels):
        t = path[-1]
        if fvals[t] == fmax:
            paths.append((tuple(path), tuple(labels)))
            return
        for nxt, circ in adj.get(t, ()):
            if fvals[nxt] > fvals[t]:
                path.append(nxt)
                labels.append(circ)
                extend(path, labels)
                path.pop()
                labels.pop()

    for t in secpoly.triangulations:
        if fvals[t] == fmin:
            extend([t], [])
    return paths, fmin, fmax


def _coherence_theta(secpoly, fvals, path):
    """Sweep certificate: theta whose parametric path is exactly `path`.

    At each breakpoint the tied pair must strictly dominate every other GKZ
    vertex; by linearity this pins the whole sweep.  Returns theta when the
    strict system is solvable, else None.
    """
    n = len(secpoly.config)
    tris = secpoly.triangulations
    if len(path) == 1:
        return tuple([Fraction(0)] * n)
    rows, rhs = [], []
    for j in range(len(path) - 1):
        vj, vj1 = path[j], path[j + 1]
        pj, pj1 = secpoly.gkz[vj], secpoly.gkz[vj1]
        dj = Fraction(fvals[vj1] - fvals[vj])
        for u in tris:
            if u is vj or u is vj1:
                continue
            pu = secpoly.gkz[u]
            su = fvals[u]
            # theta(u) + a* f(u) < theta(vj) + a* f(vj) at the tie value a*
            row = [(Fraction(pu[i] - pj[i])
                    + Fraction(su - fvals[vj]) * Fraction(pj[i] - pj1[i]) / dj)
                   for i in range(n)]
            rows.append(row)
            rhs.append(Fraction(0))
    res = max_uniform_slack(rows, rhs)
    if res is None or res[0] <= 0:
        return None
    return res[1]


def decorate(secpoly, pencil, path, labels=None, theta=None):
    """Attach (m_j, e_j, d_j) decorations to a monotone edge path."""
    fvals = f_values(secpoly, pencil)
    edge_lookup = {}
    for a, b, circ in secpoly.edges:
        edge_lookup[(a.cells, b.cells)] = circ
        edge_lookup[(b.cells, a.cells)] = circ
    decos = []
    labs = []
    for j in range(len(path) - 1):
        a, b = path[j], path[j + 1]
        m = fvals[b] - fvals[a]
        if m <= 0:
            raise PencilError("path is not strictly f-monotone")
        delta = la.vec_sub(secpoly.gkz[b], secpoly.gkz[a])
        e = 0
        for x in delta:
            e = gcd(e, abs(x))
        if m % e:
            raise PencilError(
                f"edge gcd {e} does not divide the f-increment {m}")
        decos.append((m, e, m // e))
        if labels is not None:
            labs.append(labels[j])
        else:
            circ = edge_lookup.get((a.cells, b.cells))
            if circ is None:
                raise PencilError("consecutive triangulations are not an edge")
            labs.append(circ)
    return MonotonePathVertex(
        tuple(path), tuple(fvals[t] for t in path), tuple(labs),
        tuple(decos), tuple(theta) if theta is not None else ())


def enumerate_monotone_vertices(secpoly, pencil):
    """All coherent monotone paths; the vertices of the monotone path polytope."""
    fvals = f_values(secpoly, pencil)
    paths, _, _ = _monotone_paths(secpoly, fvals)
    out = []
    for path, labels in paths:
        theta = _coherence_theta(secpoly, fvals, path)
        if theta is None:
            continue
        out.append(decorate(secpoly, pencil, path, labels, theta))
    return sorted(out, key=lambda v: tuple(t.cells for t in v.sequence))


def path_integral_point(secpoly, fvals, path):
    """Twice the Minkowski integral of the path section: sum m_j (phi_j + phi_j+1)."""
    n = len(secpoly.config)
    out = [0] * n
    for j in range(len(path) - 1):
        m = fvals[path[j + 1]] - fvals[path[j]]
        pa, pb = secpoly.gkz[path[j]], secpoly.gkz[path[j + 1]]
        for i in range(n):
            out[i] += m * (pa[i] + pb[i])
    return tuple(out)


def monotone_path_hull(secpoly, pencil):
    """Independent oracle: exact hull of the integral points of all paths.

    Returns (hull, points, paths); the hull vertices are the monotone path
    polytope vertices by the fiber polytope construction.
    """
    fvals = f_values(secpoly, pencil)
    paths, _, _ = _monotone_paths(secpoly, fvals)
    pts = [path_integral_point(secpoly, fvals, p) for p, _ in paths]
    base = pts[0]
    reduced = gale_coordinates(secpoly.config,
                               [la.vec_sub(x, base) for x in pts])
    if all(not any(r) for r in reduced):
        # single point: every path integral coincides (segment secondary polytope)
        return None, pts, paths
    return Hull(reduced), pts, paths


@dataclass(frozen=True)
class RadarSector:
    annulus: int        # 1-based edge index along the path
    wedge: int          # 0 <= wedge < m_j / d_j
    angle_start: Fraction  # multiples of 2*pi
    angle_width: Fraction
    radius_inner: object
    radius_outer: object   # None encodes the infinite sentinel


@dataclass(frozen=True)
class RadarScreen:
    sectors: tuple
    labels: tuple  # per basis path: (label, annulus, wedge, slot)

    @property
    def size(self):
        return len(self.labels)


def radar_screen(vertex, radial=None):
    """Annulus-and-sector decomposition encoding the vanishing path order.

    One annulus per path edge; the j-th annulus splits into m_j/d_j wedges of
    angular width 2*pi*d_j/m_j holding d_j endpoints each.  The default
    radial function is g(i_j) = j with an infinite outer sentinel.
    """
    r = len(vertex.decorations)
    if radial is None:
        radial = list(range(r)) + [None]
    else:
        radial = list(radial)
        if len(radial) != r + 1:
            raise PencilError("radial function needs one value per path vertex")
        if radial[0] != 0 or radial[-1] is not None:
            raise PencilError("radial function must start at 0 and end at the sentinel")
    sectors = []
    labels = []
    count = 0
    for j, (m, e, d) in enumerate(vertex.decorations, start=1):
        wedges = m // d
        width = Fraction(d, m)
        for k in range(wedges):
            sectors.append(RadarSector(
                j, k, Fraction(k) * width, width,
                radial[j - 1], radial[j]))
            for slot in range(d):
                count += 1
                labels.append((count, j, k, slot))
    return RadarScreen(tuple(sectors), tuple(labels))


def radar_plot_data(screen):
    """Float polyline data for external plotting (the only float surface)."""
    out = []
    finite = [s.radius_outer for s in screen.sectors if s.radius_outer is not None]
    fallback = (max(finite) if finite else 0) + 1
    by_sector = {(s.annulus, s.wedge): s for s in screen.sectors}
    for label, j, k, slot in screen.labels:
        s = by_sector[(j, k)]
        inner = float(s.radius_inner)
        outer = float(s.radius_outer) if s.radius_outer is not None else fallback
        d = sum(1 for lb in screen.labels if lb[1] == j and lb[2] == k)
        radius = inner + (outer - inner) * (slot + 1) / (d + 1)
        angle = 2 * pi * float(s.angle_start + s.angle_width / 2)
        endpoint = (radius * cos(angle), radius * sin(angle))
        start = (outer + 1.0, 0.0)
        elbow = (radius * cos(angle) * 1.0 + 0.0, radius * sin(angle))
        out.append({"label": label,
                    "polyline": [start, elbow, endpoint]})
    return out
