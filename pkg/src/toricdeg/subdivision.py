"""Regular subdivisions and triangulations of a marked point configuration.

Triangulations are encoded canonically as the sorted tuple of sorted
vertex-index tuples of their cells; cells of a triangulation are marked by
their vertices only, while general subdivisions carry full markings.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .config import PointConfiguration, normalized_volume
from .hull import Hull, lower_facets
from .lp import max_uniform_slack


class SubdivisionError(Exception):
    pass


class ResourceCapError(Exception):
    def __init__(self, msg, partial_count):
        super().__init__(msg)
        self.partial_count = partial_count


@dataclass(frozen=True)
class Triangulation:
    """A triangulation given by its cells (sorted tuples of point indices)."""
    cells: tuple

    @staticmethod
    def make(cells):
        return Triangulation(tuple(sorted(tuple(sorted(c)) for c in cells)))

    @property
    def used_points(self):
        out = set()
        for c in self.cells:
            out.update(c)
        return tuple(sorted(out))

    def __iter__(self):
        return iter(self.cells)


@dataclass(frozen=True)
class Subdivision:
    """Marked cells; a triangulation iff every marking is a (d+1)-simplex."""
    markings: tuple  # sorted tuple of sorted index tuples
    is_triangulation: bool

    def triangulation(self):
        if not self.is_triangulation:
            raise SubdivisionError("subdivision is not a triangulation")
        return Triangulation(self.markings)


@dataclass(frozen=True)
class RegularityCertificate:
    heights: tuple  # Fractions, indexed by the configuration
    slack: Fraction


def induced_subdivision(config, heights):
    """Lower-hull subdivision of the lifted points {(alpha, eta(alpha))}."""
    if len(heights) != len(config):
        raise SubdivisionError("height vector has wrong length")
    lifted = [tuple(p) + (Fraction(h),) for p, h in zip(config.points, heights)]
    cells = lower_facets(lifted)
    d = config.dim
    is_tri = all(len(c) == d + 1 for c in cells)
    return Subdivision(tuple(sorted(cells)), is_tri)


def _cell_volume(points):
    if len(points) == len(points[0]) + 1:
        return normalized_volume(points)
    sub = PointConfiguration(points)
    return sub.volume()


def validate_subdivision(config, markings):
    """Cheap structural checks; raises SubdivisionError on bad geometry."""
    d = config.dim
    total = 0
    for cell in markings:
        pts = [config.points[i] for i in cell]
        if len(pts) < d + 1:
            raise SubdivisionError(f"cell {cell} has too few points")
        base = pts[0]
        if la.rank([list(la.vec_sub(p, base)) for p in pts[1:]]) != d:
            raise SubdivisionError(f"cell {cell} is not full-dimensional")
        total += _cell_volume(pts)
    if total != config.volume():
        raise SubdivisionError(
            f"cell volumes sum to {total}, expected {config.volume()}")


def is_regular(config, subdivision, check=True):
    """Exact-LP regularity test.

    Accepts a Subdivision or Triangulation.  Returns a RegularityCertificate
    whose heights induce exactly the given subdivision with positive slack,
    or None when the subdivision is not regular.  `check=False` skips the
    certificate round trip (used on flip-search internals where the input is
    structurally valid by construction).
    """
    if isinstance(subdivision, Triangulation):
        markings = subdivision.cells
    else:
        markings = subdivision.markings
    validate_subdivision(config, markings)
    n = len(config)
    eq_rows, eq_rhs = [], []
    strict_rows, strict_rhs = [], []
    for cell in markings:
        base = _affine_basis(config, cell)
        others = [i for i in range(n) if i not in base]
        marked = set(cell)
        for i in others:
            lam = la.barycentric([config.points[j] for j in base],
                                 config.points[i])
            row = [Fraction(0)] * n
            row[i] = Fraction(-1)
            for j, l in zip(base, lam):
                row[j] += l
            # row . eta = sum lam_j eta_j - eta_i
            if i in marked:
                eq_rows.append(row)
                eq_rhs.append(Fraction(0))
            else:
                strict_rows.append(row)  # require eta_i > affine extension
                strict_rhs.append(Fraction(0))
    res = max_uniform_slack(strict_rows, strict_rhs, eq_rows, eq_rhs)
    if res is None or res[0] <= 0:
        return None
    slack, heights = res
    cert = RegularityCertificate(tuple(heights), slack)
    if check:
        induced = induced_subdivision(config, cert.heights)
        if induced.markings != tuple(sorted(tuple(c) for c in markings)):
            raise SubdivisionError("certificate does not reproduce the subdivision")
    return cert


def _affine_basis(config, cell):
    """d+1 affinely independent indices from a cell marking."""
    base = [cell[0]]
    rows = []
    p0 = config.points[cell[0]]
    for i in cell[1:]:
        dvec = list(la.vec_sub(config.points[i], p0))
        if la.rank(rows + [dvec]) > len(rows):
            rows.append(dvec)
            base.append(i)
        if len(base) == config.dim + 1:
            break
    return base


def lex_order(config):
    """Default insertion order: lexicographic on point coordinates."""
    return tuple(sorted(range(len(config)), key=lambda i: config.points[i]))


def placing_triangulation(config, order=None):
    """Regular seed triangulation from steeply graded heights.

    Heights B^position force the lower hull to insert points in the given
    order; B is escalated until the induced subdivision is a triangulation
    (ties can survive small B on degenerate configurations).
    """
    if order is None:
        order = lex_order(config)
    if sorted(order) != list(range(len(config))):
        raise SubdivisionError("order must be a permutation of the point indices")
    pos = {i: k for k, i in enumerate(order)}
    for b in (2, 3, 7, 101, 100003):
        heights = [Fraction(b) ** pos[i] for i in range(len(config))]
        sub = induced_subdivision(config, heights)
        if sub.is_triangulation:
            return sub.triangulation()
    raise SubdivisionError("could not derive a placing triangulation")


def gkz_vertex(config, tri):
    """phi_T: coordinate at alpha sums the volumes of the cells using alpha."""
    phi = [0] * len(config)
    for cell in tri.cells:
        vol = normalized_volume([config.points[i] for i in cell])
        for i in cell:
            phi[i] += vol
    return tuple(phi)


def weighted_gkz_sum(config, tri):
    """sum_alpha phi_T(alpha) * (alpha, 1); constant across triangulations."""
    phi = gkz_vertex(config, tri)
    out = [0] * (config.dim + 1)
    for i, p in enumerate(config.points):
        for j, x in enumerate(tuple(p) + (1,)):
            out[j] += phi[i] * x
    return tuple(out)


@dataclass
class SecondaryPolytope:
    config: PointConfiguration
    triangulations: list  # Triangulation, sorted by canonical key
    gkz: dict             # Triangulation -> phi tuple
    edges: list           # (T_small, T_big, Circuit) canonical

    @property
    def dim(self):
        return len(self.config) - self.config.dim - 1

    def edge_pairs(self):
        return sorted((a.cells, b.cells) for a, b, _ in self.edges)


def enumerate_regular_triangulations(config, cap=None):
    """BFS over supported circuit modifications, restricted to regular results.

    Completeness comes from the connectivity of the secondary polytope
    1-skeleton; raises ResourceCapError when more than `cap` triangulations
    are found.
    """
    from .circuits import find_circuits, is_supported, modify

    circuits = find_circuits(config)
    start = placing_triangulation(config)
    if is_regular(config, start, check=False) is None:
        raise SubdivisionError("placing triangulation failed its own certificate")
    visited = {start.cells: start}
    rejected = set()
    edges = {}
    frontier = [start]
    while frontier:
        tri = frontier.pop()
        for circ in circuits:
            if (is_supported(tri, circ, +1) is None
                    and is_supported(tri, circ, -1) is None):
                continue
            nxt = modify(tri, circ)
            if nxt.cells in rejected:
                continue
            if nxt.cells not in visited:
                if cap is not None and len(visited) >= cap:
                    raise ResourceCapError(
                        f"triangulation cap {cap} exceeded", len(visited))
                if is_regular(config, nxt, check=False) is None:
                    rejected.add(nxt.cells)
                    continue
                visited[nxt.cells] = nxt
                frontier.append(nxt)
            key = tuple(sorted([tri.cells, nxt.cells]))
            edges.setdefault(key, circ)
    tris = [visited[k] for k in sorted(visited)]
    gkz = {t: gkz_vertex(config, t) for t in tris}
    edge_list = sorted(
        ((visited[a], visited[b], c) for (a, b), c in edges.items()),
        key=lambda e: (e[0].cells, e[1].cells))
    return SecondaryPolytope(config, tris, gkz, edge_list)


def gale_coordinates(config, vectors):
    """Coordinates of integer vectors from the relation lattice L_A in its HNF basis."""
    basis = config.affine_relations().basis
    m = len(basis)
    if m == 0:
        return [() for _ in vectors]
    bt = [[basis[i][j] for i in range(m)] for j in range(len(config))]
    out = []
    for v in vectors:
        coords = la.solve(bt, list(v))
        if coords is None or any(c.denominator != 1 for c in coords):
            raise SubdivisionError(f"{v} is not in the relation lattice")
        out.append(tuple(int(c) for c in coords))
    return out


def secondary_hull(secpoly):
    """Exact hull of the GKZ vectors in HNF Gale coordinates.

    Returns (hull, triangulation_list) with triangulation_list[i] the
    triangulation of hull point i.
    """
    tris = secpoly.triangulations
    phis = [secpoly.gkz[t] for t in tris]
    base = phis[0]
    reduced = gale_coordinates(secpoly.config,
                               [la.vec_sub(phi, base) for phi in phis])
    return Hull(reduced), tris


def secondary_fan_rays(secpoly):
    """Primitive rays of the normal fan of Sec(A) in the HNF Gale basis.

    Each facet of Sec(A) contributes the inner normal: the defining-function
    direction selecting that coarse subdivision.
    """
    if secpoly.dim == 0:
        return []
    h, _ = secondary_hull(secpoly)
    rays = [tuple(-x for x in u) for u, _, _ in h.facets]
    return sorted(rays)


def lafforgue_vertices(secpoly):
    """All phi_T + e_alpha for T regular and alpha used by T."""
    out = []
    for t in secpoly.triangulations:
        phi = secpoly.gkz[t]
        for i in t.used_points:
            v = list(phi)
            v[i] += 1
            out.append(tuple(v))
    return sorted(out)
