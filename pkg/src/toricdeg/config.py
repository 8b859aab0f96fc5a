"""Marked lattice point configurations and their basic invariants.

A configuration is a finite ordered list of pairwise distinct points of Z^d
whose affine span is all of R^d, together with the convex hull data (facet
normals in the inward-primitive convention, vertex set) and the Hermite-form
basis of its lattice of integer affine relations.
"""

import json
from dataclasses import dataclass, field

from . import linalg as la
from .hull import Hull, HullError


class ConfigError(Exception):
    pass


def lifted_matrix(points):
    """Rows (coordinates..., 1) transposed: the (d+1) x n matrix of (alpha, 1)."""
    d = len(points[0])
    return [[p[j] for p in points] for j in range(d)] + [[1] * len(points)]


@dataclass(frozen=True)
class AffineRelationLattice:
    basis: tuple  # HNF rows, each summing to 0 and annihilating the points
    rank: int


@dataclass
class PointConfiguration:
    points: list
    dim: int = field(init=False)
    hull: Hull = field(init=False, repr=False)

    def __post_init__(self):
        pts = [tuple(int(x) for x in p) for p in self.points]
        if not pts:
            raise ConfigError("no points")
        d = len(pts[0])
        if d < 1 or any(len(p) != d for p in pts):
            raise ConfigError("inconsistent point dimension")
        if len(set(pts)) != len(pts):
            raise ConfigError("points must be pairwise distinct")
        self.points = pts
        self.dim = d
        if len(pts) < d + 1:
            raise ConfigError(f"{len(pts)} points cannot affinely span R^{d}")
        try:
            h = Hull(pts)
        except HullError as e:
            raise ConfigError(str(e))
        if h.dim < d:
            raise ConfigError(
                f"points affinely span only a {h.dim}-dimensional subspace of R^{d};"
                " re-embed with reembed() first")
        self.hull = h

    def __len__(self):
        return len(self.points)

    @property
    def vertex_set(self):
        return self.hull.vertices

    @property
    def hull_facets(self):
        """(inward primitive normal b, offset n_b) pairs: b(v) >= -n_b on Q."""
        out = []
        for u, off, _ in self.hull.facets:
            b = tuple(-x for x in u)
            out.append((b, off))
        return sorted(out)

    def minimal_face(self, point):
        return self.hull.minimal_face(point)

    def index(self, point):
        return self.points.index(tuple(point))

    def affine_relations(self):
        """HNF basis of the integer affine relation lattice; rank n - d - 1."""
        ker = la.integer_kernel(lifted_matrix(self.points))
        lat = AffineRelationLattice(tuple(ker), len(ker))
        assert lat.rank == len(self.points) - self.dim - 1
        return lat

    def volume(self):
        """Normalized volume of Q, by coning the boundary over a vertex."""
        cached = getattr(self, "_volume", None)
        if cached is not None:
            return cached
        v = self._compute_volume()
        self._volume = v
        return v

    def _compute_volume(self):
        if self.dim == 1:
            xs = [p[0] for p in self.points]
            return max(xs) - min(xs)
        v0 = self.points[self.vertex_set[0]]
        return sum(_cone_volume([self.points[i] for i in members], [v0])
                   for u, off, members in self.hull.facets
                   if la.dot(u, v0) < off)

    def to_json_dict(self):
        return {"dim": self.dim, "points": [list(p) for p in self.points]}


def _cone_volume(points, apexes):
    """Normalized volume of conv(points) coned over the apex list."""
    h = Hull(points)
    if h.dim == 1:
        ends = [points[i] for i in h.vertices]
        return normalized_volume(ends + apexes)
    w0 = points[h.vertices[0]]
    return sum(_cone_volume([points[i] for i in members], apexes + [w0])
               for u, off, members in h.facets
               if la.dot(u, w0) < off)


def normalized_volume(simplex_points):
    """|det| of the edge matrix of a (d+1)-point simplex; 0 iff degenerate."""
    pts = [tuple(p) for p in simplex_points]
    d = len(pts[0])
    if len(pts) != d + 1:
        raise ValueError(f"need exactly {d + 1} points in dimension {d}, got {len(pts)}")
    rows = [list(la.vec_sub(p, pts[0])) for p in pts[1:]]
    return abs(la.det(rows))


def reembed(points):
    """Coordinates of a non-spanning point list inside its own affine lattice.

    Returns (new_points, rank): unimodular coordinates on the saturation of
    the affine span, so normalized volumes are preserved.
    """
    pts = [tuple(p) for p in points]
    p0 = pts[0]
    dirs = [la.vec_sub(p, p0) for p in pts[1:]]
    sat = la.saturation_basis(dirs, len(p0))
    r = len(sat)
    if r == 0:
        return [() for _ in pts], 0
    bt = [[sat[i][j] for i in range(r)] for j in range(len(p0))]
    out = []
    for p in pts:
        coords = la.solve(bt, list(la.vec_sub(p, p0)))
        if coords is None or any(c.denominator != 1 for c in coords):
            raise ConfigError("re-embedding failed")
        out.append(tuple(int(c) for c in coords))
    return out, r


def load_config(path_or_dict):
    """Read {"dim": d, "points": [[..], ..], "marks": [..]?} (integers only)."""
    if isinstance(path_or_dict, dict):
        data = path_or_dict
    else:
        with open(path_or_dict) as fh:
            data = json.load(fh)
    if not isinstance(data, dict) or "points" not in data or "dim" not in data:
        raise ConfigError("input must be an object with 'dim' and 'points'")
    d = data["dim"]
    if not isinstance(d, int):
        raise ConfigError("'dim' must be an integer")
    pts = data["points"]
    if not isinstance(pts, list) or not pts:
        raise ConfigError("'points' must be a nonempty list")
    clean = []
    for p in pts:
        if not isinstance(p, list) or len(p) != d:
            raise ConfigError(f"point {p!r} does not have {d} coordinates")
        for x in p:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ConfigError(f"non-integer coordinate {x!r}")
        clean.append(tuple(p))
    marks = data.get("marks")
    if marks is not None:
        if (not isinstance(marks, list)
                or any(not isinstance(i, int) or isinstance(i, bool) for i in marks)
                or any(i < 0 or i >= len(clean) for i in marks)):
            raise ConfigError("'marks' must be a list of point indices")
        marks = tuple(marks)
    return PointConfiguration(clean), marks
