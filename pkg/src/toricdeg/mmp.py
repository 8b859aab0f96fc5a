"""Toric minimal-model runs driven by triangulation surgery.

A triangulation T of A containing a distinguished point alpha_0 determines a
complete simplicial stacky fan: quotient by the span of the minimal simplex
face holding alpha_0 and take the images of the star cells.  Walls of the fan
carry extended circuits (oriented with a negative alpha_0 entry) whose
signature classifies the extremal contraction; running all of them down to a
Mori fibration reproduces, bijectively, the monotone path vertices of the
sharpened pencil at alpha_0.  All fan surgery is performed as triangulation
surgery and re-projection.
"""

import functools
from dataclasses import dataclass
from itertools import combinations

from . import linalg as la
from .circuits import extended_circuit, is_supported, modify
from .config import normalized_volume
from .hull import Hull
from .monopath import enumerate_monotone_vertices, make_pencil
from .subdivision import enumerate_regular_triangulations, gkz_vertex


class MMPError(Exception):
    pass


class NefFanoError(MMPError):
    pass


@dataclass(frozen=True)
class StackyFanData:
    """Complete simplicial fan in the free quotient lattice.

    `tau` is the minimal face of a covering simplex containing alpha_0;
    `proj` maps Z^d onto Z^k with kernel the saturation of span(tau), and
    `torsion` records the index of span(tau) in its saturation.  Cones are
    stored as (cell, generator image) data keyed by the source cells.
    """
    config: object
    triangulation: object
    alpha0: int
    tau: tuple
    proj: tuple
    quotient_rank: int
    torsion: int
    max_cones: tuple   # ((cell indices), (generator image vectors)) pairs
    rays: tuple        # image vector per ray index, sorted by index

    @property
    def volume(self):
        total = 0
        for _, gens in self.max_cones:
            total += abs(la.det([list(g) for g in gens])) if gens else 1
        return total

    def ray_indices(self):
        """r_i per one-cone generator: index of Z.g inside its saturation."""
        return {i: la.vec_gcd(g) for i, g in self.rays}


def _translated(config, alpha0):
    base = config.points[alpha0]
    return [tuple(x - b for x, b in zip(p, base)) for p in config.points]


def fan_from_triangulation(config, tri, alpha0):
    """Stacky fan of the star of alpha_0, projected along its minimal face."""
    pts = _translated(config, alpha0)
    d = config.dim
    origin = tuple([0] * d)
    tau = None
    for cell in tri.cells:
        lam = la.barycentric([pts[i] for i in cell], origin)
        if lam is None or any(c < 0 for c in lam):
            continue
        face = tuple(sorted(i for i, c in zip(cell, lam) if c > 0))
        if tau is None:
            tau = face
        elif tau != face:
            raise MMPError("inconsistent minimal faces across covering cells")
    if tau is None:
        raise MMPError(f"point {alpha0} is not covered by the triangulation")
    tau_gens = [pts[i] for i in tau]
    proj, k, torsion = la.quotient_map(tau_gens, d)

    def image(i):
        return tuple(la.dot(row, pts[i]) for row in proj)

    tau_set = set(tau)
    cones = []
    ray_map = {}
    for cell in tri.cells:
        if not tau_set <= set(cell):
            continue
        rest = tuple(i for i in cell if i not in tau_set)
        gens = tuple(image(i) for i in rest)
        cones.append((rest, gens))
        for i, g in zip(rest, gens):
            ray_map[i] = g
    return StackyFanData(config, tri, alpha0, tau, tuple(proj), k, torsion,
                         tuple(sorted(cones)), tuple(sorted(ray_map.items())))


def vol(fan):
    return fan.volume


@dataclass(frozen=True)
class WallCircuit:
    wall: tuple        # shared facet indices (including tau)
    circuit: object    # extended circuit, alpha_0 entry negative
    flanks: tuple
    supports: tuple    # separating J index sets (the r-cone collection)

    def signature(self):
        return self.circuit.signature()


def wall_circuits(fan):
    """Extended circuits over the interior walls of the star fan.

    Walls whose circuit relation vanishes at alpha_0 (crepant walls, no
    f-movement) fall outside the contraction trichotomy and are skipped.
    """
    config = fan.config
    star = [cell for cell, _ in fan.max_cones]
    full = {tuple(sorted(set(c) | set(fan.tau))) for c in star}
    out = []
    seen = set()
    for c1, c2 in combinations(sorted(full), 2):
        shared = tuple(sorted(set(c1) & set(c2)))
        if len(shared) != config.dim or shared in seen:
            continue
        seen.add(shared)
        members = tuple(sorted(set(c1) | set(c2)))
        circ = extended_circuit(config, members)
        if circ.relation[fan.alpha0] == 0:
            continue
        circ = circ.oriented(negative_at=fan.alpha0)
        js = is_supported(fan.triangulation, circ, +1)
        if js is None:
            continue
        flanks = tuple(sorted((set(c1) - set(shared)) | (set(c2) - set(shared))))
        out.append(WallCircuit(shared, circ, flanks, tuple(js)))
    return sorted(out, key=lambda w: (w.circuit.support, w.wall))


@dataclass(frozen=True)
class FanSketch:
    rank: int
    cones: tuple      # generator image tuples per cone
    volume: int


def _quotient_fan(pts, span_idx, cone_sets, d):
    """Images of cones under the free quotient by span of the given points."""
    proj, k, _ = la.quotient_map([pts[i] for i in span_idx], d)
    cones = []
    total = 0
    for cone in cone_sets:
        gens = tuple(tuple(la.dot(row, pts[i]) for row in proj) for i in cone)
        gens = tuple(g for g in gens if any(g))
        cones.append(gens)
        if len(gens) == k:
            total += abs(la.det([list(g) for g in gens])) if gens else 1
    if k == 0:
        total = 1
    return FanSketch(k, tuple(sorted(set(cones))), total)


@dataclass(frozen=True)
class ContractionStep:
    kind: str              # 'mori-fiber' | 'divisorial' | 'flip'
    wall: WallCircuit
    vol0: int
    index_w: int
    fiber: FanSketch
    exceptional: FanSketch
    base: FanSketch
    vol_before: int
    vol_after: int

    @property
    def rank_drop(self):
        return self.vol0 * self.base.volume


def classify_and_contract(fan, wall, tri=None):
    """Contraction step across a wall plus the successor stacky fan."""
    config = fan.config
    tri = tri or fan.triangulation
    circ = wall.circuit
    if circ.relation[fan.alpha0] >= 0:
        raise MMPError("wall circuit must have a negative alpha_0 entry")
    if is_supported(tri, circ, +1) is None:
        raise MMPError("triangulation is not supported on the wall circuit")
    q = len(circ.negative)
    kind = "mori-fiber" if q == 1 else ("divisorial" if q == 2 else "flip")
    pts = _translated(config, fan.alpha0)
    d = config.dim
    members = circ.members
    others = tuple(i for i in members if i != fan.alpha0)
    i_w = la.index_in_ambient([pts[i] for i in others], d)
    if i_w is None:
        raise MMPError("wall circuit does not span the ambient lattice")
    # Vol_0(C(w)) = i_w * sum of the non-alpha_0 relation entries = -i_w * a_0;
    # must agree with the direct normalized volume of the opposite simplex
    vol0 = i_w * (-circ.relation[fan.alpha0])
    direct = normalized_volume([pts[i] for i in others])
    if vol0 != direct:
        raise MMPError(
            f"volume bookkeeping mismatch: i_w sum {vol0} != simplex volume {direct}")
    core = circ.support
    neg = circ.negative
    upsilon = [tuple(i for i in core if i not in (j, fan.alpha0))
               for j in circ.positive]
    supports = wall.supports
    fiber = _quotient_fan_in_span(pts, core, neg, upsilon, d)
    exceptional = _quotient_fan(
        pts, [i for i in neg], [tuple(set(u) | set(s)) for u in upsilon
                                for s in supports], d)
    base = _quotient_fan(pts, list(core), supports, d)
    succ_tri = modify(tri, circ)
    succ = fan_from_triangulation(config, succ_tri, fan.alpha0)
    step = ContractionStep(kind, wall, vol0, i_w, fiber, exceptional, base,
                           fan.volume, succ.volume)
    return step, succ


def _quotient_fan_in_span(pts, core, neg, cone_sets, d):
    """Fiber fan: quotient of the core span by the span of the negatives."""
    span = la.saturation_basis([pts[i] for i in core], d)
    kc = len(span)
    bt = [[span[i][j] for i in range(kc)] for j in range(d)]
    coords = {}
    for i in core:
        c = la.solve(bt, list(pts[i]))
        coords[i] = tuple(int(x) for x in c)
    proj, k, _ = la.quotient_map([coords[i] for i in neg], kc)
    cones = []
    total = 0
    for cone in cone_sets:
        gens = tuple(tuple(la.dot(row, coords[i]) for row in proj) for i in cone)
        gens = tuple(g for g in gens if any(g))
        cones.append(gens)
        if len(gens) == k and k > 0:
            total += abs(la.det([list(g) for g in gens]))
    if k == 0:
        total = 1
    return FanSketch(k, tuple(sorted(set(cones))), total)


def nef_fano_check(config, alpha0):
    """Sigma(1) inside the boundary of its own hull, alpha_0 interior."""
    pts = _translated(config, alpha0)
    others = [p for i, p in enumerate(pts) if i != alpha0]
    h = Hull(others)
    if h.dim < config.dim:
        raise MMPError("rays do not span")
    fdim, _ = h.minimal_face(tuple([0] * config.dim))
    if fdim != config.dim:
        raise NefFanoError("alpha_0 is not interior to the ray hull")
    for p in others:
        if h.minimal_face(p)[0] == h.dim:
            raise NefFanoError(f"ray {p} lies in the interior of the ray hull:"
                               " the anticanonical class is not nef")


@dataclass(frozen=True)
class MMPSequence:
    fans: tuple    # stacky fans, source first, base last
    steps: tuple   # ContractionStep per arrow

    def labels(self):
        return tuple(_label(s.wall.circuit) for s in self.steps)


def _label(circ):
    c = circ.oriented()
    return (c.support, tuple(c.relation[i] for i in c.support))


def enumerate_mmp_sequences(config, alpha0, allow_non_fano=False, cap=None,
                            secpoly=None, vertices=None):
    """One MMP run per monotone path vertex, walked from the f-max end down.

    Returns (sequences, monotone_vertices); sequences[i] corresponds to
    vertices[i] step by step.
    """
    if not allow_non_fano:
        nef_fano_check(config, alpha0)
    if secpoly is None:
        secpoly = enumerate_regular_triangulations(config, cap=cap)
    pencil = make_pencil(config, [alpha0])
    if vertices is None:
        vertices = enumerate_monotone_vertices(secpoly, pencil)
    fmax_tris = [t for t in secpoly.triangulations
                 if secpoly.gkz[t][alpha0] == config.volume()]
    if len(fmax_tris) != 1:
        raise MMPError(
            f"the f-maximal (star) triangulation is not unique "
            f"({len(fmax_tris)} candidates); the pencil start is ambiguous")
    sequences = []
    for vert in vertices:
        seq = _walk_down(config, alpha0, vert)
        sequences.append(seq)
    return sequences, vertices


def _walk_down(config, alpha0, vert):
    path = list(reversed(vert.sequence))
    labels = list(reversed(vert.circuit_labels))
    fans = [fan_from_triangulation(config, path[0], alpha0)]
    steps = []
    for j, circ in enumerate(labels):
        oriented = circ.oriented(negative_at=alpha0)
        fan = fans[-1]
        walls = {w.circuit.support: w for w in wall_circuits(fan)}
        wall = walls.get(oriented.support)
        if wall is None or wall.circuit.relation != oriented.relation:
            raise MMPError("path edge circuit is not a supported wall circuit")
        step, succ = classify_and_contract(fan, wall)
        if succ.triangulation != path[j + 1]:
            raise MMPError("wall contraction disagrees with the monotone path")
        steps.append(step)
        fans.append(succ)
    if not steps or steps[-1].kind != "mori-fiber":
        raise MMPError("sequence does not end in a Mori fiber step")
    if any(s.kind == "mori-fiber" for s in steps[:-1]):
        raise MMPError("Mori fiber step occurred before the end of the run")
    return MMPSequence(tuple(fans), tuple(steps))


def mmp_by_wall_search(config, alpha0, start_tri):
    """Independent route: depth-first search over supported wall contractions.

    Returns the set of step-label sequences of all complete runs (each run
    ends with a Mori fiber step).
    """
    start = fan_from_triangulation(config, start_tri, alpha0)
    runs = []

    def walk(fan, acc):
        walls = wall_circuits(fan)
        if not walls:
            raise MMPError("run is stuck before reaching a Mori fibration")
        seen = set()
        for w in walls:
            key = _label(w.circuit)
            if key in seen:  # several walls can share one circuit modification
                continue
            seen.add(key)
            step, succ = classify_and_contract(fan, w)
            nxt = acc + (key,)
            if step.kind == "mori-fiber":
                runs.append(nxt)
            else:
                walk(succ, nxt)

    walk(start, ())
    out = sorted(set(runs))
    if len(out) != len(runs):
        raise MMPError("distinct walls produced coinciding runs")
    return out


@dataclass(frozen=True)
class LedgerRow:
    kind: str
    vol_before: int
    vol_after: int
    rank_drop: int
    vol0: int
    base_volume: int


def k0_ledger(seq):
    """Per-step rank bookkeeping: drop = Vol0(C(w)) . Vol(Sigma_B).

    For a birational step the drop equals Vol(before) - Vol(after); at the
    Mori fiber step the whole remaining rank decomposes over the base, so the
    drop equals Vol(before) while the running volume lands on the base value.
    """
    rows = []
    for step in seq.steps:
        drop = step.rank_drop
        if step.kind == "mori-fiber":
            expect = step.vol_before
        else:
            expect = step.vol_before - step.vol_after
        if drop != expect:
            raise MMPError(
                f"ledger mismatch at a {step.kind} step: Vol0*Vol(B) = {drop}, "
                f"volume drop = {expect}")
        rows.append(LedgerRow(step.kind, step.vol_before, step.vol_after,
                              drop, step.vol0, step.base.volume))
    vols = [seq.fans[0].volume] + [r.vol_after for r in rows]
    if any(a <= b for a, b in zip(vols, vols[1:])):
        raise MMPError("running volume is not strictly decreasing")
    return tuple(rows)


# -- fingerprint atlas ------------------------------------------------------

def _cyclic_rays(rays):
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def cmp(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return ha - hb
        c = a[0] * b[1] - a[1] * b[0]
        return -1 if c > 0 else (1 if c < 0 else 0)
    return sorted(rays, key=functools.cmp_to_key(cmp))


def fan_fingerprint(fan):
    """(rank, volume, cyclic determinant word) up to rotation and reflection."""
    rays = [g for _, g in fan.rays]
    k = fan.quotient_rank
    if k == 0:
        return (0,)
    if k == 1:
        vals = sorted(abs(g[0]) for g in rays)
        return (1, tuple(vals))
    if k != 2:
        return (k, fan.volume, None)
    cyc = _cyclic_rays(rays)
    n = len(cyc)
    word = []
    for i in range(n):
        a, b, c = cyc[i - 1], cyc[i], cyc[(i + 1) % n]
        word.append((b[0] * c[1] - b[1] * c[0], a[0] * c[1] - a[1] * c[0]))
    variants = []
    for seq in (word, [(e, -c) for e, c in reversed(word)]):
        for r in range(n):
            variants.append(tuple(seq[r:] + seq[:r]))
    return (2, fan.volume, min(variants))


def _reference_fingerprints():
    from .config import PointConfiguration

    def star_fan(points):
        cfg = PointConfiguration(points)
        from .subdivision import enumerate_regular_triangulations as ert
        sp = ert(cfg)
        a0 = cfg.index(tuple([0] * cfg.dim))
        best = max(sp.triangulations, key=lambda t: sp.gkz[t][a0])
        return fan_from_triangulation(cfg, best, a0)

    atlas = {}
    atlas[fan_fingerprint(star_fan([(0, 0), (1, 0), (0, 1), (-1, -1)]))] = "P2"
    atlas[fan_fingerprint(star_fan([(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)]))] = "P1xP1"
    atlas[fan_fingerprint(star_fan([(0, 0), (1, 0), (0, 1), (-1, 1), (0, -1)]))] = "F1"
    atlas[fan_fingerprint(star_fan([(0,), (1,), (-1,)]))] = "P1"
    atlas[(0,)] = "pt"
    return atlas


_ATLAS = None


def fan_name(fan):
    """Atlas name of the fan's fingerprint, or None when unrecognized."""
    global _ATLAS
    if _ATLAS is None:
        _ATLAS = _reference_fingerprints()
    return _ATLAS.get(fan_fingerprint(fan))


def sequence_names(seq):
    return tuple(fan_name(f) for f in seq.fans)
