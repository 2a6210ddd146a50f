"""Generic planar projections of polygons and their crossing diagrams.

A projection along a direction is generic when all crossings are transverse
double points well away from vertices and from each other. The resulting
diagram is stored combinatorially: the cyclic sequence of crossing passages
(crossing id, over/under) along the knot, plus a sign per crossing. Crossing
signs follow the usual convention: positive when the under strand points to
the left of the over strand (det(over_dir, under_dir) > 0 in the projection
plane).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Polygon, nonadjacent_edge_pairs

POSITION_TOL = 1e-9  # coordinates carry ~12 decimals; 1e-9 separates signal from noise
HEIGHT_TOL = 1e-12


class NonGenericProjection(ValueError):
    """The projection has a tangency, near-vertex crossing, or coincident crossings."""


class ProjectionFailure(RuntimeError):
    """No generic projection direction found within the allowed attempts."""


@dataclass(frozen=True)
class CrossingRecord:
    """One transverse double point of a projection."""

    edge_a: int
    edge_b: int
    t_a: float
    t_b: float
    sign: int
    over_edge: int
    point: tuple[float, float]


@dataclass(frozen=True)
class PlanarDiagram:
    """Crossing diagram of a single knot component.

    events is the cyclic sequence of passages along the curve as pairs
    (crossing id, is_over); signs[cid] is the crossing sign. Geometric crossing
    records are kept when the diagram came straight from a projection and
    dropped by combinatorial moves.
    """

    events: tuple
    signs: dict
    crossings: tuple = field(default=())

    @property
    def crossing_count(self) -> int:
        return len(self.signs)

    def mirror(self) -> "PlanarDiagram":
        """Swap every over/under and negate every sign (view from the far side)."""
        return PlanarDiagram(
            events=tuple((cid, not over) for cid, over in self.events),
            signs={cid: -s for cid, s in self.signs.items()},
        )

    def writhe(self) -> int:
        return sum(self.signs.values())

    def pd_code(self):
        """Canonical PD code: one 4-tuple of arc labels per crossing, listed
        counterclockwise from the incoming under-arc, minimized lexicographically
        over the basepoint choice."""
        L = len(self.events)
        if L == 0:
            return ()
        pos = {}
        for k, (cid, over) in enumerate(self.events):
            pos.setdefault(cid, {})[over] = k
        best = None
        for base in range(L):
            def lab(k):
                # edge entering event k, relabeled so the basepoint edge is 1
                return (k - 1 - base) % L + 1

            tuples = []
            for cid, where in pos.items():
                pu, po = where[False], where[True]
                ui, uo = lab(pu), lab(pu + 1)
                oi, oo = lab(po), lab(po + 1)
                if self.signs[cid] > 0:
                    tuples.append((ui, oo, uo, oi))
                else:
                    tuples.append((ui, oi, uo, oo))
            tuples.sort()
            cand = tuple(tuples)
            if best is None or cand < best:
                best = cand
        return best

    def code(self) -> str:
        """Single-line token form of the canonical PD code."""
        return ";".join(",".join(str(x) for x in tup) for tup in self.pd_code())


def _frame(direction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    d = np.asarray(direction, dtype=float)
    norm = float(np.linalg.norm(d))
    if not math.isclose(norm, 1.0, rel_tol=0, abs_tol=1e-9):
        raise ValueError("projection direction must be a unit vector")
    d = d / norm
    # Complete to a right-handed frame (ex, ey, d); ex from the least-aligned axis.
    k = int(np.argmin(np.abs(d)))
    ex = np.zeros(3)
    ex[k] = 1.0
    ex -= np.dot(ex, d) * d
    ex /= np.linalg.norm(ex)
    ey = np.cross(d, ex)
    return ex, ey, d


def project(p: Polygon, direction=(0.0, 0.0, 1.0)) -> PlanarDiagram:
    """Orthographic projection of the polygon along `direction`.

    Every transverse intersection of non-adjacent projected edges becomes a
    crossing; over/under comes from the heights along `direction` and the sign
    from the plane orientations.

    Raises
    ------
    NonGenericProjection
        If two crossing points nearly coincide, an intersection falls within
        1e-9 of an edge endpoint, overlapping edges are parallel within
        tolerance, or a vertex projects onto a non-incident edge.
    """
    ex, ey, d = _frame(direction)
    n = p.n
    v = p.vertices
    xs = v @ ex
    ys = v @ ey
    hs = v @ d
    pts = [(float(xs[i]), float(ys[i])) for i in range(n)]

    # Vertices may not project onto non-incident edges.
    for k in range(n):
        px, py = pts[k]
        for i in range(n):
            if i == k or (i + 1) % n == k:
                continue
            ax, ay = pts[i]
            bx, by = pts[(i + 1) % n]
            ux, uy = bx - ax, by - ay
            L2 = ux * ux + uy * uy
            if L2 <= POSITION_TOL**2:
                raise NonGenericProjection(f"edge {i} projects to a point")
            t = ((px - ax) * ux + (py - ay) * uy) / L2
            t = min(1.0, max(0.0, t))
            dx, dy = px - (ax + t * ux), py - (ay + t * uy)
            if dx * dx + dy * dy < POSITION_TOL**2:
                raise NonGenericProjection(f"vertex {k} projects onto edge {i}")

    crossings = []
    for i, j in nonadjacent_edge_pairs(n):
        ax, ay = pts[i]
        bx, by = pts[(i + 1) % n]
        cx, cy = pts[j]
        dx_, dy_ = pts[(j + 1) % n]
        rx, ry = bx - ax, by - ay
        sx, sy = dx_ - cx, dy_ - cy
        denom = rx * sy - ry * sx
        qpx, qpy = cx - ax, cy - ay
        rlen = math.hypot(rx, ry)
        slen = math.hypot(sx, sy)
        if abs(denom) <= POSITION_TOL * rlen * slen:
            # Parallel in projection: only fatal if the lines overlap.
            off = abs(qpx * ry - qpy * rx) / rlen
            lo = (qpx * rx + qpy * ry) / (rlen * rlen)
            hi = lo + (sx * rx + sy * ry) / (rlen * rlen)
            lo, hi = min(lo, hi), max(lo, hi)
            if off < POSITION_TOL and hi > -POSITION_TOL and lo < 1.0 + POSITION_TOL:
                raise NonGenericProjection(f"edges {i} and {j} are parallel and overlap")
            continue
        t = (qpx * sy - qpy * sx) / denom
        u = (qpx * ry - qpy * rx) / denom
        if -POSITION_TOL < t < 1.0 + POSITION_TOL and -POSITION_TOL < u < 1.0 + POSITION_TOL:
            near_end = min(abs(t), abs(1.0 - t), abs(u), abs(1.0 - u)) < POSITION_TOL
            inside = POSITION_TOL <= t <= 1.0 - POSITION_TOL and POSITION_TOL <= u <= 1.0 - POSITION_TOL
            if near_end or not inside:
                raise NonGenericProjection(
                    f"intersection of edges {i}, {j} within tolerance of an endpoint"
                )
            za = hs[i] + t * (hs[(i + 1) % n] - hs[i])
            zb = hs[j] + u * (hs[(j + 1) % n] - hs[j])
            if abs(za - zb) < HEIGHT_TOL:
                raise NonGenericProjection(f"edges {i}, {j} cross at equal height")
            over_edge = i if za > zb else j
            if over_edge == i:
                odirx, odiry, udirx, udiry = rx, ry, sx, sy
            else:
                odirx, odiry, udirx, udiry = sx, sy, rx, ry
            sign = 1 if odirx * udiry - odiry * udirx > 0 else -1
            crossings.append(
                CrossingRecord(i, j, t, u, sign, over_edge,
                               (ax + t * rx, ay + t * ry))
            )

    for a in range(len(crossings)):
        for b in range(a + 1, len(crossings)):
            pa, pb = crossings[a].point, crossings[b].point
            if math.hypot(pa[0] - pb[0], pa[1] - pb[1]) < POSITION_TOL:
                raise NonGenericProjection("two crossing points nearly coincide")

    # Order the passages along the curve: edge by edge, by parameter.
    per_edge = {i: [] for i in range(n)}
    for cid, rec in enumerate(crossings):
        per_edge[rec.edge_a].append((rec.t_a, cid))
        per_edge[rec.edge_b].append((rec.t_b, cid))
    events = []
    for i in range(n):
        for t, cid in sorted(per_edge[i]):
            events.append((cid, crossings[cid].over_edge == i))
    signs = {cid: rec.sign for cid, rec in enumerate(crossings)}
    return PlanarDiagram(events=tuple(events), signs=signs, crossings=tuple(crossings))


def random_direction_3d(rng) -> np.ndarray:
    while True:
        v = rng.standard_normal(3)
        norm = float(np.linalg.norm(v))
        if norm > 1e-12:
            return v / norm


def generic_projection(p: Polygon, rng=None, max_tries: int = 20):
    """Project along (0, 0, 1) first, then random directions.

    Makes up to max_tries attempts and returns (direction, diagram) for the
    generic success with the fewest crossings (earliest attempt on ties).

    Raises
    ------
    ProjectionFailure
        If no attempted direction is generic.
    """
    if max_tries < 1:
        raise ValueError("max_tries must be >= 1")
    if rng is None:
        rng = np.random.default_rng(0)
    best = None
    for attempt in range(max_tries):
        direction = np.array([0.0, 0.0, 1.0]) if attempt == 0 else random_direction_3d(rng)
        try:
            dgm = project(p, direction)
        except NonGenericProjection:
            continue
        if best is None or dgm.crossing_count < best[1].crossing_count:
            best = (direction, dgm)
        if best[1].crossing_count == 0:
            break
    if best is None:
        raise ProjectionFailure(f"no generic direction in {max_tries} tries")
    return best


# -- combinatorial Reidemeister I / II reduction --------------------------------
#
# These operate on a general link form (several components), because skein
# resolution of a knot creates links internally. A passage list is a list of
# (crossing id, is_over); signs maps crossing id -> +-1.


def _passage_index(components):
    idx = {}
    for ci, comp in enumerate(components):
        for k, (cid, over) in enumerate(comp):
            idx.setdefault(cid, []).append((ci, k, over))
    return idx


def _find_r1(components):
    for ci, comp in enumerate(components):
        L = len(comp)
        if L < 2:
            continue
        for k in range(L):
            k2 = (k + 1) % L
            if k2 != k and comp[k][0] == comp[k2][0]:
                return ci, k, k2
    return None


def _find_r2(components, signs):
    idx = _passage_index(components)
    for ci, comp in enumerate(components):
        L = len(comp)
        if L < 2:
            continue
        for k in range(L):
            k2 = (k + 1) % L
            x, over_x = comp[k]
            y, over_y = comp[k2]
            if x == y or over_x != over_y:
                continue
            if signs[x] != -signs[y]:
                continue
            px = [(c, p) for c, p, _ in idx[x] if (c, p) != (ci, k)][0]
            py = [(c, p) for c, p, _ in idx[y] if (c, p) != (ci, k2)][0]
            if px[0] != py[0]:
                continue
            L2 = len(components[px[0]])
            if (px[1] + 1) % L2 == py[1] or (py[1] + 1) % L2 == px[1]:
                spots = {(ci, k), (ci, k2), px, py}
                if len(spots) == 4:
                    return x, y, spots
    return None


def reduce_link(components, signs):
    """Apply crossing-removing Reidemeister I and II moves until none applies.

    Returns (components, signs) as fresh structures. A removed component is
    kept as an empty passage list (a crossing-free loop). Link type, and hence
    every skein invariant, is preserved.
    """
    comps = [list(c) for c in components]
    signs = dict(signs)
    while True:
        hit = _find_r1(comps)
        if hit is not None:
            ci, k, k2 = hit
            cid = comps[ci][k][0]
            comps[ci] = [e for p, e in enumerate(comps[ci]) if p not in (k, k2)]
            del signs[cid]
            continue
        hit = _find_r2(comps, signs)
        if hit is not None:
            x, y, spots = hit
            by_comp = {}
            for c, p in spots:
                by_comp.setdefault(c, set()).add(p)
            for c, ps in by_comp.items():
                comps[c] = [e for p, e in enumerate(comps[c]) if p not in ps]
            del signs[x]
            del signs[y]
            continue
        return comps, signs


def simplify(dgm: PlanarDiagram) -> PlanarDiagram:
    """Reduce a knot diagram by R1/R2 moves; knot type is preserved and the
    crossing count never increases. Geometric crossing records do not survive."""
    comps, signs = reduce_link([list(dgm.events)], dgm.signs)
    return PlanarDiagram(events=tuple(comps[0]), signs=signs)


def canonical_knot_key(events, signs):
    """Basepoint-independent key for a one-component diagram: the lexicographic
    minimum over rotations of the passage word with crossings relabeled by
    first appearance."""
    L = len(events)
    if L == 0:
        return ()
    best = None
    for r in range(L):
        relabel = {}
        word = []
        for k in range(L):
            cid, over = events[(r + k) % L]
            new = relabel.setdefault(cid, len(relabel))
            word.append((new, over, signs[cid]))
        cand = tuple(word)
        if best is None or cand < best:
            best = cand
    return best
