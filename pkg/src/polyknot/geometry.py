"""Closed equilateral polygons in 3-space and their fan action-angle coordinates.

A polygon is an ordered list of vertices, interpreted cyclically: edge i runs
from vertex i to vertex i+1 (mod n), so a vertex list always closes. The fan
triangulation from the root vertex v_0 cuts an n-gon into n-2 triangles whose
chord lengths d_1..d_{n-3} and dihedral angles theta_1..theta_{n-3} coordinatize
polygon space away from the measure-zero degenerate set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Fan triangles and chords are considered degenerate below this scale; such
# configurations are measure zero under the sampler and are rejected outright.
DEGENERACY_TOL = 1e-12


class DegenerateDiagonal(ValueError):
    """A fan triangle is flat (or a diagonal vanishes), so the chord axis is undefined."""


class DegenerateChord(ValueError):
    """The rotation chord of a crankshaft move has (near-)zero length."""


@dataclass(frozen=True)
class Polygon:
    """Closed polygon given by an (n, 3) float array of vertices."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] < 3:
            raise ValueError("polygon needs an (n, 3) vertex array with n >= 3")
        object.__setattr__(self, "vertices", v)

    @property
    def n(self) -> int:
        return self.vertices.shape[0]

    def edge_vectors(self) -> np.ndarray:
        """Edge vectors e_i = v_{i+1} - v_i, cyclically (shape (n, 3))."""
        return np.roll(self.vertices, -1, axis=0) - self.vertices


@dataclass(frozen=True)
class ActionAngle:
    """Fan coordinates: n-3 diagonal lengths and n-3 dihedral angles in [-pi, pi)."""

    d: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        theta = wrap_angle(np.asarray(self.theta, dtype=float))
        if d.ndim != 1 or theta.shape != d.shape:
            raise ValueError("d and theta must be 1-d arrays of equal length n-3")
        if d.size < 1:
            raise ValueError("need n >= 4, i.e. at least one diagonal")
        if np.any(d < 0):
            raise ValueError("diagonal lengths must be nonnegative")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "theta", theta)

    @property
    def n(self) -> int:
        return self.d.size + 3


def wrap_angle(theta):
    """Reduce angles modulo 2*pi into [-pi, pi)."""
    return (np.asarray(theta) + math.pi) % (2.0 * math.pi) - math.pi


def _chord_lengths(d: np.ndarray) -> np.ndarray:
    """Full fan chord ladder [1, d_1, ..., d_{n-3}, 1]: both terminal triangles
    have two unit sides."""
    return np.concatenate(([1.0], d, [1.0]))


def _apex_offsets(d1: float, d2: float) -> tuple[float, float]:
    """Place the apex of a triangle with base length d1 along the base direction.

    The triangle has sides (d1, 1, d2): base from a to b with |b - a| = d1, apex x
    with |x - a| = d2 and |x - b| = 1. Returns (alpha, beta): the apex sits at
    a + alpha*u + beta*w for the unit base direction u and any unit in-plane
    normal w. Raises DegenerateDiagonal when the triangle is flat beyond
    tolerance.
    """
    if d1 < DEGENERACY_TOL or d2 < DEGENERACY_TOL:
        raise DegenerateDiagonal(f"diagonal below tolerance: d1={d1!r}, d2={d2!r}")
    alpha = (d1 * d1 + d2 * d2 - 1.0) / (2.0 * d1)
    beta_sq = d2 * d2 - alpha * alpha
    if beta_sq < DEGENERACY_TOL**2:
        raise DegenerateDiagonal(
            f"flat fan triangle with sides ({d1!r}, 1, {d2!r})"
        )
    return alpha, beta_sq**0.5


def _rodrigues(x: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    """Rotate x about the unit vector `axis` (through the origin) by `angle`."""
    c, s = math.cos(angle), math.sin(angle)
    return x * c + np.cross(axis, x) * s + axis * (np.dot(axis, x) * (1.0 - c))


def reconstruct(coords: ActionAngle, n: int | None = None) -> Polygon:
    """Build the polygon with the given fan action-angle coordinates.

    The root vertex is at the origin and the second vertex on the +x axis; the
    first fan triangle lies in the xy-plane (apex toward +y). Each later fan
    triangle is attached along its chord and opened to dihedral angle theta_j,
    measured right-handedly about the chord direction away from the root, with
    theta = 0 meaning folded flat onto the previous triangle (so a flat
    embedding, triangles on opposite sides of each chord, is theta = pi).

    Parameters
    ----------
    coords : ActionAngle
        Diagonals strictly inside the unconfined moment polytope.
    n : int, optional
        Expected polygon size; checked against coords when given.

    Returns
    -------
    Polygon
        Equilateral n-gon with |v_0 - v_{i+1}| = d_i for i = 1..n-3.

    Raises
    ------
    DegenerateDiagonal
        If any fan triangle is flat beyond tolerance or a diagonal vanishes.
    """
    if n is not None and n != coords.n:
        raise ValueError(f"coords describe an {coords.n}-gon, not n={n}")
    n = coords.n
    D = _chord_lengths(coords.d)
    verts = np.zeros((n, 3))
    verts[1] = (1.0, 0.0, 0.0)

    # First triangle (v0, v1, v2) in the reference plane, apex toward +y.
    alpha, beta = _apex_offsets(D[0], D[1])
    verts[2] = (alpha, beta, 0.0)

    for j in range(n - 3):
        # Attach triangle (v0, v_{j+2}, v_{j+3}) along the chord v0 -> v_{j+2}.
        b = verts[j + 2]
        prev = verts[j + 1]
        d1 = float(np.linalg.norm(b))
        u = b / d1
        alpha, beta = _apex_offsets(d1, D[j + 2])
        w = prev - np.dot(prev, u) * u
        wn = float(np.linalg.norm(w))
        if wn < DEGENERACY_TOL:
            raise DegenerateDiagonal("previous fan triangle is flat; hinge side undefined")
        w /= wn
        folded = alpha * u + beta * w
        verts[j + 3] = _rodrigues(folded, u, float(coords.theta[j]))
    return Polygon(verts)


def extract(p: Polygon) -> ActionAngle:
    """Read off fan action-angle coordinates from a polygon.

    Inverse of :func:`reconstruct` up to rigid motion: d_i = |v_0 - v_{i+1}| and
    theta_i is the signed dihedral angle at chord (v_0, v_{i+1}) between the
    half-planes holding the two adjacent fan triangles, right-handed about the
    chord direction, reduced into [-pi, pi).
    """
    v = p.vertices
    n = p.n
    if n < 4:
        raise ValueError("action-angle coordinates need n >= 4")
    rel = v - v[0]
    D = np.linalg.norm(rel[1:], axis=1)  # D[k] = |v_{k+1} - v_0|, k = 0..n-2
    theta = np.empty(n - 3)
    for j in range(n - 3):
        d1 = D[j + 1]
        if d1 < DEGENERACY_TOL:
            raise DegenerateDiagonal(f"diagonal {j + 1} below tolerance")
        u = rel[j + 2] / d1
        w1 = rel[j + 1] - np.dot(rel[j + 1], u) * u
        w2 = rel[j + 3] - np.dot(rel[j + 3], u) * u
        n1, n2 = float(np.linalg.norm(w1)), float(np.linalg.norm(w2))
        if n1 < DEGENERACY_TOL or n2 < DEGENERACY_TOL:
            raise DegenerateDiagonal(f"flat fan triangle at chord {j + 1}")
        theta[j] = math.atan2(float(np.dot(np.cross(w1, w2), u)), float(np.dot(w1, w2)))
    return ActionAngle(d=D[1:-1].copy(), theta=theta)


def edge_lengths(p: Polygon) -> np.ndarray:
    """Cyclic edge lengths L_i = |v_{i+1} - v_i| (shape (n,))."""
    return np.linalg.norm(p.edge_vectors(), axis=1)


def segment_distance(s1, s2) -> float:
    """Minimum Euclidean distance between two closed segments in 3-space.

    Each segment is a pair of endpoints; degenerate (point) segments are fine.
    Implements the standard clamped closest-point parameter search (Lumelsky).
    """
    p1, q1 = (np.asarray(e, dtype=float) for e in s1)
    p2, q2 = (np.asarray(e, dtype=float) for e in s2)
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = float(np.dot(d1, d1))
    e = float(np.dot(d2, d2))
    f = float(np.dot(d2, r))
    eps = 1e-30

    if a <= eps and e <= eps:
        return float(np.linalg.norm(r))
    if a <= eps:
        t = min(1.0, max(0.0, f / e))
        return float(np.linalg.norm(r - t * d2))
    c = float(np.dot(d1, r))
    if e <= eps:
        s = min(1.0, max(0.0, -c / a))
        return float(np.linalg.norm(r + s * d1))

    b = float(np.dot(d1, d2))
    denom = a * e - b * b
    # Closest points of the infinite lines, clamped to both segments in turn.
    s = min(1.0, max(0.0, (b * f - c * e) / denom)) if denom > eps else 0.0
    t = (b * s + f) / e
    if t < 0.0:
        t = 0.0
        s = min(1.0, max(0.0, -c / a))
    elif t > 1.0:
        t = 1.0
        s = min(1.0, max(0.0, (b - c) / a))
    return float(np.linalg.norm((p1 + s * d1) - (p2 + t * d2)))


def nonadjacent_edge_pairs(n: int):
    """Unordered pairs (i, j) of edge indices with j not in {i-1, i, i+1} mod n."""
    pairs = []
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            pairs.append((i, j))
    return pairs


def min_nonadjacent_distance(p: Polygon) -> float:
    """Minimum distance mu between any two non-adjacent edges of the polygon."""
    v = p.vertices
    n = p.n
    if n < 4:
        raise ValueError("polygons with n < 4 have no non-adjacent edge pairs")
    best = math.inf
    for i, j in nonadjacent_edge_pairs(n):
        dist = segment_distance(
            (v[i], v[(i + 1) % n]), (v[j], v[(j + 1) % n])
        )
        if dist < best:
            best = dist
    return best


def crankshaft(p: Polygon, i: int, j: int, angle: float) -> Polygon:
    """Rotate one arc of the polygon rigidly about the chord v_i -> v_j.

    The rotated arc is the shorter of the two arcs strictly between i and j
    (ties broken toward the arc starting at i+1); all other vertices are left
    bit-identical. Edge lengths are preserved since both arc endpoints lie on
    the rotation axis.

    Raises
    ------
    DegenerateChord
        If |v_i - v_j| is below tolerance, so the axis is undefined.
    """
    n = p.n
    i %= n
    j %= n
    if i == j:
        raise ValueError("chord endpoints must differ")
    v = p.vertices.copy()
    axis = v[j] - v[i]
    norm = float(np.linalg.norm(axis))
    if norm <= DEGENERACY_TOL:
        raise DegenerateChord(f"chord ({i}, {j}) has length {norm!r}")
    axis /= norm

    fwd = [(i + k) % n for k in range(1, (j - i) % n)]
    bwd = [(j + k) % n for k in range(1, (i - j) % n)]
    arc = fwd if len(fwd) <= len(bwd) else bwd
    if arc:
        rel = v[arc] - v[i]
        c, s = math.cos(angle), math.sin(angle)
        rot = rel * c + np.cross(axis, rel) * s + np.outer(rel @ axis, axis) * (1.0 - c)
        v[arc] = v[i] + rot
    return Polygon(v)


def align_rigidly(moving: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Best-fit proper rigid motion (Kabsch) taking `moving` onto `target`.

    Returns the transformed copy of `moving`; reflections are excluded, so two
    mirror-image polygons will not align.
    """
    A = np.asarray(moving, dtype=float)
    B = np.asarray(target, dtype=float)
    ca, cb = A.mean(axis=0), B.mean(axis=0)
    H = (A - ca).T @ (B - cb)
    U, _, Vt = np.linalg.svd(H)
    sign = np.sign(np.linalg.det(U @ Vt))
    R = (U * [1.0, 1.0, sign]) @ Vt
    return (A - ca) @ R + cb


def rigid_deviation(p: Polygon, q: Polygon) -> float:
    """Max vertex distance between p and q after optimal proper rigid alignment."""
    if p.n != q.n:
        raise ValueError("polygons must have the same number of vertices")
    moved = align_rigidly(p.vertices, q.vertices)
    return float(np.max(np.linalg.norm(moved - q.vertices, axis=1)))


def write_polygon(path, p: Polygon) -> None:
    """Write one polygon as tab-separated vertex rows (12 decimals, no header)."""
    with open(path, "w") as fh:
        for x, y, z in p.vertices:
            fh.write(f"{x:.12f}\t{y:.12f}\t{z:.12f}\n")


def read_polygon(path) -> Polygon:
    """Read a polygon from a whitespace/tab-separated coordinate file."""
    rows = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.replace("\t", " ").split()
            if len(fields) != 3:
                raise ValueError(f"{path}:{line_no}: expected 3 coordinates, got {len(fields)}")
            rows.append([float(x) for x in fields])
    if len(rows) < 3:
        raise ValueError(f"{path}: fewer than 3 vertices")
    return Polygon(np.array(rows))
