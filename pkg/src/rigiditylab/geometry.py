"""Metric quantities of a realized triangulated surface.

A polyhedron is a surface plus vertex coordinates in R^3.  Faces may
self-intersect in space; the only geometric requirement is that every
triangle is nondegenerate.  Dihedral angles follow the oriented-slice
convention: the angle at an edge is the angular width, in the plane
orthogonal to the edge, of the wedge bounded by the two in-face directions
that contains the mean of the two positively oriented face normals.  The
value lies in [0, 2*pi); when the two normals cancel exactly the angle is
defined to be 0 and flagged as degenerate.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .surfaces import SimplicialSurface

DEGENERATE_NORMAL_TOL = 1e-9


class DegenerateFaceError(Exception):
    def __init__(self, face, area):
        self.face = face
        self.area = area
        super().__init__(f"face {face} has area {area:.3e}")


class ZeroRadiusError(Exception):
    """The sampling ball around an edge midpoint would have zero radius."""


@dataclass
class Polyhedron:
    """Vertex coordinates realizing a combinatorial surface.

    ``coords`` maps vertex id to a point in R^3.  ``exact_coords`` optionally
    carries the same points as exact rationals (used for exact length
    algebra); ``exact_lengths`` optionally declares exact edge lengths
    directly, in canonical edge order.
    """

    surface: SimplicialSurface
    coords: dict
    exact_coords: dict | None = None
    exact_lengths: list | None = None
    _vertex_array: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        coords = {int(v): np.asarray(p, dtype=float) for v, p in self.coords.items()}
        missing = set(self.surface.vertices) - set(coords)
        extra = set(coords) - set(self.surface.vertices)
        if missing or extra:
            raise ValueError(
                f"coordinates do not match surface vertices "
                f"(missing {sorted(missing)}, extra {sorted(extra)})"
            )
        for v, p in coords.items():
            if p.shape != (3,):
                raise ValueError(f"vertex {v}: expected a 3-vector, got shape {p.shape}")
        self.coords = coords
        self._vertex_array = np.array(
            [coords[v] for v in self.surface.vertices], dtype=float
        )

    def point(self, vertex: int) -> np.ndarray:
        return self.coords[vertex]

    def vertex_array(self) -> np.ndarray:
        """Coordinates as an (n_vertices, 3) array in canonical vertex order."""
        return self._vertex_array.copy()

    def max_edge_length(self) -> float:
        return float(max(edge_lengths(self).values()))

    def exact_edge_lengths(self):
        """Exact edge lengths in canonical edge order, if exact data exists."""
        from .lengths import exact_length_from_squared

        if self.exact_lengths is not None:
            return list(self.exact_lengths)
        if self.exact_coords is None:
            raise ValueError("polyhedron carries no exact coordinate or length data")
        out = []
        for a, b in self.surface.edges:
            pa, pb = self.exact_coords[a], self.exact_coords[b]
            sq = sum((Fraction(x) - Fraction(y)) ** 2 for x, y in zip(pa, pb))
            out.append(exact_length_from_squared(sq))
        return out


@dataclass
class DihedralAngle:
    edge: tuple[int, int]
    principal_value: float
    degenerate_flag: bool = False


def _face_area(P: Polyhedron, face) -> float:
    a, b, c = (P.point(v) for v in face)
    return 0.5 * float(np.linalg.norm(np.cross(b - a, c - a)))


def check_nondegenerate(P: Polyhedron, tol: float | None = None) -> list[float]:
    """Areas of all faces; raises DegenerateFaceError on the first tiny one.

    Default tolerance is 1e-12 times the squared maximum edge length, which
    makes the check scale invariant.
    """
    if tol is None:
        tol = 1e-12 * P.max_edge_length() ** 2
    areas = []
    for face in P.surface.faces:
        area = _face_area(P, face)
        if area <= tol:
            raise DegenerateFaceError(face, area)
        areas.append(area)
    return areas


def edge_lengths(P: Polyhedron) -> dict:
    """Euclidean edge lengths keyed by canonical (sorted) edge pairs."""
    return {
        (a, b): float(np.linalg.norm(P.point(a) - P.point(b)))
        for a, b in P.surface.edges
    }


def edge_length_vector(P: Polyhedron) -> np.ndarray:
    return np.array([edge_lengths(P)[e] for e in P.surface.edges])


def _edge_frame(P: Polyhedron, edge: tuple[int, int]):
    """In-plane data at an edge: unit edge direction, in-face directions and
    positively oriented normals of the two incident faces.

    The first returned face is the one whose cyclic order walks the edge as
    (a, b) with a < b; results do not depend on this labeling choice.
    """
    a, b = edge
    if a > b:
        a, b = b, a
    incident = P.surface.faces_of_edge((a, b))
    if len(incident) != 2:
        raise ValueError(f"edge {(a, b)} is not shared by exactly two faces")
    f0, f1 = incident
    if P.surface.directed_edge_in_face((a, b), f1):
        f0, f1 = f1, f0
    if not P.surface.directed_edge_in_face((a, b), f0) or P.surface.directed_edge_in_face(
        (a, b), f1
    ):
        raise ValueError(
            f"faces at edge {(a, b)} do not induce opposite orientations"
        )
    pa, pb = P.point(a), P.point(b)
    e_hat = pb - pa
    e_norm = np.linalg.norm(e_hat)
    if e_norm == 0.0:
        raise ValueError(f"edge {(a, b)} has zero length")
    e_hat = e_hat / e_norm

    def in_face_dir(face_idx):
        c = P.surface.third_vertex((a, b), face_idx)
        v = P.point(c) - pa
        u = v - np.dot(v, e_hat) * e_hat
        n = np.linalg.norm(u)
        if n == 0.0:
            raise DegenerateFaceError(P.surface.faces[face_idx], 0.0)
        return u / n

    def face_normal(face_idx):
        p, q, r = (P.point(v) for v in P.surface.faces[face_idx])
        n = np.cross(q - p, r - p)
        norm = np.linalg.norm(n)
        if norm == 0.0:
            raise DegenerateFaceError(P.surface.faces[face_idx], 0.0)
        return n / norm

    u1, u2 = in_face_dir(f0), in_face_dir(f1)
    n1, n2 = face_normal(f0), face_normal(f1)
    return e_hat, u1, u2, n1, n2


def _plane_angle(z: np.ndarray, e1: np.ndarray, e2: np.ndarray) -> float:
    """Angle of z in the (e1, e2) frame, mapped to [0, 2*pi)."""
    theta = np.arctan2(float(np.dot(z, e2)), float(np.dot(z, e1)))
    return float(theta % (2.0 * np.pi))


def principal_dihedral(
    P: Polyhedron, edge: tuple[int, int], tol: float = DEGENERATE_NORMAL_TOL
) -> DihedralAngle:
    """Principal dihedral angle at an edge, in [0, 2*pi).

    Computed in the plane orthogonal to the edge: the two in-face unit
    directions bound two complementary wedges; the angle is the width of the
    wedge containing the summed face normals.  If the normals cancel (the
    faces fold onto each other) the angle is 0 with the degenerate flag set.
    """
    e_hat, u1, u2, n1, n2 = _edge_frame(P, edge)
    w = n1 + n2
    if np.linalg.norm(w) <= tol:
        return DihedralAngle(tuple(edge), 0.0, degenerate_flag=True)
    e1 = u1
    e2 = np.cross(e_hat, e1)
    a2 = _plane_angle(u2, e1, e2)
    aw = _plane_angle(w, e1, e2)
    width = a2 if aw <= a2 else 2.0 * np.pi - a2
    return DihedralAngle(tuple(edge), width, degenerate_flag=False)


def all_dihedrals(P: Polyhedron, tol: float = DEGENERATE_NORMAL_TOL) -> list[DihedralAngle]:
    return [principal_dihedral(P, e, tol) for e in P.surface.edges]


def _point_segment_distance(x, p, q) -> float:
    d = q - p
    denom = float(np.dot(d, d))
    if denom == 0.0:
        return float(np.linalg.norm(x - p))
    t = np.clip(float(np.dot(x - p, d)) / denom, 0.0, 1.0)
    return float(np.linalg.norm(x - (p + t * d)))


def _point_triangle_distance(x, a, b, c) -> float:
    """Distance from a point to a (possibly degenerate) triangle."""
    n = np.cross(b - a, c - a)
    nn = float(np.dot(n, n))
    if nn > 0.0:
        # Project into the plane and test barycentric containment.
        proj = x - (float(np.dot(x - a, n)) / nn) * n
        v0, v1, v2 = c - a, b - a, proj - a
        d00, d01, d11 = np.dot(v0, v0), np.dot(v0, v1), np.dot(v1, v1)
        d20, d21 = np.dot(v2, v0), np.dot(v2, v1)
        denom = d00 * d11 - d01 * d01
        if denom > 0.0:
            u = (d11 * d20 - d01 * d21) / denom
            v = (d00 * d21 - d01 * d20) / denom
            if u >= 0.0 and v >= 0.0 and u + v <= 1.0:
                return float(np.linalg.norm(x - proj))
    return min(
        _point_segment_distance(x, a, b),
        _point_segment_distance(x, b, c),
        _point_segment_distance(x, c, a),
    )


def _safe_ball_radius(P: Polyhedron, edge: tuple[int, int], radius_fraction: float) -> float:
    """Radius of a ball around the edge midpoint that avoids every simplex
    other than the two incident faces and the edge itself."""
    a, b = edge
    if a > b:
        a, b = b, a
    x = 0.5 * (P.point(a) + P.point(b))
    incident = set(P.surface.faces_of_edge((a, b)))
    dist = np.inf
    for fi, face in enumerate(P.surface.faces):
        if fi in incident:
            # Keep clear of the incident faces' other boundary edges.
            for k in range(3):
                p, q = face[k], face[(k + 1) % 3]
                if {p, q} == {a, b}:
                    continue
                dist = min(dist, _point_segment_distance(x, P.point(p), P.point(q)))
        else:
            dist = min(
                dist,
                _point_triangle_distance(
                    x, P.point(face[0]), P.point(face[1]), P.point(face[2])
                ),
            )
    if not np.isfinite(dist) or dist <= 1e-12 * P.max_edge_length():
        raise ZeroRadiusError(
            f"edge {(a, b)}: midpoint touches another simplex (distance {dist:.3e})"
        )
    return radius_fraction * float(dist)


def monte_carlo_dihedral(
    P: Polyhedron,
    edge: tuple[int, int],
    n_samples: int = 10**6,
    radius_fraction: float = 0.25,
    seed: int = 0,
    workers: int = 1,
    tol: float = DEGENERATE_NORMAL_TOL,
) -> float:
    """Volume-ratio estimate of the dihedral angle at an edge.

    Samples points uniformly in a ball around the edge midpoint, small
    enough to meet no simplex besides the two incident faces.  The two faces
    cut the ball into two slices; the returned value is 2*pi times the
    fraction of samples falling in the slice on the side of the summed face
    normals.  Serves as the independent check of :func:`principal_dihedral`.

    Sampling is split into ``workers`` deterministic chunks whose sub-seeds
    derive from the master seed, so results are reproducible for a fixed
    (seed, workers) pair.
    """
    e_hat, u1, u2, n1, n2 = _edge_frame(P, edge)
    w = n1 + n2
    if np.linalg.norm(w) <= tol:
        return 0.0
    radius = _safe_ball_radius(P, edge, radius_fraction)

    e1 = u1
    e2 = np.cross(e_hat, e1)
    a2 = _plane_angle(u2, e1, e2)
    aw = _plane_angle(w, e1, e2)
    ref_in_first = aw <= a2

    counts = 0
    total = 0
    chunk_sizes = [n_samples // workers] * workers
    for i in range(n_samples % workers):
        chunk_sizes[i] += 1
    seeds = np.random.SeedSequence(seed).spawn(workers)
    for size, ss in zip(chunk_sizes, seeds):
        if size == 0:
            continue
        rng = np.random.default_rng(ss)
        dirs = rng.normal(size=(size, 3))
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        radii = radius * np.cbrt(rng.random(size))
        pts = radii[:, None] * dirs  # offsets from the midpoint
        theta = np.arctan2(pts @ e2, pts @ e1) % (2.0 * np.pi)
        in_first = theta <= a2
        counts += int(np.count_nonzero(in_first == ref_in_first))
        total += size
    return 2.0 * np.pi * counts / total


def oriented_volume(P: Polyhedron) -> float:
    """Signed volume enclosed by the oriented surface (divergence formula)."""
    total = 0.0
    for face in P.surface.faces:
        v1, v2, v3 = (P.point(v) for v in face)
        total += float(np.dot(v1, np.cross(v2, v3)))
    return total / 6.0


def weighted_angle_sum(P: Polyhedron, angles: np.ndarray | None = None) -> float:
    """Sum over edges of length times dihedral angle.

    With ``angles`` given (canonical edge order), those values are used
    instead of the principal values; flex monitoring passes lifted angles
    here.  A warning is emitted when any principal value is degenerate.
    """
    lengths = edge_length_vector(P)
    if angles is None:
        dihedrals = all_dihedrals(P)
        if any(d.degenerate_flag for d in dihedrals):
            flagged = [d.edge for d in dihedrals if d.degenerate_flag]
            warnings.warn(
                f"degenerate dihedral angle at edges {flagged}; "
                f"their contribution is 0 by convention",
                stacklevel=2,
            )
        angles = np.array([d.principal_value for d in dihedrals])
    else:
        angles = np.asarray(angles, dtype=float)
    return float(np.dot(lengths, angles))
