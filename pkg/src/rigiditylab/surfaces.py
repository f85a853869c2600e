"""Combinatorial closed triangulated surfaces.

A surface is stored purely combinatorially: a list of vertex triples whose
cyclic order encodes the orientation of each triangle.  All geometric data
lives in :mod:`rigiditylab.geometry`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


class NonOrientableError(Exception):
    """Raised when no globally consistent face orientation exists."""


def _canonical_face(face: tuple[int, int, int]) -> tuple[int, int, int]:
    """Rotate a cyclic triple so the smallest vertex comes first."""
    k = face.index(min(face))
    return face[k:] + face[:k]


@dataclass
class SimplicialSurface:
    """Finite two-dimensional simplicial complex given by oriented triangles.

    Vertices, edges and incidence maps are derived from the face list.
    Edges are kept in lexicographic order of their sorted vertex pairs;
    this order is the canonical edge indexing used by every downstream
    coefficient vector and report.
    """

    faces: tuple[tuple[int, int, int], ...]
    vertices: tuple[int, ...] = field(init=False, repr=False)
    edges: tuple[tuple[int, int], ...] = field(init=False, repr=False)

    def __init__(self, faces):
        self.faces = tuple(tuple(int(v) for v in f) for f in faces)
        verts = sorted({v for f in self.faces for v in f})
        self.vertices = tuple(verts)
        edge_faces: dict[tuple[int, int], list[int]] = {}
        for fi, f in enumerate(self.faces):
            for k in range(3):
                a, b = f[k], f[(k + 1) % 3]
                key = (a, b) if a < b else (b, a)
                edge_faces.setdefault(key, []).append(fi)
        self.edges = tuple(sorted(edge_faces))
        self._edge_faces = edge_faces
        self._edge_index = {e: i for i, e in enumerate(self.edges)}
        self._vertex_index = {v: i for i, v in enumerate(self.vertices)}

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def edge_index(self, edge: tuple[int, int]) -> int:
        a, b = edge
        key = (a, b) if a < b else (b, a)
        return self._edge_index[key]

    def vertex_index(self, vertex: int) -> int:
        return self._vertex_index[vertex]

    def faces_of_edge(self, edge: tuple[int, int]) -> list[int]:
        a, b = edge
        key = (a, b) if a < b else (b, a)
        return list(self._edge_faces.get(key, []))

    def directed_edge_in_face(self, edge: tuple[int, int], face_idx: int) -> bool:
        """True if the face's cyclic order walks the edge as given (a, b)."""
        a, b = edge
        f = self.faces[face_idx]
        for k in range(3):
            if f[k] == a and f[(k + 1) % 3] == b:
                return True
        return False

    def third_vertex(self, edge: tuple[int, int], face_idx: int) -> int:
        a, b = edge
        (c,) = [v for v in self.faces[face_idx] if v != a and v != b]
        return c


@dataclass
class ValidationReport:
    """Outcome of the closed-surface checks.

    ``violations`` holds (condition id, offending simplices) pairs with
    condition ids drawn from {"i", "ii", "iii", "iv", "v", "orientation"}.
    """

    passed: bool
    violations: list[tuple[str, list]]

    def conditions_failed(self) -> set[str]:
        return {cond for cond, _ in self.violations}


def validate_complex(faces) -> ValidationReport:
    """Check that a face list describes a closed oriented triangulated surface.

    Conditions checked, all reported instead of raised:

    - "i": every triple consists of three distinct vertex ids;
    - "ii": no two faces share the same vertex set (for triangle lists the
      remaining simplex-intersection requirements hold by derivation);
    - "iii": every derived vertex and edge lies in some triangle;
    - "iv": every edge is contained in exactly two faces;
    - "v": the face graph (adjacency = shared edge) is connected;
    - "orientation": the two faces at each edge traverse it in opposite
      directions.
    """
    faces = [tuple(int(v) for v in f) for f in faces]
    if not faces:
        raise ValueError("face list is empty")
    violations: list[tuple[str, list]] = []

    bad_triples = [f for f in faces if len(f) != 3 or len(set(f)) != 3]
    if bad_triples:
        violations.append(("i", bad_triples))
    ok_faces = [f for f in faces if len(f) == 3 and len(set(f)) == 3]

    seen: dict[frozenset, tuple[int, int, int]] = {}
    duplicates = []
    for f in ok_faces:
        key = frozenset(f)
        if key in seen:
            duplicates.append([seen[key], f])
        else:
            seen[key] = f
    if duplicates:
        violations.append(("ii", duplicates))

    surface = SimplicialSurface(ok_faces) if ok_faces else None
    if surface is None:
        return ValidationReport(False, violations)

    # "iii" holds by construction (vertices and edges are derived from the
    # triangles); assert it anyway so corruption cannot pass silently.
    covered = {v for f in surface.faces for v in f}
    stray_vertices = [v for v in surface.vertices if v not in covered]
    stray_edges = [e for e in surface.edges if not surface.faces_of_edge(e)]
    if stray_vertices or stray_edges:
        violations.append(("iii", stray_vertices + stray_edges))

    bad_edges = [
        (e, len(surface.faces_of_edge(e)))
        for e in surface.edges
        if len(surface.faces_of_edge(e)) != 2
    ]
    if bad_edges:
        violations.append(("iv", bad_edges))

    component = _face_component(surface, 0)
    if len(component) != surface.n_faces:
        stranded = sorted(set(range(surface.n_faces)) - component)
        violations.append(("v", [surface.faces[i] for i in stranded]))

    mis_oriented = []
    for e in surface.edges:
        incident = surface.faces_of_edge(e)
        if len(incident) != 2:
            continue
        d0 = surface.directed_edge_in_face(e, incident[0])
        d1 = surface.directed_edge_in_face(e, incident[1])
        if d0 == d1:
            mis_oriented.append(e)
    if mis_oriented:
        violations.append(("orientation", mis_oriented))

    passed = not violations
    if passed:
        # Closed oriented surface: Euler characteristic is even and at most 2.
        chi = surface.euler_characteristic
        assert chi % 2 == 0 and chi <= 2, f"impossible Euler characteristic {chi}"
    return ValidationReport(passed, violations)


def _face_component(surface: SimplicialSurface, start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        fi = queue.popleft()
        f = surface.faces[fi]
        for k in range(3):
            a, b = f[k], f[(k + 1) % 3]
            for gi in surface.faces_of_edge((a, b)):
                if gi not in seen:
                    seen.add(gi)
                    queue.append(gi)
    return seen


def orient(surface: SimplicialSurface) -> SimplicialSurface:
    """Reorient faces so that consistent orientations hold globally.

    Orientation is propagated breadth-first from face 0 of each connected
    component, keeping that face's given cyclic order.  Raises
    :class:`NonOrientableError` when propagation forces some face into two
    contradictory orientations.
    """
    for e in surface.edges:
        if len(surface.faces_of_edge(e)) != 2:
            raise ValueError(f"edge {e} is not shared by exactly two faces")

    flip: dict[int, bool] = {}
    for root in range(surface.n_faces):
        if root in flip:
            continue
        flip[root] = False
        queue = deque([root])
        while queue:
            fi = queue.popleft()
            f = surface.faces[fi]
            for k in range(3):
                a, b = f[k], f[(k + 1) % 3]
                for gi in surface.faces_of_edge((a, b)):
                    if gi == fi:
                        continue
                    # fi walks the shared edge as (a, b) in its stored order;
                    # with flips applied the neighbour must walk it as (b, a).
                    fi_dir = not flip[fi]  # True: stored order is in effect
                    gi_stored = surface.directed_edge_in_face((a, b), gi)
                    need_flip = gi_stored == fi_dir
                    if gi not in flip:
                        flip[gi] = need_flip
                        queue.append(gi)
                    elif flip[gi] != need_flip:
                        raise NonOrientableError(
                            f"faces {surface.faces[fi]} and {surface.faces[gi]} "
                            f"cannot be oriented consistently"
                        )
    new_faces = [
        (f[0], f[2], f[1]) if flip[i] else f for i, f in enumerate(surface.faces)
    ]
    return SimplicialSurface(new_faces)


def skeleton(surface: SimplicialSurface, dim: int):
    """Simplices of the given dimension in canonical (sorted) order."""
    if dim == 0:
        return list(surface.vertices)
    if dim == 1:
        return list(surface.edges)
    if dim == 2:
        return sorted(_canonical_face(f) for f in surface.faces)
    raise ValueError(f"dimension must be 0, 1 or 2, got {dim}")
