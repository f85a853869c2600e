"""Built-in model generators and file formats.

Generators produce polyhedra with exact rational coordinates wherever
possible, so squared edge lengths are exact rationals and the exact length
algebra applies.  File I/O covers OFF meshes (text in, canonical text out),
JSON analysis reports and CSV flex time series; all formats carry a
format_version marker.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .flex import FlexPath, rigidity_matrix, squared_length_residual
from .geometry import Polyhedron, edge_length_vector, oriented_volume
from .lengths import ExactLength
from .surfaces import SimplicialSurface

FORMAT_VERSION = 1

OCTAHEDRON_FACES = (
    (0, 1, 2), (0, 2, 4), (0, 4, 3), (0, 3, 1),
    (5, 2, 1), (5, 4, 2), (5, 3, 4), (5, 1, 3),
)

# Bricard vertex ids: 0 and 4, 1 and 5, 2 and 3 are the half-turn pairs.
BRICARD_FACES = (
    (2, 0, 1), (2, 1, 4), (2, 4, 5), (2, 5, 0),
    (3, 1, 0), (3, 4, 1), (3, 5, 4), (3, 0, 5),
)
BRICARD_VERTEX_SYMMETRY = {0: 4, 1: 5, 2: 3, 3: 2, 4: 0, 5: 1}


class DegenerateSpecError(Exception):
    """Construction parameters produce coincident vertices or flat faces."""


class ParseError(Exception):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class NonTriangularFaceError(ParseError):
    pass


def _to_fraction(x) -> Fraction:
    """Exact rational from int/Fraction/str; floats go via their repr."""
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _float_coords(exact: dict) -> dict:
    return {v: np.array([float(c) for c in p]) for v, p in exact.items()}


@dataclass(frozen=True)
class BricardSpec:
    """Three free points of a line-symmetric flexible octahedron.

    The remaining vertices are the images of a, b, n under the half turn
    (x, y, z) -> (-x, -y, z).  Entries may be ints, Fractions, decimal
    strings, or floats (converted through their shortest decimal form).
    """

    a: tuple
    b: tuple
    n: tuple

    def points(self) -> dict:
        half_turn = lambda p: (-p[0], -p[1], p[2])
        a = tuple(_to_fraction(x) for x in self.a)
        b = tuple(_to_fraction(x) for x in self.b)
        n = tuple(_to_fraction(x) for x in self.n)
        return {0: a, 1: b, 2: n, 3: half_turn(n), 4: half_turn(a), 5: half_turn(b)}


DEFAULT_BRICARD_SPEC = BricardSpec(
    a=("2.0", "0.3", "1.1"),
    b=("-0.4", "1.7", "-0.9"),
    n=("0.5", "-0.6", "2.2"),
)


def _exact_cross_is_zero(p, q, r) -> bool:
    u = tuple(q[i] - p[i] for i in range(3))
    v = tuple(r[i] - p[i] for i in range(3))
    cross = (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )
    return all(c == 0 for c in cross)


def make_bricard_type1(spec: BricardSpec = DEFAULT_BRICARD_SPEC) -> Polyhedron:
    """Line-symmetric octahedron: generically flexible with paired edge lengths.

    The half turn maps the configuration to itself while swapping opposite
    vertices, so the twelve edges come in six pairs of exactly equal length.
    Raises :class:`DegenerateSpecError` on coincident vertices (for example
    n on the symmetry axis) or flat faces.
    """
    exact = spec.points()
    pts = list(exact.values())
    for i in range(6):
        for j in range(i + 1, 6):
            if pts[i] == pts[j]:
                raise DegenerateSpecError(
                    f"vertices {i} and {j} coincide at {tuple(map(str, pts[i]))}"
                )
    for face in BRICARD_FACES:
        if _exact_cross_is_zero(*(exact[v] for v in face)):
            raise DegenerateSpecError(f"face {face} is degenerate")
    surface = SimplicialSurface(BRICARD_FACES)
    return Polyhedron(surface, _float_coords(exact), exact_coords=exact)


def half_turn_edge_pairs(surface: SimplicialSurface | None = None) -> list[tuple[int, int]]:
    """Canonical-edge-index pairs swapped by the Bricard half turn."""
    if surface is None:
        surface = SimplicialSurface(BRICARD_FACES)
    pairs = set()
    for e in surface.edges:
        a, b = BRICARD_VERTEX_SYMMETRY[e[0]], BRICARD_VERTEX_SYMMETRY[e[1]]
        image = (a, b) if a < b else (b, a)
        i, j = surface.edge_index(e), surface.edge_index(image)
        pairs.add((min(i, j), max(i, j)))
    return sorted(pairs)


def make_regular_octahedron() -> Polyhedron:
    """Octahedron with vertices at the signed unit axis points."""
    exact = {
        0: (Fraction(1), Fraction(0), Fraction(0)),
        1: (Fraction(0), Fraction(1), Fraction(0)),
        2: (Fraction(0), Fraction(0), Fraction(1)),
        3: (Fraction(0), Fraction(0), Fraction(-1)),
        4: (Fraction(0), Fraction(-1), Fraction(0)),
        5: (Fraction(-1), Fraction(0), Fraction(0)),
    }
    surface = SimplicialSurface(OCTAHEDRON_FACES)
    return Polyhedron(surface, _float_coords(exact), exact_coords=exact)


def make_triangulated_cube() -> Polyhedron:
    """Unit cube, each square face split along the diagonal from the first
    vertex of its outward-oriented loop.

    Vertex v has coordinates (v & 1, (v >> 1) & 1, (v >> 2) & 1); the split
    rule sends the loop (v0, v1, v2, v3) to triangles (v0, v1, v2) and
    (v0, v2, v3).
    """
    squares = [
        (0, 2, 3, 1),  # z = 0, seen from below
        (4, 5, 7, 6),  # z = 1, seen from above
        (0, 4, 6, 2),  # x = 0
        (1, 3, 7, 5),  # x = 1
        (0, 1, 5, 4),  # y = 0
        (2, 6, 7, 3),  # y = 1
    ]
    faces = []
    for v0, v1, v2, v3 in squares:
        faces += [(v0, v1, v2), (v0, v2, v3)]
    exact = {
        v: (Fraction(v & 1), Fraction((v >> 1) & 1), Fraction((v >> 2) & 1))
        for v in range(8)
    }
    surface = SimplicialSurface(faces)
    return Polyhedron(surface, _float_coords(exact), exact_coords=exact)


def make_regular_tetrahedron() -> Polyhedron:
    """Regular tetrahedron on alternating cube corners, edge length 2*sqrt(2)."""
    exact = {
        0: (Fraction(1), Fraction(1), Fraction(1)),
        1: (Fraction(1), Fraction(-1), Fraction(-1)),
        2: (Fraction(-1), Fraction(1), Fraction(-1)),
        3: (Fraction(-1), Fraction(-1), Fraction(1)),
    }
    faces = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]
    surface = SimplicialSurface(faces)
    return Polyhedron(surface, _float_coords(exact), exact_coords=exact)


DISTINCT_RADICANDS = (2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19)


def _trilaterate(p1, r1, p2, r2, p3, r3, sign):
    ex = p2 - p1
    d = np.linalg.norm(ex)
    ex = ex / d
    i = float(np.dot(ex, p3 - p1))
    ey = p3 - p1 - i * ex
    ey = ey / np.linalg.norm(ey)
    ez = np.cross(ex, ey)
    j = float(np.dot(ey, p3 - p1))
    x = (r1**2 - r2**2 + d**2) / (2 * d)
    y = (r1**2 - r3**2 + i**2 + j**2 - 2 * i * x) / (2 * j)
    zsq = r1**2 - x**2 - y**2
    if zsq < 0:
        return None
    return p1 + x * ex + y * ey + sign * np.sqrt(zsq) * ez


@lru_cache(maxsize=1)
def make_distinct_length_octahedron() -> Polyhedron:
    """Octahedron whose twelve edges realize twelve distinct squarefree
    square roots, so the length set is independent over the rationals.

    Vertices are placed sequentially: a base triangle, then vertex 3 on the
    circle determined by its two distances to the base edge, parametrized by
    an angle; vertices 4 and 5 follow by trilateration and the remaining
    length closes the loop, which pins the angle by a one-dimensional root
    find.  A few Gauss-Newton sweeps polish the solution to machine
    precision.  The realized lengths are certified against the declared
    exact values before the model is returned.
    """
    surface = SimplicialSurface(OCTAHEDRON_FACES)
    L = {e: float(np.sqrt(d)) for e, d in zip(surface.edges, DISTINCT_RADICANDS)}
    targets_sq = np.array(DISTINCT_RADICANDS, dtype=float)

    def build(theta, s4, s5):
        v0 = np.zeros(3)
        v1 = np.array([L[(0, 1)], 0.0, 0.0])
        x2 = (L[(0, 1)] ** 2 + L[(0, 2)] ** 2 - L[(1, 2)] ** 2) / (2 * L[(0, 1)])
        y2sq = L[(0, 2)] ** 2 - x2**2
        if y2sq <= 0:
            return None
        v2 = np.array([x2, np.sqrt(y2sq), 0.0])
        x3 = (L[(0, 1)] ** 2 + L[(0, 3)] ** 2 - L[(1, 3)] ** 2) / (2 * L[(0, 1)])
        rho3sq = L[(0, 3)] ** 2 - x3**2
        if rho3sq <= 0:
            return None
        rho3 = np.sqrt(rho3sq)
        v3 = np.array([x3, rho3 * np.cos(theta), rho3 * np.sin(theta)])
        v4 = _trilaterate(v0, L[(0, 4)], v2, L[(2, 4)], v3, L[(3, 4)], s4)
        v5 = _trilaterate(v1, L[(1, 5)], v2, L[(2, 5)], v3, L[(3, 5)], s5)
        if v4 is None or v5 is None:
            return None
        return np.array([v0, v1, v2, v3, v4, v5])

    def closing(theta, s4, s5):
        X = build(theta, s4, s5)
        return np.nan if X is None else float(np.linalg.norm(X[4] - X[5])) - L[(4, 5)]

    X = None
    thetas = np.linspace(0.01, 2 * np.pi - 0.01, 720)
    for s4, s5 in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        vals = np.array([closing(t, s4, s5) for t in thetas])
        for k in range(len(thetas) - 1):
            if np.isnan(vals[k]) or np.isnan(vals[k + 1]) or vals[k] * vals[k + 1] > 0:
                continue
            root = brentq(
                lambda t: closing(t, s4, s5), thetas[k], thetas[k + 1], xtol=1e-15
            )
            X = build(root, s4, s5)
            break
        if X is not None:
            break
    if X is None:
        raise RuntimeError("no realization found for the distinct-length octahedron")

    for _ in range(4):
        g = squared_length_residual(X, surface, targets_sq)
        if np.max(np.abs(g)) < 1e-14:
            break
        J = rigidity_matrix(X, surface)
        delta, *_ = np.linalg.lstsq(J, -g, rcond=None)
        X = X + delta.reshape(-1, 3)

    declared = [ExactLength(Fraction(1), d) for d in DISTINCT_RADICANDS]
    P = Polyhedron(
        surface,
        {v: X[i] for i, v in enumerate(surface.vertices)},
        exact_lengths=declared,
    )
    realized = edge_length_vector(P)
    if np.max(np.abs(realized - np.sqrt(targets_sq))) > 1e-10:
        raise RuntimeError("distinct-length octahedron failed to converge")
    return P


BUILTIN_MODELS = {
    "octahedron": make_regular_octahedron,
    "cube": make_triangulated_cube,
    "tetrahedron": make_regular_tetrahedron,
    "bricard-default": make_bricard_type1,
    "octahedron-distinct": make_distinct_length_octahedron,
}


def make_model(name: str) -> Polyhedron:
    try:
        return BUILTIN_MODELS[name]()
    except KeyError:
        raise ValueError(
            f"unknown model {name!r}; available: {sorted(BUILTIN_MODELS)}"
        ) from None


# ---------------------------------------------------------------------------
# OFF meshes
# ---------------------------------------------------------------------------


def load_off(text: str) -> Polyhedron:
    """Parse an OFF mesh (triangles only, 0-based indices, '#' comments)."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            lines.append((lineno, content))
    if not lines:
        raise ParseError(1, "empty file")
    lineno, header = lines[0]
    if header != "OFF":
        raise ParseError(lineno, f"expected 'OFF' header, got {header!r}")
    if len(lines) < 2:
        raise ParseError(lineno, "missing counts line")
    lineno, counts = lines[1]
    parts = counts.split()
    if len(parts) != 3:
        raise ParseError(lineno, f"expected 'nV nF nE', got {counts!r}")
    try:
        nv, nf, _ = (int(p) for p in parts)
    except ValueError:
        raise ParseError(lineno, f"counts must be integers, got {counts!r}") from None
    body = lines[2:]
    if len(body) < nv + nf:
        last = body[-1][0] if body else lineno
        raise ParseError(last, f"expected {nv} vertex and {nf} face lines")
    coords = {}
    for i in range(nv):
        lineno, line = body[i]
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(lineno, f"expected 3 coordinates, got {line!r}")
        try:
            coords[i] = np.array([float(p) for p in parts])
        except ValueError:
            raise ParseError(lineno, f"bad coordinate in {line!r}") from None
    faces = []
    for i in range(nf):
        lineno, line = body[nv + i]
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(lineno, f"bad face line {line!r}") from None
        if not nums or nums[0] != 3 or len(nums) != 4:
            raise NonTriangularFaceError(lineno, f"only triangles are supported: {line!r}")
        if any(v < 0 or v >= nv for v in nums[1:]):
            raise ParseError(lineno, f"vertex index out of range in {line!r}")
        faces.append(tuple(nums[1:]))
    surface = SimplicialSurface(faces)
    used = set(surface.vertices)
    return Polyhedron(surface, {v: coords[v] for v in used})


def save_off(P: Polyhedron) -> str:
    """Canonical OFF text: vertices renumbered in sorted-id order, faces
    rotated to start at their smallest vertex and sorted; round trips
    byte-identically."""
    vmap = {v: i for i, v in enumerate(P.surface.vertices)}
    canon_faces = []
    for f in P.surface.faces:
        g = tuple(vmap[v] for v in f)
        k = g.index(min(g))
        canon_faces.append(g[k:] + g[:k])
    canon_faces.sort()
    out = ["OFF", f"# format_version: {FORMAT_VERSION}"]
    out.append(f"{P.surface.n_vertices} {P.surface.n_faces} 0")
    for v in P.surface.vertices:
        x, y, z = (repr(float(c)) for c in P.point(v))
        out.append(f"{x} {y} {z}")
    for f in canon_faces:
        out.append(f"3 {f[0]} {f[1]} {f[2]}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def save_report_json(certificate, combinations, monitoring=None, edges=None) -> str:
    """Analysis report as deterministic JSON.

    ``edges`` (canonical edge list) translates edge indices into vertex
    pairs; without it indices are emitted as-is.
    """

    def edge_name(i):
        return list(edges[i]) if edges is not None else i

    relations = []
    if certificate.evidence.relation is not None:
        relations.append(list(certificate.evidence.relation))
    combs = []
    for k, comb in enumerate(combinations):
        entry = {
            "label": comb.label,
            "coeffs": list(comb.coeffs),
            "constant": comb.claimed_constant,
            "max_deviation": (
                monitoring.combination_deviations[k] if monitoring is not None else None
            ),
        }
        combs.append(entry)
    monitors = None
    if monitoring is not None:
        monitors = {
            "volume": monitoring.volume_deviation,
            "weighted_angle_sum": monitoring.weighted_angle_sum_deviation,
        }
    report = {
        "format_version": FORMAT_VERSION,
        "verdict": certificate.verdict,
        "mode": certificate.mode,
        "height": certificate.height,
        "relations": relations,
        "constant_angle_edges": [edge_name(i) for i in certificate.constant_angle_edges],
        "caveat": certificate.caveat,
        "combinations": combs,
        "monitors": monitors,
    }
    return json.dumps(report, indent=2) + "\n"


def save_series_csv(path: FlexPath | None) -> str:
    """Flex time series as CSV: parameter, lifted angle per edge, volume and
    length-weighted angle sum, 17 significant digits."""
    if path is None or path.n_samples == 0:
        return f"# format_version: {FORMAT_VERSION}\nt,volume,weighted_angle_sum\n"
    cols = [f"phi_{a}_{b}" for a, b in path.surface.edges]
    header = "t," + ",".join(cols) + ",volume,weighted_angle_sum"
    rows = [f"# format_version: {FORMAT_VERSION}", header]
    for k in range(path.n_samples):
        Pk = path.polyhedron_at(k)
        vol = oriented_volume(Pk)
        was = float(np.dot(edge_length_vector(Pk), path.lifted_angles[k]))
        cells = [format(path.ts[k], ".17g")]
        cells += [format(v, ".17g") for v in path.lifted_angles[k]]
        cells += [format(vol, ".17g"), format(was, ".17g")]
        rows.append(",".join(cells))
    return "\n".join(rows) + "\n"
