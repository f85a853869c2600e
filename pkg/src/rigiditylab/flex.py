"""Numerical flexes on the edge-length constraint variety.

Configurations live in R^(3v).  The rigidity matrix is the Jacobian of the
squared edge lengths; its kernel beyond the six rigid motions measures
infinitesimal flexibility.  Flexes are traced by adaptive predictor-corrector
continuation: the predictor follows a unit kernel vector orthogonal to the
rigid motions, the corrector projects back onto the constraint set by
Gauss-Newton inside the affine slice orthogonal to the rigid motions.
Dihedral angles are recorded along the way and unwrapped into continuous
lifted series.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .geometry import Polyhedron, principal_dihedral
from .surfaces import SimplicialSurface

logger = logging.getLogger("rigiditylab")

SV_THRESHOLD = 1e-8
LIFT_AMBIGUITY_TOL = 1e-9


class DegenerateConfigurationError(Exception):
    """All vertices collinear; the rigid-motion space degenerates."""


class SingularPointError(Exception):
    """Kernel dimension is not 1 where the tracer needs a unique tangent."""

    def __init__(self, message, flex_dim=None, path=None):
        super().__init__(message)
        self.flex_dim = flex_dim
        self.path = path


class CorrectorDivergenceError(Exception):
    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path


class FaceDegenerationError(Exception):
    def __init__(self, face, area, path=None):
        super().__init__(f"face {face} degenerated (area {area:.3e})")
        self.face = face
        self.area = area
        self.path = path


class LiftAmbiguityError(Exception):
    """Consecutive principal values differ by exactly pi; lifting is ambiguous."""


def as_config(x) -> np.ndarray:
    """Coerce to an (n, 3) coordinate array."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 3)
    return x


def polyhedron_from_config(surface: SimplicialSurface, x) -> Polyhedron:
    x = as_config(x)
    return Polyhedron(surface, {v: x[i] for i, v in enumerate(surface.vertices)})


def config_from_polyhedron(P: Polyhedron) -> np.ndarray:
    return P.vertex_array()


def rigidity_matrix(x, surface: SimplicialSurface) -> np.ndarray:
    """Jacobian of the squared edge lengths, shape (n_edges, 3*n_vertices).

    The row of edge (i, j) carries 2*(x_i - x_j) in vertex i's block and the
    negative in vertex j's block.
    """
    x = as_config(x)
    nv = x.shape[0]
    R = np.zeros((surface.n_edges, 3 * nv))
    for row, (a, b) in enumerate(surface.edges):
        i, j = surface.vertex_index(a), surface.vertex_index(b)
        d = 2.0 * (x[i] - x[j])
        R[row, 3 * i : 3 * i + 3] = d
        R[row, 3 * j : 3 * j + 3] = -d
    return R


def trivial_motion_basis(x) -> np.ndarray:
    """Orthonormal basis of the rigid motions at x, shape (3n, 6).

    Three translations and three rotations linearized about the centroid.
    """
    x = as_config(x)
    nv = x.shape[0]
    centered = x - x.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if nv < 3 or sv[1] <= 1e-12 * max(sv[0], 1.0):
        raise DegenerateConfigurationError("vertices are collinear")
    basis = np.zeros((3 * nv, 6))
    for k in range(3):
        basis[k::3, k] = 1.0
    axes = np.eye(3)
    for k in range(3):
        rot = np.cross(np.broadcast_to(axes[k], centered.shape), centered)
        basis[:, 3 + k] = rot.reshape(-1)
    q, _ = np.linalg.qr(basis)
    return q


def _kernel_beyond_trivial(x, surface, tol):
    """Kernel vectors of the rigidity matrix orthogonal to rigid motions."""
    x = as_config(x)
    R = rigidity_matrix(x, surface)
    T = trivial_motion_basis(x)
    A = np.vstack([R, T.T])
    _, s, vt = np.linalg.svd(A)
    cutoff = tol * s[0] if s.size else 0.0
    rank = int(np.count_nonzero(s > cutoff))
    null_dim = A.shape[1] - rank
    return vt[A.shape[1] - null_dim :].T if null_dim else np.zeros((A.shape[1], 0))


def infinitesimal_flex_dim(x, surface: SimplicialSurface, tol: float = SV_THRESHOLD) -> int:
    """Kernel dimension of the rigidity matrix beyond the six rigid motions."""
    x = as_config(x)
    R = rigidity_matrix(x, surface)
    trivial_motion_basis(x)  # raises on collinear input
    s = np.linalg.svd(R, compute_uv=False)
    cutoff = tol * s[0] if s.size else 0.0
    rank = int(np.count_nonzero(s > cutoff))
    return 3 * x.shape[0] - rank - 6


def squared_length_residual(x, surface, targets_sq) -> np.ndarray:
    x = as_config(x)
    out = np.empty(surface.n_edges)
    for row, (a, b) in enumerate(surface.edges):
        i, j = surface.vertex_index(a), surface.vertex_index(b)
        d = x[i] - x[j]
        out[row] = float(np.dot(d, d)) - targets_sq[row]
    return out


@dataclass
class FlexPath:
    """Sampled one-parameter deformation with continuous lifted angles.

    ``ts`` is arc-length-proportional, rescaled to [0, 1].  ``configs`` has
    shape (K, n_vertices, 3); ``raw_angles`` and ``lifted_angles`` have shape
    (K, n_edges) in canonical edge order.
    """

    surface: SimplicialSurface
    ts: np.ndarray
    configs: np.ndarray
    raw_angles: np.ndarray
    lifted_angles: np.ndarray
    degenerate_flags: np.ndarray
    initial_lengths: np.ndarray
    diagnostics: list[dict] = field(default_factory=list)

    @property
    def n_samples(self) -> int:
        return len(self.ts)

    def polyhedron_at(self, k: int) -> Polyhedron:
        return polyhedron_from_config(self.surface, self.configs[k])

    def length_drift(self) -> float:
        """Maximum relative edge-length drift over the whole path."""
        worst = 0.0
        for k in range(self.n_samples):
            x = self.configs[k]
            for row, (a, b) in enumerate(self.surface.edges):
                i, j = self.surface.vertex_index(a), self.surface.vertex_index(b)
                ell = float(np.linalg.norm(x[i] - x[j]))
                worst = max(worst, abs(ell - self.initial_lengths[row]) / self.initial_lengths[row])
        return worst


def _wrap_to_pi(delta: np.ndarray) -> np.ndarray:
    """Map angle differences into (-pi, pi]."""
    return np.pi - np.mod(np.pi - delta, 2.0 * np.pi)


def lift_angles(
    raw: np.ndarray,
    degenerate: np.ndarray | None = None,
    ambiguity_tol: float = LIFT_AMBIGUITY_TOL,
) -> np.ndarray:
    """Unwrap principal-value series into continuous lifted series.

    ``raw`` has shape (K, n_edges) with values in [0, 2*pi).  Each lifted
    series starts at the raw value at the first sample and accumulates
    increments wrapped into (-pi, pi].  Samples flagged degenerate carry the
    artificial principal value 0; they are bridged by skipping them in the
    unwrap and filling linearly between their lifted neighbours, which picks
    the 0 / 2*pi branch consistent with continuity.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.ndim == 1:
        raw = raw[:, None]
    K, E = raw.shape
    if degenerate is None:
        degenerate = np.zeros_like(raw, dtype=bool)
    lifted = np.empty_like(raw)
    for e in range(E):
        good = np.flatnonzero(~degenerate[:, e])
        if good.size == 0:
            lifted[:, e] = 0.0
            continue
        series = raw[good, e]
        deltas = _wrap_to_pi(np.diff(series))
        ambiguous = np.abs(np.abs(deltas) - np.pi) <= ambiguity_tol
        if np.any(ambiguous):
            bad = int(np.flatnonzero(ambiguous)[0])
            raise LiftAmbiguityError(
                f"edge column {e}: consecutive principal values "
                f"{series[bad]:.6f} and {series[bad + 1]:.6f} differ by pi"
            )
        unwrapped = np.concatenate([[series[0]], series[0] + np.cumsum(deltas)])
        col = np.interp(np.arange(K), good, unwrapped)
        # np.interp holds boundary values constant, which keeps a leading
        # degenerate sample at the defined principal value 0 only if raw says
        # so; the first sample is never altered when it is non-degenerate.
        if degenerate[0, e]:
            col[0] = raw[0, e]
        lifted[:, e] = col
    return lifted


def _principal_values(surface, x):
    P = polyhedron_from_config(surface, x)
    raw = np.empty(surface.n_edges)
    flags = np.zeros(surface.n_edges, dtype=bool)
    for i, e in enumerate(surface.edges):
        d = principal_dihedral(P, e)
        raw[i] = d.principal_value
        flags[i] = d.degenerate_flag
    return raw, flags


def _face_areas(surface, x):
    x = as_config(x)
    idx = surface.vertex_index
    areas = []
    for f in surface.faces:
        a, b, c = (x[idx(v)] for v in f)
        areas.append(0.5 * float(np.linalg.norm(np.cross(b - a, c - a))))
    return np.array(areas)


def trace_flex(
    x0,
    surface: SimplicialSurface,
    direction_hint: np.ndarray | None = None,
    n_steps: int = 200,
    step: float = 0.01,
    tol: float | None = None,
    sv_tol: float = SV_THRESHOLD,
    max_corrector_iters: int = 25,
) -> FlexPath:
    """Trace a flex from a flexible configuration.

    The step size starts at ``step`` (also its cap), halves on corrector
    failure and doubles after three consecutive easy corrections.  Tracing
    aborts with :class:`SingularPointError` when the kernel dimension leaves
    1, with :class:`FaceDegenerationError` when a face area collapses, and
    with :class:`CorrectorDivergenceError` when no step size works; the
    partial path is attached to the exception.
    """
    x = as_config(x0).copy()
    nv = x.shape[0]
    targets_sq = np.empty(surface.n_edges)
    for row, (a, b) in enumerate(surface.edges):
        i, j = surface.vertex_index(a), surface.vertex_index(b)
        d = x[i] - x[j]
        targets_sq[row] = float(np.dot(d, d))
    initial_lengths = np.sqrt(targets_sq)
    max_len = float(initial_lengths.max())
    if tol is None:
        tol = 1e-11 * max_len**2
    area_tol = 1e-12 * max_len**2

    def build_path(samples, raws, flags, ds, diags):
        ts = np.concatenate([[0.0], np.cumsum(ds)]) if ds else np.array([0.0])
        if ts[-1] > 0:
            ts = ts / ts[-1]
        raw_arr = np.array(raws)
        flag_arr = np.array(flags)
        lifted = lift_angles(raw_arr, flag_arr)
        return FlexPath(
            surface=surface,
            ts=ts,
            configs=np.array(samples),
            raw_angles=raw_arr,
            lifted_angles=lifted,
            degenerate_flags=flag_arr,
            initial_lengths=initial_lengths,
            diagnostics=diags,
        )

    samples = [x.copy()]
    raw0, flag0 = _principal_values(surface, x)
    raws, flags = [raw0], [flag0]
    ds: list[float] = []
    diags: list[dict] = []

    def tangent_at(y, path_builder_args):
        kernel = _kernel_beyond_trivial(y, surface, sv_tol)
        if kernel.shape[1] != 1:
            raise SingularPointError(
                f"kernel dimension beyond rigid motions is {kernel.shape[1]}, not 1",
                flex_dim=kernel.shape[1],
                path=build_path(*path_builder_args),
            )
        return kernel[:, 0]

    tangent = tangent_at(x, (samples, raws, flags, ds, diags))
    if direction_hint is not None:
        hint = np.asarray(direction_hint, dtype=float).reshape(-1)
        if float(np.dot(tangent, hint)) < 0:
            tangent = -tangent
    elif tangent[int(np.argmax(np.abs(tangent)))] < 0:
        tangent = -tangent

    h = step
    easy_run = 0
    accepted = 0
    while accepted < n_steps:
        if h < step * 2.0**-24:
            raise CorrectorDivergenceError(
                f"step size underflow at accepted step {accepted}",
                path=build_path(samples, raws, flags, ds, diags),
            )
        x_pred = x + h * tangent.reshape(nv, 3)
        T_pred = trivial_motion_basis(x_pred)
        y = x_pred.copy()
        ok = False
        for it in range(max_corrector_iters):
            g = squared_length_residual(y, surface, targets_sq)
            slice_res = T_pred.T @ (y - x_pred).reshape(-1)
            res = np.concatenate([g, slice_res])
            if np.max(np.abs(g)) <= tol and np.max(np.abs(slice_res)) <= tol:
                ok = True
                gn_iters = it
                break
            J = np.vstack([rigidity_matrix(y, surface), T_pred.T])
            delta, *_ = np.linalg.lstsq(J, -res, rcond=None)
            y = y + delta.reshape(nv, 3)
            if not np.all(np.isfinite(y)):
                break
        if not ok:
            h *= 0.5
            easy_run = 0
            logger.debug("corrector failed, halving step to %.3e", h)
            continue

        areas = _face_areas(surface, y)
        if areas.min() <= area_tol:
            fi = int(np.argmin(areas))
            raise FaceDegenerationError(
                surface.faces[fi],
                float(areas.min()),
                path=build_path(samples, raws, flags, ds, diags),
            )

        ds.append(float(np.linalg.norm((y - x).reshape(-1))))
        x = y
        samples.append(x.copy())
        raw_k, flag_k = _principal_values(surface, x)
        raws.append(raw_k)
        flags.append(flag_k)
        diags.append({"step": h, "corrector_iters": gn_iters})
        accepted += 1

        new_tangent = tangent_at(x, (samples, raws, flags, ds, diags))
        if float(np.dot(new_tangent, tangent)) < 0:
            new_tangent = -new_tangent
        tangent = new_tangent

        if gn_iters <= 3:
            easy_run += 1
            if easy_run >= 3:
                h = min(2.0 * h, step)
                easy_run = 0
        else:
            easy_run = 0

    return build_path(samples, raws, flags, ds, diags)


def best_fit_rigid_motion(source: np.ndarray, target: np.ndarray):
    """Rotation (det +1) and translation minimizing |R*source + t - target|."""
    src = as_config(source)
    dst = as_config(target)
    c_src = src.mean(axis=0)
    c_dst = dst.mean(axis=0)
    H = (src - c_src).T @ (dst - c_dst)
    U, _, Vt = np.linalg.svd(H)
    d = np.sign(np.linalg.det(Vt.T @ U.T))
    R = Vt.T @ np.diag([1.0, 1.0, d]) @ U.T
    t = c_dst - R @ c_src
    return R, t


def is_trivial_flex(path: FlexPath, tol: float = 1e-7) -> bool:
    """True when every sample is a rigid motion of the first one.

    Each sample is aligned to the initial configuration by orthogonal
    Procrustes (proper rotations only); the path is trivial iff the largest
    vertex misfit stays below ``tol`` times the configuration diameter.
    """
    if path.n_samples <= 1:
        return True
    x0 = path.configs[0]
    diam = float(
        max(
            np.linalg.norm(x0[i] - x0[j])
            for i in range(len(x0))
            for j in range(i + 1, len(x0))
        )
    )
    worst = 0.0
    for k in range(1, path.n_samples):
        R, t = best_fit_rigid_motion(x0, path.configs[k])
        moved = x0 @ R.T + t
        worst = max(worst, float(np.max(np.linalg.norm(moved - path.configs[k], axis=1))))
    return worst <= tol * diam
