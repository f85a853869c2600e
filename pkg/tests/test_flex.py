from dataclasses import dataclass

import numpy as np
import pytest

from rigiditylab import (
    DegenerateConfigurationError,
    FlexPath,
    LiftAmbiguityError,
    SingularPointError,
    infinitesimal_flex_dim,
    is_trivial_flex,
    lift_angles,
    rigidity_matrix,
    trace_flex,
    trivial_motion_basis,
)

from oracles import exact_flex_dim

TWO_PI = 2.0 * np.pi


@dataclass
class EdgeOnly:
    """Minimal stand-in for a surface: a bare edge list."""

    edges: tuple
    vertices: tuple

    @property
    def n_edges(self):
        return len(self.edges)

    def vertex_index(self, v):
        return self.vertices.index(v)


def test_single_edge_matrix():
    stub = EdgeOnly(edges=((0, 1),), vertices=(0, 1))
    x = np.array([[0.0, 0.0, 0.0], [1.0, 2.0, 3.0]])
    R = rigidity_matrix(x, stub)
    assert R.shape == (1, 6)
    delta = 2.0 * (x[0] - x[1])
    assert np.allclose(R[0, :3], delta)
    assert np.allclose(R[0, 3:], -delta)


def test_trivial_motions_in_kernel(octahedron, bricard):
    for P in (octahedron, bricard):
        x = P.vertex_array()
        R = rigidity_matrix(x, P.surface)
        T = trivial_motion_basis(x)
        assert np.max(np.abs(R @ T)) < 1e-12


def test_rows_match_finite_differences(bricard):
    x = bricard.vertex_array()
    surface = bricard.surface
    R = rigidity_matrix(x, surface)
    h = 1e-6

    def sq_lengths(y):
        out = np.empty(surface.n_edges)
        for row, (a, b) in enumerate(surface.edges):
            d = y[surface.vertex_index(a)] - y[surface.vertex_index(b)]
            out[row] = float(np.dot(d, d))
        return out

    flat = x.reshape(-1)
    fd = np.empty_like(R)
    for k in range(flat.size):
        plus = flat.copy()
        minus = flat.copy()
        plus[k] += h
        minus[k] -= h
        fd[:, k] = (sq_lengths(plus.reshape(-1, 3)) - sq_lengths(minus.reshape(-1, 3))) / (
            2 * h
        )
    scale = np.max(np.abs(R))
    assert np.max(np.abs(R - fd)) <= 1e-6 * scale


def test_flex_dims_match_exact_oracle(octahedron, cube, bricard):
    for P, expected in ((octahedron, 0), (cube, 0), (bricard, 1)):
        assert exact_flex_dim(P.exact_coords, P.surface) == expected
        assert infinitesimal_flex_dim(P.vertex_array(), P.surface) == expected


def test_collinear_configuration_rejected(octahedron):
    x = octahedron.vertex_array()
    x[:, 1:] = 0.0
    with pytest.raises(DegenerateConfigurationError):
        infinitesimal_flex_dim(x, octahedron.surface)


def test_trace_rigid_model_aborts(octahedron):
    with pytest.raises(SingularPointError) as exc:
        trace_flex(octahedron.vertex_array(), octahedron.surface, n_steps=5)
    assert exc.value.flex_dim == 0
    assert exc.value.path.n_samples == 1


def test_traced_path_properties(bricard, bricard_path):
    path = bricard_path
    assert path.n_samples == 61
    max_len = float(path.initial_lengths.max())
    assert path.length_drift() <= 10 * (1e-11 * max_len**2)
    variation = path.lifted_angles.max(axis=0) - path.lifted_angles.min(axis=0)
    assert variation.max() > 0.1
    # lifted series are continuous: consecutive increments stay below pi
    assert np.max(np.abs(np.diff(path.lifted_angles, axis=0))) < np.pi
    # lifted series start at the principal values
    assert np.allclose(path.lifted_angles[0], path.raw_angles[0])
    assert not is_trivial_flex(path)


def test_trace_deterministic(bricard):
    x0 = bricard.vertex_array()
    a = trace_flex(x0, bricard.surface, n_steps=10)
    b = trace_flex(x0, bricard.surface, n_steps=10)
    assert np.array_equal(a.configs, b.configs)


def test_direction_hint_flips_path(bricard):
    x0 = bricard.vertex_array()
    fwd = trace_flex(x0, bricard.surface, n_steps=5)
    hint = -(fwd.configs[1] - fwd.configs[0]).reshape(-1)
    back = trace_flex(x0, bricard.surface, direction_hint=hint, n_steps=5)
    d_f = (fwd.configs[1] - fwd.configs[0]).reshape(-1)
    d_b = (back.configs[1] - back.configs[0]).reshape(-1)
    assert float(np.dot(d_f, d_b)) < 0


def test_lift_constant_series():
    raw = np.full((5, 1), 1.2345)
    assert np.allclose(lift_angles(raw), 1.2345)


def test_lift_unwraps_branch_crossing():
    raw = np.array([[0.1], [6.2], [6.0]])
    lifted = lift_angles(raw)[:, 0]
    assert lifted == pytest.approx([0.1, 6.2 - TWO_PI, 6.0 - TWO_PI], abs=1e-12)


def test_lift_ambiguous_jump_rejected():
    raw = np.array([[0.0], [np.pi]])
    with pytest.raises(LiftAmbiguityError):
        lift_angles(raw)


def test_lift_bridges_degenerate_samples():
    raw = np.array([[0.3], [0.0], [TWO_PI - 0.1]])
    flags = np.array([[False], [True], [False]])
    lifted = lift_angles(raw, flags)[:, 0]
    # the middle sample interpolates between 0.3 and -0.1 on the lifted line
    assert lifted[0] == pytest.approx(0.3)
    assert lifted[2] == pytest.approx(-0.1, abs=1e-12)
    assert lifted[1] == pytest.approx(0.1, abs=1e-12)


def test_lift_refinement_consistency(bricard_path):
    fine = bricard_path
    coarse_raw = fine.raw_angles[::2]
    coarse_flags = fine.degenerate_flags[::2]
    coarse = lift_angles(coarse_raw, coarse_flags)
    assert np.max(np.abs(coarse - fine.lifted_angles[::2])) <= 1e-6


def test_trivial_flex_detection(octahedron):
    x0 = octahedron.vertex_array()
    configs = [x0]
    for angle in (0.3, 0.6, 0.9):
        c, s = np.cos(angle), np.sin(angle)
        R = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        configs.append(x0 @ R.T + np.array([0.1, -0.2, 0.05]) * angle)
    E = octahedron.surface.n_edges
    path = FlexPath(
        surface=octahedron.surface,
        ts=np.linspace(0, 1, 4),
        configs=np.array(configs),
        raw_angles=np.zeros((4, E)),
        lifted_angles=np.zeros((4, E)),
        degenerate_flags=np.zeros((4, E), dtype=bool),
        initial_lengths=np.full(E, np.sqrt(2)),
    )
    assert is_trivial_flex(path)


def test_single_sample_path_trivial(bricard_path):
    single = FlexPath(
        surface=bricard_path.surface,
        ts=bricard_path.ts[:1],
        configs=bricard_path.configs[:1],
        raw_angles=bricard_path.raw_angles[:1],
        lifted_angles=bricard_path.lifted_angles[:1],
        degenerate_flags=bricard_path.degenerate_flags[:1],
        initial_lengths=bricard_path.initial_lengths,
    )
    assert is_trivial_flex(single)
