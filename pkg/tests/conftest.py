import pytest

from rigiditylab import (
    make_bricard_type1,
    make_distinct_length_octahedron,
    make_regular_octahedron,
    make_regular_tetrahedron,
    make_triangulated_cube,
    trace_flex,
)


@pytest.fixture
def octahedron():
    return make_regular_octahedron()


@pytest.fixture
def cube():
    return make_triangulated_cube()


@pytest.fixture
def tetrahedron():
    return make_regular_tetrahedron()


@pytest.fixture
def bricard():
    return make_bricard_type1()


@pytest.fixture(scope="session")
def distinct_octahedron():
    return make_distinct_length_octahedron()


@pytest.fixture(scope="session")
def bricard_path():
    """A medium-length traced flex of the default Bricard octahedron,
    shared by the tests that only need some nontrivial path."""
    P = make_bricard_type1()
    return trace_flex(P.vertex_array(), P.surface, n_steps=60, step=0.01)
