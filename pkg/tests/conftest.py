import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mpm import F2, FilteredComplex, Presentation, free_presentation


def _ones_column(n_rows):
    return tuple((r, 1) for r in range(n_rows))


@pytest.fixture(scope="session")
def pres_f() -> Presentation:
    """H0 presentation of the two-vertex/three-edge complex, function f."""
    return Presentation(F2, 2, ((0, 0), (0, 0)), ((1, 4), (3, 3), (4, 1)),
                        (((1, 1),), ((1, 1),), ((1, 1),)))


@pytest.fixture(scope="session")
def pres_g() -> Presentation:
    """Same underlying matrix, middle relation moved from (3,3) to (2,2)."""
    return Presentation(F2, 2, ((0, 0), (0, 0)), ((1, 4), (2, 2), (4, 1)),
                        (((1, 1),), ((1, 1),), ((1, 1),)))


@pytest.fixture(scope="session")
def h1_f() -> Presentation:
    return free_presentation([(3, 4), (4, 3)], F2)


@pytest.fixture(scope="session")
def h1_g() -> Presentation:
    return free_presentation([(2, 4), (4, 2)], F2)


def two_vertex_three_edge_complex(middle):
    """Two 0-cells, three 1-cells each attached to both vertices."""
    cells = [("p", 0, (0, 0)), ("q", 0, (0, 0)),
             ("a", 1, (1, 4)), ("b", 1, middle), ("c", 1, (4, 1))]
    boundary = {e: (("p", 1), ("q", 1)) for e in "abc"}
    return FilteredComplex(F2, 2, cells, boundary)


@pytest.fixture(scope="session")
def fig_complex_f() -> FilteredComplex:
    return two_vertex_three_edge_complex((3, 3))


@pytest.fixture(scope="session")
def fig_complex_g() -> FilteredComplex:
    return two_vertex_three_edge_complex((2, 2))


@pytest.fixture(scope="session")
def triangle_m() -> Presentation:
    """Module with generators at (0,-1), (-1,0) glued at the origin."""
    return Presentation(F2, 2, ((0, -1), (-1, 0)), ((0, 0),), (((0, 1), (1, 1)),))


def q_free(x, y) -> Presentation:
    return free_presentation([(x, y)], F2)
