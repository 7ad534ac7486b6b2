import numpy as np
import pytest

import geometry_files
from bezier import BezierNet
from bspline import BsplineSurface

DEGREE_PAIRS = [(m, n) for m in (1, 2, 3) for n in (1, 2, 3)]

# corner quadrilateral points (c, d, e, f) with b_c + b_d = b_e + b_f
PARALLELOGRAM_FIXES = (((1, 1), (1, 0), (0, 1), (0, 0)),
                       ((1, 2), (1, 3), (0, 2), (0, 3)),
                       ((2, 1), (2, 0), (3, 1), (3, 0)),
                       ((2, 2), (2, 3), (3, 2), (3, 3)))


def random_knots(rng, count, degree, start=0.0):
    spans = rng.uniform(0.5, 1.5, count + degree)
    return np.concatenate([[start], start + np.cumsum(spans)])


def bilinear_net(lift=0.0):
    """Unit square net; lift raises b11 so that the surface becomes (u, v, lift * u * v)."""
    return BezierNet(1, 1, [[[0, 0, 0], [0, 1, 0]], [[1, 0, 0], [1, 1, lift]]])


def grid_net(scale=1.0):
    return BezierNet(3, 3, [[[scale * i, scale * j, 0.0] for j in range(4)] for i in range(4)])


@pytest.fixture
def rng():
    return np.random.default_rng(20140607)


@pytest.fixture
def make_net(rng):
    def make(degree_u, degree_v):
        return BezierNet(degree_u, degree_v, rng.uniform(-1.0, 1.0, (degree_u + 1, degree_v + 1, 3)))
    return make


@pytest.fixture
def make_surface(rng):
    def make(degree_u, degree_v, count_u=None, count_v=None):
        count_u = count_u or degree_u + 3
        count_v = count_v or degree_v + 3
        return BsplineSurface(
            degree_u,
            degree_v,
            rng.uniform(-1.0, 1.0, (count_u, count_v, 3)),
            random_knots(rng, count_u, degree_u, rng.uniform(-1.0, 1.0)),
            random_knots(rng, count_v, degree_v, rng.uniform(-1.0, 1.0)),
        )
    return make


@pytest.fixture
def make_parallelogram_net(rng):
    """Random bicubic nets whose four corner quadrilaterals are parallelograms."""
    def make():
        points = rng.uniform(-1.0, 1.0, (4, 4, 3))
        for target, c, d, e in PARALLELOGRAM_FIXES:
            points[target] = points[c] + points[d] - points[e]
        return BezierNet(3, 3, points)
    return make


@pytest.fixture
def write_geometry(tmp_path):
    def write(payload, filename, name="test"):
        path = tmp_path / filename
        geometry_files.save(path, geometry_files.wrap(payload, name=name, units="mm"))
        return path
    return write
