import numpy as np
import pytest

from ancf import ancf_eval_36, ancf_eval_normalized
from bezier import BezierNet, bezier_eval, bounding_diagonal, elevate_to
from bspline import BsplineSurface, bspline_eval, convertible_segments, global_parameter
from conftest import DEGREE_PAIRS
from conversion import (
    ancf_to_bezier,
    ancf_to_lower_bezier,
    bezier_to_ancf,
    bspline_segment_to_ancf,
    bspline_to_ancf_mesh,
    reduce_element,
    shared_edge_defect,
)
from geometry_exceptions import MixedSlopeRejected

GRID = np.linspace(0.0, 1.0, 11)


def grid_deviation(source, element):
    return max(
        float(np.linalg.norm(source(xi, eta) - ancf_eval_normalized(element, xi, eta)))
        for xi in GRID
        for eta in GRID
    )


def segment_source(surface, e, f):
    def source(xi, eta):
        u = global_parameter(surface.knots_u, e, xi)
        v = global_parameter(surface.knots_v, f, eta)
        return bspline_eval(surface, u, v)
    return source


@pytest.mark.parametrize("degrees", DEGREE_PAIRS)
def test_bezier_conversion_equivalence(rng, make_net, degrees):
    for _ in range(100):
        net = make_net(*degrees)
        a, b = rng.uniform(0.2, 5.0, 2)
        elem, _ = bezier_to_ancf(net, a, b)
        deviation = grid_deviation(lambda xi, eta: bezier_eval(net, xi, eta), elem)
        assert deviation <= 1e-10 * bounding_diagonal(net.points)


@pytest.mark.parametrize("degrees", DEGREE_PAIRS)
def test_bspline_conversion_equivalence(rng, make_surface, degrees):
    for _ in range(50):
        surface = make_surface(*degrees, count_u=degrees[0] + 2, count_v=degrees[1] + 2)
        segments = convertible_segments(surface)
        e, f = segments[rng.integers(len(segments))]
        elem, _ = bspline_segment_to_ancf(surface, e, f)
        assert grid_deviation(segment_source(surface, e, f), elem) <= 1e-10 * bounding_diagonal(surface.points)


def test_reduced_element_for_parallelogram_nets(make_parallelogram_net):
    for _ in range(100):
        net = make_parallelogram_net()
        elem, _ = bezier_to_ancf(net)
        assert np.max(np.linalg.norm(elem.mixed_slopes, axis=1)) <= 1e-12
        reduced = reduce_element(elem)
        deviation = max(
            float(np.linalg.norm(bezier_eval(net, xi, eta) - ancf_eval_36(reduced, xi, eta)))
            for xi in GRID
            for eta in GRID
        )
        assert deviation <= 1e-10 * bounding_diagonal(net.points)


def test_generic_nets_are_not_reduced(make_net):
    for _ in range(100):
        elem, _ = bezier_to_ancf(make_net(3, 3))
        with pytest.raises(MixedSlopeRejected):
            reduce_element(elem)


def test_bicubic_round_trip(rng, make_net):
    for _ in range(100):
        net = make_net(3, 3)
        elem, _ = bezier_to_ancf(net, *rng.uniform(0.2, 5.0, 2))
        assert ancf_to_bezier(elem).allclose(net, atol=1e-11)


@pytest.mark.parametrize("degrees", DEGREE_PAIRS)
def test_elevate_convert_invert_reduce(rng, make_net, degrees):
    for _ in range(20):
        net = make_net(*degrees)
        elem, _ = bezier_to_ancf(elevate_to(net), *rng.uniform(0.2, 5.0, 2))
        assert ancf_to_lower_bezier(elem).allclose(net, atol=1e-10)


def test_adjacent_segments_share_edges(make_surface):
    for _ in range(20):
        surface = make_surface(3, 3, count_u=6, count_v=6)
        elements = {(c.e, c.f): c.element for c in bspline_to_ancf_mesh(surface)}
        scale = bounding_diagonal(surface.points)
        for (e, f), element in elements.items():
            if (e + 1, f) in elements:
                assert shared_edge_defect(element, elements[(e + 1, f)], "u") <= 1e-11 * scale
            if (e, f + 1) in elements:
                assert shared_edge_defect(element, elements[(e, f + 1)], "v") <= 1e-11 * scale


@pytest.mark.parametrize("degrees", DEGREE_PAIRS)
def test_window_extreme_points_do_not_reach_opposite_corner(make_surface, degrees):
    k, l = degrees
    surface = make_surface(k, l, count_u=k + 3, count_v=l + 3)
    for e, f in convertible_segments(surface):
        base, _ = bspline_segment_to_ancf(surface, e, f)
        # moved control point -> corner it cannot influence
        cases = (((e, f), "r00(0,0)"), ((e - k, f - l), "r00(a,b)"), ((e - k, f), "r00(a,0)"), ((e, f - l), "r00(0,b)"))
        for index, corner in cases:
            points = np.array(surface.points)
            points[index] += [3.0, -2.0, 5.0]
            moved = BsplineSurface(k, l, points, surface.knots_u, surface.knots_v)
            elem, _ = bspline_segment_to_ancf(moved, e, f)
            assert np.linalg.norm(elem.node(corner) - base.node(corner)) <= 1e-14


@pytest.mark.parametrize("degrees", DEGREE_PAIRS)
def test_matrix_rows_and_superposition(rng, make_surface, degrees):
    for _ in range(10):
        surface = make_surface(*degrees)
        other = rng.uniform(-1.0, 1.0, surface.points.shape)
        combined = BsplineSurface(*degrees, surface.points + 0.3 * other, surface.knots_u, surface.knots_v)
        second = BsplineSurface(*degrees, other, surface.knots_u, surface.knots_v)
        for e, f in convertible_segments(surface):
            first_elem, transform = bspline_segment_to_ancf(surface, e, f, 1.0, 2.0)
            assert transform.row_sum_defect() <= 1e-12
            second_elem, _ = bspline_segment_to_ancf(second, e, f, 1.0, 2.0)
            combined_elem, _ = bspline_segment_to_ancf(combined, e, f, 1.0, 2.0)
            expected = first_elem.nodes + 0.3 * second_elem.nodes
            assert np.allclose(combined_elem.nodes, expected, rtol=0.0, atol=1e-12)

        net = BezierNet(*degrees, rng.uniform(-1.0, 1.0, (degrees[0] + 1, degrees[1] + 1, 3)))
        assert bezier_to_ancf(net, 0.5, 1.5)[1].row_sum_defect() <= 1e-12
