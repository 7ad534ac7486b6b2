import numpy as np
import pytest

from bezier import (
    BezierNet,
    bernstein_basis,
    bernstein_derivative,
    bezier_eval,
    bezier_partial,
    de_casteljau,
    degree_elevate,
    elevate_to,
)
from conftest import DEGREE_PAIRS, bilinear_net
from geometry_exceptions import GeometryDomainError, InvalidGeometryOperation


class TestBernsteinBasis:
    def test_endpoint_interpolation(self):
        assert bernstein_basis(0, 3, 0.0) == 1.0
        assert bernstein_basis(3, 3, 1.0) == 1.0
        assert bernstein_basis(1, 3, 0.0) == 0.0

    @pytest.mark.parametrize("m", (1, 2, 3))
    def test_partition_of_unity(self, m):
        for t in np.linspace(0.0, 1.0, 101):
            assert abs(sum(bernstein_basis(i, m, t) for i in range(m + 1)) - 1.0) < 1e-14

    def test_binomial_value(self):
        assert bernstein_basis(1, 2, 0.5) == pytest.approx(0.5, abs=1e-15)

    def test_symmetry(self):
        for i in range(4):
            assert bernstein_basis(i, 3, 0.3) == pytest.approx(bernstein_basis(3 - i, 3, 0.7), abs=1e-15)

    @pytest.mark.parametrize("i, m, t", ((4, 3, 0.5), (-1, 2, 0.5), (1, 4, 0.5), (0, 2, -0.1), (0, 2, 1.1)))
    def test_domain_errors(self, i, m, t):
        with pytest.raises(GeometryDomainError):
            bernstein_basis(i, m, t)

    @pytest.mark.parametrize("m", (1, 2, 3))
    def test_derivative_matches_finite_difference(self, m):
        h = 1e-6
        for i in range(m + 1):
            fd = (bernstein_basis(i, m, 0.4 + h) - bernstein_basis(i, m, 0.4 - h)) / (2 * h)
            assert bernstein_derivative(i, m, 0.4) == pytest.approx(fd, abs=1e-8)


class TestBezierNet:
    def test_rejects_degree_zero_and_four(self):
        with pytest.raises(GeometryDomainError):
            BezierNet(0, 1, np.zeros((1, 2, 3)))
        with pytest.raises(GeometryDomainError):
            BezierNet(4, 1, np.zeros((5, 2, 3)))

    def test_rejects_wrong_grid(self):
        with pytest.raises(GeometryDomainError):
            BezierNet(2, 2, np.zeros((3, 2, 3)))

    def test_rejects_non_finite(self):
        points = np.zeros((2, 2, 3))
        points[1, 1, 2] = np.nan
        with pytest.raises(GeometryDomainError):
            BezierNet(1, 1, points)

    def test_points_are_read_only(self):
        net = bilinear_net()
        with pytest.raises(ValueError):
            net.points[0, 0, 0] = 5.0

    def test_from_points_infers_degrees(self):
        assert BezierNet.from_points(np.zeros((3, 4, 3))).degrees == (2, 3)


class TestBezierEval:
    def test_constant_net(self):
        c = np.array([1.5, -2.0, 0.25])
        net = BezierNet(2, 3, np.broadcast_to(c, (3, 4, 3)))
        assert np.allclose(bezier_eval(net, 0.3, 0.8), c, atol=1e-15)

    def test_linear_precision(self):
        assert np.allclose(bezier_eval(bilinear_net(), 0.25, 0.75), [0.25, 0.75, 0.0], atol=1e-15)

    @pytest.mark.parametrize("degrees", DEGREE_PAIRS)
    def test_matches_de_casteljau(self, make_net, degrees):
        net = make_net(*degrees)
        assert np.allclose(bezier_eval(net, 0.3, 0.6), de_casteljau(net, 0.3, 0.6), rtol=0.0, atol=1e-12)

    @pytest.mark.parametrize("degrees", DEGREE_PAIRS)
    def test_corners_interpolate(self, make_net, degrees):
        net = make_net(*degrees)
        m, n = degrees
        for (u, v), (i, j) in (((0, 0), (0, 0)), ((1, 0), (m, 0)), ((0, 1), (0, n)), ((1, 1), (m, n))):
            assert np.allclose(bezier_eval(net, u, v), net.points[i, j], rtol=0.0, atol=1e-14)

    @pytest.mark.parametrize("u, v", ((-0.01, 0.5), (0.5, 1.01)))
    def test_rejects_extrapolation(self, u, v):
        with pytest.raises(GeometryDomainError):
            bezier_eval(bilinear_net(), u, v)


class TestBezierPartial:
    def test_flat_bilinear_has_no_twist(self):
        assert np.allclose(bezier_partial(bilinear_net(), 0.3, 0.9, 1, 1), 0.0, atol=1e-15)

    def test_hyperbolic_paraboloid_twist(self):
        for u, v in ((0.0, 0.0), (0.2, 0.7), (1.0, 1.0)):
            assert np.allclose(bezier_partial(bilinear_net(lift=1.0), u, v, 1, 1), [0.0, 0.0, 1.0], atol=1e-15)

    def test_order_zero_is_evaluation(self, make_net):
        net = make_net(3, 2)
        assert np.array_equal(bezier_partial(net, 0.1, 0.2, 0, 0), bezier_eval(net, 0.1, 0.2))

    @pytest.mark.parametrize("orders", ((1, 0), (0, 1)))
    def test_matches_central_difference(self, make_net, orders):
        net = make_net(3, 3)
        h = 1e-6
        du, dv = h * orders[0], h * orders[1]
        fd = (bezier_eval(net, 0.4 + du, 0.7 + dv) - bezier_eval(net, 0.4 - du, 0.7 - dv)) / (2 * h)
        exact = bezier_partial(net, 0.4, 0.7, *orders)
        assert np.linalg.norm(fd - exact) <= 1e-6 * max(1.0, np.linalg.norm(exact))

    def test_mixed_partial_matches_central_difference(self, make_net):
        net = make_net(2, 3)
        h = 1e-4
        fd = (
            bezier_eval(net, 0.5 + h, 0.5 + h) - bezier_eval(net, 0.5 + h, 0.5 - h)
            - bezier_eval(net, 0.5 - h, 0.5 + h) + bezier_eval(net, 0.5 - h, 0.5 - h)
        ) / (4 * h * h)
        exact = bezier_partial(net, 0.5, 0.5, 1, 1)
        assert np.linalg.norm(fd - exact) <= 1e-6 * max(1.0, np.linalg.norm(exact))

    def test_rejects_second_order(self):
        with pytest.raises(GeometryDomainError):
            bezier_partial(bilinear_net(), 0.5, 0.5, 2, 0)


class TestDegreeElevation:
    def test_linear_segment_midpoint(self):
        net = BezierNet(1, 1, [[[0, 0, 0], [0, 1, 0]], [[3, 0, 0], [3, 1, 0]]])
        elevated = degree_elevate(net, "u")
        assert elevated.degrees == (2, 1)
        assert np.allclose(elevated.points[:, 0], [[0, 0, 0], [1.5, 0, 0], [3, 0, 0]], atol=1e-15)

    @pytest.mark.parametrize("degrees", [d for d in DEGREE_PAIRS if d != (3, 3)])
    def test_preserves_surface(self, make_net, degrees):
        net = make_net(*degrees)
        elevated = elevate_to(net)
        assert elevated.degrees == (3, 3)
        for u in np.linspace(0.0, 1.0, 5):
            for v in np.linspace(0.0, 1.0, 5):
                assert np.allclose(bezier_eval(elevated, u, v), bezier_eval(net, u, v), rtol=0.0, atol=1e-12)

    def test_constant_stays_constant(self):
        net = BezierNet(1, 2, np.full((2, 3, 3), 4.0))
        assert np.allclose(degree_elevate(net, "v").points, 4.0, atol=1e-15)

    def test_cubic_direction_cannot_be_elevated(self, make_net):
        with pytest.raises(InvalidGeometryOperation):
            degree_elevate(make_net(3, 1), "u")

    def test_unknown_direction(self, make_net):
        with pytest.raises(GeometryDomainError):
            degree_elevate(make_net(1, 1), "w")
