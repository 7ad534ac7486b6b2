"""Tensor-product Bezier surfaces: Bernstein bases, evaluation, partials and degree elevation."""
import logging
import math

import attr
import numpy as np

from geometry_exceptions import GeometryDomainError, InvalidGeometryOperation

logger = logging.getLogger(__name__)

MAX_DEGREE = 3
DIRECTIONS = ("u", "v")


def frozen_array(value) -> np.ndarray:
    array = np.array(value, dtype=float)
    array.setflags(write=False)
    return array


def check_unit_parameter(name, t) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise GeometryDomainError(f"parameter {name}={t!r} is outside [0, 1]")
    return t


def check_direction(direction) -> str:
    direction = str(direction).lower()
    if direction not in DIRECTIONS:
        raise GeometryDomainError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    return direction


def check_points(points, shape, what="control points"):
    if points.shape != shape:
        raise GeometryDomainError(f"{what} have shape {points.shape}, expected {shape}")
    if not np.all(np.isfinite(points)):
        raise GeometryDomainError(f"{what} contain non-finite coordinates")


def bounding_diagonal(points) -> float:
    """Bounding-box diagonal of a point cloud; 1.0 for a cloud collapsed to one point."""
    flat = np.asarray(points, dtype=float).reshape(-1, 3)
    diagonal = float(np.linalg.norm(np.ptp(flat, axis=0)))
    return diagonal if diagonal > 0.0 else 1.0


@attr.frozen(eq=False)
class BezierNet:
    """
    Control net of a degree_u x degree_v tensor-product Bezier surface.
    points[i, j] is the control point b_ij; the array has shape (degree_u + 1, degree_v + 1, 3).
    """
    degree_u: int = attr.field(converter=int)
    degree_v: int = attr.field(converter=int)
    points: np.ndarray = attr.field(converter=frozen_array)

    @degree_u.validator
    @degree_v.validator
    def _check_degree(self, attribute, value):
        if not 1 <= value <= MAX_DEGREE:
            raise GeometryDomainError(f"{attribute.name}={value} is not in 1..{MAX_DEGREE}")

    @points.validator
    def _check_grid(self, attribute, value):
        check_points(value, (self.degree_u + 1, self.degree_v + 1, 3))

    @classmethod
    def from_points(cls, points):
        points = np.asarray(points, dtype=float)
        if points.ndim != 3 or points.shape[2] != 3:
            raise GeometryDomainError(f"a control grid needs shape (m+1, n+1, 3), got {points.shape}")
        return cls(points.shape[0] - 1, points.shape[1] - 1, points)

    @property
    def degrees(self):
        return self.degree_u, self.degree_v

    def allclose(self, other, atol=1e-12) -> bool:
        return self.degrees == other.degrees and bool(np.allclose(self.points, other.points, rtol=0.0, atol=atol))


def bernstein_basis(i, m, t) -> float:
    if not 0 <= m <= MAX_DEGREE or not 0 <= i <= m:
        raise GeometryDomainError(f"Bernstein index i={i} and degree m={m} need 0 <= i <= m <= {MAX_DEGREE}")
    t = check_unit_parameter("t", t)
    return math.comb(m, i) * t ** i * (1.0 - t) ** (m - i)


def bernstein_derivative(i, m, t) -> float:
    """d/dt B_{i,m}(t) = m (B_{i-1,m-1}(t) - B_{i,m-1}(t))."""
    if not 0 <= i <= m:
        raise GeometryDomainError(f"Bernstein index i={i} is outside 0..{m}")
    if m == 0:
        return 0.0
    left = bernstein_basis(i - 1, m - 1, t) if i >= 1 else 0.0
    right = bernstein_basis(i, m - 1, t) if i <= m - 1 else 0.0
    return m * (left - right)


def bernstein_row(m, t) -> np.ndarray:
    return np.array([bernstein_basis(i, m, t) for i in range(m + 1)])


def bernstein_derivative_row(m, t) -> np.ndarray:
    return np.array([bernstein_derivative(i, m, t) for i in range(m + 1)])


def _row(m, t, order):
    if order == 0:
        return bernstein_row(m, t)
    if order == 1:
        return bernstein_derivative_row(m, t)
    raise GeometryDomainError(f"derivative order {order} is not 0 or 1")


def bezier_eval(net: BezierNet, u, v) -> np.ndarray:
    return bezier_partial(net, u, v, 0, 0)


def bezier_partial(net: BezierNet, u, v, order_u=0, order_v=0) -> np.ndarray:
    u = check_unit_parameter("u", u)
    v = check_unit_parameter("v", v)
    row_u = _row(net.degree_u, u, order_u)
    row_v = _row(net.degree_v, v, order_v)
    return np.einsum("i,j,ijk->k", row_u, row_v, net.points)


def de_casteljau(net: BezierNet, u, v) -> np.ndarray:
    """Repeated linear interpolation; kept as an independent oracle for bezier_eval."""
    u = check_unit_parameter("u", u)
    v = check_unit_parameter("v", v)
    columns = np.array(net.points)
    while columns.shape[0] > 1:
        columns = (1.0 - u) * columns[:-1] + u * columns[1:]
    row = columns[0]
    while row.shape[0] > 1:
        row = (1.0 - v) * row[:-1] + v * row[1:]
    return row[0]


def elevation_matrix(m) -> np.ndarray:
    """(m + 2) x (m + 1) map taking degree-m coefficients to degree-(m + 1) coefficients."""
    matrix = np.zeros((m + 2, m + 1))
    for i in range(m + 2):
        alpha = i / (m + 1)
        if i >= 1:
            matrix[i, i - 1] = alpha
        if i <= m:
            matrix[i, i] = 1.0 - alpha
    return matrix


def degree_elevate(net: BezierNet, direction) -> BezierNet:
    direction = check_direction(direction)
    degree = net.degree_u if direction == "u" else net.degree_v
    if degree >= MAX_DEGREE:
        raise InvalidGeometryOperation(f"the net is already cubic in {direction} and cannot be elevated")
    elevate = elevation_matrix(degree)
    if direction == "u":
        points = np.einsum("ai,ijk->ajk", elevate, net.points)
        return BezierNet(degree + 1, net.degree_v, points)
    points = np.einsum("bj,ijk->ibk", elevate, net.points)
    return BezierNet(net.degree_u, degree + 1, points)


def elevate_to(net: BezierNet, degree_u=MAX_DEGREE, degree_v=MAX_DEGREE) -> BezierNet:
    if degree_u < net.degree_u or degree_v < net.degree_v:
        raise InvalidGeometryOperation(f"cannot elevate a {net.degrees} net to ({degree_u}, {degree_v})")
    while net.degree_u < degree_u:
        net = degree_elevate(net, "u")
    while net.degree_v < degree_v:
        net = degree_elevate(net, "v")
    return net
