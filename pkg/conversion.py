"""
Linear maps between Bezier / B-spline control points and ANCF nodal coordinates.

Every forward map is a tensor product of two 1D endpoint maps. A 1D endpoint map has four rows,
[value at 0, slope at 0, value at 1, slope at 1], and one column per control coefficient of that
direction; slopes are taken with respect to the physical element coordinate, so they carry the
factor span / length. Control points are stacked row-major in (i, j); nodal vectors follow
ancf.NODE_LABELS.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import attr
import numpy as np

import ancf
import bezier
import bspline
from ancf import AncfElement36, AncfElement48
from bezier import BezierNet
from bspline import BsplineSurface
from geometry_exceptions import GeometryDomainError, MixedSlopeRejected

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
REDUCTION_SAMPLES = 5

# corner quadrilaterals whose defect b_c + b_d - b_e - b_f is the corner mixed slope up to 9 / (ab),
# listed in ancf.CORNERS order
PARALLELOGRAM_CORNERS = (
    ("(0,0)", (0, 0), (1, 1), (1, 0), (0, 1)),
    ("(a,0)", (3, 0), (2, 1), (2, 0), (3, 1)),
    ("(0,b)", (0, 3), (1, 2), (1, 3), (0, 2)),
    ("(a,b)", (3, 3), (2, 2), (2, 3), (3, 2)),
)


@attr.frozen(eq=False)
class TransformMatrix:
    """
    Scalar matrix applied identically to x, y and z: rows are nodal vectors (or control points for
    the inverse map), columns are the stacked source vectors.
    """
    matrix: np.ndarray = attr.field(converter=bezier.frozen_array)
    source: str
    degree_u: int
    degree_v: int
    a: float
    b: float
    row_labels: tuple = attr.field(converter=tuple)
    knot_window_u: Optional[tuple] = None
    knot_window_v: Optional[tuple] = None

    @row_labels.validator
    def _check_labels(self, attribute, value):
        if len(value) != self.matrix.shape[0]:
            raise GeometryDomainError(f"{len(value)} row labels for a matrix with {self.matrix.shape[0]} rows")

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def position_rows(self):
        return tuple(k for k, label in enumerate(self.row_labels) if label.startswith("r00"))

    @property
    def slope_rows(self):
        return tuple(k for k, label in enumerate(self.row_labels) if label.startswith("r") and not label.startswith("r00"))

    def apply(self, points) -> np.ndarray:
        stacked = np.asarray(points, dtype=float).reshape(-1, 3)
        if stacked.shape[0] != self.matrix.shape[1]:
            raise GeometryDomainError(f"matrix takes {self.matrix.shape[1]} vectors, got {stacked.shape[0]}")
        return self.matrix @ stacked

    def row_sum_defect(self) -> float:
        """Largest deviation of position rows from summing to 1 and slope rows from summing to 0."""
        sums = self.matrix.sum(axis=1)
        defects = [abs(sums[k] - 1.0) for k in self.position_rows] + [abs(sums[k]) for k in self.slope_rows]
        return max(defects, default=0.0)


@attr.frozen
class ParallelogramReport:
    ok: bool
    residuals: tuple
    corners: tuple = tuple(corner[0] for corner in PARALLELOGRAM_CORNERS)
    limit: float = 0.0


@attr.frozen
class ConversionOptions:
    a: Optional[float] = None
    b: Optional[float] = None
    tol: float = DEFAULT_TOLERANCE
    workers: Optional[int] = None


@attr.frozen(eq=False)
class SegmentConversion:
    e: int
    f: int
    element: AncfElement48
    matrix: TransformMatrix


def _check_length(name, value):
    value = float(value)
    if not (np.isfinite(value) and value > 0.0):
        raise GeometryDomainError(f"{name}={value} must be a positive length")
    return value


def _tensor(endpoint_u, endpoint_v) -> np.ndarray:
    rows = endpoint_u.shape[0] * endpoint_v.shape[0]
    cols = endpoint_u.shape[1] * endpoint_v.shape[1]
    # row = 4 * (v dof) + (u dof); col = i * (n + 1) + j
    return np.einsum("ai,bj->baij", endpoint_u, endpoint_v).reshape(rows, cols)


def bezier_endpoint_map(degree, length) -> np.ndarray:
    return np.array([
        bezier.bernstein_row(degree, 0.0),
        bezier.bernstein_derivative_row(degree, 0.0) / length,
        bezier.bernstein_row(degree, 1.0),
        bezier.bernstein_derivative_row(degree, 1.0) / length,
    ])


def bspline_endpoint_map(knots, degree, seg, length) -> np.ndarray:
    table = bspline.endpoint_tables(knots, degree, seg)
    span = knots[seg + 1] - knots[seg]
    return np.array([
        table.values_start,
        table.derivs_start * span / length,
        table.values_end,
        table.derivs_end * span / length,
    ])


def bezier_transform_matrix(degree_u, degree_v, a=1.0, b=1.0) -> TransformMatrix:
    for name, degree in (("degree_u", degree_u), ("degree_v", degree_v)):
        if not 1 <= degree <= bezier.MAX_DEGREE:
            raise GeometryDomainError(f"{name}={degree} is not in 1..{bezier.MAX_DEGREE}")
    a, b = _check_length("a", a), _check_length("b", b)
    matrix = _tensor(bezier_endpoint_map(degree_u, a), bezier_endpoint_map(degree_v, b))
    logger.debug("built %s Bezier -> ANCF matrix for degrees (%s, %s)", matrix.shape, degree_u, degree_v)
    return TransformMatrix(matrix, "bezier", degree_u, degree_v, a, b, ancf.NODE_LABELS)


def bezier_to_ancf(net: BezierNet, a=1.0, b=1.0):
    transform = bezier_transform_matrix(net.degree_u, net.degree_v, a, b)
    element = AncfElement48(transform.a, transform.b, transform.apply(net.points))
    return element, transform


def bspline_transform_matrix(surface: BsplineSurface, e, f, a=None, b=None) -> TransformMatrix:
    bspline.check_segment(surface, e, f)
    span_u = surface.knots_u[e + 1] - surface.knots_u[e]
    span_v = surface.knots_v[f + 1] - surface.knots_v[f]
    a = _check_length("a", span_u if a is None else a)
    b = _check_length("b", span_v if b is None else b)
    endpoint_u = bspline_endpoint_map(surface.knots_u, surface.degree_u, e, a)
    endpoint_v = bspline_endpoint_map(surface.knots_v, surface.degree_v, f, b)
    k, l = surface.degrees
    return TransformMatrix(
        _tensor(endpoint_u, endpoint_v),
        "bspline",
        k,
        l,
        a,
        b,
        ancf.NODE_LABELS,
        knot_window_u=tuple(surface.knots_u.knots[e - k + 1:e + k + 1].tolist()),
        knot_window_v=tuple(surface.knots_v.knots[f - l + 1:f + l + 1].tolist()),
    )


def bspline_segment_to_ancf(surface: BsplineSurface, e, f, a=None, b=None):
    transform = bspline_transform_matrix(surface, e, f, a, b)
    element = AncfElement48(transform.a, transform.b, transform.apply(bspline.window(surface, e, f)))
    return element, transform


def bspline_to_ancf_mesh(surface: BsplineSurface, options=ConversionOptions()):
    """Convert every non-degenerate segment; results keep the (e, f) order of convertible_segments."""
    segments = bspline.convertible_segments(surface)

    def convert(segment):
        e, f = segment
        element, transform = bspline_segment_to_ancf(surface, e, f, options.a, options.b)
        return SegmentConversion(e, f, element, transform)

    with ThreadPoolExecutor(max_workers=options.workers) as pool:
        conversions = list(pool.map(convert, segments))
    logger.debug("converted %s segments of a degree %s surface", len(conversions), surface.degrees)
    return conversions


def shared_edge_defect(first: AncfElement48, second: AncfElement48, direction) -> float:
    """Largest nodal mismatch on the common edge; `second` follows `first` in the given direction."""
    direction = bezier.check_direction(direction)
    edges = ("x=a", "x=0") if direction == "u" else ("y=b", "y=0")
    difference = first.edge_nodes(edges[0]) - second.edge_nodes(edges[1])
    return float(np.max(np.linalg.norm(difference, axis=1)))


def check_parallelogram(net: BezierNet, tol=DEFAULT_TOLERANCE) -> ParallelogramReport:
    if net.degrees != (3, 3):
        raise GeometryDomainError(f"the corner parallelogram test needs a bicubic net, got degrees {net.degrees}")
    points = net.points
    residuals = tuple(
        float(np.linalg.norm(points[c] + points[d] - points[e] - points[f]))
        for _, c, d, e, f in PARALLELOGRAM_CORNERS
    )
    limit = tol * bezier.bounding_diagonal(points)
    return ParallelogramReport(all(r <= limit for r in residuals), residuals, limit=limit)


def reduce_element(elem: AncfElement48, tol=DEFAULT_TOLERANCE) -> AncfElement36:
    norms = np.linalg.norm(elem.mixed_slopes, axis=1)
    limit = tol * elem.scale
    offenders = [k for k, norm in enumerate(norms) if norm > limit]
    if offenders:
        logger.warning("mixed slopes above %.3e at corners %s", limit, [ancf.CORNERS[k] for k in offenders])
        raise MixedSlopeRejected([ancf.CORNERS[k] for k in offenders], [float(norms[k]) for k in offenders])
    return AncfElement36(elem.a, elem.b, elem.nodes[list(ancf.REDUCED_INDICES)])


def reduce_transform_matrix(transform: TransformMatrix) -> TransformMatrix:
    rows = list(ancf.REDUCED_INDICES)
    return attr.evolve(transform, matrix=transform.matrix[rows], row_labels=ancf.REDUCED_LABELS)


def inverse_transform_matrix(a=1.0, b=1.0) -> TransformMatrix:
    forward = bezier_transform_matrix(3, 3, a, b)
    labels = tuple(f"b{i}{j}" for i in range(4) for j in range(4))
    return TransformMatrix(np.linalg.inv(forward.matrix), "ancf48", 3, 3, forward.a, forward.b, labels)


def ancf_to_bezier(elem: AncfElement48) -> BezierNet:
    inverse = inverse_transform_matrix(elem.a, elem.b)
    return BezierNet(3, 3, inverse.apply(elem.nodes).reshape(4, 4, 3))


def ancf36_to_bezier(elem: AncfElement36) -> BezierNet:
    return ancf_to_bezier(elem.expand())


def _grid_deviation(first: BezierNet, second: BezierNet) -> float:
    samples = np.linspace(0.0, 1.0, REDUCTION_SAMPLES)
    return max(
        float(np.linalg.norm(bezier.bezier_eval(first, u, v) - bezier.bezier_eval(second, u, v)))
        for u in samples
        for v in samples
    )


def _reduce_once(net: BezierNet, direction, limit) -> Optional[BezierNet]:
    degree = net.degree_u if direction == "u" else net.degree_v
    elevate = bezier.elevation_matrix(degree - 1)
    points = net.points if direction == "u" else np.swapaxes(net.points, 0, 1)
    flat = points.reshape(degree + 1, -1)
    lower = np.linalg.lstsq(elevate, flat, rcond=None)[0]
    if np.max(np.abs(elevate @ lower - flat)) > limit:
        return None
    lower = lower.reshape((degree,) + points.shape[1:])
    if direction == "v":
        lower = np.swapaxes(lower, 0, 1)
    candidate = BezierNet.from_points(lower)
    if _grid_deviation(candidate, net) > limit:
        return None
    return candidate


def degree_reduce_exact(net: BezierNet, tol=DEFAULT_TOLERANCE) -> BezierNet:
    """Lowest-degree net reproducing the surface exactly, or the input itself when none exists."""
    limit = tol * bezier.bounding_diagonal(net.points)
    current = net
    for direction in bezier.DIRECTIONS:
        while (current.degree_u if direction == "u" else current.degree_v) > 1:
            candidate = _reduce_once(current, direction, limit)
            if candidate is None:
                break
            current = candidate
    if current is not net:
        logger.debug("reduced net from degrees %s to %s", net.degrees, current.degrees)
    return current


def ancf_to_lower_bezier(elem, tol=DEFAULT_TOLERANCE) -> BezierNet:
    if isinstance(elem, AncfElement36):
        return degree_reduce_exact(ancf36_to_bezier(elem), tol)
    return degree_reduce_exact(ancf_to_bezier(elem), tol)
