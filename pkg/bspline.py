"""
B-spline knot machinery for degrees 1..3.

Segment-local notation follows the closed forms used for conversion: for a segment with left knot
index alpha, H(beta, gamma) = knot[alpha + beta] - knot[alpha + gamma], F(beta) = knot[alpha + beta] - u
and G(beta) = u - knot[alpha + beta]. The active basis functions on the segment are
K_{alpha-degree} .. K_{alpha}, returned in that order.
"""
import logging

import attr
import numpy as np

from bezier import MAX_DEGREE, BezierNet, bernstein_row, check_points, frozen_array
from geometry_exceptions import GeometryDomainError

logger = logging.getLogger(__name__)

SUM_TOLERANCE = 1e-9


def _check_knots(instance, attribute, value):
    if value.ndim != 1 or value.size < 2:
        raise GeometryDomainError(f"a knot vector needs at least two knots, got shape {value.shape}")
    if not np.all(np.isfinite(value)):
        raise GeometryDomainError("knot vector contains non-finite values")
    if np.any(np.diff(value) < 0.0):
        raise GeometryDomainError(f"knot vector is not non-decreasing: {value.tolist()}")


@attr.frozen(eq=False)
class KnotVector:
    knots: np.ndarray = attr.field(converter=frozen_array, validator=_check_knots)

    @classmethod
    def uniform(cls, count, degree, start=0.0, step=1.0):
        """Unclamped uniform knots u_i = start + i * step for `count` control points."""
        return cls(start + step * np.arange(count + degree + 1, dtype=float))

    @classmethod
    def clamped(cls, count, degree, start=0.0, end=1.0):
        """Open knots with degree + 1 repeated end knots and uniform interior spacing."""
        interior = np.linspace(start, end, count - degree + 1)
        return cls(np.concatenate([[start] * degree, interior, [end] * degree]))

    def __len__(self):
        return len(self.knots)

    def __getitem__(self, index):
        return float(self.knots[index])

    def control_count(self, degree) -> int:
        return len(self.knots) - degree - 1

    def as_list(self):
        return [float(k) for k in self.knots]


def as_knot_vector(value) -> KnotVector:
    return value if isinstance(value, KnotVector) else KnotVector(value)


@attr.frozen(eq=False)
class BsplineSurface:
    """
    degree_u x degree_v B-spline surface; points[i, j] is d_ij with shape (m + 1, n + 1, 3).
    Valid parameters are [knots_u[degree_u], knots_u[m + 1]] x [knots_v[degree_v], knots_v[n + 1]].
    """
    degree_u: int = attr.field(converter=int)
    degree_v: int = attr.field(converter=int)
    points: np.ndarray = attr.field(converter=frozen_array)
    knots_u: KnotVector = attr.field(converter=as_knot_vector)
    knots_v: KnotVector = attr.field(converter=as_knot_vector)

    @degree_u.validator
    @degree_v.validator
    def _check_degree(self, attribute, value):
        if not 1 <= value <= MAX_DEGREE:
            raise GeometryDomainError(f"{attribute.name}={value} is not in 1..{MAX_DEGREE}")

    @points.validator
    def _check_grid(self, attribute, value):
        if value.ndim != 3:
            raise GeometryDomainError(f"control grid needs shape (m+1, n+1, 3), got {value.shape}")
        check_points(value, (value.shape[0], value.shape[1], 3))
        if value.shape[0] <= self.degree_u or value.shape[1] <= self.degree_v:
            raise GeometryDomainError(
                f"a degree ({self.degree_u}, {self.degree_v}) surface needs at least "
                f"{self.degree_u + 1} x {self.degree_v + 1} control points, got {value.shape[:2]}"
            )

    @knots_u.validator
    @knots_v.validator
    def _check_knot_count(self, attribute, value):
        axis, degree = (0, self.degree_u) if attribute.name == "knots_u" else (1, self.degree_v)
        count = self.points.shape[axis]
        if len(value) != count + degree + 1:
            raise GeometryDomainError(
                f"{attribute.name} has {len(value)} knots; {count} control points of degree {degree} "
                f"need {count + degree + 1}"
            )
        if not value[degree] < value[count]:
            raise GeometryDomainError(f"{attribute.name} has an empty valid parameter range")

    @property
    def degrees(self):
        return self.degree_u, self.degree_v

    def parameter_range(self, direction):
        if direction == "u":
            return self.knots_u[self.degree_u], self.knots_u[self.points.shape[0]]
        return self.knots_v[self.degree_v], self.knots_v[self.points.shape[1]]


@attr.frozen(eq=False)
class SegmentBasisTable:
    """Values and first parameter derivatives of the degree + 1 active bases at both ends of a segment."""
    degree: int
    values_start: np.ndarray = attr.field(converter=frozen_array)
    values_end: np.ndarray = attr.field(converter=frozen_array)
    derivs_start: np.ndarray = attr.field(converter=frozen_array)
    derivs_end: np.ndarray = attr.field(converter=frozen_array)

    def __attrs_post_init__(self):
        for name in ("values_start", "values_end", "derivs_start", "derivs_end"):
            if getattr(self, name).shape != (self.degree + 1,):
                raise GeometryDomainError(f"{name} must hold {self.degree + 1} entries")
        for name, target in (("values_start", 1.0), ("values_end", 1.0), ("derivs_start", 0.0), ("derivs_end", 0.0)):
            total = float(np.sum(getattr(self, name)))
            scale = max(1.0, float(np.max(np.abs(getattr(self, name)))))
            if abs(total - target) > SUM_TOLERANCE * scale:
                raise GeometryDomainError(f"{name} sums to {total}, expected {target}")


def _ratio(numerator, denominator):
    # 0/0 = 0; a vanishing knot difference always multiplies a vanishing lower-degree basis
    return 0.0 if denominator == 0.0 else numerator / denominator


def _span_indicator(knots, i, u):
    lo, hi = knots[i], knots[i + 1]
    if lo <= u < hi:
        return 1.0
    last = knots[len(knots) - 1]
    return 1.0 if u == last and hi == last and lo < hi else 0.0


def cox_de_boor(knots, i, k, u) -> float:
    """Recursive basis N_{i,k}(u) on half-open spans, closed at the final knot."""
    knots = as_knot_vector(knots)
    if k < 0 or i < 0 or i + k + 1 > len(knots) - 1:
        raise GeometryDomainError(f"basis N_({i},{k}) needs knots {i}..{i + k + 1}; only {len(knots)} exist")
    u = float(u)
    if k == 0:
        return _span_indicator(knots, i, u)
    left = _ratio(u - knots[i], knots[i + k] - knots[i]) * cox_de_boor(knots, i, k - 1, u)
    right = _ratio(knots[i + k + 1] - u, knots[i + k + 1] - knots[i + 1]) * cox_de_boor(knots, i + 1, k - 1, u)
    return left + right


def cox_de_boor_derivative(knots, i, k, u) -> float:
    knots = as_knot_vector(knots)
    if k == 0:
        return 0.0
    left = _ratio(cox_de_boor(knots, i, k - 1, u), knots[i + k] - knots[i])
    right = _ratio(cox_de_boor(knots, i + 1, k - 1, u), knots[i + k + 1] - knots[i + 1])
    return k * (left - right)


def _check_degree(degree):
    if degree not in (1, 2, 3):
        raise GeometryDomainError(f"segment bases exist for degrees 1..3, got {degree}")


def _segment_knots(knots, degree, seg):
    """Knot accessor relative to the segment; validates the window knots[seg-degree+1 .. seg+degree]."""
    knots = as_knot_vector(knots)
    _check_degree(degree)
    first, last = seg - degree + 1, seg + degree
    missing = [index for index in range(first, last + 1) if not 0 <= index < len(knots)]
    if missing:
        raise GeometryDomainError(
            f"segment {seg} of degree {degree} needs knots {first}..{last}; missing knot indices {missing}"
        )
    if not knots[seg + 1] > knots[seg]:
        raise GeometryDomainError(f"segment {seg} is degenerate: knot[{seg}] == knot[{seg + 1}] == {knots[seg]}")

    def lam(beta):
        return knots[seg + beta]

    return lam


def _check_in_segment(lam, u):
    u = float(u)
    if not lam(0) <= u <= lam(1):
        raise GeometryDomainError(f"parameter {u} is outside the segment [{lam(0)}, {lam(1)}]")
    return u


def segment_basis(knots, degree, seg, u) -> np.ndarray:
    lam = _segment_knots(knots, degree, seg)
    u = _check_in_segment(lam, u)

    def H(beta, gamma):
        return lam(beta) - lam(gamma)

    def F(beta):
        return lam(beta) - u

    def G(beta):
        return u - lam(beta)

    if degree == 1:
        return np.array([F(1) / H(1, 0), G(0) / H(1, 0)])
    if degree == 2:
        return np.array([
            F(1) ** 2 / (H(1, -1) * H(1, 0)),
            F(1) * G(-1) / (H(1, 0) * H(1, -1)) + F(2) * G(0) / (H(2, 0) * H(1, 0)),
            G(0) ** 2 / (H(2, 0) * H(1, 0)),
        ])
    return np.array([
        F(1) ** 3 / (H(1, -2) * H(1, -1) * H(1, 0)),
        F(1) ** 2 * G(-2) / (H(1, -2) * H(1, -1) * H(1, 0))
        + F(1) * F(2) * G(-1) / (H(2, -1) * H(1, -1) * H(1, 0))
        + F(2) ** 2 * G(0) / (H(2, -1) * H(2, 0) * H(1, 0)),
        F(1) * G(-1) ** 2 / (H(2, -1) * H(1, -1) * H(1, 0))
        + F(2) * G(0) * G(-1) / (H(2, -1) * H(2, 0) * H(1, 0))
        + F(3) * G(0) ** 2 / (H(3, 0) * H(2, 0) * H(1, 0)),
        G(0) ** 3 / (H(3, 0) * H(2, 0) * H(1, 0)),
    ])


def segment_basis_derivative(knots, degree, seg, u) -> np.ndarray:
    """First derivatives of segment_basis with respect to u (F' = -1, G' = 1)."""
    lam = _segment_knots(knots, degree, seg)
    u = _check_in_segment(lam, u)

    def H(beta, gamma):
        return lam(beta) - lam(gamma)

    def F(beta):
        return lam(beta) - u

    def G(beta):
        return u - lam(beta)

    if degree == 1:
        return np.array([-1.0 / H(1, 0), 1.0 / H(1, 0)])
    if degree == 2:
        return np.array([
            -2.0 * F(1) / (H(1, -1) * H(1, 0)),
            (F(1) - G(-1)) / (H(1, 0) * H(1, -1)) + (F(2) - G(0)) / (H(2, 0) * H(1, 0)),
            2.0 * G(0) / (H(2, 0) * H(1, 0)),
        ])
    return np.array([
        -3.0 * F(1) ** 2 / (H(1, -2) * H(1, -1) * H(1, 0)),
        (F(1) ** 2 - 2.0 * F(1) * G(-2)) / (H(1, -2) * H(1, -1) * H(1, 0))
        + (F(1) * F(2) - F(2) * G(-1) - F(1) * G(-1)) / (H(2, -1) * H(1, -1) * H(1, 0))
        + (F(2) ** 2 - 2.0 * F(2) * G(0)) / (H(2, -1) * H(2, 0) * H(1, 0)),
        (2.0 * F(1) * G(-1) - G(-1) ** 2) / (H(2, -1) * H(1, -1) * H(1, 0))
        + (F(2) * G(-1) + F(2) * G(0) - G(0) * G(-1)) / (H(2, -1) * H(2, 0) * H(1, 0))
        + (2.0 * F(3) * G(0) - G(0) ** 2) / (H(3, 0) * H(2, 0) * H(1, 0)),
        3.0 * G(0) ** 2 / (H(3, 0) * H(2, 0) * H(1, 0)),
    ])


def endpoint_tables(knots, degree, seg) -> SegmentBasisTable:
    lam = _segment_knots(knots, degree, seg)

    def H(beta, gamma):
        return lam(beta) - lam(gamma)

    if degree == 1:
        slope = 1.0 / H(1, 0)
        return SegmentBasisTable(1, [1.0, 0.0], [0.0, 1.0], [-slope, slope], [-slope, slope])

    if degree == 2:
        return SegmentBasisTable(
            2,
            values_start=[H(1, 0) / H(1, -1), H(0, -1) / H(1, -1), 0.0],
            values_end=[0.0, H(2, 1) / H(2, 0), H(1, 0) / H(2, 0)],
            derivs_start=[-2.0 / H(1, -1), 2.0 / H(1, -1), 0.0],
            derivs_end=[0.0, -2.0 / H(2, 0), 2.0 / H(2, 0)],
        )

    theta_3 = H(1, 0) ** 2 / (H(1, -2) * H(1, -1))
    theta_2 = H(0, -2) * H(1, 0) / (H(1, -2) * H(1, -1)) + H(0, -1) * H(2, 0) / (H(2, -1) * H(1, -1))
    theta_1 = H(0, -1) ** 2 / (H(2, -1) * H(1, -1))
    theta_d3 = -3.0 * H(1, 0) / (H(1, -2) * H(1, -1))
    theta_d2 = (H(1, 0) - 2.0 * H(0, -2)) / (H(1, -2) * H(1, -1)) + (H(-1, 0) + 2.0 * H(2, 0)) / (H(2, -1) * H(1, -1))
    theta_d1 = 3.0 * H(0, -1) / (H(2, -1) * H(1, -1))

    phi_2 = H(2, 1) ** 2 / (H(2, -1) * H(2, 0))
    phi_1 = H(1, -1) * H(2, 1) / (H(2, -1) * H(2, 0)) + H(3, 1) * H(1, 0) / (H(3, 0) * H(2, 0))
    phi_0 = H(1, 0) ** 2 / (H(3, 0) * H(2, 0))
    phi_d2 = -3.0 * H(2, 1) / (H(2, -1) * H(2, 0))
    phi_d1 = (H(2, 1) - 2.0 * H(1, -1)) / (H(2, -1) * H(2, 0)) + (2.0 * H(3, 1) - H(1, 0)) / (H(3, 0) * H(2, 0))
    phi_d0 = 3.0 * H(1, 0) / (H(3, 0) * H(2, 0))

    return SegmentBasisTable(
        3,
        values_start=[theta_3, theta_2, theta_1, 0.0],
        values_end=[0.0, phi_2, phi_1, phi_0],
        derivs_start=[theta_d3, theta_d2, theta_d1, 0.0],
        derivs_end=[0.0, phi_d2, phi_d1, phi_d0],
    )


def segment_indices(knots, degree, control_count):
    knots = as_knot_vector(knots)
    return [alpha for alpha in range(degree, control_count) if knots[alpha + 1] > knots[alpha]]


def find_segment(knots, degree, control_count, u) -> int:
    knots = as_knot_vector(knots)
    u = float(u)
    lo, hi = knots[degree], knots[control_count]
    if not lo <= u <= hi:
        raise GeometryDomainError(f"parameter {u} is outside the valid range [{lo}, {hi}]")
    segments = segment_indices(knots, degree, control_count)
    for alpha in segments:
        if knots[alpha] <= u < knots[alpha + 1]:
            return alpha
    return segments[-1]


def convertible_segments(surface: BsplineSurface):
    segs_u = segment_indices(surface.knots_u, surface.degree_u, surface.points.shape[0])
    segs_v = segment_indices(surface.knots_v, surface.degree_v, surface.points.shape[1])
    return [(e, f) for e in segs_u for f in segs_v]


def check_segment(surface: BsplineSurface, e, f):
    if (e, f) not in convertible_segments(surface):
        raise GeometryDomainError(
            f"segment ({e}, {f}) is not a non-degenerate segment of this surface; "
            f"valid segments: {convertible_segments(surface)}"
        )


def window(surface: BsplineSurface, e, f) -> np.ndarray:
    """Control points d_ij, i = e-k..e, j = f-l..f, that act on segment (e, f)."""
    return surface.points[e - surface.degree_u:e + 1, f - surface.degree_v:f + 1]


def bspline_eval(surface: BsplineSurface, u, v) -> np.ndarray:
    count_u, count_v = surface.points.shape[:2]
    e = find_segment(surface.knots_u, surface.degree_u, count_u, u)
    f = find_segment(surface.knots_v, surface.degree_v, count_v, v)
    basis_u = segment_basis(surface.knots_u, surface.degree_u, e, u)
    basis_v = segment_basis(surface.knots_v, surface.degree_v, f, v)
    return np.einsum("i,j,ijk->k", basis_u, basis_v, window(surface, e, f))


def bspline_eval_full(surface: BsplineSurface, u, v) -> np.ndarray:
    """Unwindowed double sum over every control point with the recursive bases."""
    count_u, count_v = surface.points.shape[:2]
    basis_u = np.array([cox_de_boor(surface.knots_u, i, surface.degree_u, u) for i in range(count_u)])
    basis_v = np.array([cox_de_boor(surface.knots_v, j, surface.degree_v, v) for j in range(count_v)])
    return np.einsum("i,j,ijk->k", basis_u, basis_v, surface.points)


def local_parameter(knots, seg, u) -> float:
    """xi = (u - u_seg) / (u_seg+1 - u_seg)."""
    knots = as_knot_vector(knots)
    return (float(u) - knots[seg]) / (knots[seg + 1] - knots[seg])


def global_parameter(knots, seg, xi) -> float:
    """u for segment-local xi; xi = 1 lands exactly on the closing knot."""
    knots = as_knot_vector(knots)
    xi = float(xi)
    if xi == 1.0:
        return knots[seg + 1]
    return knots[seg] + xi * (knots[seg + 1] - knots[seg])


def greville_abscissae(knots, degree) -> np.ndarray:
    knots = as_knot_vector(knots)
    count = knots.control_count(degree)
    return np.array([np.mean(knots.knots[i + 1:i + degree + 1]) for i in range(count)])


def extraction_matrix(knots, degree, seg) -> np.ndarray:
    """
    (degree + 1) x (degree + 1) map from the window control coefficients to the Bezier coefficients of
    the segment, found by collocating both bases at degree + 1 equally spaced local parameters.
    """
    lam = _segment_knots(knots, degree, seg)
    samples = np.linspace(0.0, 1.0, degree + 1)
    bernstein = np.array([bernstein_row(degree, t) for t in samples])
    spline = np.array([segment_basis(knots, degree, seg, min(lam(0) + t * (lam(1) - lam(0)), lam(1))) for t in samples])
    return np.linalg.solve(bernstein, spline)


def segment_to_bezier(surface: BsplineSurface, e, f) -> BezierNet:
    check_segment(surface, e, f)
    extract_u = extraction_matrix(surface.knots_u, surface.degree_u, e)
    extract_v = extraction_matrix(surface.knots_v, surface.degree_v, f)
    points = np.einsum("ai,bj,ijk->abk", extract_u, extract_v, window(surface, e, f))
    logger.debug("extracted Bezier net of segment (%s, %s), degrees %s", e, f, surface.degrees)
    return BezierNet(surface.degree_u, surface.degree_v, points)
