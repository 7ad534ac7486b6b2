"""
ANCF thin-plate surface elements.

Nodal vectors are stored in the fixed order below; position k holds the Hermite degree of freedom
(k % 4) along x and (k // 4) along y, where the Hermite dofs of one direction are
[value at 0, slope at 0, value at 1, slope at 1].
"""
import logging

import attr
import numpy as np

from bezier import bounding_diagonal, check_points, frozen_array
from geometry_exceptions import GeometryDomainError

logger = logging.getLogger(__name__)

NODE_LABELS = (
    "r00(0,0)", "r10(0,0)", "r00(a,0)", "r10(a,0)",
    "r01(0,0)", "r11(0,0)", "r01(a,0)", "r11(a,0)",
    "r00(0,b)", "r10(0,b)", "r00(a,b)", "r10(a,b)",
    "r01(0,b)", "r11(0,b)", "r01(a,b)", "r11(a,b)",
)
CORNERS = ("(0,0)", "(a,0)", "(0,b)", "(a,b)")
POSITION_INDICES = (0, 2, 8, 10)
MIXED_SLOPE_INDICES = (5, 7, 13, 15)
REDUCED_INDICES = (0, 1, 2, 3, 4, 6, 8, 9, 10, 11, 12, 14)
REDUCED_LABELS = tuple(NODE_LABELS[k] for k in REDUCED_INDICES)

EDGE_INDICES = {
    "x=0": (0, 1, 4, 5, 8, 9, 12, 13),
    "x=a": (2, 3, 6, 7, 10, 11, 14, 15),
    "y=0": (0, 1, 2, 3, 4, 5, 6, 7),
    "y=b": (8, 9, 10, 11, 12, 13, 14, 15),
}


def _check_dimension(instance, attribute, value):
    if not (np.isfinite(value) and value > 0.0):
        raise GeometryDomainError(f"element {attribute.name}={value} must be a positive length")


def _check_local(name, t) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise GeometryDomainError(f"normalized coordinate {name}={t!r} is outside [0, 1]")
    return t


@attr.frozen(eq=False)
class AncfElement48:
    a: float = attr.field(converter=float, validator=_check_dimension)
    b: float = attr.field(converter=float, validator=_check_dimension)
    nodes: np.ndarray = attr.field(converter=frozen_array)

    @nodes.validator
    def _check_nodes(self, attribute, value):
        check_points(value, (16, 3), "nodal vectors")

    def node(self, label) -> np.ndarray:
        return self.nodes[NODE_LABELS.index(label)]

    @property
    def positions(self) -> np.ndarray:
        return self.nodes[list(POSITION_INDICES)]

    @property
    def mixed_slopes(self) -> np.ndarray:
        return self.nodes[list(MIXED_SLOPE_INDICES)]

    @property
    def scale(self) -> float:
        return bounding_diagonal(self.positions)

    def edge_nodes(self, edge) -> np.ndarray:
        if edge not in EDGE_INDICES:
            raise GeometryDomainError(f"edge must be one of {sorted(EDGE_INDICES)}, got {edge!r}")
        return self.nodes[list(EDGE_INDICES[edge])]


@attr.frozen(eq=False)
class AncfElement36:
    """Reduced element: the 12 nodal vectors left after dropping the four mixed slopes."""
    a: float = attr.field(converter=float, validator=_check_dimension)
    b: float = attr.field(converter=float, validator=_check_dimension)
    nodes: np.ndarray = attr.field(converter=frozen_array)

    @nodes.validator
    def _check_nodes(self, attribute, value):
        check_points(value, (12, 3), "nodal vectors")

    def node(self, label) -> np.ndarray:
        return self.nodes[REDUCED_LABELS.index(label)]

    def expand(self) -> AncfElement48:
        nodes = np.zeros((16, 3))
        nodes[list(REDUCED_INDICES)] = self.nodes
        return AncfElement48(self.a, self.b, nodes)


def hermite_row(lam, length) -> np.ndarray:
    """s_1..s_4 of one direction at normalized coordinate lam; slope weights carry the length."""
    return np.array([
        1.0 - 3.0 * lam ** 2 + 2.0 * lam ** 3,
        length * (lam - 2.0 * lam ** 2 + lam ** 3),
        3.0 * lam ** 2 - 2.0 * lam ** 3,
        length * (lam ** 3 - lam ** 2),
    ])


def shape_functions(xi, eta, a, b) -> np.ndarray:
    xi = _check_local("xi", xi)
    eta = _check_local("eta", eta)
    if not (a > 0.0 and b > 0.0):
        raise GeometryDomainError(f"element dimensions must be positive, got a={a}, b={b}")
    return np.outer(hermite_row(xi, a), hermite_row(eta, b)).ravel(order="F")


def shape_functions_36(xi, eta, a, b) -> np.ndarray:
    return shape_functions(xi, eta, a, b)[list(REDUCED_INDICES)]


def _normalize(x, y, a, b):
    x, y = float(x), float(y)
    if not (0.0 <= x <= a and 0.0 <= y <= b):
        raise GeometryDomainError(f"point ({x}, {y}) is outside the element [0, {a}] x [0, {b}]")
    return x / a, y / b


def ancf_eval(elem: AncfElement48, x, y) -> np.ndarray:
    xi, eta = _normalize(x, y, elem.a, elem.b)
    return shape_functions(xi, eta, elem.a, elem.b) @ elem.nodes


def ancf_eval_36(elem: AncfElement36, x, y) -> np.ndarray:
    xi, eta = _normalize(x, y, elem.a, elem.b)
    return shape_functions_36(xi, eta, elem.a, elem.b) @ elem.nodes


def ancf_eval_normalized(elem, xi, eta) -> np.ndarray:
    """Evaluate either element kind at normalized (xi, eta) in [0, 1]^2."""
    xi = _check_local("xi", xi)
    eta = _check_local("eta", eta)
    if isinstance(elem, AncfElement36):
        return shape_functions_36(xi, eta, elem.a, elem.b) @ elem.nodes
    return shape_functions(xi, eta, elem.a, elem.b) @ elem.nodes
