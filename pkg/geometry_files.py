"""
Geometry documents: one JSON document per Bezier net, B-spline surface or ANCF element.

{"kind": ..., "metadata": {...}, "payload": {...}}; see README.md for the payload of each kind.
"""
import json
import logging
from pathlib import Path

import attr
import jmespath
import numpy as np

import ancf
import bspline
from ancf import AncfElement36, AncfElement48
from bezier import BezierNet, bezier_eval
from bspline import BsplineSurface
from geometry_exceptions import GeometryError, GeometryFileError, UsageError
from geometry_id import generate_geometry_id

logger = logging.getLogger(__name__)

KINDS = ("bezier", "bspline", "ancf48", "ancf36")
METADATA_KEYS = ("name", "units", "geometry_id", "source", "created_by")
CREATED_BY = "ancf-geometry-kernel"


@attr.frozen(eq=False)
class GeometryFile:
    kind: str = attr.field(validator=attr.validators.in_(KINDS))
    payload: object
    metadata: dict = attr.field(factory=dict, converter=dict)

    @property
    def name(self):
        return self.metadata.get("name", "")


def kind_of(payload) -> str:
    if isinstance(payload, BezierNet):
        return "bezier"
    if isinstance(payload, BsplineSurface):
        return "bspline"
    if isinstance(payload, AncfElement48):
        return "ancf48"
    if isinstance(payload, AncfElement36):
        return "ancf36"
    raise GeometryFileError(f"{type(payload).__name__} is not a geometry payload")


def payload_document(payload) -> dict:
    kind = kind_of(payload)
    if kind == "bezier":
        return {"degree_u": payload.degree_u, "degree_v": payload.degree_v, "points": payload.points.tolist()}
    if kind == "bspline":
        return {
            "degree_u": payload.degree_u,
            "degree_v": payload.degree_v,
            "knots_u": payload.knots_u.as_list(),
            "knots_v": payload.knots_v.as_list(),
            "points": payload.points.tolist(),
        }
    labels = ancf.NODE_LABELS if kind == "ancf48" else ancf.REDUCED_LABELS
    return {"a": payload.a, "b": payload.b, "node_order": list(labels), "nodes": payload.nodes.tolist()}


def wrap(payload, name="", units="", source="", **factors) -> GeometryFile:
    """Wrap a kernel object in a document with a content id; factors distinguish derived documents."""
    kind = kind_of(payload)
    body = payload_document(payload)
    metadata = {
        "name": name,
        "units": units,
        "geometry_id": generate_geometry_id(kind, body, source, sorted(factors.items())),
        "source": source,
        "created_by": CREATED_BY,
    }
    return GeometryFile(kind, payload, metadata)


def to_document(geometry: GeometryFile) -> dict:
    metadata = {key: geometry.metadata.get(key, "") for key in METADATA_KEYS}
    metadata.update({key: geometry.metadata[key] for key in sorted(geometry.metadata) if key not in METADATA_KEYS})
    return {"kind": geometry.kind, "metadata": metadata, "payload": payload_document(geometry.payload)}


def _required(document, expression):
    value = jmespath.search(expression, document)
    if value is None:
        raise GeometryFileError(f"geometry document is missing `{expression}`")
    return value


def _integer(document, expression):
    value = _required(document, expression)
    if isinstance(value, bool) or not isinstance(value, int):
        raise GeometryFileError(f"`{expression}` must be an integer, got {value!r}")
    return value


def _array(document, expression):
    try:
        return np.array(_required(document, expression), dtype=float)
    except (TypeError, ValueError) as e:
        raise GeometryFileError(f"`{expression}` is not a numeric array: {e}")


def from_document(document) -> GeometryFile:
    if not isinstance(document, dict):
        raise GeometryFileError("a geometry document must be a JSON object")
    kind = _required(document, "kind")
    if kind not in KINDS:
        raise GeometryFileError(f"unknown geometry kind {kind!r}; expected one of {KINDS}")
    metadata = jmespath.search("metadata", document)
    if metadata is None:
        metadata = {}
    elif not isinstance(metadata, dict):
        raise GeometryFileError(f"`metadata` must be a JSON object, got {type(metadata).__name__}")
    try:
        if kind == "bezier":
            payload = BezierNet(
                _integer(document, "payload.degree_u"),
                _integer(document, "payload.degree_v"),
                _array(document, "payload.points"),
            )
        elif kind == "bspline":
            payload = BsplineSurface(
                _integer(document, "payload.degree_u"),
                _integer(document, "payload.degree_v"),
                _array(document, "payload.points"),
                _array(document, "payload.knots_u"),
                _array(document, "payload.knots_v"),
            )
        else:
            expected = ancf.NODE_LABELS if kind == "ancf48" else ancf.REDUCED_LABELS
            order = jmespath.search("payload.node_order", document)
            if order is not None and tuple(order) != expected:
                raise GeometryFileError(f"{kind} node_order must be {list(expected)}, got {order}")
            element_type = AncfElement48 if kind == "ancf48" else AncfElement36
            payload = element_type(
                _required(document, "payload.a"),
                _required(document, "payload.b"),
                _array(document, "payload.nodes"),
            )
    except GeometryFileError:
        raise
    except (GeometryError, TypeError, ValueError) as e:
        raise GeometryFileError(f"{kind} payload does not validate: {e}")
    return GeometryFile(kind, payload, metadata)


def dumps(geometry: GeometryFile) -> str:
    return json.dumps(to_document(geometry), indent=2) + "\n"


def loads(text) -> GeometryFile:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise GeometryFileError(f"geometry document is not valid JSON: {e}")
    return from_document(document)


def load(path) -> GeometryFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise GeometryFileError(f"cannot read {path}: {e}")
    except UnicodeDecodeError as e:
        raise GeometryFileError(f"{path} is not UTF-8 text: {e}")
    geometry = loads(text)
    logger.debug("loaded %s document %s from %s", geometry.kind, geometry.name, path)
    return geometry


def save(path, geometry: GeometryFile):
    Path(path).write_text(dumps(geometry), encoding="utf-8")
    logger.debug("wrote %s document to %s", geometry.kind, path)


def parse_segment(text):
    """`e,f` -> (e, f), the left knot indices of a B-spline segment."""
    try:
        e, f = (int(part) for part in str(text).split(","))
    except ValueError:
        raise UsageError(f"a segment takes two integers `e,f`, got {text!r}")
    return e, f


def check_segment_kind(geometry: GeometryFile, segment):
    if segment is not None and geometry.kind != "bspline":
        raise UsageError(f"a segment was given for a {geometry.kind} document; segments only apply to bspline")


def point_map(geometry: GeometryFile, segment=None):
    """
    Normalized (xi, eta) in [0, 1]^2 -> point. A B-spline maps either one segment (e, f) or, when no
    segment is given, its whole valid parameter rectangle.
    """
    check_segment_kind(geometry, segment)
    payload = geometry.payload
    if geometry.kind == "bezier":
        return lambda xi, eta: bezier_eval(payload, xi, eta)
    if geometry.kind in ("ancf48", "ancf36"):
        return lambda xi, eta: ancf.ancf_eval_normalized(payload, xi, eta)
    if segment is not None:
        e, f = segment
        bspline.check_segment(payload, e, f)
        return lambda xi, eta: bspline.bspline_eval(
            payload,
            bspline.global_parameter(payload.knots_u, e, xi),
            bspline.global_parameter(payload.knots_v, f, eta),
        )
    (u0, u1), (v0, v1) = payload.parameter_range("u"), payload.parameter_range("v")
    return lambda xi, eta: bspline.bspline_eval(
        payload, min(u0 + float(xi) * (u1 - u0), u1), min(v0 + float(eta) * (v1 - v0), v1)
    )
