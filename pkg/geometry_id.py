import base64
import hashlib
import json
import uuid

import numpy as np
import six


def _canonical(value):
    if isinstance(value, np.ndarray):
        return [_canonical(item) for item in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_canonical(item) for item in value]
    if isinstance(value, dict):
        return {str(key): _canonical(item) for key, item in value.items()}
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return int(value)
    return value


def generate_geometry_id(kind, payload, *factors):
    r"""generate_geometry_id(kind, payload, *factors)
    Computes a content hash to generate a geometry document id

    The payload is the document payload (degrees, knots, points or nodes); floats enter through
    their exact repr so two payloads get the same id only if every coordinate matches bit for bit.
    Extra factors, for example the source id and the (e, f) indices of a converted segment, keep ids
    of derived documents apart."""

    blob = json.dumps(
        {"kind": kind, "payload": _canonical(payload), "factors": _canonical(factors)},
        sort_keys=True,
        separators=(",", ":"),
    )
    uuid_object = uuid.UUID(bytes=hashlib.blake2b(blob.encode("utf-8"), digest_size=16).digest())
    return six.text_type(base64.b32encode(uuid_object.bytes), encoding="utf-8").replace("=", "")  # to remove padding
