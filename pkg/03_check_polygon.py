import argparse
import logging
import pprint

import bezier
import bspline
import conversion
import geometry_files
from geometry_exceptions import ControlPolygonConditionFailed, GeometryError


class PolygonCheck:
    """
    Usage: Test whether the bicubic control net behind a geometry document has parallelogram corner
    quadrilaterals, the condition under which the converted element carries no mixed slopes.
    - Bezier nets below bicubic are elevated first.
    - Every segment of a B-spline document is extracted to Bezier form and checked.
    - ANCF elements are inverted to their bicubic net; a 36 d.o.f. element always passes.

    Results:
    - self.reports maps "net" or "e,f" to the pass flag and the four corner residuals.

    Example terminal usage:
    python 03_check_polygon.py --tol 1e-9 net.json

    :modifies:
        self.reports
        self.message
        self.failure
    """
    def __init__(self, input_path, tol=conversion.DEFAULT_TOLERANCE):
        self.input_path = input_path
        self.tol = float(tol)
        self.source = None
        self.nets = {}
        self.reports = {}
        self.message = ""
        self.failure = None

    @classmethod
    def from_args(cls, args):
        return cls(input_path=args.input_path, tol=args.tol)

    def fetch_nets(self):
        """ Bicubic nets to check
        :modifies:
            self.nets
        """
        self.source = geometry_files.load(self.input_path)
        payload = self.source.payload
        if self.source.kind == "bezier":
            self.nets["net"] = bezier.elevate_to(payload)
        elif self.source.kind == "bspline":
            for e, f in bspline.convertible_segments(payload):
                self.nets[f"{e},{f}"] = bezier.elevate_to(bspline.segment_to_bezier(payload, e, f))
        elif self.source.kind == "ancf48":
            self.nets["net"] = conversion.ancf_to_bezier(payload)
        else:
            self.nets["net"] = conversion.ancf36_to_bezier(payload)

    def check_nets(self):
        for key, net in self.nets.items():
            report = conversion.check_parallelogram(net, self.tol)
            self.reports[key] = {"ok": report.ok, "residuals": dict(zip(report.corners, report.residuals))}

    def doit(self):
        try:
            self.fetch_nets()
            self.check_nets()
            failed = [key for key, report in self.reports.items() if not report["ok"]]
            if failed:
                residuals = [r for key in failed for r in self.reports[key]["residuals"].values()]
                raise ControlPolygonConditionFailed(
                    residuals,
                    message=f"corner quadrilaterals are not parallelograms for {', '.join(failed)}",
                )
        except GeometryError as e:
            self.failure = e
            self.message = e.message
            return self.message, self.reports or None
        print("check-polygon", "PASS", len(self.reports))
        return self.reports


def add_arguments(parser):
    parser.add_argument(
        "--tol",
        dest="tol",
        type=float,
        required=False,
        default=conversion.DEFAULT_TOLERANCE,
        help="tolerance relative to the control net's bounding-box diagonal",
    )
    parser.add_argument("input_path", help="geometry document to check")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    add_arguments(parser)
    parser.add_argument("--verbose", dest="verbose", action="store_true", help="log kernel debug messages")
    args = parser.parse_args()
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    result = PolygonCheck.from_args(args).doit()

    print('\nRESULTS')
    pprint.pp(result)
