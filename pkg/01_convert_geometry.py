import argparse
import logging
import pprint
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import bezier
import bspline
import conversion
import geometry_files
from ancf import AncfElement36, AncfElement48
from geometry_exceptions import (
    ControlPolygonConditionFailed,
    GeometryError,
    MixedSlopeRejected,
    UsageError,
)

TARGETS = ("ancf48", "ancf36", "bezier")
COMPATIBLE = {
    "bezier": ("ancf48", "ancf36", "bezier"),
    "bspline": ("ancf48", "ancf36", "bezier"),
    "ancf48": ("ancf36", "bezier"),
    "ancf36": ("ancf48", "bezier"),
}


@dataclass
class ConversionResults:
    outputs: list = field(default_factory=list)
    segments: list = field(default_factory=list)
    failures: dict = field(default_factory=dict)
    max_row_sum_defect: Optional[float] = None


def segment_key(segment):
    return "element" if segment is None else f"{segment[0]},{segment[1]}"


class GeometryConvert:
    """
    Usage: Convert one geometry document into one or more documents of the target kind.
    - bezier  -> ancf48 | ancf36 | bezier (exact degree reduction)
    - bspline -> ancf48 | ancf36 | bezier, one document per selected segment
    - ancf48  -> ancf36 (mixed slopes must vanish) | bezier
    - ancf36  -> ancf48 (zero mixed slopes) | bezier
    Start by looking at the doit() method at the bottom of the class.

    Results:
    - One output document per converted segment. With more than one segment the output path is used as a
    stem: out.json becomes out_e3_f4.json.
    - ancf36 targets fail per segment when the mixed slopes do not vanish; the other segments are still written
    and the failures are listed with their corner residuals.
    - Bezier targets are reduced to the lowest exact degree unless bicubic output is requested.

    Example terminal usage:
    python 01_convert_geometry.py --to ancf48 --all surface.json plate.json

    :modifies:
        self.source
        self.converted
        self.results
        self.message
        self.failure
    """
    def __init__(
        self,
        input_path,
        output_path,
        target,
        a=None,
        b=None,
        tol=conversion.DEFAULT_TOLERANCE,
        segment=None,
        all_segments=False,
        bicubic=False,
        workers=None,
    ):
        self.input_path = Path(input_path)
        self.output_path = Path(output_path)
        self.target = target
        self.a = a
        self.b = b
        self.tol = float(tol)
        self.segment = segment
        self.all_segments = bool(all_segments)
        self.bicubic = bool(bicubic)
        self.workers = workers
        self.source = None
        self.converted = []
        self.results = ConversionResults()
        self.message = ""
        self.failure = None

    @classmethod
    def from_args(cls, args):
        return cls(
            input_path=args.input_path,
            output_path=args.output_path,
            target=args.target,
            a=args.a,
            b=args.b,
            tol=args.tol,
            segment=geometry_files.parse_segment(args.segment) if args.segment else None,
            all_segments=args.all_segments,
            bicubic=args.bicubic,
            workers=args.workers,
        )

    def fetch_source(self):
        """ Load and validate the input document
        :modifies:
            self.source
        """
        self.source = geometry_files.load(self.input_path)
        if self.target not in COMPATIBLE[self.source.kind]:
            raise UsageError(f"a {self.source.kind} document cannot be converted to {self.target}")
        if self.source.kind != "bspline" and (self.segment or self.all_segments):
            raise UsageError("--segment and --all only apply to bspline documents")

    def select_segments(self):
        """ Segments of a B-spline input: the one asked for, or all of them
        :modifies:
            self.results
        """
        surface = self.source.payload
        if self.segment and self.all_segments:
            raise UsageError("use either --segment or --all, not both")
        if self.segment:
            bspline.check_segment(surface, *self.segment)
            self.results.segments = [self.segment]
        elif self.all_segments:
            self.results.segments = bspline.convertible_segments(surface)
        else:
            segments = bspline.convertible_segments(surface)
            if len(segments) != 1:
                raise UsageError(f"the surface has {len(segments)} segments; pass --segment e,f or --all")
            self.results.segments = segments

    def _reduce(self, element, transform, segment):
        try:
            reduced = conversion.reduce_element(element, self.tol)
        except MixedSlopeRejected as e:
            self.results.failures[segment_key(segment)] = dict(zip(e.corners, e.norms))
            return None
        if transform is not None:
            transform = conversion.reduce_transform_matrix(transform)
        return reduced, transform

    def _record(self, payload, transform, segment=None):
        if transform is not None:
            defect = transform.row_sum_defect()
            self.results.max_row_sum_defect = max(self.results.max_row_sum_defect or 0.0, defect)
        self.converted.append((segment, payload))

    def convert_bezier(self):
        net = self.source.payload
        if self.target == "bezier":
            reduced = bezier.elevate_to(net) if self.bicubic else conversion.degree_reduce_exact(net, self.tol)
            self._record(reduced, None)
            return
        element, transform = conversion.bezier_to_ancf(
            net, 1.0 if self.a is None else self.a, 1.0 if self.b is None else self.b
        )
        if self.target == "ancf36":
            reduced = self._reduce(element, transform, None)
            if reduced:
                self._record(*reduced)
            return
        self._record(element, transform)

    def convert_bspline(self):
        surface = self.source.payload
        if self.target == "bezier":
            for e, f in self.results.segments:
                net = bspline.segment_to_bezier(surface, e, f)
                self._record(bezier.elevate_to(net) if self.bicubic else net, None, (e, f))
            return
        options = conversion.ConversionOptions(a=self.a, b=self.b, tol=self.tol, workers=self.workers)
        if self.all_segments:
            conversions = conversion.bspline_to_ancf_mesh(surface, options)
        else:
            conversions = []
            for e, f in self.results.segments:
                element, transform = conversion.bspline_segment_to_ancf(surface, e, f, options.a, options.b)
                conversions.append(conversion.SegmentConversion(e, f, element, transform))
        for converted in conversions:
            segment = (converted.e, converted.f)
            if self.target == "ancf36":
                reduced = self._reduce(converted.element, converted.matrix, segment)
                if reduced:
                    self._record(*reduced, segment)
            else:
                self._record(converted.element, converted.matrix, segment)

    def convert_element(self):
        element = self.source.payload
        if self.target == "ancf48" and isinstance(element, AncfElement36):
            self._record(element.expand(), None)
        elif self.target == "ancf36" and isinstance(element, AncfElement48):
            reduced = self._reduce(element, None, None)
            if reduced:
                self._record(reduced[0], None)
        elif self.bicubic:
            self._record(conversion.ancf36_to_bezier(element) if isinstance(element, AncfElement36)
                         else conversion.ancf_to_bezier(element), None)
        else:
            self._record(conversion.ancf_to_lower_bezier(element, self.tol), None)

    def output_path_for(self, segment):
        if segment is None or len(self.results.segments) == 1:
            return self.output_path
        e, f = segment
        return self.output_path.with_name(f"{self.output_path.stem}_e{e}_f{f}{self.output_path.suffix}")

    def write_outputs(self):
        """ Write converted documents one after the other
        :modifies:
            self.results
        """
        source_id = self.source.metadata.get("geometry_id", "")
        for segment, payload in self.converted:
            path = self.output_path_for(segment)
            geometry = geometry_files.wrap(
                payload,
                name=self.source.name if segment is None else f"{self.source.name} segment {segment[0]},{segment[1]}",
                units=self.source.metadata.get("units", ""),
                source=source_id,
                target=self.target,
                segment=list(segment) if segment else None,
            )
            geometry_files.save(path, geometry)
            self.results.outputs.append(str(path))
            print(f"{geometry.kind} written to {path}", geometry.metadata["geometry_id"])

    def doit(self):
        try:
            self.fetch_source()
            if self.source.kind == "bezier":
                self.convert_bezier()
            elif self.source.kind == "bspline":
                self.select_segments()
                self.convert_bspline()
            else:
                self.convert_element()
            self.write_outputs()
            if self.results.failures:
                residuals = [norm for corners in self.results.failures.values() for norm in corners.values()]
                failed = "; ".join(self.results.failures)
                raise ControlPolygonConditionFailed(
                    residuals,
                    message=f"mixed slopes do not vanish for segment(s) {failed}; "
                            f"corner residuals {self.results.failures}",
                )
        except GeometryError as e:
            self.failure = e
            self.message = e.message
            return self.message, None
        except OSError as e:
            self.failure = e
            self.message = f"{e.__class__.__name__}: {e}"
            return self.message, None
        return self.results.__dict__


def add_arguments(parser):
    parser.add_argument(
        "--to",
        dest="target",
        required=True,
        choices=TARGETS,
        help="kind of the converted documents",
    )
    parser.add_argument(
        "--a",
        dest="a",
        type=float,
        required=False,
        default=None,
        help="assumed element length; Bezier input defaults to 1, B-spline input to the u knot span",
    )
    parser.add_argument(
        "--b",
        dest="b",
        type=float,
        required=False,
        default=None,
        help="assumed element width; Bezier input defaults to 1, B-spline input to the v knot span",
    )
    parser.add_argument(
        "--segment",
        dest="segment",
        required=False,
        default=None,
        help="B-spline segment `e,f` given by the left knot indices",
    )
    parser.add_argument(
        "--all",
        dest="all_segments",
        action="store_true",
        help="convert every segment of a B-spline surface",
    )
    parser.add_argument(
        "--tol",
        dest="tol",
        type=float,
        required=False,
        default=conversion.DEFAULT_TOLERANCE,
        help="tolerance relative to the geometry's bounding-box diagonal (mixed slopes, degree reduction)",
    )
    parser.add_argument(
        "--bicubic",
        dest="bicubic",
        action="store_true",
        help="write bicubic Bezier nets instead of reducing them to the lowest exact degree",
    )
    parser.add_argument(
        "--workers",
        dest="workers",
        type=int,
        required=False,
        default=None,
        help="threads used for --all conversions",
    )
    parser.add_argument("input_path", help="input geometry document")
    parser.add_argument("output_path", help="output geometry document (used as a stem for several segments)")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    add_arguments(parser)
    parser.add_argument("--verbose", dest="verbose", action="store_true", help="log kernel debug messages")
    args = parser.parse_args()
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    result = GeometryConvert.from_args(args).doit()

    print('\nRESULTS')
    pprint.pp(result)
