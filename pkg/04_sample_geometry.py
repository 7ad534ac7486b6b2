import argparse
import logging
import pprint

import numpy as np

import geometry_files
from geometry_exceptions import GeometryError, UsageError

DEFAULT_GRID = 11


class GeometrySample:
    """
    Usage: Dump an n x n grid of points of a geometry document for external plotting.
    - Rows are `xi eta x y z`, xi outer and eta inner, written with 17 significant digits.
    - A B-spline document is sampled over one segment when `segment` is given, otherwise over its whole
    valid parameter rectangle.

    Example terminal usage:
    python 04_sample_geometry.py --grid 21 plate.json plate.txt

    :modifies:
        self.rows
        self.message
        self.failure
    """
    def __init__(self, input_path, output_path, grid=DEFAULT_GRID, segment=None):
        self.input_path = input_path
        self.output_path = output_path
        self.grid = int(grid)
        self.segment = segment
        self.rows = None
        self.message = ""
        self.failure = None

    @classmethod
    def from_args(cls, args):
        segment = geometry_files.parse_segment(args.segment) if args.segment else None
        return cls(input_path=args.input_path, output_path=args.output_path, grid=args.grid, segment=segment)

    def sample(self):
        """ Evaluate the grid
        :modifies:
            self.rows
        """
        if self.grid < 1:
            raise UsageError(f"--grid must be positive, got {self.grid}")
        geometry = geometry_files.load(self.input_path)
        geometry_files.check_segment_kind(geometry, self.segment)
        point_at = geometry_files.point_map(geometry, self.segment)
        samples = np.linspace(0.0, 1.0, self.grid) if self.grid > 1 else np.array([0.0])
        self.rows = np.array([[xi, eta, *point_at(xi, eta)] for xi in samples for eta in samples])

    def write_rows(self):
        np.savetxt(self.output_path, self.rows, fmt="%.17g", header="xi eta x y z")

    def doit(self):
        try:
            self.sample()
            self.write_rows()
        except GeometryError as e:
            self.failure = e
            self.message = e.message
            return self.message, None
        except OSError as e:
            self.failure = e
            self.message = f"{e.__class__.__name__}: {e}"
            return self.message, None
        print(f"{len(self.rows)} points written to {self.output_path}")
        return {"rows": len(self.rows), "output": str(self.output_path)}


def add_arguments(parser):
    parser.add_argument(
        "--grid",
        dest="grid",
        type=int,
        required=False,
        default=DEFAULT_GRID,
        help="number of samples per direction",
    )
    parser.add_argument(
        "--segment",
        dest="segment",
        required=False,
        default=None,
        help="segment `e,f` of a bspline document",
    )
    parser.add_argument("input_path", help="geometry document to sample")
    parser.add_argument("output_path", help="text file receiving the point rows")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    add_arguments(parser)
    parser.add_argument("--verbose", dest="verbose", action="store_true", help="log kernel debug messages")
    args = parser.parse_args()
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    result = GeometrySample.from_args(args).doit()

    print('\nRESULTS')
    pprint.pp(result)
