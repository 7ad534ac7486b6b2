import argparse
import logging
import pprint
from dataclasses import dataclass
from typing import Optional

import numpy as np

import geometry_files
from geometry_exceptions import GeometryError, ToleranceExceeded, UsageError

DEFAULT_GRID = 11
DEFAULT_COMPARE_TOLERANCE = 1e-9


@dataclass
class CompareReport:
    grid: int
    tolerance: float
    max_deviation: Optional[float] = None
    mean_deviation: Optional[float] = None
    worst_xi: Optional[float] = None
    worst_eta: Optional[float] = None
    passed: Optional[bool] = None


class GeometryCompare:
    """
    Usage: Sample two geometry documents on a common n x n grid of normalized (xi, eta) and report the
    largest and mean distance between corresponding points.
    - Bezier nets use their own (u, v); ANCF elements use x = xi * a, y = eta * b.
    - A B-spline document is compared either on one segment (e, f), mapped affinely onto [0, 1]^2, or on its
    whole valid parameter rectangle.

    Results:
    - self.report holds max/mean deviation, the worst grid point and `passed` against the absolute tolerance.

    Example terminal usage:
    python 02_compare_geometry.py --grid 11 --tol 1e-9 net.json plate.json

    :modifies:
        self.report
        self.message
        self.failure
    """
    def __init__(self, path_a, path_b, grid=DEFAULT_GRID, tol=DEFAULT_COMPARE_TOLERANCE, segment_a=None, segment_b=None):
        self.path_a = path_a
        self.path_b = path_b
        self.grid = int(grid)
        self.tol = float(tol)
        self.segment_a = segment_a
        self.segment_b = segment_b
        self.geometry_a = None
        self.geometry_b = None
        self.report = CompareReport(self.grid, self.tol)
        self.message = ""
        self.failure = None

    @classmethod
    def from_args(cls, args):
        return cls(
            path_a=args.path_a,
            path_b=args.path_b,
            grid=args.grid,
            tol=args.tol,
            segment_a=geometry_files.parse_segment(args.segment_a) if args.segment_a else None,
            segment_b=geometry_files.parse_segment(args.segment_b) if args.segment_b else None,
        )

    def fetch_sources(self):
        if self.grid < 2:
            raise UsageError(f"--grid must be at least 2, got {self.grid}")
        self.geometry_a = geometry_files.load(self.path_a)
        self.geometry_b = geometry_files.load(self.path_b)
        geometry_files.check_segment_kind(self.geometry_a, self.segment_a)
        geometry_files.check_segment_kind(self.geometry_b, self.segment_b)

    def measure(self):
        """ Distances on the grid, xi outer and eta inner
        :modifies:
            self.report
        """
        map_a = geometry_files.point_map(self.geometry_a, self.segment_a)
        map_b = geometry_files.point_map(self.geometry_b, self.segment_b)
        samples = np.linspace(0.0, 1.0, self.grid)
        deviations = np.array([
            [np.linalg.norm(map_a(xi, eta) - map_b(xi, eta)) for eta in samples] for xi in samples
        ])
        worst = np.unravel_index(np.argmax(deviations), deviations.shape)
        self.report.max_deviation = float(deviations[worst])
        self.report.mean_deviation = float(np.mean(deviations))
        self.report.worst_xi = float(samples[worst[0]])
        self.report.worst_eta = float(samples[worst[1]])
        self.report.passed = self.report.max_deviation <= self.tol

    def doit(self):
        try:
            self.fetch_sources()
            self.measure()
            if not self.report.passed:
                raise ToleranceExceeded(self.report.max_deviation, self.tol)
        except GeometryError as e:
            self.failure = e
            self.message = e.message
            if self.report.passed is False:
                return self.message, self.report.__dict__
            return self.message, None
        print("compare", "PASS", self.report.max_deviation)
        return self.report.__dict__


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
        "--tol",
        dest="tol",
        type=float,
        required=False,
        default=DEFAULT_COMPARE_TOLERANCE,
        help="absolute tolerance on the maximum deviation, in model length units",
    )
    parser.add_argument(
        "--segment-a",
        dest="segment_a",
        required=False,
        default=None,
        help="segment `e,f` of the first document when it is a bspline",
    )
    parser.add_argument(
        "--segment-b",
        dest="segment_b",
        required=False,
        default=None,
        help="segment `e,f` of the second document when it is a bspline",
    )
    parser.add_argument("path_a", help="first geometry document")
    parser.add_argument("path_b", help="second geometry document")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    add_arguments(parser)
    parser.add_argument("--verbose", dest="verbose", action="store_true", help="log kernel debug messages")
    args = parser.parse_args()
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    result = GeometryCompare.from_args(args).doit()

    print('\nRESULTS')
    pprint.pp(result)
