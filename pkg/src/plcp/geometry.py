"""Line parameterization on the cylinder R x [0, pi) and line<->plane maps.

A line is identified by its signed perpendicular distance ``r`` from the
origin and the angle ``theta`` of its direction measured counterclockwise
from the x-axis. Arc-length coordinate ``t`` runs along the line with t=0
at the foot of the perpendicular from the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "LineParams",
    "Point2",
    "DiskWindow",
    "canonical_line",
    "line_point",
    "distance_to_line",
    "chord_half_length",
]


@dataclass(frozen=True)
class LineParams:
    """A line given by signed distance r and direction angle theta in [0, pi)."""

    r: float
    theta: float

    def __post_init__(self):
        if not (0.0 <= self.theta < math.pi):
            raise ValueError(f"theta must lie in [0, pi), got {self.theta}")


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(frozen=True)
class DiskWindow:
    """A disk of the given radius centered at the origin."""

    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")

    def contains(self, p: Point2) -> bool:
        return p.norm() <= self.radius


def canonical_line(r: float, theta: float) -> LineParams:
    """Reduce theta mod pi, flipping the sign of r on odd wraps.

    (r, theta + pi) and (-r, theta) describe the same undirected line, so
    every line has exactly one canonical representative with theta in [0, pi).
    """
    k = math.floor(theta / math.pi)
    theta = theta - k * math.pi
    if theta >= math.pi:  # guard against rounding right at the boundary
        theta -= math.pi
        k += 1
    if k % 2:
        r = -r
    return LineParams(r, theta)


def line_point(line: LineParams, t: float) -> Point2:
    """Planar point at arc coordinate t on the line."""
    c, s = math.cos(line.theta), math.sin(line.theta)
    return Point2(t * c - line.r * s, t * s + line.r * c)


def distance_to_line(p: Point2, line: LineParams) -> float:
    """Perpendicular distance from p to the line."""
    return abs(p.x * math.sin(line.theta) - p.y * math.cos(line.theta) + line.r)


def chord_half_length(r: float, R: float) -> float:
    """Half-length of the chord a line at signed distance r cuts in a disk of radius R.

    The chord is {t : |t| <= sqrt(R^2 - r^2)}.
    """
    if abs(r) > R:
        raise ValueError(f"|r|={abs(r)} exceeds window radius {R}: line misses the window")
    return math.sqrt(max(R * R - r * r, 0.0))
