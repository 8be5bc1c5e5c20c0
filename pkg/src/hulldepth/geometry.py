"""Planar convex hulls of curve-graph vertices and exact polygon areas.

Hulls are built by the sort-based monotone chain, O(m log m) in the point
count.  Double precision with strict turn tests is used throughout: collinear
boundary points are dropped from the vertex ring (the area is unaffected) and
degenerate hulls (a point or a segment) have area exactly 0.0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .curves import SampledCurve, graph_vertices

__all__ = ["HullPolygon", "convex_hull", "hull_area", "joint_hull_area"]


@dataclass(frozen=True)
class HullPolygon:
    """Convex hull as a CCW ring of extreme points.

    ``degenerate`` is True when the hull is a single point or a segment; the
    ring then holds the 1 or 2 distinct endpoint(s).
    """

    vertices: np.ndarray
    degenerate: bool


def _sorted_points(points) -> tuple[np.ndarray, np.ndarray]:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected an (m, 2) point array, got shape {pts.shape}")
    if pts.shape[0] == 0:
        raise ValueError("convex hull of an empty point set")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point coordinates must be finite")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    return np.ascontiguousarray(pts[order, 0]), np.ascontiguousarray(pts[order, 1])


def convex_hull(points) -> HullPolygon:
    """Convex hull of an (m, 2) point set (duplicates allowed).

    Returns the CCW ring of extreme points; no three ring vertices are
    collinear.  Degenerate inputs (all points coincident or collinear) yield
    ``degenerate=True`` with the segment endpoints or the single point.
    """
    xs, ys = _sorted_points(points)
    ring = _kernels.chain_ring(xs, ys)
    vx, vy = xs[ring], ys[ring]
    if len(ring) < 3:
        # collapse duplicate coordinates left by coincident input points
        seen = np.ones(len(ring), dtype=bool)
        if len(ring) == 2 and vx[0] == vx[1] and vy[0] == vy[1]:
            seen[1] = False
        return HullPolygon(
            vertices=np.column_stack((vx[seen], vy[seen])), degenerate=True
        )
    return HullPolygon(vertices=np.column_stack((vx, vy)), degenerate=False)


def hull_area(hull: HullPolygon) -> float:
    """Shoelace area of a hull polygon; exactly 0.0 for degenerate hulls."""
    if hull.degenerate:
        return 0.0
    x = hull.vertices[:, 0]
    y = hull.vertices[:, 1]
    return float(abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)) / 2.0)


def points_hull_area(points) -> float:
    """Convex hull area of a raw (m, 2) point set in one pass."""
    xs, ys = _sorted_points(points)
    return float(_kernels.chain_area(xs, ys, len(xs)))


def joint_hull_area(curves: Sequence[SampledCurve]) -> float:
    """Area of the convex hull of the union of the curves' graphs."""
    curves = list(curves)
    if not curves:
        raise ValueError("joint_hull_area needs at least one curve")
    pts = np.concatenate([graph_vertices(c) for c in curves], axis=0)
    return points_hull_area(pts)
