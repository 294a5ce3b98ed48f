"""Longest convex chains from p0 to p2 in a triangle.

A subset Y of the input is a convex chain when Y together with the two
endpoints is in strictly convex position. After mapping the triangle to
standard position this is the same as: sorted by x, the slopes along
p0 -> y1 -> ... -> yk -> p2 strictly increase.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .geometry import (
    COLLINEAR_EPS,
    GeometryError,
    Point,
    Triangle,
    distance_to_arc,
    map_to_standard,
    standard_triangle,
)

BRUTE_FORCE_LIMIT = 20
START = -1  # predecessor id of the start vertex p0


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class ChainInstance:
    """Points inside a triangle. Point ``i`` keeps identity ``i``."""

    triangle: Triangle
    points: np.ndarray
    standard: np.ndarray = field(repr=False, compare=False)

    def __init__(self, triangle: Triangle | None, points, tol: float = 1e-12):
        triangle = triangle if triangle is not None else standard_triangle()
        pts = np.array([tuple(p) for p in points] if not isinstance(points, np.ndarray) else points, dtype=float)
        pts = pts.reshape(-1, 2)
        if not np.all(np.isfinite(pts)):
            raise InstanceError("non-finite coordinates")
        std = map_to_standard(triangle).apply(pts) if len(pts) else pts.copy()
        if len(pts):
            outside = (std[:, 0] < -tol) | (std[:, 1] < -tol) | (std[:, 0] + std[:, 1] > 1 + tol)
            if outside.any():
                i = int(np.flatnonzero(outside)[0])
                raise InstanceError(f"point {i} ({pts[i, 0]:g}, {pts[i, 1]:g}) lies outside the triangle")
            for v in (triangle.v0, triangle.v1, triangle.v2):
                hit = np.flatnonzero((pts[:, 0] == v.x) & (pts[:, 1] == v.y))
                if len(hit):
                    raise InstanceError(f"point {int(hit[0])} coincides with a triangle vertex")
        pts.setflags(write=False)
        std.setflags(write=False)
        object.__setattr__(self, "triangle", triangle)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "standard", std)

    @classmethod
    def from_standard(cls, points: np.ndarray) -> "ChainInstance":
        """Instance in the standard triangle, skipping the containment check
        (for samplers that produce points in T by construction)."""
        self = object.__new__(cls)
        pts = np.ascontiguousarray(points, dtype=float).reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, "triangle", standard_triangle())
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "standard", pts)
        return self

    def __len__(self) -> int:
        return len(self.points)

    def subset(self, keep: np.ndarray) -> tuple["ChainInstance", np.ndarray]:
        """Restriction to the points flagged in ``keep`` and the map from new
        ids back to the original ones."""
        ids = np.flatnonzero(keep)
        sub = object.__new__(ChainInstance)
        object.__setattr__(sub, "triangle", self.triangle)
        object.__setattr__(sub, "points", self.points[ids])
        object.__setattr__(sub, "standard", self.standard[ids])
        return sub, ids


@dataclass(frozen=True)
class Chain:
    indices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class SlopeEntry:
    k: int
    min_slope: float
    predecessor: int  # point id or START


SlopeList = list  # list[SlopeEntry], entry k at position k - 1


def _order(std: np.ndarray) -> np.ndarray:
    """Increasing x, ties by decreasing y."""
    return np.lexsort((-std[:, 1], std[:, 0]))


def is_convex_chain(instance: ChainInstance, indices: Sequence[int]) -> bool:
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise InstanceError("duplicate indices")
    n = len(instance)
    if any(i < 0 or i >= n for i in idx):
        raise InstanceError("index out of range")
    pts = sorted((tuple(instance.standard[i]) for i in idx), key=lambda p: (p[0], -p[1]))
    path = [(0.0, 1.0), *pts, (1.0, 0.0)]
    prev = None
    for i, ((ax, ay), (bx, by)) in enumerate(zip(path[:-1], path[1:])):
        dx = bx - ax
        if dx > 0:
            s = (by - ay) / dx
        elif i == 0 and dx == 0 and by < ay:
            s = -np.inf  # straight down the leg from p0
        else:
            return False
        if prev is not None and not s > prev:
            return False
        prev = s
    return True


def convex_chain_mask(batch: np.ndarray) -> np.ndarray:
    """Vectorized chain test for ``batch`` of shape (m, k, 2) in the standard
    triangle; True where all k points form a convex chain."""
    batch = np.asarray(batch, dtype=float)
    m, k = batch.shape[:2]
    if k == 0:
        return np.ones(m, dtype=bool)
    order = np.lexsort((-batch[:, :, 1], batch[:, :, 0]), axis=1)
    srt = np.take_along_axis(batch, order[:, :, None], axis=1)
    path = np.concatenate(
        [np.broadcast_to([0.0, 1.0], (m, 1, 2)), srt, np.broadcast_to([1.0, 0.0], (m, 1, 2))], axis=1
    )
    d = np.diff(path, axis=1)
    ok = np.all(d[:, 1:, 0] > 0, axis=1) & (d[:, 0, 0] >= 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = d[:, :, 1] / d[:, :, 0]
    s[:, 0] = np.where(d[:, 0, 0] > 0, s[:, 0], -np.inf)
    return ok & np.all(np.diff(s, axis=1) > 0, axis=1)


def _solve_sorted(std: np.ndarray, prune: bool = True):
    order = _order(std)
    xs = np.ascontiguousarray(std[order, 0])
    ys = np.ascontiguousarray(std[order, 1])
    start, count, slopes, preds = _kernels.slope_list_dp(xs, ys, prune)
    return order, xs, ys, start, count, slopes, preds


def slope_lists(instance: ChainInstance, prune: bool = False) -> dict[int, SlopeList]:
    """The per-point DP frontier keyed by point id.

    Without pruning every achievable length appears; with pruning only
    chains that can still be closed at p2 are kept.
    """
    order, _, _, start, count, slopes, preds = _solve_sorted(instance.standard, prune)
    out: dict[int, SlopeList] = {}
    for pos, pid in enumerate(order):
        b = start[pos]
        out[int(pid)] = [
            SlopeEntry(k + 1, float(slopes[b + k]), START if preds[b + k] < 0 else int(order[preds[b + k]]))
            for k in range(count[pos])
        ]
    return out


def longest_chain_exact(instance: ChainInstance) -> Chain:
    """A longest convex chain, by the minimal-last-slope dynamic program.

    Points are processed by increasing x; each point keeps, per chain length,
    the smallest possible slope of the last segment. Extending from p to q
    uses a binary search in p's (strictly increasing) list. O(n^2 log n).
    """
    if len(instance) == 0:
        return Chain(())
    order, xs, ys, start, count, slopes, preds = _solve_sorted(instance.standard)
    end, length = _kernels.best_chain_end(xs, ys, start, count, slopes)
    chain = []
    pos, k = int(end), int(length)
    while k > 0:
        chain.append(int(order[pos]))
        pos = int(preds[start[pos] + k - 1])
        k -= 1
    chain.reverse()
    return Chain(tuple(chain))


def longest_chain_length(instance: ChainInstance) -> int:
    if len(instance) == 0:
        return 0
    std = instance.standard
    order = _order(std)
    return int(_kernels.longest_chain_length(np.ascontiguousarray(std[order, 0]), np.ascontiguousarray(std[order, 1])))


def longest_chain_brute_force(instance: ChainInstance) -> Chain:
    """Exhaustive search; ties go to the lexicographically smallest ids."""
    n = len(instance)
    if n > BRUTE_FORCE_LIMIT:
        raise InstanceError(f"brute force limited to {BRUTE_FORCE_LIMIT} points, got {n}")
    best: tuple[int, ...] = ()
    # any subset of a convex chain is a chain, so sizes can be scanned upwards
    for size in range(1, n + 1):
        found = next((c for c in itertools.combinations(range(n), size) if is_convex_chain(instance, c)), None)
        if found is None:
            break
        best = found
    return Chain(tuple(best))


def band_mask(instance: ChainInstance, half_width: float) -> np.ndarray:
    if half_width <= 0:
        raise ValueError("half width must be positive")
    if len(instance) == 0:
        return np.zeros(0, dtype=bool)
    return distance_to_arc(instance.standard) <= half_width


def longest_chain_banded(instance: ChainInstance, half_width: float) -> Chain:
    """Longest chain among the points within ``half_width`` of the special
    parabola (distances in standard position). A lower bound on the exact
    optimum, and usually equal to it for a wide enough band."""
    sub, ids = instance.subset(band_mask(instance, half_width))
    chain = longest_chain_exact(sub)
    return Chain(tuple(int(ids[i]) for i in chain.indices))


def is_convex_position(points) -> bool:
    """Every point is a strict vertex of the convex hull."""
    pts = np.array([tuple(p) for p in points], dtype=float).reshape(-1, 2)
    if len(pts) < 3:
        return len(pts) == 0 or len(np.unique(pts, axis=0)) == len(pts)
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    return _kernels.hull_vertex_count(pts, COLLINEAR_EPS) == len(pts)


def convex_position_mask(batch: np.ndarray) -> np.ndarray:
    """Vectorized is_convex_position over (m, n, 2)."""
    batch = np.asarray(batch, dtype=float)
    order = np.lexsort((batch[:, :, 1], batch[:, :, 0]), axis=1)
    srt = np.ascontiguousarray(np.take_along_axis(batch, order[:, :, None], axis=1))
    return _kernels.convex_position_batch(srt, COLLINEAR_EPS)


__all__ = [
    "BRUTE_FORCE_LIMIT",
    "Chain",
    "ChainInstance",
    "GeometryError",
    "InstanceError",
    "Point",
    "SlopeEntry",
    "START",
    "band_mask",
    "convex_chain_mask",
    "convex_position_mask",
    "is_convex_chain",
    "is_convex_position",
    "longest_chain_banded",
    "longest_chain_brute_force",
    "longest_chain_exact",
    "longest_chain_length",
    "slope_lists",
]
