"""Planar geometry kernel: triangles, affine maps, the parabola family
sqrt(x) + sqrt(y) = sqrt(1 + r) and its tangent-triangle calculus.

All parabola routines work in the standard triangle (0,1), (0,0), (1,0).
A parabola point is parametrized by u in [0, 1] as

    q(u) = ((1 + r) u^2, (1 + r) (1 - u)^2)

which makes the tangent at q(u) the line x/u + y/(1 - u) = 1 + r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

COLLINEAR_EPS = 1e-12
SUBDIVISION_AREA_TOL = 1e-10
SUBDIVISION_MAX_ITER = 200
DEFAULT_ARC_SAMPLES = 10_000

_SQRT2 = math.sqrt(2.0)


class GeometryError(ValueError):
    """Raised for degenerate or out-of-domain geometric input."""


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y

    def __getitem__(self, i: int) -> float:
        return (self.x, self.y)[i]

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


def _signed_area2(p, q, r) -> tuple[float, float]:
    """Twice the signed area of (p, q, r) and the magnitude scale used for
    the relative collinearity test."""
    ax, ay = q[0] - p[0], q[1] - p[1]
    bx, by = r[0] - p[0], r[1] - p[1]
    left, right = ax * by, ay * bx
    return left - right, abs(left) + abs(right)


def orientation(p, q, r) -> int:
    """Sign of the signed area of the triangle (p, q, r).

    Returns +1 for counter-clockwise, -1 for clockwise and 0 when the
    determinant is within a relative ``COLLINEAR_EPS`` of zero.
    """
    det, scale = _signed_area2(p, q, r)
    if abs(det) <= COLLINEAR_EPS * scale:
        return 0
    return 1 if det > 0 else -1


def slope(p, q) -> float:
    dx = q[0] - p[0]
    if dx == 0:
        raise GeometryError("vertical segment has no slope")
    return (q[1] - p[1]) / dx


@dataclass(frozen=True)
class Triangle:
    """Triangle with vertices in the roles p0, p1, p2.

    The chain endpoints are ``v0`` and ``v2``; ``v1`` is the corner the
    special parabola bends towards.
    """

    v0: Point
    v1: Point
    v2: Point

    def __post_init__(self):
        for name in ("v0", "v1", "v2"):
            v = getattr(self, name)
            if not isinstance(v, Point):
                object.__setattr__(self, name, Point(*v))
        if orientation(self.v0, self.v1, self.v2) == 0:
            raise GeometryError("degenerate triangle")

    @classmethod
    def from_coords(cls, coords: Sequence[float]) -> "Triangle":
        if len(coords) != 6:
            raise GeometryError("a triangle needs six coordinates")
        x0, y0, x1, y1, x2, y2 = map(float, coords)
        return cls(Point(x0, y0), Point(x1, y1), Point(x2, y2))

    @property
    def vertices(self) -> tuple[Point, Point, Point]:
        return (self.v0, self.v1, self.v2)

    @property
    def orientation(self) -> int:
        return orientation(self.v0, self.v1, self.v2)

    def as_array(self) -> np.ndarray:
        return np.array([tuple(v) for v in self.vertices], dtype=float)


def standard_triangle() -> Triangle:
    return Triangle(Point(0.0, 1.0), Point(0.0, 0.0), Point(1.0, 0.0))


def area(T: Triangle) -> float:
    det, _ = _signed_area2(T.v0, T.v1, T.v2)
    return abs(det) / 2.0


def shoelace_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


@dataclass(frozen=True)
class AffineMap:
    """x -> linear @ x + translation."""

    linear: tuple[tuple[float, float], tuple[float, float]]
    translation: Point

    def __post_init__(self):
        if not isinstance(self.translation, Point):
            object.__setattr__(self, "translation", Point(*self.translation))
        lin = tuple(tuple(float(v) for v in row) for row in self.linear)
        object.__setattr__(self, "linear", lin)
        if self.determinant == 0 or not math.isfinite(self.determinant):
            raise GeometryError("affine map is singular")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.linear, dtype=float)

    @property
    def determinant(self) -> float:
        (a, b), (c, d) = self.linear
        return a * d - b * c

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(((1.0, 0.0), (0.0, 1.0)), Point(0.0, 0.0))

    def apply(self, points):
        """Map a Point, a Triangle or an (n, 2) array."""
        if isinstance(points, Point):
            (a, b), (c, d) = self.linear
            t = self.translation
            return Point(a * points.x + b * points.y + t.x, c * points.x + d * points.y + t.y)
        if isinstance(points, Triangle):
            return Triangle(*(self.apply(v) for v in points.vertices))
        arr = np.asarray(points, dtype=float).reshape(-1, 2)
        return arr @ self.matrix.T + np.array(tuple(self.translation))

    __call__ = apply

    def inverse(self) -> "AffineMap":
        inv = np.linalg.inv(self.matrix)
        t = -inv @ np.array(tuple(self.translation))
        return AffineMap(tuple(map(tuple, inv)), Point(*t))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """The map ``self(other(x))``."""
        m = self.matrix @ other.matrix
        t = self.matrix @ np.array(tuple(other.translation)) + np.array(tuple(self.translation))
        return AffineMap(tuple(map(tuple, m)), Point(*t))


def map_to_standard(T: Triangle) -> AffineMap:
    """The affine map sending v0, v1, v2 to (0,1), (0,0), (1,0)."""
    v1 = T.v1.as_array()
    basis = np.column_stack([T.v2.as_array() - v1, T.v0.as_array() - v1])
    m = np.linalg.inv(basis)
    return AffineMap(tuple(map(tuple, m)), Point(*(-m @ v1)))


@dataclass(frozen=True)
class Line:
    """A*x + B*y = C with A^2 + B^2 = 1."""

    A: float
    B: float
    C: float

    def __post_init__(self):
        norm = math.hypot(self.A, self.B)
        if norm == 0 or not math.isfinite(norm):
            raise GeometryError("line needs (A, B) != (0, 0)")
        object.__setattr__(self, "A", self.A / norm)
        object.__setattr__(self, "B", self.B / norm)
        object.__setattr__(self, "C", self.C / norm)

    def signed_distance(self, p) -> float:
        return self.A * p[0] + self.B * p[1] - self.C

    def distance(self, p) -> float:
        return abs(self.signed_distance(p))

    def is_parallel(self, other: "Line", tol: float = 1e-12) -> bool:
        return abs(self.A * other.B - self.B * other.A) <= tol

    def intersect(self, other: "Line") -> Point:
        det = self.A * other.B - self.B * other.A
        if det == 0:
            raise GeometryError("parallel lines do not intersect")
        x = (self.C * other.B - self.B * other.C) / det
        y = (self.A * other.C - self.C * other.A) / det
        return Point(x, y)


@dataclass(frozen=True)
class Parabola:
    """The homothetic copy sqrt(x) + sqrt(y) = sqrt(1 + r); r = 0 is the
    special parabola of the standard triangle."""

    r: float = 0.0

    def __post_init__(self):
        if not (-1.0 < self.r < 3.0):
            raise GeometryError(f"parabola parameter r={self.r} outside (-1, 3)")

    @property
    def scale(self) -> float:
        return 1.0 + self.r


SPECIAL_PARABOLA = Parabola(0.0)


def _as_parabola(P) -> Parabola:
    return P if isinstance(P, Parabola) else Parabola(float(P))


def parabola_point(P, u: float) -> Point:
    P = _as_parabola(P)
    if not (0.0 <= u <= 1.0):
        raise GeometryError(f"parameter u={u} outside [0, 1]")
    s = P.scale
    return Point(s * u * u, s * (1.0 - u) * (1.0 - u))


def parabola_points(P, u) -> np.ndarray:
    """Vectorized parabola_point; returns an (m, 2) array."""
    P = _as_parabola(P)
    u = np.asarray(u, dtype=float)
    s = P.scale
    return np.column_stack([s * u * u, s * (1.0 - u) ** 2])


def tangent_line(P, u: float) -> Line:
    P = _as_parabola(P)
    if not (0.0 < u < 1.0):
        raise GeometryError("tangents are defined for 0 < u < 1 only")
    # x/u + y/(1-u) = 1+r, multiplied through by u(1-u) to stay finite near the ends
    return Line(1.0 - u, u, P.scale * u * (1.0 - u))


def parallel_tangent_distance(r: float, u: float) -> float:
    """Distance between the parallel tangents of the special parabola and of
    the copy with parameter r, both taken at parameter u."""
    if not (0.0 < u < 1.0):
        raise GeometryError("u must lie in (0, 1)")
    Parabola(r)
    a, b = u * u, (1.0 - u) ** 2
    return abs(r) / math.sqrt(1.0 / a + 1.0 / b)


_LEG_P0 = Line(1.0, 0.0, 0.0)  # x = 0
_LEG_P2 = Line(0.0, 1.0, 0.0)  # y = 0


def tangent_triangle(u1: float, u2: float) -> Triangle:
    """Triangle cut off by the tangents at q(u1), q(u2) and the chord
    between them."""
    if not (0.0 <= u1 < u2 <= 1.0):
        raise GeometryError(f"need 0 <= u1 < u2 <= 1, got ({u1}, {u2})")
    a = parabola_point(SPECIAL_PARABOLA, u1)
    c = parabola_point(SPECIAL_PARABOLA, u2)
    # tangents at u1 and u2 meet at (u1 u2, (1-u1)(1-u2))
    apex = Point(u1 * u2, (1.0 - u1) * (1.0 - u2))
    return Triangle(a, apex, c)


def equal_area_subdivision(
    t: float,
    area_tol: float = SUBDIVISION_AREA_TOL,
    max_iter: int = SUBDIVISION_MAX_ITER,
) -> list[Triangle]:
    """Cut the standard triangle's parabola into tangent triangles of area t,
    the last one possibly smaller.

    Each division parameter is located by bisection on the tangent-triangle
    area, which is increasing in the right parameter.
    """
    total = area(standard_triangle())
    if not (0.0 < t < total):
        raise GeometryError(f"target area {t} outside (0, {total})")
    tol = area_tol * t
    out: list[Triangle] = []
    lo_u = 0.0
    while True:
        rest = tangent_triangle(lo_u, 1.0)
        if area(rest) <= t + tol:
            out.append(rest)
            return out
        a, b = lo_u, 1.0
        mid = 0.5 * (a + b)
        for _ in range(max_iter):
            mid = 0.5 * (a + b)
            if mid <= lo_u:
                break
            diff = area(tangent_triangle(lo_u, mid)) - t
            if abs(diff) <= tol:
                break
            if diff < 0:
                a = mid
            else:
                b = mid
        out.append(tangent_triangle(lo_u, mid))
        lo_u = mid


def blaschke_deficit(a, b, c):
    """1 - cbrt(abc) - cbrt((1-a)(1-b)(1-c)); works elementwise on arrays."""
    a, b, c = np.asarray(a, float), np.asarray(b, float), np.asarray(c, float)
    q = 1.0 - np.cbrt(a * b * c) - np.cbrt((1 - a) * (1 - b) * (1 - c))
    return float(q) if q.ndim == 0 else q


def leg_division_ratios(line: Line) -> tuple[float, float]:
    """Ratios a, b in which ``line`` divides [p0, p1] and [p1, p2] of the
    standard triangle, measured from p0 and from p1 respectively."""
    q0 = line.intersect(_LEG_P0)  # on x = 0
    q2 = line.intersect(_LEG_P2)  # on y = 0
    # |p0 q0| / |p0 p1| and |p1 q2| / |p1 p2|
    return 1.0 - q0.y, q2.x


# -- distances to the arc -------------------------------------------------


def _arc_u_range(r: float) -> tuple[float, float]:
    """Parameter interval of the part of the copy with parameter r that lies
    in the standard triangle (x + y <= 1)."""
    s = 1.0 + r
    if s <= 1.0:
        return 0.0, 1.0
    # (1+r)(2u^2 - 2u + 1) <= 1  <=>  (2u - 1)^2 <= 2/(1+r) - 1
    rhs = 2.0 / s - 1.0
    if rhs < 0:
        raise GeometryError(f"parabola with r={r} misses the triangle")
    h = 0.5 * math.sqrt(rhs)
    return 0.5 - h, 0.5 + h


def _real_cubic_roots(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Real roots of t^3 + p t + q = 0, as an (m, 3) array padded with nan."""
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    roots = np.full(p.shape + (3,), np.nan)
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    one = disc >= 0
    if np.any(one):
        sd = np.sqrt(disc[one])
        roots[one, 0] = np.cbrt(-q[one] / 2.0 + sd) + np.cbrt(-q[one] / 2.0 - sd)
    three = ~one  # implies p < 0
    if np.any(three):
        pp, qq = p[three], q[three]
        m = 2.0 * np.sqrt(-pp / 3.0)
        arg = np.clip(3.0 * qq / (pp * m), -1.0, 1.0)
        theta = np.arccos(arg) / 3.0
        for k in range(3):
            roots[three, k] = m * np.cos(theta - 2.0 * np.pi * k / 3.0)
    return roots


def distance_to_arc(points, r: float = 0.0) -> np.ndarray:
    """Euclidean distance from each point to the arc of the parabola with
    parameter r inside the standard triangle.

    In coordinates a = (x - y)/sqrt2, b = (x + y)/sqrt2 the arc is the graph
    b = c a^2 + d over an interval; the nearest point solves a cubic.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    s = 1.0 + Parabola(r).r
    u_lo, u_hi = _arc_u_range(r)
    c = 1.0 / (_SQRT2 * s)
    d = s / (2.0 * _SQRT2)
    a_lo = s * (2.0 * u_lo - 1.0) / _SQRT2
    a_hi = s * (2.0 * u_hi - 1.0) / _SQRT2

    a0 = (pts[:, 0] - pts[:, 1]) / _SQRT2
    b0 = (pts[:, 0] + pts[:, 1]) / _SQRT2
    # d/da [(a - a0)^2 + (c a^2 + d - b0)^2] / 2 = 2c^2 a^3 + (1 + 2c(d - b0)) a - a0
    k = 2.0 * c * c
    roots = _real_cubic_roots((1.0 + 2.0 * c * (d - b0)) / k, -a0 / k)
    for _ in range(2):  # Newton polish
        f = k * roots**3 + (1.0 + 2.0 * c * (d - b0))[:, None] * roots - a0[:, None]
        fp = 3.0 * k * roots**2 + (1.0 + 2.0 * c * (d - b0))[:, None]
        step = np.where(fp != 0, f / np.where(fp != 0, fp, 1.0), 0.0)
        roots = roots - np.nan_to_num(step)
    cand = np.concatenate(
        [np.clip(roots, a_lo, a_hi), np.full((len(pts), 1), a_lo), np.full((len(pts), 1), a_hi)],
        axis=1,
    )
    da = cand - a0[:, None]
    db = c * cand * cand + d - b0[:, None]
    dist2 = np.where(np.isnan(cand), np.inf, da * da + db * db)
    return np.sqrt(dist2.min(axis=1))


def _point_segment_distances(pts: np.ndarray, seg_a: np.ndarray, seg_b: np.ndarray) -> np.ndarray:
    """Distance from every point to the nearest of the given segments."""
    best = np.full(len(pts), np.inf)
    for a, b in zip(seg_a, seg_b):
        ab = b - a
        denom = float(ab @ ab)
        if denom == 0:
            t = np.zeros(len(pts))
        else:
            t = np.clip((pts - a) @ ab / denom, 0.0, 1.0)
        proj = a + t[:, None] * ab
        np.minimum(best, np.hypot(*(pts - proj).T), out=best)
    return best


def _sample_polyline(vertices: np.ndarray, step: float) -> np.ndarray:
    pieces = [vertices[:1]]
    for a, b in zip(vertices[:-1], vertices[1:]):
        m = max(1, int(math.ceil(np.hypot(*(b - a)) / step)))
        t = np.arange(1, m + 1) / m
        pieces.append(a + t[:, None] * (b - a))
    return np.concatenate(pieces)


def hausdorff_distance_to_parabola(
    chain: Iterable,
    T: Triangle | None = None,
    r: float = 0.0,
    samples: int = DEFAULT_ARC_SAMPLES,
) -> float:
    """Hausdorff distance between the chain polyline p0 -> chain -> p2 and the
    arc of the parabola with parameter r.

    Both are measured in the standard position of ``T``. The arc is sampled
    at ``samples`` parameter values and measured against the exact polyline;
    the polyline is sampled at a comparable step and measured against the
    exact arc. Each one-sided term is a sampled maximum of a 1-Lipschitz
    function, so the error is at most half the sampling step (about
    0.6 / samples); near smooth maxima it is second order in the step.
    """
    if T is None:
        T = standard_triangle()
    if not isinstance(T, Triangle):
        raise GeometryError("a triangle is required")
    pts = np.asarray([tuple(p) for p in chain], dtype=float).reshape(-1, 2)
    pts = map_to_standard(T).apply(pts) if len(pts) else pts
    if len(pts):
        pts = pts[np.lexsort((-pts[:, 1], pts[:, 0]))]
    poly = np.concatenate([[[0.0, 1.0]], pts, [[1.0, 0.0]]])

    u_lo, u_hi = _arc_u_range(r)
    u = np.linspace(u_lo, u_hi, samples)
    arc = parabola_points(Parabola(r), u)
    arc_to_poly = _point_segment_distances(arc, poly[:-1], poly[1:]).max()

    arc_len = float(np.hypot(*np.diff(arc, axis=0).T).sum())
    step = max(arc_len / samples, 1e-9)
    poly_to_arc = distance_to_arc(_sample_polyline(poly, step), r).max()
    return float(max(arc_to_poly, poly_to_arc))
