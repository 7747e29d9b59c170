"""Geometry of the scaling-factor plane.

A candidate coefficient a_l for user l is decided by which quantization
cell the product alpha * h_l falls into; in the alpha plane that cell is
a square (Z[i]) or hexagon (Z[w]) centered at embedding(a_l) / h_l,
scaled by 1/|h_l| and rotated by -arg(h_l).  This module provides those
cells, line/half-plane primitives, convex clipping, and the largest
axis-aligned inscribed square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .rings import (
    RingElement,
    RingId,
    covering_radius,
    embed_coords,
    spec_of,
)

_MERGE_EPS = 1e-9  # vertices closer than this are snapped together


@dataclass(frozen=True)
class Line2D:
    """Points x with nx*x[0] + ny*x[1] = c; (nx, ny) is unit length."""

    nx: float
    ny: float
    c: float

    @classmethod
    def make(cls, nx: float, ny: float, c: float) -> "Line2D":
        norm = math.hypot(nx, ny)
        if norm == 0:
            raise InvalidInputError("line normal must be nonzero")
        return cls(nx / norm, ny / norm, c / norm)


@dataclass(frozen=True)
class HalfPlane:
    """Points x with nx*x[0] + ny*x[1] <= c; (nx, ny) is unit length."""

    nx: float
    ny: float
    c: float

    @classmethod
    def make(cls, nx: float, ny: float, c: float) -> "HalfPlane":
        norm = math.hypot(nx, ny)
        if norm == 0:
            raise InvalidInputError("half-plane normal must be nonzero")
        return cls(nx / norm, ny / norm, c / norm)

    @property
    def boundary(self) -> Line2D:
        return Line2D(self.nx, self.ny, self.c)


@dataclass(frozen=True)
class ConvexCell:
    """Convex polygon: counterclockwise vertices plus bounding half-planes."""

    vertices: np.ndarray  # (g, 2) float
    halfplanes: tuple[HalfPlane, ...]

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def edge_count(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def area(self) -> float:
        return polygon_area(self.vertices)

    def contains(self, points, tol: float = 1e-9):
        """Boolean mask: point inside every half-plane within ``tol``."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        ok = np.ones(pts.shape[0], dtype=bool)
        for hp in self.halfplanes:
            ok &= pts[:, 0] * hp.nx + pts[:, 1] * hp.ny <= hp.c + tol
        return ok


@dataclass(frozen=True)
class AlphaSector:
    """Scaling-factor search range: radius bound plus a phase wedge."""

    radius: float
    phase_hi: float
    phase_lo: float = 0.0

    def __post_init__(self):
        if not (self.radius > 0 and 0 < self.phase_hi <= math.pi / 2):
            raise InvalidInputError("sector requires radius>0, 0<phase_hi<=pi/2")
        if self.phase_lo != 0.0:
            raise InvalidInputError("only phase_lo=0 sectors are supported")

    def bounding_box(self):
        """(xmin, xmax, ymin, ymax) of the wedge."""
        return 0.0, self.radius, 0.0, self.radius * math.sin(self.phase_hi)

    def contains(self, z: complex, tol: float = 1e-12) -> bool:
        r = abs(z)
        if r <= tol:
            return True
        ang = math.atan2(z.imag, z.real)
        return (r <= self.radius + tol) and (-tol <= ang <= self.phase_hi + tol)

    def distance(self, x, y):
        """Euclidean distance from points to the (convex) wedge, vectorized."""
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        ang = np.arctan2(y, x)
        r = np.hypot(x, y)
        inside_wedge = (ang >= 0) & (ang <= self.phase_hi)
        d_in = np.maximum(0.0, r - self.radius)
        d0 = _segment_distance(x, y, 0.0, 0.0, self.radius, 0.0)
        ex = self.radius * math.cos(self.phase_hi)
        ey = self.radius * math.sin(self.phase_hi)
        d1 = _segment_distance(x, y, 0.0, 0.0, ex, ey)
        return np.where(inside_wedge, d_in, np.minimum(d0, d1))


def _segment_distance(px, py, ax, ay, bx, by):
    vx, vy = bx - ax, by - ay
    denom = vx * vx + vy * vy
    t = np.clip(((px - ax) * vx + (py - ay) * vy) / denom, 0.0, 1.0)
    return np.hypot(px - (ax + t * vx), py - (ay + t * vy))


def polygon_area(vertices) -> float:
    v = np.asarray(vertices, dtype=np.float64)
    if v.shape[0] < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _snap_vertices(vertices: np.ndarray) -> np.ndarray:
    """Merge consecutive vertices closer than the snapping tolerance."""
    if vertices.shape[0] == 0:
        return vertices
    keep = []
    for p in vertices:
        if not keep or np.hypot(*(p - keep[-1])) > _MERGE_EPS:
            keep.append(p)
    if len(keep) > 1 and np.hypot(*(keep[0] - keep[-1])) <= _MERGE_EPS:
        keep.pop()
    return np.asarray(keep) if keep else np.empty((0, 2))


def clip_polygon(vertices: np.ndarray, hp: HalfPlane) -> np.ndarray:
    """Clip a convex polygon by one half-plane (Sutherland-Hodgman step)."""
    n = vertices.shape[0]
    if n == 0:
        return vertices
    d = vertices[:, 0] * hp.nx + vertices[:, 1] * hp.ny - hp.c
    scale = max(1.0, float(np.abs(vertices).max()))
    tol = 1e-12 * scale
    inside = d <= tol
    if inside.all():
        return vertices
    if not inside.any():
        return np.empty((0, 2))
    out = []
    for i in range(n):
        j = (i + 1) % n
        if inside[i]:
            out.append(vertices[i])
        if inside[i] != inside[j]:
            t = d[i] / (d[i] - d[j])
            out.append(vertices[i] + t * (vertices[j] - vertices[i]))
    return _snap_vertices(np.asarray(out) if out else np.empty((0, 2)))


def line_intersection(l1: Line2D, l2: Line2D):
    """Crossing point of two lines as a complex number, or None if parallel."""
    det = l1.nx * l2.ny - l1.ny * l2.nx
    if abs(det) <= 1e-12:
        return None
    x = (l1.c * l2.ny - l1.ny * l2.c) / det
    y = (l1.nx * l2.c - l1.c * l2.nx) / det
    return complex(x, y)


def cell_of(ring: RingId, h_l: complex, a_l: RingElement) -> ConvexCell:
    """Quantization cell of a_l in the alpha plane for channel gain h_l."""
    h_l = complex(h_l)
    if h_l == 0:
        raise InvalidInputError("channel gain must be nonzero")
    spec = spec_of(ring)
    a_emb = a_l.embedding
    center = a_emb / h_l
    verts = np.array([center + off / h_l for off in spec.cell_vertex_offsets])
    verts = verts[np.argsort(np.angle(verts - center))]
    planes = []
    for u in spec.units:
        w = h_l * u.embedding.conjugate()
        # Re((alpha h - a) conj(d)) <= 1/2
        planes.append(
            HalfPlane.make(w.real, -w.imag, 0.5 + (a_emb * u.embedding.conjugate()).real)
        )
    return ConvexCell(
        vertices=np.stack([verts.real, verts.imag], axis=1),
        halfplanes=tuple(planes),
    )


def cells_in_sector(ring: RingId, h_l: complex, sector: AlphaSector):
    """All (a_l, cell) pairs whose cell overlaps the sector.

    Lattice points are enumerated over the sector's bounding disk in the
    transformed basis; overlap is tested conservatively via the cell
    circumradius, so boundary-touching neighbors are included.
    """
    h_l = complex(h_l)
    if h_l == 0:
        raise InvalidInputError("channel gain must be nonzero")
    s = abs(h_l)
    rcov = covering_radius(ring)
    rho = sector.radius * s + rcov + 1.0
    if ring is RingId.GAUSSIAN:
        b1 = b2 = int(math.ceil(rho))
    else:
        b1 = int(math.ceil(rho * (1.0 + 1.0 / math.sqrt(3.0))))
        b2 = int(math.ceil(2.0 * rho / math.sqrt(3.0)))
    c1, c2 = np.meshgrid(np.arange(-b1, b1 + 1), np.arange(-b2, b2 + 1), indexing="ij")
    coords = np.stack([c1.ravel(), c2.ravel()], axis=1)
    centers = embed_coords(ring, coords) / h_l
    keep = sector.distance(centers.real, centers.imag) <= rcov / s + 1e-12
    out = []
    for c1k, c2k in coords[keep]:
        elem = RingElement(int(c1k), int(c2k), ring)
        out.append((elem, cell_of(ring, h_l, elem)))
    return out


def region_of_vector(ring: RingId, ch, a, sector: AlphaSector | None = None):
    """Intersection of the per-user cells of a coefficient vector.

    Returns the convex region of scaling factors that quantize to ``a``,
    optionally clipped to the sector's bounding box, or None when empty.
    """
    if a.is_zero:
        raise InvalidInputError("coefficient vector must be nonzero")
    if a.nusers != ch.nusers:
        raise InvalidInputError("length mismatch between channel and vector")
    cells = [cell_of(ring, ch.h[l], e) for l, e in enumerate(a.elements)]
    poly = cells[0].vertices
    planes = list(cells[0].halfplanes)
    for cell in cells[1:]:
        for hp in cell.halfplanes:
            poly = clip_polygon(poly, hp)
            planes.append(hp)
            if poly.shape[0] < 3:
                return None
    if sector is not None:
        xmin, xmax, ymin, ymax = sector.bounding_box()
        for hp in (
            HalfPlane.make(1.0, 0.0, xmax),
            HalfPlane.make(-1.0, 0.0, -xmin),
            HalfPlane.make(0.0, 1.0, ymax),
            HalfPlane.make(0.0, -1.0, -ymin),
        ):
            poly = clip_polygon(poly, hp)
            planes.append(hp)
            if poly.shape[0] < 3:
                return None
    if polygon_area(poly) <= 0.0:
        return None
    return ConvexCell(vertices=poly, halfplanes=tuple(planes))


def largest_inscribed_axis_square(cell: ConvexCell):
    """Width and center of the largest axis-aligned square inside the cell.

    Solved by bisection on the width: a square of width d fits iff the cell
    eroded by d/2 under the L-infinity ball (each half-plane offset inward
    by (|nx|+|ny|) d/2) is nonempty.
    """
    poly0 = cell.vertices
    if poly0.shape[0] < 3:
        return 0.0, complex(*poly0.mean(axis=0)) if poly0.size else 0j
    xmin, ymin = poly0.min(axis=0)
    xmax, ymax = poly0.max(axis=0)
    lo, hi = 0.0, min(xmax - xmin, ymax - ymin)
    center = poly0.mean(axis=0)
    # a plane whose slack to the polygon exceeds the largest erosion offset
    # never cuts the (shrinking) feasible set; refilter as hi tightens
    slack = np.array(
        [
            hp.c - float(np.max(poly0[:, 0] * hp.nx + poly0[:, 1] * hp.ny))
            for hp in cell.halfplanes
        ]
    )
    erosion = np.array([abs(hp.nx) + abs(hp.ny) for hp in cell.halfplanes])
    planes = list(cell.halfplanes)

    def active(bound):
        keep = slack <= erosion * bound / 2.0 + 1e-9
        return [(planes[i], erosion[i]) for i in np.nonzero(keep)[0]]

    def feasible(d, act):
        poly = poly0
        for hp, r in act:
            poly = clip_polygon(poly, HalfPlane(hp.nx, hp.ny, hp.c - r * d / 2.0))
            if poly.shape[0] == 0:
                return None
        return poly

    for _ in range(48):
        mid = 0.5 * (lo + hi)
        poly = feasible(mid, active(hi))
        if poly is not None and poly.shape[0] > 0:
            lo = mid
            center = poly.mean(axis=0)
        else:
            hi = mid
    return lo, complex(center[0], center[1])
