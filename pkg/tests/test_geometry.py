import math

import numpy as np
import pytest

from cfselect import (
    AlphaSector,
    Channel,
    CoeffVector,
    RingId,
    cell_of,
    cells_in_sector,
    largest_inscribed_axis_square,
    line_intersection,
    region_of_vector,
)
from cfselect.errors import InvalidInputError
from cfselect.geometry import ConvexCell, HalfPlane, Line2D, polygon_area
from cfselect.rings import RingElement, quantize_coords

ZI = RingId.GAUSSIAN


def make_polygon(vertices):
    """ConvexCell from CCW vertices (half-planes derived from the edges)."""
    v = np.asarray(vertices, dtype=float)
    planes = []
    n = len(v)
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        e = b - a
        nx, ny = e[1], -e[0]  # outward for CCW
        planes.append(HalfPlane.make(nx, ny, nx * a[0] + ny * a[1]))
    return ConvexCell(vertices=v, halfplanes=tuple(planes))


def random_convex_polygon(rng, nmax=9, scale=1.0):
    pts = rng.uniform(-scale, scale, (int(rng.integers(4, nmax + 1)), 2))
    hull = _hull(pts)
    while len(hull) < 3:
        pts = rng.uniform(-scale, scale, (8, 2))
        hull = _hull(pts)
    return make_polygon(hull)


def _hull(points):
    pts = sorted(map(tuple, points))

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return np.array(lower[:-1] + upper[:-1])


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def grid_width_oracle(cell, coarse=1e-2, fine=1e-4):
    """Largest centered axis square via brute placement search.

    The center objective min_i (c_i - n_i . m) / r_i is concave, so a
    coarse argmax refined locally at the fine step matches a full
    fine-grid scan."""
    planes = cell.halfplanes
    A = np.array([[hp.nx, hp.ny] for hp in planes])
    b = np.array([hp.c for hp in planes])
    r = np.abs(A).sum(axis=1)

    def width_at(mx, my):
        vals = (b - A[:, 0] * mx[..., None] - A[:, 1] * my[..., None]) / r
        return 2.0 * vals.min(axis=-1)

    xmin, ymin = cell.vertices.min(axis=0)
    xmax, ymax = cell.vertices.max(axis=0)

    def scan(x0, x1, y0, y1, step):
        xs = np.arange(x0, x1 + step, step)
        ys = np.arange(y0, y1 + step, step)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        w = width_at(X, Y)
        j = np.unravel_index(np.argmax(w), w.shape)
        return float(w[j]), float(X[j]), float(Y[j])

    w, mx, my = scan(xmin, xmax, ymin, ymax, coarse)
    w, _, _ = scan(mx - 2 * coarse, mx + 2 * coarse, my - 2 * coarse, my + 2 * coarse, fine)
    return max(w, 0.0)


# ---------------------------------------------------------------------------


def test_cell_of_unit_square():
    cell = cell_of(ZI, 1.0, RingElement(0, 0, ZI))
    got = {(round(x, 9), round(y, 9)) for x, y in cell.vertices}
    assert got == {(0.5, 0.5), (0.5, -0.5), (-0.5, 0.5), (-0.5, -0.5)}
    assert cell.edge_count == 4


def test_cell_of_rotated_square():
    h = (1 + 1j) / math.sqrt(2)
    cell = cell_of(ZI, h, RingElement(0, 0, ZI))
    # unit square rotated by -45 degrees: vertices on the axes
    r = math.sqrt(2) / 2
    got = sorted((round(x, 9), round(y, 9)) for x, y in cell.vertices)
    assert got == sorted(
        [(r, 0.0), (0.0, r), (-r, 0.0), (0.0, -r)]
    )


def test_cell_of_zero_gain_rejected(ring):
    with pytest.raises(InvalidInputError):
        cell_of(ring, 0.0, RingElement(0, 0, ring))


def test_cell_membership_random(ring):
    rng = np.random.default_rng(0)
    for _ in range(25):
        h = complex(*rng.uniform(-2, 2, 2))
        if abs(h) < 0.2:
            continue
        a = RingElement(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)), ring)
        cell = cell_of(ring, h, a)
        lo = cell.vertices.min(axis=0)
        hi = cell.vertices.max(axis=0)
        inside = []
        while len(inside) < 100:
            p = rng.uniform(lo, hi)
            if cell.contains(p[None, :], tol=-1e-9 / abs(h))[0]:
                inside.append(p)
        alphas = np.array([complex(p[0], p[1]) for p in inside])
        coords = quantize_coords(ring, alphas[:, None] * h)
        assert np.all(coords[:, 0, 0] == a.c1) and np.all(coords[:, 0, 1] == a.c2)
        # points nudged outward across each edge must not map to a
        verts = cell.vertices
        n = len(verts)
        for i in range(n):
            seg = verts[(i + 1) % n] - verts[i]
            mids = verts[i] + seg * np.linspace(0.15, 0.85, 20)[:, None]
            nrm = np.array([seg[1], -seg[0]])  # outward for CCW vertex order
            nrm = nrm / np.hypot(*nrm)
            out = mids + nrm * 1e-6
            oc = quantize_coords(ring, (out[:, 0] + 1j * out[:, 1])[:, None] * h)
            assert not np.any((oc[:, 0, 0] == a.c1) & (oc[:, 0, 1] == a.c2))


def test_line_intersection_cases():
    x_axis = Line2D.make(0.0, 1.0, 0.0)
    y_axis = Line2D.make(1.0, 0.0, 0.0)
    assert line_intersection(x_axis, y_axis) == 0j
    assert line_intersection(x_axis, Line2D.make(0.0, 2.0, 3.0)) is None
    rng = np.random.default_rng(1)
    for _ in range(200):
        l1 = Line2D.make(*rng.uniform(-1, 1, 2), rng.uniform(-2, 2))
        l2 = Line2D.make(*rng.uniform(-1, 1, 2), rng.uniform(-2, 2))
        p = line_intersection(l1, l2)
        if p is None:
            continue
        assert abs(l1.nx * p.real + l1.ny * p.imag - l1.c) < 1e-9
        assert abs(l2.nx * p.real + l2.ny * p.imag - l2.c) < 1e-9


def test_cells_in_sector_quarter_disc_example():
    found = cells_in_sector(ZI, 1.0, AlphaSector(radius=1.0, phase_hi=math.pi / 2))
    centers = {(e.c1, e.c2) for e, _ in found}
    assert {(0, 0), (1, 0), (0, 1), (1, 1)} <= centers


def test_cells_in_sector_tiny_radius():
    found = cells_in_sector(ZI, 1.0, AlphaSector(radius=0.1, phase_hi=math.pi / 2))
    centers = {(e.c1, e.c2) for e, _ in found}
    assert centers == {(0, 0)}


def test_cells_in_sector_count_scales_with_snr(ring):
    rng = np.random.default_rng(2)
    phase = math.pi / 2 if ring is RingId.GAUSSIAN else math.pi / 3
    counts = []
    for snr in (10.0, 100.0, 1000.0):
        tot = 0
        n = 40
        rng2 = np.random.default_rng(2)
        for _ in range(n):
            h = complex(*(rng2.standard_normal(2) / math.sqrt(2)))
            tot += len(cells_in_sector(ring, h, AlphaSector(radius=math.sqrt(snr), phase_hi=phase)))
        counts.append(tot / n)
    slope = np.polyfit(np.log10([10, 100, 1000]), np.log10(counts), 1)[0]
    assert abs(slope - 1.0) <= 0.15


def test_region_of_vector_single_user():
    ch = Channel(np.array([1.0 + 0j]), snr=100.0)
    reg = region_of_vector(ZI, ch, CoeffVector(np.array([[1, 0]]), ZI))
    got = {(round(x, 9), round(y, 9)) for x, y in reg.vertices}
    assert got == {(1.5, 0.5), (1.5, -0.5), (0.5, 0.5), (0.5, -0.5)}


def test_region_of_vector_fig2_octagon():
    h = np.array([1.0 + 0j, (1 + 1j) / math.sqrt(2)])
    ch = Channel(h, snr=1000.0)
    a = CoeffVector(np.array([[2, 2], [0, 3]]), ZI)
    reg = region_of_vector(ZI, ch, a, sector=AlphaSector(radius=math.sqrt(1000), phase_hi=math.pi / 2))
    assert reg is not None and reg.edge_count == 8
    centroid = reg.vertices.mean(axis=0)
    got = quantize_coords(ZI, complex(*centroid) * h)
    assert np.array_equal(got, a.coords)
    # convexity: all turns the same way
    v = reg.vertices
    crosses = [
        _cross(v[i], v[(i + 1) % len(v)], v[(i + 2) % len(v)]) for i in range(len(v))
    ]
    assert all(c > 0 for c in crosses)


def test_region_of_vector_inconsistent_vector():
    ch = Channel(np.array([1.0 + 0j, 1.0 + 0j]), snr=100.0)
    reg = region_of_vector(ZI, ch, CoeffVector(np.array([[1, 0], [100, 0]]), ZI))
    assert reg is None


def test_region_area_bound(ring):
    rng = np.random.default_rng(3)
    from cfselect.rings import spec_of

    area0 = spec_of(ring).fundamental_area
    checked = 0
    while checked < 40:
        L = int(rng.integers(2, 5))
        h = (rng.standard_normal(L) + 1j * rng.standard_normal(L)) / math.sqrt(2)
        if np.min(np.abs(h)) < 0.1:
            continue
        ch = Channel(h, snr=100.0)
        alpha = complex(*rng.uniform(0.2, 3, 2))
        coords = quantize_coords(ring, alpha * ch.h)
        if not coords.any():
            continue
        reg = region_of_vector(ring, ch, CoeffVector(coords, ring))
        if reg is None:
            continue
        hmax2 = float(np.max(np.abs(h)) ** 2)
        assert polygon_area(reg.vertices) <= area0 / hmax2 + 1e-9
        checked += 1


def test_inscribed_square_unit_square():
    cell = make_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    w, center = largest_inscribed_axis_square(cell)
    assert abs(w - 1.0) < 1e-9
    assert abs(center - (0.5 + 0.5j)) < 1e-6


def test_inscribed_square_diamond():
    r = 1 / math.sqrt(2)
    cell = make_polygon([(r, 0), (0, r), (-r, 0), (0, -r)])
    w, _ = largest_inscribed_axis_square(cell)
    assert abs(w - 1 / math.sqrt(2)) < 1e-9


def test_inscribed_square_hexagon_vs_oracle():
    hexagon = make_polygon(
        [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)) for k in range(6)]
    )
    w, _ = largest_inscribed_axis_square(hexagon)
    assert abs(w - grid_width_oracle(hexagon)) < 1e-3


def test_inscribed_square_random_polygons():
    rng = np.random.default_rng(4)
    for _ in range(25):
        cell = random_convex_polygon(rng)
        w, center = largest_inscribed_axis_square(cell)
        assert abs(w - grid_width_oracle(cell)) < 1e-3
        if w > 0:
            corners = np.array(
                [
                    [center.real + sx * w / 2, center.imag + sy * w / 2]
                    for sx in (1, -1)
                    for sy in (1, -1)
                ]
            )
            assert cell.contains(corners, tol=1e-9).all()


def test_inscribed_square_degenerate():
    sliver = make_polygon([(0, 0), (1, 0), (1, 1e-14)])
    w, _ = largest_inscribed_axis_square(sliver)
    assert w < 1e-12
