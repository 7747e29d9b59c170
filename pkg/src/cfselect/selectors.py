"""Coefficient-selection algorithms.

Five selectors share one contract: given a channel and a ring they return
the (near-)best nonzero integer coefficient vector together with its rate.

* ``exhaustive_select`` - brute force over all vectors inside the norm
  bound sqrt(1 + SNR ||h||^2); the correctness oracle.
* ``vertex_select`` - exact search driven by the alpha-plane geometry:
  candidate scaling factors are the per-user cell vertices plus all
  pairwise crossings of cell-edge lines from distinct users, each expanded
  through the full-direction quantizer.
* ``midpoint_select`` - vertices and edge midpoints of the per-user cells
  only (no cross-user crossings); cheaper bound per component, not
  guaranteed optimal.
* ``lll_select`` - complex lattice-reduction baseline on the Cholesky
  factor of the rate quadratic form.
* ``linear_select`` - online uniform sampling of the scaling factor with a
  step size drawn from an offline threshold table and an early-exit noise
  bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BudgetExceededError, InternalError, InvalidInputError
from .flops import (
    FlopCounter,
    charge_crossing,
    charge_noise_eval,
    charge_quantize,
    charge_rate_eval,
    charge_vertex,
)
from .geometry import AlphaSector
from .rate import Channel, CoeffVector, mmse_alpha, rate_of_pair
from .rings import RingId, embed_coords, quantize_coords, spec_of

DEFAULT_EX1_BUDGET = 1.0e9

_EIS_VERTEX_OFFSETS = np.array(
    [(2, 1), (1, -1), (-1, 1), (-2, -1), (1, 2), (-1, -2)], dtype=np.int64
)  # cell-vertex positions in 3x basis coordinates, relative to 3*center


@dataclass(frozen=True)
class SelectionResult:
    coeffs: CoeffVector
    rate: float
    alpha: complex
    candidates_examined: int
    flops: int | None = None


@dataclass(frozen=True)
class CandidateSet:
    """Representative scaling factors from the cell geometry.

    ``vertex_points`` holds the deduplicated vertices of every enumerated
    per-user cell; ``crossing_points`` the pairwise crossings of edge lines
    from distinct users, restricted to the bounding box of the search
    sector.
    """

    vertex_points: np.ndarray
    crossing_points: np.ndarray

    @property
    def all_points(self) -> np.ndarray:
        return np.concatenate([self.vertex_points, self.crossing_points])


def sector_for(ch: Channel, ring: RingId) -> AlphaSector:
    """Search range for the scaling factor: radius sqrt(SNR), one unit wedge."""
    return AlphaSector(radius=math.sqrt(ch.snr), phase_hi=spec_of(ring).phase_sector)


def _require_nonzero_gains(ch: Channel):
    if np.any(ch.h == 0):
        raise InvalidInputError("all channel gains must be nonzero")


# ---------------------------------------------------------------------------
# candidate generation (cell vertices + edge-line crossings)
# ---------------------------------------------------------------------------


def _enumerate_cell_centers(ring: RingId, h_l: complex, sector: AlphaSector):
    """Integer coordinates of lattice points whose alpha-plane position lies
    inside the sector (inclusive at both phase boundaries)."""
    s = abs(h_l)
    rho = sector.radius * s + 1.0
    if ring is RingId.GAUSSIAN:
        b1 = b2 = int(math.ceil(rho))
    else:
        b1 = int(math.ceil(rho * (1.0 + 1.0 / math.sqrt(3.0))))
        b2 = int(math.ceil(2.0 * rho / math.sqrt(3.0)))
    c1, c2 = np.meshgrid(np.arange(-b1, b1 + 1), np.arange(-b2, b2 + 1), indexing="ij")
    coords = np.stack([c1.ravel(), c2.ravel()], axis=1)
    centers = embed_coords(ring, coords) / h_l
    # +0.0 normalizes signed zeros; atan2(-0.0, -0.0) would reject the origin
    ang = np.arctan2(centers.imag + 0.0, centers.real + 0.0)
    keep = (
        (np.abs(centers) <= sector.radius * (1.0 + 1e-12))
        & (ang >= -1e-12)
        & (ang <= sector.phase_hi + 1e-12)
    )
    return coords[keep]


def _vertex_points_of(ring: RingId, h_l: complex, coords: np.ndarray) -> np.ndarray:
    """Deduplicated cell vertices, via exact integer keys per user."""
    m, n = coords[:, 0], coords[:, 1]
    if ring is RingId.GAUSSIAN:
        keys = np.concatenate(
            [
                np.stack([2 * m + s1, 2 * n + s2], axis=1)
                for s1 in (1, -1)
                for s2 in (1, -1)
            ]
        )
        keys = _unique_pairs(keys)
        return (keys[:, 0] + 1j * keys[:, 1]) / (2.0 * h_l)
    keys = np.concatenate(
        [np.stack([3 * m + k1, 3 * n + k2], axis=1) for k1, k2 in _EIS_VERTEX_OFFSETS]
    )
    keys = _unique_pairs(keys)
    emb = (keys[:, 0] - 0.5 * keys[:, 1]) + 1j * (math.sqrt(3.0) / 2.0) * keys[:, 1]
    return emb / (3.0 * h_l)


def _edge_line_families(ring: RingId, h_l: complex, coords: np.ndarray):
    """Edge lines of the enumerated cells, grouped by direction family.

    Each family is (w, offsets): the lines are Re(alpha * w) = o / 2 for
    every integer key o, with w = h_l * conj(direction).
    """
    m, n = coords[:, 0], coords[:, 1]
    if ring is RingId.GAUSSIAN:
        key_sets = [2 * m, 2 * n]
        dirs = [1 + 0j, 1j]
    else:
        key_sets = [2 * m - n, m + n, -m + 2 * n]
        dirs = [1 + 0j, 0.5 + 1j * (math.sqrt(3.0) / 2.0), complex(-0.5, math.sqrt(3.0) / 2.0)]
    fams = []
    for base, d in zip(key_sets, dirs):
        offs = np.unique(np.concatenate([base + 1, base - 1]))
        fams.append((h_l * d.conjugate(), offs))
    return fams


def _crossing_points(families, sector: AlphaSector, counter=None) -> np.ndarray:
    """Pairwise crossings of edge lines from distinct users, kept inside the
    sector's bounding box."""
    xmin, xmax, ymin, ymax = sector.bounding_box()
    eps = 1e-9 * max(xmax, ymax)
    pts = []
    nusers = len(families)
    computed = 0
    for i in range(nusers):
        for j in range(i + 1, nusers):
            for wi, oi in families[i]:
                for wj, oj in families[j]:
                    a1, b1 = wi.real, -wi.imag
                    a2, b2 = wj.real, -wj.imag
                    det = a1 * b2 - b1 * a2
                    if abs(det) <= 1e-12 * abs(wi) * abs(wj):
                        continue
                    c1, c2 = np.meshgrid(oi / 2.0, oj / 2.0, indexing="ij")
                    computed += c1.size
                    x = (c1 * b2 - b1 * c2) / det
                    y = (a1 * c2 - c1 * a2) / det
                    keep = (
                        (x >= xmin - eps)
                        & (x <= xmax + eps)
                        & (y >= ymin - eps)
                        & (y <= ymax + eps)
                    )
                    if keep.any():
                        pts.append(x[keep] + 1j * y[keep])
    charge_crossing(counter, computed)
    if not pts:
        return np.empty(0, dtype=np.complex128)
    return np.concatenate(pts)


def build_candidates(ch: Channel, ring: RingId, counter: FlopCounter | None = None) -> CandidateSet:
    """Representative scaling factors for the exact vertex search."""
    _require_nonzero_gains(ch)
    sector = sector_for(ch, ring)
    vertex_blocks = []
    families = []
    for h_l in ch.h:
        coords = _enumerate_cell_centers(ring, complex(h_l), sector)
        vertex_blocks.append(_vertex_points_of(ring, complex(h_l), coords))
        families.append(_edge_line_families(ring, complex(h_l), coords))
    vertices = np.concatenate(vertex_blocks)
    charge_vertex(counter, vertices.size)
    crossings = _crossing_points(families, sector, counter)
    return CandidateSet(vertex_points=vertices, crossing_points=crossings)


# ---------------------------------------------------------------------------
# shared candidate evaluation
# ---------------------------------------------------------------------------


def _unique_pairs(keys: np.ndarray) -> np.ndarray:
    """Unique (k1, k2) integer rows via single-int64 packing (order-free)."""
    packed = ((keys[:, 0].astype(np.int64) + (1 << 20)) << 21) | (
        keys[:, 1].astype(np.int64) + (1 << 20)
    )
    uniq = np.unique(packed)
    k1 = (uniq >> 21) - (1 << 20)
    k2 = (uniq & ((1 << 21) - 1)) - (1 << 20)
    return np.stack([k1, k2], axis=1)


def _unique_rows(coords: np.ndarray) -> np.ndarray:
    """Deduplicate int32 rows, returned in lexicographic order.

    Fast path packs each row into two big-endian int64 keys (valid while
    entries fit 12 bits, which holds for every supported SNR range) so the
    sort runs on scalars instead of row tuples.
    """
    if coords.shape[0] == 0:
        return coords
    if np.abs(coords).max() < 2047:
        w = coords.astype(np.int64) + 2048
        nkeys = (w.shape[1] + 4) // 5
        if w.shape[1] < 5 * nkeys:
            w = np.hstack([w, np.zeros((w.shape[0], 5 * nkeys - w.shape[1]), np.int64)])
        pw = 4096 ** np.arange(4, -1, -1, dtype=np.int64)
        keys = [w[:, 5 * i : 5 * i + 5] @ pw for i in range(nkeys)]
        order = np.lexsort(tuple(reversed(keys)))
        first = np.empty(order.shape[0], bool)
        first[0] = True
        first[1:] = False
        for k in keys:
            first[1:] |= np.diff(k[order]) != 0
        return coords[order[first]]
    return np.unique(coords, axis=0)


def _evaluate_candidates(ch: Channel, ring: RingId, alpha_points: np.ndarray, counter=None):
    """Expand representatives through the full-direction quantizer, dedupe
    exactly, and minimize the rate quadratic form.

    Returns (best coords (L,2), best quadratic form value, evaluations).
    """
    if alpha_points.size == 0:
        raise InternalError("empty candidate set")
    alpha_points = np.ascontiguousarray(alpha_points, dtype=np.complex128)
    h = ch.h
    nusers = ch.nusers
    coords = kernels.expand_reps(
        ring.code,
        np.ascontiguousarray(alpha_points.real),
        np.ascontiguousarray(alpha_points.imag),
        np.ascontiguousarray(h.real),
        np.ascontiguousarray(h.imag),
        1e-9,
    )
    charge_quantize(counter, nusers, n=alpha_points.size)
    unique = _unique_rows(coords)
    nonzero = unique.any(axis=1)
    unique = unique[nonzero]
    if unique.shape[0] == 0:
        raise InternalError("no nonzero candidate vectors")
    emb = embed_coords(ring, unique.reshape(-1, nusers, 2).astype(np.int64))
    hdot = emb @ np.conj(h)
    n2 = np.sum(emb.real**2 + emb.imag**2, axis=1)
    cfac = ch.snr / (1.0 + ch.snr * float(np.vdot(h, h).real))
    q = n2 - cfac * (hdot.real**2 + hdot.imag**2)
    n_eval = int(unique.shape[0])
    charge_rate_eval(counter, nusers, n=n_eval)
    jmin = int(np.argmin(q))  # first minimum = lexicographically smallest row
    best = unique[jmin].reshape(nusers, 2).astype(np.int64)
    return best, float(q[jmin]), n_eval


def _finish(ch, ring, coords, n_examined, counter) -> SelectionResult:
    vec = CoeffVector(coords, ring)
    rr = rate_of_pair(ch, vec)
    return SelectionResult(
        coeffs=vec,
        rate=rr.rate,
        alpha=rr.alpha,
        candidates_examined=n_examined,
        flops=counter.total_flops if counter is not None else None,
    )


# ---------------------------------------------------------------------------
# selectors
# ---------------------------------------------------------------------------


def exhaustive_select(
    ch: Channel,
    ring: RingId,
    budget: float = DEFAULT_EX1_BUDGET,
    counter: FlopCounter | None = None,
) -> SelectionResult:
    """Brute-force search over all nonzero vectors with norm below the
    classical bound, one representative per unit orbit."""
    nusers = ch.nusers
    hn2 = float(np.vdot(ch.h, ch.h).real)
    phi2 = 1.0 + ch.snr * hn2
    guard = nusers * phi2**nusers
    if guard > budget:
        raise BudgetExceededError(
            f"exhaustive search guard {guard:.3g} exceeds budget {budget:.3g}"
        )
    phi = math.sqrt(phi2)
    if ring is RingId.GAUSSIAN:
        b1 = b2 = int(math.ceil(phi))
    else:
        b1 = int(math.ceil(phi * (1.0 + 1.0 / math.sqrt(3.0))))
        b2 = int(math.ceil(2.0 * phi / math.sqrt(3.0)))
    c1, c2 = np.meshgrid(np.arange(-b1, b1 + 1), np.arange(-b2, b2 + 1), indexing="ij")
    coords = np.stack([c1.ravel(), c2.ravel()], axis=1)
    emb = embed_coords(ring, coords)
    n2 = emb.real**2 + emb.imag**2
    keep = n2 <= phi2
    coords, emb, n2 = coords[keep], emb[keep], n2[keep]
    order = np.lexsort((coords[:, 1], coords[:, 0], n2))
    coords, emb, n2 = coords[order], emb[order], n2[order]
    if ring is RingId.GAUSSIAN:
        cone = (coords[:, 0] > 0) & (coords[:, 1] >= 0)
    else:
        cone = (coords[:, 1] >= 0) & (coords[:, 0] > coords[:, 1])
    cfac = ch.snr / (1.0 + ch.snr * hn2)
    best_idx, _, evaluated = kernels.ex1_scan(
        np.ascontiguousarray(emb.real),
        np.ascontiguousarray(emb.imag),
        np.ascontiguousarray(n2),
        np.ascontiguousarray(cone),
        np.ascontiguousarray(ch.h.real),
        np.ascontiguousarray(ch.h.imag),
        cfac,
        phi2,
        nusers,
    )
    if best_idx[0] < 0:
        raise InternalError("exhaustive search found no nonzero vector")
    charge_rate_eval(counter, nusers, n=evaluated)
    out = coords[np.asarray(best_idx)]
    return _finish(ch, ring, out, evaluated, counter)


def vertex_select(ch: Channel, ring: RingId, counter: FlopCounter | None = None) -> SelectionResult:
    """Exact selection via cell vertices and cross-user edge crossings."""
    cs = build_candidates(ch, ring, counter)
    coords, _, n_eval = _evaluate_candidates(ch, ring, cs.all_points, counter)
    return _finish(ch, ring, coords, n_eval, counter)


def midpoint_select(ch: Channel, ring: RingId, counter: FlopCounter | None = None) -> SelectionResult:
    """Vertices plus edge midpoints of per-user cells (no cross-user
    crossings), with the per-component norm bound; not guaranteed optimal."""
    _require_nonzero_gains(ch)
    spec = spec_of(ring)
    phase_hi = spec.phase_sector
    phi = math.sqrt(1.0 + ch.snr * float(np.vdot(ch.h, ch.h).real))
    blocks = []
    for h_l in ch.h:
        h_l = complex(h_l)
        rho = phi + 1.0
        if ring is RingId.GAUSSIAN:
            b1 = b2 = int(math.ceil(rho))
        else:
            b1 = int(math.ceil(rho * (1.0 + 1.0 / math.sqrt(3.0))))
            b2 = int(math.ceil(2.0 * rho / math.sqrt(3.0)))
        g1, g2 = np.meshgrid(np.arange(-b1, b1 + 1), np.arange(-b2, b2 + 1), indexing="ij")
        coords = np.stack([g1.ravel(), g2.ravel()], axis=1)
        emb = embed_coords(ring, coords)
        centers = emb / h_l
        ang = np.arctan2(centers.imag + 0.0, centers.real + 0.0)
        keep = (
            (emb.real**2 + emb.imag**2 <= phi * phi)
            & (ang >= -1e-12)
            & (ang <= phase_hi + 1e-12)
        )
        m, n = coords[keep, 0], coords[keep, 1]
        if ring is RingId.GAUSSIAN:
            key_blocks = [
                np.stack([2 * m + s1, 2 * n + s2], axis=1)
                for s1 in (1, -1)
                for s2 in (1, -1)
            ]  # vertices (odd, odd)
            key_blocks += [
                np.stack([2 * m + s, 2 * n], axis=1) for s in (1, -1)
            ] + [np.stack([2 * m, 2 * n + s], axis=1) for s in (1, -1)]  # midpoints
            keys = _unique_pairs(np.concatenate(key_blocks))
            pts = (keys[:, 0] + 1j * keys[:, 1]) / (2.0 * h_l)
        else:
            key_blocks = [
                np.stack([6 * m + 2 * k1, 6 * n + 2 * k2], axis=1)
                for k1, k2 in _EIS_VERTEX_OFFSETS
            ]
            key_blocks += [
                np.stack([6 * m + 3 * d1, 6 * n + 3 * d2], axis=1)
                for d1, d2 in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1))
            ]
            keys = _unique_pairs(np.concatenate(key_blocks))
            emb6 = (keys[:, 0] - 0.5 * keys[:, 1]) + 1j * (math.sqrt(3.0) / 2.0) * keys[:, 1]
            pts = emb6 / (6.0 * h_l)
        blocks.append(pts)
    points = np.concatenate(blocks)
    charge_vertex(counter, points.size)
    coords, _, n_eval = _evaluate_candidates(ch, ring, points, counter)
    return _finish(ch, ring, coords, n_eval, counter)


def _clll_reduce(basis: np.ndarray, ring: RingId, delta: float, counter=None):
    """Complex LLL reduction of a column basis over the given coefficient
    ring; returns (reduced_basis, transform) with the transform tracked in
    exact ring coordinates (a list-of-lists of RingElement)."""
    from .rings import RingElement, quantize

    B = np.array(basis, dtype=np.complex128, order="C")
    n = B.shape[1]
    T = [[RingElement(1 if i == j else 0, 0, ring) for j in range(n)] for i in range(n)]

    def gso():
        Q = np.zeros_like(B)
        mu = np.zeros((n, n), dtype=np.complex128)
        q2 = np.zeros(n)
        for j in range(n):
            v = B[:, j].copy()
            for k in range(j):
                mu[j, k] = np.vdot(Q[:, k], B[:, j]) / q2[k]
                v -= mu[j, k] * Q[:, k]
            Q[:, j] = v
            q2[j] = float(np.vdot(v, v).real)
        if counter is not None:
            pairs = n * (n - 1) // 2
            counter.add(
                cmul=pairs * 2 * n + n * n,
                cadd=pairs * (2 * n - 1) + n * (n - 1),
            )
        return mu, q2

    if n == 1:
        return B, T
    mu, q2 = gso()
    k = 1
    iters = 0
    cap = int(1e4 * n * n)
    while k < n:
        iters += 1
        if iters > cap:
            raise InternalError("lattice reduction failed to terminate")
        changed = False
        for j in range(k - 1, -1, -1):
            r = quantize(ring, complex(mu[k, j]))
            if not r.is_zero:
                B[:, k] -= r.embedding * B[:, j]
                for i in range(n):
                    rj = r * T[i][j]
                    T[i][k] = RingElement(T[i][k].c1 - rj.c1, T[i][k].c2 - rj.c2, ring)
                changed = True
                if counter is not None:
                    counter.add(cmul=n, cadd=n)
        if changed:
            mu, q2 = gso()
        if q2[k] >= (delta - abs(mu[k, k - 1]) ** 2) * q2[k - 1]:
            k += 1
        else:
            B[:, [k - 1, k]] = B[:, [k, k - 1]]
            for i in range(n):
                T[i][k - 1], T[i][k] = T[i][k], T[i][k - 1]
            mu, q2 = gso()
            k = max(1, k - 1)
    return B, T


def lll_select(
    ch: Channel,
    ring: RingId,
    delta: float = 0.99,
    counter: FlopCounter | None = None,
) -> SelectionResult:
    """Lattice-reduction baseline: complex LLL on the Cholesky factor.

    Size reduction rounds in the coefficient ring (Gaussian or Eisenstein),
    so the same loop serves both lattices.  The returned vector is the
    shortest column of the reduced basis mapped back through the
    accumulated unimodular transform; approximation guarantee only.
    """
    from .rate import gram_matrix

    nusers = ch.nusers
    _, chol = gram_matrix(ch)
    if nusers == 1:
        return _finish(ch, ring, np.array([[1, 0]]), 1, counter)
    B, T = _clll_reduce(chol.conj().T, ring, delta, counter)
    norms = np.sum(np.abs(B) ** 2, axis=0)
    if counter is not None:
        counter.add(cmul=nusers * nusers, cadd=nusers * (nusers - 1))
    jmin = int(np.argmin(norms))
    coords = np.array([[T[i][jmin].c1, T[i][jmin].c2] for i in range(nusers)])
    if not coords.any():
        raise InternalError("lattice reduction produced the zero vector")
    return _finish(ch, ring, coords, nusers, counter)


def _sample_grid(ch: Channel, ring: RingId, gamma: float):
    """Sorted sample multipliers (k1, k2) and the step size for the linear
    search; the ascending-modulus order does not depend on the step size."""
    spec = spec_of(ring)
    hmax = float(np.max(np.abs(ch.h)))
    delta = gamma * math.sqrt(spec.fundamental_area) / hmax
    kmax = int(math.floor(math.sqrt(ch.snr) / delta))
    if kmax < 1:
        return None, delta
    k1, k2 = np.meshgrid(np.arange(1, kmax + 1), np.arange(0, kmax + 1), indexing="ij")
    k1, k2 = k1.ravel(), k2.ravel()
    r2 = k1 * k1 + k2 * k2
    keep = r2 <= kmax * kmax
    if ring is RingId.EISENSTEIN:
        keep &= k2 * k2 < 3 * k1 * k1
    k1, k2, r2 = k1[keep], k2[keep], r2[keep]
    order = np.lexsort((k2, k1, r2))
    return (np.ascontiguousarray(k1[order]), np.ascontiguousarray(k2[order])), delta


def linear_select(
    ch: Channel,
    ring: RingId,
    table,
    counter: FlopCounter | None = None,
) -> SelectionResult:
    """Step-sampled search with the threshold-table step size.

    Samples delta*(k1 + k2 i) inside the search sector are visited in
    ascending modulus; the scan stops as soon as the scaled-noise floor of
    the next sample exceeds the best sampled effective noise.  The returned
    vector is the best *candidate* encountered, judged by its own rate
    quadratic form (an off-center hit in the optimal cell would otherwise
    lose the sampled-noise comparison to a luckier neighbor).  Rows marked
    E in the table delegate to the exact vertex search.
    """
    from .thresholds import lookup

    _require_nonzero_gains(ch)
    gamma = lookup(table, ch.nusers, ch.snr_db)
    if gamma is None:
        return vertex_select(ch, ring, counter)
    grid, delta = _sample_grid(ch, ring, gamma)
    if grid is None:
        return vertex_select(ch, ring, counter)
    k1, k2 = grid
    cfac = ch.snr / (1.0 + ch.snr * float(np.vdot(ch.h, ch.h).real))
    best_i, _, examined = kernels.linear_scan(
        ring.code,
        k1.astype(np.float64),
        k2.astype(np.float64),
        delta,
        np.ascontiguousarray(ch.h.real),
        np.ascontiguousarray(ch.h.imag),
        ch.sigma2,
        ch.power_p,
        cfac,
    )
    charge_noise_eval(counter, ch.nusers, n=examined)
    charge_rate_eval(counter, ch.nusers, n=examined)
    if best_i < 0:
        return vertex_select(ch, ring, counter)
    alpha = delta * complex(k1[best_i], k2[best_i])
    coords = quantize_coords(ring, alpha * ch.h)
    return _finish(ch, ring, coords, int(examined), counter)


def linear_scan_trace(ch: Channel, ring: RingId, gamma: float):
    """Reference sequential scan returning the visited-sample trace.

    Each entry is (scaled_noise_floor, effective_noise_or_None,
    best_before).  Used to verify the early-exit contract and as an
    independent oracle for the compiled scan.  Returns
    (trace, step, best_candidate_index).
    """
    grid, delta = _sample_grid(ch, ring, gamma)
    if grid is None:
        return [], delta, -1
    k1, k2 = grid
    cfac = ch.snr / (1.0 + ch.snr * float(np.vdot(ch.h, ch.h).real))
    best_eff = math.inf
    best_q = math.inf
    best_i = -1
    trace = []
    for i in range(k1.shape[0]):
        alpha = delta * complex(k1[i], k2[i])
        sg = abs(alpha) ** 2 * ch.sigma2
        if sg >= best_eff:
            break
        z = alpha * ch.h
        coords = quantize_coords(ring, z)
        if not coords.any():
            trace.append((sg, None, best_eff))
            continue
        emb = embed_coords(ring, coords)
        eff = sg + ch.power_p * float(np.sum(np.abs(z - emb) ** 2))
        trace.append((sg, eff, best_eff))
        if eff < best_eff:
            best_eff = eff
        q = float(np.sum(np.abs(emb) ** 2) - cfac * abs(np.vdot(ch.h, emb)) ** 2)
        if q < best_q:
            best_q = q
            best_i = i
    return trace, delta, best_i


ALGORITHMS = {
    "ex1": exhaustive_select,
    "ex2": vertex_select,
    "ll": midpoint_select,
    "clll": lll_select,
    "linear": linear_select,
}
