"""Hot numeric kernels with a JIT path and a pure-NumPy fallback.

Every kernel exists in two functionally identical variants:

* a scalar-loop variant compiled with ``numba.njit`` (default), and
* a vectorized pure-NumPy variant.

The NumPy variant is selected when the environment variable
``CFSELECT_PURE_NUMPY`` is set to ``1``/``true``/``yes`` or when numba is
not importable.  ``backend()`` reports which path is active.  Both paths
are kept bit-compatible (no fastmath) so results do not depend on the
backend; ``benchmarks/kernel_bench.py`` compares their speed.

Conventions used throughout:

* ring code 0 = Gaussian integers (basis 1, i),
  ring code 1 = Eisenstein integers (basis 1, w with w = (-1+sqrt(3)i)/2);
* lattice points are integer coordinate pairs (c1, c2) in the ring basis;
* nearest-point ties are broken toward the lexicographically largest
  embedding (real part first, then imaginary part).
"""

from __future__ import annotations

import math
import os

import numpy as np

GAUSSIAN_CODE = 0
EISENSTEIN_CODE = 1

_SQRT3 = math.sqrt(3.0)
_HALF_SQRT3 = _SQRT3 / 2.0
_INV_SQRT3 = 1.0 / _SQRT3

# 3x3 block offsets ordered by ascending Eisenstein embedding (re, then im),
# so that a scan updating on "distance <= best" ends on the lexicographically
# largest tied embedding.  The same order works for the Gaussian basis.
_EIS_OFFSETS = np.array(
    [(-1, 1), (-1, 0), (-1, -1), (0, 1), (0, 0), (0, -1), (1, 1), (1, 0), (1, -1)],
    dtype=np.int64,
)
_GAUSS_OFFSETS = np.array(
    [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 0), (0, 1), (1, -1), (1, 0), (1, 1)],
    dtype=np.int64,
)


def _pure_numpy_requested() -> bool:
    return os.environ.get("CFSELECT_PURE_NUMPY", "").strip().lower() in {
        "1",
        "true",
        "yes",
        "on",
    }


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = (not _pure_numpy_requested()) and _numba_available()


def backend() -> str:
    """Name of the active kernel backend: ``"numba"`` or ``"numpy"``."""
    return "numba" if NUMBA_ENABLED else "numpy"


if NUMBA_ENABLED:
    from numba import njit
else:  # pragma: no cover - exercised via CFSELECT_PURE_NUMPY runs

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


# ---------------------------------------------------------------------------
# scalar nearest-point helpers (compiled away inside the jit kernels)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _gauss_nearest_scalar(zr, zi):
    # floor(x + 0.5) rounds half-integers up = lexicographically largest tie.
    return int(math.floor(zr + 0.5)), int(math.floor(zi + 0.5))


@njit(cache=True)
def _eis_nearest_scalar(zr, zi):
    b2 = 2.0 * zi * _INV_SQRT3
    b1 = zr + zi * _INV_SQRT3
    n1 = int(math.floor(b1 + 0.5))
    n2 = int(math.floor(b2 + 0.5))
    best = np.inf
    bc1 = n1
    bc2 = n2
    for k in range(9):
        c1 = n1 + _EIS_OFFSETS[k, 0]
        c2 = n2 + _EIS_OFFSETS[k, 1]
        er = c1 - 0.5 * c2
        ei = _HALF_SQRT3 * c2
        d = (zr - er) * (zr - er) + (zi - ei) * (zi - ei)
        if d <= best:
            best = d
            bc1 = c1
            bc2 = c2
    return bc1, bc2


@njit(cache=True)
def _nearest_scalar(ring, zr, zi):
    if ring == GAUSSIAN_CODE:
        return _gauss_nearest_scalar(zr, zi)
    return _eis_nearest_scalar(zr, zi)


@njit(cache=True)
def _embed_scalar(ring, c1, c2):
    if ring == GAUSSIAN_CODE:
        return float(c1), float(c2)
    return c1 - 0.5 * c2, _HALF_SQRT3 * c2


# ---------------------------------------------------------------------------
# array quantization
# ---------------------------------------------------------------------------


@njit(cache=True)
def _nearest_array_nb(ring, zr, zi):
    n = zr.shape[0]
    c1 = np.empty(n, np.int64)
    c2 = np.empty(n, np.int64)
    for k in range(n):
        a, b = _nearest_scalar(ring, zr[k], zi[k])
        c1[k] = a
        c2[k] = b
    return c1, c2


def _nearest_array_np(ring, zr, zi):
    zr = np.asarray(zr, dtype=np.float64)
    zi = np.asarray(zi, dtype=np.float64)
    if ring == GAUSSIAN_CODE:
        return (
            np.floor(zr + 0.5).astype(np.int64),
            np.floor(zi + 0.5).astype(np.int64),
        )
    b2 = 2.0 * zi * _INV_SQRT3
    b1 = zr + zi * _INV_SQRT3
    n1 = np.floor(b1 + 0.5).astype(np.int64)
    n2 = np.floor(b2 + 0.5).astype(np.int64)
    best = np.full(zr.shape, np.inf)
    bc1 = n1.copy()
    bc2 = n2.copy()
    for k in range(9):
        c1 = n1 + _EIS_OFFSETS[k, 0]
        c2 = n2 + _EIS_OFFSETS[k, 1]
        er = c1 - 0.5 * c2
        ei = _HALF_SQRT3 * c2
        d = (zr - er) ** 2 + (zi - ei) ** 2
        take = d <= best
        best = np.where(take, d, best)
        bc1 = np.where(take, c1, bc1)
        bc2 = np.where(take, c2, bc2)
    return bc1, bc2


# ---------------------------------------------------------------------------
# full-direction candidate expansion
# ---------------------------------------------------------------------------
#
# For every representative alpha the per-component quantizer may be singular
# (several lattice points at equal distance from alpha*h_l, up to the
# tolerance).  The expansion enumerates the Cartesian product of all
# per-component options, emitting one integer coordinate row (c1_1, c2_1, ...,
# c1_L, c2_L) per product vector.


@njit(cache=True)
def _component_options(ring, zr, zi, rel_tol, out_c1, out_c2):
    """Fill per-scalar near-tie options; returns the option count."""
    if ring == GAUSSIAN_CODE:
        n1 = int(math.floor(zr + 0.5))
        n2 = int(math.floor(zi + 0.5))
        offs = _GAUSS_OFFSETS
    else:
        b2 = 2.0 * zi * _INV_SQRT3
        b1 = zr + zi * _INV_SQRT3
        n1 = int(math.floor(b1 + 0.5))
        n2 = int(math.floor(b2 + 0.5))
        offs = _EIS_OFFSETS
    dmin = np.inf
    for k in range(9):
        c1 = n1 + offs[k, 0]
        c2 = n2 + offs[k, 1]
        er, ei = _embed_scalar(ring, c1, c2)
        d = (zr - er) * (zr - er) + (zi - ei) * (zi - ei)
        if d < dmin:
            dmin = d
    tol = rel_tol * max(1.0, math.sqrt(zr * zr + zi * zi))
    thr = math.sqrt(dmin) + tol
    thr = thr * thr
    cnt = 0
    for k in range(9):
        c1 = n1 + offs[k, 0]
        c2 = n2 + offs[k, 1]
        er, ei = _embed_scalar(ring, c1, c2)
        d = (zr - er) * (zr - er) + (zi - ei) * (zi - ei)
        if d <= thr:
            out_c1[cnt] = c1
            out_c2[cnt] = c2
            cnt += 1
    return cnt


@njit(cache=True)
def _expand_reps_nb(ring, are, aim, hre, him, rel_tol):
    n = are.shape[0]
    L = hre.shape[0]
    oc1 = np.empty(9, np.int64)
    oc2 = np.empty(9, np.int64)
    counts = np.empty((n, L), np.int64)
    totals = np.empty(n, np.int64)
    total = 0
    for i in range(n):
        prod = 1
        for l in range(L):
            zr = are[i] * hre[l] - aim[i] * him[l]
            zi = are[i] * him[l] + aim[i] * hre[l]
            cnt = _component_options(ring, zr, zi, rel_tol, oc1, oc2)
            counts[i, l] = cnt
            prod *= cnt
        totals[i] = prod
        total += prod
    coords = np.empty((total, 2 * L), np.int32)
    row = 0
    all_c1 = np.empty((L, 9), np.int64)
    all_c2 = np.empty((L, 9), np.int64)
    for i in range(n):
        for l in range(L):
            zr = are[i] * hre[l] - aim[i] * him[l]
            zi = are[i] * him[l] + aim[i] * hre[l]
            _component_options(ring, zr, zi, rel_tol, all_c1[l], all_c2[l])
        prod = totals[i]
        for p in range(prod):
            tmp = p
            for l in range(L):
                k = tmp % counts[i, l]
                tmp //= counts[i, l]
                coords[row, 2 * l] = np.int32(all_c1[l, k])
                coords[row, 2 * l + 1] = np.int32(all_c2[l, k])
            row += 1
    return coords


def _options_array_np(ring, z, rel_tol):
    """Vectorized per-scalar options: (..., 9, 2) coords + boolean mask."""
    zr = z.real
    zi = z.imag
    if ring == GAUSSIAN_CODE:
        n1 = np.floor(zr + 0.5).astype(np.int64)
        n2 = np.floor(zi + 0.5).astype(np.int64)
        offs = _GAUSS_OFFSETS
    else:
        n1 = np.floor((zr + zi * _INV_SQRT3) + 0.5).astype(np.int64)
        n2 = np.floor((2.0 * zi * _INV_SQRT3) + 0.5).astype(np.int64)
        offs = _EIS_OFFSETS
    c1 = n1[..., None] + offs[:, 0]
    c2 = n2[..., None] + offs[:, 1]
    if ring == GAUSSIAN_CODE:
        er = c1.astype(np.float64)
        ei = c2.astype(np.float64)
    else:
        er = c1 - 0.5 * c2
        ei = _HALF_SQRT3 * c2
    d = (zr[..., None] - er) ** 2 + (zi[..., None] - ei) ** 2
    dmin = d.min(axis=-1)
    tol = rel_tol * np.maximum(1.0, np.abs(z))
    thr = (np.sqrt(dmin) + tol) ** 2
    mask = d <= thr[..., None]
    return np.stack([c1, c2], axis=-1), mask


def _expand_reps_np(ring, are, aim, hre, him, rel_tol, chunk=65536):
    L = hre.shape[0]
    h = hre + 1j * him
    alphas = are + 1j * aim
    blocks = []
    for s in range(0, alphas.shape[0], chunk):
        a = alphas[s : s + chunk]
        z = a[:, None] * h[None, :]
        opts, mask = _options_array_np(ring, z, rel_tol)
        counts = mask.sum(axis=-1)
        # mask is contiguous-first after this partition trick: gather kept
        # options to the front per component.
        order = np.argsort(~mask, axis=-1, kind="stable")
        packed = np.take_along_axis(opts, order[..., None], axis=2)
        prods = counts.prod(axis=1)
        simple = prods == 1
        if simple.any():
            rows = packed[simple, :, 0, :].reshape(simple.sum(), 2 * L)
            blocks.append(rows.astype(np.int32))
        rest = np.nonzero(~simple)[0]
        if rest.size:
            patterns = {}
            for i in rest:
                patterns.setdefault(tuple(counts[i]), []).append(i)
            for pat, idxs in patterns.items():
                idxs = np.asarray(idxs)
                grids = np.meshgrid(*[np.arange(c) for c in pat], indexing="ij")
                combo = np.stack([g.ravel() for g in grids], axis=1)  # (P, L)

                parts = [
                    packed[idxs][:, l, combo[:, l], :] for l in range(L)
                ]  # each (len(idxs), P, 2)
                rows = np.stack(parts, axis=2).reshape(len(idxs) * combo.shape[0], 2 * L)
                blocks.append(rows.astype(np.int32))
    if not blocks:
        return np.empty((0, 2 * L), np.int32)
    return np.ascontiguousarray(np.concatenate(blocks, axis=0))


# ---------------------------------------------------------------------------
# linear-search scan
# ---------------------------------------------------------------------------


@njit(cache=True)
def _linear_scan_nb(ring, k1, k2, delta, hre, him, sigma2, power, cfac):
    """Scan modulus-sorted samples delta*(k1+k2*i); stop at the noise bound.

    The scan terminates at the first sample whose scaled-noise floor
    |alpha|^2 sigma^2 reaches the best *sampled* effective noise (no later
    sample can beat it).  Among the candidate vectors encountered before
    that point the winner is the one minimizing the rate quadratic form
    ||a||^2 - cfac |h^H a|^2, i.e. the best vector at its own MMSE scaling
    rather than at the sample that produced it.  Returns
    (best_index, best_quadratic_form, samples_examined); samples quantizing
    to the zero vector are examined but never win.
    """
    n = k1.shape[0]
    L = hre.shape[0]
    best_eff = np.inf
    best_q = np.inf
    best_i = -1
    for i in range(n):
        ax = delta * k1[i]
        ay = delta * k2[i]
        sg = (ax * ax + ay * ay) * sigma2
        if sg >= best_eff:
            return best_i, best_q, i
        self_noise = 0.0
        nonzero = False
        n2 = 0.0
        dr = 0.0
        di = 0.0
        for l in range(L):
            zr = ax * hre[l] - ay * him[l]
            zi = ax * him[l] + ay * hre[l]
            c1, c2 = _nearest_scalar(ring, zr, zi)
            if c1 != 0 or c2 != 0:
                nonzero = True
            er, ei = _embed_scalar(ring, c1, c2)
            self_noise += (zr - er) * (zr - er) + (zi - ei) * (zi - ei)
            n2 += er * er + ei * ei
            # conj(h_l) * a_l accumulated
            dr += hre[l] * er + him[l] * ei
            di += hre[l] * ei - him[l] * er
        if not nonzero:
            continue
        eff = sg + power * self_noise
        if eff < best_eff:
            best_eff = eff
        q = n2 - cfac * (dr * dr + di * di)
        if q < best_q:
            best_q = q
            best_i = i
    return best_i, best_q, n


def _linear_scan_np(ring, k1, k2, delta, hre, him, sigma2, power, cfac, chunk=8192):
    h = hre + 1j * him
    n = k1.shape[0]
    best_eff = np.inf
    best_q = np.inf
    best_i = -1
    examined = 0
    for s in range(0, n, chunk):
        a = delta * (k1[s : s + chunk] + 1j * k2[s : s + chunk])
        sg = (a.real**2 + a.imag**2) * sigma2
        z = a[:, None] * h[None, :]
        c1, c2 = _nearest_array_np(ring, z.real.ravel(), z.imag.ravel())
        c1 = c1.reshape(z.shape)
        c2 = c2.reshape(z.shape)
        if ring == GAUSSIAN_CODE:
            e = c1 + 1j * c2.astype(np.float64)
        else:
            e = (c1 - 0.5 * c2) + 1j * (_HALF_SQRT3 * c2)
        zero = (c1 == 0).all(axis=1) & (c2 == 0).all(axis=1)
        eff = sg + power * (np.abs(z - e) ** 2).sum(axis=1)
        eff = np.where(zero, np.inf, eff)
        dots = e @ np.conj(h)
        q = (e.real**2 + e.imag**2).sum(axis=1) - cfac * (dots.real**2 + dots.imag**2)
        q = np.where(zero, np.inf, q)
        # sequential best-so-far before each in-chunk sample
        run = np.minimum.accumulate(
            np.concatenate(([best_eff], np.minimum(best_eff, eff)))[:-1]
        )
        stop = np.nonzero(sg >= run)[0]
        cut = stop[0] if stop.size else a.shape[0]
        if cut:
            if float(eff[:cut].min()) < best_eff:
                best_eff = float(eff[:cut].min())
            j = int(np.argmin(q[:cut]))
            if q[j] < best_q:
                best_q = float(q[j])
                best_i = s + j
        examined += int(cut)
        if stop.size:
            return best_i, best_q, examined
    return best_i, best_q, examined


# ---------------------------------------------------------------------------
# norm-bounded exhaustive search
# ---------------------------------------------------------------------------


@njit(cache=True)
def _ex1_scan_nb(emb_re, emb_im, n2, cone_ok, hre, him, cfac, phi2, L):
    """Depth-first search over coefficient vectors with ||a||^2 <= phi2.

    Candidates are sorted by ascending squared norm with the zero scalar
    first; `cone_ok` marks scalars usable as the first nonzero component
    (one representative per unit orbit).  Returns the flat candidate index
    per level for the best vector, the minimized quadratic form, and the
    number of complete vectors evaluated.
    """
    nc = emb_re.shape[0]
    idx = np.zeros(L, np.int64)
    acc_n2 = np.zeros(L + 1, np.float64)
    acc_dr = np.zeros(L + 1, np.float64)
    acc_di = np.zeros(L + 1, np.float64)
    nz = np.zeros(L + 1, np.bool_)
    best_q = np.inf
    best_idx = np.full(L, -1, np.int64)
    evaluated = 0
    level = 0
    while level >= 0:
        i = idx[level]
        if i >= nc or acc_n2[level] + n2[i] > phi2:
            level -= 1
            if level >= 0:
                idx[level] += 1
            continue
        usable = True
        if i != 0 and not nz[level]:
            usable = cone_ok[i]
        if usable:
            tot_n2 = acc_n2[level] + n2[i]
            # conj(h_l) * a_l accumulated
            dr = acc_dr[level] + hre[level] * emb_re[i] + him[level] * emb_im[i]
            di = acc_di[level] + hre[level] * emb_im[i] - him[level] * emb_re[i]
            has_nz = nz[level] or (i != 0)
            if level == L - 1:
                if has_nz:
                    q = tot_n2 - cfac * (dr * dr + di * di)
                    evaluated += 1
                    if q < best_q:
                        best_q = q
                        for l in range(L):
                            best_idx[l] = idx[l]
                idx[level] += 1
            else:
                acc_n2[level + 1] = tot_n2
                acc_dr[level + 1] = dr
                acc_di[level + 1] = di
                nz[level + 1] = has_nz
                level += 1
                idx[level] = 0
        else:
            idx[level] += 1
    return best_idx, best_q, evaluated


def _ex1_scan_np(emb_re, emb_im, n2, cone_ok, hre, him, cfac, phi2, L):
    """Vectorized fallback: loops over the leading components, broadcasts the
    last one."""
    emb = emb_re + 1j * emb_im
    h = hre + 1j * him
    nc = emb.shape[0]
    best_q = np.inf
    best_idx = None
    evaluated = 0

    def leaf(prefix_idx, pre_n2, pre_dot, pre_nz, level):
        nonlocal best_q, best_idx, evaluated
        cand = np.nonzero(n2 <= phi2 - pre_n2)[0]
        if not pre_nz:
            # last component is the first nonzero one: orbit representative
            cand = cand[cone_ok[cand]]
        if cand.size == 0:
            return
        dots = pre_dot + np.conj(h[level]) * emb[cand]
        q = pre_n2 + n2[cand] - cfac * np.abs(dots) ** 2
        evaluated += cand.size
        j = int(np.argmin(q))
        if q[j] < best_q:
            best_q = float(q[j])
            best_idx = prefix_idx + [int(cand[j])]

    def walk(prefix_idx, pre_n2, pre_dot, pre_nz, level):
        if level == L - 1:
            leaf(prefix_idx, pre_n2, pre_dot, pre_nz, level)
            return
        for i in range(nc):
            if pre_n2 + n2[i] > phi2:
                break
            if i != 0 and not pre_nz and not cone_ok[i]:
                continue
            walk(
                prefix_idx + [i],
                pre_n2 + n2[i],
                pre_dot + np.conj(h[level]) * emb[i],
                pre_nz or i != 0,
                level + 1,
            )

    walk([], 0.0, 0.0 + 0.0j, False, 0)
    if best_idx is None:
        return np.full(L, -1, np.int64), np.inf, 0
    return np.asarray(best_idx, np.int64), best_q, evaluated


# ---------------------------------------------------------------------------
# public dispatch
# ---------------------------------------------------------------------------

IMPLEMENTATIONS = {
    "nearest_array": {"numba": None, "numpy": _nearest_array_np},
    "expand_reps": {"numba": None, "numpy": _expand_reps_np},
    "linear_scan": {"numba": None, "numpy": _linear_scan_np},
    "ex1_scan": {"numba": None, "numpy": _ex1_scan_np},
}

if NUMBA_ENABLED:
    IMPLEMENTATIONS["nearest_array"]["numba"] = _nearest_array_nb
    IMPLEMENTATIONS["expand_reps"]["numba"] = _expand_reps_nb
    IMPLEMENTATIONS["linear_scan"]["numba"] = _linear_scan_nb
    IMPLEMENTATIONS["ex1_scan"]["numba"] = _ex1_scan_nb

    nearest_array = _nearest_array_nb
    expand_reps = _expand_reps_nb
    linear_scan = _linear_scan_nb
    ex1_scan = _ex1_scan_nb
else:
    nearest_array = _nearest_array_np
    expand_reps = _expand_reps_np
    linear_scan = _linear_scan_np
    ex1_scan = _ex1_scan_np
