import math

import numpy as np
import pytest

from cfselect import (
    Channel,
    CoeffVector,
    RingId,
    build_candidates,
    exhaustive_select,
    linear_select,
    lll_select,
    midpoint_select,
    rate_of_pair,
    vertex_select,
)
from cfselect.bench import gen_channel
from cfselect.errors import BudgetExceededError, TableMissError
from cfselect.rings import spec_of, units
from cfselect.selectors import (
    _evaluate_candidates,
    _sample_grid,
    linear_scan_trace,
    sector_for,
)
from cfselect.thresholds import ThresholdBin, make_table

ZI = RingId.GAUSSIAN


def small_table(ring, nusers, gamma=0.3):
    return make_table(ring, {nusers: (ThresholdBin(5.0, 999.0, gamma),)}, 1, 0)


def test_exhaustive_single_user():
    ch = Channel(np.array([1.0 + 0j]), snr=10.0)
    res = exhaustive_select(ch, ZI)
    assert abs(res.rate - math.log2(11)) < 1e-9
    assert abs(abs(res.coeffs.embedding[0]) - 1.0) < 1e-12


def test_exhaustive_two_users_combines():
    ch = Channel(np.array([1.0 + 0j, 1.0 + 0j]), snr=10.0)
    res = exhaustive_select(ch, ZI)
    both = rate_of_pair(ch, CoeffVector(np.array([[1, 0], [1, 0]]), ZI)).rate
    single = rate_of_pair(ch, CoeffVector(np.array([[1, 0], [0, 0]]), ZI)).rate
    assert both > single
    assert res.rate >= both - 1e-12


def test_exhaustive_beats_single_user_equation(ring):
    rng = np.random.default_rng(0)
    for _ in range(20):
        L = int(rng.integers(1, 4))
        ch = gen_channel(L, rng, snr=10.0)
        res = exhaustive_select(ch, ring)
        for l in range(L):
            e = np.zeros((L, 2), dtype=int)
            e[l, 0] = 1
            assert res.rate >= rate_of_pair(ch, CoeffVector(e, ring)).rate - 1e-9


def test_exhaustive_budget_guard():
    ch = Channel(np.array([1.0 + 0j] * 3), snr=1e4)
    with pytest.raises(BudgetExceededError):
        exhaustive_select(ch, ZI)


def test_build_candidates_single_user_no_crossings(ring):
    ch = Channel(np.array([0.7 - 0.4j]), snr=50.0)
    cs = build_candidates(ch, ring)
    assert cs.crossing_points.size == 0
    assert cs.vertex_points.size > 0


def test_build_candidates_crossings_inside_bounding_box(ring):
    rng = np.random.default_rng(1)
    for _ in range(10):
        ch = gen_channel(3, rng, snr=50.0)
        cs = build_candidates(ch, ring)
        sector = sector_for(ch, ring)
        xmin, xmax, ymin, ymax = sector.bounding_box()
        eps = 1e-6 * xmax
        p = cs.crossing_points
        assert np.all((p.real >= xmin - eps) & (p.real <= xmax + eps))
        assert np.all((p.imag >= ymin - eps) & (p.imag <= ymax + eps))


def test_vertex_select_matches_oracle(ring):
    rng = np.random.default_rng(2)
    for _ in range(40):
        L = int(rng.integers(1, 4))
        ch = gen_channel(L, rng, snr=10.0 ** rng.uniform(0.3, 1.5))
        r1 = exhaustive_select(ch, ring)
        r2 = vertex_select(ch, ring)
        assert abs(r1.rate - r2.rate) <= 1e-9 * max(1.0, r1.rate)


def test_dominance_over_baselines(ring):
    rng = np.random.default_rng(3)
    tab = small_table(ring, 2)
    for _ in range(30):
        ch = gen_channel(2, rng, snr=10.0 ** rng.uniform(0.7, 2.0))
        best = vertex_select(ch, ring).rate + 1e-9
        assert midpoint_select(ch, ring).rate <= best
        assert lll_select(ch, ring).rate <= best
        assert linear_select(ch, ring, tab).rate <= best


def test_no_selector_returns_zero(ring):
    rng = np.random.default_rng(4)
    tab = small_table(ring, 2)
    for _ in range(15):
        ch = gen_channel(2, rng, snr=5.0)
        for res in (
            exhaustive_select(ch, ring),
            vertex_select(ch, ring),
            midpoint_select(ch, ring),
            lll_select(ch, ring),
            linear_select(ch, ring, tab),
        ):
            assert not res.coeffs.is_zero
            assert abs(res.rate - rate_of_pair(ch, res.coeffs).rate) <= 1e-9


def test_midpoint_single_user_optimal(ring):
    rng = np.random.default_rng(5)
    for _ in range(20):
        ch = gen_channel(1, rng, snr=10.0 ** rng.uniform(0.5, 2.0))
        assert abs(midpoint_select(ch, ring).rate - exhaustive_select(ch, ring).rate) < 1e-9


def test_lll_single_user_exact(ring):
    ch = Channel(np.array([0.8 + 0.3j]), snr=25.0)
    assert abs(lll_select(ch, ring).rate - exhaustive_select(ch, ring).rate) < 1e-9


def test_lll_reduction_is_unimodular_and_spans(ring):
    from cfselect.rate import gram_matrix
    from cfselect.selectors import _clll_reduce

    rng = np.random.default_rng(6)
    for _ in range(15):
        L = int(rng.integers(2, 7))
        ch = gen_channel(L, rng, snr=10.0 ** rng.uniform(1, 3))
        _, chol = gram_matrix(ch)
        B0 = chol.conj().T
        B, T = _clll_reduce(B0, ring, delta=0.99)
        Temb = np.array([[T[i][j].embedding for j in range(L)] for i in range(L)])
        # unimodular: the determinant is a unit of the ring
        assert abs(abs(np.linalg.det(Temb)) - 1.0) < 1e-6
        # same lattice: the reduced basis is exactly B0 @ T
        assert np.max(np.abs(B0 @ Temb - B)) < 1e-9


def test_linear_search_finds_unit_coefficient():
    ch = Channel(np.array([1.0 + 0j]), snr=50.0)
    tab = small_table(ZI, 1, gamma=0.5)
    res = linear_select(ch, ZI, tab)
    assert abs(res.rate - math.log2(51)) < 1e-9


def test_linear_search_table_miss():
    ch = Channel(np.array([1.0 + 0j, 1.0 + 0j]), snr=50.0)
    tab = small_table(ZI, 1)
    with pytest.raises(TableMissError):
        linear_select(ch, ZI, tab)


def test_linear_search_e_marker_delegates(ring):
    rng = np.random.default_rng(8)
    tab = make_table(ring, {3: (ThresholdBin(5.0, 999.0, 0.3),)}, 1, 0)
    ch = gen_channel(3, rng, snr=10 ** 0.3)  # 3 dB: below the first bin
    res = linear_select(ch, ring, tab)
    assert abs(res.rate - vertex_select(ch, ring).rate) < 1e-12


def test_linear_search_break_contract(ring):
    rng = np.random.default_rng(9)
    import cfselect.kernels as K

    for _ in range(10):
        L = int(rng.integers(1, 5))
        ch = gen_channel(L, rng, snr=10.0 ** rng.uniform(1, 2.5))
        gamma = 0.3
        trace, delta, best_ref = linear_scan_trace(ch, ring, gamma)
        # the early-exit contract: a sample is evaluated only when its
        # scaled-noise floor is below the best effective noise so far
        for sg, _eff, best_before in trace:
            assert sg < best_before or math.isinf(best_before)
        grid, delta2 = _sample_grid(ch, ring, gamma)
        k1, k2 = grid
        hn2 = float(np.sum(np.abs(ch.h) ** 2))
        bi, _, nex = K.linear_scan(
            ring.code,
            k1.astype(np.float64),
            k2.astype(np.float64),
            delta2,
            np.ascontiguousarray(ch.h.real),
            np.ascontiguousarray(ch.h.imag),
            ch.sigma2,
            ch.power_p,
            ch.snr / (1 + ch.snr * hn2),
        )
        assert nex == len(trace)
        assert bi == best_ref


def test_sample_order_is_scale_free(ring):
    ch = Channel(np.array([0.9 + 0.2j, -0.3 + 1.1j]), snr=400.0)
    big, _ = _sample_grid(ch, ring, 0.4)
    small, _ = _sample_grid(ch, ring, 0.1)  # denser grid, larger kmax
    kb = list(zip(big[0].tolist(), big[1].tolist()))
    ks = list(zip(small[0].tolist(), small[1].tolist()))
    common = set(kb)
    filtered = [k for k in ks if k in common]
    assert filtered == kb


def test_sector_restriction_is_sufficient(ring):
    # evaluating all unit rotations of every representative never improves
    rng = np.random.default_rng(10)
    for _ in range(100):
        L = int(rng.integers(1, 4))
        ch = gen_channel(L, rng, snr=10.0 ** rng.uniform(0.5, 1.5))
        cs = build_candidates(ch, ring)
        pts = cs.all_points
        res = vertex_select(ch, ring)
        rotated = np.concatenate([pts * u.embedding for u in units(ring)])
        coords, q, _ = _evaluate_candidates(ch, ring, rotated)
        full = rate_of_pair(ch, CoeffVector(coords, ring)).rate
        assert full <= res.rate + 1e-9 * max(1.0, res.rate)


def test_candidate_dedup_bound(ring):
    xi = 4 if ring is RingId.GAUSSIAN else 6
    rng = np.random.default_rng(11)
    for _ in range(20):
        L = int(rng.integers(2, 5))
        ch = gen_channel(L, rng, snr=30.0)
        cs = build_candidates(ch, ring)
        res = vertex_select(ch, ring)
        n_points = cs.vertex_points.size + cs.crossing_points.size
        assert res.candidates_examined <= xi * n_points


def test_flops_populated_only_with_counter(ring):
    from cfselect.flops import FlopCounter

    ch = Channel(np.array([1.0 + 0j, 0.5 + 0.5j]), snr=20.0)
    assert vertex_select(ch, ring).flops is None
    c = FlopCounter()
    res = vertex_select(ch, ring, counter=c)
    assert res.flops == c.total_flops > 0
