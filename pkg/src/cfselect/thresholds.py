"""Offline construction, persistence, and lookup of step-size thresholds.

The linear search samples the scaling factor on a uniform grid whose step
is a fraction of the optimal cell size.  For each (ring, user count,
SNR bin) the threshold gamma is the smallest normalized width, over many
training channels, of the largest axis-aligned square inscribed in the
optimal cell.  Bins below 5 dB carry an E marker: there the search
delegates to the exact vertex selector.

Tables serialize to line-oriented text::

    ring,L_count,trials,seed
    L,snr_lo_db,snr_hi_db,gamma-or-E

with decimals at 6 significant digits (values are rounded at build time so
the round trip is exact).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InternalError, InvalidInputError, TableMissError, TableParseError
from .geometry import largest_inscribed_axis_square, region_of_vector
from .rate import Channel
from .rings import RingId, spec_of
from .selectors import vertex_select

TERMINAL_GAMMA = 0.71  # asymptotic threshold above the last regenerated bin
E_BIN_BELOW_DB = 5.0


@dataclass(frozen=True)
class ThresholdBin:
    snr_lo_db: float
    snr_hi_db: float
    gamma: float | None  # None is the E marker (delegate to exact search)


@dataclass(frozen=True)
class GammaSample:
    gamma_opt: float
    channel_id: int = -1


@dataclass(frozen=True)
class ThresholdTable:
    ring: RingId
    rows: dict[int, tuple[ThresholdBin, ...]]
    trials: int
    seed: int


def _round6(x: float) -> float:
    return float(f"{x:.6g}")


def gamma_opt_of(ch: Channel, ring: RingId, channel_id: int = -1) -> GammaSample:
    """Normalized width of the largest axis-aligned square inscribed in the
    cell of the optimal coefficient vector."""
    best = vertex_select(ch, ring)
    region = region_of_vector(ring, ch, best.coeffs)
    if region is None:
        raise InternalError("optimal coefficient vector has an empty cell")
    width, _ = largest_inscribed_axis_square(region)
    hmax = float(np.max(np.abs(ch.h)))
    gamma = width * hmax / math.sqrt(spec_of(ring).fundamental_area)
    if not (gamma > 0):
        raise InternalError("optimal cell has zero inscribed width")
    return GammaSample(gamma_opt=min(gamma, 1.0), channel_id=channel_id)


def _validate_row(nusers: int, bins, line_of=None):
    def err(i, msg):
        raise TableParseError(msg, line=None if line_of is None else line_of(i))

    prev_hi = None
    prev_gamma = None
    for i, b in enumerate(bins):
        if not b.snr_hi_db > b.snr_lo_db:
            err(i, f"empty bin [{b.snr_lo_db}, {b.snr_hi_db}) for L={nusers}")
        if prev_hi is not None:
            if b.snr_lo_db < prev_hi - 1e-9:
                err(i, f"overlapping bins at {b.snr_lo_db} dB for L={nusers}")
            if b.snr_lo_db > prev_hi + 1e-9:
                err(i, f"gap before {b.snr_lo_db} dB for L={nusers}")
        prev_hi = b.snr_hi_db
        if b.gamma is not None:
            if not (0.0 < b.gamma <= 1.0):
                err(i, f"gamma {b.gamma} outside (0, 1] for L={nusers}")
            if prev_gamma is not None and b.gamma < prev_gamma - 1e-12:
                err(i, f"gamma decreases at {b.snr_lo_db} dB for L={nusers}")
            prev_gamma = b.gamma


def make_table(ring: RingId, rows: dict, trials: int, seed: int) -> ThresholdTable:
    for nusers, bins in rows.items():
        _validate_row(nusers, bins)
    return ThresholdTable(ring=ring, rows=dict(rows), trials=trials, seed=seed)


def build_table(
    ring: RingId,
    users,
    snr_bin_edges,
    trials: int = 1000,
    seed: int = 0,
) -> ThresholdTable:
    """Regenerate threshold rows from Monte Carlo channel draws.

    For every (L, bin) the training SNR sits at the bin's lower edge (the
    threshold grows with SNR, so the lower edge is the conservative
    choice).  Each (L, bin) gets its own seeded substream so rows are
    reproducible independently of build order.  Raw per-bin minima are
    post-processed with a right-to-left running minimum: a Monte Carlo
    inversion would otherwise violate the monotone-in-SNR table invariant.
    """
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    edges = sorted(float(e) for e in snr_bin_edges)
    if len(edges) < 2:
        raise InvalidInputError("need at least two bin edges")
    from .bench import gen_channel

    rows = {}
    for nusers in users:
        gammas: list[float | None] = []
        for bi in range(len(edges) - 1):
            lo = edges[bi]
            if lo < E_BIN_BELOW_DB:
                gammas.append(None)
                continue
            rng = np.random.default_rng([seed, ring.code, nusers, bi])
            snr = 10.0 ** (lo / 10.0)
            gmin = math.inf
            for t in range(trials):
                ch = gen_channel(nusers, rng, snr=snr)
                gmin = min(gmin, gamma_opt_of(ch, ring, channel_id=t).gamma_opt)
            gammas.append(gmin)
        running = math.inf
        for i in range(len(gammas) - 1, -1, -1):
            if gammas[i] is not None:
                running = min(running, gammas[i])
                gammas[i] = _round6(running)
        rows[nusers] = tuple(
            ThresholdBin(edges[i], edges[i + 1], gammas[i]) for i in range(len(gammas))
        )
    return make_table(ring, rows, trials, seed)


def lookup(table: ThresholdTable, nusers: int, snr_db: float):
    """Threshold for the bin containing ``snr_db``.

    Returns None (the E marker) below the first bin, and the terminal
    asymptotic value above the last one.
    """
    row = table.rows.get(int(nusers))
    if row is None:
        raise TableMissError(f"no threshold row for L={nusers}")
    if snr_db < row[0].snr_lo_db:
        return None
    for b in row:
        if b.snr_lo_db <= snr_db < b.snr_hi_db:
            return b.gamma
    return TERMINAL_GAMMA


def serialize(table: ThresholdTable) -> str:
    lines = [f"{table.ring.value},{len(table.rows)},{table.trials},{table.seed}"]
    for nusers in sorted(table.rows):
        for b in table.rows[nusers]:
            g = "E" if b.gamma is None else f"{b.gamma:.6g}"
            lines.append(f"{nusers},{b.snr_lo_db:.6g},{b.snr_hi_db:.6g},{g}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> ThresholdTable:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise TableParseError("empty table")
    no, header = lines[0]
    parts = header.split(",")
    if len(parts) != 4:
        raise TableParseError("header must be ring,L_count,trials,seed", line=no)
    try:
        ring = RingId(parts[0])
    except ValueError:
        raise TableParseError(f"unknown ring {parts[0]!r}", line=no) from None
    try:
        l_count, trials, seed = int(parts[1]), int(parts[2]), int(parts[3])
    except ValueError:
        raise TableParseError("header counts must be integers", line=no) from None
    rows: dict[int, list[ThresholdBin]] = {}
    row_lines: dict[int, list[int]] = {}
    for no, ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 4:
            raise TableParseError("row must be L,snr_lo_db,snr_hi_db,gamma", line=no)
        try:
            nusers = int(parts[0])
            lo, hi = float(parts[1]), float(parts[2])
            gamma = None if parts[3] == "E" else float(parts[3])
        except ValueError:
            raise TableParseError(f"malformed row {ln!r}", line=no) from None
        rows.setdefault(nusers, []).append(ThresholdBin(lo, hi, gamma))
        row_lines.setdefault(nusers, []).append(no)
    if len(rows) != l_count:
        raise TableParseError(
            f"header declares {l_count} rows, found {len(rows)}", line=lines[0][0]
        )
    for nusers, bins in rows.items():
        _validate_row(nusers, bins, line_of=lambda i, n=nusers: row_lines[n][i])
    return ThresholdTable(
        ring=ring,
        rows={n: tuple(b) for n, b in rows.items()},
        trials=trials,
        seed=seed,
    )
