"""Exact arithmetic, quantization, and cell geometry constants for the
Gaussian (Z[i]) and Eisenstein (Z[w]) integer lattices.

Lattice points are stored as exact integer coordinates in the ring basis
(1, i) or (1, w) with w = (-1 + sqrt(3) i) / 2; the complex embedding is
computed on demand so candidate deduplication stays exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import InvalidInputError

SQRT3 = math.sqrt(3.0)
OMEGA = complex(-0.5, SQRT3 / 2.0)


class RingId(Enum):
    """The two supported algebraic-integer domains."""

    GAUSSIAN = "zi"
    EISENSTEIN = "zw"

    @property
    def code(self) -> int:
        return kernels.GAUSSIAN_CODE if self is RingId.GAUSSIAN else kernels.EISENSTEIN_CODE


@dataclass(frozen=True)
class RingElement:
    """A lattice point c1*b1 + c2*b2 with exact integer coordinates."""

    c1: int
    c2: int
    ring: RingId

    @property
    def embedding(self) -> complex:
        if self.ring is RingId.GAUSSIAN:
            return complex(self.c1, self.c2)
        return self.c1 + self.c2 * OMEGA

    @property
    def is_zero(self) -> bool:
        return self.c1 == 0 and self.c2 == 0

    def __mul__(self, other: "RingElement") -> "RingElement":
        if not isinstance(other, RingElement) or other.ring is not self.ring:
            return NotImplemented
        a, b, c, d = self.c1, self.c2, other.c1, other.c2
        if self.ring is RingId.GAUSSIAN:
            return RingElement(a * c - b * d, a * d + b * c, self.ring)
        # (a + b w)(c + d w) with w^2 = -1 - w
        return RingElement(a * c - b * d, a * d + b * c - b * d, self.ring)

    def __neg__(self) -> "RingElement":
        return RingElement(-self.c1, -self.c2, self.ring)

    def __repr__(self) -> str:
        unit = "i" if self.ring is RingId.GAUSSIAN else "w"
        return f"{self.c1}{self.c2:+d}{unit}"


@dataclass(frozen=True)
class RingSpec:
    """Ring-dependent geometry constants."""

    ring: RingId
    basis: tuple[complex, complex]
    units: tuple[RingElement, ...]
    fundamental_area: float
    cell_vertex_offsets: tuple[complex, ...]
    edge_direction_count: int
    phase_sector: float


@lru_cache(maxsize=None)
def spec_of(ring: RingId) -> RingSpec:
    if ring is RingId.GAUSSIAN:
        units_ = tuple(
            RingElement(a, b, ring) for a, b in ((1, 0), (0, 1), (-1, 0), (0, -1))
        )
        offsets = tuple(
            complex(sx * 0.5, sy * 0.5) for sx in (1, -1) for sy in (1, -1)
        )
        return RingSpec(
            ring=ring,
            basis=(1 + 0j, 1j),
            units=units_,
            fundamental_area=1.0,
            cell_vertex_offsets=offsets,
            edge_direction_count=2,
            phase_sector=math.pi / 2,
        )
    units_ = tuple(
        RingElement(a, b, ring)
        for a, b in ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))
    )
    third = SQRT3 / 3.0
    offsets = tuple(
        z / 2.0
        for z in (
            complex(1, third),
            complex(1, -third),
            complex(-1, third),
            complex(-1, -third),
            complex(0, 2 * third),
            complex(0, -2 * third),
        )
    )
    return RingSpec(
        ring=ring,
        basis=(1 + 0j, OMEGA),
        units=units_,
        fundamental_area=SQRT3 / 2.0,
        cell_vertex_offsets=offsets,
        edge_direction_count=3,
        phase_sector=math.pi / 3,
    )


def units(ring: RingId) -> tuple[RingElement, ...]:
    """The unit group of the ring (4 elements for Z[i], 6 for Z[w])."""
    return spec_of(ring).units


def covering_radius(ring: RingId) -> float:
    """Largest possible distance from a point to its nearest lattice point."""
    return math.sqrt(2.0) / 2.0 if ring is RingId.GAUSSIAN else SQRT3 / 3.0


def _check_finite(z: complex) -> complex:
    z = complex(z)
    if not (cmath.isfinite(z)):
        raise InvalidInputError(f"non-finite input {z!r}")
    return z


def embed_coords(ring: RingId, coords: np.ndarray) -> np.ndarray:
    """Complex embedding of an integer coordinate array of shape (..., 2)."""
    coords = np.asarray(coords)
    c1 = coords[..., 0].astype(np.float64)
    c2 = coords[..., 1].astype(np.float64)
    if ring is RingId.GAUSSIAN:
        return c1 + 1j * c2
    return (c1 - 0.5 * c2) + 1j * (SQRT3 / 2.0) * c2


def basis_coords(ring: RingId, z: np.ndarray) -> np.ndarray:
    """Real-valued coordinates of complex points in the ring basis."""
    z = np.asarray(z, dtype=np.complex128)
    if ring is RingId.GAUSSIAN:
        return np.stack([z.real, z.imag], axis=-1)
    c2 = 2.0 * z.imag / SQRT3
    c1 = z.real + z.imag / SQRT3
    return np.stack([c1, c2], axis=-1)


def quantize(ring: RingId, z: complex) -> RingElement:
    """Nearest lattice point to ``z``; ties break to the largest embedding."""
    z = _check_finite(z)
    c1, c2 = kernels.nearest_array(
        ring.code, np.array([z.real]), np.array([z.imag])
    )
    return RingElement(int(c1[0]), int(c2[0]), ring)


def quantize_coords(ring: RingId, v) -> np.ndarray:
    """Componentwise nearest-point coordinates, shape (L, 2) int64."""
    v = np.asarray(v, dtype=np.complex128)
    if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
        raise InvalidInputError("non-finite component in input vector")
    c1, c2 = kernels.nearest_array(ring.code, v.real.ravel(), v.imag.ravel())
    return np.stack([c1, c2], axis=-1).reshape(v.shape + (2,))


def quantize_vector(ring: RingId, v) -> tuple[RingElement, ...]:
    """Componentwise :func:`quantize` of a complex vector."""
    coords = quantize_coords(ring, v)
    return tuple(RingElement(int(a), int(b), ring) for a, b in coords.reshape(-1, 2))


def quantize_full(ring: RingId, z: complex, tol: float | None = None) -> tuple[RingElement, ...]:
    """All lattice points within ``tol`` of the minimum distance to ``z``.

    With ``tol=None`` the relative default ``1e-9 * max(1, |z|)`` is used,
    which absorbs the floating-point error of cell vertices computed by the
    geometry layer.  The result always contains ``quantize(ring, z)``.
    """
    z = _check_finite(z)
    if tol is None:
        tol = 1e-9 * max(1.0, abs(z))
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    base = basis_coords(ring, np.array(z)).ravel()
    n1 = math.floor(base[0] + 0.5)
    n2 = math.floor(base[1] + 0.5)
    cands = [
        RingElement(int(n1 + d1), int(n2 + d2), ring)
        for d1 in (-1, 0, 1)
        for d2 in (-1, 0, 1)
    ]
    dists = [abs(z - c.embedding) for c in cands]
    thr = min(dists) + tol
    out = [c for c, d in zip(cands, dists) if d <= thr]
    out.sort(key=lambda c: (c.embedding.real, c.embedding.imag), reverse=True)
    return tuple(out)
