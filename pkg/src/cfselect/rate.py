"""Computation-rate, MMSE scaling, and effective-noise evaluation.

For a channel ``h`` and integer coefficient vector ``a`` the achievable
rate per complex dimension is ``log2+(P / sigma_eff^2)`` where the
effective noise combines self noise ``P * ||alpha h - a||^2`` (integer
mismatch) and scaled Gaussian noise ``|alpha|^2 sigma^2``.  All functions
are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InternalError, InvalidInputError
from .rings import RingElement, RingId, embed_coords, quantize_coords


@dataclass(frozen=True)
class Channel:
    """Complex channel vector with its power/noise operating point.

    ``snr`` is linear and must equal ``power_p / sigma2``.  The default
    construction places the operating point at ``sigma2 = 1``.
    """

    h: np.ndarray
    snr: float
    power_p: float = field(default=None)  # type: ignore[assignment]
    sigma2: float = 1.0

    def __post_init__(self):
        h = np.atleast_1d(np.asarray(self.h, dtype=np.complex128))
        if h.ndim != 1 or h.size < 1:
            raise InvalidInputError("h must be a nonempty vector")
        if not np.all(np.isfinite(h.real)) or not np.all(np.isfinite(h.imag)):
            raise InvalidInputError("h must be finite")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)
        if self.power_p is None:
            object.__setattr__(self, "power_p", self.snr * self.sigma2)
        if not (self.snr > 0 and self.power_p > 0 and self.sigma2 > 0):
            raise InvalidInputError("snr, power_p, sigma2 must be positive")
        if abs(self.snr - self.power_p / self.sigma2) > 1e-9 * self.snr:
            raise InvalidInputError("snr must equal power_p / sigma2")

    @property
    def nusers(self) -> int:
        return int(self.h.size)

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.snr)

    def with_snr(self, snr: float) -> "Channel":
        """Same fading realization at a different operating point."""
        return Channel(self.h, snr=snr, sigma2=self.sigma2)


@dataclass(frozen=True)
class CoeffVector:
    """Integer coefficient vector, stored as exact (c1, c2) coordinate rows."""

    coords: np.ndarray
    ring: RingId

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.int64)
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise InvalidInputError("coords must have shape (L, 2)")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_elements(cls, elements) -> "CoeffVector":
        elements = tuple(elements)
        ring = elements[0].ring
        return cls(np.array([[e.c1, e.c2] for e in elements]), ring)

    @property
    def nusers(self) -> int:
        return int(self.coords.shape[0])

    @property
    def elements(self) -> tuple[RingElement, ...]:
        return tuple(RingElement(int(a), int(b), self.ring) for a, b in self.coords)

    @property
    def embedding(self) -> np.ndarray:
        return embed_coords(self.ring, self.coords)

    @property
    def is_zero(self) -> bool:
        return not self.coords.any()

    def key(self) -> tuple:
        return tuple(int(x) for x in self.coords.ravel())


@dataclass(frozen=True)
class RateResult:
    rate: float
    alpha: complex
    sigma2_eff: float
    self_noise: float
    scaled_gaussian_noise: float


def _check_pair(ch: Channel, a: CoeffVector):
    if a.nusers != ch.nusers:
        raise InvalidInputError(
            f"length mismatch: channel has {ch.nusers} users, vector {a.nusers}"
        )
    if a.is_zero:
        raise InvalidInputError("coefficient vector must be nonzero")


def mmse_alpha(ch: Channel, a: CoeffVector) -> complex:
    """Scaling factor minimizing the effective noise for the pair (h, a)."""
    _check_pair(ch, a)
    hdot = np.vdot(ch.h, a.embedding)  # h^H a
    return complex(ch.snr * hdot / (1.0 + ch.snr * float(np.vdot(ch.h, ch.h).real)))


def gram_matrix(ch: Channel):
    """Hermitian PD form M whose quadratic form is the inverse rate argument,
    together with its lower Cholesky factor."""
    L = ch.nusers
    hn2 = float(np.vdot(ch.h, ch.h).real)
    M = np.eye(L, dtype=np.complex128) - (ch.snr / (ch.snr * hn2 + 1.0)) * np.outer(
        ch.h, np.conj(ch.h)
    )
    try:
        chol = np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - M is PD for finite snr
        raise InternalError(f"gram matrix not positive definite: {exc}") from exc
    return M, chol


def rate_of_pair(ch: Channel, a: CoeffVector) -> RateResult:
    """Achievable rate for a fixed coefficient vector at the MMSE scaling."""
    _check_pair(ch, a)
    M, _ = gram_matrix(ch)
    emb = a.embedding
    q = max(float(np.real(np.conj(emb) @ M @ emb)), 1e-300)
    rate = max(0.0, -math.log2(q))
    alpha = mmse_alpha(ch, a)
    sg = abs(alpha) ** 2 * ch.sigma2
    self_noise = ch.power_p * float(np.sum(np.abs(alpha * ch.h - emb) ** 2))
    return RateResult(
        rate=rate,
        alpha=alpha,
        sigma2_eff=sg + self_noise,
        self_noise=self_noise,
        scaled_gaussian_noise=sg,
    )


def effective_noise(ch: Channel, alpha: complex, ring: RingId) -> float:
    """Effective noise at ``alpha`` with the induced quantized vector."""
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise InvalidInputError("alpha must be finite")
    z = alpha * ch.h
    emb = embed_coords(ring, quantize_coords(ring, z))
    return abs(alpha) ** 2 * ch.sigma2 + ch.power_p * float(np.sum(np.abs(z - emb) ** 2))


def rate_of_alpha(ch: Channel, alpha: complex, ring: RingId):
    """Rate achieved by quantizing ``alpha * h``; returns (result, vector).

    A zero induced vector is legal here (sampled searches hit the origin
    cell): the result carries rate 0 and the caller filters on
    ``vector.is_zero``.
    """
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise InvalidInputError("alpha must be finite")
    z = alpha * ch.h
    coords = quantize_coords(ring, z)
    vec = CoeffVector(coords, ring)
    emb = embed_coords(ring, coords)
    sg = abs(alpha) ** 2 * ch.sigma2
    self_noise = ch.power_p * float(np.sum(np.abs(z - emb) ** 2))
    sigma2_eff = sg + self_noise
    if vec.is_zero or sigma2_eff <= 0:
        rate = 0.0
    else:
        rate = max(0.0, math.log2(ch.power_p / sigma2_eff))
    result = RateResult(
        rate=rate,
        alpha=alpha,
        sigma2_eff=sigma2_eff,
        self_noise=self_noise,
        scaled_gaussian_noise=sg,
    )
    return result, vec
