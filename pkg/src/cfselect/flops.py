"""Floating-point operation accounting.

Complex additions cost 2 flops and complex multiplications 6 flops
(4 real multiplies + 2 real adds); rounding operations are free.  Work is
charged per algorithmic step from closed-form per-item costs, so totals
are deterministic functions of the candidate counts:

* rate evaluation of one candidate vector (length L) via the reduced
  quadratic form ||a||^2 - c |h^H a|^2: 2L+1 cmul, 2L-1 cadd;
* effective-noise evaluation at one sampled scaling factor: the product
  alpha*h (L cmul), the subtraction of the quantized vector (L cadd), the
  squared norm (L cmul, L-1 cadd), the scaled-noise term and final add
  (2 cmul, 1 cadd);
* quantizing one length-L vector: L cmul (the rounding itself is free);
* one cell vertex: 1 cadd (center plus precomputed offset);
* one pairwise line crossing: 2 cmul, 1 cadd (2x2 solve).

Counters are plain mutable objects injected per invocation; nothing is
global, so concurrent selector calls stay independent.
"""

from __future__ import annotations

from dataclasses import dataclass

COMPLEX_ADD_FLOPS = 2
COMPLEX_MUL_FLOPS = 6


@dataclass
class FlopCounter:
    complex_adds: int = 0
    complex_muls: int = 0

    @property
    def total_flops(self) -> int:
        return COMPLEX_ADD_FLOPS * self.complex_adds + COMPLEX_MUL_FLOPS * self.complex_muls

    def add(self, cmul: int = 0, cadd: int = 0) -> None:
        self.complex_muls += int(cmul)
        self.complex_adds += int(cadd)

    def merge(self, other: "FlopCounter") -> None:
        self.complex_muls += other.complex_muls
        self.complex_adds += other.complex_adds


def charge_rate_eval(counter: FlopCounter | None, nusers: int, n: int = 1) -> None:
    if counter is not None:
        counter.add(cmul=n * (2 * nusers + 1), cadd=n * (2 * nusers - 1))


def charge_noise_eval(counter: FlopCounter | None, nusers: int, n: int = 1) -> None:
    if counter is not None:
        counter.add(cmul=n * (2 * nusers + 2), cadd=n * 2 * nusers)


def charge_quantize(counter: FlopCounter | None, nusers: int, n: int = 1) -> None:
    if counter is not None:
        counter.add(cmul=n * nusers)


def charge_vertex(counter: FlopCounter | None, n: int) -> None:
    if counter is not None:
        counter.add(cadd=n)


def charge_crossing(counter: FlopCounter | None, n: int) -> None:
    if counter is not None:
        counter.add(cmul=2 * n, cadd=n)
