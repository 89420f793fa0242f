"""Closed-form lower and upper bounds for multiprocessor pebbling cost."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InfeasibleError


@dataclass(frozen=True)
class BoundResult:
    """A lower/upper pair on optimal total cost; either side may be None."""

    lower: Fraction | float | None
    upper: Fraction | float | None
    note: str = ""


def trivial_bounds(n: int, k: int, r: int, g: int, delta_in: int) -> BoundResult:
    """n/k <= OPT <= n*(g*(delta_in+1)+1).

    Lower: every node is computed at least once and at most k computes share
    a step.  Upper: the sequential baseline loads each input, computes, and
    saves, node by node.  Needs r > delta_in to be playable at all.
    """
    if n < 1 or k < 1 or r < 1 or g < 1 or delta_in < 0:
        raise DomainError("need n,k,r,g >= 1 and delta_in >= 0")
    if r <= delta_in:
        raise InfeasibleError(
            f"no strategy exists with r={r} <= max in-degree {delta_in}"
        )
    return BoundResult(
        lower=Fraction(n, k),
        upper=Fraction(n * (g * (delta_in + 1) + 1)),
        note="compute-count lower bound / sequential baseline upper bound",
    )


def transfer_io_lower_bound(L: int, k: int) -> Fraction:
    """At least L/k I/O steps when a strategy must move L values through slow
    memory (each I/O step touches at most k values)."""
    if L < 0 or k < 1:
        raise DomainError("need L >= 0 and k >= 1")
    return Fraction(L, k)


def transfer_cost_lower_bound(n: int, L: int, k: int, g: int) -> Fraction:
    """Compute floor n/k plus g times the transfer I/O floor L/k."""
    if n < 1 or g < 1:
        raise DomainError("need n >= 1 and g >= 1")
    return Fraction(n, k) + g * transfer_io_lower_bound(L, k)


def fft_mpp_lower_bound(n: int, r: int, k: int, g: int) -> float:
    """Cost floor (n/k)*(g*log2(n)/log2(r*k) + 1) for the FFT-style DAG on n
    inputs: the classic red-blue I/O bound with pooled memory r*k, divided
    across k processors, plus the compute floor."""
    if n <= 1 or r * k <= 1:
        raise DomainError("need n > 1 and r*k > 1")
    if k < 1 or g < 1 or r < 1:
        raise DomainError("need r, k, g >= 1")
    return (n / k) * (g * math.log2(n) / math.log2(r * k) + 1)


def mmm_mpp_lower_bound(n: int, r: int, k: int, g: int):
    """Cost floor (n/k)*(g*(2*n^2/sqrt(r*k) + n) + 1) for classical n-by-n
    matrix multiplication; exact Fraction when r*k is a perfect square."""
    if n < 1 or r < 1 or k < 1 or g < 1:
        raise DomainError("need n, r, k, g >= 1")
    root = math.isqrt(r * k)
    if root * root == r * k:
        return Fraction(n, k) * (g * (2 * n * n * Fraction(1, root) + n) + 1)
    return (n / k) * (g * (2 * n * n / math.sqrt(r * k) + n) + 1)


def greedy_upper_factor(g: int, delta_in: int) -> int:
    """Approximation factor 2*(g*(delta_in+1)+1) that a non-recomputing
    scheduler can always achieve relative to the compute floor."""
    if g < 1 or delta_in < 0:
        raise DomainError("need g >= 1 and delta_in >= 0")
    return 2 * (g * (delta_in + 1) + 1)
