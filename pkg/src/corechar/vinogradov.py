"""Exact counting for the Vinogradov system and the double-sum inequality.

N_{k,d}(P) counts 2k-tuples (y, z) in [1,P]^{2k} whose first d power sums
agree.  The production count is meet-in-the-middle: tabulate the signature
(sum y^r)_{r<=d} of every k-tuple and add up squared multiplicities.  A
literal all-pairs enumeration is kept alongside as the independent oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .expsums import RealPolynomial, double_sum

__all__ = [
    "PowerSumSignature",
    "power_sum_signature",
    "count_vinogradov",
    "count_vinogradov_naive",
    "rational_approx",
    "korobov_check",
    "KorobovReport",
    "ford_bound",
    "ford_k_search",
    "FordReport",
]

_TUPLE_BUDGET = 1 << 26


@dataclass(frozen=True)
class PowerSumSignature:
    """The d power sums of a k-tuple: sums[r-1] = sum_i y_i^r.

    Tuples from [1, P]^k satisfy k <= sums[r-1] <= k * P^r.
    """

    k: int
    d: int
    sums: tuple[int, ...]


def power_sum_signature(values: Sequence[int], d: int) -> PowerSumSignature:
    sums = []
    powers = list(values)
    for _ in range(d):
        sums.append(sum(powers))
        powers = [p * v for p, v in zip(powers, values)]
    return PowerSumSignature(k=len(values), d=d, sums=tuple(sums))


def _signature_array(k: int, d: int, P: int) -> Optional[np.ndarray]:
    """(P^k, d) int64 array of power-sum signatures, or None if it cannot
    be represented safely in 64-bit arithmetic."""
    if P**k > (1 << 22):
        return None
    if any(k * P**r >= (1 << 62) for r in range(1, d + 1)):
        return None
    powers = np.empty((P, d), dtype=np.int64)
    base = np.arange(1, P + 1, dtype=np.int64)
    col = base.copy()
    for r in range(d):
        powers[:, r] = col
        if r + 1 < d:
            col = col * base
    total = P**k
    sigs = np.zeros((total, d), dtype=np.int64)
    idx = np.arange(total)
    for coord in range(k):
        digits = (idx // P**coord) % P
        sigs += powers[digits]
    return sigs


def count_vinogradov(k: int, d: int, P: int, tuple_budget: int = _TUPLE_BUDGET) -> int:
    """Exact N_{k,d}(P) via a signature table: sum over v of r(v)^2.

    Arbitrary-precision fallback keeps the count exact when k*P^d
    overflows 64-bit intermediates.  Errors when the P^k-entry table
    would exceed ``tuple_budget``.
    """
    if k < 1 or d < 1 or P < 1:
        raise ValueError("need k, d, P >= 1")
    if P**k > tuple_budget:
        raise ValueError(f"signature table of {P}^{k} tuples exceeds the budget")
    sigs = _signature_array(k, d, P)
    if sigs is not None:
        # encode rows losslessly: mixed radix in (k*(P^r - 1) + 1) per column
        radices = [k * (P**r - 1) + 1 for r in range(1, d + 1)]
        if math.prod(radices) < (1 << 62):
            code = np.zeros(len(sigs), dtype=np.int64)
            for r in range(d):
                code = code * radices[r] + (sigs[:, r] - k)
            _, counts = np.unique(code, return_counts=True)
        else:
            _, counts = np.unique(sigs, axis=0, return_counts=True)
        return sum(int(c) * int(c) for c in counts)
    # big-integer path
    table: dict[tuple, int] = {}
    for combo in itertools.product(range(1, P + 1), repeat=k):
        sig = power_sum_signature(combo, d).sums
        table[sig] = table.get(sig, 0) + 1
    return sum(c * c for c in table.values())


def count_vinogradov_naive(k: int, d: int, P: int, pair_budget: int = 10**8) -> int:
    """Independent oracle: enumerate all (y, z) pairs and compare power sums.

    Literal 2k-fold iteration for small instances; a chunked all-pairs
    array comparison (still no multiplicity shortcut) above that.
    """
    if k < 1 or d < 1 or P < 1:
        raise ValueError("need k, d, P >= 1")
    pairs = P ** (2 * k)
    if pairs > pair_budget:
        raise ValueError(f"{pairs} pairs exceed the oracle budget")
    if pairs <= 4 * 10**6:
        powers = [[y**r for r in range(1, d + 1)] for y in range(P + 1)]
        count = 0
        tuples = list(itertools.product(range(1, P + 1), repeat=k))
        sigs = [tuple(sum(powers[y][r] for y in t) for r in range(d)) for t in tuples]
        for sy in sigs:
            for sz in sigs:
                if sy == sz:
                    count += 1
        return count
    sigs_arr = _signature_array(k, d, P)
    if sigs_arr is None:
        raise ValueError("instance too large for the 64-bit all-pairs oracle")
    count = 0
    chunk = max(1, (1 << 24) // max(1, len(sigs_arr) * d))
    for start in range(0, len(sigs_arr), chunk):
        block = sigs_arr[start:start + chunk]
        eq = np.all(block[:, None, :] == sigs_arr[None, :, :], axis=2)
        count += int(np.sum(eq, dtype=np.int64))
    return count


def rational_approx(alpha, bound: int) -> tuple[int, int, float]:
    """Best rational a/b with b <= bound: alpha = a/b + theta/b^2, |theta| <= 1.

    Exact rationals whose denominator already fits return themselves with
    theta = 0; otherwise the last continued-fraction convergent with
    denominator <= bound is used (floats are first converted exactly).
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    exact = Fraction(alpha)
    if exact.denominator <= bound:
        return exact.numerator, exact.denominator, 0.0
    # continued-fraction convergents h/k of the exact value
    num, den = exact.numerator, exact.denominator
    h_prev, k_prev = 1, 0
    h, k = math.floor(exact), 1
    frac = exact - math.floor(exact)
    num, den = frac.numerator, frac.denominator
    while k <= bound and num != 0:
        a = den // num
        num, den = den - a * num, num
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k
        if k > bound:
            h, k = h_prev, k_prev
            break
    theta = float((exact - Fraction(h, k)) * k * k)
    return h, k, theta


@dataclass(frozen=True)
class KorobovReport:
    """Both sides of the double-sum inequality, with everything that feeds it.

    lhs = |S|^(2k^2) for S = sum e(g(yz)); rhs is the product
    (64 k^2 log 3Q)^{d/2} * W * P^{2k(2k-1)} * N_{k,d}(P) with
    Q = max b_r and W = prod_r min(P^r, P^r b_r^{-1/2} + b_r^{1/2}).
    Comparison is done in log space with a small relative slack.
    """

    k: int
    d: int
    P: int
    Q: int
    W: float
    lhs: float
    rhs: float
    lhs_log: float
    rhs_log: float
    holds: bool
    vinogradov_count: int
    s_abs: float
    coefficient_approximations: tuple[tuple[int, int, float], ...]


def korobov_check(coefficients: Sequence, k: int, P: int,
                  approximations: Optional[Sequence[tuple[int, int, float]]] = None,
                  denominator_bound: Optional[int] = None,
                  slack: float = 1e-9) -> KorobovReport:
    """Verify |S|^(2k^2) <= (64 k^2 log 3Q)^(d/2) W P^(2k(2k-1)) N_{k,d}(P).

    ``coefficients`` are (c_1 .. c_d) of g(x) = c_1 x + ... + c_d x^d (no
    constant term).  Approximations (a_r, b_r, theta_r) may be supplied;
    otherwise they are derived, exactly for rational coefficients.
    """
    coeffs = [Fraction(c) if isinstance(c, (int, Fraction)) else float(c)
              for c in coefficients]
    d = len(coeffs)
    while d > 1 and coeffs[d - 1] == 0:
        d -= 1
    coeffs = coeffs[:d]
    if d < 2:
        raise ValueError("the double-sum inequality needs degree >= 2")
    if k < 1:
        raise ValueError("k must be >= 1")

    if approximations is None:
        approximations = []
        for c in coeffs:
            if isinstance(c, Fraction):
                approximations.append(rational_approx(c, max(1, c.denominator)))
            elif denominator_bound is not None:
                approximations.append(rational_approx(c, denominator_bound))
            else:
                raise ValueError("float coefficients need a denominator_bound")
    approximations = tuple(approximations)
    if len(approximations) != d:
        raise ValueError("one approximation per coefficient required")
    for (_, b, theta) in approximations:
        if b < 1 or abs(theta) > 1.0 + 1e-12:
            raise ValueError("approximations must have b >= 1 and |theta| <= 1")

    Q = max(b for _, b, _ in approximations)
    log_w = 0.0
    w = 1.0
    for r, (_, b, _) in enumerate(approximations, start=1):
        factor = min(float(P) ** r, float(P) ** r / math.sqrt(b) + math.sqrt(b))
        log_w += math.log(factor)
        w *= factor

    n_count = count_vinogradov(k, d, P)
    g = RealPolynomial.make([0] + list(coeffs))
    s_res = double_sum(g, P)
    s_abs = s_res.abs

    lhs_log = -math.inf if s_abs == 0.0 else 2 * k * k * math.log(s_abs)
    rhs_log = ((d / 2.0) * math.log(64.0 * k * k * math.log(3.0 * Q))
               + log_w + 2 * k * (2 * k - 1) * math.log(P) + math.log(n_count))
    holds = lhs_log <= rhs_log + math.log1p(slack)

    def _exp(x: float) -> float:
        try:
            return math.exp(x)
        except OverflowError:
            return math.inf

    return KorobovReport(
        k=k, d=d, P=P, Q=Q, W=w,
        lhs=_exp(lhs_log), rhs=_exp(rhs_log),
        lhs_log=lhs_log, rhs_log=rhs_log, holds=holds,
        vinogradov_count=n_count, s_abs=s_abs,
        coefficient_approximations=approximations,
    )


@dataclass(frozen=True)
class FordReport:
    """log of the mean-value bound d^(3d^3) P^(2k - 0.499 d^2) at some k."""

    d: int
    P: int
    k: int
    log_bound: float
    k_range: tuple[int, int]
    meets_lemma_range: bool  # the guarantee is stated for d >= 129


def ford_bound(d: int, P: int, k: int) -> float:
    """log of d^(3d^3) * P^(2k - 0.499 d^2) (the value itself overflows)."""
    if d < 1 or P < 1 or k < 1:
        raise ValueError("need d, P, k >= 1")
    return 3.0 * d**3 * math.log(d) + (2.0 * k - 0.499 * d * d) * math.log(P)


def ford_k_search(d: int, P: int) -> FordReport:
    """Scan k in [2d^2, 4d^2] for the smallest log-bound."""
    lo, hi = 2 * d * d, 4 * d * d
    best_k, best = lo, ford_bound(d, P, lo)
    for k in range(lo + 1, hi + 1):
        val = ford_bound(d, P, k)
        if val < best:
            best_k, best = k, val
    return FordReport(d=d, P=P, k=best_k, log_bound=best,
                      k_range=(lo, hi), meets_lemma_range=d >= 129)
