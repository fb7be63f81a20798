"""Character sums, twisted sums, Dirichlet polynomials, and the shift
decomposition.

Two summation modes are used throughout.  When the terms are roots of
unity with exactly-known rational angles (pure character sums, polynomial
twists with rational coefficients), the sum is accumulated as an exact
multiset of angles and only converted to a complex double at the end.
Otherwise terms are accumulated in fixed-size blocks combined left to
right, so results are reproducible and independent of any worker count.
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .characters import DirichletCharacter, RationalAngle

__all__ = [
    "RealPolynomial",
    "SumResult",
    "DecomposeResult",
    "char_sum",
    "twisted_sum",
    "dirichlet_poly",
    "taylor_approx_poly",
    "double_sum",
    "decompose",
]

# Residue tables are built for moduli up to this size.
_TABLE_CAP = 1 << 20
# Term-by-term exact angle accumulation is used up to this many terms.
_EXACT_CAP = 10**7
_BLOCK = 1 << 16


@dataclass(frozen=True)
class RealPolynomial:
    """A polynomial with real (float or exact rational) coefficients.

    ``coefficients[i]`` is the coefficient of x^i, constant term included.
    """

    coefficients: tuple

    @classmethod
    def make(cls, coeffs) -> "RealPolynomial":
        out = []
        for c in coeffs:
            if isinstance(c, (int, Fraction)):
                out.append(Fraction(c))
            else:
                out.append(float(c))
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return cls(tuple(out))

    @classmethod
    def zero(cls) -> "RealPolynomial":
        return cls((Fraction(0),))

    @property
    def degree(self) -> int:
        for i in range(len(self.coefficients) - 1, -1, -1):
            if self.coefficients[i] != 0:
                return i
        return 0

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    @property
    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coefficients)

    def eval_exact(self, x) -> Fraction:
        if not self.is_rational:
            raise ValueError("polynomial has non-rational coefficients")
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + float(c)
        return acc

    def angle_data(self) -> tuple[tuple[int, ...], int]:
        """Numerators over a common denominator D, for exact mod-1 evaluation.

        frac(G(x)) = ((sum_i n_i x^i) mod D) / D for integer x, computable
        in modular integer arithmetic.
        """
        if not self.is_rational:
            raise ValueError("polynomial has non-rational coefficients")
        den = 1
        for c in self.coefficients:
            den = math.lcm(den, c.denominator)
        nums = tuple(int(c * den) for c in self.coefficients)
        return nums, den

    def frac_at(self, x: int) -> Fraction:
        """G(x) mod 1 as an exact fraction (rational coefficients only)."""
        nums, den = self.angle_data()
        acc = 0
        for c in reversed(nums):
            acc = (acc * x + c) % den
        return Fraction(acc, den)


@dataclass(frozen=True)
class SumResult:
    """Value of a finite exponential sum plus how it was accumulated.

    ``exact_angle_terms`` is present in exact mode: a multiset of the
    rational angles of the nonzero terms (terms where the character
    vanishes are counted in ``term_count`` but carry no angle).
    """

    value: complex
    term_count: int
    mode: str
    exact_angle_terms: Optional[Counter] = field(default=None, repr=False)

    @property
    def abs(self) -> float:
        return abs(self.value)


def _value_from_angles(angles: Counter) -> complex:
    re = math.fsum(cnt * a.to_complex().real for a, cnt in angles.items())
    im = math.fsum(cnt * a.to_complex().imag for a, cnt in angles.items())
    return complex(re, im)


def _chi_tables(chi: DirichletCharacter):
    if chi.q > _TABLE_CAP:
        return None
    return chi.value_table


def _window_residue_counts(q: int, M: int, N: int) -> np.ndarray:
    """How often each residue class mod q occurs among M+1 .. M+N."""
    counts = np.full(q, N // q, dtype=np.int64)
    rem = N % q
    if rem:
        start = (M + 1) % q
        idx = (start + np.arange(rem)) % q
        np.add.at(counts, idx, 1)
    return counts


def char_sum(chi: DirichletCharacter, M: int, N: int) -> SumResult:
    """sum_{n=M+1}^{M+N} chi(n).

    Periodicity reduces the work to one pass over residues whenever a
    value table fits; the result is then exact.  For oversized moduli the
    sum falls back to per-term evaluation (exact angles up to the term
    cap, block-compensated floating accumulation beyond it).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    q = chi.q
    tables = _chi_tables(chi)
    if tables is not None:
        angles_tab, _ = tables
        counts = _window_residue_counts(q, M, N)
        angle_counts: Counter = Counter()
        for res in range(q):
            a = angles_tab[res]
            c = int(counts[res])
            if a is not None and c:
                angle_counts[a] += c
        return SumResult(_value_from_angles(angle_counts), N, "exact", angle_counts)
    if N <= _EXACT_CAP:
        angle_counts = Counter()
        for n in range(M + 1, M + N + 1):
            a = chi.evaluate(n)
            if a is not None:
                angle_counts[a] += 1
        return SumResult(_value_from_angles(angle_counts), N, "exact", angle_counts)
    return _float_sum(lambda n: chi(n), M, N)


def _float_sum(term, M: int, N: int) -> SumResult:
    """Blocked left-to-right accumulation of term(n) for n in (M, M+N]."""
    parts_re: list[float] = []
    parts_im: list[float] = []
    n = M + 1
    remaining = N
    while remaining > 0:
        size = min(_BLOCK, remaining)
        block = [term(n + i) for i in range(size)]
        parts_re.append(math.fsum(v.real for v in block))
        parts_im.append(math.fsum(v.imag for v in block))
        n += size
        remaining -= size
    return SumResult(complex(math.fsum(parts_re), math.fsum(parts_im)), N, "float")


def twisted_sum(chi: DirichletCharacter, M: int, N: int, G: RealPolynomial) -> SumResult:
    """sum_{n=M+1}^{M+N} chi(n) e(G(n)); reduces to char_sum when G = 0."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if G.is_zero:
        return char_sum(chi, M, N)
    q = chi.q
    tables = _chi_tables(chi)
    if G.is_rational and N <= 2 * 10**5 and tables is not None:
        angles_tab, _ = tables
        nums, den = G.angle_data()
        angle_counts: Counter = Counter()
        for n in range(M + 1, M + N + 1):
            a = angles_tab[n % q]
            if a is None:
                continue
            acc = 0
            for c in reversed(nums):
                acc = (acc * n + c) % den
            angle_counts[a + RationalAngle.make(Fraction(acc, den))] += 1
        return SumResult(_value_from_angles(angle_counts), N, "exact", angle_counts)
    if tables is not None and G.is_rational:
        _, vals = tables
        nums, den = G.angle_data()
        parts_re, parts_im = [], []
        n0 = M + 1
        remaining = N
        while remaining > 0:
            size = min(_BLOCK, remaining)
            ns = np.arange(n0, n0 + size, dtype=object)
            acc = np.zeros(size, dtype=object)
            for c in reversed(nums):
                acc = (acc * ns + c) % den
            phases = np.exp(2j * np.pi * (acc.astype(np.float64) / den))
            terms = vals[np.arange(n0, n0 + size) % q] * phases
            parts_re.append(float(np.sum(terms.real)))
            parts_im.append(float(np.sum(terms.imag)))
            n0 += size
            remaining -= size
        return SumResult(complex(math.fsum(parts_re), math.fsum(parts_im)), N, "float")
    return _float_sum(lambda n: chi(n) * cmath.exp(2j * math.pi * G.eval_float(n)), M, N)


def dirichlet_poly(chi: DirichletCharacter, M: int, N: int, t: float) -> SumResult:
    """sum_{n=M+1}^{M+N} chi(n) n^{it} with n^{it} = e(t log n / 2 pi)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if M + 1 <= 0:
        raise ValueError("window must start at a positive integer")
    if t == 0:
        return char_sum(chi, M, N)
    q = chi.q
    tables = _chi_tables(chi)
    if tables is None:
        return _float_sum(lambda n: chi(n) * cmath.exp(1j * t * math.log(n)), M, N)
    _, vals = tables
    parts_re, parts_im = [], []
    n0 = M + 1
    remaining = N
    while remaining > 0:
        size = min(_BLOCK, remaining)
        ns = np.arange(n0, n0 + size, dtype=np.float64)
        terms = vals[np.arange(n0, n0 + size) % q] * np.exp(1j * t * np.log(ns))
        parts_re.append(float(np.sum(terms.real)))
        parts_im.append(float(np.sum(terms.imag)))
        n0 += size
        remaining -= size
    return SumResult(complex(math.fsum(parts_re), math.fsum(parts_im)), N, "float")


def taylor_approx_poly(nu: int, t: float) -> RealPolynomial:
    """The phase polynomial G with (1+x)^{it} = e(t G(x)) (1 + O(|t| |x|^nu)).

    G(x) = F_{nu-1}(x) / (2 pi), degree nu - 1; for |x| <= 1/2 the error is
    at most 4 |t| |x|^nu.  ``t`` only scales the error bound, not G.
    """
    if nu < 2:
        raise ValueError("nu must be >= 2")
    del t
    coeffs = [0.0] + [(-1.0) ** (r - 1) / (2.0 * math.pi * r) for r in range(1, nu)]
    return RealPolynomial(tuple(coeffs))


def double_sum(g: RealPolynomial, P: int) -> SumResult:
    """S = sum_{y,z=1}^{P} e(g(y z))."""
    if P < 1:
        raise ValueError("P must be >= 1")
    products: Counter = Counter()
    for y in range(1, P + 1):
        for z in range(1, P + 1):
            products[y * z] += 1
    if g.is_rational:
        nums, den = g.angle_data()
        angle_counts: Counter = Counter()
        for prod, mult in products.items():
            acc = 0
            for c in reversed(nums):
                acc = (acc * prod + c) % den
            angle_counts[RationalAngle.make(Fraction(acc, den))] += mult
        return SumResult(_value_from_angles(angle_counts), P * P, "exact", angle_counts)
    re_parts, im_parts = [], []
    for prod in sorted(products):
        v = products[prod] * cmath.exp(2j * math.pi * g.eval_float(prod))
        re_parts.append(v.real)
        im_parts.append(v.imag)
    return SumResult(complex(math.fsum(re_parts), math.fsum(im_parts)), P * P, "float")


@dataclass(frozen=True)
class DecomposeResult:
    """Outcome of the shift decomposition S = core^{-2s} V + O(core^{3s})."""

    v_value: complex
    reconstruction: complex
    s_value: complex
    residual: float
    allowance: float
    holds: bool
    shift_exponent: int
    coprime_count: int
    term_count: int
    residual_constant: float


def decompose(chi: DirichletCharacter, M: int, N: int, G: RealPolynomial, s: int,
              residual_constant: float = 10.0, work_budget: float = 1e9) -> DecomposeResult:
    """Evaluate V = sum_{n in cN} chi(n) sum_{y,z <= core^s} chi(1 + core^s nbar y z) e(H_n(yz))
    and compare core^{-2s} V against the direct window sum.

    cN is the set of n in (M, M+N] coprime to q, nbar the inverse of n mod
    q, and H_n(x) = G(n + core^s x).  The residual |S - core^{-2s} V| is
    checked against residual_constant * core^{3s}; the constant stands in
    for an unspecified absolute one and is echoed in the result.
    """
    if s < 2:
        raise ValueError("shift exponent s must be >= 2")
    q = chi.q
    coreq = chi.modulus.core
    P = coreq**s
    ns = [n for n in range(M + 1, M + N + 1) if math.gcd(n, q) == 1]
    work = len(ns) * P * P
    if work > work_budget or P * P > (1 << 26):
        raise ValueError(f"work {work} (grid {P}x{P}) exceeds budget {work_budget}")
    tables = _chi_tables(chi)
    if tables is None:
        raise ValueError("modulus too large for a residue table")
    _, vals = tables

    yz = np.outer(np.arange(1, P + 1, dtype=np.int64), np.arange(1, P + 1, dtype=np.int64))

    if G.is_zero:
        ones = np.ones_like(yz, dtype=np.complex128)

        def phases_for(n: int) -> np.ndarray:
            return ones
    elif G.is_rational:
        nums, den = G.angle_data()

        def phases_for(n: int) -> np.ndarray:
            xs = (n + P * yz) % den
            acc = np.zeros_like(xs)
            for c in reversed(nums):
                acc = (acc * xs + c) % den
            return np.exp(2j * np.pi * (acc.astype(np.float64) / den))
    else:
        def phases_for(n: int) -> np.ndarray:
            xs = (n + P * yz).astype(np.float64)
            acc = np.zeros_like(xs)
            for c in reversed(G.coefficients):
                acc = acc * xs + float(c)
            return np.exp(2j * np.pi * acc)

    v_total = complex(0.0)
    for n in ns:
        nbar = pow(n, -1, q)
        idx = (1 + (P * nbar % q) * yz) % q
        inner = np.sum(vals[idx] * phases_for(n))
        v_total += chi(n) * complex(inner)

    s_val = twisted_sum(chi, M, N, G).value
    recon = v_total / (P * P)
    residual = abs(s_val - recon)
    allowance = residual_constant * float(coreq) ** (3 * s)
    return DecomposeResult(
        v_value=v_total, reconstruction=recon, s_value=s_val,
        residual=residual, allowance=allowance, holds=residual <= allowance,
        shift_exponent=s, coprime_count=len(ns), term_count=work,
        residual_constant=residual_constant,
    )
