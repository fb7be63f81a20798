"""Dirichlet characters with exact rational-angle values.

A character mod q is stored as one exponent vector per prime-power part of
q, taken against the canonical unit-group basis of that prime power.  All
values are exact angles a/b (meaning e(a/b) = exp(2*pi*i*a/b)); conversion
to floating-point complex numbers happens only at summation boundaries.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, NamedTuple, Optional

from .arith import (
    FactoredModulus,
    as_modulus,
    discrete_log,
    dlog_table,
    unit_group_basis,
)

__all__ = [
    "RationalAngle",
    "DirichletCharacter",
    "principal_character",
    "quadratic_character",
    "enumerate_characters",
    "crt_restrict",
    "RestrictedCharacter",
]


@dataclass(frozen=True, order=True)
class RationalAngle:
    """A reduced fraction in [0, 1) representing the root of unity e(n/d)."""

    numerator: int
    denominator: int

    @classmethod
    def make(cls, value) -> "RationalAngle":
        f = Fraction(value) % 1
        return cls(f.numerator, f.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __add__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle.make(self.fraction + other.fraction)

    def scaled(self, k: int) -> "RationalAngle":
        return RationalAngle.make(k * self.fraction)

    def to_complex(self) -> complex:
        if self.numerator == 0:
            return complex(1.0, 0.0)
        if 2 * self.numerator == self.denominator:
            return complex(-1.0, 0.0)
        return cmath.exp(2j * math.pi * self.numerator / self.denominator)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


ZERO_ANGLE = RationalAngle(0, 1)


def e(angle: RationalAngle | Fraction | float) -> complex:
    """e(t) = exp(2*pi*i*t)."""
    if isinstance(angle, RationalAngle):
        return angle.to_complex()
    return cmath.exp(2j * math.pi * float(angle))


class _Component(NamedTuple):
    p: int
    gamma: int
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character mod q, identified by its exponent vectors.

    ``components[i]`` is the exponent vector of the character against
    ``unit_group_basis(p_i, gamma_i)`` where (p_i, gamma_i) runs over the
    factorization of q.  The exponent vectors are the character's identity
    for serialization and deduplication.
    """

    modulus: FactoredModulus
    components: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.components) != len(self.modulus.factors):
            raise ValueError("one exponent vector per prime power required")
        for (p, g), exps in zip(self.modulus.factors, self.components):
            basis = unit_group_basis(p, g)
            if len(exps) != len(basis.orders):
                raise ValueError(f"component for {p}^{g} has wrong length")
            for k, o in zip(exps, basis.orders):
                if not 0 <= k < o:
                    raise ValueError(f"exponent {k} out of range for order {o}")

    @property
    def q(self) -> int:
        return self.modulus.q

    @cached_property
    def order(self) -> int:
        out = 1
        for (p, g), exps in zip(self.modulus.factors, self.components):
            basis = unit_group_basis(p, g)
            for k, o in zip(exps, basis.orders):
                out = math.lcm(out, o // math.gcd(k, o))
        return out

    @property
    def is_principal(self) -> bool:
        return all(k == 0 for exps in self.components for k in exps)

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    # -- evaluation ---------------------------------------------------------

    @cached_property
    def _tables(self):
        """Per-prime-power lookup data used by evaluate().

        The full dlog table is precomputed for prime powers below the size
        cap; larger components fall back to per-call discrete logs.
        """
        out = []
        for (p, g), exps in zip(self.modulus.factors, self.components):
            basis = unit_group_basis(p, g)
            table = dlog_table(p, g) if p**g <= (1 << 22) else None
            out.append((p**g, table, basis, exps))
        return out

    def evaluate(self, n: int) -> Optional[RationalAngle]:
        """Exact angle of chi(n), or None when gcd(n, q) > 1 (the value 0)."""
        n %= self.q
        if math.gcd(n, self.q) != 1:
            return None
        total = Fraction(0)
        for mod, table, basis, exps in self._tables:
            res = n % mod
            dlog = table[res] if table is not None else discrete_log(res, basis)
            for ell, k, o in zip(dlog, exps, basis.orders):
                if k:
                    total += Fraction(k * ell, o)
        return RationalAngle.make(total)

    def __call__(self, n: int) -> complex:
        a = self.evaluate(n)
        return complex(0.0) if a is None else a.to_complex()

    @cached_property
    def value_table(self) -> tuple[tuple[Optional[RationalAngle], ...], "object"]:
        """(angles, complex values) of chi on all residues 0..q-1.

        The complex side is a numpy array; built lazily and only for
        moduli small enough to tabulate.
        """
        import numpy as np

        if self.q > (1 << 20):
            raise ValueError(f"value table for q = {self.q} exceeds the size cap")
        angles: list[Optional[RationalAngle]] = [None] * self.q
        vals = np.zeros(self.q, dtype=np.complex128)
        for n in range(self.q):
            a = self.evaluate(n)
            angles[n] = a
            if a is not None:
                vals[n] = a.to_complex()
        return tuple(angles), vals

    def conjugate(self) -> "DirichletCharacter":
        comps = []
        for (p, g), exps in zip(self.modulus.factors, self.components):
            basis = unit_group_basis(p, g)
            comps.append(tuple((-k) % o for k, o in zip(exps, basis.orders)))
        return DirichletCharacter(self.modulus, tuple(comps))

    # -- conductor ----------------------------------------------------------

    @cached_property
    def conductor(self) -> int:
        """Least q* | q such that chi factors through (Z/q*)^x."""
        cond = 1
        for (p, g), exps in zip(self.modulus.factors, self.components):
            cond *= p ** _component_conductor_exponent(p, g, exps)
        return cond

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.q

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "components": [
                {"p": p, "gamma": g, "exponents": list(exps)}
                for (p, g), exps in zip(self.modulus.factors, self.components)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DirichletCharacter":
        q = as_modulus(data["q"])
        by_pp = {(c["p"], c["gamma"]): tuple(c["exponents"]) for c in data["components"]}
        comps = []
        for p, g in q.factors:
            if (p, g) not in by_pp:
                raise ValueError(f"missing component for {p}^{g}")
            comps.append(by_pp[(p, g)])
        return cls(q, tuple(comps))

    def label(self) -> str:
        parts = []
        for (p, g), exps in zip(self.modulus.factors, self.components):
            parts.append(f"{p}^{g}:" + ",".join(map(str, exps)))
        return f"chi[{self.q}|" + ";".join(parts) + "]"


def _component_conductor_exponent(p: int, gamma: int, exps: tuple[int, ...]) -> int:
    """Exponent of p in the conductor of a prime-power character component.

    Derived from the basis structure: for odd p (cyclic, generator order
    p^(gamma-1)(p-1)) the component is trivial on the units = 1 mod p^beta
    exactly when p^(gamma-beta) | k.  For p = 2 the {-1, 5} basis gives
    conductor 1, 4 or 2^(gamma - v2(e2)).
    """
    if all(k == 0 for k in exps):
        return 0
    if p != 2:
        k = exps[0]
        beta = 1
        while beta < gamma and k % (p ** (gamma - beta)) != 0:
            beta += 1
        return beta
    if gamma == 2:
        return 2  # the nontrivial character mod 4
    e1, e2 = exps
    if e2 == 0:
        return 2
    beta = 3
    while beta < gamma and e2 % (2 ** (gamma - beta)) != 0:
        beta += 1
    # the {-1} part never raises the conductor above 4, the 5-part floor is 8
    return beta


def principal_character(q) -> DirichletCharacter:
    """The character that is 1 on every unit mod q."""
    m = as_modulus(q)
    comps = tuple(
        tuple(0 for _ in unit_group_basis(p, g).orders) for p, g in m.factors
    )
    return DirichletCharacter(m, comps)


def quadratic_character(q) -> DirichletCharacter:
    """The order-2 character mod an odd prime power (the Legendre lift)."""
    m = as_modulus(q)
    if len(m.factors) != 1 or m.factors[0][0] == 2:
        raise ValueError("quadratic_character expects an odd prime power")
    p, g = m.factors[0]
    order = unit_group_basis(p, g).orders[0]
    return DirichletCharacter(m, ((order // 2,),))


def enumerate_characters(q, primitive_only: bool = False) -> list[DirichletCharacter]:
    """All phi(q) characters mod q in lexicographic exponent order."""
    m = as_modulus(q)
    ranges = []
    for p, g in m.factors:
        basis = unit_group_basis(p, g)
        ranges.append(
            list(itertools.product(*(range(o) for o in basis.orders)))
        )
    out = []
    for combo in itertools.product(*ranges) if ranges else [()]:
        chi = DirichletCharacter(m, tuple(combo))
        if primitive_only and not chi.is_primitive:
            continue
        out.append(chi)
    return out


def iter_characters(q, primitive_only: bool = False) -> Iterator[DirichletCharacter]:
    yield from enumerate_characters(q, primitive_only)


class RestrictedCharacter(NamedTuple):
    """Decomposition of m -> chi(k + r*m) for q = r*s with gcd(r, s) = 1.

    The identity is chi(k + r*m) = e(offset) * character(m + shift) for
    every integer m, both sides vanishing together.  ``shift`` is r^{-1}k
    mod s; it is zero exactly when s | k, in which case the restriction is
    a plain character multiplied by a constant phase.
    """

    character: DirichletCharacter
    offset: RationalAngle
    shift: int

    def value(self, m: int) -> complex:
        a = self.character.evaluate(m + self.shift)
        if a is None:
            return complex(0.0)
        return (self.offset + a).to_complex()


def crt_restrict(chi: DirichletCharacter, k: int, r: int) -> RestrictedCharacter:
    """Restrict chi mod q = r*s to the progression k + r*Z, as a character mod s.

    Writes chi = chi_r * chi_s over the coprime split q = r*s and uses
    k + r*m = r*(r^{-1}k + m) mod s, so that

        chi(k + r*m) = chi_r(k) * chi_s(r) * chi_s(m + r^{-1}k mod s).
    """
    q = chi.q
    if q % r != 0:
        raise ValueError(f"r = {r} does not divide q = {q}")
    s = q // r
    if math.gcd(r, s) != 1:
        raise ValueError(f"gcd(r, s) = gcd({r}, {s}) != 1")
    r_factors = [i for i, (p, _) in enumerate(chi.modulus.factors) if r % p == 0]
    s_factors = [i for i in range(len(chi.modulus.factors)) if i not in r_factors]

    mod_s = as_modulus(s)
    chi_s = DirichletCharacter(mod_s, tuple(chi.components[i] for i in s_factors))

    # chi_r(k): accumulate the angle over the prime powers dividing r
    if math.gcd(k, r) != 1:
        raise ValueError(
            f"gcd(k, r) = gcd({k}, {r}) != 1: the progression meets no units mod q"
        )
    offset = Fraction(0)
    for i in r_factors:
        p, g = chi.modulus.factors[i]
        basis = unit_group_basis(p, g)
        dlog = dlog_table(p, g)[k % (p**g)]
        for ell, kk, o in zip(dlog, chi.components[i], basis.orders):
            if kk:
                offset += Fraction(kk * ell, o)
    a_r = chi_s.evaluate(r % s) if s > 1 else ZERO_ANGLE
    if a_r is None:  # unreachable: gcd(r, s) = 1
        raise ArithmeticError("chi_s(r) vanished on a unit")
    offset += a_r.fraction
    shift = (pow(r, -1, s) * k) % s if s > 1 else 0
    return RestrictedCharacter(chi_s, RationalAngle.make(offset), shift)
