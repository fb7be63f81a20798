"""Character construction, exact values, conductors, and the CRT restriction."""

import math
import random
from collections import Counter
from fractions import Fraction

import pytest

from corechar.characters import (
    DirichletCharacter,
    RationalAngle,
    crt_restrict,
    enumerate_characters,
    principal_character,
    quadratic_character,
)


def test_rational_angle_normalization():
    a = RationalAngle.make(Fraction(7, 6))
    assert (a.numerator, a.denominator) == (1, 6)
    assert RationalAngle.make(Fraction(-1, 4)) == RationalAngle(3, 4)
    assert RationalAngle(1, 2).to_complex() == -1.0
    assert RationalAngle(0, 1).to_complex() == 1.0


def test_evaluate_examples():
    chi0 = principal_character(9)
    for n in (1, 2, 4, 5, 7, 8):
        assert chi0.evaluate(n) == RationalAngle(0, 1)
    assert chi0.evaluate(3) is None

    leg3 = quadratic_character(3)
    assert leg3.evaluate(2) == RationalAngle(1, 2)  # 2 is a non-residue mod 3

    chi = enumerate_characters(9)[1]
    assert chi.evaluate(2) == RationalAngle(1, 6)
    assert chi.evaluate(4) == RationalAngle(1, 3)  # chi(4) = chi(2)^2


def test_enumerate_counts():
    chars9 = enumerate_characters(9)
    assert len(chars9) == 6
    assert sum(c.is_primitive for c in chars9) == 4
    chars3 = enumerate_characters(3)
    assert len(chars3) == 2
    assert sum(c.is_primitive for c in chars3) == 1
    assert not principal_character(3).is_primitive
    chars1 = enumerate_characters(1)
    assert len(chars1) == 1 and chars1[0].is_principal


def test_enumeration_deterministic():
    labels = [c.label() for c in enumerate_characters(45)]
    assert labels == [c.label() for c in enumerate_characters(45)]
    assert len(labels) == len(set(labels)) == 24  # phi(45)


def test_conductor_examples():
    assert principal_character(9).conductor == 1
    # the Legendre symbol mod 3 lifted to mod 9
    lifted = [c for c in enumerate_characters(9) if c.order == 2]
    assert len(lifted) == 1 and lifted[0].conductor == 3
    chi = enumerate_characters(9)[1]
    assert chi.order == 6 and chi.conductor == 9 and chi.is_primitive


@pytest.mark.parametrize("q", [8, 9, 12, 16, 27, 45])
def test_conductor_is_minimal_factoring_level(q):
    """Exhaustive oracle: the conductor is the least divisor q* of q with
    chi(n) depending only on n mod q* over units."""
    for chi in enumerate_characters(q):
        cond = chi.conductor
        assert q % cond == 0
        for qstar in sorted(d for d in range(1, q + 1) if q % d == 0):
            factors_through = all(
                chi.evaluate(m) == chi.evaluate(n)
                for m in range(1, q + 1) if math.gcd(m, q) == 1
                for n in range(1, q + 1) if math.gcd(n, q) == 1 and (m - n) % qstar == 0
            )
            if factors_through:
                assert qstar == cond
                break


@pytest.mark.parametrize("q", [7, 9, 16, 24, 45])
def test_multiplicativity_random_pairs(q):
    """10^4 random unit pairs per modulus, spread over all characters."""
    rng = random.Random(20260809)
    chars = enumerate_characters(q)
    units = [n for n in range(1, q + 1) if math.gcd(n, q) == 1]
    per_char = 10**4 // len(chars) + 1
    for chi in chars:
        for _ in range(per_char):
            m, n = rng.choice(units), rng.choice(units)
            lhs = chi.evaluate(m * n)
            rhs = RationalAngle.make(chi.evaluate(m).fraction + chi.evaluate(n).fraction)
            assert lhs == rhs


@pytest.mark.parametrize("gamma", [1, 2, 3, 4])
def test_two_real_characters_odd_prime_power(gamma):
    for p in (3, 5, 7):
        reals = [c for c in enumerate_characters(p**gamma) if c.is_real]
        assert len(reals) == 2
        orders = sorted(c.order for c in reals)
        assert orders == [1, 2]


def test_orthogonality_exact_small():
    """Nonprincipal characters hit each order-th root of unity equally often,
    which forces the full-period sum to vanish exactly."""
    for q in (3, 9, 27, 4, 8, 12, 45):
        for chi in enumerate_characters(q):
            values = Counter()
            for n in range(1, q + 1):
                a = chi.evaluate(n)
                if a is not None:
                    values[a] += 1
            phi = sum(values.values())
            if chi.is_principal:
                assert values == Counter({RationalAngle(0, 1): phi})
            else:
                counts = set(values.values())
                assert len(values) == chi.order
                assert counts == {phi // chi.order}


def test_conjugate():
    chi = enumerate_characters(9)[1]
    conj = chi.conjugate()
    for n in (1, 2, 4, 5, 7, 8):
        assert (chi.evaluate(n).fraction + conj.evaluate(n).fraction) % 1 == 0


def test_serialization_round_trip():
    for chi in enumerate_characters(45):
        again = DirichletCharacter.from_dict(chi.to_dict())
        assert again == chi


# -- CRT restriction ---------------------------------------------------------


def test_crt_restrict_identity_case():
    chi = enumerate_characters(9)[1]
    res = crt_restrict(chi, 0, 1)
    assert res.character == chi
    assert res.offset == RationalAngle(0, 1)
    assert res.shift == 0


@pytest.mark.parametrize("k", [1, 2, 4, 7])
def test_crt_restrict_pointwise_q45(k):
    """chi(k + r m) = e(offset) chi*(m + shift) for all m over a full period."""
    q, r = 45, 5
    s = q // r
    for chi in enumerate_characters(q, primitive_only=True):
        res = crt_restrict(chi, k, r)
        assert res.character.q == s
        for m in range(s):
            lhs = chi.evaluate(k + r * m)
            rhs = res.character.evaluate(m + res.shift)
            if lhs is None:
                assert rhs is None
            else:
                assert rhs is not None
                assert lhs == RationalAngle.make(res.offset.fraction + rhs.fraction)


def test_crt_restrict_principal():
    chi = principal_character(45)
    res = crt_restrict(chi, 1, 5)
    assert res.character.is_principal
    assert res.offset == RationalAngle(0, 1)


def test_crt_restrict_errors():
    chi = principal_character(12)
    with pytest.raises(ValueError):
        crt_restrict(chi, 1, 2)  # gcd(2, 6) != 1
    chi45 = principal_character(45)
    with pytest.raises(ValueError):
        crt_restrict(chi45, 5, 5)  # progression shares a factor with r
