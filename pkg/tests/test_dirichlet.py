import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntlab.arith import ArithmeticDomainError, ResourceRefusal, euler_phi
from ntlab.dirichlet import build_character_group, char_order, char_value, partial_char_sum


def brute_force_characters(D):
    """All homomorphisms (Z/D)* -> C*, found by solving on a generating set by search."""
    units = [a for a in range(1, D + 1) if math.gcd(a, D) == 1]
    phi = len(units)
    roots = [np.exp(2j * np.pi * k / phi) for k in range(phi)]
    found = []
    for choice in itertools.product(range(phi), repeat=len(units)):
        vals = {a % D: roots[c] for a, c in zip(units, choice)}
        if all(abs(vals[a * b % D] - vals[a] * vals[b]) < 1e-9 for a in vals for b in vals):
            found.append(vals)
    return found


def brute_order(vals, D):
    for k in range(1, 100):
        if all(abs(v**k - 1) < 1e-9 for v in vals.values()):
            return k


@pytest.mark.parametrize("D, orders", [(4, [1, 2]), (5, [1, 2, 4, 4]), (8, [1, 2, 2, 2])])
def test_order_multisets_match_brute_force(D, orders):
    group = build_character_group(D)
    assert sorted(c.order for c in group.characters) == orders
    assert sorted(brute_order(v, D) for v in brute_force_characters(D)) == orders


def test_modulus_one():
    group = build_character_group(1)
    assert len(group.characters) == 1
    chi = group.principal
    assert all(chi(n) == 1 for n in range(1, 20))


def test_modulus_guard():
    with pytest.raises(ResourceRefusal):
        build_character_group(0)


def test_char_value_examples():
    g4 = build_character_group(4)
    principal, real = g4.characters
    assert char_value(principal, 6) == 0
    assert char_value(real, 3) == -1
    for D in (3, 7, 12, 35):
        for chi in build_character_group(D).characters:
            assert char_value(chi, 1) == 1
    with pytest.raises(ArithmeticDomainError):
        char_value(real, 0)


def test_char_order_examples():
    assert char_order(build_character_group(4).characters[1]) == 2
    assert char_order(build_character_group(9).principal) == 1
    g5 = build_character_group(5)
    assert g5.generators[0][1] == 4
    assert char_order(g5.character([1])) == 4


def test_partial_sum_examples():
    principal, real = build_character_group(4).characters
    assert partial_char_sum(real, 0, 10) == 1
    assert partial_char_sum(principal, 0, 8) == 4
    for D in (5, 12, 21):
        for chi in build_character_group(D).characters[1:]:
            assert abs(partial_char_sum(chi, 0, D)) < 1e-12
    with pytest.raises(ArithmeticDomainError):
        partial_char_sum(real, 5, 3)


def test_partial_sum_matches_direct():
    chi = build_character_group(15).characters[5]
    for u, v in [(0, 1), (3, 40), (17, 17), (7, 100)]:
        direct = sum(chi(n) for n in range(u + 1, v + 1))
        assert abs(partial_char_sum(chi, u, v) - direct) < 1e-12


@pytest.mark.parametrize("D", [8, 16, 32, 64, 24, 100, 200])
def test_group_structure(D):
    group = build_character_group(D)
    assert math.prod(group.orders) == euler_phi(D)
    seen = set()
    for a in group.reduced_residues:
        vec = group.exponent_vector(int(a))
        assert vec is not None and vec not in seen
        seen.add(vec)
        rebuilt = 1
        for (g, _), e in zip(group.generators, vec):
            rebuilt = rebuilt * pow(g, e, D) % D
        assert rebuilt == a % D
    assert group.exponent_vector(2) is None


def test_exact_angles():
    chi = build_character_group(7).character([1])
    assert chi.angle(3) == Fraction(1, 6)
    assert chi.angle(7) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 120), st.data())
def test_multiplicative_and_zero_pattern(D, data):
    group = build_character_group(D)
    chi = group.characters[data.draw(st.integers(0, len(group.characters) - 1))]
    m = data.draw(st.integers(1, 200))
    n = data.draw(st.integers(1, 200))
    assert abs(chi(m * n) - chi(m) * chi(n)) < 1e-12
    assert (chi(n) == 0) == (math.gcd(n, D) > 1)
    assert euler_phi(D) % chi.order == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 200), st.data())
def test_order_of_product_divides_lcm(D, data):
    chars = build_character_group(D).characters
    a = chars[data.draw(st.integers(0, len(chars) - 1))]
    b = chars[data.draw(st.integers(0, len(chars) - 1))]
    lcm = a.order * b.order // math.gcd(a.order, b.order)
    assert lcm % (a * b).order == 0
    assert (a * b.conj()).is_principal == (a == b)
