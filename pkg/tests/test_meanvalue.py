import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntlab.arith import ArithmeticDomainError, build_prime_table
from ntlab.dirichlet import build_character_group
from ntlab.meanvalue import (
    M,
    N,
    Y,
    exponential_decay_check,
    lemma_I4_experiment,
    lemma_I5_check,
    lemma_I6_report,
    progression_sums,
    shiu_bound_check,
    theorem1_decompose,
    truncated_decay_check,
    values,
)
from ntlab.multfun import MultiplicativeFunction, batch_evaluate, mobius, one, random_sign, random_unitdisc, two_power_omega


@pytest.fixture(scope="module")
def tb():
    return build_prime_table(2 * 10**5)


def smooth_numbers(Y, lo, hi):
    """Y-smooth integers in (lo, hi] by explicit generation."""
    primes = [p for p in range(2, int(Y) + 1) if all(p % d for d in range(2, p))]
    out = {1}
    for p in primes:
        frontier = list(out)
        for n in frontier:
            m = n * p
            while m <= hi:
                out.add(m)
                m *= p
    return sorted(n for n in out if lo < n <= hi)


def test_partial_sums(tb):
    mu = values(mobius(), 100, tb)
    assert M(mu, 10) == -1
    assert N(mu, 1) == 0
    assert M(values(one(), 100, tb), 57.9) == 57
    f = values(random_unitdisc(2), 100, tb)
    assert N(f, 30) == pytest.approx(sum(f[n] * math.log(n) for n in range(1, 31)), abs=1e-12)


def test_Y_examples(tb):
    mu = values(mobius(), 100, tb)
    assert Y(mu, 1, 20, 3, []) == -1
    f = values(random_unitdisc(4), 100, tb)
    group = build_character_group(12)
    assert abs(Y(f, 5, 100, 12, group.characters)) < 1e-9
    direct = sum(f[n] for n in range(1, 101) if n % 12 == 5)
    assert Y(f, 5, 100, 12, []) == pytest.approx(direct, abs=1e-12)
    with pytest.raises(ArithmeticDomainError):
        Y(f, 4, 100, 12, [])
    with pytest.raises(ArithmeticDomainError):
        Y(f, 1, 100, 12, [build_character_group(5).principal])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 40), st.floats(-2, 2), st.floats(-2, 2))
def test_Y_linear(seed, D, al, be):
    tb = build_prime_table(500)
    f = values(random_unitdisc(seed), 500, tb)
    h = values(random_unitdisc(seed + 1), 500, tb)
    J = build_character_group(D).characters[: max(1, D // 3)]
    lhs = Y(al * f + be * h, 1, 500, D, J)
    rhs = al * Y(f, 1, 500, D, J) + be * Y(h, 1, 500, D, J)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs)) * 100


def test_progression_sums_invariants(tb):
    f = values(random_unitdisc(8), 1000, tb)
    ps = progression_sums(f, 15, 1000)
    assert abs(np.sum(ps.reduced()) - ps.coprime_total) <= 1e-9 * abs(ps.coprime_total)
    for a in (1, 2, 7, 14):
        assert abs(ps[a] - sum(f[n] for n in range(a, 1001, 15))) <= 1e-12


def test_lemma_I5_examples():
    group = build_character_group(12)
    assert lemma_I5_check(np.zeros(201, dtype=complex), 12, []) == (0.0, 0.0)
    rng = np.random.default_rng(1)
    b = np.concatenate(([0], rng.normal(size=200) + 1j * rng.normal(size=200)))
    lhs, rhs = lemma_I5_check(b, 12, group.characters)
    assert lhs < 1e-18 and rhs == 0
    lhs, rhs = lemma_I5_check(b, 12, [group.principal])
    assert abs(lhs - rhs) <= 1e-9 * rhs


def test_decomposition_examples(tb):
    r = theorem1_decompose(one(), 1, 100, 2, [], 0.5, tb)
    assert r.progression_sum == 50 and r.principal_term == 50 and r.residual == 0
    g = random_unitdisc(5)
    r1 = theorem1_decompose(g, 1, 500, 1, [], 0.5, tb)
    assert r1.progression_sum == pytest.approx(M(values(g, 500, tb), 500))
    assert r1.principal_term == pytest.approx(r1.progression_sum, abs=1e-12)
    assert abs(r1.residual) <= 1e-12
    with pytest.raises(ArithmeticDomainError):
        theorem1_decompose(g, 1, 500, 5, [build_character_group(5).principal], 0.5, tb)
    with pytest.raises(ArithmeticDomainError):
        theorem1_decompose(g, 2, 500, 4, [], 0.5, tb)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 50), st.integers(100, 10**4))
def test_full_set_leaves_no_residual(seed, D, y):
    tb = build_prime_table(10**4)
    group = build_character_group(D)
    J = [c for c in group.characters if not c.is_principal]
    g = random_unitdisc(seed)
    r = theorem1_decompose(g, 1, y, D, J, 0.5, tb)
    assert abs(r.residual) <= 1e-9 * max(1.0, abs(r.progression_sum))
    rev = theorem1_decompose(g, 1, y, D, J[::-1], 0.5, tb)
    assert abs(abs(rev.residual) - abs(r.residual)) <= 1e-12


def test_envelopes(tb):
    r = theorem1_decompose(mobius(), 1, 10**4, 5, [], 0.5, tb)
    ly, lD = math.log(1e4), math.log(5)
    expect = 1e4 / (4 * ly) * (1 + 1 / 2) * (1 + 1 / 3) * (ly / lD) ** 0.5
    assert r.error_envelope == pytest.approx(expect)
    assert r.simplified_envelope == pytest.approx(1e4 / 5 * (lD / ly) ** 0.5)


def test_shiu_examples(tb):
    r = shiu_bound_check(one(), 1, 3, 10**4, tb)
    assert r.lhs == 3334
    assert 0 < r.ratio < math.inf
    delta = MultiplicativeFunction(lambda p, k: np.zeros(np.shape(p)), "general")
    assert shiu_bound_check(delta, 1, 3, 100, tb).lhs in (0.0, 1.0)
    r = shiu_bound_check(two_power_omega(), 1, 5, 10**5, tb)
    assert 0.1 <= r.ratio <= 10
    with pytest.raises(ArithmeticDomainError):
        shiu_bound_check(mobius(), 1, 3, 100, tb)


def test_truncated_decay(tb):
    ind = lambda Y: MultiplicativeFunction(lambda p, k: (np.asarray(p) <= Y).astype(float), "completely")
    r = truncated_decay_check(ind(1), 2**11, 10**5, 1, 1, 2, tb)
    assert r.lhs == 0
    r = truncated_decay_check(ind(10), 2**11, 2 * 10**5, 10, 1, 2, tb)
    oracle = [n for n in smooth_numbers(10, 2**11, 2 * 10**5) if n % 2 == 1]
    assert r.lhs == len(oracle)
    shapes = [truncated_decay_check(ind(10), w, 2 * 10**5, 10, 1, 2, tb).rhs_shape for w in (2**11, 2**13, 2**15, 2**17)]
    assert all(a >= b for a, b in zip(shapes, shapes[1:]))
    with pytest.raises(ArithmeticDomainError):
        truncated_decay_check(ind(10), 100, 10**5, 10, 1, 2, tb)
    with pytest.raises(ArithmeticDomainError):
        truncated_decay_check(ind(20), 2**11, 10**5, 10, 1, 2, tb)


def test_exponential_decay(tb):
    g = MultiplicativeFunction(lambda p, k: (np.asarray(p) <= 30).astype(float), "exponentially")
    r = exponential_decay_check(g, 300, 10**5, 30, 1, 3, tb)
    gv = values(g, 10**5, tb)
    assert r.lhs == pytest.approx(sum(gv[n].real for n in range(301, 10**5 + 1) if n % 3 == 1))
    assert r.ratio > 0


def test_lemma_I6_report(tb):
    g = random_sign(1)
    rep = lemma_I6_report(g, 5000, 1.0, tb)
    f = values(g, 5000, tb)
    assert rep.lhs == pytest.approx(abs(N(f, 5000)))
    assert rep.integral_term >= 0 and rep.local_term >= 0 and rep.E0 >= 0
    y = 5000 - 5000 / math.log(5000)
    running = [abs(sum(f[n] * math.log(n) for n in range(math.floor(y) + 1, t + 1))) for t in range(math.floor(y) + 1, 5001)]
    assert rep.E0 == pytest.approx(max(running))


def test_lemma_I4_experiment(tb):
    g = MultiplicativeFunction(lambda p, k: (np.asarray(p) > 9).astype(float), "completely")
    J = [build_character_group(3).principal]
    rows = lemma_I4_experiment(g, 3, J, [100, 1000], 10**4, 0.5, tb)
    f = values(g, 1000, tb)
    chi = build_character_group(3).characters[1]
    run = max(abs(sum(f[n] * chi(n) for n in range(1, y + 1))) ** 2 for y in range(2, 1001))
    assert rows[1].lhs == pytest.approx(run)
