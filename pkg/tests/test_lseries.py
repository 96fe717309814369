import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntlab.arith import ArithmeticDomainError, build_prime_table
from ntlab.dirichlet import build_character_group
from ntlab.multfun import MultiplicativeFunction, mobius, mobius_tail, one, random_unitdisc
from ntlab.lseries import (
    ConfigError,
    G_truncated,
    HalfPlanePoint,
    build_grid,
    classify_exceptional,
    log_G_prime_sum,
    max_T,
    plancherel_check,
    plancherel_closed_form,
)


@pytest.fixture(scope="module")
def tb():
    return build_prime_table(10**6)


def real_nonprincipal(D):
    return [c for c in build_character_group(D).characters if c.is_real and not c.is_principal][0]


def test_half_plane_guard():
    with pytest.raises(ArithmeticDomainError):
        HalfPlanePoint(1.0)
    assert HalfPlanePoint(1 + 1e-9).s == complex(1 + 1e-9, 0)


def test_log_G_examples(tb):
    p1 = build_character_group(1).principal
    assert log_G_prime_sum(one(), p1, (10, 10), HalfPlanePoint(2), tb)[0] == 0
    v, corr = log_G_prime_sum(one(), p1, (2, 10), HalfPlanePoint(2), tb)
    assert v == pytest.approx(3**-2 + 5**-2 + 7**-2, abs=1e-15)
    assert v.real == pytest.approx(0.171519, abs=1e-6)
    assert corr > 0
    with pytest.raises(ArithmeticDomainError):
        log_G_prime_sum(one(), p1, (2, 10), 1.0, tb)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 60), st.floats(1.01, 3), st.floats(-50, 50), st.integers(10, 5000))
def test_log_G_triangle(seed, D, sigma, t, hi):
    tb = build_prime_table(5000)
    chi = build_character_group(D).characters[seed % build_character_group(D).phi]
    v, _ = log_G_prime_sum(random_unitdisc(seed, "completely"), chi, (D, hi), HalfPlanePoint(sigma, t), tb)
    bound = sum(float(p) ** -sigma for p in tb.primes_in(D, hi))
    assert abs(v) <= bound * (1 + 1e-12) + 1e-15


def test_G_truncated_oracles(tb):
    p1 = build_character_group(1).principal
    assert G_truncated(one(), p1, HalfPlanePoint(2), 1, tb) == (1, 1.0)
    v, tail = G_truncated(one(), p1, HalfPlanePoint(2), 10**5, tb)
    assert abs(v - float(mpmath.zeta(2))) <= tail
    v, tail = G_truncated(mobius(), p1, HalfPlanePoint(2), 10**5, tb)
    assert abs(v - 1 / float(mpmath.zeta(2))) <= tail
    with pytest.raises(ArithmeticDomainError):
        G_truncated(one(), p1, 0.5, 10, tb)


@pytest.mark.parametrize("seed", range(20))
def test_euler_product(seed, tb):
    rng = np.random.default_rng(seed)
    D = int(rng.integers(1, 30))
    group = build_character_group(D)
    chi = group.characters[int(rng.integers(group.phi))]
    s = HalfPlanePoint(float(rng.uniform(1.5, 3)), float(rng.uniform(-20, 20)))
    g = random_unitdisc(seed, "completely")
    x = 20000
    primes = tb.primes_in(1, x)
    z = g.prime_values(primes) * chi.values_at(primes) * np.exp(-s.s * np.log(primes))
    euler = np.exp(-np.sum(np.log1p(-z)))
    v, tail = G_truncated(g, chi, s, x, tb)
    assert abs(euler - v) <= tail


def test_grid_invariants():
    grid = build_grid(5, 1e5, 3.0)
    assert grid.t_spacing <= 1 / math.log(1e5) + 1e-15
    assert min(grid.sigma_values) == pytest.approx(1 + 1 / math.log(1e5))
    assert np.allclose(grid.t_values, -grid.t_values[::-1])
    j = np.arange(65)
    assert np.allclose(grid.endpoints, 5 * (1e5 / 5) ** (j / 64))
    with pytest.raises(ConfigError):
        build_grid(5, 1e5, 3.0, t_spacing=1.0)


def test_classifier_trivial(tb):
    zero = MultiplicativeFunction(lambda p, k: np.zeros(np.shape(p)), "completely")
    r = classify_exceptional(zero, 7, 1e5, 0.5, tb)
    assert r.J == () and all(e["max_logG"] == 0 for e in r.characters)
    assert all(e["exponents"] != [0] * len(e["exponents"]) for e in r.characters)
    assert len(r.characters) == build_character_group(7).phi - 1


def test_classifier_twisted_unit(tb):
    chi0 = real_nonprincipal(5)
    g = MultiplicativeFunction(lambda p, k: np.conj(chi0.values_at(np.asarray(p))) * (np.asarray(p) > 5) ** k, "completely")
    x = 1e6
    r = classify_exceptional(g, 5, x, 0.5, tb)
    entry = next(e for e in r.characters if e["exponents"] == list(chi0.exponents))
    sigma = 1 + 1 / math.log(x)
    expect = float(np.sum(tb.primes_in(5, x).astype(float) ** -sigma))
    assert entry["max_logG"] == pytest.approx(expect, rel=1e-9)
    assert all(e["max_logG"] < entry["max_logG"] for e in r.characters if e is not entry)
    r = classify_exceptional(g, 5, x, 0.25, tb, slack=0.0)
    assert r.J == (chi0,)


def test_classifier_errors(tb):
    g = mobius_tail(5)
    with pytest.raises(ConfigError):
        classify_exceptional(g, 5, 20, 0.5, tb)
    with pytest.raises(ConfigError):
        classify_exceptional(g, 5, 1e5, 0.5, tb, grid=build_grid(5, 1e5, 100.0))
    assert max_T(5, 1e5, 0.5) < 100


def test_classifier_monotone_in_alpha(tb):
    g = random_unitdisc(3, "completely")
    grid = build_grid(3, 1e5, max_T(3, 1e5, 0.2))
    J = [set(classify_exceptional(g, 3, 1e5, a, tb, grid=grid, slack=0.0).J) for a in (0.2, 0.4, 0.8, 1.6)]
    assert all(b <= a for a, b in zip(J, J[1:]))


def test_classifier_mobius_tail_small(tb):
    r = classify_exceptional(mobius_tail(7), 7, 1e6, 0.5, tb)
    assert len(r.J) <= 1 and all(c.is_real for c in r.J)


def test_containment_across_ranges(tb):
    """A grid interval inside (D, x] is also inside (D, N], so the max over (D, N] dominates."""
    g = random_unitdisc(11, "completely")
    x, N = 10**5, 10**6
    T = max_T(4, x, 0.5)
    rx = classify_exceptional(g, 4, x, 0.5, tb, grid=build_grid(4, x, T, t_spacing=1 / math.log(N)))
    sigma = 1 + 1 / math.log(N)
    rN = classify_exceptional(g, 4, N, 0.5, tb, grid=build_grid(4, N, T, sigma_values=[sigma]))
    primes = tb.primes_in(4, x)
    chi = build_character_group(4).characters[1]
    full_x = abs(log_G_prime_sum(g, chi, (4, x), HalfPlanePoint(sigma), tb)[0])
    assert rN.characters[0]["max_logG"] >= full_x - 1e-12
    assert rx.characters[0]["max_logG"] > 0 and primes.size > 0


def test_plancherel_examples():
    assert plancherel_check(np.zeros(11), 1.5).lhs == 0
    f = np.zeros(2, dtype=complex)
    f[1] = 1
    for sigma in (1.2, 2.0):
        r = plancherel_check(f, sigma)
        assert r.rhs == pytest.approx(2 * math.pi / (2 * sigma), rel=1e-14)
        assert r.lhs == pytest.approx(math.pi / sigma, rel=1e-6)
    rng = np.random.default_rng(0)
    f = np.concatenate(([0], rng.uniform(-1, 1, 100) + 1j * rng.uniform(-1, 1, 100)))
    r = plancherel_check(f, 1.5)
    assert r.converged and r.relative_error <= 1e-2
    assert plancherel_closed_form(f, 1.5) == pytest.approx(r.rhs, rel=1e-10)
