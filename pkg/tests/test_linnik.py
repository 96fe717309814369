import math

import numpy as np
import pytest

from ntlab.arith import build_prime_table
from ntlab.dirichlet import build_character_group
from ntlab.linnik import bb13_discrepancy, least_prime_row, least_primes, run_linnik, select_character
from ntlab.lseries import ConfigError


@pytest.fixture(scope="module")
def tb():
    return build_prime_table(10**5)


def brute_least(D, bound=2000):
    out = {}
    for p in range(2, bound):
        if all(p % d for d in range(2, int(p**0.5) + 1)) and math.gcd(p, D) == 1:
            out.setdefault(p % D, p)
    return out


@pytest.mark.parametrize("D", [2, 4, 7, 12, 30, 97])
def test_least_primes_brute(D, tb):
    assert least_primes(D, tb) == brute_least(D)


def test_least_prime_examples(tb):
    assert least_primes(4, tb) == {1: 5, 3: 3}
    assert least_primes(2, tb) == {1: 3}
    row = least_prime_row(5, tb)
    assert row.max_prime == 19 and row.argmax_a == 4
    assert row.max_exponent == pytest.approx(math.log(19) / math.log(5))


def test_bb13_no_character(tb):
    N = 10**5
    disc, a = bb13_discrepancy(7, None, N, 0.5, tb)
    primes = [int(p) for p in tb.primes_in(N**0.5, N)]
    total = sum(1 / p for p in primes)
    errs = {b: abs(6 * sum(1 / p for p in primes if p % 7 == b) - total) for b in range(1, 7)}
    assert disc == pytest.approx(max(errs.values()))
    assert errs[a] == pytest.approx(disc)
    with pytest.raises(ConfigError):
        bb13_discrepancy(400, None, N, 0.5, tb)


def test_bb13_with_character_exact(tb):
    """With chi chosen, the main term adds chi(a) sum chi(p)/p."""
    N = 10**5
    chi = [c for c in build_character_group(5).characters if c.is_real and not c.is_principal][0]
    disc, _ = bb13_discrepancy(5, chi, N, 0.5, tb)
    primes = [int(p) for p in tb.primes_in(N**0.5, N)]
    total = sum(1 / p for p in primes)
    tw = sum(chi(p).real / p for p in primes)
    errs = [abs(4 * sum(1 / p for p in primes if p % 5 == b) - total - chi(b).real * tw) for b in range(1, 5)]
    assert disc == pytest.approx(max(errs))


def test_select_character_threshold(tb):
    chosen, cand, best, thr = select_character(5, 10**5, tb)
    assert cand is not None and cand.is_real and not cand.is_principal
    assert thr == pytest.approx(0.5 * math.log(math.log(1e5) / math.log(5)) + 1)
    assert (chosen is not None) == (best >= thr)
    assert select_character(3, 10**5, tb)[1] is not None


def test_run_linnik_small(tb):
    rep = run_linnik(20, 10**5, 0.5, tb)
    assert rep["all_classes_found"]
    assert rep["max_exponent_at"] == {"D": 5, "a": 4, "p": 19}
    assert len(rep["least_primes"]) == 19
    bb = rep["bb13"]
    assert bb["violations"] == [] and bb["within_shape"]
    with pytest.raises(ConfigError):
        run_linnik(1000, 10**5, 0.5, tb)
