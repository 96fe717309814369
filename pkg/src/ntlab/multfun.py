"""Multiplicative functions given by rules on prime powers.

A rule is a pure callable ``rule(p, k)`` taking an integer ndarray of primes
(or a plain int) and a positive int exponent, and returning values of the
same shape.  The mode decides which exponents the rule is consulted at:

* ``general``        g(p^k) = rule(p, k)
* ``completely``     g(p^k) = rule(p, 1)**k
* ``exponentially``  g(p^k) = rule(p, 1)**k / k!
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .arith import ArithmeticDomainError, PrimeTable, build_prime_table
from .dirichlet import Character
from .rng import uniform_at

MODES = ("general", "completely", "exponentially")
VERIFY_BOUND = 10_000
MAX_FACTORIAL_K = 170
UNIT_DISC_TOL = 1e-12

Rule = Callable[[np.ndarray, int], np.ndarray]


class ContractBreach(ValueError):
    """A value left the complex unit disc although the function promised it would not."""


@dataclass(frozen=True, eq=False)
class MultiplicativeFunction:
    rule: Rule
    mode: str = "general"
    unit_disc: bool = True
    name: str = "g"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    def __repr__(self):
        return f"MultiplicativeFunction({self.name!r}, mode={self.mode})"

    def prime_power(self, p, k: int):
        """g(p^k) for a prime (or ndarray of primes) p and fixed k >= 1."""
        scalar = np.ndim(p) == 0
        pa = np.atleast_1d(np.asarray(p, dtype=np.int64))
        if k < 1:
            raise ArithmeticDomainError("prime-power exponent must be >= 1")
        if self.mode == "general":
            v = np.asarray(self.rule(pa, k), dtype=complex)
        else:
            base = np.asarray(self.rule(pa, 1), dtype=complex)
            v = base**k
            if self.mode == "exponentially":
                if k > MAX_FACTORIAL_K:
                    raise ArithmeticDomainError(f"k={k} exceeds the factorial range")
                v = v / math.factorial(k)
        v = np.broadcast_to(v, pa.shape).astype(complex)
        if self.unit_disc and v.size and np.max(np.abs(v)) > 1 + UNIT_DISC_TOL:
            raise ContractBreach(f"{self.name}: |g(p^{k})| > 1")
        return complex(v[0]) if scalar else v

    def prime_values(self, primes) -> np.ndarray:
        return self.prime_power(np.asarray(primes, dtype=np.int64), 1)


def _const(values: dict[int, complex], default: complex = 0.0) -> Rule:
    def rule(p, k):
        return np.full(np.shape(p), values.get(k, default), dtype=complex)

    return rule


def one() -> MultiplicativeFunction:
    return MultiplicativeFunction(_const({}, 1.0), "completely", name="one")


def mobius() -> MultiplicativeFunction:
    return MultiplicativeFunction(_const({1: -1.0}), "general", name="mobius")


def mobius_tail(D: int) -> MultiplicativeFunction:
    """mu(n) when every prime factor of n exceeds D, else 0."""

    def rule(p, k):
        p = np.asarray(p)
        return np.where(p > D, -1.0 if k == 1 else 0.0, 0.0).astype(complex)

    return MultiplicativeFunction(rule, "general", name=f"mobius-tail({D})")


def unit_tail(D: int) -> MultiplicativeFunction:
    """Completely multiplicative, 1 on primes p > D and 0 on p <= D."""

    def rule(p, k):
        return np.where(np.asarray(p) > D, 1.0, 0.0).astype(complex)

    return MultiplicativeFunction(rule, "completely", name=f"unit-tail({D})")


def random_unitdisc(seed: int, mode: str = "general") -> MultiplicativeFunction:
    """Uniform draws from the closed unit disc at every prime power.

    g(p^k) = sqrt(u0) e(u1) with u0, u1 taken at counters 2c, 2c+1 of the
    stream (seed, "random-unitdisc"), c = 64 p + k.
    """

    def rule(p, k):
        c = 64 * np.asarray(p, dtype=np.uint64) + np.uint64(k)
        u0 = uniform_at(seed, "random-unitdisc", 2 * c)
        u1 = uniform_at(seed, "random-unitdisc", 2 * c + 1)
        return np.sqrt(u0) * np.exp(2j * np.pi * u1)

    return MultiplicativeFunction(rule, mode, name=f"random-unitdisc({seed})")


def random_real_prime_values(seed: int, lo: float = 0.0, hi: float = 1.0, mode: str = "completely"):
    """Real values drawn uniformly from [lo, hi] at primes, keyed by (seed, p)."""

    def rule(p, k):
        u = uniform_at(seed, "random-real", np.asarray(p, dtype=np.uint64))
        return (lo + (hi - lo) * u).astype(complex)

    return MultiplicativeFunction(rule, mode, unit_disc=max(abs(lo), abs(hi)) <= 1, name=f"random-real({seed})")


def random_sign(seed: int) -> MultiplicativeFunction:
    """Completely multiplicative with g(p) = +-1 at random."""

    def rule(p, k):
        u = uniform_at(seed, "random-sign", np.asarray(p, dtype=np.uint64))
        return np.where(u < 0.5, -1.0, 1.0).astype(complex)

    return MultiplicativeFunction(rule, "completely", name=f"random-sign({seed})")


def two_power_omega() -> MultiplicativeFunction:
    return MultiplicativeFunction(_const({}, 2.0), "general", unit_disc=False, name="2^omega")


def mobius_braid(g: MultiplicativeFunction) -> MultiplicativeFunction:
    """(g mu)(p^k) = g(p^k) mu(p^k)."""

    def rule(p, k):
        if k > 1:
            return np.zeros(np.shape(p), dtype=complex)
        return -g.prime_power(p, 1)

    return MultiplicativeFunction(rule, "general", g.unit_disc, name=f"{g.name}*mu")


_NAMED = {
    "one": lambda: one(),
    "mobius": lambda: mobius(),
    "mobius-tail": lambda D: mobius_tail(int(D)),
    "unit-tail": lambda D: unit_tail(int(D)),
    "random-unitdisc": lambda s: random_unitdisc(int(s)),
    "random-sign": lambda s: random_sign(int(s)),
}


def from_name(spec: str) -> MultiplicativeFunction:
    """Parse 'one', 'mobius', 'mobius-tail(5)', 'unit-tail(7)', 'random-unitdisc(42)', 'random-sign(3)'."""
    m = re.fullmatch(r"\s*([a-z-]+)\s*(?:\(\s*(-?\d+)\s*\))?\s*", spec)
    if not m or m.group(1) not in _NAMED:
        raise ValueError(f"unknown function {spec!r}; known: {sorted(_NAMED)}")
    name, arg = m.groups()
    maker = _NAMED[name]
    try:
        return maker(arg) if arg is not None else maker()
    except TypeError as exc:
        raise ValueError(f"bad argument list for {name!r}") from exc


def evaluate(g: MultiplicativeFunction, n: int, table: PrimeTable) -> complex:
    value = 1.0 + 0j
    for p, k in table.factorize(n):
        value *= g.prime_power(p, k)
    return complex(value)


def batch_evaluate(g: MultiplicativeFunction, x: int, table: PrimeTable) -> np.ndarray:
    """Array v with v[n] = g(n) for 1 <= n <= x and v[0] = 0."""
    x = int(x)
    if x > table.bound:
        raise ArithmeticDomainError(f"x={x} exceeds table bound {table.bound}")
    vals = np.zeros(x + 1, dtype=complex)
    if x >= 1:
        vals[1] = 1.0
    if x < 2:
        return vals
    primes = table.primes[: table.prime_count(x)]
    k = 1
    pk = primes.copy()
    while primes.size:
        vals[pk] = g.prime_power(primes, k)
        k += 1
        keep = pk <= x // primes
        primes = primes[keep]
        pk = pk[keep] * primes
    q, m = table.prime_power_split
    q = q[: x + 1]
    m = m[: x + 1]
    pending = np.flatnonzero(m > 1)
    done = np.zeros(x + 1, dtype=bool)
    done[1] = True
    done[q[q > 1]] = True
    while pending.size:
        ready = done[m[pending]]
        r = pending[ready]
        vals[r] = vals[q[r]] * vals[m[r]]
        done[r] = True
        pending = pending[~ready]
    return vals


def dirichlet_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a * b)[n] = sum over d | n of a[d] b[n/d], index 0 unused."""
    x = min(len(a), len(b)) - 1
    c = np.zeros(x + 1, dtype=np.result_type(a, b, complex))
    for d in range(1, x + 1):
        if a[d] != 0:
            c[d :: d] += a[d] * b[1 : x // d + 1]
    return c


def twist(g: MultiplicativeFunction, chi: Character, t: float) -> MultiplicativeFunction:
    """n -> g(n) chi(n) n^{it}, in the same mode as g."""

    def rule(p, k):
        p = np.asarray(p, dtype=np.int64)
        return g.prime_power(p, k) * chi.values_at(p) ** k * np.exp(1j * k * t * np.log(p))

    return MultiplicativeFunction(
        rule, g.mode, g.unit_disc, name=f"{g.name}.chi{list(chi.exponents)}mod{chi.modulus}.n^{t}i"
    )


def generalized_character(chi: Character, t: float) -> MultiplicativeFunction:
    """p -> chi(p) p^{it}, completely multiplicative."""
    return twist(one(), chi, t)


@dataclass(frozen=True, eq=False)
class ConvolutionPair:
    left: MultiplicativeFunction
    right: MultiplicativeFunction
    target: MultiplicativeFunction

    def verify(self, bound: int = VERIFY_BOUND, tol: float = 1e-12) -> float:
        """Max |(left*right)(n) - target(n)| over n <= bound; raises if above tol."""
        table = _verify_table(bound)
        lv = batch_evaluate(self.left, bound, table)
        rv = batch_evaluate(self.right, bound, table)
        gv = batch_evaluate(self.target, bound, table)
        err = float(np.max(np.abs(dirichlet_convolve(lv, rv) - gv)))
        if err > tol:
            raise ContractBreach(f"convolution split off by {err:.3g} on n <= {bound}")
        return err


@lru_cache(maxsize=4)
def _verify_table(bound: int) -> PrimeTable:
    return build_prime_table(max(bound, 2))


def split_head_tail(g: MultiplicativeFunction, cutoff: float) -> ConvolutionPair:
    """g = f * h with f on primes above the cutoff and h on primes at or below it."""
    if cutoff < 2:
        raise ArithmeticDomainError("cutoff must be >= 2")

    def f_rule(p, k):
        return np.where(np.asarray(p) > cutoff, g.prime_power(p, k), 0)

    def h_rule(p, k):
        return np.where(np.asarray(p) <= cutoff, g.prime_power(p, k), 0)

    pair = ConvolutionPair(
        MultiplicativeFunction(f_rule, "general", g.unit_disc, name=f"{g.name}[p>{cutoff}]"),
        MultiplicativeFunction(h_rule, "general", g.unit_disc, name=f"{g.name}[p<={cutoff}]"),
        g,
    )
    pair.verify()
    return pair


def split_completely_multiplicative(g: MultiplicativeFunction) -> ConvolutionPair:
    """g = l * r with l(p^k) = g(p)^k and r(p^k) = g(p^k) - g(p) g(p^{k-1})."""

    def l_rule(p, k):
        return g.prime_power(p, 1)

    def r_rule(p, k):
        prev = g.prime_power(p, k - 1) if k > 1 else 1.0
        return g.prime_power(p, k) - g.prime_power(p, 1) * prev

    pair = ConvolutionPair(
        MultiplicativeFunction(l_rule, "completely", g.unit_disc, name=f"{g.name}:l"),
        MultiplicativeFunction(r_rule, "general", False, name=f"{g.name}:r"),
        g,
    )
    pair.verify()
    return pair


def _check_unit_interval(values: np.ndarray, name: str) -> None:
    v = np.atleast_1d(values)
    if np.any(np.abs(v.imag) > UNIT_DISC_TOL) or np.any(v.real < -UNIT_DISC_TOL) or np.any(v.real > 1 + UNIT_DISC_TOL):
        raise ArithmeticDomainError(f"{name}: prime values must be real and in [0, 1]")


def split_exponential(g: MultiplicativeFunction) -> ConvolutionPair:
    """g = l * r with l exponentially multiplicative, l(p^k) = g(p)^k / k!.

    r(p^k) = sum_{j=0}^{k} (-g(p))^j / j! * g(p^{k-j}).
    """

    def l_rule(p, k):
        v = g.prime_power(p, 1)
        _check_unit_interval(v, g.name)
        return v

    def r_rule(p, k):
        gp = g.prime_power(p, 1)
        _check_unit_interval(gp, g.name)
        total = np.zeros(np.shape(gp), dtype=complex)
        for j in range(k + 1):
            rest = g.prime_power(p, k - j) if k > j else 1.0
            total = total + (-gp) ** j / math.factorial(j) * rest
        return total

    pair = ConvolutionPair(
        MultiplicativeFunction(l_rule, "exponentially", g.unit_disc, name=f"{g.name}:l"),
        MultiplicativeFunction(r_rule, "general", False, name=f"{g.name}:r"),
        g,
    )
    _check_unit_interval(g.prime_values(_verify_table(VERIFY_BOUND).primes), g.name)
    pair.verify()
    return pair
