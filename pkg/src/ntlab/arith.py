"""Sieved prime tables and the elementary arithmetic functions built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

MAX_BOUND = 200_000_000


class ArithmeticDomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceRefusal(ValueError):
    """A request would exceed the fixed memory budget."""


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Smallest-prime-factor sieve up to ``bound``.

    ``spf[n]`` is the least prime factor of ``n`` for ``2 <= n <= bound``;
    entries 0 and 1 are 0.  Immutable once built.
    """

    bound: int
    spf: np.ndarray = field(repr=False)
    primes: np.ndarray = field(repr=False)

    def smallest_prime_factor(self, n: int) -> int:
        if not 2 <= n <= self.bound:
            raise ArithmeticDomainError(f"n={n} outside [2, {self.bound}]")
        return int(self.spf[n])

    def prime_count(self, y: float | None = None) -> int:
        """pi(y), defaulting to pi(bound)."""
        if y is None:
            return len(self.primes)
        return int(np.searchsorted(self.primes, math.floor(y), side="right"))

    def primes_in(self, lo: float, hi: float) -> np.ndarray:
        """Primes p with lo < p <= hi, ascending."""
        i = np.searchsorted(self.primes, math.floor(lo), side="right")
        j = np.searchsorted(self.primes, math.floor(hi), side="right")
        return self.primes[i:j]

    def factorize(self, n: int) -> list[tuple[int, int]]:
        if not 1 <= n <= self.bound:
            raise ArithmeticDomainError(f"n={n} outside [1, {self.bound}]")
        out: list[tuple[int, int]] = []
        while n > 1:
            p = int(self.spf[n])
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        return out

    @cached_property
    def reciprocal_prefix(self) -> np.ndarray:
        # prefix[i] = sum of 1/p over the first i primes, accumulated in ascending order
        out = np.zeros(len(self.primes) + 1)
        np.cumsum(1.0 / self.primes, out=out[1:])
        return out

    @cached_property
    def prime_power_split(self) -> tuple[np.ndarray, np.ndarray]:
        """(q, m) with q[n] the exact power of spf(n) dividing n and m[n] = n / q[n]."""
        n = np.arange(self.bound + 1, dtype=np.int64)
        spf = self.spf.astype(np.int64)
        q = spf.copy()
        q[:2] = 1
        idx = np.arange(2, self.bound + 1)
        while idx.size:
            cof = n[idx] // q[idx]
            more = cof % spf[idx] == 0
            idx = idx[more]
            q[idx] *= spf[idx]
        m = n // np.maximum(q, 1)
        m[0] = 0
        return q, m


def build_prime_table(x: int) -> PrimeTable:
    """Sieve smallest prime factors for all n <= x."""
    if x < 2:
        raise ArithmeticDomainError(f"bound must be >= 2, got {x}")
    if x > MAX_BOUND:
        raise ResourceRefusal(f"bound {x} exceeds the {MAX_BOUND} table budget")
    x = int(x)
    spf = np.zeros(x + 1, dtype=np.int32)
    for p in range(2, math.isqrt(x) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest
    primes = np.flatnonzero(spf[2:] == np.arange(2, x + 1)) + 2
    spf.setflags(write=False)
    primes.setflags(write=False)
    return PrimeTable(bound=x, spf=spf, primes=primes.astype(np.int64))


def prime_reciprocal_sum(table: PrimeTable, D: float, x: float) -> float:
    """Sum of 1/p over primes D < p <= x."""
    if not (2 <= D <= x <= table.bound):
        raise ArithmeticDomainError(f"need 2 <= D <= x <= {table.bound}, got D={D}, x={x}")
    i = table.prime_count(D)
    j = table.prime_count(x)
    pre = table.reciprocal_prefix
    return float(pre[j] - pre[i])


@dataclass(frozen=True, eq=False)
class ArithValues:
    """Dense tables of mu, Lambda, phi and omega indexed by n (index 0 unused)."""

    mobius: np.ndarray = field(repr=False)
    von_mangoldt: np.ndarray = field(repr=False)
    euler_phi: np.ndarray = field(repr=False)
    omega: np.ndarray = field(repr=False)


def arith_values(table: PrimeTable) -> ArithValues:
    x = table.bound
    spf = table.spf.astype(np.int64)
    rem = np.arange(x + 1, dtype=np.int64)
    mu = np.ones(x + 1, dtype=np.int8)
    omega = np.zeros(x + 1, dtype=np.int8)
    phi = np.arange(x + 1, dtype=np.int64)
    last = np.zeros(x + 1, dtype=np.int64)
    mu[0] = 0
    phi[0] = 0
    idx = np.arange(2, x + 1)
    while idx.size:
        p = spf[rem[idx]]
        fresh = p != last[idx]
        nf = idx[fresh]
        omega[nf] += 1
        mu[nf] *= -1
        phi[nf] = phi[nf] // p[fresh] * (p[fresh] - 1)
        mu[idx[~fresh]] = 0
        rem[idx] //= p
        last[idx] = p
        idx = idx[rem[idx] > 1]
    lam = np.zeros(x + 1)
    pp = np.flatnonzero(omega == 1)
    lam[pp] = np.log(spf[pp])
    for arr in (mu, omega, phi, lam):
        arr.setflags(write=False)
    return ArithValues(mobius=mu, von_mangoldt=lam, euler_phi=phi, omega=omega)


def euler_phi(n: int) -> int:
    """phi(n) by trial division; for moduli that may exceed any table."""
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def factor_small(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization, ascending primes."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out
