"""Partial-sum functionals, progression sums and the mean-value checks built on them.

Most routines take a dense value array ``f`` with ``f[n]`` the value at n for
1 <= n <= len(f) - 1 (index 0 unused), as produced by ``batch_evaluate``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.special import expi

from .arith import ArithmeticDomainError, PrimeTable, euler_phi
from .dirichlet import Character, build_character_group
from .multfun import MultiplicativeFunction, batch_evaluate


def values(g: MultiplicativeFunction | np.ndarray, x: int, table: PrimeTable | None = None) -> np.ndarray:
    """Dense values of g on 0..x; arrays pass through (truncated to x)."""
    if isinstance(g, MultiplicativeFunction):
        if table is None:
            raise ArithmeticDomainError("a prime table is needed to evaluate a rule")
        return batch_evaluate(g, x, table)
    arr = np.asarray(g)
    if len(arr) < int(x) + 1:
        raise ArithmeticDomainError(f"value array covers n <= {len(arr) - 1}, need {int(x)}")
    return arr[: int(x) + 1]


def M(f: np.ndarray, x: float) -> complex:
    """Sum of f(n) over n <= x."""
    n = int(math.floor(x))
    return complex(np.sum(f[1 : n + 1]))


def N(f: np.ndarray, x: float) -> complex:
    """Sum of f(n) log n over n <= x."""
    n = int(math.floor(x))
    if n < 2:
        return 0j
    return complex(np.sum(f[2 : n + 1] * np.log(np.arange(2, n + 1))))


def _residue_sums(f: np.ndarray, D: int, x: int) -> np.ndarray:
    """Sums of f(n) over n <= x in each residue class mod D (all D classes)."""
    n = np.arange(1, x + 1)
    v = np.asarray(f[1 : x + 1], dtype=complex)
    r = n % D
    re = np.bincount(r, weights=v.real, minlength=D)
    im = np.bincount(r, weights=v.imag, minlength=D)
    return re + 1j * im


@dataclass(frozen=True, eq=False)
class ProgressionSums:
    """Per-class sums of f(n), n <= x, n = a (mod D); entries at non-reduced a are kept too."""

    D: int
    x: int
    sums: np.ndarray = field(repr=False)
    coprime_total: complex

    def __getitem__(self, a: int) -> complex:
        return complex(self.sums[a % self.D])

    def reduced(self) -> np.ndarray:
        mask = np.gcd(np.arange(self.D), self.D) == 1 if self.D > 1 else np.ones(1, bool)
        return self.sums[mask]


def progression_sums(f: np.ndarray, D: int, x: float) -> ProgressionSums:
    if D < 1:
        raise ArithmeticDomainError("modulus must be >= 1")
    x = int(math.floor(x))
    sums = _residue_sums(f, D, x)
    n = np.arange(1, x + 1)
    coprime = complex(np.sum(f[1 : x + 1][np.gcd(n, D) == 1]))
    ps = ProgressionSums(D, x, sums, coprime)
    total = complex(np.sum(ps.reduced()))
    if abs(total - coprime) > 1e-9 * max(1.0, abs(coprime)):
        raise ArithmeticDomainError("progression sums do not add up to the coprime total")
    return ps


def character_sum(f: np.ndarray, chi: Character, x: float) -> complex:
    """Sum of f(n) chi(n) over n <= x."""
    x = int(math.floor(x))
    n = np.arange(1, x + 1)
    return complex(np.sum(f[1 : x + 1] * chi.values_at(n)))


def _check_set(J: Iterable[Character], D: int) -> list[Character]:
    out = []
    for chi in J:
        if chi.modulus != D:
            raise ArithmeticDomainError(f"character mod {chi.modulus} in a set for modulus {D}")
        if chi not in out:
            out.append(chi)
    return out


def Y(f: np.ndarray, a: int, x: float, D: int, J: Iterable[Character]) -> complex:
    """Progression sum minus its expansion over the characters in J."""
    if math.gcd(a, D) != 1:
        raise ArithmeticDomainError(f"gcd({a}, {D}) > 1")
    J = _check_set(J, D)
    ps = progression_sums(f, D, x)
    phi = euler_phi(D)
    out = ps[a]
    for chi in J:
        out -= np.conj(chi(a % D or D)) / phi * complex(np.dot(ps.sums, chi.table))
    return complex(out)


def lemma_I5_check(b: np.ndarray, D: int, J: Iterable[Character]) -> tuple[float, float]:
    """Both sides of the L^2 identity for the residuals L(a).

    lhs = phi(D) sum_a |L(a)|^2 from residue-class sums; rhs = sum over
    characters outside J of |B_j|^2 with B_j summed directly over n.
    """
    b = np.asarray(b, dtype=complex)
    x = len(b) - 1
    group = build_character_group(D)
    J = _check_set(J, D)
    phi = group.phi
    S = _residue_sums(b, D, x) if x >= 1 else np.zeros(D, dtype=complex)
    red = group.reduced_residues
    L = S[red].copy()
    for chi in J:
        Bj = complex(np.dot(S, chi.table))
        L -= np.conj(chi.table[red]) / phi * Bj
    lhs = phi * float(np.sum(np.abs(L) ** 2))
    n = np.arange(1, x + 1)
    rhs = 0.0
    for chi in group.characters:
        if chi in J:
            continue
        Bj = np.dot(b[1:], chi.values_at(n)) if x >= 1 else 0j
        rhs += abs(Bj) ** 2
    return lhs, float(rhs)


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    y: int
    D: int
    a: int
    alpha: float
    progression_sum: complex
    principal_term: complex
    exceptional_terms: tuple[tuple[Character, complex], ...]
    residual: complex
    error_envelope: float | None
    simplified_envelope: float | None

    @property
    def ratio(self) -> float | None:
        if not self.error_envelope:
            return None
        return abs(self.residual) / self.error_envelope

    def to_json(self) -> dict:
        return {
            "y": self.y,
            "D": self.D,
            "a": self.a,
            "alpha": self.alpha,
            "progression_sum": self.progression_sum,
            "principal_term": self.principal_term,
            "exceptional": [[list(chi.exponents), term] for chi, term in self.exceptional_terms],
            "residual": self.residual,
            "envelope": self.error_envelope,
            "simplified_envelope": self.simplified_envelope,
            "ratio": self.ratio,
        }


def _local_product(f: np.ndarray, D: int, primes: np.ndarray) -> float:
    ps = primes[(primes <= D) & (D % primes != 0)] if D > 1 else primes[:0]
    return float(np.prod(1.0 + np.abs(f[ps]) / ps))


def theorem1_envelope(f: np.ndarray, y: float, D: int, alpha: float, primes: np.ndarray) -> tuple[float | None, float | None]:
    """(full envelope, simplified envelope); None where a logarithm vanishes."""
    if D < 2 or y <= D:
        return None, None
    ly, lD = math.log(y), math.log(D)
    full = y / (euler_phi(D) * ly) * _local_product(f, D, primes) * (ly / lD) ** alpha
    simple = y / D * (lD / ly) ** (1 - alpha)
    return full, simple


def theorem1_decompose(
    g: MultiplicativeFunction | np.ndarray,
    a: int,
    y: float,
    D: int,
    J: Iterable[Character],
    alpha: float,
    table: PrimeTable,
) -> DecompositionReport:
    if math.gcd(a, D) != 1:
        raise ArithmeticDomainError(f"gcd({a}, {D}) > 1")
    if not 1 <= D <= y:
        raise ArithmeticDomainError("need 1 <= D <= y")
    if not 0 < alpha < 1:
        raise ArithmeticDomainError("alpha must lie in (0, 1)")
    y = int(math.floor(y))
    f = values(g, y, table)
    J = _check_set(J, D)
    if any(chi.is_principal for chi in J):
        raise ArithmeticDomainError("the principal character is the main term, not a member of J")
    ps = progression_sums(f, D, y)
    phi = euler_phi(D)
    prog = ps[a]
    principal = ps.coprime_total / phi
    terms = []
    for chi in J:
        S = complex(np.dot(ps.sums, chi.table))
        terms.append((chi, complex(np.conj(chi.table[a % D]) / phi * S)))
    residual = prog - principal - sum(t for _, t in terms)
    env, simple = theorem1_envelope(f, y, D, alpha, table.primes)
    return DecompositionReport(y, D, a % D if D > 1 else a, alpha, prog, principal, tuple(terms), residual, env, simple)


@dataclass(frozen=True)
class RatioCheck:
    lhs: float
    rhs_shape: float

    @property
    def ratio(self) -> float | None:
        return self.lhs / self.rhs_shape if self.rhs_shape > 0 else None


def shiu_bound_check(h: MultiplicativeFunction | np.ndarray, a: int, D: int, x: float, table: PrimeTable) -> RatioCheck:
    """Progression sum of a nonnegative h against x/(phi log x) exp(sum h(p)/p)."""
    if math.gcd(a, D) != 1:
        raise ArithmeticDomainError(f"gcd({a}, {D}) > 1")
    x = int(math.floor(x))
    if x < 2:
        raise ArithmeticDomainError("need x >= 2")
    hv = values(h, x, table)
    if np.any(np.abs(np.imag(hv)) > 0) or np.any(np.real(hv[1:]) < 0):
        raise ArithmeticDomainError("h must be real and nonnegative")
    hv = np.real(hv)
    lhs = float(np.real(progression_sums(hv, D, x)[a]))
    primes = table.primes[: table.prime_count(x)]
    primes = primes[D % primes != 0] if D > 1 else primes
    expo = float(np.sum(hv[primes] / primes))
    rhs = x / (euler_phi(D) * math.log(x)) * math.exp(expo)
    return RatioCheck(lhs, rhs)


def _unit_interval_values(g, x: int, table: PrimeTable) -> np.ndarray:
    gv = values(g, x, table)
    if np.any(np.abs(np.imag(gv)) > 1e-12):
        raise ArithmeticDomainError("g must be real-valued")
    gv = np.real(gv)
    if np.any(gv[1:] < -1e-12) or np.any(gv[1:] > 1 + 1e-12):
        raise ArithmeticDomainError("g must take values in [0, 1]")
    return gv


def truncated_decay_check(
    g: MultiplicativeFunction | np.ndarray, w: float, x: float, Y: float, a: int, D: int, table: PrimeTable
) -> RatioCheck:
    """Tail progression sum over (w, x] of a g supported on Y-smooth numbers."""
    if math.gcd(a, D) != 1:
        raise ArithmeticDomainError(f"gcd({a}, {D}) > 1")
    if not (D**11 <= w <= x):
        raise ArithmeticDomainError("need D^11 <= w <= x")
    x = int(math.floor(x))
    gv = _unit_interval_values(g, x, table)
    big = table.primes_in(Y, x)
    if np.any(gv[big] != 0):
        raise ArithmeticDomainError("g must vanish on primes above Y")
    n = np.arange(int(math.floor(w)) + 1, x + 1)
    sel = n[(n % D) == (a % D)]
    lhs = float(np.sum(gv[sel]))
    if Y < 2:
        return RatioCheck(lhs, 0.0)
    small = table.primes[: table.prime_count(Y)]
    small = small[D % small != 0] if D > 1 else small
    prod = float(np.prod(1.0 + gv[small] / small))
    rhs = x / (euler_phi(D) * math.log(w)) * prod * math.exp(-math.log(w) / (10 * math.log(Y)))
    return RatioCheck(lhs, rhs)


def exponential_decay_check(
    g: MultiplicativeFunction | np.ndarray, w: float, x: float, Y: float, a: int, D: int, table: PrimeTable
) -> RatioCheck:
    """Exponentially multiplicative variant with exp(-log w / log Y) decay."""
    if math.gcd(a, D) != 1:
        raise ArithmeticDomainError(f"gcd({a}, {D}) > 1")
    if not (2 <= w <= x and 2 <= Y <= x):
        raise ArithmeticDomainError("need 2 <= w <= x and 2 <= Y <= x")
    x = int(math.floor(x))
    gv = _unit_interval_values(g, x, table)
    n = np.arange(int(math.floor(w)) + 1, x + 1)
    lhs = float(np.sum(gv[n[(n % D) == (a % D)]]))
    small = table.primes[: table.prime_count(Y)]
    small = small[D % small != 0] if D > 1 else small
    expo = float(np.sum(gv[small] / small))
    rhs = x / (euler_phi(D) * math.log(x)) * math.exp(expo) * math.exp(-math.log(w) / math.log(Y))
    return RatioCheck(lhs, rhs)


def _step_integral(values_at_k: np.ndarray, lo: float, hi: float) -> float:
    """Integral over [lo, hi] of u -> v[floor(u)], v[0] taken as 0 below 1."""
    K = len(values_at_k) - 1
    cum = np.concatenate(([0.0], np.cumsum(values_at_k)))  # cum[k] = integral over [0, k]

    def F(u: float) -> float:
        u = min(max(u, 0.0), float(K + 1))
        k = int(math.floor(u))
        if k > K:
            return float(cum[K + 1])
        return float(cum[k] + (u - k) * values_at_k[k])

    return F(hi) - F(lo)


@dataclass(frozen=True)
class I6Report:
    w: float
    y: float
    r: float
    lhs: float
    integral_term: float
    local_term: float
    E0: float

    @property
    def rhs(self) -> float:
        return self.integral_term + self.local_term + self.E0

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else math.inf


def lemma_I6_report(g: MultiplicativeFunction | np.ndarray, w: float, r: float, table: PrimeTable) -> I6Report:
    """|N(w)| against its three-piece bound; M-integrals exact for step functions."""
    if w < 3 or r <= 0:
        raise ArithmeticDomainError("need w >= 3 and r > 0")
    W = int(math.floor(w))
    f = values(g, W, table)
    n = np.arange(W + 1)
    logs = np.log(np.maximum(n, 1))
    Ncum = np.cumsum(f * logs)
    Mcum = np.cumsum(f)
    lhs = abs(complex(Ncum[W]))
    # w * integral_2^w |N(u)| du / (u^2 log u), piecewise via Ei(-log u)
    k = np.arange(2, W + 1)
    hi = np.minimum(k + 1.0, w)
    pieces = expi(-np.log(hi)) - expi(-np.log(k.astype(float)))
    integral_term = w * float(np.sum(np.abs(Ncum[2 : W + 1]) * pieces))
    y = w - w * math.log(w) ** (-r)
    absM = np.abs(Mcum)
    local = 0.0
    dmax = int(math.floor(math.log(w) ** (2 * r)))
    for d in range(2, min(dmax, W) + 1):
        fac = table.factorize(d)
        if len(fac) != 1 or abs(f[d]) == 0:
            continue
        lam = math.log(fac[0][0])
        local += d * lam * abs(f[d]) / (w - y) * _step_integral(absM, y / d, w / d)
    lo = int(math.floor(y))
    seg = np.cumsum(f[lo + 1 : W + 1] * logs[lo + 1 : W + 1])
    E0 = float(np.max(np.abs(seg))) if seg.size else 0.0
    return I6Report(w, y, r, lhs, integral_term, local, E0)


def lemma_I4_experiment(
    g: MultiplicativeFunction | np.ndarray,
    D: int,
    J: Iterable[Character],
    t_values: Sequence[float],
    x: float,
    delta: float,
    table: PrimeTable,
) -> list[RatioCheck]:
    """Sum over chi outside J of max_{2<=y<=t} |sum_{n<=y} g chi|^2 against (t/log t)^2 (log x/log D)^delta."""
    tmax = int(math.floor(max(t_values)))
    f = values(g, tmax, table)
    group = build_character_group(D)
    J = _check_set(J, D)
    n = np.arange(1, tmax + 1)
    total = np.zeros(tmax + 1)
    for chi in group.characters:
        if chi in J:
            continue
        run = np.abs(np.cumsum(f[1:] * chi.values_at(n))) ** 2
        run[0] = 0.0  # y >= 2
        total[1:] += np.maximum.accumulate(run)
    out = []
    for t in t_values:
        ti = int(math.floor(t))
        shape = (t / math.log(t)) ** 2 * (math.log(x) / math.log(D)) ** delta
        out.append(RatioCheck(float(total[ti]), shape))
    return out

