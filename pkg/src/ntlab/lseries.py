"""Dirichlet series in the half-plane of absolute convergence.

log G is always evaluated in its prime-sum form; maxima over the semi-strip
and over subintervals of (D, x] are taken on a finite grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .arith import ArithmeticDomainError, PrimeTable
from .dirichlet import Character, CharacterGroup, build_character_group
from .multfun import MultiplicativeFunction
from .meanvalue import values

SIGMA_FLOOR = 1 + 1e-9
DEFAULT_INTERVALS = 64
DEFAULT_SLACK = 1.0
UNDER_COVERAGE = (
    "Suprema over the semi-strip and over subintervals of (D, x] are grid maxima; "
    "they are lower bounds for the true suprema, so the exceptional set can only be under-reported."
)


class ConfigError(ValueError):
    """A grid or parameter choice violates a stated constraint."""


@dataclass(frozen=True)
class HalfPlanePoint:
    sigma: float
    t: float = 0.0

    def __post_init__(self):
        if not self.sigma >= SIGMA_FLOOR:
            raise ArithmeticDomainError(f"sigma={self.sigma} is not > 1")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)


def _prime_values(g, primes: np.ndarray) -> np.ndarray:
    if isinstance(g, MultiplicativeFunction):
        return g.prime_values(primes)
    return np.asarray(g(primes), dtype=complex)


def log_G_prime_sum(
    g: MultiplicativeFunction,
    chi: Character,
    I: tuple[float, float],
    s: HalfPlanePoint,
    table: PrimeTable,
    D: float | None = None,
) -> tuple[complex, float]:
    """(sum over primes p in I of g(p) chi(p) p^-s, correction bound).

    The correction bound is sum_{p in I} p^-2 + 1/D with D defaulting to the
    left end of I; it is not folded into the value.
    """
    if not isinstance(s, HalfPlanePoint):
        s = HalfPlanePoint(float(np.real(s)), float(np.imag(s)))
    lo, hi = I
    primes = table.primes_in(lo, hi)
    base = max(float(D if D is not None else lo), 1.0)
    if primes.size == 0:
        return 0j, 1.0 / base
    w = _prime_values(g, primes) * chi.values_at(primes)
    terms = w * np.exp(-s.s * np.log(primes))
    corr = float(np.sum(1.0 / primes.astype(float) ** 2)) + 1.0 / base
    return complex(np.sum(terms)), corr


def G_truncated(
    g: MultiplicativeFunction | np.ndarray, chi: Character, s: HalfPlanePoint, x: int, table: PrimeTable | None = None
) -> tuple[complex, float]:
    """(sum over n <= x of g(n) chi(n) n^-s, bound x^(1-sigma)/(sigma-1) for the tail)."""
    if not isinstance(s, HalfPlanePoint):
        s = HalfPlanePoint(float(np.real(s)), float(np.imag(s)))
    x = int(x)
    f = values(g, x, table)
    n = np.arange(1, x + 1)
    terms = f[1:] * chi.values_at(n) * np.exp(-s.s * np.log(n))
    tail = x ** (1 - s.sigma) / (s.sigma - 1)
    return complex(np.sum(terms)), tail


def max_T(D: int, x: float, alpha: float) -> float:
    """Largest admissible T for the exceptional-character definition."""
    lD = math.log(D)
    return math.exp(lD * (math.log(x) / lD) ** (alpha**2 / 9))


@dataclass(frozen=True, eq=False)
class SemiStripGrid:
    D: int
    x: float
    T: float
    sigma_values: tuple[float, ...]
    t_values: np.ndarray = field(repr=False)
    endpoints: np.ndarray = field(repr=False)

    @property
    def t_spacing(self) -> float:
        if len(self.t_values) < 2:
            return 0.0
        return float(np.max(np.diff(self.t_values)))

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "x": self.x,
            "T": self.T,
            "sigma_values": list(self.sigma_values),
            "n_t": len(self.t_values),
            "t_spacing": self.t_spacing,
            "n_intervals_endpoints": len(self.endpoints),
        }


def build_grid(
    D: int,
    x: float,
    T: float,
    *,
    m: int = DEFAULT_INTERVALS,
    t_spacing: float | None = None,
    sigma_values: Sequence[float] | None = None,
    t_values: Sequence[float] | None = None,
) -> SemiStripGrid:
    """Symmetric t-grid on [-T, T], sigma = 1 + 1/log x and m geometric intervals of (D, x]."""
    if D < 2 or x <= D:
        raise ConfigError("need 2 <= D < x")
    lx = math.log(x)
    h = 1.0 / lx if t_spacing is None else float(t_spacing)
    if h <= 0 or h > 1.0 / lx + 1e-15:
        raise ConfigError(f"t spacing {h} exceeds 1/log x = {1 / lx}")
    if t_values is None:
        k = int(math.floor(T / h + 1e-9))
        tv = np.arange(-k, k + 1) * h
    else:
        tv = np.unique(np.asarray(t_values, dtype=float))
        if tv.size and np.max(np.abs(tv)) > T * (1 + 1e-12):
            raise ConfigError("t values outside [-T, T]")
    sig = tuple(sorted(set(sigma_values), reverse=True)) if sigma_values else (1 + 1 / lx,)
    if abs(min(sig) - (1 + 1 / lx)) > 1e-12:
        raise ConfigError("smallest sigma must equal 1 + 1/log x")
    ends = D * (x / D) ** (np.arange(m + 1) / m)
    ends[0], ends[-1] = D, x
    return SemiStripGrid(D, float(x), float(T), sig, tv, ends)


def bucketed_sums(
    weights: np.ndarray,
    primes: np.ndarray,
    group: CharacterGroup,
    endpoints: np.ndarray,
    t_values: np.ndarray,
    chars: Sequence[Character] | None = None,
    chunk: int = 16,
) -> Iterator[tuple[slice, np.ndarray]]:
    """Yield (t slice, P) with P[t, j, c] = sum over primes p <= endpoints[j] of w_p chi_c(p) p^-it.

    Only primes above endpoints[0] contribute, so P[:, 0, :] = 0 and
    P[:, j] - P[:, i] is the sum over the interval (endpoints[i], endpoints[j]].
    """
    D = group.modulus
    m = len(endpoints) - 1
    keep = (primes > endpoints[0]) & (primes <= endpoints[-1])
    primes, weights = primes[keep], weights[keep]
    bucket = np.clip(np.searchsorted(endpoints, primes, side="left") - 1, 0, m - 1)
    key = bucket * D + primes % D
    order = np.argsort(key, kind="stable")
    primes, weights, key = primes[order], weights[order], key[order]
    starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]]) if key.size else np.array([], dtype=int)
    keys = key[starts]
    logp = np.log(primes.astype(float))
    V = group.value_matrix(chars)  # (nchars, D)
    for a in range(0, len(t_values), chunk):
        sl = slice(a, min(a + chunk, len(t_values)))
        tv = np.asarray(t_values[sl], dtype=float)
        A = np.zeros((len(tv), m * D), dtype=complex)
        if keys.size:
            E = weights[None, :] * np.exp(-1j * tv[:, None] * logp[None, :])
            A[:, keys] = np.add.reduceat(E, starts, axis=1)
        A = A.reshape(len(tv), m, D) @ V.T  # (nt, m, nchars)
        P = np.zeros((len(tv), m + 1, A.shape[2]), dtype=complex)
        np.cumsum(A, axis=1, out=P[:, 1:, :])
        yield sl, P


def max_interval_modulus(P: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """For P (nt, m+1, k): max over i < j of |P_j - P_i| per (t, character), and the argmax pair."""
    diff = np.abs(P[:, :, None, :] - P[:, None, :, :])  # (nt, m+1, m+1, k)
    nt, m1, _, k = diff.shape
    flat = diff.reshape(nt, m1 * m1, k)
    idx = np.argmax(flat, axis=1)
    best = np.take_along_axis(flat, idx[:, None, :], axis=1)[:, 0, :]
    i, j = np.divmod(idx, m1)
    return best, np.minimum(i, j), np.maximum(i, j)


@dataclass(frozen=True, eq=False)
class ExceptionalReport:
    D: int
    x: float
    alpha: float
    T: float
    threshold: float
    slack: float
    grid: SemiStripGrid = field(repr=False)
    characters: tuple[dict, ...] = field(repr=False)
    J: tuple[Character, ...]
    pair_orders: tuple[tuple[int, int, int], ...]
    correction_bound: float

    @property
    def count_shape(self) -> float:
        return self.alpha**-2

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "x": self.x,
            "alpha": self.alpha,
            "T": self.T,
            "threshold": self.threshold,
            "grid_slack": self.slack,
            "grid": self.grid.to_json(),
            "characters": list(self.characters),
            "J": [list(c.exponents) for c in self.J],
            "n_exceptional": len(self.J),
            "count_shape_alpha^-2": self.count_shape,
            "pair_orders": [list(p) for p in self.pair_orders],
            "correction_bound": self.correction_bound,
            "disclaimer": UNDER_COVERAGE,
        }


def classify_exceptional(
    g: MultiplicativeFunction,
    D: int,
    x: float,
    alpha: float,
    table: PrimeTable,
    grid: SemiStripGrid | None = None,
    slack: float = DEFAULT_SLACK,
) -> ExceptionalReport:
    """Flag the nonprincipal characters mod D whose grid max of |log G_I(s, chi)| reaches the threshold.

    Only the values of g on primes in (D, x] enter, i.e. g is treated as
    vanishing on the primes up to D.
    """
    if D < 2:
        raise ConfigError("need D >= 2")
    if x < D * D:
        raise ConfigError("need x >= D^2")
    if x > table.bound:
        raise ConfigError(f"x={x} exceeds table bound {table.bound}")
    if alpha <= 0:
        raise ConfigError("alpha must be positive")
    Tmax = max_T(D, x, alpha)
    if grid is None:
        grid = build_grid(D, x, Tmax)
    if grid.T > Tmax * (1 + 1e-12):
        raise ConfigError(f"T={grid.T} exceeds exp(log D (log x/log D)^(alpha^2/9)) = {Tmax}")
    if grid.D != D or abs(grid.x - x) > 1e-9 * x:
        raise ConfigError("grid built for a different (D, x)")
    group = build_character_group(D)
    chars = [c for c in group.characters if not c.is_principal]
    primes = table.primes_in(D, x)
    gp = g.prime_values(primes)
    logp = np.log(primes.astype(float))
    best = np.full(len(chars), -1.0)
    where = [None] * len(chars)
    for sigma in grid.sigma_values:
        w = gp * np.exp(-sigma * logp)
        for sl, P in bucketed_sums(w, primes, group, grid.endpoints, grid.t_values, chars):
            vals, i, j = max_interval_modulus(P)
            k = np.argmax(vals, axis=0)
            for c in range(len(chars)):
                v = float(vals[k[c], c])
                if v > best[c]:
                    best[c] = v
                    tk = sl.start + int(k[c])
                    where[c] = (
                        sigma,
                        float(grid.t_values[tk]),
                        float(grid.endpoints[i[k[c], c]]),
                        float(grid.endpoints[j[k[c], c]]),
                    )
    threshold = alpha * math.log(math.log(x) / math.log(D)) + slack
    entries = []
    J = []
    for c, chi in enumerate(chars):
        exc = bool(best[c] >= threshold)
        if exc:
            J.append(chi)
        sigma, t, lo, hi = where[c] if where[c] else (None, None, None, None)
        entries.append(
            {
                "exponents": list(chi.exponents),
                "max_logG": float(max(best[c], 0.0)),
                "exceptional": exc,
                "order": chi.order,
                "argmax": {"sigma": sigma, "t": t, "interval": [lo, hi]},
            }
        )
    pairs = []
    for a in range(len(J)):
        for b in range(a + 1, len(J)):
            pairs.append((J[a].index, J[b].index, (J[a] * J[b].conj()).order))
    corr = float(np.sum(1.0 / primes.astype(float) ** 2)) + 1.0 / D
    return ExceptionalReport(D, float(x), alpha, grid.T, threshold, slack, grid, tuple(entries), tuple(J), tuple(pairs), corr)


def interval_real_max(P: np.ndarray) -> np.ndarray:
    """max over i < j of Re(P_j - P_i) per (t, character)."""
    R = P.real
    run_min = np.minimum.accumulate(R, axis=1)
    gain = R[:, 1:, :] - run_min[:, :-1, :]
    return gain.max(axis=1)


def character_sum_scan(
    D: int,
    x: float,
    T: float,
    t_values: np.ndarray,
    table: PrimeTable,
    sigma: float = 1.0,
    m: int = DEFAULT_INTERVALS,
) -> np.ndarray:
    """max over grid t and grid intervals (y, w] within [D, x] of Re sum chi(p) p^(-sigma-it), per nonprincipal chi."""
    group = build_character_group(D)
    chars = [c for c in group.characters if not c.is_principal]
    if not chars:
        return np.zeros(0)
    primes = table.primes_in(D, x)
    w = np.exp(-sigma * np.log(primes.astype(float))).astype(complex)
    ends = D * (x / D) ** (np.arange(m + 1) / m)
    ends[0], ends[-1] = D, x
    best = np.full(len(chars), -np.inf)
    for _, P in bucketed_sums(w, primes, group, ends, np.asarray(t_values), chars):
        best = np.maximum(best, interval_real_max(P).max(axis=0))
    return best


@dataclass(frozen=True)
class PlancherelResult:
    lhs: float
    rhs: float
    quadrature_change: float
    tail_estimate: float
    converged: bool

    @property
    def relative_error(self) -> float:
        return abs(self.lhs - self.rhs) / self.rhs if self.rhs > 0 else abs(self.lhs)


def _gauss_integral(f: np.ndarray, sigma: float, T: float, panels: int, nodes: int = 16) -> float:
    n = np.flatnonzero(f)
    if n.size == 0:
        return 0.0
    coef = f[n] * np.exp(-sigma * np.log(n))
    logn = np.log(n.astype(float))
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(-T, T, panels + 1)
    mid = (edges[1:] + edges[:-1]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    total = 0.0
    for a in range(0, panels, 256):
        b = min(a + 256, panels)
        tau = (mid[a:b, None] + half[a:b, None] * xg[None, :]).ravel()
        F = np.exp(-1j * np.outer(tau, logn)) @ coef
        val = np.abs(F) ** 2 / (sigma**2 + tau**2)
        total += float(np.sum(val.reshape(b - a, nodes) * (half[a:b, None] * wg[None, :])))
    return total


def plancherel_check(f: np.ndarray, sigma: float, T_int: float = 1000.0, rtol: float = 1e-8, max_doublings: int = 6) -> PlancherelResult:
    """Both sides of the Plancherel identity for F(s) = sum f(n) n^-s.

    lhs: Gauss-Legendre panels on |tau| <= T_int, refined until two successive
    panel counts agree to rtol, plus the diagonal tail
    sum |f(n)|^2 n^(-2 sigma) * 2(pi/2 - arctan(T/sigma))/sigma.
    rhs: 2 pi times the integral of |M(y)|^2 y^(-2 sigma - 1) over y >= 1,
    exact on each step of M.
    """
    f = np.asarray(f, dtype=complex)
    HalfPlanePoint(sigma)
    if np.all(f == 0):
        return PlancherelResult(0.0, 0.0, 0.0, 0.0, True)
    K = int(np.max(np.flatnonzero(f)))
    Mk = np.cumsum(f[: K + 1])
    k = np.arange(1, K + 1, dtype=float)
    pieces = np.abs(Mk[1:K]) ** 2 * (k[:-1] ** (-2 * sigma) - k[1:] ** (-2 * sigma)) if K > 1 else np.zeros(0)
    rhs = 2 * math.pi * (float(np.sum(pieces)) + abs(Mk[K]) ** 2 * K ** (-2 * sigma)) / (2 * sigma)
    panels = max(64, int(T_int * math.log(K + 1) / 4))
    prev = _gauss_integral(f, sigma, T_int, panels)
    change = math.inf
    converged = False
    for _ in range(max_doublings):
        panels *= 2
        cur = _gauss_integral(f, sigma, T_int, panels)
        change = abs(cur - prev) / max(abs(cur), 1e-300)
        prev = cur
        if change <= rtol:
            converged = True
            break
    n = np.flatnonzero(f)
    diag = float(np.sum(np.abs(f[n]) ** 2 * n.astype(float) ** (-2 * sigma)))
    tail = diag * 2 * (math.pi / 2 - math.atan(T_int / sigma)) / sigma
    return PlancherelResult(prev + tail, rhs, change, tail, converged)


def plancherel_closed_form(f: np.ndarray, sigma: float) -> float:
    """(pi/sigma) sum f(m) conj f(n) (mn)^-sigma (min/max)^sigma, the exact full-line integral."""
    f = np.asarray(f, dtype=complex)
    n = np.flatnonzero(f)
    if n.size == 0:
        return 0.0
    c = f[n] * n.astype(float) ** (-sigma)
    nf = n.astype(float)
    ratio = np.minimum.outer(nf, nf) / np.maximum.outer(nf, nf)
    return float(np.real(math.pi / sigma * np.sum(np.outer(c, np.conj(c)) * ratio**sigma)))
