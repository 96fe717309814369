"""Pretentious distance, the lambda minimisation, Halasz-type bounds and the Fejer order tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .arith import ArithmeticDomainError, PrimeTable
from .dirichlet import Character, build_character_group
from .lseries import UNDER_COVERAGE, build_grid, classify_exceptional, max_T
from .multfun import MultiplicativeFunction, batch_evaluate, generalized_character, twist

# calibrated defaults; every report echoes the values actually used
DEFAULT_C = 1.0  # additive constant in Delta(T)
DEFAULT_C0 = 1.0  # additive constant in the three-branch psi bound
TIE_TOL = 1e-12


class HypothesisFailure(ValueError):
    """A lemma's hypothesis does not hold, so its conclusion is not tested."""


def _primes_window(table: PrimeTable, lo: float, hi: float) -> np.ndarray:
    if hi > table.bound:
        raise ArithmeticDomainError(f"x={hi} exceeds table bound {table.bound}")
    return table.primes_in(lo, hi)


@dataclass(frozen=True, eq=False)
class DistanceContext:
    """Prime window (D, x] and the weighting used by rho.

    ``mode='window'`` weights by 1/(4L p) over D < p <= x; ``mode='intro'``
    weights by p^-sigma over all primes p <= x, with the omitted tail bounded
    by 4 x^(1-sigma)/(sigma-1).
    """

    D: float
    x: float
    table: PrimeTable = field(repr=False)
    mode: str = "window"
    sigma: float = 2.0

    def __post_init__(self):
        if self.mode not in ("window", "intro"):
            raise ValueError("mode must be 'window' or 'intro'")
        if self.mode == "intro" and not self.sigma > 1:
            raise ArithmeticDomainError("intro metric needs sigma > 1")
        if self.mode == "window" and self.primes.size == 0:
            raise ArithmeticDomainError(f"no primes in ({self.D}, {self.x}]")

    @property
    def primes(self) -> np.ndarray:
        lo = self.D if self.mode == "window" else 1
        return _primes_window(self.table, lo, self.x)

    @property
    def L(self) -> float:
        p = _primes_window(self.table, self.D, self.x)
        return float(np.sum(1.0 / p))

    @property
    def weights(self) -> np.ndarray:
        p = self.primes.astype(float)
        if self.mode == "window":
            return 1.0 / (4 * self.L * p)
        return p ** (-self.sigma)

    @property
    def tail_bound(self) -> float:
        if self.mode == "window":
            return 0.0
        return 4 * self.x ** (1 - self.sigma) / (self.sigma - 1)


PrimeFunction = MultiplicativeFunction | Callable[[np.ndarray], np.ndarray]


def prime_values(g: PrimeFunction, primes: np.ndarray) -> np.ndarray:
    if isinstance(g, MultiplicativeFunction):
        return g.prime_values(primes)
    return np.asarray(g(primes), dtype=complex)


def rho(g: PrimeFunction, h: PrimeFunction, ctx: DistanceContext) -> float:
    p = ctx.primes
    d = np.abs(prime_values(g, p) - prime_values(h, p)) ** 2
    return math.sqrt(float(np.sum(ctx.weights * d)))


def delta_T(D: float, T: float, c: float = DEFAULT_C) -> float:
    """log(log T / log D) + c."""
    if D < 2 or T < D:
        raise ArithmeticDomainError(f"need T >= D >= 2, got D={D}, T={T}")
    return math.log(math.log(T) / math.log(D)) + c


@dataclass(frozen=True)
class LambdaResult:
    T: float
    t_star: float
    value: float
    grid_spacing: float
    coarse_min: float
    lipschitz: float
    resolution: float

    def to_json(self) -> dict:
        return {
            "T": self.T,
            "t_star": self.t_star,
            "lambda": self.value,
            "grid_spacing": self.grid_spacing,
            "coarse_min": self.coarse_min,
            "lipschitz": self.lipschitz,
            "resolution": self.resolution,
        }


class _PrimeCosineSum:
    """t -> sum_p |a_p| - sum_p |b_p| cos(t log p + arg b_p), evaluated in chunks."""

    def __init__(self, gp: np.ndarray, primes: np.ndarray):
        self.inv = 1.0 / primes.astype(float)
        self.mod = np.abs(gp) * self.inv
        self.phase = np.angle(gp)
        self.logp = np.log(primes.astype(float))
        self.base = float(np.sum(self.mod))
        self.lipschitz = float(np.sum(self.mod * self.logp))

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty(t.size)
        step = max(1, 4_000_000 // max(1, self.logp.size))
        for a in range(0, t.size, step):
            tt = t[a : a + step]
            out[a : a + step] = self.base - np.cos(np.outer(tt, self.logp) + self.phase) @ self.mod
        return out


def lambda_min(
    g: PrimeFunction,
    Y: float,
    x: float,
    T: float,
    table: PrimeTable,
    grid_spacing: float | None = None,
    refine: int = 100,
) -> LambdaResult:
    """Grid minimum over |t| <= T of sum_{Y<p<=x} (|g(p)| - Re g(p) p^it) / p.

    Coarse grid t = k h; cells whose Lipschitz lower bound does not exceed the
    running minimum are refined by factors of 10 until the spacing is h/refine.
    Ties go to the smallest t.
    """
    if Y > x:
        raise ArithmeticDomainError("need Y <= x")
    h = 1.0 / math.log(x) if grid_spacing is None else float(grid_spacing)
    if h > 1.0 / math.log(x) + 1e-15:
        raise ArithmeticDomainError("grid spacing must be <= 1/log x")
    primes = _primes_window(table, Y, x)
    if primes.size == 0:
        return LambdaResult(T, 0.0, 0.0, h, 0.0, 0.0, h)
    F = _PrimeCosineSum(prime_values(g, primes), primes)
    k = int(math.floor(T / h + 1e-9))
    pts = np.arange(-k, k + 1) * h
    vals = F(pts)
    i0 = int(np.argmin(vals))
    best_v, best_t = float(vals[i0]), float(pts[i0])
    coarse = best_v
    centres, vals_c, width = pts, vals, h
    levels = 0
    while width > h / refine * (1 + 1e-9) and centres.size:
        keep = vals_c - F.lipschitz * width / 2 <= best_v
        centres = centres[keep]
        if centres.size == 0:
            break
        sub = min(10, int(round(width / (h / refine))))
        offs = (np.arange(sub) - (sub - 1) / 2) * (width / sub)
        new = (centres[:, None] + offs[None, :]).ravel()
        new = new[np.abs(new) <= T + 1e-12]
        width = width / sub
        vals_c = F(new)
        centres = new
        levels += 1
        if vals_c.size:
            j = int(np.argmin(vals_c))
            if vals_c[j] < best_v or (vals_c[j] == best_v and abs(new[j]) < abs(best_t)):
                best_v, best_t = float(vals_c[j]), float(new[j])
    return LambdaResult(T, best_t, max(best_v, 0.0), h, coarse, F.lipschitz, width)


def lower_bound_scan(gabs: np.ndarray, primes: np.ndarray, c: float, w_min: float) -> float:
    """min over w in [w_min, x] of sum_{w<p<=x} (|g(p)| - c)/p, exact via suffix sums."""
    terms = (gabs - c) / primes
    suffix = np.concatenate((np.cumsum(terms[::-1])[::-1], [0.0]))
    # w ranges over [w_min, x]; the sum over w < p only changes at primes
    first = int(np.searchsorted(primes, w_min, side="right"))
    return float(np.min(suffix[first:]))


@dataclass(frozen=True)
class HalaszResult:
    x: float
    T: float
    beta: float
    c: float
    c1: float
    lam: LambdaResult
    base: float
    exp_term: float
    T_term: float
    hyp_beta: bool
    lower_bound_min: float
    hyp_lower: bool
    gamma: float
    higher_power_series: float

    @property
    def bound(self) -> float:
        return self.base * (self.exp_term + self.T_term)

    @property
    def applicable(self) -> bool:
        return self.hyp_beta and self.hyp_lower and math.isfinite(self.higher_power_series)

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "T": self.T,
            "beta": self.beta,
            "c": self.c,
            "c1": self.c1,
            "lambda": self.lam.to_json(),
            "base": self.base,
            "exp_term": self.exp_term,
            "T_term": self.T_term,
            "bound": self.bound,
            "hypotheses": {
                "abs_g_p_le_beta": self.hyp_beta,
                "lower_bound_min": self.lower_bound_min,
                "lower_bound_ok": self.hyp_lower,
                "gamma": self.gamma,
                "higher_power_series_partial": self.higher_power_series,
            },
            "applicable": self.applicable,
        }


def halasz_bound(
    g: MultiplicativeFunction,
    x: float,
    T: float,
    table: PrimeTable,
    Y: float = 2.0,
    beta: float = 1.0,
    c: float = 1.0,
    c1: float = 1.0,
    grid_spacing: float | None = None,
) -> HalaszResult:
    """x/log x * prod_{p<=x}(1+|g(p)|/p) * (exp(-lambda c/(c+beta)) + T^(-1/2)) with the hypothesis scan."""
    primes = _primes_window(table, 1, x)
    gabs = np.abs(g.prime_values(primes))
    base = x / math.log(x) * float(np.prod(1.0 + gabs / primes))
    lam = lambda_min(g, Y, x, T, table, grid_spacing)
    exp_term = math.exp(-lam.value * c / (c + beta))
    hyp_beta = bool(np.all(gabs <= beta + 1e-12))
    lb = lower_bound_scan(gabs, primes.astype(float), c, Y)
    gamma = 1 + c * beta / (c + beta)
    series = 0.0
    sub = primes[primes.astype(float) ** 2 <= x]
    for p in sub:
        k, q = 2, int(p) ** 2
        while q <= x:
            series += abs(g.prime_power(int(p), k)) / q * math.log(q) ** gamma
            k += 1
            q *= int(p)
    return HalaszResult(x, T, beta, c, c1, lam, base, exp_term, T ** -0.5, hyp_beta, lb, lb >= -c1, gamma, series)


def spacing_lower_bound(
    chi1: Character, t1: float, chi2: Character, t2: float, ctx: DistanceContext, T: float, c: float = DEFAULT_C
) -> tuple[float, float | None]:
    """(window distance of the two generalised characters, (1/2 - Delta(2T)/(2L))^(1/2) or None)."""
    if chi1 == chi2:
        raise ArithmeticDomainError("the spacing bound needs distinct characters")
    if max(abs(t1), abs(t2)) > T:
        raise ArithmeticDomainError("need |t_i| <= T")
    d = rho(generalized_character(chi1, t1), generalized_character(chi2, t2), ctx)
    inner = 0.5 - delta_T(ctx.D, 2 * T, c) / (2 * ctx.L)
    return d, (math.sqrt(inner) if inner > 0 else None)


def fejer_kernel(N: int, theta):
    """(1/N)(sin pi N theta / sin pi theta)^2, switching to the cosine sum near integers."""
    if N < 1:
        raise ArithmeticDomainError("N must be >= 1")
    th = np.asarray(theta, dtype=float)
    s = np.sin(np.pi * th)
    near = np.abs(s) < 1e-4
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(near, 0.0, (np.sin(np.pi * N * th) / s) ** 2 / N)
    if np.any(near):
        out = np.where(near, fejer_sum(N, th), out)
    return float(out) if np.ndim(theta) == 0 else out


def fejer_sum(N: int, theta):
    """sum_{|m|<N} (1 - |m|/N) e(m theta), real part."""
    th = np.asarray(theta, dtype=float)
    m = np.arange(1, N)
    tot = 1.0 + 2.0 * np.sum((1 - m / N) * np.cos(2 * np.pi * np.multiply.outer(th, m)), axis=-1)
    return float(tot) if np.ndim(theta) == 0 else tot


@dataclass(frozen=True)
class OrderTestResult:
    delta: float
    kernel_length: float
    L: float
    hypothesis_sum: float
    lhs: float
    threshold: float
    order: int
    order_limit: float
    verdict: str
    consistent: bool
    c: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _hypothesis_sum(h: np.ndarray, u: np.ndarray, primes: np.ndarray) -> float:
    return float(np.sum(h / primes * np.abs(1 - u) ** 2))


def _h_values(h, primes: np.ndarray) -> np.ndarray:
    hv = np.asarray(h(primes) if callable(h) else h, dtype=float)
    if hv.shape != primes.shape:
        raise ArithmeticDomainError("h must give one weight per prime in (D, x]")
    if np.any(hv < 0) or np.any(hv > 1):
        raise ArithmeticDomainError("h must take values in [0, 1]")
    return hv


def order_test_A1(
    h, chi: Character, t: float, delta: float, D: int, x: float, T: float, table: PrimeTable, c: float = DEFAULT_C
) -> OrderTestResult:
    """Either sum h(p)/p <= 4 delta^(1/3) L + Delta(delta^(-1/3) T) or ord chi < 2 delta^(-1/3)."""
    if not 0 < delta <= 1:
        raise ArithmeticDomainError("delta must lie in (0, 1]")
    primes = _primes_window(table, D, x)
    pf = primes.astype(float)
    hv = _h_values(h, primes)
    L = float(np.sum(1.0 / pf))
    u = chi.values_at(primes) * np.exp(1j * t * np.log(pf))
    hyp = _hypothesis_sum(hv, u, pf)
    if hyp > delta * L * (1 + 1e-12):
        raise HypothesisFailure(f"hypothesis sum {hyp:.6g} exceeds delta L = {delta * L:.6g}")
    lhs = float(np.sum(hv / pf))
    threshold = 4 * delta ** (1 / 3) * L + delta_T(D, delta ** (-1 / 3) * T, c)
    order = chi.order
    limit = 2 * delta ** (-1 / 3)
    verdict = "order-bound" if lhs > threshold else "sum-bound"
    consistent = verdict == "sum-bound" or order < limit
    return OrderTestResult(delta, limit, L, hyp, lhs, threshold, order, limit, verdict, consistent, c)


def order_test_A2(
    h, chi: Character, t: float, delta: float, r: int, D: int, x: float, T: float, table: PrimeTable, c: float = DEFAULT_C
) -> OrderTestResult:
    """If ord chi >= r (r >= 2, r^3 delta <= 1): sum h(p)/p <= (1 + (r^3 delta)^(1/2)) L/r + Delta((r-1)T)."""
    if r < 2 or r**3 * delta > 1 or delta <= 0:
        raise ArithmeticDomainError("need r >= 2 and 0 < r^3 delta <= 1")
    primes = _primes_window(table, D, x)
    pf = primes.astype(float)
    hv = _h_values(h, primes)
    L = float(np.sum(1.0 / pf))
    u = chi.values_at(primes) * np.exp(1j * t * np.log(pf))
    hyp = _hypothesis_sum(hv, u, pf)
    if hyp > delta * L * (1 + 1e-12):
        raise HypothesisFailure(f"hypothesis sum {hyp:.6g} exceeds delta L = {delta * L:.6g}")
    lhs = float(np.sum(hv / pf))
    threshold = (1 + math.sqrt(r**3 * delta)) * L / r + delta_T(D, max((r - 1) * T, D), c)
    order = chi.order
    if order < r:
        verdict = "not-applicable"
        consistent = True
    else:
        verdict = "sum-bound" if lhs <= threshold else "violated"
        consistent = lhs <= threshold
    return OrderTestResult(delta, r, L, hyp, lhs, threshold, order, r, verdict, consistent, c)


@dataclass(frozen=True)
class PsiBound:
    value: float
    branch: int
    tie: bool


def psi_bound(y: float, x: float, t: float, c0: float = DEFAULT_C0) -> PsiBound:
    """Three-branch bound for Re sum_{y<p<=x} p^(-1-it); at branch boundaries the smaller value wins."""
    if not x >= y >= 2:
        raise ArithmeticDomainError("need x >= y >= 2")
    a = abs(t)
    ly, lx = math.log(y), math.log(x)
    cands = []
    if a >= 1 / ly * (1 - TIE_TOL):
        cands.append((2 * math.log(math.log(2 + a)) + c0, 1))
    if 1 / lx * (1 - TIE_TOL) <= a <= 1 / ly * (1 + TIE_TOL) and a > 0:
        cands.append((-math.log(a * ly) + c0, 2))
    if a <= 1 / lx * (1 + TIE_TOL):
        cands.append((math.log(lx / ly) + c0, 3))
    value, branch = min(cands)
    return PsiBound(value, branch, len(cands) > 1)


@dataclass(frozen=True)
class A4Result:
    t: float
    delta: float
    L1: float
    hypothesis_sum: float
    lhs: float
    rhs: float
    holds: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def t_test_A4(h, t: float, delta: float, y: float, x: float, table: PrimeTable, c0: float = DEFAULT_C0) -> A4Result:
    """sum h(p)/p <= 4 delta^(1/3) L1 + 3 psi(2 delta^(-1/3) t) + 3 psi(t) under the small-distance hypothesis."""
    if not 0 < delta < 1:
        raise ArithmeticDomainError("delta must lie in (0, 1)")
    primes = _primes_window(table, y, x)
    pf = primes.astype(float)
    hv = _h_values(h, primes)
    L1 = float(np.sum(1.0 / pf))
    hyp = _hypothesis_sum(hv, np.exp(1j * t * np.log(pf)), pf)
    if hyp > delta * L1 * (1 + 1e-12):
        raise HypothesisFailure(f"hypothesis sum {hyp:.6g} exceeds delta L1 = {delta * L1:.6g}")
    lhs = float(np.sum(hv / pf))
    rhs = (
        4 * delta ** (1 / 3) * L1
        + 3 * psi_bound(y, x, 2 * delta ** (-1 / 3) * t, c0).value
        + 3 * psi_bound(y, x, t, c0).value
    )
    return A4Result(t, delta, L1, hyp, lhs, rhs, lhs <= rhs)


def prime_sum_re(y: float, x: float, t: float, table: PrimeTable) -> float:
    """Re sum_{y<p<=x} p^(-1-it)."""
    p = _primes_window(table, y, x).astype(float)
    return float(np.sum(np.cos(t * np.log(p)) / p))


def _real_power(gp: np.ndarray, k: int) -> np.ndarray:
    v = gp**k
    return np.abs(v.imag) <= 1e-12 * np.maximum(1.0, np.abs(v))


def taxonomy_pipeline(
    g: MultiplicativeFunction,
    D: int,
    x: float,
    table: PrimeTable,
    c: float = 1.0,
    c1: float = 1.0,
    k: int | None = None,
    alpha: float | None = None,
    slack: float | None = None,
    c_delta: float = DEFAULT_C,
    r: int | None = None,
    eps: float | None = None,
    c0_B: float = 0.0,
) -> dict:
    """Exceptional characters of g mod D, their nearness to g, and the order claims about them."""
    from .lseries import DEFAULT_SLACK

    if not 0 < c <= 1:
        raise ArithmeticDomainError("c must lie in (0, 1]")
    slack = DEFAULT_SLACK if slack is None else slack
    primes = _primes_window(table, D, x)
    pf = primes.astype(float)
    gp = g.prime_values(primes)
    gabs = np.abs(gp)
    L = float(np.sum(1.0 / pf))
    lb = lower_bound_scan(gabs, pf, c, D)
    eta = 1e-3 * c**4 / (c + 1)
    if alpha is None:
        alpha = min(c - eta, 1 - 1e-9)
    rep = classify_exceptional(g, D, x, alpha, table, slack=slack)
    lx, lD = math.log(x), math.log(D)
    T_A = max(float(D), (lx / lD) ** 4)
    delta = (c / 5) ** 3
    near = []
    lam_rows = []
    for chi in rep.J:
        lam = lambda_min(twist(g, chi, 0.0), D, x, T_A / 2, table)
        is_near = lam.value <= delta * L / 8
        lam_rows.append({"exponents": list(chi.exponents), **lam.to_json(), "near": bool(is_near)})
        if is_near:
            near.append(chi)
    limit = 10 / c
    pair_orders = []
    for a in range(len(near)):
        for b in range(a + 1, len(near)):
            o = (near[a] * near[b].conj()).order
            pair_orders.append([near[a].index, near[b].index, o, o <= limit])
    lemma_A1_margin = c * L - c1 - (4 * delta ** (1 / 3) * L + delta_T(D, delta ** (-1 / 3) * T_A, c_delta))
    out = {
        "D": D,
        "x": x,
        "c": c,
        "c1": c1,
        "c_delta": c_delta,
        "alpha": alpha,
        "eta": eta,
        "eta_bound_terms": (c / (10 * (k or 1))) ** 2 * eta,
        "L": L,
        "T": T_A,
        "delta": delta,
        "hypothesis": {"lower_bound_min": lb, "holds": lb >= -c1},
        "applicable": lb >= -c1,
        "exceptional": rep.to_json(),
        "lambda": lam_rows,
        "pair_orders": pair_orders,
        "order_limit": limit,
        "order_claim_holds": all(p[3] for p in pair_orders),
        "lemma_A1_margin": lemma_A1_margin,
        "disclaimer": UNDER_COVERAGE,
    }
    if k is not None:
        mask = _real_power(gp, k)
        lbk = float(np.sum((gabs[mask] - c) / pf[mask]))
        orders = [[list(chi.exponents), chi.order, chi.order <= 20 * k / c] for chi in rep.J]
        out["k_variant"] = {
            "k": k,
            "lower_bound_min": lbk,
            "holds": lbk >= -c1,
            "eta": eta / k**2,
            "orders": orders,
            "order_limit": 20 * k / c,
            "order_claim_holds": all(o[2] for o in orders),
        }
    Z = math.exp(lD * (lx / lD) ** (1 / 30))
    fv = batch_evaluate(g, int(x), table)
    n = np.arange(1, int(x) + 1)
    allp = _primes_window(table, 1, x)
    allp = allp[D % allp != 0]
    prod = float(np.prod(1.0 + np.abs(g.prime_values(allp)) / allp))
    final = []
    zp = _primes_window(table, D, min(Z, x))
    zpf = zp.astype(float)
    gz = g.prime_values(zp)
    for chi in rep.J:
        E = float(np.sum((np.abs(gz) - np.real(gz * chi.values_at(zp))) / zpf))
        shape = x / lx * prod * math.exp(-c / (c + 1) * E)
        actual = abs(complex(np.sum(fv[1:] * chi.values_at(n))))
        final.append({"exponents": list(chi.exponents), "E": E, "shape": shape, "actual": actual, "ratio": actual / shape})
    out["Z"] = Z
    out["theorem_A_bound_terms"] = final
    if r is not None:
        eps = 1 / (2 * math.sqrt(2)) if eps is None else eps
        hyp_B = float(np.sum(gabs / pf)) > (1 / r + eps) * L + c0_B
        prods = [(a * b.conj()).order for i, a in enumerate(rep.J) for b in rep.J[i + 1 :]]
        real_g = bool(np.all(np.abs(np.imag(fv)) <= 1e-12))
        out["theorem_B"] = {
            "r": r,
            "eps": eps,
            "c0": c0_B,
            "eta": c * eps**2 / (2 * r**3 * (c + 1)),
            "eta_real": c * eps**2 / (4 * r**3 * (c + 1)),
            "hypothesis_holds": hyp_B,
            "product_orders": prods,
            "products_below_r": all(o < r for o in prods),
            "g_real": real_g,
            "square_orders": [(chi * chi).order for chi in rep.J],
            "squares_below_r": (not real_g) or all((chi * chi).order < r for chi in rep.J),
            "n_exceptional": len(rep.J),
        }
    return out


def cube_indicator(D: int, r: int = 3) -> Callable[[np.ndarray], np.ndarray]:
    """h(p) = 1 when p is an r-th power residue mod D, else 0."""
    residues = np.zeros(D, dtype=float)
    for a in range(1, D):
        if math.gcd(a, D) == 1:
            residues[pow(a, r, D)] = 1.0
    return lambda p: residues[np.asarray(p) % D]


def order_r_character(D: int, r: int) -> Character:
    group = build_character_group(D)
    for chi in group.characters:
        if chi.order == r:
            return chi
    raise ArithmeticDomainError(f"no character of order {r} mod {D}")


__all__ = [
    "DistanceContext",
    "HypothesisFailure",
    "LambdaResult",
    "OrderTestResult",
    "PsiBound",
    "cube_indicator",
    "delta_T",
    "fejer_kernel",
    "fejer_sum",
    "halasz_bound",
    "lambda_min",
    "order_r_character",
    "order_test_A1",
    "order_test_A2",
    "psi_bound",
    "rho",
    "spacing_lower_bound",
    "t_test_A4",
    "taxonomy_pipeline",
    "build_grid",
    "max_T",
]
