"""Desk-scale Linnik experiment: least primes in reduced classes and the two-sided prime-reciprocal sum."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import PrimeTable, build_prime_table
from .dirichlet import Character, build_character_group
from .lseries import DEFAULT_SLACK, bucketed_sums, max_interval_modulus
from .lseries import ConfigError

TAU = 2.0**-10
DEFAULT_N = 10**6
DEFAULT_GAMMA = 0.5
CALIBRATION_D_MAX = 20
MAX_MODULUS = 500


@dataclass(frozen=True)
class LeastPrimeRow:
    D: int
    classes: int
    found: int
    max_prime: int
    argmax_a: int
    max_exponent: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def least_primes(D: int, table: PrimeTable) -> dict[int, int]:
    """Least prime in each reduced class mod D found in the table."""
    group = build_character_group(D)
    primes = table.primes
    res, first = np.unique(primes % D, return_index=True)
    red = group.reduced_mask
    return {int(a): int(primes[i]) for a, i in zip(res, first) if red[a]}


def least_prime_row(D: int, table: PrimeTable) -> LeastPrimeRow:
    lp = least_primes(D, table)
    phi = build_character_group(D).phi
    a_max = max(lp, key=lambda a: (lp[a], -a))
    p = lp[a_max]
    return LeastPrimeRow(D, phi, len(lp), p, a_max, math.log(p) / math.log(D))


def _real_nonprincipal(D: int) -> list[Character]:
    return [c for c in build_character_group(D).characters if c.is_real and not c.is_principal]


@dataclass(frozen=True)
class BB13Row:
    D: int
    chi: tuple[int, ...] | None
    candidate: tuple[int, ...] | None
    candidate_max: float
    threshold: float
    discrepancy: float
    argmax_a: int
    shape: float

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "chi": list(self.chi) if self.chi is not None else None,
            "candidate": list(self.candidate) if self.candidate is not None else None,
            "candidate_max_logG_t0": self.candidate_max,
            "threshold": self.threshold,
            "discrepancy": self.discrepancy,
            "argmax_a": self.argmax_a,
            "shape": self.shape,
        }


def select_character(
    D: int, N: float, table: PrimeTable, alpha: float = 0.5, slack: float = DEFAULT_SLACK, m: int = 64
) -> tuple[Character | None, Character | None, float, float]:
    """Real nonprincipal chi mod D most aligned with -1 on primes in (D, N], kept only if exceptional at t = 0.

    The candidate minimises Re sum chi(p) p^-sigma; it is kept when the t = 0 grid max
    of |sum_I -chi(p) p^-sigma| over intervals reaches alpha log(log N/log D) + slack.
    Returns (chosen or None, candidate or None, candidate max, threshold).
    """
    threshold = alpha * math.log(math.log(N) / math.log(D)) + slack
    reals = _real_nonprincipal(D)
    if not reals:
        return None, None, 0.0, threshold
    group = build_character_group(D)
    primes = table.primes_in(D, N)
    sigma = 1 + 1 / math.log(N)
    w = -np.exp(-sigma * np.log(primes.astype(float))).astype(complex)
    sums = np.array([np.real(np.sum(-w * ch.values_at(primes))) for ch in reals])
    cand = reals[int(np.argmin(sums))]
    ends = D * (N / D) ** (np.arange(m + 1) / m)
    ends[0], ends[-1] = D, N
    _, P = next(bucketed_sums(w, primes, group, ends, np.zeros(1), [cand]))
    best = float(max_interval_modulus(P)[0].max())
    return (cand if best >= threshold else None), cand, best, threshold


def bb13_discrepancy(D: int, chi: Character | None, N: float, gamma: float, table: PrimeTable) -> tuple[float, int]:
    """max over reduced a of |phi(D) sum_{p = a} 1/p - sum 1/p - chi(a) sum chi(p)/p| over N^gamma < p <= N."""
    group = build_character_group(D)
    lo = N**gamma
    if D > lo:
        raise ConfigError(f"need D <= N^gamma, got D={D}")
    primes = table.primes_in(lo, N)
    inv = 1.0 / primes.astype(float)
    by_class = np.bincount(primes % D, weights=inv, minlength=D)
    total = float(inv.sum())
    reduced = group.reduced_residues
    lhs = group.phi * by_class[reduced]
    main = np.full(reduced.size, total)
    if chi is not None:
        tab = chi.table
        main = main + np.real(tab[reduced] * float(np.dot(np.real(tab), by_class)))
    err = np.abs(lhs - main)
    i = int(np.argmax(err))
    return float(err[i]), int(reduced[i])


def run_linnik(
    D_max: int,
    N: int = DEFAULT_N,
    gamma: float = DEFAULT_GAMMA,
    table: PrimeTable | None = None,
    alpha: float = 0.5,
    slack: float = DEFAULT_SLACK,
    calibration_D_max: int = CALIBRATION_D_MAX,
) -> dict:
    if not 2 <= D_max <= MAX_MODULUS:
        raise ConfigError(f"need 2 <= D_max <= {MAX_MODULUS}")
    if D_max > N**gamma:
        raise ConfigError("need D_max <= N^gamma")
    table = table if table is not None and table.bound >= N else build_prime_table(N)
    lp_rows = [least_prime_row(D, table) for D in range(2, D_max + 1)]
    complete = all(r.found == r.classes for r in lp_rows)
    worst = max(lp_rows, key=lambda r: r.max_exponent)
    bb = []
    for D in range(3, D_max + 1):
        chi, cand, best, thr = select_character(D, N, table, alpha, slack)
        disc, a = bb13_discrepancy(D, chi, N, gamma, table)
        shape = (math.log(D) / math.log(N)) ** TAU
        bb.append(
            BB13Row(D, chi.exponents if chi else None, cand.exponents if cand else None, best, thr, disc, a, shape)
        )
    cal_rows = [r for r in bb if r.D <= calibration_D_max]
    C = max(r.discrepancy / r.shape for r in cal_rows) if cal_rows else math.nan
    violations = [r.D for r in bb if r.discrepancy > C * r.shape]
    worst_ratio = max(r.discrepancy / r.shape for r in bb) if bb else math.nan
    return {
        "D_max": D_max,
        "N": N,
        "gamma": gamma,
        "least_primes": [r.to_json() for r in lp_rows],
        "all_classes_found": complete,
        "max_exponent": worst.max_exponent,
        "max_exponent_at": {"D": worst.D, "a": worst.argmax_a, "p": worst.max_prime},
        "bb13": {
            "tau": TAU,
            "alpha": alpha,
            "slack": slack,
            "rows": [r.to_json() for r in bb],
            "C": C,
            "calibration_D_max": calibration_D_max,
            "max_ratio": worst_ratio,
            "violations": violations,
            "within_shape": not violations,
        },
    }
