"""Dirichlet character groups with exact rational angles.

A character mod D is stored by its exponent vector on a fixed set of
generators of (Z/DZ)*.  Its value at a reduced residue a is
e(angle/m) where m is the group exponent and ``angle`` is an integer, so
orders and products are exact integer computations.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce

import numpy as np

from .arith import ArithmeticDomainError, ResourceRefusal, factor_small

MAX_MODULUS = 1_000_000


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = [q for q, _ in factor_small(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ArithmeticDomainError(f"{p} is not prime")


def _crt_lift(residue: int, q: int, D: int) -> int:
    """The n mod D with n = residue (mod q) and n = 1 (mod D/q)."""
    r = D // q
    if r == 1:
        return residue % D
    # n = 1 + r*k, r*k = residue - 1 (mod q)
    k = ((residue - 1) * pow(r, -1, q)) % q
    return (1 + r * k) % D


def root_of_unity_table(m: int) -> np.ndarray:
    k = np.arange(m)
    out = np.exp(2j * np.pi * k / m)
    quarter = (4 * k) % m == 0
    exact = np.array([1, 1j, -1, -1j])
    out[quarter] = exact[(4 * k[quarter] // m) % 4]
    return out


@dataclass(frozen=True, eq=False)
class CharacterGroup:
    """The group of Dirichlet characters mod ``modulus``.

    ``generators`` lists (residue mod D, cyclic order) pairs; ``discrete_logs``
    has shape (D, r) with row a the exponent vector of a, or -1 entries for
    residues not coprime to D.
    """

    modulus: int
    generators: tuple[tuple[int, int], ...]
    discrete_logs: np.ndarray = field(repr=False)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(o for _, o in self.generators)

    @property
    def exponent(self) -> int:
        return reduce(_lcm, self.orders, 1)

    @property
    def phi(self) -> int:
        return math.prod(self.orders)

    @cached_property
    def reduced_mask(self) -> np.ndarray:
        D = self.modulus
        if D == 1:
            return np.ones(1, dtype=bool)
        return np.gcd(np.arange(D), D) == 1

    @cached_property
    def reduced_residues(self) -> np.ndarray:
        if self.modulus == 1:
            return np.array([0])
        return np.flatnonzero(self.reduced_mask)

    @cached_property
    def _log_angles(self) -> np.ndarray:
        # angle contribution of each generator, scaled to the common denominator
        m = self.exponent
        scale = np.array([m // o for o in self.orders], dtype=np.int64)
        return self.discrete_logs * scale

    @cached_property
    def roots(self) -> np.ndarray:
        return root_of_unity_table(self.exponent)

    @cached_property
    def characters(self) -> tuple["Character", ...]:
        vecs = itertools.product(*(range(o) for o in self.orders))
        return tuple(Character(self, tuple(v)) for v in vecs)

    @property
    def principal(self) -> "Character":
        return self.characters[0]

    def character(self, exponents) -> "Character":
        exps = tuple(int(e) % o for e, o in zip(exponents, self.orders, strict=True))
        return Character(self, exps)

    def index_of(self, chi: "Character") -> int:
        idx = 0
        for e, o in zip(chi.exponents, self.orders):
            idx = idx * o + e
        return idx

    def exponent_vector(self, a: int) -> tuple[int, ...] | None:
        row = self.discrete_logs[a % self.modulus]
        if self.modulus > 1 and row.size and row[0] < 0:
            return None
        return tuple(int(v) for v in row)

    def angle_matrix(self, chars=None) -> np.ndarray:
        """Integer angle numerators, shape (len(chars), D); -1 off reduced residues."""
        chars = self.characters if chars is None else chars
        E = np.array([c.exponents for c in chars], dtype=np.int64).reshape(len(chars), -1)
        ang = (E @ self._log_angles.T) % self.exponent
        ang[:, ~self.reduced_mask] = -1
        return ang

    def value_matrix(self, chars=None) -> np.ndarray:
        """Complex values chi(a) for a = 0..D-1, shape (len(chars), D)."""
        ang = self.angle_matrix(chars)
        out = self.roots[np.maximum(ang, 0)]
        out[ang < 0] = 0
        return out


def build_character_group(D: int) -> CharacterGroup:
    if not 1 <= D <= MAX_MODULUS:
        raise ResourceRefusal(f"modulus {D} outside [1, {MAX_MODULUS}]")
    gens: list[tuple[int, int]] = []
    columns: list[np.ndarray] = []
    a = np.arange(D, dtype=np.int64)
    for p, e in factor_small(D):
        q = p**e
        res = a % q
        if p == 2:
            if e == 1:
                continue
            sign_log = np.full(q, -1, dtype=np.int64)
            five_log = np.full(q, -1, dtype=np.int64)
            half = q // 4 if e >= 3 else 1
            v = 1
            for j in range(half):
                sign_log[v] = 0
                five_log[v] = j
                sign_log[q - v] = 1
                five_log[q - v] = j
                v = v * 5 % q
            gens.append((_crt_lift(q - 1, q, D), 2))
            columns.append(sign_log[res])
            if e >= 3:
                gens.append((_crt_lift(5, q, D), half))
                columns.append(five_log[res])
        else:
            g = primitive_root(p)
            if e > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            order = q - q // p
            table = np.full(q, -1, dtype=np.int64)
            v = 1
            for j in range(order):
                table[v] = j
                v = v * g % q
            gens.append((_crt_lift(g, q, D), order))
            columns.append(table[res])
    if columns:
        logs = np.stack(columns, axis=1)
        logs[(logs < 0).any(axis=1)] = -1
    else:
        logs = np.zeros((D, 0), dtype=np.int64)
    logs.setflags(write=False)
    return CharacterGroup(modulus=D, generators=tuple(gens), discrete_logs=logs)


@dataclass(frozen=True, eq=False)
class Character:
    group: CharacterGroup = field(repr=False)
    exponents: tuple[int, ...]

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return self.group.modulus == other.group.modulus and self.exponents == other.exponents

    def __hash__(self):
        return hash((self.group.modulus, self.exponents))

    def __repr__(self):
        return f"Character(D={self.modulus}, exponents={self.exponents})"

    @property
    def modulus(self) -> int:
        return self.group.modulus

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    @property
    def order(self) -> int:
        return char_order(self)

    @property
    def index(self) -> int:
        return self.group.index_of(self)

    def conj(self) -> "Character":
        return self.group.character(-e for e in self.exponents)

    def __mul__(self, other: "Character") -> "Character":
        if other.group.modulus != self.modulus:
            raise ArithmeticDomainError("characters to different moduli")
        return self.group.character(a + b for a, b in zip(self.exponents, other.exponents))

    def __pow__(self, k: int) -> "Character":
        return self.group.character(k * e for e in self.exponents)

    @cached_property
    def angles(self) -> np.ndarray:
        """Angle numerators over the common denominator, per residue mod D; -1 off reduced residues."""
        return self.group.angle_matrix([self])[0]

    @cached_property
    def table(self) -> np.ndarray:
        """chi(a) for a = 0..D-1."""
        t = self.group.value_matrix([self])[0]
        t.setflags(write=False)
        return t

    def angle(self, n: int) -> Fraction | None:
        """chi(n) = e(angle) as an exact fraction in [0, 1), or None when chi(n) = 0."""
        k = int(self.angles[n % self.modulus])
        if k < 0:
            return None
        return Fraction(k, self.group.exponent)

    def __call__(self, n):
        return char_value(self, n)

    def values_at(self, n: np.ndarray) -> np.ndarray:
        return self.table[np.asarray(n) % self.modulus]

    def to_json(self) -> dict:
        return {"D": self.modulus, "exponents": list(self.exponents)}


def char_value(chi: Character, n: int) -> complex:
    if n < 1:
        raise ArithmeticDomainError(f"character argument must be >= 1, got {n}")
    return complex(chi.table[n % chi.modulus])


def char_order(chi: Character) -> int:
    return reduce(
        _lcm,
        (o // math.gcd(e, o) for e, o in zip(chi.exponents, chi.group.orders)),
        1,
    )


def partial_char_sum(chi: Character, u: int, v: int) -> complex:
    """Sum of chi(n) over u < n <= v."""
    if not 0 <= u <= v:
        raise ArithmeticDomainError(f"need 0 <= u <= v, got u={u}, v={v}")
    D = chi.modulus
    # prefix[k] = chi(1) + ... + chi(k), k = 0..D
    t = chi.table
    prefix = np.concatenate(([0], np.cumsum(np.roll(t, -1))))

    def S(w: int) -> complex:
        return (w // D) * prefix[D] + prefix[w % D]

    return complex(S(v) - S(u))


def unit_value(angle: Fraction) -> complex:
    return cmath.exp(2j * cmath.pi * angle)
