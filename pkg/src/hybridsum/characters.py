"""Multiplicative and additive characters of F_p as complex numbers."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import gcd, pi

import numpy as np

from .errors import OrderNotDividing
from .field import PrimeField


@dataclass(frozen=True)
class MultChar:
    """chi(g^t) = exp(2 pi i * power * t / order) for the field's generator g.

    chi(0) is 0 for a nontrivial character and 1 for the trivial one, so only
    genuine poles are ever dropped from a sum with trivial chi.
    """
    field: PrimeField
    order: int
    power: int = 1

    def __post_init__(self):
        if self.order < 1 or (self.field.p - 1) % self.order:
            raise OrderNotDividing(f"order {self.order} does not divide p-1={self.field.p - 1}")
        if self.order > 1 and gcd(self.power, self.order) != 1:
            raise OrderNotDividing(f"power {self.power} is not a unit mod {self.order}")

    @property
    def trivial(self) -> bool:
        return self.order == 1

    @property
    def roots(self) -> np.ndarray:
        return np.exp(2j * pi * np.arange(self.order) / self.order)

    def __call__(self, x: int) -> complex:
        x %= self.field.p
        if x == 0:
            return 1.0 + 0j if self.trivial else 0j
        t = self.power * int(self.field.log_table[x]) % self.order
        return cmath.exp(2j * pi * t / self.order)

    def eval_array(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64) % self.field.p
        if self.trivial:
            return np.ones(xs.shape, dtype=complex)
        t = (self.power * self.field.log_table[xs]) % self.order
        out = self.roots[t]
        return np.where(xs == 0, 0j, out)

    def exponent_array(self, xs) -> np.ndarray:
        """Exact index t in Z/order with chi(x) = e(t/order); undefined at 0."""
        xs = np.asarray(xs, dtype=np.int64) % self.field.p
        return (self.power * self.field.log_table[xs]) % self.order

    def conj(self) -> "MultChar":
        return MultChar(self.field, self.order, (-self.power) % self.order if self.order > 1 else 1)


@dataclass(frozen=True)
class AddChar:
    """psi(x) = exp(2 pi i k x / p)."""
    field: PrimeField
    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % self.field.p)

    @property
    def trivial(self) -> bool:
        return self.k == 0

    def __call__(self, x: int) -> complex:
        p = self.field.p
        return cmath.exp(2j * pi * (self.k * x % p) / p)

    def eval_array(self, xs) -> np.ndarray:
        p = self.field.p
        xs = np.asarray(xs, dtype=np.int64) % p
        return np.exp(2j * pi * ((self.k * xs) % p) / p)

    def conj(self) -> "AddChar":
        return AddChar(self.field, -self.k)


def make_mult_char(field: PrimeField, a: int, power: int = 1) -> MultChar:
    return MultChar(field, a, power)


def make_add_char(field: PrimeField, k: int) -> AddChar:
    return AddChar(field, k)


def eval_chi(c: MultChar, x: int) -> complex:
    return c(x)


def eval_psi(c: AddChar, x: int) -> complex:
    return c(x)
