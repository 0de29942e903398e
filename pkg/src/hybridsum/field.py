"""Prime fields with a full discrete-log table.

The table costs O(p) memory, which is the point: character evaluation in the
inner loops becomes an array lookup.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import NotPrime, TooLarge, ZeroInverse

MAX_P = 10**7

# Deterministic for n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_primitive_root(g: int, p: int) -> bool:
    if g % p == 0:
        return False
    return all(pow(g, (p - 1) // q, p) != 1 for q in prime_factors(p - 1))


def smallest_primitive_root(p: int) -> int:
    for g in range(2, p):
        if is_primitive_root(g, p):
            return g
    raise NotPrime(p)  # unreachable for odd primes


def _power_table(g: int, p: int) -> np.ndarray:
    """exp[t] = g^t mod p for t in 0..p-2, filled by block doubling."""
    n = p - 1
    exp = np.empty(n, dtype=np.int64)
    exp[0] = 1
    filled = 1
    while filled < n:
        step = min(filled, n - filled)
        exp[filled:filled + step] = exp[:step] * pow(g, filled, p) % p
        filled += step
    return exp


@dataclass(frozen=True, eq=False)
class PrimeField:
    p: int
    generator: int
    log_table: np.ndarray = dc_field(repr=False)
    exp_table: np.ndarray = dc_field(repr=False)

    def __eq__(self, other):
        return (isinstance(other, PrimeField) and self.p == other.p
                and self.generator == other.generator)

    def __hash__(self):
        return hash((self.p, self.generator))

    def pow_mod(self, x: int, e: int) -> int:
        return pow(x % self.p, e, self.p)

    def inv_mod(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroInverse("0 has no inverse in F_%d" % self.p)
        return pow(x, -1, self.p)

    def log(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroInverse("log of 0 is undefined")
        return int(self.log_table[x])

    def inv_array(self, v: np.ndarray) -> np.ndarray:
        """Vectorized inverse; entries equal to 0 come back as 0."""
        v = np.asarray(v, dtype=np.int64) % self.p
        out = self.exp_table[(-self.log_table[v]) % (self.p - 1)]
        return np.where(v == 0, 0, out)


def make_field(p: int, max_p: int = MAX_P) -> PrimeField:
    """Build F_p with its smallest primitive root and the full log table."""
    p = int(p)
    if p < 3 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    if p > max_p:
        raise TooLarge(f"p={p} exceeds the table budget {max_p}")
    g = smallest_primitive_root(p)
    exp = _power_table(g, p)
    log = np.zeros(p, dtype=np.int64)
    log[exp] = np.arange(p - 1, dtype=np.int64)
    exp.setflags(write=False)
    log.setflags(write=False)
    return PrimeField(p, g, log, exp)


def check_field(F: PrimeField) -> list[str]:
    """Return a list of violated invariants (empty when the field is sound)."""
    problems = []
    p = F.p
    if not is_prime(p):
        problems.append("modulus is not prime")
    if not is_primitive_root(F.generator, p):
        problems.append("generator is not a primitive root")
    xs = np.arange(1, p, dtype=np.int64)
    logs = F.log_table[xs]
    if len(np.unique(logs)) != p - 1 or logs.min() < 0 or logs.max() > p - 2:
        problems.append("log table is not a bijection onto 0..p-2")
    elif not np.array_equal(F.exp_table[logs], xs):
        problems.append("exp/log tables do not round-trip")
    elif any(pow(F.generator, int(F.log_table[x]), p) != x
             for x in range(1, p, max(1, p // 64))):
        problems.append("generator^log(x) != x")
    return problems
