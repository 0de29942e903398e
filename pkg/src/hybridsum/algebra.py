"""Bivariate polynomials and rational maps over F_p.

Polynomials are immutable: arithmetic always returns a new object.  Terms are
keyed by ``(i, j)`` for the monomial x^i y^j and never store zero coefficients.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Iterable, Mapping

import numpy as np

from .errors import FieldMismatch, NotPolynomial, ZeroDenominator
from .field import PrimeField


class BivarPoly:
    __slots__ = ("field", "_c", "degree", "deg_y", "deg_x")

    def __init__(self, field: PrimeField, coeffs: Mapping[tuple[int, int], int] | None = None):
        p = field.p
        c = {}
        for (i, j), v in (coeffs or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in monomial {(i, j)}")
            v = int(v) % p
            if v:
                c[(int(i), int(j))] = v
        self.field = field
        self._c = c
        self.degree = max((i + j for i, j in c), default=-1)
        self.deg_y = max((j for _, j in c), default=-1)
        self.deg_x = max((i for i, _ in c), default=-1)

    # constructors
    @classmethod
    def const(cls, field, c):
        return cls(field, {(0, 0): c})

    @classmethod
    def x(cls, field):
        return cls(field, {(1, 0): 1})

    @classmethod
    def y(cls, field):
        return cls(field, {(0, 1): 1})

    @property
    def coeffs(self) -> dict[tuple[int, int], int]:
        return dict(self._c)

    def terms(self):
        """Terms in descending graded-lex order: total degree, then x-degree."""
        return sorted(self._c.items(), key=lambda t: (t[0][0] + t[0][1], t[0][0]), reverse=True)

    def is_zero(self):
        return not self._c

    def is_constant(self):
        return self.degree <= 0

    def constant_term(self):
        return self._c.get((0, 0), 0)

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch(f"F_{self.field.p} vs F_{other.field.p}")

    def _coerce(self, other):
        if isinstance(other, BivarPoly):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer)):
            return BivarPoly.const(self.field, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return BivarPoly(self.field, c)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly(self.field, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        c: dict[tuple[int, int], int] = {}
        for (i1, j1), v1 in self._c.items():
            for (i2, j2), v2 in other._c.items():
                k = (i1 + i2, j1 + j2)
                c[k] = (c.get(k, 0) + v1 * v2) % p
        return BivarPoly(self.field, c)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = BivarPoly.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = BivarPoly.const(self.field, int(other))
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.field == other.field and self._c == other._c

    def __hash__(self):
        return hash((self.field.p, frozenset(self._c.items())))

    def __repr__(self):
        return f"BivarPoly(F_{self.field.p}, {self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for (i, j), v in self.terms():
            factors = []
            if v != 1 or (i == 0 and j == 0):
                factors.append(str(v))
            if i:
                factors.append("x" if i == 1 else f"x^{i}")
            if j:
                factors.append("y" if j == 1 else f"y^{j}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __call__(self, x0: int, y0: int) -> int:
        return self.eval(x0, y0)

    def eval(self, x0: int, y0: int) -> int:
        p = self.field.p
        x0 %= p
        y0 %= p
        return sum(v * pow(x0, i, p) * pow(y0, j, p) for (i, j), v in self._c.items()) % p

    def eval_array(self, xs, ys) -> np.ndarray:
        """Vectorized evaluation at points (xs[k], ys[k]); int64 result in [0, p)."""
        p = self.field.p
        xs = np.asarray(xs, dtype=np.int64) % p
        ys = np.asarray(ys, dtype=np.int64) % p
        xs, ys = np.broadcast_arrays(xs, ys)
        out = np.zeros(xs.shape, dtype=np.int64)
        if not self._c:
            return out
        xp = [np.ones_like(xs)]
        for _ in range(max(self.deg_x, 0)):
            xp.append(xp[-1] * xs % p)
        yp = [np.ones_like(ys)]
        for _ in range(max(self.deg_y, 0)):
            yp.append(yp[-1] * ys % p)
        for (i, j), v in self._c.items():
            out = (out + v * (xp[i] * yp[j] % p)) % p
        return out

    def specialize_x(self, x0: int) -> list[int]:
        """Coefficients (ascending in y) of the univariate polynomial P(x0, y)."""
        p = self.field.p
        out = [0] * (max(self.deg_y, 0) + 1)
        for (i, j), v in self._c.items():
            out[j] = (out[j] + v * pow(x0, i, p)) % p
        return out

    def y_coefficients(self) -> list["BivarPoly"]:
        """P = sum_j A_j(x) y^j; returns [A_0, A_1, ...] as polynomials in x."""
        parts = [dict() for _ in range(max(self.deg_y, 0) + 1)]
        for (i, j), v in self._c.items():
            parts[j][(i, 0)] = v
        return [BivarPoly(self.field, d) for d in parts]


def poly_add(q1: BivarPoly, q2: BivarPoly) -> BivarPoly:
    return q1 + q2


def poly_mul(q1: BivarPoly, q2: BivarPoly) -> BivarPoly:
    return q1 * q2


def poly_shift_x(q: BivarPoly, u: int) -> BivarPoly:
    """Substitute x -> x + u, i.e. return q(x + u, y)."""
    p = q.field.p
    u %= p
    if u == 0:
        return q
    c: dict[tuple[int, int], int] = {}
    for (i, j), v in q._c.items():
        for t in range(i + 1):
            k = (t, j)
            c[k] = (c.get(k, 0) + v * comb(i, t) * pow(u, i - t, p)) % p
    return BivarPoly(q.field, c)


class _Pole:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "POLE"

    def __bool__(self):
        return False


POLE = _Pole()


@dataclass(frozen=True)
class RationalMap:
    numerator: BivarPoly
    denominator: BivarPoly

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ZeroDenominator("denominator is the zero polynomial")
        if self.numerator.field != self.denominator.field:
            raise FieldMismatch("numerator and denominator over different fields")

    @classmethod
    def from_poly(cls, q: BivarPoly) -> "RationalMap":
        return cls(q, BivarPoly.const(q.field, 1))

    @property
    def field(self):
        return self.numerator.field

    @property
    def d_den(self) -> int:
        return self.denominator.degree

    @property
    def pole_degree(self) -> int:
        """Degree of the denominator once homogenized: max(deg num, deg den)."""
        return max(self.numerator.degree, self.denominator.degree, 0)

    def is_polynomial(self) -> bool:
        return self.denominator.degree == 0

    def as_polynomial(self) -> BivarPoly:
        if not self.is_polynomial():
            raise NotPolynomial(f"denominator {self.denominator} is not constant")
        return self.numerator * self.field.inv_mod(self.denominator.constant_term())

    def __str__(self):
        if self.denominator == 1:
            return str(self.numerator)
        return f"({self.numerator}) / ({self.denominator})"

    def shift_x(self, u: int) -> "RationalMap":
        return RationalMap(poly_shift_x(self.numerator, u), poly_shift_x(self.denominator, u))

    def eval(self, x0: int, y0: int):
        return eval_rational(self, x0, y0)

    def eval_array(self, xs, ys):
        """Return (values, pole_mask); values at poles are 0."""
        num = self.numerator.eval_array(xs, ys)
        den = self.denominator.eval_array(xs, ys)
        pole = den == 0
        vals = num * self.field.inv_array(den) % self.field.p
        return np.where(pole, 0, vals), pole


def eval_rational(r: RationalMap, x0: int, y0: int):
    """numerator/denominator at (x0, y0), or POLE where the denominator vanishes."""
    den = r.denominator.eval(x0, y0)
    if den == 0:
        return POLE
    return r.numerator.eval(x0, y0) * r.field.inv_mod(den) % r.field.p


def split_r1_r2(f: BivarPoly | RationalMap) -> tuple[BivarPoly, BivarPoly]:
    """Split f = r1(x) + r2(x, y) where r1 collects the terms free of y."""
    if isinstance(f, RationalMap):
        f = f.as_polynomial()
    r1 = {k: v for k, v in f._c.items() if k[1] == 0}
    r2 = {k: v for k, v in f._c.items() if k[1] > 0}
    return BivarPoly(f.field, r1), BivarPoly(f.field, r2)


def _graded_key(m):
    return (m[0] + m[1], m[0])


def is_perfect_power(q: BivarPoly, a: int) -> bool:
    """True iff q = c * h^a for a constant c and some h in F_p[x, y].

    Root extraction runs term by term in graded-lex order: with h monic and
    leading monomial m, each new term t of h satisfies
    LT(q/c - h_partial^a) = a * m^(a-1) * t.  Needs a not divisible by p.
    """
    if a < 1:
        raise ValueError("a must be positive")
    if q.is_zero() or q.is_constant() or a == 1:
        return True
    F = q.field
    p = F.p
    if a % p == 0:
        raise ValueError("root extraction needs p not dividing a")
    (lm, lc), = q.terms()[:1]
    if lm[0] % a or lm[1] % a:
        return False
    target = q * F.inv_mod(lc)
    m = (lm[0] // a, lm[1] // a)
    h = BivarPoly(F, {m: 1})
    inv_a = F.inv_mod(a)
    last = m
    while True:
        resid = target - h ** a
        if resid.is_zero():
            return True
        (rm, rc), = resid.terms()[:1]
        ti, tj = rm[0] - m[0] * (a - 1), rm[1] - m[1] * (a - 1)
        if ti < 0 or tj < 0 or _graded_key((ti, tj)) >= _graded_key(last):
            return False
        h = h + BivarPoly(F, {(ti, tj): rc * inv_a % p})
        last = (ti, tj)


def is_pth_power_multiple(q: BivarPoly) -> bool:
    """True iff q = c * h^p over the algebraic closure (every exponent divisible by p)."""
    p = q.field.p
    return all(i % p == 0 and j % p == 0 for i, j in q._c)


class Tri(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "not-decidable"

    @classmethod
    def of(cls, b: bool) -> "Tri":
        return cls.HOLDS if b else cls.FAILS


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNKNOWN = "unknown"


MODES = ("mainthm", "trivial_chi", "trivial_psi")


@dataclass
class HypothesisReport:
    mode: str
    flags: dict[str, Tri]
    hypotheses: dict[str, Verdict]
    assumed: list[str] = dc_field(default_factory=list)

    @property
    def overall(self) -> Verdict:
        vs = list(self.hypotheses.values())
        if Verdict.FAIL in vs:
            return Verdict.FAIL
        if Verdict.UNKNOWN in vs:
            return Verdict.UNKNOWN
        return Verdict.PASS

    def to_dict(self):
        return {
            "mode": self.mode,
            "flags": {k: v.value for k, v in self.flags.items()},
            "hypotheses": {k: v.value for k, v in self.hypotheses.items()},
            "overall": self.overall.value,
            "assumed": list(self.assumed),
        }


def _verdict(t: Tri) -> Verdict:
    return {Tri.HOLDS: Verdict.PASS, Tri.FAILS: Verdict.FAIL, Tri.UNKNOWN: Verdict.UNKNOWN}[t]


def g_power_flag(g: RationalMap, a: int) -> Tri:
    """Whether g = c * h^a as a rational function (numerator * den^(a-1) test)."""
    if a == 1:
        return Tri.HOLDS
    combined = g.numerator * g.denominator ** (a - 1)
    return Tri.of(is_perfect_power(combined, a))


def check_hypotheses(f: RationalMap, g: RationalMap, P: BivarPoly, a: int,
                     mode: str = "mainthm", duplicate_x: bool | None = None) -> HypothesisReport:
    """Evaluate the syntactically decidable theorem hypotheses.

    ``duplicate_x`` comes from a PointTable for the chosen y-interval; ``None``
    leaves that flag undecided.  Conditions that live in the ideal of the curve
    (terms Q * P^b, Artin-Schreier forms h^p - h) are listed in ``assumed``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if P.deg_y < 1:
        raise ValueError("curve polynomial must have positive degree in y")
    p = f.field.p
    flags: dict[str, Tri] = {}
    hyps: dict[str, Verdict] = {}

    poly = f.is_polynomial()
    flags["f_is_polynomial"] = Tri.of(poly)
    if poly:
        fp = f.as_polynomial()
        r1, r2 = split_r1_r2(fp)
        flags["deg_f_lt_p"] = Tri.of(fp.degree < p)
        flags["r2_linear"] = Tri.of(r2.degree <= 1)
        flags["deg_r1_ge_3"] = Tri.of(r1.degree >= 3)
        flags["denominator_pth_power"] = Tri.UNKNOWN
    else:
        for k in ("deg_f_lt_p", "r2_linear", "deg_r1_ge_3"):
            flags[k] = Tri.UNKNOWN
        flags["denominator_pth_power"] = Tri.of(is_pth_power_multiple(f.denominator))
    flags["g_is_ath_power"] = g_power_flag(g, a)
    flags["curve_has_duplicate_x"] = Tri.UNKNOWN if duplicate_x is None else Tri.of(duplicate_x)

    if mode in ("mainthm", "trivial_chi"):
        if poly:
            shape_ok = (flags["r2_linear"] is Tri.FAILS or flags["deg_r1_ge_3"] is Tri.HOLDS)
            hyps["f_condition_1"] = Verdict.PASS if (flags["deg_f_lt_p"] is Tri.HOLDS and shape_ok) \
                else Verdict.FAIL
        else:
            hyps["f_condition_2"] = _verdict(
                Tri.FAILS if flags["denominator_pth_power"] is Tri.HOLDS else Tri.HOLDS)
    else:
        hyps["g_not_ath_power"] = Verdict.FAIL if flags["g_is_ath_power"] is Tri.HOLDS \
            else Verdict.PASS
    if duplicate_x is not None:
        hyps["one_point_per_x"] = Verdict.FAIL if duplicate_x else Verdict.PASS

    assumed = ["P absolutely irreducible"]
    if mode == "trivial_psi":
        assumed.append("g not of the form h^a + Q*P^b modulo the curve")
    else:
        assumed.append("f not of the form h^p - h + linear + Q*P^b")
        if poly:
            assumed.append("r2 not of the form linear + Q*P^b (only plain linearity checked)")
        else:
            assumed.append("f1, f2 coprime")
    return HypothesisReport(mode, flags, hyps, assumed)


def degeneracy_flag(g: RationalMap, f: RationalMap | None, a: int) -> Tri:
    """Syntactic form of the exceptional case for the complete-sum bound.

    HOLDS when g is a constant times an a-th power and f is linear (or the
    additive character is trivial, signalled by ``f=None``).  Anything else is
    UNKNOWN, since the same shapes can still appear modulo the curve.
    """
    g_pow = g_power_flag(g, a)
    if f is None:
        f_lin = Tri.HOLDS
    elif f.is_polynomial():
        f_lin = Tri.of(f.as_polynomial().degree <= 1)
    else:
        f_lin = Tri.FAILS
    if g_pow is Tri.HOLDS and f_lin is Tri.HOLDS:
        return Tri.HOLDS
    return Tri.UNKNOWN


def monomials(field: PrimeField, items: Iterable[tuple[int, int, int]]) -> BivarPoly:
    """Build a polynomial from (coefficient, i, j) triples."""
    c: dict[tuple[int, int], int] = {}
    for v, i, j in items:
        c[(i, j)] = c.get((i, j), 0) + v
    return BivarPoly(field, c)
