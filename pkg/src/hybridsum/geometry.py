"""Points of a plane curve inside a strip of y-values, and x-shifted curves."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod

import numpy as np

from .algebra import BivarPoly


@dataclass(frozen=True)
class Rectangle:
    """x-range I = [n_lo, n_hi], y-range J = [j_lo, j_hi), window length H."""
    p: int
    n_lo: int
    n_hi: int
    j_lo: int
    j_hi: int
    H: int

    def __post_init__(self):
        p = self.p
        if not (0 <= self.n_lo <= self.n_hi <= p - 1):
            raise ValueError(f"I=[{self.n_lo},{self.n_hi}] not inside [0,{p - 1}]")
        if not (0 <= self.j_lo < self.j_hi <= p):
            raise ValueError(f"J=[{self.j_lo},{self.j_hi}) not inside [0,{p})")
        if not (1 <= self.H <= p):
            raise ValueError(f"H={self.H} not in [1,{p}]")

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.j_lo, self.p)

    @property
    def beta(self) -> Fraction:
        return Fraction(self.j_hi, self.p)

    @property
    def width(self) -> Fraction:
        """beta - alpha, exactly."""
        return Fraction(self.j_hi - self.j_lo, self.p)

    @property
    def size_I(self) -> int:
        return self.n_hi - self.n_lo + 1

    @property
    def size_J(self) -> int:
        return self.j_hi - self.j_lo

    def ns(self) -> np.ndarray:
        return np.arange(self.n_lo, self.n_hi + 1, dtype=np.int64)


class PointTable:
    """Points (x, y) with P(x, y) = 0 and y in J, bucketed by x.

    Stored CSR-style: ``xs``/``ys`` sorted by (x, y) and ``starts[x]`` the
    offset of bucket x, with ``starts[p]`` = r.
    """

    def __init__(self, P: BivarPoly, j_lo: int, j_hi: int, xs: np.ndarray, ys: np.ndarray):
        p = P.field.p
        order = np.lexsort((ys, xs))
        self.P = P
        self.p = p
        self.j_lo = j_lo
        self.j_hi = j_hi
        self.xs = np.ascontiguousarray(xs[order], dtype=np.int64)
        self.ys = np.ascontiguousarray(ys[order], dtype=np.int64)
        self.counts = np.bincount(self.xs, minlength=p).astype(np.int64)
        self.starts = np.concatenate([[0], np.cumsum(self.counts)]).astype(np.int64)
        self.xs.setflags(write=False)
        self.ys.setflags(write=False)

    @property
    def r(self) -> int:
        return int(self.xs.size)

    @property
    def duplicate_x(self) -> bool:
        return bool(self.counts.max(initial=0) >= 2)

    def bucket(self, x: int) -> np.ndarray:
        x %= self.p
        return self.ys[self.starts[x]:self.starts[x + 1]]

    def __len__(self):
        return self.r

    def __iter__(self):
        return zip(self.xs.tolist(), self.ys.tolist())

    def to_csv(self) -> str:
        lines = ["x,y"]
        lines.extend(f"{x},{y}" for x, y in self)
        return "\n".join(lines) + "\n"


def _roots_deg1(A0, A1, F, j_lo, j_hi):
    p = F.p
    xs_all = np.arange(p, dtype=np.int64)
    ok = A1 != 0
    y = (-A0[ok]) % p * F.inv_array(A1[ok]) % p
    x = xs_all[ok]
    keep = (y >= j_lo) & (y < j_hi)
    xs, ys = [x[keep]], [y[keep]]
    # A1(x) = A0(x) = 0: the whole vertical line x = x0 lies on the curve
    for x0 in xs_all[(~ok) & (A0 == 0)]:
        col = np.arange(j_lo, j_hi, dtype=np.int64)
        xs.append(np.full(col.size, x0, dtype=np.int64))
        ys.append(col)
    return np.concatenate(xs), np.concatenate(ys)


def _sqrt_table(p):
    """sqrt[v] = some square root of v, or -1 for non-residues."""
    table = np.full(p, -1, dtype=np.int64)
    half = np.arange((p + 1) // 2, dtype=np.int64)
    table[half * half % p] = half
    return table


def _roots_deg2(A0, A1, A2, F, j_lo, j_hi):
    p = F.p
    xs_all = np.arange(p, dtype=np.int64)
    lin = A2 == 0
    xl, yl = _roots_deg1(np.where(lin, A0, 1), np.where(lin, A1, 0), F, j_lo, j_hi)
    quad = ~lin
    a2, a1, a0, x = A2[quad], A1[quad], A0[quad], xs_all[quad]
    disc = (a1 * a1 - 4 * (a2 * a0 % p)) % p
    s = _sqrt_table(p)[disc]
    has = s >= 0
    inv2a = F.inv_array(2 * a2 % p)
    xs, ys = [xl], [yl]
    for sign in (1, -1):
        y = (-a1 + sign * s) % p * inv2a % p
        mask = has & ((sign == 1) | (s != 0))  # a double root only once
        mask &= (y >= j_lo) & (y < j_hi)
        xs.append(x[mask])
        ys.append(y[mask])
    return np.concatenate(xs), np.concatenate(ys)


def _roots_scan(P, j_lo, j_hi, chunk_cells=4_000_000):
    """Reference path: Horner in y over every (x, y) with y in J."""
    p = P.field.p
    coeffs = [A.eval_array(np.arange(p), 0) for A in P.y_coefficients()]
    ycol = np.arange(j_lo, j_hi, dtype=np.int64)
    rows = max(1, chunk_cells // max(1, ycol.size))
    xs, ys = [], []
    for start in range(0, p, rows):
        stop = min(p, start + rows)
        acc = np.zeros((stop - start, ycol.size), dtype=np.int64)
        for c in reversed(coeffs):
            acc = (acc * ycol[None, :] + c[start:stop, None]) % p
        ix, iy = np.nonzero(acc == 0)
        xs.append(ix.astype(np.int64) + start)
        ys.append(ycol[iy])
    return np.concatenate(xs), np.concatenate(ys)


def enumerate_points(P: BivarPoly, j_lo: int | Rectangle, j_hi: int | None = None,
                     method: str = "auto") -> PointTable:
    """All F_p-points of P = 0 with y in [j_lo, j_hi).

    ``method`` is ``"auto"`` (closed-form roots when deg_y <= 2, scan
    otherwise) or ``"scan"`` to force the exhaustive reference path.
    """
    if isinstance(j_lo, Rectangle):
        j_lo, j_hi = j_lo.j_lo, j_lo.j_hi
    if P.deg_y < 1:
        raise ValueError("curve polynomial must have positive degree in y")
    F = P.field
    p = F.p
    if method == "scan" or P.deg_y > 2:
        xs, ys = _roots_scan(P, j_lo, j_hi)
    else:
        A = [c.eval_array(np.arange(p), 0) for c in P.y_coefficients()]
        if P.deg_y == 1:
            xs, ys = _roots_deg1(A[0], A[1], F, j_lo, j_hi)
        else:
            xs, ys = _roots_deg2(A[0], A[1], A[2], F, j_lo, j_hi)
    return PointTable(P, j_lo, j_hi, xs, ys)


def window_positions(n: int, H: int, p: int, wrap: bool = True) -> np.ndarray:
    """x-coordinates in the window (n, n + H], reduced mod p or truncated at p - 1."""
    xs = np.arange(n + 1, n + H + 1, dtype=np.int64)
    return xs % p if wrap else xs[xs <= p - 1]


def count_rectangle(pt: PointTable, n: int, H: int, wrap: bool = True) -> int:
    """Number of points with x in (n, n + H]."""
    return int(pt.counts[window_positions(n, H, pt.p, wrap)].sum())


@dataclass(frozen=True)
class ShiftedCurve:
    """The system P(x + u_i, y_i) = 0, i = 1..m, in affine (m+1)-space."""
    P: BivarPoly
    U: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.U)) != len(self.U):
            raise ValueError(f"shifts must be distinct: {self.U}")

    @property
    def m(self) -> int:
        return len(self.U)

    def equations(self) -> list[BivarPoly]:
        """P(x + u_i, y) for each shift (y standing in for y_i)."""
        from .algebra import poly_shift_x
        return [poly_shift_x(self.P, u) for u in self.U]

    def contains(self, x: int, ys) -> bool:
        return all(self.P.eval(x + u, y) == 0 for u, y in zip(self.U, ys))


def enumerate_shifted(sc: ShiftedCurve, pt: PointTable, xs) -> list[tuple[int, ...]]:
    """Points (x, y_1..y_m) of the shifted curve with each y_i in J and x in ``xs``.

    Built from the base buckets: (x + u_i, y_i) must be a base point.
    """
    out = []
    for x in np.asarray(xs, dtype=np.int64).tolist():
        buckets = [pt.bucket(x + u).tolist() for u in sc.U]
        for ys in itertools.product(*buckets):
            out.append((x, *ys))
    return out


def _partitions(n, max_part=None):
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def count_matching_tuples(H: int, j: int) -> int:
    """#{(h_1..h_2j) in [1,H]^2j : multiset of first half == multiset of second}.

    Closed form: sum over multisets of size j of (number of orderings)^2,
    grouped by multiplicity pattern (a partition of j).
    """
    if H < 1 or j < 0:
        raise ValueError("need H >= 1 and j >= 0")
    total = 0
    jf = factorial(j)
    for lam in _partitions(j):
        parts = len(lam)
        if parts > H:
            continue
        # multisets with this pattern: choose `parts` distinct values, divided by
        # permutations among equal multiplicities
        falling = prod(range(H - parts + 1, H + 1))
        same = prod(factorial(c) for c in Counter(lam).values())
        orderings = jf // prod(factorial(m) for m in lam)
        total += falling // same * orderings ** 2
    return total
