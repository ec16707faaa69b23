"""Exact rational arithmetic helpers, truncated (q, z)-series and sparse
linear algebra over the rationals.

Everything here is exact: scalars are :class:`fractions.Fraction` (or plain
``int``), never floats.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import heapq
from fractions import Fraction
from math import isqrt
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Rational = Fraction

__all__ = [
    "Rational",
    "Q",
    "fstr",
    "frac_part",
    "is_integral",
    "BigradedSeries",
    "eta_power",
    "series_product",
    "SparseEchelon",
    "coordinates_mod",
    "rational_reconstruct",
    "sparse_relations",
    "exact_rank",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "matmul",
    "identity",
    "zeros",
]


def Q(x) -> Fraction:
    """Coerce ``x`` to a Fraction; accepts ints, Fractions and "p/q" strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not allowed")
    return Fraction(x)


def fstr(x) -> str:
    """Canonical fraction string: "3", "-1/2"."""
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def frac_part(x) -> Fraction:
    """Representative of x mod Z in [0, 1)."""
    x = Q(x)
    return x - (x.numerator // x.denominator)


def is_integral(x) -> bool:
    return Q(x).denominator == 1


# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BigradedSeries:
    """q^offset * sum c[h, j] q^h z^j, known exactly for h <= max_h."""

    offset: Fraction
    terms: Mapping[Tuple[int, int], int] = field(default_factory=dict)
    max_h: int = 0

    def __post_init__(self):
        clean = {k: v for k, v in dict(self.terms).items() if v and k[0] <= self.max_h}
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "offset", Q(self.offset))

    @classmethod
    def monomial(cls, h: int = 0, j: int = 0, coeff: int = 1, max_h: int = 0, offset=0):
        return cls(Q(offset), {(h, j): coeff}, max_h)

    @classmethod
    def from_q_coeffs(cls, coeffs: Sequence[int], offset=0, max_h: int | None = None):
        if max_h is None:
            max_h = len(coeffs) - 1
        return cls(Q(offset), {(h, 0): c for h, c in enumerate(coeffs)}, max_h)

    def coeff(self, h: int, j: int = 0) -> int:
        if h > self.max_h:
            raise ValueError(f"q^{h} is beyond the truncation bound {self.max_h}")
        return self.terms.get((h, j), 0)

    def q_coeffs(self) -> List[int]:
        """Coefficients with z set to 1, for h = 0..max_h."""
        out = [0] * (self.max_h + 1)
        for (h, _j), c in self.terms.items():
            if h >= 0:
                out[h] += c
        return out

    def charges(self, h: int) -> Dict[int, int]:
        return {j: c for (hh, j), c in sorted(self.terms.items()) if hh == h}

    def truncate(self, max_h: int) -> "BigradedSeries":
        return BigradedSeries(self.offset, self.terms, min(max_h, self.max_h))

    def __add__(self, other: "BigradedSeries") -> "BigradedSeries":
        if self.offset != other.offset:
            raise ValueError("cannot add series with different offsets")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BigradedSeries(self.offset, out, min(self.max_h, other.max_h))

    def __mul__(self, other: "BigradedSeries") -> "BigradedSeries":
        return series_product(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigradedSeries):
            return NotImplemented
        if self.offset != other.offset:
            return False
        bound = min(self.max_h, other.max_h)
        a = {k: v for k, v in self.terms.items() if k[0] <= bound}
        b = {k: v for k, v in other.terms.items() if k[0] <= bound}
        return a == b

    __hash__ = None  # truncated equality is not compatible with hashing


def series_product(a: BigradedSeries, b: BigradedSeries) -> BigradedSeries:
    bound = min(a.max_h, b.max_h)
    out: Dict[Tuple[int, int], int] = {}
    for (h1, j1), c1 in a.terms.items():
        for (h2, j2), c2 in b.terms.items():
            h = h1 + h2
            if h <= bound:
                out[(h, j1 + j2)] = out.get((h, j1 + j2), 0) + c1 * c2
    return BigradedSeries(a.offset + b.offset, out, bound)


def eta_power(k: int, max_h: int, j: int = 0, start: int = 1) -> BigradedSeries:
    """prod_{n >= start} (1 - z^j q^n)^{-k} truncated at q^max_h (k may be negative)."""
    # log-derivative recurrence is awkward with the z-grading; expand factor by factor.
    result = BigradedSeries.monomial(max_h=max_h)
    for n in range(start, max_h + 1):
        factor: Dict[Tuple[int, int], int] = {}
        if k >= 0:
            # (1 - x)^{-k} = sum_m C(m + k - 1, m) x^m
            m = 0
            while n * m <= max_h:
                factor[(n * m, j * m)] = _binom(m + k - 1, m) if k else int(m == 0)
                m += 1
        else:
            kk = -k
            for m in range(kk + 1):
                if n * m <= max_h:
                    factor[(n * m, j * m)] = (-1) ** m * _binom(kk, m)
        result = result * BigradedSeries(0, factor, max_h)
    return result


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    from math import comb

    return comb(n, k)


# ---------------------------------------------------------------------------
# sparse exact elimination
# ---------------------------------------------------------------------------

SparseVec = Dict[object, Fraction]


class SparseEchelon:
    """Incrementally maintained echelon form of a set of sparse vectors.

    Vectors are dicts key -> Fraction; the key order used for pivoting is the
    first key of each reduced vector under ``sorted`` (deterministic).
    """

    def __init__(self, key=None, reduced: bool = True):
        self._key = key
        self._reduced = reduced
        self.rows: Dict[object, SparseVec] = {}  # pivot -> row normalized to 1 at pivot
        self._order: List[object] = []

    def __len__(self) -> int:
        return len(self.rows)

    def _pivot_of(self, v: SparseVec):
        return min(v, key=self._key) if self._key else min(v)

    def reduce(self, v: Mapping) -> SparseVec:
        w = {k: Q(c) for k, c in v.items() if c}
        rows = self.rows
        if self._reduced:
            # rows carry no foreign pivots, so one pass suffices
            for k in [k for k in w if k in rows]:
                c = w.get(k)
                if c:
                    self._axpy(w, -c, rows[k])
            return w
        # forward elimination in increasing key order
        sk = self._key or (lambda k: k)
        heap = [(sk(k), n, k) for n, k in enumerate(w) if k in rows]
        heapq.heapify(heap)
        tick = len(heap)
        while heap:
            _s, _n, k = heapq.heappop(heap)
            c = w.get(k)
            if not c:
                continue
            row = rows[k]
            for kk in row:
                if kk != k and kk in rows and kk not in w:
                    tick += 1
                    heapq.heappush(heap, (sk(kk), tick, kk))
            self._axpy(w, -c, row)
        return w

    @staticmethod
    def _axpy(w: SparseVec, c: Fraction, row: SparseVec) -> None:
        for kk, rc in row.items():
            nv = w.get(kk, 0) + c * rc
            if nv:
                w[kk] = nv
            else:
                w.pop(kk, None)

    def add(self, v: Mapping) -> bool:
        """Insert v; return True when it increased the rank."""
        w = self.reduce(v)
        if not w:
            return False
        p = self._pivot_of(w)
        inv = 1 / w[p]
        w = {k: c * inv for k, c in w.items()}
        # keep rows fully reduced w.r.t. the new pivot
        for q, row in (self.rows.items() if self._reduced else ()):
            c = row.get(p)
            if c:
                for kk, wc in w.items():
                    nv = row.get(kk, 0) - c * wc
                    if nv:
                        row[kk] = nv
                    else:
                        row.pop(kk, None)
        self.rows[p] = w
        self._order.append(p)
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def coordinates(self, v: Mapping) -> Dict[object, Fraction]:
        """Coefficients of v on the (fully reduced) rows, keyed by pivot.

        Raises ValueError when v is not in the span.
        """
        w = {k: Q(c) for k, c in v.items() if c}
        if not self._reduced:
            raise ValueError("coordinates need a fully reduced echelon")
        coords = {p: w[p] for p in self.rows if w.get(p)}
        rest = self.reduce(w)
        if rest:
            raise ValueError("vector is not in the span")
        return coords

    @property
    def pivots(self) -> List[object]:
        return sorted(self.rows, key=self._key) if self._key else sorted(self.rows)


def coordinates_mod(vectors: Sequence[Mapping], basis: Sequence[Mapping],
                    null: Sequence[Mapping] = ()) -> List[List[Fraction]]:
    """Coordinates of each vector on ``basis`` modulo span(null).

    ``basis`` must be independent modulo ``null``.  Raises ValueError when a
    vector is outside span(basis) + span(null).
    """
    ech = SparseEchelon()
    for v in null:
        ech.add({(0, k): c for k, c in v.items()})
    for idx, v in enumerate(basis):
        row = {(0, k): c for k, c in v.items()}
        if all(k[0] == 1 for k in ech.reduce(row)):
            raise ValueError("basis is dependent modulo the null space")
        row[(1, idx)] = Fraction(1)
        ech.add(row)
    out = []
    for v in vectors:
        rest = ech.reduce({(0, k): c for k, c in v.items()})
        if any(k[0] == 0 for k in rest):
            raise ValueError("vector is not in the span")
        coords = [Fraction(0)] * len(basis)
        for (_tag, idx), c in rest.items():
            coords[idx] = -c
        out.append(coords)
    return out


# ---------------------------------------------------------------------------
# dense matrices (lists of lists of Fraction)
# ---------------------------------------------------------------------------

Matrix = List[List[Fraction]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                o = out[i]
                for j in range(cols):
                    if bk[j]:
                        o[j] += x * bk[j]
    return out


def rref(m: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form; the pivot of each row is its first nonzero column."""
    a = [[Q(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m or not m[0]:
        return 0
    ech = SparseEchelon()
    for row in m:
        ech.add({j: x for j, x in enumerate(row) if x})
    return len(ech)


def kernel_basis(m: Sequence[Sequence], cols: int | None = None) -> List[List[Fraction]]:
    """Basis of {v : m v = 0}; one vector per free column, with a 1 in that column."""
    if cols is None:
        cols = len(m[0]) if m else 0
    if not m:
        return [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    r, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row_idx, p in enumerate(pivots):
            v[p] = -r[row_idx][f]
        basis.append(v)
    return basis


def solve(m: Sequence[Sequence], b: Sequence) -> List[Fraction] | None:
    """One solution of m x = b, or None when inconsistent."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    aug = [list(m[i]) + [b[i]] for i in range(rows)]
    r, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for row_idx, p in enumerate(pivots):
        x[p] = r[row_idx][cols]
    return x


def transpose(m: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


_PRIME = (1 << 61) - 1


def _mod(c: Fraction, p: int) -> int:
    return c.numerator % p * pow(c.denominator, -1, p) % p


def rational_reconstruct(a: int, p: int) -> Optional[Fraction]:
    """The fraction n/d with |n|, d < sqrt(p/2) congruent to a mod p, if any."""
    bound = isqrt(p // 2)
    r0, r1, t0, t1 = p, a % p, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1, t0, t1 = r1, r0 - q * r1, t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    return Fraction(r1, t1)


def sparse_relations(vectors: Sequence[Mapping], p: int = _PRIME) -> Optional[List[Dict[int, Fraction]]]:
    """A basis of the linear relations among ``vectors``, verified over Q.

    Elimination runs modulo ``p``; every relation is lifted by rational
    reconstruction and checked exactly.  Since the rank mod p never exceeds
    the rank over Q, verified lifts give the exact relation space.  Returns
    None when a lift fails (the caller should fall back to exact elimination).
    """
    rows: Dict[object, Tuple[Dict[object, int], Dict[int, int]]] = {}
    rels: List[Dict[int, int]] = []
    for idx, v in enumerate(vectors):
        w = {k: _mod(Q(c), p) for k, c in v.items() if c}
        w = {k: c for k, c in w.items() if c}
        combo = {idx: 1}
        heap = [k for k in w if k in rows]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap)
            c = w.get(k)
            if not c:
                continue
            row, rcombo = rows[k]
            for kk, rc in row.items():
                if kk not in w and kk in rows and kk != k:
                    heapq.heappush(heap, kk)
                nv = (w.get(kk, 0) - c * rc) % p
                if nv:
                    w[kk] = nv
                else:
                    w.pop(kk, None)
            for t, rc in rcombo.items():
                nv = (combo.get(t, 0) - c * rc) % p
                if nv:
                    combo[t] = nv
                else:
                    combo.pop(t, None)
        if not w:
            rels.append(combo)
            continue
        piv = min(w)
        inv = pow(w[piv], -1, p)
        rows[piv] = ({k: c * inv % p for k, c in w.items()}, {t: c * inv % p for t, c in combo.items()})
    out = []
    for combo in rels:
        lifted = {}
        for t, c in combo.items():
            f = rational_reconstruct(c, p)
            if f is None:
                return None
            lifted[t] = f
        acc: Dict[object, Fraction] = {}
        for t, c in lifted.items():
            for k, x in vectors[t].items():
                acc[k] = acc.get(k, 0) + c * x
        if any(acc.values()):
            return None
        out.append(lifted)
    return out


def exact_rank(vectors: Sequence[Mapping]) -> int:
    """Rank over Q, via verified modular relations when possible."""
    vectors = [v for v in vectors if any(v.values())]
    rels = sparse_relations(vectors)
    if rels is not None:
        return len(vectors) - len(rels)
    return sparse_rank(vectors)


def sparse_rank(vectors: Iterable[Mapping]) -> int:
    ech = SparseEchelon(reduced=False)
    for v in vectors:
        ech.add(v)
    return len(ech)
