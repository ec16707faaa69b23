"""Vertex-operator calculus for Heisenberg/lattice Fock modules.

A :class:`Frame` fixes Heisenberg generators with a Gram matrix, a lattice
basis (used for the cocycle), named vectors, and optionally a conformal and a
charge state.  A :class:`FockState` is a finite linear combination of
normally ordered creation words applied to exponentials ``e^gamma``.

Mode convention: ``Y(A, z) = sum_n A_n z^{-n-1}`` everywhere.

Fields of states ``h1(-n1)...hk(-nk) e^gamma`` are expanded as

    Y(A, z) = : d^{(n1-1)}h1(z) ... d^{(nk-1)}hk(z) E^-(gamma, z) E^+(gamma, z) e^gamma z^{gamma(0)} eps(gamma, .) :

with every nonnegative Heisenberg mode (zero modes included) placed to the
right of ``e^gamma``.  Coefficients are extracted exactly.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .exact import Q, fstr, solve

Word = Tuple[Tuple[int, int], ...]  # sorted ((generator index, m >= 1), ...) meaning gen(-m)
Exponent = Tuple[Fraction, ...]
Key = Tuple[Word, Exponent]

__all__ = [
    "Frame",
    "FockState",
    "FrameMismatch",
    "LatticeError",
    "mode_apply",
    "translate",
    "bracket_modes",
    "direct_bracket",
    "max_mode",
    "weight_of",
    "charge_of",
    "heisenberg",
    "nw_frame",
    "vacuum_weight_bound",
    "partitions",
    "words_of_degree",
]


class Vec(tuple):
    """Coordinate tuple with a cached hash (exponents are hashed constantly)."""

    def __new__(cls, coords):
        self = tuple.__new__(cls, coords)
        self._h = tuple.__hash__(self)
        return self

    def __hash__(self):
        return self._h

    def __reduce__(self):
        return (Vec, (tuple(self),))


class FrameMismatch(ValueError):
    pass


class LatticeError(ValueError):
    """An exponent or pairing falls outside what the frame can handle."""


def _gbinom(top: int, k: int) -> int:
    """Binomial coefficient with arbitrary integer top and k >= 0."""
    if k < 0:
        return 0
    if top >= 0:
        return comb(top, k) if k <= top else 0
    return (-1) ** k * comb(k - top - 1, k)


class Frame:
    """Free-field ambient: Heisenberg generators, Gram matrix, lattice and cocycle.

    ``gram[i][j]`` pairs generators ``i`` and ``j``.  ``lattice_basis`` is an
    ordered list of named vectors (generator coordinates) spanning the same
    space; the cocycle is defined on lattice coordinates by
    ``eps(a_i, a_j) = 1`` for ``i <= j`` and
    ``eps(a_i, a_j) = (-1)^(<a_i,a_j> + <a_i,a_i><a_j,a_j>)`` for ``i > j``,
    extended bimultiplicatively.  The second argument may have rational
    coordinates; its floor is used, so the sign is multiplicative under
    integral shifts.
    """

    def __init__(
        self,
        generators: Sequence[str],
        gram: Sequence[Sequence],
        lattice_basis: Sequence[str],
        vectors: Optional[Mapping[str, Sequence]] = None,
        conformal: Optional["FockState"] = None,
        charge: Optional["FockState"] = None,
        name: str = "frame",
    ):
        self.name = name
        self._intern: Dict = {}
        self._pv: Dict = {}
        self.generators = tuple(generators)
        n = len(self.generators)
        self.gram = tuple(tuple(Q(x) for x in row) for row in gram)
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise ValueError("Gram matrix must be square with one row per generator")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        vecs: Dict[str, Exponent] = {}
        for i, g in enumerate(self.generators):
            vecs[g] = tuple(Fraction(int(i == k)) for k in range(n))
        for k, v in (vectors or {}).items():
            v = tuple(Q(x) for x in v)
            if len(v) != n:
                raise ValueError(f"vector {k!r} has the wrong length")
            if k in vecs and vecs[k] != v:
                raise ValueError(f"vector {k!r} conflicts with a generator")
            vecs[k] = v
        self.vectors = vecs
        self.lattice_basis = tuple(lattice_basis)
        for b in self.lattice_basis:
            if b not in self.vectors:
                raise ValueError(f"lattice basis vector {b!r} is not defined")
        if len(self.lattice_basis) != n:
            raise ValueError("lattice basis must have one vector per generator")
        # rows: lattice basis vectors in generator coordinates; invert to get
        # lattice coordinates of an arbitrary exponent.
        basis_rows = [self.vectors[b] for b in self.lattice_basis]
        cols = [[basis_rows[j][i] for j in range(n)] for i in range(n)]  # generator i, lattice j
        self._to_lattice = []
        for k in range(n):
            e = [Fraction(int(i == k)) for i in range(n)]
            sol = solve(cols, e)
            if sol is None:
                raise ValueError("lattice basis is not linearly independent")
            self._to_lattice.append(sol)  # lattice coords of generator k
        lg = [[self.pair(a, b) for b in basis_rows] for a in basis_rows]
        for row in lg:
            for x in row:
                if x.denominator != 1:
                    raise ValueError("lattice basis must pair integrally")
        self.lattice_gram = lg
        self._eps_m = [
            [int(lg[i][j] + lg[i][i] * lg[j][j]) % 2 for j in range(n)] for i in range(n)
        ]
        self.conformal = conformal
        self.charge = charge
        self._id = self._ident()
        self.cache: Dict = {}
        self._lcache: Dict = {}

    # -- identity ---------------------------------------------------------
    def _ident(self):
        return (
            self.generators,
            self.gram,
            self.lattice_basis,
            tuple(sorted(self.vectors.items())),
        )

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Frame):
            return NotImplemented
        return self._id == other._id

    def __hash__(self) -> int:
        return hash(self._id)

    def __repr__(self) -> str:
        return f"Frame({self.name!r}, generators={list(self.generators)})"

    # -- vectors ----------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.generators)

    def vec(self, spec: Union[str, Sequence, Mapping]) -> Exponent:
        """Vector from a name, a coordinate sequence or a {name: coefficient} map."""
        if isinstance(spec, str):
            try:
                return self.intern(self.vectors[spec])
            except KeyError:
                raise KeyError(f"unknown vector {spec!r}") from None
        if isinstance(spec, Mapping):
            out = [Fraction(0)] * self.rank
            for k, c in spec.items():
                v = self.vectors[k]
                c = Q(c)
                for i in range(self.rank):
                    out[i] += c * v[i]
            return self.intern(tuple(out))
        v = tuple(Q(x) for x in spec)
        if len(v) != self.rank:
            raise ValueError("vector has the wrong length")
        return self.intern(v)

    def pair(self, a, b) -> Fraction:
        a = self.vec(a) if not isinstance(a, tuple) else a
        b = self.vec(b) if not isinstance(b, tuple) else b
        pb = self.pairings(b) if isinstance(b, Vec) else self.pairings(self.intern(b))
        s = Fraction(0)
        for ai, x in zip(a, pb):
            if ai and x:
                s += ai * x
        return s

    def intern(self, v) -> Exponent:
        hit = self._intern.get(v)
        if hit is None:
            hit = Vec(Q(x) for x in v)
            self._intern[hit] = hit
        return hit

    def pairings(self, v: Exponent) -> Tuple[Fraction, ...]:
        """(<a_0, v>, ..., <a_{n-1}, v>) for the generators a_i."""
        hit = self._pv.get(v)
        if hit is None:
            hit = tuple(
                sum((row[j] * x for j, x in enumerate(v) if x), Fraction(0)) for row in self.gram
            )
            self._pv[v] = hit
        return hit

    def pair_gen(self, gen: int, v: Exponent) -> Fraction:
        return self.pairings(v)[gen]

    def add_vectors(self, a: Exponent, b: Exponent) -> Exponent:
        key = ("sum", a, b)
        hit = self._lcache.get(key)
        if hit is None:
            hit = self.intern(tuple(x + y for x, y in zip(a, b)))
            self._lcache[key] = hit
        return hit

    def lattice_coords(self, v: Exponent) -> Tuple[Fraction, ...]:
        out = [Fraction(0)] * self.rank
        for k, x in enumerate(v):
            if x:
                lk = self._to_lattice[k]
                for j in range(self.rank):
                    out[j] += x * lk[j]
        return tuple(out)

    def cocycle(self, gamma: Exponent, delta: Exponent) -> int:
        key = (gamma, delta)
        hit = self._lcache.get(key)
        if hit is not None:
            return hit
        g = self.lattice_coords(gamma)
        if any(x.denominator != 1 for x in g):
            raise LatticeError(f"exponent {self.format_vector(gamma)} is not in the lattice")
        d = [x.numerator // x.denominator for x in self.lattice_coords(delta)]
        s = 0
        n = self.rank
        for i in range(n):
            gi = g[i]
            if not gi:
                continue
            for j in range(i):
                if self._eps_m[i][j] and d[j]:
                    s += int(gi) * d[j]
        out = -1 if s % 2 else 1
        self._lcache[key] = out
        return out

    def parity(self, gamma: Exponent) -> int:
        nn = self.pair(gamma, gamma)
        if nn.denominator != 1:
            raise LatticeError("parity undefined for non-integral norm")
        return int(nn) % 2

    def format_vector(self, v: Exponent) -> str:
        parts = [f"{fstr(x)}*{g}" for g, x in zip(self.generators, v) if x]
        return "+".join(parts) if parts else "0"

    # -- state constructors ------------------------------------------------
    def zero_vector(self) -> Exponent:
        return self.intern(tuple(Fraction(0) for _ in self.generators))

    def vacuum(self) -> "FockState":
        return FockState(self, {((), self.zero_vector()): Fraction(1)})

    def zero(self) -> "FockState":
        return FockState(self, {})

    def exp(self, v) -> "FockState":
        return FockState(self, {((), self.vec(v)): Fraction(1)})

    def mode(self, v, m: int) -> "FockState":
        """h(m)𝟙 for a vector h (only m <= -1 is nonzero)."""
        return heisenberg(self.vec(v), m, self.vacuum())

    def with_conformal(self, conformal: Optional["FockState"] = None, charge: Optional["FockState"] = None) -> "Frame":
        """Same frame (equal, interoperable states) with new designated states."""
        f = Frame.__new__(Frame)
        f.__dict__.update(self.__dict__)
        f.cache = self.cache
        f.conformal = conformal if conformal is not None else self.conformal
        f.charge = charge if charge is not None else self.charge
        if f.conformal is not None:
            f.conformal = f.conformal.in_frame(f)
        if f.charge is not None:
            f.charge = f.charge.in_frame(f)
        return f


class FockState:
    """Finite sum of coefficient * word * e^exponent in a frame."""

    __slots__ = ("frame", "terms")

    def __init__(self, frame: Frame, terms: Mapping[Key, object] = ()):
        self.frame = frame
        t: Dict[Key, Fraction] = {}
        for (w, e), c in dict(terms).items():
            c = Q(c)
            if c:
                e = frame.intern(e)
                t[(w, e)] = t.get((w, e), 0) + c
        t = {k: c for k, c in t.items() if c}
        self.terms = t

    @classmethod
    def _raw(cls, frame: Frame, terms: Dict[Key, Fraction]) -> "FockState":
        s = cls.__new__(cls)
        s.frame = frame
        s.terms = terms
        return s

    def in_frame(self, frame: Frame) -> "FockState":
        if frame != self.frame:
            raise FrameMismatch("state belongs to a different frame")
        return FockState._raw(frame, dict(self.terms))

    def _check(self, other: "FockState"):
        if self.frame is not other.frame and self.frame != other.frame:
            raise FrameMismatch("states live in different frames")

    def __add__(self, other: "FockState") -> "FockState":
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return FockState._raw(self.frame, t)

    __radd__ = __add__

    def __neg__(self) -> "FockState":
        return FockState._raw(self.frame, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "FockState") -> "FockState":
        return self + (-other)

    def __mul__(self, scalar) -> "FockState":
        s = Q(scalar)
        if not s:
            return FockState._raw(self.frame, {})
        return FockState._raw(self.frame, {k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockState):
            return NotImplemented
        return self.frame == other.frame and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: _key_order(kv[0])))

    def __len__(self) -> int:
        return len(self.terms)

    def exponents(self) -> set:
        return {e for (_w, e) in self.terms}

    def exponent(self) -> Exponent:
        es = self.exponents()
        if len(es) != 1:
            raise LatticeError("state is not homogeneous in the exponent")
        return next(iter(es))

    def by_exponent(self) -> Dict[Exponent, "FockState"]:
        out: Dict[Exponent, Dict[Key, Fraction]] = {}
        for (w, e), c in self.terms.items():
            out.setdefault(e, {})[(w, e)] = c
        return {e: FockState._raw(self.frame, t) for e, t in out.items()}

    def degree(self) -> int:
        """Largest word degree among terms."""
        return max((sum(m for _g, m in w) for (w, _e) in self.terms), default=0)

    def parity(self) -> int:
        ps = {self.frame.parity(e) for e in self.exponents()}
        if len(ps) > 1:
            raise LatticeError("state mixes parities")
        return ps.pop() if ps else 0

    def coefficient(self, other_key: Key) -> Fraction:
        return self.terms.get(other_key, Fraction(0))

    def __repr__(self) -> str:
        return f"FockState({self.pretty()})"

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (w, e), c in self:
            word = " ".join(f"{self.frame.generators[g]}(-{m})" for g, m in w)
            ex = self.frame.format_vector(e)
            body = " ".join(x for x in (word, f"e^[{ex}]" if ex != "0" else "") if x) or "1"
            parts.append(f"{fstr(c)}*{body}")
        return " + ".join(parts)


def _key_order(k: Key):
    w, e = k
    return (e, w)


# ---------------------------------------------------------------------------
# Heisenberg actions on words
# ---------------------------------------------------------------------------


def _word_add(w: Word, extra: Iterable[Tuple[int, int]]) -> Word:
    return tuple(sorted(w + tuple(extra)))


def _annihilate(frame: Frame, gen_row: Sequence[Fraction], m: int, w: Word) -> List[Tuple[Word, Fraction]]:
    """g(m) on word w (m >= 1): sum over factors a_i(-m), coefficient m <g, a_i>."""
    out = []
    seen = set()
    for idx, (gi, mi) in enumerate(w):
        if mi != m:
            continue
        key = (gi, mi)
        if key in seen:
            continue
        seen.add(key)
        p = gen_row[gi]
        if not p:
            continue
        mult = w.count(key)
        nw = w[:idx] + w[idx + 1 :]
        out.append((nw, m * p * mult))
    return out


def heisenberg(v: Exponent, m: int, state: FockState) -> FockState:
    """Apply the Heisenberg mode v(m) (any integer m) to a state."""
    frame = state.frame
    out: Dict[Key, Fraction] = {}
    if m < 0:
        for (w, e), c in state.terms.items():
            for gi, x in enumerate(v):
                if x:
                    k = (_word_add(w, ((gi, -m),)), e)
                    out[k] = out.get(k, 0) + c * x
    elif m == 0:
        for (w, e), c in state.terms.items():
            p = frame.pair(v, e)
            if p:
                out[(w, e)] = out.get((w, e), 0) + c * p
    else:
        # pairing of v with each generator
        row = [frame.pair(v, frame.vectors[g]) for g in frame.generators]
        for (w, e), c in state.terms.items():
            for nw, coef in _annihilate(frame, row, m, w):
                k = (nw, e)
                out[k] = out.get(k, 0) + c * coef
    return FockState(frame, out)


# ---------------------------------------------------------------------------
# vertex operators
# ---------------------------------------------------------------------------


def _schur(frame: Frame, gamma: Exponent, k: int) -> Dict[Word, Fraction]:
    """Coefficient S_k of z^k in exp(sum_{m>0} gamma(-m) z^m / m), as creation words."""
    key = ("schur", gamma, k)
    hit = frame.cache.get(key)
    if hit is not None:
        return hit
    if k == 0:
        res = {(): Fraction(1)}
    else:
        acc: Dict[Word, Fraction] = {}
        nz = [(gi, x) for gi, x in enumerate(gamma) if x]
        for n in range(1, k + 1):
            prev = _schur(frame, gamma, k - n)
            for w, c in prev.items():
                for gi, x in nz:
                    nw = _word_add(w, ((gi, n),))
                    acc[nw] = acc.get(nw, 0) + c * x
        res = {w: c / k for w, c in acc.items() if c}
    frame.cache[key] = res
    return res


def _left_part(frame: Frame, factors: Tuple[Tuple[int, int], ...], gamma: Exponent, d: int) -> Dict[Word, Fraction]:
    """z^d coefficient of prod_k X_k^-(z) * E^-(gamma, z) as creation words."""
    key = ("left", factors, gamma, d)
    hit = frame.cache.get(key)
    if hit is not None:
        return hit
    if not factors:
        res = _schur(frame, gamma, d)
    else:
        (g, nk), rest = factors[0], factors[1:]
        acc: Dict[Word, Fraction] = {}
        for e in range(d + 1):
            m = nk + e
            coef = _gbinom(m - 1, nk - 1)
            if not coef:
                continue
            sub = _left_part(frame, rest, gamma, d - e)
            for w, c in sub.items():
                nw = _word_add(w, ((g, m),))
                acc[nw] = acc.get(nw, 0) + c * coef
        res = {w: c for w, c in acc.items() if c}
    frame.cache[key] = res
    return res


def _right_plus(frame: Frame, factors, delta: Exponent, w: Word) -> Dict[Tuple[int, Word], Fraction]:
    """prod_{k} X_k^+(z) applied to w e^delta: {(zpow, word): coeff}."""
    cur: Dict[Tuple[int, Word], Fraction] = {(0, w): Fraction(1)}
    for g, nk in factors:
        row = frame.gram[g]
        zero = frame.pair_gen(g, delta)
        nxt: Dict[Tuple[int, Word], Fraction] = {}
        for (p, ww), c in cur.items():
            if zero:
                coef = _gbinom(-1, nk - 1) * zero
                k = (p - nk, ww)
                nxt[k] = nxt.get(k, 0) + c * coef
            for m in {mi for _gi, mi in ww}:
                b = _gbinom(-m - 1, nk - 1)
                for nw, a in _annihilate(frame, row, m, ww):
                    k = (p - m - nk, nw)
                    nxt[k] = nxt.get(k, 0) + c * a * b
        cur = {k: v for k, v in nxt.items() if v}
    return cur


def _e_plus(frame: Frame, gamma: Exponent, w: Word) -> Dict[Tuple[int, Word], Fraction]:
    """E^+(gamma, z) on word w: substitute h(-m) -> h(-m) - <gamma, h> z^{-m}."""
    cur: Dict[Tuple[int, Word], Fraction] = {(0, ()): Fraction(1)}
    for gi, m in w:
        p = frame.pair_gen(gi, gamma)
        nxt: Dict[Tuple[int, Word], Fraction] = {}
        for (zp, ww), c in cur.items():
            k = (zp, ww + ((gi, m),))
            nxt[k] = nxt.get(k, 0) + c
            if p:
                k2 = (zp - m, ww)
                nxt[k2] = nxt.get(k2, 0) - c * p
        cur = nxt
    return {(zp, tuple(sorted(ww))): c for (zp, ww), c in cur.items() if c}


def _subsets(n: int):
    return iproduct((False, True), repeat=n)


def _term_mode(frame: Frame, wa: Word, gamma: Exponent, n: int, wb: Word, delta: Exponent) -> Dict[Word, Fraction]:
    key = ("mode", wa, gamma, n, wb, delta)
    hit = frame.cache.get(key)
    if hit is not None:
        return hit
    gd = frame.pair(gamma, delta)
    if gd.denominator != 1:
        raise LatticeError(
            f"non-integral pairing {fstr(gd)} between {frame.format_vector(gamma)} and {frame.format_vector(delta)}"
        )
    gd = int(gd)
    target = -n - 1
    deg_a = sum(m for _g, m in wa)
    deg_b = sum(m for _g, m in wb)
    result: Dict[Word, Fraction] = {}
    if target < gd - deg_a - deg_b:
        frame.cache[key] = result
        return result
    eps = frame.cocycle(gamma, delta) if any(gamma) else 1
    factors = tuple(wa)
    nf = len(factors)
    seen_split = {}
    for mask in _subsets(nf):
        right = tuple(f for f, s in zip(factors, mask) if s)
        left = tuple(f for f, s in zip(factors, mask) if not s)
        sk = (right, left)
        # identical factors give identical splits; count multiplicity
        seen_split[sk] = seen_split.get(sk, 0) + 1
    for (right, left), mult in seen_split.items():
        rp = _right_plus(frame, right, delta, wb)
        for (p1, w1), c1 in rp.items():
            for (p2, w2), c2 in _e_plus(frame, gamma, w1).items():
                zp = p1 + p2 + gd
                d = target - zp
                if d < 0:
                    continue
                lp = _left_part(frame, left, gamma, d)
                base = c1 * c2 * mult * eps
                for w3, c3 in lp.items():
                    nw = tuple(sorted(w2 + w3))
                    result[nw] = result.get(nw, 0) + base * c3
    result = {w: c for w, c in result.items() if c}
    frame.cache[key] = result
    return result


def mode_apply(a: FockState, n: int, b: FockState) -> FockState:
    """A_n B, the coefficient of z^{-n-1} in Y(A, z)B."""
    a._check(b)
    frame = a.frame
    out: Dict[Key, Fraction] = {}
    for (wa, ga), ca in a.terms.items():
        for (wb, gb), cb in b.terms.items():
            res = _term_mode(frame, wa, ga, n, wb, gb)
            if not res:
                continue
            e = frame.add_vectors(ga, gb)
            c = ca * cb
            for w, cw in res.items():
                k = (w, e)
                v = out.get(k, 0) + c * cw
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
    return FockState._raw(frame, out)


def max_mode(a: FockState, b: FockState) -> int:
    """An n such that A_m B = 0 for every m > n."""
    frame = a.frame
    best = None
    for (wa, ga) in a.terms:
        da = sum(m for _g, m in wa)
        for (wb, gb) in b.terms:
            db = sum(m for _g, m in wb)
            gd = frame.pair(ga, gb)
            bound = da + db - int(gd) - 1 if gd.denominator == 1 else None
            if bound is None:
                raise LatticeError("non-integral pairing")
            best = bound if best is None else max(best, bound)
    return -10**9 if best is None else best


def translate(a: FockState) -> FockState:
    """T A with T e^g = g(-1)e^g and T a derivation on words."""
    frame = a.frame
    out: Dict[Key, Fraction] = {}
    for (w, e), c in a.terms.items():
        for gi, x in enumerate(e):
            if x:
                k = (_word_add(w, ((gi, 1),)), e)
                out[k] = out.get(k, 0) + c * x
        for idx, (gi, m) in enumerate(w):
            nw = tuple(sorted(w[:idx] + ((gi, m + 1),) + w[idx + 1 :]))
            k = (nw, e)
            out[k] = out.get(k, 0) + c * m
    return FockState(frame, out)


def bracket_modes(a: FockState, m: int, b: FockState, n: int, target: FockState) -> FockState:
    """[A_m, B_n] target via sum_j binom(m, j) (A_j B)_{m+n-j} target.

    For odd A and B the bracket is the anticommutator.
    """
    a._check(b)
    a._check(target)
    top = max_mode(a, b)
    out = target.frame.zero()
    for j in range(0, max(top, -1) + 1):
        coef = _gbinom(m, j)
        if not coef:
            continue
        ajb = mode_apply(a, j, b)
        if ajb:
            out = out + mode_apply(ajb, m + n - j, target) * coef
    return out


def direct_bracket(a: FockState, m: int, b: FockState, n: int, target: FockState) -> FockState:
    """A_m B_n t - (-1)^{|A||B|} B_n A_m t by direct application."""
    sign = -1 if (a.parity() and b.parity()) else 1
    return mode_apply(a, m, mode_apply(b, n, target)) - mode_apply(b, n, mode_apply(a, m, target)) * sign


def _eigen(op_result: FockState, a: FockState, what: str) -> Fraction:
    if a.is_zero():
        raise ValueError("zero state has no eigenvalue")
    k0, c0 = next(iter(a))
    lam = op_result.coefficient(k0) / c0
    if op_result != a * lam:
        raise ValueError(f"state is not a {what} eigenvector")
    return lam


def weight_of(a: FockState) -> Fraction:
    """Eigenvalue of (conformal)_1 on a."""
    if a.frame.conformal is None:
        raise ValueError("frame has no conformal state")
    return _eigen(mode_apply(a.frame.conformal, 1, a), a, "weight")


def charge_of(a: FockState) -> Fraction:
    """Eigenvalue of (charge)_0 on a."""
    if a.frame.charge is None:
        raise ValueError("frame has no charge state")
    return _eigen(mode_apply(a.frame.charge, 0, a), a, "charge")


def vacuum_weight_bound(a: FockState) -> int:
    return a.degree()


# ---------------------------------------------------------------------------
# the Nappi-Witten free-field frame
# ---------------------------------------------------------------------------

NW_GENERATORS = ("c1", "d1", "c", "d", "phi")


def _nw_base() -> Frame:
    h = Fraction(1, 2)
    gram = [
        [0, 2, 0, 0, 0],
        [2, 0, 0, 0, 0],
        [0, 0, 0, 2, 0],
        [0, 0, 2, 0, 0],
        [0, 0, 0, 0, 1],
    ]
    # generator coordinates (c1, d1, c, d, phi)
    vectors = {
        "alpha": (0, h, h, h, 0),
        "beta": (0, -h, h, -h, 0),
        "p": (-1, 0, 1, 0, 0),
        "q": (0, -h, 0, 0, 0),
        "nu": (0, 0, h, h, 0),
        "mu": (0, 0, h, -h, 0),
    }
    return Frame(NW_GENERATORS, gram, ("c", "alpha", "p", "q", "phi"), vectors, name="nappi-witten")


def nw_frame() -> Frame:
    """Ambient frame for the Nappi-Witten realizations.

    Generators c1, d1, c, d (pairings <c1,d1> = <c,d> = 2) and the fermionic
    direction phi (<phi,phi> = 1).  Named vectors alpha, beta, p, q, nu, mu
    satisfy <alpha,alpha> = 1, <beta,beta> = -1, <p,q> = 1, c = alpha+beta,
    d = alpha-beta+2q, c1 = alpha+beta-p, d1 = -2q, nu = alpha+q, mu = beta-q.
    The conformal state is the Sugawara image and the charge state the image
    of J.
    """
    f = _nw_base()
    h = Fraction(1, 2)
    v = f.vacuum()
    c1, d1, c, d = (f.vec(x) for x in ("c1", "d1", "c", "d"))
    conf = (
        heisenberg(c1, -1, heisenberg(d1, -1, v)) * h
        - heisenberg(d1, -2, v) * h
        + heisenberg(c1, -2, v) * h
        + heisenberg(c, -1, heisenberg(d, -1, v)) * h
        - heisenberg(c, -2, v) * h
        - heisenberg(d, -2, v) * h
    )
    charge = heisenberg(d, -1, v) * h - heisenberg(c1, -1, v) * h
    return f.with_conformal(conf, charge)


def partitions(n: int, max_part: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Partitions of n as non-increasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return out


def words_of_degree(gens: Sequence[int], h: int) -> List[Word]:
    """All creation words of total degree h in the given generator indices."""
    gens = tuple(gens)
    if h < 0:
        return []
    out: List[Word] = []

    def rec(idx: int, remaining: int, acc: Tuple[Tuple[int, int], ...]):
        if idx == len(gens):
            if remaining == 0:
                out.append(tuple(sorted(acc)))
            return
        for k in range(remaining + 1):
            for part in partitions(k):
                rec(idx + 1, remaining - k, acc + tuple((gens[idx], m) for m in part))

    rec(0, h, ())
    return sorted(out)
