"""The twisted Heisenberg-Virasoro algebra at level zero.

Two independent code paths:

* an abstract one (brackets, PBW Verma modules, singular vectors, characters)
  that never touches free fields, and
* a free-field one: ``T = 1/2 c1(-1)d1(-1) - 1/2 d1(-2)``, ``I = -c1(-1)``
  inside the Heisenberg algebra of ``c1, d1`` with ``<c1, d1> = 2``, with
  irreducible modules cut out of Fock modules by ``Q = (e^{c1})_0``.

Central charges are ``(c_L, c_I, c_LI) = (2, 0, 1)`` unless given otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import BigradedSeries, Q, SparseEchelon, eta_power, is_integral, kernel_basis
from .lattice import (
    FockState,
    Frame,
    bracket_modes,
    heisenberg,
    mode_apply,
    nw_frame,
    partitions,
    words_of_degree,
)

C_L, C_I, C_LI = Fraction(2), Fraction(0), Fraction(1)


@dataclass(frozen=True, order=True)
class HVirMode:
    """T(n) or I(n)."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("T", "I"):
            raise ValueError("kind must be 'T' or 'I'")

    def __str__(self):
        return f"{self.kind}({self.index})"


Central = Tuple[Fraction, Fraction, Fraction]
DEFAULT_CENTRAL: Central = (C_L, C_I, C_LI)


def hvir_bracket(a: HVirMode, b: HVirMode, central: Central = DEFAULT_CENTRAL) -> Tuple[Dict[HVirMode, Fraction], Fraction]:
    """[a, b] as ({mode: coefficient}, central scalar)."""
    cl, ci, cli = central
    n, m = a.index, b.index
    if a.kind == "T" and b.kind == "T":
        modes = {HVirMode("T", n + m): Fraction(n - m)} if n != m else {}
        cen = Fraction(n**3 - n, 12) * cl if n + m == 0 else Fraction(0)
        return modes, cen
    if a.kind == "T" and b.kind == "I":
        modes = {HVirMode("I", n + m): Fraction(-m)} if m else {}
        cen = -Fraction(n * n + n) * cli if n + m == 0 else Fraction(0)
        return modes, cen
    if a.kind == "I" and b.kind == "T":
        modes, cen = hvir_bracket(b, a, central)
        return {k: -v for k, v in modes.items()}, -cen
    return {}, (Fraction(n) * ci if n + m == 0 else Fraction(0))


# ---------------------------------------------------------------------------
# Verma modules
# ---------------------------------------------------------------------------

PBWWord = Tuple[HVirMode, ...]


def _order(mode: HVirMode):
    # normal order left to right: T modes before I modes, more negative first
    return (0 if mode.kind == "T" else 1, mode.index)


class HVirVerma:
    """Verma module V[x, y]: I(0) acts by x and T(0) by y on the top vector.

    Vectors are dicts {PBW word: coefficient}; a word lists creation modes in
    normal order (T before I, each block sorted by increasing index).
    """

    def __init__(self, x, y, central: Central = DEFAULT_CENTRAL):
        self.x = Q(x)
        self.y = Q(y)
        self.central = central
        self._cache: Dict[Tuple[HVirMode, PBWWord], Dict[PBWWord, Fraction]] = {}

    def basis(self, degree: int) -> List[PBWWord]:
        out = []
        for k in range(degree + 1):
            for pt in partitions(k):
                for pi in partitions(degree - k):
                    w = tuple(HVirMode("T", -a) for a in pt) + tuple(HVirMode("I", -b) for b in pi)
                    out.append(tuple(sorted(w, key=_order)))
        return sorted(out, key=lambda w: [_order(m) for m in w])

    def apply_mode(self, mode: HVirMode, word: PBWWord) -> Dict[PBWWord, Fraction]:
        key = (mode, word)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out: Dict[PBWWord, Fraction] = {}
        if not word:
            if mode.index < 0:
                out = {(mode,): Fraction(1)}
            elif mode.index == 0:
                ev = self.y if mode.kind == "T" else self.x
                out = {(): ev} if ev else {}
        elif mode.index < 0 and _order(mode) <= _order(word[0]):
            out = {(mode,) + word: Fraction(1)}
        else:
            head, rest = word[0], word[1:]
            # mode head rest = head (mode rest) + [mode, head] rest
            for w, c in self.apply_mode(mode, rest).items():
                for w2, c2 in self.apply_mode(head, w).items():
                    out[w2] = out.get(w2, 0) + c * c2
            modes, cen = hvir_bracket(mode, head, self.central)
            if cen:
                out[rest] = out.get(rest, 0) + cen
            for m2, c in modes.items():
                for w2, c2 in self.apply_mode(m2, rest).items():
                    out[w2] = out.get(w2, 0) + c * c2
            out = {w: c for w, c in out.items() if c}
        self._cache[key] = out
        return out

    def apply(self, mode: HVirMode, vec: Dict[PBWWord, Fraction]) -> Dict[PBWWord, Fraction]:
        out: Dict[PBWWord, Fraction] = {}
        for w, c in vec.items():
            for w2, c2 in self.apply_mode(mode, w).items():
                out[w2] = out.get(w2, 0) + c * c2
        return {w: c for w, c in out.items() if c}

    def apply_word(self, word: PBWWord, vec: Dict[PBWWord, Fraction]) -> Dict[PBWWord, Fraction]:
        for mode in reversed(word):
            vec = self.apply(mode, vec)
        return vec


def singular_space(x, y, degree: int, central: Central = DEFAULT_CENTRAL) -> List[Dict[PBWWord, Fraction]]:
    """Basis of the degree-d vectors of V[x, y] killed by T(n), I(n), 1 <= n <= d."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    verma = HVirVerma(x, y, central)
    cols = verma.basis(degree)
    row_index: Dict[Tuple[HVirMode, PBWWord], int] = {}
    entries = []
    for j, w in enumerate(cols):
        for n in range(1, degree + 1):
            for kind in ("T", "I"):
                mode = HVirMode(kind, n)
                for w2, c in verma.apply_mode(mode, w).items():
                    r = row_index.setdefault((mode, w2), len(row_index))
                    entries.append((r, j, c))
    mat = [[Fraction(0)] * len(cols) for _ in range(len(row_index))]
    for r, j, c in entries:
        mat[r][j] += c
    return [{cols[j]: v[j] for j in range(len(cols)) if v[j]} for v in kernel_basis(mat, len(cols))]


def singular_degree(x) -> Optional[int]:
    """|x - 1| for integral x != 1, else None (no singular vector)."""
    x = Q(x)
    if not is_integral(x) or x == 1:
        return None
    return abs(int(x) - 1)


def hvir_character(x, y, max_h: int) -> BigradedSeries:
    """Character of the irreducible L[x, y] truncated at q^max_h, offset y - 1/12."""
    base = eta_power(2, max_h)
    p = singular_degree(x)
    if p is not None:
        base = base * BigradedSeries(0, {(0, 0): 1, (p, 0): -1}, max_h)
    return BigradedSeries(Q(y) - Fraction(1, 12), base.terms, max_h)


def verma_quotient_dims(x, y, max_h: int) -> List[int]:
    """dim V[x,y]_d minus dim of the submodule generated by the lowest singular vector."""
    verma = HVirVerma(x, y)
    p = singular_degree(x)
    sing = None
    if p is not None and p <= max_h:
        space = singular_space(x, y, p)
        if len(space) != 1:
            raise ValueError(f"expected a unique singular vector at degree {p}, found {len(space)}")
        sing = space[0]
    out = []
    for d in range(max_h + 1):
        total = len(verma.basis(d))
        sub = 0
        if sing is not None and d >= p:
            ech = SparseEchelon()
            for w in verma.basis(d - p):
                ech.add(verma.apply_word(w, dict(sing)))
            sub = len(ech)
        out.append(total - sub)
    return out


def normalize_central(central: Central, scale) -> Central:
    """Central charges after I -> scale * I (so c_LI -> scale c_LI, c_I -> scale^2 c_I).

    With scale = 1/c_LI any nonzero c_LI is brought to 1; the algebra is
    unchanged up to isomorphism.
    """
    s = Q(scale)
    cl, ci, cli = central
    return (cl, ci * s * s, cli * s)


# ---------------------------------------------------------------------------
# free-field realization
# ---------------------------------------------------------------------------


def free_field_hvir(frame: Optional[Frame] = None) -> Tuple[FockState, FockState]:
    """(T, I) states: T = 1/2 c1(-1)d1(-1) - 1/2 d1(-2), I = -c1(-1)."""
    frame = frame or nw_frame()
    c1, d1 = frame.vec("c1"), frame.vec("d1")
    if frame.pair(c1, c1) != 0 or frame.pair(d1, d1) != 0 or frame.pair(c1, d1) != 2:
        raise ValueError("frame needs <c1,c1> = <d1,d1> = 0 and <c1,d1> = 2")
    v = frame.vacuum()
    t = heisenberg(c1, -1, heisenberg(d1, -1, v)) * Fraction(1, 2) - heisenberg(d1, -2, v) * Fraction(1, 2)
    i = heisenberg(c1, -1, v) * -1
    return t, i


def vir(t_state: FockState, n: int, target: FockState) -> FockState:
    """T(n) target, with T(n) = T_{n+1}."""
    return mode_apply(t_state, n + 1, target)


def verify_relations(t_state: FockState, i_state: FockState, targets: Sequence[FockState], bound: int,
                     central: Central = DEFAULT_CENTRAL) -> List[dict]:
    """Check all HVir brackets for |m|, |n| <= bound on the given targets.

    Returns a list of failures (empty when everything holds).
    """
    cl, ci, cli = central
    fails = []
    fields = {"T": (t_state, 1), "I": (i_state, 0)}
    for ka in ("T", "I"):
        for kb in ("T", "I"):
            a, sa = fields[ka]
            b, sb = fields[kb]
            for m in range(-bound, bound + 1):
                for n in range(-bound, bound + 1):
                    modes, cen = hvir_bracket(HVirMode(ka, m), HVirMode(kb, n), central)
                    for t in targets:
                        lhs = bracket_modes(a, m + sa, b, n + sb, t)
                        rhs = t * cen
                        for md, c in modes.items():
                            st, sh = fields[md.kind]
                            rhs = rhs + mode_apply(st, md.index + sh, t) * c
                        if lhs != rhs:
                            fails.append({"bracket": f"[{ka}({m}),{kb}({n})]", "target": t.pretty()})
    return fails


def hvir_fock_exponent(frame: Frame, x, y, a=None):
    """Exponent eta with top weight (x, y) on e^eta.

    For x = 1 only y = 0 is realizable, by eta = a c1 - d1/2 for any a
    (default 0); ``a`` is ignored otherwise.
    """
    x, y = Q(x), Q(y)
    if x == 1:
        if y != 0:
            raise ValueError("(1, y) with y != 0 has no Fock realization")
        return frame.vec({"c1": Q(a or 0), "d1": Fraction(-1, 2)})
    return frame.vec({"c1": y / (1 - x), "d1": -x / 2})


def q_operator(frame: Frame) -> FockState:
    """e^{c1}; its zero mode Q maps F[x, y] to F[x, y + 1 - x]."""
    return frame.exp(frame.vec("c1"))


@dataclass
class HVirComponent:
    """Degree-h component of L[x, y] realized in the Fock module over e^eta.

    ``reps`` are representatives of a basis; ``null`` spans the subspace that
    is quotiented out (empty for kernel and full-Fock realizations).
    """

    x: Fraction
    y: Fraction
    h: int
    eta: tuple
    kind: str  # "fock", "kernel" or "quotient"
    reps: List[FockState]
    null: List[FockState] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.reps)


def realization_kind(x, y) -> str:
    x, y = Q(x), Q(y)
    if x == 1:
        if y != 0:
            raise ValueError("L[1, y] with y != 0 is not realized in a Fock module")
        return "fock"
    if not is_integral(x):
        return "fock"
    return "kernel" if x <= 0 else "quotient"


def fock_component(frame: Frame, eta, h: int) -> List[FockState]:
    gens = [frame.generators.index("c1"), frame.generators.index("d1")]
    return [FockState(frame, {(w, eta): 1}) for w in words_of_degree(gens, h)]


def _span_matrix(states: Sequence[FockState], keys: Sequence) -> List[List[Fraction]]:
    return [[s.coefficient(k) for s in states] for k in keys]


def hvir_module_component(x, y, h: int, frame: Optional[Frame] = None, a=None, kind: Optional[str] = None) -> HVirComponent:
    """Basis of the degree-h component of L[x, y] inside a Fock module.

    ``kind`` overrides the realization ("fock" gives the whole Fock component).
    """
    frame = frame or nw_frame()
    x, y = Q(x), Q(y)
    kind = kind or realization_kind(x, y)
    eta = hvir_fock_exponent(frame, x, y, a)
    basis = fock_component(frame, eta, h)
    if kind == "fock":
        return HVirComponent(x, y, h, eta, kind, basis)
    qs = q_operator(frame)
    if kind == "kernel":
        images = [mode_apply(qs, 0, b) for b in basis]
        keys = sorted({k for im in images for k in im.terms})
        mat = _span_matrix(images, keys)
        if not keys:
            return HVirComponent(x, y, h, eta, kind, basis)
        ker = kernel_basis(mat, len(basis))
        reps = [sum((basis[j] * v[j] for j in range(len(basis)) if v[j]), frame.zero()) for v in ker]
        return HVirComponent(x, y, h, eta, kind, reps)
    # quotient of F[x, y] by the image of Q from F[x, y + x - 1]
    # Q preserves T(0) while the top weights differ by x - 1
    src_eta = hvir_fock_exponent(frame, x, y + x - 1)
    src = fock_component(frame, src_eta, h - int(x) + 1)
    ech = SparseEchelon()
    null = []
    for s in src:
        im = mode_apply(qs, 0, s)
        if im and ech.add(im.terms):
            null.append(im)
    reps = []
    for b in basis:
        if ech.add(b.terms):
            reps.append(b)
    return HVirComponent(x, y, h, eta, kind, reps, null)
