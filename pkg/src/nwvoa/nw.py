"""The Nappi-Witten algebra h4, its affinization at level one, and its two
free-field realizations (Wakimoto type and inverse reduction).

Lie algebra: [E, F] = I, [J, E] = E, [J, F] = -F, I central.
Invariant form: (E, F) = (I, J) = 1, all other pairings zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import BigradedSeries, Q, eta_power, series_product
from .hvir import free_field_hvir
from .lattice import (
    FockState,
    Frame,
    bracket_modes,
    heisenberg,
    mode_apply,
    nw_frame,
    translate,
    words_of_degree,
)

GENERATORS = ("E", "F", "I", "J")

# structure constants [a, b] = sum c * g
_BRACKET: Dict[Tuple[str, str], Dict[str, Fraction]] = {
    ("E", "F"): {"I": Fraction(1)},
    ("F", "E"): {"I": Fraction(-1)},
    ("J", "E"): {"E": Fraction(1)},
    ("E", "J"): {"E": Fraction(-1)},
    ("J", "F"): {"F": Fraction(-1)},
    ("F", "J"): {"F": Fraction(1)},
}

_FORM = {("E", "F"): 1, ("F", "E"): 1, ("I", "J"): 1, ("J", "I"): 1}

# J(0)-charge of each generator
CHARGE = {"E": 1, "F": -1, "I": 0, "J": 0}


def lie_bracket(a: str, b: str) -> Dict[str, Fraction]:
    return dict(_BRACKET.get((a, b), {}))


def form(a: str, b: str) -> Fraction:
    return Fraction(_FORM.get((a, b), 0))


@dataclass(frozen=True)
class H4Element:
    """Element of h4 as coefficients of (E, F, I, J)."""

    coeffs: Tuple[Fraction, Fraction, Fraction, Fraction]

    @classmethod
    def gen(cls, name: str) -> "H4Element":
        return cls(tuple(Fraction(int(g == name)) for g in GENERATORS))

    def as_dict(self) -> Dict[str, Fraction]:
        return {g: c for g, c in zip(GENERATORS, self.coeffs) if c}

    def bracket(self, other: "H4Element") -> "H4Element":
        out = dict.fromkeys(GENERATORS, Fraction(0))
        for a, ca in self.as_dict().items():
            for b, cb in other.as_dict().items():
                for g, c in lie_bracket(a, b).items():
                    out[g] += ca * cb * c
        return H4Element(tuple(out[g] for g in GENERATORS))

    def pairing(self, other: "H4Element") -> Fraction:
        return sum(
            (ca * cb * form(a, b) for a, ca in self.as_dict().items() for b, cb in other.as_dict().items()),
            Fraction(0),
        )


@dataclass(frozen=True, order=True)
class AffineMode:
    """x(n) for a generator x of h4."""

    base: str
    index: int

    def __str__(self):
        return f"{self.base}({self.index})"


def affine_bracket(x: AffineMode, y: AffineMode) -> Tuple[Dict[AffineMode, Fraction], Fraction]:
    """[x(n), y(m)] = [x, y](n+m) + n (x, y) delta_{n+m,0} K, as (modes, K coefficient)."""
    n, m = x.index, y.index
    modes = {AffineMode(g, n + m): c for g, c in lie_bracket(x.base, y.base).items()}
    k = Fraction(n) * form(x.base, y.base) if n + m == 0 else Fraction(0)
    return modes, k


# ---------------------------------------------------------------------------
# U(h4)
# ---------------------------------------------------------------------------

_PBW_ORDER = {"F": 0, "E": 1, "I": 2, "J": 3}
UWord = Tuple[str, ...]


class UH4:
    """Element of U(h4) in the PBW basis with order F < E < I < J."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[UWord, object]] = None):
        self.terms: Dict[UWord, Fraction] = {}
        for w, c in (terms or {}).items():
            for w2, c2 in _normal_order(tuple(w)).items():
                v = self.terms.get(w2, 0) + Q(c) * c2
                if v:
                    self.terms[w2] = v
                else:
                    self.terms.pop(w2, None)

    @classmethod
    def gen(cls, name: str) -> "UH4":
        return cls({(name,): 1})

    @classmethod
    def one(cls) -> "UH4":
        return cls({(): 1})

    def __add__(self, other: "UH4") -> "UH4":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return UH4(out)

    def __neg__(self) -> "UH4":
        return UH4({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "UH4") -> "UH4":
        return self + (-other)

    def __mul__(self, other) -> "UH4":
        if not isinstance(other, UH4):
            return UH4({w: c * Q(other) for w, c in self.terms.items()})
        out: Dict[UWord, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out[w1 + w2] = out.get(w1 + w2, 0) + c1 * c2
        return UH4(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, UH4) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "UH4(0)"
        return "UH4(" + " + ".join(f"{c}*{''.join(w) or '1'}" for w, c in sorted(self.terms.items())) + ")"


_NO_CACHE: Dict[UWord, Dict[UWord, Fraction]] = {}


def _normal_order(word: UWord) -> Dict[UWord, Fraction]:
    hit = _NO_CACHE.get(word)
    if hit is not None:
        return hit
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if _PBW_ORDER[a] > _PBW_ORDER[b]:
            out: Dict[UWord, Fraction] = {}
            swapped = word[:i] + (b, a) + word[i + 2 :]
            for w, c in _normal_order(swapped).items():
                out[w] = out.get(w, 0) + c
            for g, c in lie_bracket(a, b).items():
                for w, c2 in _normal_order(word[:i] + (g,) + word[i + 2 :]).items():
                    out[w] = out.get(w, 0) + c * c2
            res = {w: c for w, c in out.items() if c}
            break
    else:
        res = {word: Fraction(1)}
    _NO_CACHE[word] = res
    return res


def casimir() -> UH4:
    """Omega = FE + IJ."""
    return UH4({("F", "E"): 1, ("I", "J"): 1})


def casimir_check() -> Dict[str, bool]:
    om = casimir()
    out = {}
    for g in GENERATORS:
        x = UH4.gen(g)
        out[g] = (om * x - x * om).is_zero()
    return out


# ---------------------------------------------------------------------------
# vacuum character
# ---------------------------------------------------------------------------


def pbw_character(max_h: int) -> BigradedSeries:
    """Graded dimensions of the PBW basis of the level-one vacuum module.

    q counts mode degree and z the J(0)-charge (E: +1, F: -1, I, J: 0).
    """
    s = eta_power(2, max_h)
    s = series_product(s, eta_power(1, max_h, j=1))
    s = series_product(s, eta_power(1, max_h, j=-1))
    return s


# ---------------------------------------------------------------------------
# realizations
# ---------------------------------------------------------------------------


@dataclass
class H4Realization:
    target: Frame
    images: Dict[str, FockState]
    name: str
    verified: Optional[bool] = None  # None: not checked yet

    def __getitem__(self, g: str) -> FockState:
        return self.images[g]


def weyl_pair(frame: Optional[Frame] = None) -> Tuple[FockState, FockState]:
    """(a+, a-) = (e^{alpha+beta}, -alpha(-1) e^{-alpha-beta})."""
    frame = frame or nw_frame()
    c = frame.vec({"alpha": 1, "beta": 1})
    mc = frame.vec({"alpha": -1, "beta": -1})
    ap = frame.exp(c)
    am = heisenberg(frame.vec("alpha"), -1, frame.exp(mc)) * -1
    return ap, am


def wakimoto_map(frame: Optional[Frame] = None) -> H4Realization:
    """E -> a+, F -> T a- + p(-1) a-, I -> p(-1), J -> 1/2 p(-1) + q(-1) - a+_{-1} a-."""
    frame = frame or nw_frame()
    ap, am = weyl_pair(frame)
    p, q = frame.vec("p"), frame.vec("q")
    v = frame.vacuum()
    images = {
        "E": ap,
        "F": translate(am) + heisenberg(p, -1, am),
        "I": heisenberg(p, -1, v),
        "J": heisenberg(p, -1, v) * Fraction(1, 2) + heisenberg(q, -1, v) - mode_apply(ap, -1, am),
    }
    return H4Realization(frame, images, "wakimoto")


def inverse_qhr_map(frame: Optional[Frame] = None) -> H4Realization:
    """E -> e^c, F -> (T_HVir(-2) - nu(-1) I_HVir(-1) - nu(-2)) e^{-c},
    I -> c(-1) + I_HVir, J -> 1/2 d(-1) + 1/2 I_HVir."""
    frame = frame or nw_frame()
    t_hv, i_hv = free_field_hvir(frame)
    c, d, nu = frame.vec("c"), frame.vec("d"), frame.vec("nu")
    v = frame.vacuum()
    emc = frame.exp(tuple(-x for x in c))
    # operators acting on e^{-c}: T_HVir(-2) = (T_HVir)_{-1}, I_HVir(-1) = (I_HVir)_{-1}
    f_state = (
        mode_apply(t_hv, -1, emc)
        - heisenberg(nu, -1, mode_apply(i_hv, -1, emc))
        - heisenberg(nu, -2, emc)
    )
    images = {
        "E": frame.exp(c),
        "F": f_state,
        "I": heisenberg(c, -1, v) + i_hv,
        "J": heisenberg(d, -1, v) * Fraction(1, 2) + i_hv * Fraction(1, 2),
    }
    return H4Realization(frame, images, "inverse_qhr")


def sugawara_state(real: H4Realization) -> FockState:
    """Image of E(-1)F(-1) + I(-1)J(-1) - 1/2 I(-2) - 1/2 I(-1)^2 on the vacuum."""
    if real.verified is False:
        raise ValueError("realization failed verification")
    e, f, i, j = (real.images[g] for g in GENERATORS)
    half = Fraction(1, 2)
    return mode_apply(e, -1, f) + mode_apply(i, -1, j) - translate(i) * half - mode_apply(i, -1, i) * half


def expected_sugawara(frame: Optional[Frame] = None) -> FockState:
    """T_HVir - 1/2 T(I_HVir) + 1/2 c(-1)d(-1) - 1/2 (c(-2) + d(-2))."""
    frame = frame or nw_frame()
    t_hv, i_hv = free_field_hvir(frame)
    c, d = frame.vec("c"), frame.vec("d")
    v = frame.vacuum()
    half = Fraction(1, 2)
    return (
        t_hv
        - translate(i_hv) * half
        + heisenberg(c, -1, heisenberg(d, -1, v)) * half
        - (heisenberg(c, -2, v) + heisenberg(d, -2, v)) * half
    )


def central_charge(omega: FockState, m: int) -> Fraction:
    """c from [L(m), L(-m)] 1 = (m^3 - m)/12 c 1 (m >= 2)."""
    v = omega.frame.vacuum()
    val = bracket_modes(omega, m + 1, omega, -m + 1, v)
    coef = val.coefficient(next(iter(v))[0])
    if val != v * coef:
        raise ValueError("commutator on the vacuum is not proportional to the vacuum")
    return coef * 12 / (m**3 - m)


def default_targets(frame: Frame, degree: int = 2, exps: Sequence[int] = (-1, 0, 1)) -> List[FockState]:
    """Ambient monomials: words of degree <= 2 in c1, d1, c, d over e^{ic}."""
    gens = [frame.generators.index(g) for g in ("c1", "d1", "c", "d")]
    c = frame.vec("c")
    out = []
    for i in exps:
        e = frame.intern(tuple(i * x for x in c))
        for h in range(degree + 1):
            for w in words_of_degree(gens, h):
                out.append(FockState(frame, {(w, e): 1}))
    return out


@dataclass
class EmbeddingReport:
    name: str
    checks: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def affine_rhs(real: H4Realization, a: str, m: int, b: str, n: int, t: FockState) -> FockState:
    modes, k = affine_bracket(AffineMode(a, m), AffineMode(b, n))
    out = t * k
    for md, c in modes.items():
        out = out + mode_apply(real.images[md.base], md.index, t) * c
    return out


def verify_embedding(real: H4Realization, mode_bound: int = 2, targets: Optional[Sequence[FockState]] = None,
                     pairs: Optional[Sequence[Tuple[str, str]]] = None) -> EmbeddingReport:
    """Check [X(m), Y(n)] = [X,Y](m+n) + m (X,Y) delta K on every target state."""
    frame = real.target
    targets = list(targets) if targets is not None else default_targets(frame)
    pairs = list(pairs) if pairs is not None else list(iproduct(GENERATORS, GENERATORS))
    rep = EmbeddingReport(real.name)
    for a, b in pairs:
        xa, xb = real.images[a], real.images[b]
        for m in range(-mode_bound, mode_bound + 1):
            for n in range(-mode_bound, mode_bound + 1):
                for t in targets:
                    lhs = bracket_modes(xa, m, xb, n, t)
                    rhs = affine_rhs(real, a, m, b, n, t)
                    rep.checks += 1
                    if lhs != rhs:
                        rep.failures.append(
                            {"pair": f"[{a}({m}),{b}({n})]", "target": t.pretty(), "difference": (lhs - rhs).pretty()}
                        )
    real.verified = rep.passed
    return rep
