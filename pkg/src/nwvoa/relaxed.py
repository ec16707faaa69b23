"""Relaxed modules L[x, y] (x) Pi_r(lambda) realized in the free-field frame.

A module vector is ``v (x) w (x) e^{r mu + (lambda + i) c}`` with ``v`` in
L[x, y] (a Fock-module component, see :mod:`nwvoa.hvir`) and ``w`` a word in
``c, d`` modes.  The Sugawara weight of the top of layer ``i`` is
``y + x/2 + (lambda + i)(1 - r) - r^2/2`` and the J(0)-charge is
``r/2 + lambda + i + x/2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import Q, SparseEchelon, fstr, frac_part, is_integral
from .hvir import HVirComponent, hvir_fock_exponent, hvir_module_component
from .lattice import FockState, Frame, mode_apply, nw_frame, words_of_degree
from .nw import GENERATORS, AffineMode, H4Realization

__all__ = [
    "RelaxedModuleSpec",
    "TopModuleClass",
    "sug_weight",
    "omega_eigen",
    "charge",
    "top_action",
    "top_vector",
    "realized_top_action",
    "classify",
    "spectral_flow",
    "module_component",
    "submodule_growth",
    "saturate",
    "contains",
    "ModuleComponent",
    "component_dim_formula",
    "twisted_bidegree",
    "bounded_below",
    "layer_weight_slope",
    "lowest_weight_index",
    "is_reducible",
    "negative_monomials",
    "tensor",
]


@dataclass(frozen=True)
class RelaxedModuleSpec:
    """Parameters of L[x, y] (x) Pi_r(lambda).

    ``a`` is the c1-coordinate of the Fock exponent when x = 1 (ignored
    otherwise); ``hvir_kind`` forces the HVir realization ("fock" uses the
    whole Fock module).
    """

    x: Fraction
    y: Fraction
    r: int
    lam: Fraction
    a: Optional[Fraction] = None
    hvir_kind: Optional[str] = None

    def __init__(self, x, y, r, lam, a=None, hvir_kind=None):
        object.__setattr__(self, "x", Q(x))
        object.__setattr__(self, "y", Q(y))
        rr = Q(r)
        if rr.denominator != 1:
            raise ValueError("r must be an integer")
        object.__setattr__(self, "r", int(rr))
        object.__setattr__(self, "lam", Q(lam))
        object.__setattr__(self, "a", None if a is None else Q(a))
        object.__setattr__(self, "hvir_kind", hvir_kind)

    def as_dict(self) -> Dict[str, str]:
        d = {"x": fstr(self.x), "y": fstr(self.y), "r": str(self.r), "lambda": fstr(self.lam)}
        if self.a is not None and self.x == 1:
            d["a"] = fstr(self.a)
        if self.hvir_kind:
            d["hvir"] = self.hvir_kind
        return d

    def top(self, frame: Frame, i: int) -> FockState:
        """v_{x,y} (x) e^{r mu + (lambda + i) c}."""
        return top_vector(frame, self.x, self.y, self.lam, i, self.r, self.a)

    def layer_weight(self, i: int) -> Fraction:
        """Weight of v (x) e^{r mu + (lambda + i) c}."""
        return sug_weight(self.x, self.y, self.r, self.lam + i)

    def layer_charge(self, i: int) -> Fraction:
        return charge(self.x, self.r, self.lam + i)

    def layer_of_charge(self, j) -> Optional[int]:
        i = Q(j) - Fraction(self.r, 2) - self.lam - self.x / 2
        return int(i) if i.denominator == 1 else None


def sug_weight(x, y, r, lam) -> Fraction:
    """L(0) eigenvalue on v_{x,y} (x) e^{r mu + lambda c}."""
    x, y, lam = Q(x), Q(y), Q(lam)
    return y + x / 2 + (1 - r) * (r + 2 * lam) / 2 - Fraction(r, 2)


def charge(x, r, lam) -> Fraction:
    """J(0) eigenvalue on v_{x,y} (x) e^{r mu + lambda c}."""
    return Fraction(r, 2) + Q(lam) + Q(x) / 2


def omega_eigen(x, y) -> Fraction:
    """Casimir FE + IJ on the top of the r = 1 module."""
    x, y = Q(x), Q(y)
    return y + (x - 1) ** 2 / 2


def layer_weight_slope(r: int) -> int:
    """Coefficient of i in the weight of layer i; zero exactly when r = 1."""
    return 1 - r


def bounded_below(r: int, lam=0, window: int = 6) -> bool:
    """Weights of the layer tops are bounded below (and then constant) iff r = 1.

    Decided on the closed form: the weight is affine in i with slope 1 - r,
    so it is bounded below over all of Z iff the slope vanishes.  The window
    is only used to confirm non-constancy when r != 1.
    """
    ws = [sug_weight(0, 0, r, Q(lam) + i) for i in range(-window, window + 1)]
    if layer_weight_slope(r) == 0:
        return len(set(ws)) == 1
    assert len(set(ws)) == len(ws)
    return False


# ---------------------------------------------------------------------------
# top-level actions (closed forms)
# ---------------------------------------------------------------------------


def top_action(g: str, i: int, x, y, lam) -> Tuple[int, Fraction]:
    """X(0) Z_i = coefficient * Z_{i + shift} on the top of the r = 1 module.

    Returns (shift, coefficient).
    """
    x, y, lam = Q(x), Q(y), Q(lam)
    if g == "E":
        return 1, Fraction(1)
    if g == "F":
        return -1, y - (lam + i) * (x - 1)
    if g == "I":
        return 0, x - 1
    if g == "J":
        return 0, (x + 1 + 2 * (lam + i)) / 2
    raise ValueError(f"unknown generator {g!r}")


def top_vector(frame: Frame, x, y, lam, i: int, r: int = 1, a=None) -> FockState:
    """Z_i = v_{x,y} (x) e^{r mu + (lambda + i) c} in the Fock realization."""
    eta = hvir_fock_exponent(frame, x, y, a)
    mu, c = frame.vec("mu"), frame.vec("c")
    lam = Q(lam) + i
    return frame.exp(tuple(e + r * m + lam * cc for e, m, cc in zip(eta, mu, c)))


def realized_top_action(real: H4Realization, g: str, x, y, lam, i: int) -> FockState:
    return mode_apply(real.images[g], 0, top_vector(real.target, x, y, lam, i))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TopModuleClass:
    """Top-level class and the label of the affine module generated by it."""

    top: str  # RelaxedIrr, RelaxedLWsub, ...
    label: str
    irreducible: bool
    lowest_index: Optional[int] = None  # i with F(0) Z_i = 0 when reducible and x != 1

    def as_dict(self) -> Dict[str, object]:
        return {
            "top": self.top,
            "label": self.label,
            "irreducible": self.irreducible,
            "lowest_index": self.lowest_index,
        }


def classify(x, y, lam) -> TopModuleClass:
    """Irreducibility and label of L[x, y] (x) Pi_1(lambda)."""
    x, y, lam = Q(x), Q(y), Q(lam)
    cls = fstr(frac_part(lam))
    if x == 1:
        if y != 0:
            return TopModuleClass("RelaxedIrr", f"R̂_{{0,[{cls}],{fstr(y)}}}", True)
        return TopModuleClass("RelaxedLWsub", f"R̂_{{0,[{cls}],0}}", False)
    t = lam - y / (x - 1)
    if not is_integral(t):
        return TopModuleClass("RelaxedIrr", f"Ê_{{{fstr(x - 1)},[{cls}],{fstr(omega_eigen(x, y))}}}", True)
    j = int(-t)
    jval = (x + 1 + 2 * (lam + j)) / 2
    return TopModuleClass("RelaxedLWsub", f"Ê⁻_{{{fstr(x - 1)},{fstr(jval)}}}", False, j)


def is_reducible(x, y, lam) -> bool:
    return not classify(x, y, lam).irreducible


def lowest_weight_index(x, y, lam) -> Optional[int]:
    """The integer j with F(0) Z_j = 0, when x != 1 and it exists."""
    x, y, lam = Q(x), Q(y), Q(lam)
    if x == 1:
        return None
    j = y / (x - 1) - lam
    return int(j) if j.denominator == 1 else None


# ---------------------------------------------------------------------------
# spectral flow
# ---------------------------------------------------------------------------

ModeExpr = Dict[object, Fraction]  # AffineMode or "K" -> coefficient
K = "K"


def _sigma(m: AffineMode, ell: int) -> ModeExpr:
    if m.base == "E":
        return {AffineMode("E", m.index - ell): Fraction(1)}
    if m.base == "F":
        return {AffineMode("F", m.index + ell): Fraction(1)}
    if m.base == "I":
        out: ModeExpr = {m: Fraction(1)}
        if m.index == 0 and ell:
            out[K] = Fraction(-ell)
        return out
    return {m: Fraction(1)}


def _s(m: AffineMode, t) -> ModeExpr:
    out: ModeExpr = {m: Fraction(1)}
    if m.base == "J" and m.index == 0 and t:
        out[K] = -Q(t)
    return out


def _extend(f, expr: ModeExpr) -> ModeExpr:
    out: ModeExpr = {}
    for k, c in expr.items():
        img = {K: Fraction(1)} if k == K else f(k)
        for k2, c2 in img.items():
            out[k2] = out.get(k2, 0) + c * c2
    return {k: c for k, c in out.items() if c}


# h = I/2 - J: [h, X] = charge_h(X) X and (h, X) pairings
_H_CHARGE = {"E": -1, "F": 1, "I": 0, "J": 0}
_H_PAIR = {"E": Fraction(0), "F": Fraction(0), "I": Fraction(-1), "J": Fraction(1, 2)}


def _delta_twist(m: AffineMode, ell: int) -> ModeExpr:
    """Mode relabeling from the Delta(ell h, z) twist.

    X(z) -> z^{ell [h, X]} X(z) + ell (h, X) z^{-1}: modes shift by the
    h-charge and zero modes of I, J pick up the pairing.
    """
    out: ModeExpr = {AffineMode(m.base, m.index + ell * _H_CHARGE[m.base]): Fraction(1)}
    if m.index == 0 and _H_PAIR[m.base] and ell:
        out[K] = ell * _H_PAIR[m.base]
    return out


def spectral_flow(kind: str, mode, ell: int = 1, t=0) -> ModeExpr:
    """Image of an affine mode (or mode expression) under sigma^ell, s_t, g^ell or rho_ell."""
    expr: ModeExpr = mode if isinstance(mode, dict) else {mode: Fraction(1)}
    if kind == "sigma":
        return _extend(lambda m: _sigma(m, ell), expr)
    if kind == "s":
        return _extend(lambda m: _s(m, t), expr)
    if kind == "g":
        for _ in range(abs(ell)):
            if ell > 0:
                expr = _extend(lambda m: _extend(lambda m2: _sigma(m2, 1), _s(m, Fraction(-1, 2))), expr)
            else:
                expr = _extend(lambda m: _extend(lambda m2: _s(m2, Fraction(1, 2)), _sigma(m, -1)), expr)
        return expr
    if kind == "rho":
        return _extend(lambda m: _delta_twist(m, ell), expr)
    raise ValueError(f"unknown spectral flow {kind!r}")


def twisted_bidegree(spec: RelaxedModuleSpec, ell: int, h, j) -> Tuple[Fraction, Fraction]:
    """(weight, charge) of a vector of bidegree (h, j) seen in the rho_ell-twisted module.

    L(0) -> L(0) + ell h(0) - ell^2/2 with h(0) = I(0)/2 - J(0), J(0) -> J(0) + ell/2.
    """
    h, j = Q(h), Q(j)
    i = spec.layer_of_charge(j)
    if i is None:
        raise ValueError("charge does not occur in this module")
    i0 = spec.x - spec.r  # I(0) eigenvalue
    h0 = i0 / 2 - j
    return h + ell * h0 - Fraction(ell * ell, 2), j + Fraction(ell, 2)


# ---------------------------------------------------------------------------
# module components
# ---------------------------------------------------------------------------


@dataclass
class ModuleComponent:
    spec: RelaxedModuleSpec
    h: Fraction
    j: Fraction
    states: List[FockState]
    null: List[FockState] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.states)


def _pi_words(frame: Frame, n: int):
    gens = [frame.generators.index("c"), frame.generators.index("d")]
    return words_of_degree(gens, n)


def tensor(rep: FockState, word, shift) -> FockState:
    frame = rep.frame
    out = {}
    for (w, e), c in rep.terms.items():
        k = (tuple(sorted(w + word)), frame.add_vectors(e, shift))
        out[k] = out.get(k, 0) + c
    return FockState(frame, out)


_HV_CACHE: Dict = {}


def _hvir_comp(frame: Frame, spec: RelaxedModuleSpec, k: int) -> HVirComponent:
    a = spec.a if spec.x == 1 else None
    key = (id(frame.cache), spec.x, spec.y, a, spec.hvir_kind, k)
    hit = _HV_CACHE.get(key)
    if hit is None:
        hit = hvir_module_component(spec.x, spec.y, k, frame, a=a, kind=spec.hvir_kind)
        _HV_CACHE[key] = hit
    return hit


def module_component(spec: RelaxedModuleSpec, h, j, frame: Optional[Frame] = None) -> ModuleComponent:
    """Basis of the (weight h, charge j) component of L[x, y] (x) Pi_r(lambda)."""
    frame = frame or nw_frame()
    h, j = Q(h), Q(j)
    i = spec.layer_of_charge(j)
    if i is None:
        return ModuleComponent(spec, h, j, [])
    n = h - spec.layer_weight(i)
    if n.denominator != 1 or n < 0:
        return ModuleComponent(spec, h, j, [])
    n = int(n)
    mu, c = frame.vec("mu"), frame.vec("c")
    shift = frame.intern(tuple(spec.r * m + (spec.lam + i) * cc for m, cc in zip(mu, c)))
    states, null = [], []
    for k in range(n + 1):
        comp = _hvir_comp(frame, spec, k)
        words = _pi_words(frame, n - k)
        for rep in comp.reps:
            for w in words:
                states.append(tensor(rep, w, shift))
        for nv in comp.null:
            for w in words:
                null.append(tensor(nv, w, shift))
    return ModuleComponent(spec, h, j, states, null)


def component_dim_formula(spec: RelaxedModuleSpec, h, j) -> int:
    """Product-of-characters prediction for the component dimension."""
    from .hvir import hvir_character
    from .exact import eta_power

    i = spec.layer_of_charge(Q(j))
    if i is None:
        return 0
    n = Q(h) - spec.layer_weight(i)
    if n.denominator != 1 or n < 0:
        return 0
    n = int(n)
    a = hvir_character(spec.x, spec.y, n).q_coeffs()
    b = eta_power(2, n).q_coeffs()
    return sum(a[k] * b[n - k] for k in range(n + 1))


# ---------------------------------------------------------------------------
# submodules
# ---------------------------------------------------------------------------


def negative_monomials(n: int) -> List[Tuple[Tuple[str, int], ...]]:
    """PBW monomials in X(-m), X in E, F, I, J, m >= 1, of total degree n."""
    modes = [(g, m) for m in range(1, n + 1) for g in GENERATORS]
    out = []

    def rec(start: int, remaining: int, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for idx in range(start, len(modes)):
            g, m = modes[idx]
            if m <= remaining:
                rec(idx, remaining - m, acc + [(g, m)])

    rec(0, n, [])
    return out


def _apply_monomial(real: H4Realization, mono, state: FockState) -> FockState:
    for g, m in reversed(mono):
        state = mode_apply(real.images[g], -m, state)
        if not state:
            break
    return state


def _top_closure(real: H4Realization, spec: RelaxedModuleSpec, start: FockState, lo: int, hi: int) -> Dict[int, FockState]:
    """U(h4) start within layers lo..hi: map layer index -> spanning vector (top level is one-dimensional per layer)."""
    frame = real.target
    top: Dict[int, FockState] = {}
    i0 = spec.layer_of_charge(_charge_of_top(spec, start, frame))
    queue = [(i0, start)]
    while queue:
        i, v = queue.pop()
        if i in top or not (lo <= i <= hi) or not v:
            continue
        top[i] = v
        for g, di in (("E", 1), ("F", -1)):
            w = mode_apply(real.images[g], 0, v)
            if w:
                queue.append((i + di, w))
    return top


def _charge_of_top(spec: RelaxedModuleSpec, v: FockState, frame: Frame) -> Fraction:
    from .lattice import charge_of

    return charge_of(v)


def submodule_growth(real: H4Realization, spec: RelaxedModuleSpec, start: FockState, max_degree: int,
                     charges: Sequence) -> Dict[Tuple[Fraction, Fraction], int]:
    """Dimensions of the submodule generated by a top vector (r = 1 modules).

    Uses the PBW spanning set: negative-mode monomials applied to the
    U(h4)-closure of ``start`` in the top level.  Returns {(h, j): dim} for
    degrees 0..max_degree above the top and the requested charges.
    """
    if spec.r != 1:
        raise ValueError("use saturate() for r != 1")
    base_w = spec.layer_weight(0)
    charges = [Q(j) for j in charges]
    layers = [spec.layer_of_charge(j) for j in charges]
    if any(i is None for i in layers):
        raise ValueError("requested charge not present in the module")
    i0 = spec.layer_of_charge(_charge_of_top(spec, start, real.target))
    lo, hi = min(layers + [i0]) - max_degree, max(layers + [i0]) + max_degree
    top = _top_closure(real, spec, start, lo, hi)
    out = {}
    for n in range(max_degree + 1):
        monos = negative_monomials(n)
        for j, i in zip(charges, layers):
            comp = module_component(spec, base_w + n, j, real.target)
            ech = SparseEchelon()
            for nv in comp.null:
                ech.add(nv.terms)
            base = len(ech)
            for mono in monos:
                q = sum(1 if g == "E" else -1 if g == "F" else 0 for g, _m in mono)
                v = top.get(i - q)
                if v is None:
                    continue
                w = _apply_monomial(real, mono, v)
                if w:
                    ech.add(w.terms)
            out[(base_w + n, j)] = len(ech) - base
    return out


def contains(real: H4Realization, spec: RelaxedModuleSpec, gen: FockState, vec: FockState, n: int) -> bool:
    """Whether vec (top-degree + n, single charge) lies in the submodule generated by gen."""
    from .lattice import charge_of

    j = charge_of(vec) if vec else None
    i = spec.layer_of_charge(j)
    g = spec.layer_of_charge(charge_of(gen))
    top = _top_closure(real, spec, gen, min(i, g) - n, max(i, g) + n)
    comp = module_component(spec, spec.layer_weight(0) + n, j, real.target)
    ech = SparseEchelon()
    for nv in comp.null:
        ech.add(nv.terms)
    for mono in negative_monomials(n):
        q = sum(1 if g == "E" else -1 if g == "F" else 0 for g, _m in mono)
        v = top.get(i - q)
        if v is not None:
            w = _apply_monomial(real, mono, v)
            if w:
                ech.add(w.terms)
    return ech.contains(vec.terms)


def saturate(real: H4Realization, spec: RelaxedModuleSpec, generators: Sequence[FockState], max_h,
             charge_window: Tuple, mode_depth: int = 2) -> Dict[Tuple[Fraction, Fraction], int]:
    """Lower bounds for dims of the submodule generated by arbitrary vectors.

    Applies X(n), |n| <= mode_depth, repeatedly, keeping only vectors of
    weight <= max_h and charge in [charge_window[0], charge_window[1]].
    """
    from .lattice import charge_of, weight_of

    max_h = Q(max_h)
    jlo, jhi = (Q(charge_window[0]), Q(charge_window[1]))
    spaces: Dict[Tuple[Fraction, Fraction], SparseEchelon] = {}
    queue = []
    for g in generators:
        queue.append(g)
    while queue:
        v = queue.pop()
        if not v:
            continue
        h, j = weight_of(v), charge_of(v)
        if h > max_h or not (jlo <= j <= jhi):
            continue
        ech = spaces.get((h, j))
        if ech is None:
            ech = spaces[(h, j)] = SparseEchelon()
            comp = module_component(spec, h, j, real.target)
            ech.null_rank = 0
            for nv in comp.null:
                ech.add(nv.terms)
            ech.null_rank = len(ech)
        if not ech.add(v.terms):
            continue
        for g in GENERATORS:
            for n in range(-mode_depth, mode_depth + 1):
                w = mode_apply(real.images[g], n, v)
                if w:
                    queue.append(w)
    return {k: len(e) - e.null_rank for k, e in spaces.items()}
