"""The screening operator S = (e^alpha)_0 and logarithmic modules built from it.

S maps the layer L[x, y] (x) Pi_r(lambda) of the free-field realization to
L[x-1, (x-2)y/(x-1)] (x) Pi_{r-1}(lambda), sending layer index i to i+1.  It
preserves weight and J(0)-charge, and its kernel on the vacuum module is the
image of the level-one affine vacuum module.

A logarithmic module is modelled on one bidegree at a time as
``source (+) target`` with L~(0) = h Id + N, N = [[0, 0], [S, 0]].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import Matrix, Q, SparseEchelon, coordinates_mod, exact_rank, frac_part, fstr, identity, is_integral, matmul, zeros
from .lattice import FockState, Frame, direct_bracket, max_mode, mode_apply, nw_frame
from .nw import GENERATORS, H4Realization, inverse_qhr_map, pbw_character
from .relaxed import (
    ModuleComponent,
    RelaxedModuleSpec,
    module_component,
    submodule_growth,
    twisted_bidegree,
)

__all__ = [
    "screening_state",
    "ScreeningMap",
    "screening_target",
    "vacuum_map",
    "ScreeningBlock",
    "screening_matrix",
    "screen",
    "kernel_profile",
    "FusionRuleEntry",
    "FUSION_RULES",
    "delta_rs",
    "hvir_fusion",
    "pi_fusion",
    "weight_gap",
    "vmodule_compatible",
    "LogModuleSpec",
    "deformed_L0",
    "witness_index",
    "delta_expand",
    "deformed_mode",
    "kernel_profile_matches",
    "Certificate",
    "rank_two_certificate",
    "commutes_with_images",
]


def screening_state(frame: Frame) -> FockState:
    return frame.exp(frame.vec("alpha"))


# ---------------------------------------------------------------------------
# maps and matrices
# ---------------------------------------------------------------------------


def screening_target(spec: RelaxedModuleSpec) -> RelaxedModuleSpec:
    """The module S lands in, realized with the exponent shifted by alpha.

    For x = 1 the target HVir factor is the whole Fock module over a c1,
    which contains L[0, a] (x) Pi as the kernel of Q but not the full image
    of S.
    """
    x, y = spec.x, spec.y
    if x == 1:
        a = spec.a if spec.a is not None else Fraction(0)
        return RelaxedModuleSpec(0, a, spec.r - 1, spec.lam, hvir_kind="fock")
    # for x = 2 the target L[1, 0] sits over a c1 - d1/2 with a = y/(1-x)
    return RelaxedModuleSpec(x - 1, y * (x - 2) / (x - 1), spec.r - 1, spec.lam, a=y / (1 - x))


@dataclass(frozen=True)
class ScreeningMap:
    source: RelaxedModuleSpec
    target: RelaxedModuleSpec

    @classmethod
    def of(cls, source: RelaxedModuleSpec) -> "ScreeningMap":
        return cls(source, screening_target(source))

    def target_bidegree(self, h, j) -> Tuple[Fraction, Fraction]:
        return Q(h), Q(j)


def vacuum_map() -> ScreeningMap:
    """L^HVir (x) Pi -> L^HVir[-1, 0] (x) Pi_{-1}(0)."""
    return ScreeningMap.of(RelaxedModuleSpec(0, 0, 0, 0))


def screen(state: FockState) -> FockState:
    return mode_apply(screening_state(state.frame), 0, state)


@dataclass
class ScreeningBlock:
    """S between the (h, j) components, in the component bases."""

    h: Fraction
    j: Fraction
    source: ModuleComponent
    target: ModuleComponent
    images: List[FockState]
    well_defined: bool = True
    _matrix: Optional[Matrix] = None
    _rank: Optional[int] = None

    @property
    def dim_source(self) -> int:
        return self.source.dim

    @property
    def dim_target(self) -> int:
        return self.target.dim

    @property
    def matrix(self) -> Matrix:
        """Rows: target basis, columns: source basis."""
        if self._matrix is None:
            cols = coordinates_mod([im.terms for im in self.images], [t.terms for t in self.target.states],
                                   [n.terms for n in self.target.null])
            self._matrix = [[cols[c][r] for c in range(len(cols))] for r in range(self.dim_target)]
        return self._matrix

    @property
    def rank(self) -> int:
        if self._rank is None:
            null = [n.terms for n in self.target.null]
            self._rank = exact_rank(null + [im.terms for im in self.images]) - exact_rank(null)
        return self._rank

    @property
    def dim_ker(self) -> int:
        return self.dim_source - self.rank


def screening_matrix(smap: ScreeningMap, h, j, frame: Optional[Frame] = None) -> ScreeningBlock:
    """S on the (h, j) components; the matrix itself is built on first access."""
    frame = frame or nw_frame()
    h, j = Q(h), Q(j)
    src = module_component(smap.source, h, j, frame)
    tgt = module_component(smap.target, h, j, frame)
    s = screening_state(frame)
    images = [mode_apply(s, 0, v) for v in src.states]
    ok = True
    if src.null:
        ech = SparseEchelon(reduced=False)
        for n in tgt.null:
            ech.add(n.terms)
        ok = all(not ech.reduce(mode_apply(s, 0, n).terms) for n in src.null)
    return ScreeningBlock(h, j, src, tgt, images, ok)


def kernel_profile(max_h: int, charge_window: int, frame: Optional[Frame] = None) -> Dict[Tuple[int, int], int]:
    """dim Ker S on the vacuum module at each (h, j), 0 <= h <= max_h, |j| <= window."""
    frame = frame or nw_frame()
    smap = vacuum_map()
    return {
        (h, j): screening_matrix(smap, h, j, frame).dim_ker
        for h in range(max_h + 1)
        for j in range(-charge_window, charge_window + 1)
    }


def kernel_profile_matches(max_h: int, charge_window: int, frame: Optional[Frame] = None) -> List[dict]:
    """Compare kernel_profile with the PBW character; one record per bidegree."""
    pbw = pbw_character(max_h)
    out = []
    for (h, j), d in sorted(kernel_profile(max_h, charge_window, frame).items()):
        want = pbw.coeff(h, j)
        out.append({"h": h, "j": j, "dim_ker": d, "pbw": want, "pass": d == want})
    return out


def commutes_with_images(real: H4Realization, states: Sequence[FockState], mode_bound: int = 2) -> List[dict]:
    """Failures of [S, X(n)] = 0 on the given states, X in E, F, I, J."""
    s = screening_state(real.target)
    fails = []
    for v in states:
        for g in GENERATORS:
            for n in range(-mode_bound, mode_bound + 1):
                if direct_bracket(s, 0, real.images[g], n, v):
                    fails.append({"generator": g, "mode": n, "state": v.pretty()})
    return fails


# ---------------------------------------------------------------------------
# fusion data and compatibility
# ---------------------------------------------------------------------------


def delta_rs(r, s) -> Fraction:
    return (Q(r) + 1) * Q(s)


@dataclass(frozen=True)
class FusionRuleEntry:
    left: str
    right: str
    result: str
    domain: str


FUSION_RULES: Tuple[FusionRuleEntry, ...] = (
    FusionRuleEntry("L[-1,0]", "L[x,y]", "L[x-1,(x-2)y/(x-1)]", "x integer, x != 1"),
    FusionRuleEntry("L[-1,0]", "L[1,y]", "0", "y != 0"),
    FusionRuleEntry("L[-1,0]", "L[1,0]", "sum of L[0,y] over y", "all y"),
    FusionRuleEntry("Pi_r1(l1)", "Pi_r2(l2)", "Pi_{r1+r2}(l1+l2)", "all r1, r2, l1, l2"),
    FusionRuleEntry("L[-1,0]", "L[-r,Delta_{r,s}]", "L[-r-1,Delta_{r+1,s}]", "Delta_{r,s} = (r+1)s, r not a negative integer"),
)


def hvir_fusion(x, y) -> Optional[Tuple[Fraction, Optional[Fraction]]]:
    """L[-1,0] x L[x,y] by the table; (0, None) stands for the family L[0, *]."""
    x, y = Q(x), Q(y)
    if not is_integral(x):
        raise ValueError("the table only covers integral x")
    if x == 1:
        return (Fraction(0), None) if y == 0 else None
    return (x - 1, y * (x - 2) / (x - 1))


def pi_fusion(r1: int, l1, r2: int, l2) -> Tuple[int, Fraction]:
    return r1 + r2, Q(l1) + Q(l2)


def weight_gap(x, y, lam, r) -> Fraction:
    """Weight of the source layer minus that of the target layer it meets."""
    src = RelaxedModuleSpec(x, y, r, lam)
    tgt = screening_target(src)
    return src.layer_weight(0) - tgt.layer_weight(0)


def vmodule_compatible(x, y, lam, r, target_y=None) -> Tuple[bool, Fraction]:
    """Whether U[x, y, lambda, r] is a module for the extended algebra.

    Returns (ok, obstruction) with obstruction the fractional part of
    lambda - y/(x-1), or of lambda + target_y when x = 1.  For x = 1 the
    target L[0, target_y] defaults to target_y = -lambda.
    """
    x, y, lam = Q(x), Q(y), Q(lam)
    if not is_integral(x):
        raise ValueError("x must be an integer")
    if x == 1:
        if y != 0:
            return False, Fraction(0)
        ty = -lam if target_y is None else Q(target_y)
        ob = frac_part(lam + ty)
        return ob == 0, ob
    ob = frac_part(lam - y / (x - 1))
    return ob == 0, ob


# ---------------------------------------------------------------------------
# logarithmic modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogModuleSpec:
    """U[x, y, lambda, r] = source layer (+) its screening target.

    For x = 1 the source Fock exponent is a c1 - d1/2 with a = -lambda by
    default, which gives the rank-two module P_1(lambda).
    """

    x: Fraction
    y: Fraction
    lam: Fraction
    r: int = 1
    a: Optional[Fraction] = None

    def __init__(self, x, y, lam, r: int = 1, a=None):
        object.__setattr__(self, "x", Q(x))
        object.__setattr__(self, "y", Q(y))
        object.__setattr__(self, "lam", Q(lam))
        object.__setattr__(self, "r", int(r))
        if self.x == 1 and a is None:
            a = -self.lam
        object.__setattr__(self, "a", None if a is None else Q(a))

    @property
    def source(self) -> RelaxedModuleSpec:
        return RelaxedModuleSpec(self.x, self.y, self.r, self.lam, a=self.a)

    @property
    def target(self) -> RelaxedModuleSpec:
        return screening_target(self.source)

    @property
    def screening(self) -> ScreeningMap:
        return ScreeningMap(self.source, self.target)

    def compatible(self) -> Tuple[bool, Fraction]:
        return vmodule_compatible(self.x, self.y, self.lam, self.r, self.a if self.x == 1 else None)

    def as_dict(self) -> Dict[str, str]:
        d = {"x": fstr(self.x), "y": fstr(self.y), "lambda": fstr(self.lam), "r": str(self.r)}
        if self.x == 1:
            d["a"] = fstr(self.a)
        return d


def deformed_L0(spec: LogModuleSpec, h, j, frame: Optional[Frame] = None,
                block: Optional[ScreeningBlock] = None) -> Tuple[Matrix, Matrix]:
    """(semisimple, nilpotent) parts of L~(0) = L(0) + S on U at (h, j).

    Basis order: source component, then target component.
    """
    ok, ob = spec.compatible()
    if not ok:
        raise ValueError(f"incompatible parameters, obstruction {fstr(ob)}")
    blk = block or screening_matrix(spec.screening, h, j, frame)
    m, n = blk.dim_source, blk.dim_target
    semi = [[Q(h) * c for c in row] for row in identity(m + n)]
    nil = zeros(m + n, m + n)
    for r in range(n):
        for c in range(m):
            nil[m + r][c] = blk.matrix[r][c]
    return semi, nil


def delta_expand(a: FockState, max_terms: int = 64) -> Dict[int, FockState]:
    """Delta(s, z) a as {p: coefficient of z^-p}, for a with s_0 a = 0.

    Delta(s, z) = z^{s_0} exp(sum_{n >= 1} s_n (-z)^{-n} / (-n)); the
    exponential series is finite because each s_n lowers the weight.
    """
    s = screening_state(a.frame)
    if mode_apply(s, 0, a):
        raise ValueError("state is not in the kernel of s_0")
    total: Dict[int, FockState] = {0: a}
    layer: Dict[int, FockState] = {0: a}
    for k in range(1, max_terms + 1):
        nxt: Dict[int, FockState] = {}
        for p, st in layer.items():
            for n in range(1, max_mode(s, st) + 1):
                w = mode_apply(s, n, st)
                if w:
                    c = Fraction((-1) ** ((n + 1) % 2), n * k)
                    nxt[p + n] = nxt.get(p + n, a.frame.zero()) + w * c
        nxt = {p: st for p, st in nxt.items() if st}
        if not nxt:
            break
        for p, st in nxt.items():
            total[p] = total.get(p, a.frame.zero()) + st
        layer = nxt
    else:
        raise RuntimeError("exponential series did not terminate")
    return {p: st for p, st in total.items() if st}


def deformed_mode(a: FockState, m: int, v: FockState) -> FockState:
    """The m-th mode of Y(Delta(s, z) a, z) applied to v."""
    out = v.frame.zero()
    for p, b in delta_expand(a).items():
        out = out + mode_apply(b, m - p, v)
    return out


def witness_index(spec: LogModuleSpec, frame: Optional[Frame] = None) -> int:
    """Layer j with S Z_j = 0 and S Z_{j-1} a nonzero multiple of a target top."""
    frame = frame or nw_frame()
    z0 = spec.source.top(frame, 0)
    val = frame.pair(frame.vec("alpha"), z0.exponent()) + 1
    if not is_integral(val):
        raise ValueError("S is not integral on this module")
    return -int(val) + 1


def _record(spec: LogModuleSpec, h, j, blk: Optional[ScreeningBlock], nil_rank: int, checks) -> dict:
    return {
        "spec": spec.as_dict(),
        "bidegree": [fstr(h), fstr(j)],
        "dim_source": blk.dim_source if blk else 0,
        "dim_target": blk.dim_target if blk else 0,
        "rank_S": blk.rank if blk else 0,
        "dim_ker": blk.dim_ker if blk else 0,
        "nilpotent_rank": nil_rank,
        "checks": checks,
    }


def _check(name: str, ok: bool, detail: str = "") -> dict:
    return {"name": name, "pass": bool(ok), "detail": detail}


@dataclass
class Certificate:
    spec: LogModuleSpec
    records: List[dict] = field(default_factory=list)
    summary: List[dict] = field(default_factory=list)
    nu: Optional[Fraction] = None

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.summary) and all(
            c["pass"] for r in self.records for c in r["checks"]
        )


def rank_two_certificate(spec: LogModuleSpec, depth: int = 3, window: int = 1,
                         frame: Optional[Frame] = None, real: Optional[H4Realization] = None,
                         loewy_depth: Optional[int] = None) -> Certificate:
    """Rank-two and non-splitness checks on U truncated at ``depth`` above its top.

    Layers jw-1-window .. jw-1+window are scanned, jw = witness_index(spec).
    """
    frame = frame or nw_frame()
    cert = Certificate(spec)
    ok, ob = spec.compatible()
    cert.summary.append(_check("compatible", ok, f"obstruction {fstr(ob)}"))
    if not ok:
        return cert
    src = spec.source
    top_w = src.layer_weight(0)
    jw = witness_index(spec, frame)
    layers = range(jw - 1 - window, jw + window)
    any_nil = False
    for d in range(depth + 1):
        h = top_w + d
        for i in layers:
            j = src.layer_charge(i)
            blk = screening_matrix(spec.screening, h, j, frame)
            semi, nil = deformed_L0(spec, h, j, frame, blk)
            nrank = blk.rank
            sq = matmul(nil, nil) if nil else []
            checks = [
                _check("nilpotent_square_zero", all(c == 0 for row in sq for c in row)),
                _check("S_well_defined", blk.well_defined),
            ]
            any_nil = any_nil or nrank > 0
            cert.records.append(_record(spec, h, j, blk, nrank, checks))
    cert.summary.append(_check("nilpotent_nonzero", any_nil, f"depth {depth}"))

    # non-splitness: S Z_{jw-1} is a nonzero multiple of the target top
    s = screening_state(frame)
    z = src.top(frame, jw - 1)
    img = mode_apply(s, 0, z)
    tgt_top = spec.target.top(frame, jw)
    nu = None
    if img and img.exponents() == tgt_top.exponents():
        coords = coordinates_mod([img.terms], [tgt_top.terms])
        nu = coords[0][0]
    cert.nu = nu
    cert.summary.append(_check("non_split_witness", nu is not None and nu != 0,
                               f"S Z_{jw - 1} = {fstr(nu) if nu is not None else '?'} Z'_{jw}"))
    zeros_ok = all(not mode_apply(s, 0, src.top(frame, jw + k)) for k in range(3))
    cert.summary.append(_check("S_kills_upper_tops", zeros_ok, f"S Z_i = 0 for i = {jw}..{jw + 2}"))

    if spec.x == 2:
        cert.summary.append(_check("loewy_dimensions", True, "infinite-length sublayer, socle checks skipped"))
    elif spec.x != 1 and spec.r == 1:
        cert.summary.append(_loewy_check(spec, jw, loewy_depth if loewy_depth is not None else min(depth, 2),
                                         window, frame, real))
    return cert


def _loewy_check(spec: LogModuleSpec, jw: int, depth: int, window: int, frame: Frame,
                 real: Optional[H4Realization]) -> dict:
    """Top factor of the source layer versus the socle of the target layer.

    The quotient of the source layer by <Z_jw> and the socle of the target
    layer should be the same module.  Twisting the target by rho_1 turns it
    into an r = 1 module whose socle is generated by its own Z_jw, so the
    dimensions are compared through the rho_1 bidegree map.
    """
    real = real or inverse_qhr_map(frame)
    src = spec.source
    twin = RelaxedModuleSpec(spec.x - 1, spec.target.y, 1, spec.lam)
    charges = [src.layer_charge(i) for i in range(jw - 1 - window, jw + window)]
    sub = submodule_growth(real, src, src.top(frame, jw), depth, charges)
    wanted = {}
    for (h, j) in sub:
        th, tj = twisted_bidegree(src, 1, h, j)
        n = th - twin.layer_weight(0)
        if n >= 0 and n.denominator == 1:
            wanted[(h, j)] = (th, tj, int(n))
    soc = {}
    if wanted:
        soc = submodule_growth(real, twin, twin.top(frame, jw), max(n for _a, _b, n in wanted.values()),
                               sorted({tj for _a, tj, _n in wanted.values()}))
    bad = []
    for (h, j), d_sub in sorted(sub.items()):
        quo = module_component(src, h, j, frame).dim - d_sub
        tw = wanted.get((h, j))
        d_soc = soc.get(tw[:2], 0) if tw else 0
        if quo != d_soc:
            bad.append(f"({fstr(h)},{fstr(j)}): {quo} vs {d_soc}")
    return _check("loewy_dimensions", not bad, "; ".join(bad) or f"{len(sub)} bidegrees")
