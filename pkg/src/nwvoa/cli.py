"""Command-line runner: ``nwvoa --suite NAME [options]``.

Exit codes: 0 every check passed, 1 some check failed, 2 invalid
parameters, 3 internal error, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import brst, hvir, nw, relaxed, screening
from .exact import fstr
from .frame_io import load_frame
from .lattice import Frame, nw_frame
from .reports import all_passed, emit_report, record, render_report

EXIT_OK, EXIT_FAIL, EXIT_PARAMS, EXIT_INTERNAL, EXIT_IO = 0, 1, 2, 3, 4

_RATIONAL = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")
PARAM_NAMES = ("x", "y", "lambda", "r")


class ParamError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL.match(text):
        raise ParamError(f"not an exact rational: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParamError(f"zero denominator in {text!r}") from None


@dataclass
class SuiteConfig:
    suite: str
    max_weight: Optional[int] = None
    charge_window: Optional[int] = None
    params: Dict[str, Fraction] = field(default_factory=dict)
    frame: Optional[Frame] = None
    out: Optional[str] = None

    def get(self, name: str, default=None):
        return self.params.get(name, default)

    def ambient(self) -> Frame:
        return self.frame or nw_frame()


def _weight(cfg: SuiteConfig, default: int) -> int:
    return default if cfg.max_weight is None else cfg.max_weight


def _window(cfg: SuiteConfig, default: int) -> int:
    return default if cfg.charge_window is None else cfg.charge_window


def _int_param(cfg: SuiteConfig, name: str, default: int) -> int:
    v = cfg.get(name, Fraction(default))
    if v.denominator != 1:
        raise ParamError(f"{name} must be an integer")
    return int(v)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def suite_verify_embedding(cfg: SuiteConfig) -> List[dict]:
    frame = cfg.ambient()
    bound = _weight(cfg, 2)
    out = []
    reals = [nw.inverse_qhr_map(frame), nw.wakimoto_map(frame)]
    for real in reals:
        rep = nw.verify_embedding(real, bound)
        out.append(record("verify-embedding", f"embedding:{real.name}", rep.passed,
                          f"{rep.checks} checks, mode bound {bound}", failures=rep.failures[:5]))
    a, b = reals
    same = all(a.images[g] == b.images[g] for g in nw.GENERATORS)
    out.append(record("verify-embedding", "images_coincide", same))
    ok = nw.sugawara_state(a) == nw.expected_sugawara(frame)
    out.append(record("verify-embedding", "sugawara_state", ok))
    return out


def suite_verify_qhr(cfg: SuiteConfig) -> List[dict]:
    n = _weight(cfg, 4)
    cx = brst.brst_complex(cfg.ambient())
    out = [record("verify-qhr", f"reduced:{c['name']}", c["pass"], c["detail"])
           for c in brst.reduced_structure_check(min(n, 3), cx)]
    sq = brst.d0_square_check(n, _window(cfg, 1), cx=cx)
    bad = [r for r in sq if not r["pass"]]
    out.append(record("verify-qhr", "d0_squared", not bad,
                      f"{sum(r['states'] for r in sq)} states, weight <= {n}", failures=bad[:5]))
    for row in brst.euler_profile(n):
        out.append(record("verify-qhr", "euler", row["pass"], bidegree=[row["h"], 0],
                          euler=row["euler"], character=row["character"],
                          sectors={str(k): v for k, v in row["sectors"].items()}))
    return out


def suite_hvir_singular(cfg: SuiteConfig) -> List[dict]:
    xs = [cfg.get("x")] if "x" in cfg.params else [Fraction(x) for x in range(-3, 5) if x != 1]
    y = cfg.get("y", Fraction(0))
    out = []
    for x in xs:
        deg = hvir.singular_degree(x)
        if deg is None:
            out.append(record("hvir-singular", f"x={fstr(x)}", True, "no singular vector expected", x=x, y=y))
            continue
        below = all(not hvir.singular_space(x, y, k) for k in range(1, deg))
        at = len(hvir.singular_space(x, y, deg))
        out.append(record("hvir-singular", f"x={fstr(x)}", below and at == 1,
                          f"degree {deg}, dim {at}", x=x, y=y, degree=deg, dim=at))
    return out


def suite_characters(cfg: SuiteConfig) -> List[dict]:
    n = _weight(cfg, 6)
    x, y = cfg.get("x", Fraction(0)), cfg.get("y", Fraction(0))
    out = []
    ch = hvir.hvir_character(x, y, n).q_coeffs()
    vq = hvir.verma_quotient_dims(x, y, n)
    out.append(record("characters", "hvir_character", ch == vq, x=x, y=y, character=ch, verma_quotient=vq))
    frame = cfg.ambient()
    for k in range(min(n, 4) + 1):
        d = hvir.hvir_module_component(x, y, k, frame).dim if (x != 1 or y == 0) else None
        if d is not None:
            out.append(record("characters", "fock_realization", d == ch[k], bidegree=[k, 0], dim=d,
                              expected=ch[k]))
    pbw = nw.pbw_character(min(n, 4))
    out.append(record("characters", "pbw_character", True,
                      table={str(h): {str(j): c for j, c in sorted(pbw.charges(h).items())}
                             for h in range(min(n, 4) + 1)}))
    return out


def suite_kernel_profile(cfg: SuiteConfig) -> List[dict]:
    n, w = _weight(cfg, 3), _window(cfg, 3)
    frame = cfg.ambient()
    pbw = nw.pbw_character(n)
    smap = screening.vacuum_map()
    out = []
    for h in range(n + 1):
        for j in range(-w, w + 1):
            blk = screening.screening_matrix(smap, h, j, frame)
            want = pbw.coeff(h, j)
            out.append(record("kernel-profile", "dim_ker", blk.dim_ker == want, bidegree=[h, j],
                              dim_source=blk.dim_source, dim_target=blk.dim_target, rank_S=blk.rank,
                              dim_ker=blk.dim_ker, expected=want))
    a, b = frame.vec("alpha"), frame.vec("beta")
    src = frame.exp(tuple(-x - y for x, y in zip(a, b)))
    img = screening.screen(src)
    tgt = frame.exp(tuple(-y for y in b))
    sign = frame.cocycle(a, src.exponent())
    out.append(record("kernel-profile", "screening_witness", bool(img) and img == tgt * sign,
                      f"S e^(-alpha-beta) = {fstr(sign)} e^(-beta)", image=img.pretty()))
    return out


def _spec_params(cfg: SuiteConfig, defaults=(3, 2, Fraction(1, 3))):
    x = cfg.get("x", Fraction(defaults[0]))
    y = cfg.get("y", Fraction(defaults[1]))
    lam = cfg.get("lambda", Fraction(defaults[2]))
    return x, y, lam


def suite_classify(cfg: SuiteConfig) -> List[dict]:
    x, y, lam = _spec_params(cfg)
    cls = relaxed.classify(x, y, lam)
    out = [record("classify", "classify", True, cls.label, x=x, y=y, **{"lambda": lam}, result=cls.as_dict())]
    if x.denominator == 1 and not (x == 1 and y != 0):
        real = nw.inverse_qhr_map(cfg.ambient())
        if cls.lowest_index is not None:
            j = cls.lowest_index
            ok = not relaxed.realized_top_action(real, "F", x, y, lam, j) and all(
                relaxed.realized_top_action(real, "F", x, y, lam, i) for i in range(j - 2, j))
            out.append(record("classify", "lowest_weight_vector", ok, f"F(0) Z_{j} = 0"))
    return out


def suite_relaxed_actions(cfg: SuiteConfig) -> List[dict]:
    w = _window(cfg, 3)
    frame = cfg.ambient()
    real = nw.inverse_qhr_map(frame)
    if any(k in cfg.params for k in ("x", "y", "lambda")):
        samples = [_spec_params(cfg)]
    else:
        samples = [(Fraction(3), Fraction(2), Fraction(1, 3)), (Fraction(1, 2), Fraction(-2, 7), Fraction(5, 3)),
                   (Fraction(-2), Fraction(1), Fraction(0))]
    out = []
    for x, y, lam in samples:
        bad = []
        for i in range(-w, w + 1):
            for g in nw.GENERATORS:
                shift, coef = relaxed.top_action(g, i, x, y, lam)
                want = relaxed.top_vector(frame, x, y, lam, i + shift) * coef
                if relaxed.realized_top_action(real, g, x, y, lam, i) != want:
                    bad.append(f"{g}(0) Z_{i}")
        out.append(record("relaxed-actions", "top_action", not bad, "; ".join(bad),
                          x=x, y=y, **{"lambda": lam}))
    return out


def _log_specs(cfg: SuiteConfig):
    if any(k in cfg.params for k in PARAM_NAMES):
        x, y, lam = _spec_params(cfg, (3, 2, 0))
        return [screening.LogModuleSpec(x, y, lam, _int_param(cfg, "r", 1))]
    return [screening.LogModuleSpec(3, 2, 0), screening.LogModuleSpec(0, 0, 0), screening.LogModuleSpec(-1, 2, 0),
            screening.LogModuleSpec(1, 0, 0), screening.LogModuleSpec(1, 0, Fraction(1, 3))]


def suite_log_rank(cfg: SuiteConfig) -> List[dict]:
    depth, w = _weight(cfg, 3), _window(cfg, 1)
    frame = cfg.ambient()
    real = nw.inverse_qhr_map(frame)
    out = []
    for spec in _log_specs(cfg):
        ok, ob = spec.compatible()
        if not ok:
            raise ParamError(f"parameters are not compatible (obstruction {fstr(ob)})")
        cert = screening.rank_two_certificate(spec, depth, w, frame, real)
        tag = ",".join(f"{k}={v}" for k, v in spec.as_dict().items())
        for c in cert.summary:
            out.append(record("log-rank", f"{tag}:{c['name']}", c["pass"], c["detail"], spec=spec.as_dict()))
        for r in cert.records:
            out.append(record("log-rank", f"{tag}:bidegree", all(c["pass"] for c in r["checks"]), **r))
        out.append(record("log-rank", f"{tag}:nu", cert.nu is not None and cert.nu != 0,
                          spec=spec.as_dict(), nu=cert.nu))
    return out


SUITES: Dict[str, Callable[[SuiteConfig], List[dict]]] = {
    "verify-embedding": suite_verify_embedding,
    "verify-qhr": suite_verify_qhr,
    "hvir-singular": suite_hvir_singular,
    "characters": suite_characters,
    "kernel-profile": suite_kernel_profile,
    "classify": suite_classify,
    "relaxed-actions": suite_relaxed_actions,
    "log-rank": suite_log_rank,
}


def run_records(cfg: SuiteConfig) -> List[dict]:
    if cfg.suite == "all":
        recs = []
        for name, fn in SUITES.items():
            sub = SuiteConfig(name, cfg.max_weight, cfg.charge_window, {}, cfg.frame, None)
            recs.extend(fn(sub))
        return recs
    return SUITES[cfg.suite](cfg)


def run_suite(cfg: SuiteConfig, stream=None) -> int:
    """Run, write the report (to ``cfg.out`` or ``stream``) and return the exit code."""
    stream = stream if stream is not None else sys.stdout
    try:
        recs = run_records(cfg)
    except ParamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except Exception as exc:  # noqa: BLE001 - mapped to the internal-error exit code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    try:
        if cfg.out:
            emit_report(recs, cfg.out)
        else:
            stream.write(render_report(recs) + "\n")
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if all_passed(recs) else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARAMS)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nwvoa", description="Exact checks for the Nappi-Witten free-field realizations.")
    p.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    p.add_argument("--max-weight", type=int, default=None,
                   help="weight / degree / mode bound (suite dependent)")
    p.add_argument("--charge-window", type=int, default=None)
    p.add_argument("--param", action="append", default=[], metavar="NAME=P/Q",
                   help="x, y, lambda or r as an exact rational")
    p.add_argument("--frame", default=None, help="frame INI file")
    p.add_argument("--out", default=None, help="report path (default: stdout)")
    return p


def parse_config(argv: Optional[List[str]] = None) -> SuiteConfig:
    args = build_parser().parse_args(argv)
    params = {}
    for item in args.param:
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in PARAM_NAMES:
            raise ParamError(f"bad --param {item!r}; expected one of {', '.join(PARAM_NAMES)} as NAME=P/Q")
        params[name] = parse_rational(value)
    for flag in ("max_weight", "charge_window"):
        v = getattr(args, flag)
        if v is not None and v < 0:
            raise ParamError(f"--{flag.replace('_', '-')} must be non-negative")
    frame = None
    if args.frame:
        frame = load_frame(args.frame)
    return SuiteConfig(args.suite, args.max_weight, args.charge_window, params, frame, args.out)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # argparse: --help or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_PARAMS
    except ParamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except OSError as exc:
        print(f"error: cannot read frame: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: bad frame file: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    return run_suite(cfg)


if __name__ == "__main__":
    sys.exit(main())
