"""Reading and writing frames as INI files, and states as prefix expressions.

State grammar (whitespace separated, parenthesized prefix form)::

    expr   := number | exp | mode | (+ expr ...) | (* expr ...)
    number := integer | integer/integer
    exp    := (e q_1 ... q_n)        exponential, generator coordinates
    mode   := (NAME N)                Heisenberg mode NAME(N) with N < 0

A product may contain numbers, modes and at most one exponential; the modes
act on the exponential (or on the vacuum when there is none).  Modes of any
named vector are accepted and expanded into generators.  ``format_state``
emits a canonical form that ``parse_state`` reads back exactly.

INI layout::

    [frame]
    name = ...
    generators = c1 d1 c d phi
    lattice_basis = c alpha p q phi
    [gram]
    c1 = 0 2 0 0 0          ; one row per generator
    [vectors]
    alpha = 0 1/2 1/2 1/2 0 ; generator coordinates
    [states]
    conformal = (+ ...)
    charge = (+ ...)
"""
from __future__ import annotations

import configparser
import io
from fractions import Fraction
from typing import List, Optional, Union

from .exact import Q, fstr
from .lattice import FockState, Frame, heisenberg

__all__ = ["parse_state", "format_state", "dump_frame", "load_frame", "dumps_frame", "loads_frame"]


class ExpressionError(ValueError):
    pass


def _tokenize(text: str) -> List[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _read(tokens: List[str], pos: int):
    if pos >= len(tokens):
        raise ExpressionError("unexpected end of expression")
    t = tokens[pos]
    if t == ")":
        raise ExpressionError("unexpected ')'")
    if t != "(":
        return t, pos + 1
    items = []
    pos += 1
    while True:
        if pos >= len(tokens):
            raise ExpressionError("missing ')'")
        if tokens[pos] == ")":
            return items, pos + 1
        item, pos = _read(tokens, pos)
        items.append(item)


def _number(tok) -> Optional[Fraction]:
    if not isinstance(tok, str):
        return None
    try:
        return Fraction(tok)
    except ValueError:
        return None


def _eval(frame: Frame, node) -> Union[FockState, Fraction, tuple]:
    num = _number(node)
    if num is not None:
        return num
    if isinstance(node, str):
        raise ExpressionError(f"bare symbol {node!r}")
    if not node:
        raise ExpressionError("empty list")
    head = node[0]
    if head == "e":
        coords = [_number(x) for x in node[1:]]
        if any(c is None for c in coords) or len(coords) != frame.rank:
            raise ExpressionError("(e ...) needs one number per generator")
        return frame.exp(coords)
    if head == "+":
        acc = frame.zero()
        for sub in node[1:]:
            acc = acc + _as_state(frame, _eval(frame, sub))
        return acc
    if head == "*":
        scalar = Fraction(1)
        modes = []
        base = None
        for sub in node[1:]:
            v = _eval(frame, sub)
            if isinstance(v, Fraction):
                scalar *= v
            elif isinstance(v, tuple):
                modes.append(v)
            else:
                if base is not None:
                    raise ExpressionError("a product may contain only one state factor")
                base = v
        st = base if base is not None else frame.vacuum()
        for vec, m in reversed(modes):
            st = heisenberg(vec, m, st)
        return st * scalar
    if isinstance(head, str) and len(node) == 2:
        if head not in frame.vectors:
            raise ExpressionError(f"unknown vector {head!r}")
        m = _number(node[1])
        if m is None or m.denominator != 1 or m >= 0:
            raise ExpressionError("mode index must be a negative integer")
        return (frame.vec(head), int(m))
    raise ExpressionError(f"cannot parse {node!r}")


def _as_state(frame: Frame, v) -> FockState:
    if isinstance(v, FockState):
        return v
    if isinstance(v, Fraction):
        return frame.vacuum() * v
    vec, m = v
    return heisenberg(vec, m, frame.vacuum())


def parse_state(frame: Frame, text: str) -> FockState:
    tokens = _tokenize(text)
    node, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise ExpressionError("trailing tokens")
    return _as_state(frame, _eval(frame, node))


def format_state(state: FockState) -> str:
    frame = state.frame
    parts = []
    for (w, e), c in state:
        items = [fstr(c)]
        items += [f"({frame.generators[g]} -{m})" for g, m in w]
        if any(e):
            items.append("(e " + " ".join(fstr(x) for x in e) + ")")
        parts.append("(* " + " ".join(items) + ")")
    return "(+ " + " ".join(parts) + ")" if parts else "(+)"


def dumps_frame(frame: Frame) -> str:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp["frame"] = {
        "name": frame.name,
        "generators": " ".join(frame.generators),
        "lattice_basis": " ".join(frame.lattice_basis),
    }
    cp["gram"] = {g: " ".join(fstr(x) for x in row) for g, row in zip(frame.generators, frame.gram)}
    cp["vectors"] = {
        k: " ".join(fstr(x) for x in v) for k, v in sorted(frame.vectors.items()) if k not in frame.generators
    }
    states = {}
    if frame.conformal is not None:
        states["conformal"] = format_state(frame.conformal)
    if frame.charge is not None:
        states["charge"] = format_state(frame.charge)
    cp["states"] = states
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def loads_frame(text: str) -> Frame:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp.read_string(text)
    try:
        gens = cp["frame"]["generators"].split()
        basis = cp["frame"]["lattice_basis"].split()
        name = cp["frame"].get("name", "frame")
        gram = [[Q(x) for x in cp["gram"][g].split()] for g in gens]
    except KeyError as exc:
        raise ValueError(f"frame file is missing {exc}") from None
    vectors = {}
    if cp.has_section("vectors"):
        vectors = {k: [Q(x) for x in v.split()] for k, v in cp["vectors"].items()}
    frame = Frame(gens, gram, basis, vectors, name=name)
    conformal = charge = None
    if cp.has_section("states"):
        if "conformal" in cp["states"]:
            conformal = parse_state(frame, cp["states"]["conformal"])
        if "charge" in cp["states"]:
            charge = parse_state(frame, cp["states"]["charge"])
    if conformal is not None or charge is not None:
        frame = frame.with_conformal(conformal, charge)
    return frame


def dump_frame(frame: Frame, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_frame(frame))


def load_frame(path) -> Frame:
    with open(path, encoding="utf-8") as fh:
        return loads_frame(fh.read())
