"""Line-oriented problem files.

Example::

    # comments start with '#'
    p = 2
    vars = x, y, z
    f = x^3+y^3+z^3
    g = x^2+z^4
    U = [[x*f, y*f], [x*g, y*g]]
    module V = [[x, 0], [0, x]]
    ideal P = (x, z)

``p`` and ``vars`` come first.  Any other plain ``name = polynomial`` line
defines an abbreviation usable in later lines.  ``alpha`` is optional and,
when present, must match the size of U.  ``order`` selects the monomial order
(default ``grevlex``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import AlgebraError, ParseError
from .matrix import PolyMatrix
from .modules import parse_ideal, parse_module, parse_vectors
from .ring import PrimeField, Ring, parse_polynomial

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


@dataclass
class ProblemFile:
    ring: Ring
    U: PolyMatrix
    names: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)

    @property
    def p(self):
        return self.ring.p

    @property
    def vars(self):
        return self.ring.vars

    @property
    def alpha(self):
        return self.U.rows

    def format(self):
        lines = [f"p = {self.p}", "vars = " + ", ".join(self.vars)]
        if self.ring.order != "grevlex":
            lines.append(f"order = {self.ring.order}")
        lines.append(f"alpha = {self.alpha}")
        lines.append(f"U = {self.U}")
        for name, V in self.modules.items():
            lines.append(f"module {name} = {V}")
        for name, P in self.ideals.items():
            lines.append(f"ideal {name} = {P}")
        return "\n".join(lines) + "\n"


def _split_line(raw, lineno):
    text = raw.split("#", 1)[0]
    if not text.strip():
        return None
    if "=" not in text:
        raise ParseError("expected 'key = value'", lineno, 1)
    key, value = text.split("=", 1)
    return key.strip(), value, len(key) + 1


def parse_problem(text):
    settings = {}
    ring = None
    names = {}
    U = None
    alpha = None
    modules, ideals = {}, {}
    pending = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parsed = _split_line(raw, lineno)
        if parsed is None:
            continue
        key, value, offset = parsed
        if key in ("p", "vars", "order"):
            if ring is not None:
                raise ParseError(f"'{key}' must come before the other entries", lineno, 1)
            if key in settings:
                raise ParseError(f"duplicate key '{key}'", lineno, 1)
            settings[key] = (value.strip(), lineno)
            continue
        if ring is None:
            ring = _make_ring(settings, lineno)
        parts = key.split()
        if key == "alpha":
            try:
                alpha = int(value.strip())
            except ValueError:
                raise ParseError("alpha must be a positive integer", lineno, offset + 1) from None
            if alpha < 1:
                raise ParseError("alpha must be a positive integer", lineno, offset + 1)
        elif key == "U":
            if U is not None:
                raise ParseError("duplicate key 'U'", lineno, 1)
            rows = parse_vectors(ring, value, names, lineno, offset)
            if not rows or any(len(r) != len(rows) for r in rows):
                raise ParseError("dimension mismatch: U must be a square matrix", lineno, offset + 1)
            U = PolyMatrix(ring, rows)
        elif len(parts) == 2 and parts[0] in ("module", "ideal") and _NAME.match(parts[1]):
            pending.append((parts[0], parts[1], value, lineno, offset))
        elif _NAME.match(key):
            if key in ring.vars:
                raise ParseError(f"'{key}' is a variable", lineno, 1)
            names[key] = parse_polynomial(ring, value, names, lineno, offset)
        else:
            raise ParseError(f"unknown key '{key}'", lineno, 1)
    if ring is None:
        ring = _make_ring(settings, None)
    if U is None:
        raise ParseError("missing 'U'")
    if alpha is not None and alpha != U.rows:
        raise ParseError(f"dimension mismatch: alpha = {alpha} but U is {U.rows} x {U.cols}")
    for kind, name, value, lineno, offset in pending:
        if kind == "module":
            modules[name] = parse_module(ring, value, U.rows, names, lineno, offset)
        else:
            ideals[name] = parse_ideal(ring, value, names, lineno, offset)
    return ProblemFile(ring, U, names, modules, ideals)


def _make_ring(settings, lineno):
    if "p" not in settings:
        raise ParseError("missing 'p'", lineno)
    ptext, pline = settings["p"]
    try:
        p = PrimeField(int(ptext)).p
    except (ValueError, AlgebraError):
        raise ParseError("p must be prime", pline) from None
    if "vars" not in settings:
        raise ParseError("missing 'vars'", lineno)
    variables = [v.strip() for v in settings["vars"][0].split(",") if v.strip()]
    order = settings.get("order", ("grevlex", None))[0]
    if order not in ("grevlex", "lex"):
        raise ParseError(f"unknown order '{order}'", settings["order"][1])
    try:
        return Ring(p, variables, order)
    except AlgebraError as exc:
        raise ParseError(str(exc), settings["vars"][1]) from None
