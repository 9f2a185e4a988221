"""Curve spec files: flat ``key=value`` text with bracketed integer lists.

Example::

    p=3 d=1 model=hyperelliptic f_coeffs=[0,1,0,1]   # y^2 = x^3 + x
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .arith import is_prime
from .counting import CurveHandle
from .errors import AnabeliaError, ParseError, ValidationError
from .field import gf
from .hyperelliptic import DEFAULT_BUDGET, DEFAULT_CLASS_CAP, HyperellipticCurve
from .poly import Polynomial

KEYS = ("p", "d", "model", "f_coeffs", "tower_ell", "budget", "class_cap", "seed")
INT_KEYS = {"p", "d", "tower_ell", "budget", "class_cap", "seed"}
BUDGET_ENV = "ANABELIA_BUDGET"


@dataclass(frozen=True)
class CurveConfig:
    p: int
    d: int = 1
    model: str = "rational"
    f_coeffs: tuple | None = None
    tower_ell: int | None = None  # 2, or 3 when p = 2
    budget: int = DEFAULT_BUDGET
    class_cap: int = DEFAULT_CLASS_CAP
    seed: int = 0

    def __post_init__(self):
        if self.tower_ell is None:
            object.__setattr__(self, "tower_ell", 3 if self.p == 2 else 2)

    def handle(self) -> CurveHandle:
        if self.model == "rational":
            return CurveHandle.rational(self.p, self.d)
        F = gf(self.p, self.d)
        f = Polynomial(F, [F.coerce(c) for c in self.f_coeffs])
        return CurveHandle.hyperelliptic(HyperellipticCurve(F, f))

    def canonical(self) -> str:
        lines = [f"p={self.p}", f"d={self.d}", f"model={self.model}"]
        if self.f_coeffs is not None:
            lines.append("f_coeffs=[" + ",".join(str(c) for c in self.f_coeffs) + "]")
        lines += [f"tower_ell={self.tower_ell}", f"budget={self.budget}",
                  f"class_cap={self.class_cap}", f"seed={self.seed}"]
        return "\n".join(lines) + "\n"

    def with_budget_env(self, environ=None) -> "CurveConfig":
        env = os.environ if environ is None else environ
        raw = env.get(BUDGET_ENV)
        if not raw:
            return self
        try:
            b = int(raw)
        except ValueError:
            raise ValidationError(f"{BUDGET_ENV}={raw!r} is not an integer") from None
        if b < 1:
            raise ValidationError(f"{BUDGET_ENV} must be positive")
        return CurveConfig(self.p, self.d, self.model, self.f_coeffs, self.tower_ell, b,
                           self.class_cap, self.seed)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self.line = 1
        self.col = 1

    def peek(self):
        return self.text[self.i] if self.i < len(self.text) else ""

    def advance(self):
        ch = self.text[self.i]
        self.i += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def error(self, msg, line=None, col=None):
        return ParseError(msg, line or self.line, col or self.col)

    def skip_blank(self, newlines=True):
        while True:
            ch = self.peek()
            if ch == "#":
                while self.peek() not in ("", "\n"):
                    self.advance()
            elif ch and ch.isspace() and (newlines or ch != "\n"):
                self.advance()
            else:
                return

    def word(self):
        start = self.i
        while self.peek() and (self.peek().isalnum() or self.peek() in "_-+"):
            self.advance()
        return self.text[start:self.i]

    def int_list(self):
        line, col = self.line, self.col
        self.advance()
        items = []
        while True:
            self.skip_blank()
            if self.peek() == "]":
                self.advance()
                return items
            if items:
                if self.peek() != ",":
                    raise self.error("expected ',' or ']'")
                self.advance()
                self.skip_blank()
            tl, tc = self.line, self.col
            tok = self.word()
            if not tok:
                if not self.peek():
                    raise self.error("unterminated list", line, col)
                raise self.error(f"unexpected {self.peek()!r} in list")
            try:
                items.append(int(tok))
            except ValueError:
                raise self.error(f"{tok!r} is not an integer", tl, tc) from None


def _scan(text: str) -> dict:
    s = _Scanner(text)
    out = {}
    while True:
        s.skip_blank()
        if not s.peek():
            return out
        kl, kc = s.line, s.col
        key = s.word()
        if not key:
            raise s.error(f"unexpected character {s.peek()!r}")
        if key not in KEYS:
            raise s.error(f"unknown key {key!r}", kl, kc)
        if key in out:
            raise s.error(f"duplicate key {key!r}", kl, kc)
        s.skip_blank(newlines=False)
        if s.peek() != "=":
            raise s.error(f"expected '=' after {key!r}")
        s.advance()
        s.skip_blank(newlines=False)
        vl, vc = s.line, s.col
        if s.peek() == "[":
            out[key] = (s.int_list(), vl, vc)
        elif s.peek() == '"':
            s.advance()
            start = s.i
            while s.peek() not in ('"', "", "\n"):
                s.advance()
            if s.peek() != '"':
                raise s.error("unterminated string", vl, vc)
            val = s.text[start:s.i]
            s.advance()
            out[key] = (val, vl, vc)
        else:
            tok = s.word()
            if not tok:
                raise s.error(f"missing value for {key!r}")
            out[key] = (tok, vl, vc)


def parse_curve_spec(text: str) -> CurveConfig:
    """Parse and validate; ParseError carries line/column, ValidationError the invariant."""
    raw = _scan(text)
    vals = {}
    for key, (v, line, col) in raw.items():
        if key in INT_KEYS:
            if isinstance(v, list):
                raise ParseError(f"{key} expects an integer", line, col)
            try:
                vals[key] = int(v)
            except ValueError:
                raise ParseError(f"{key}={v!r} is not an integer", line, col) from None
        elif key == "f_coeffs":
            if not isinstance(v, list):
                raise ParseError("f_coeffs expects a bracketed list", line, col)
            vals[key] = tuple(v)
        else:
            if isinstance(v, list):
                raise ParseError(f"{key} expects a word", line, col)
            vals[key] = v
    if "p" not in vals:
        raise ValidationError("missing required key p")
    cfg = CurveConfig(**vals)
    validate(cfg)
    return cfg


def validate(cfg: CurveConfig):
    if not is_prime(cfg.p):
        raise ValidationError(f"p = {cfg.p} is not prime")
    if cfg.d < 1:
        raise ValidationError(f"d = {cfg.d} must be >= 1")
    if cfg.model not in ("rational", "hyperelliptic"):
        raise ValidationError(f"model {cfg.model!r} must be rational or hyperelliptic")
    if not is_prime(cfg.tower_ell) or cfg.tower_ell == cfg.p:
        raise ValidationError(f"tower_ell = {cfg.tower_ell} must be a prime other than p")
    if cfg.budget < 1 or cfg.class_cap < 1:
        raise ValidationError("budget and class_cap must be positive")
    if cfg.model == "rational":
        if cfg.f_coeffs is not None:
            raise ValidationError("f_coeffs is only meaningful for the hyperelliptic model")
        return
    if cfg.p == 2:
        raise ValidationError("hyperelliptic model needs odd characteristic")
    if not cfg.f_coeffs:
        raise ValidationError("hyperelliptic model needs f_coeffs")
    try:
        cfg.handle()
    except ValidationError:
        raise
    except AnabeliaError as ex:
        raise ValidationError(str(ex)) from None
