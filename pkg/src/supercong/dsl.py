"""The ``.cdb`` congruence language.

A file is a sequence of blocks::

    congruence A01b {
      status = conjectural
      for = p > 2
      lhs = sum n in 0..p-1 of poch(1/2,n)^3 / fact(n)^3 * (4*n+1) * sign(n)
      rhs = L(-1) * p
      mod = p^3
    }

``#`` starts a comment running to the end of the line. :func:`serialize`
emits the canonical form, and ``parse_specs(serialize(specs)) == specs``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import FrozenSet, Iterable, List, NamedTuple, Optional, Tuple, Union

from .polyratio import BiPoly, format_poly
from .terms import (
    Binom,
    Fact,
    Factor,
    InnerSum,
    LinForm,
    Poch,
    Poly,
    Pow,
    Sign,
    SumExpr,
    Term,
)

__all__ = [
    "CongruenceSpec",
    "ParseError",
    "RhsExpr",
    "parse_spec",
    "parse_specs",
    "parse_term",
    "serialize",
    "serialize_spec",
    "serialize_term",
]

STATUSES = ("proved", "conjectural", "partial")


@dataclass(frozen=True)
class RhsExpr:
    """``coefficient * (disc/p) * p^p_power``; ``legendre_disc=None`` means no symbol."""

    coefficient: int = 1
    legendre_disc: Optional[int] = None
    p_power: int = 1

    def __post_init__(self):
        if self.coefficient == 0:
            raise ValueError("rhs coefficient must be nonzero")
        if self.p_power < 1:
            raise ValueError("rhs power of p must be at least 1")


@dataclass(frozen=True)
class CongruenceSpec:
    id: str
    lhs: SumExpr
    rhs: RhsExpr
    modulus_exponent: int
    prime_condition: int = 2
    status: str = "conjectural"
    partial_order: Optional[int] = None
    equivalents: Tuple[str, ...] = ()
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "equivalents", tuple(self.equivalents))
        if self.modulus_exponent < 1:
            raise ValueError(f"{self.id}: modulus exponent must be >= 1")
        if self.status not in STATUSES:
            raise ValueError(f"{self.id}: unknown status {self.status!r}")
        if self.status == "partial":
            if self.partial_order is None or not 0 < self.partial_order < self.modulus_exponent:
                raise ValueError(f"{self.id}: partial order must lie strictly below the modulus")
        elif self.partial_order is not None:
            raise ValueError(f"{self.id}: partial order given for status {self.status}")
        if self.lhs.upper not in ("p-1", "(p-1)/2"):
            raise ValueError(f"{self.id}: lhs bound must be p-1 or (p-1)/2")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected: Iterable[str] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected: FrozenSet[str] = frozenset(expected)
        text = f"{line}:{col}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(text)


# --- lexer ------------------------------------------------------------------


class Token(NamedTuple):
    kind: str  # INT, IDENT, STRING, OP, EOF
    value: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<STRING>"(?:\\.|[^"\\\n])*")
  | (?P<dots>\.\.)
  | (?P<INT>\d+)
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<OP>[{}()\[\],*/^+\-=>])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "dots":
            tokens.append(Token("OP", "..", line, col))
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


# --- parser -----------------------------------------------------------------

_FUNCTIONS = ("poch", "fact", "binom", "pow", "sign", "sum")
_FIELDS = ("status", "for", "lhs", "rhs", "mod", "note", "equiv")


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def at(self, value: str) -> bool:
        t = self.tok
        return t.kind in ("OP", "IDENT") and t.value == value

    def error(self, message: str, expected: Iterable[str] = ()) -> ParseError:
        t = self.tok
        return ParseError(message, t.line, t.col, expected)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, *values: str) -> Token:
        if any(self.at(v) for v in values):
            return self.advance()
        found = self.tok.value or "end of input"
        raise self.error(f"unexpected {found!r}", [repr(v) for v in values])

    def expect_kind(self, kind: str) -> Token:
        if self.tok.kind != kind:
            found = self.tok.value or "end of input"
            raise self.error(f"unexpected {found!r}", [kind])
        return self.advance()

    def integer(self) -> int:
        return int(self.expect_kind("INT").value)

    def signed_int(self) -> int:
        neg = bool(self.at("-") and self.advance())
        v = self.integer()
        return -v if neg else v

    def rational(self) -> Fraction:
        num = self.signed_int()
        if self.at("/"):
            self.advance()
            den = self.integer()
            if den == 0:
                raise self.error("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    # blocks

    def specs(self) -> List[CongruenceSpec]:
        out = []
        while self.tok.kind != "EOF":
            out.append(self.block())
        return out

    def block(self) -> CongruenceSpec:
        start = self.expect("congruence")
        ident = self.expect_kind("IDENT").value
        self.expect("{")
        seen = {}
        while not self.at("}"):
            if self.tok.kind != "IDENT" or self.tok.value not in _FIELDS:
                found = self.tok.value or "end of input"
                raise self.error(f"unexpected {found!r}", [repr(f) for f in _FIELDS] + ["'}'"])
            name_tok = self.advance()
            name = name_tok.value
            if name in seen:
                raise ParseError(f"duplicate field {name!r}", name_tok.line, name_tok.col)
            self.expect("=")
            seen[name] = getattr(self, "field_" + name)()
        self.expect("}")
        for required in ("lhs", "rhs", "mod"):
            if required not in seen:
                raise ParseError(f"congruence {ident} lacks field {required!r}", start.line, start.col)
        status, partial = seen.get("status", ("conjectural", None))
        try:
            return CongruenceSpec(
                id=ident,
                lhs=seen["lhs"],
                rhs=seen["rhs"],
                modulus_exponent=seen["mod"],
                prime_condition=seen.get("for", 2),
                status=status,
                partial_order=partial,
                equivalents=seen.get("equiv", ()),
                note=seen.get("note", ""),
            )
        except ValueError as exc:
            raise ParseError(str(exc), start.line, start.col) from None

    def field_status(self):
        t = self.expect(*STATUSES)
        if t.value == "partial":
            self.expect("(")
            order = self.integer()
            self.expect(")")
            return "partial", order
        return t.value, None

    def field_for(self) -> int:
        self.expect("p")
        self.expect(">")
        return self.integer()

    def field_lhs(self) -> SumExpr:
        self.expect("sum")
        self.expect("n")
        self.expect("in")
        if self.expect_kind("INT").value != "0":
            raise self.error("sums start at n = 0", ["'0'"])
        self.expect("..")
        upper = self.bound()
        self.expect("of")
        return SumExpr(self.term(), upper)

    def bound(self) -> Union[str, int]:
        if self.at("p"):
            self.advance()
            self.expect("-")
            self._expect_one()
            return "p-1"
        if self.at("("):
            self.advance()
            self.expect("p")
            self.expect("-")
            self._expect_one()
            self.expect(")")
            self.expect("/")
            if self.integer() != 2:
                raise self.error("malformed bound", ["'2'"])
            return "(p-1)/2"
        raise self.error("malformed bound", ["'p-1'", "'(p-1)/2'"])

    def _expect_one(self) -> None:
        if self.tok.kind != "INT" or self.tok.value != "1":
            raise self.error("malformed bound", ["'1'"])
        self.advance()

    def field_rhs(self) -> RhsExpr:
        coef, disc, power = 1, None, 1
        if self.tok.kind == "INT" or self.at("-"):
            coef = self.signed_int()
            self.expect("*")
        if self.at("L"):
            self.advance()
            self.expect("(")
            disc = self.signed_int()
            self.expect(")")
            self.expect("*")
        self.expect("p")
        if self.at("^"):
            self.advance()
            power = self.integer()
        try:
            return RhsExpr(coef, disc, power)
        except ValueError as exc:
            raise self.error(str(exc)) from None

    def field_mod(self) -> int:
        self.expect("p")
        self.expect("^")
        return self.integer()

    def field_note(self) -> str:
        return json.loads(self.expect_kind("STRING").value)

    def field_equiv(self) -> Tuple[str, ...]:
        ids = [self.expect_kind("IDENT").value]
        while self.at(","):
            self.advance()
            ids.append(self.expect_kind("IDENT").value)
        return tuple(ids)

    # terms

    def term(self) -> Term:
        factors: List[Factor] = []
        self._factor_into(factors, 1)
        while self.at("*") or self.at("/"):
            sign = 1 if self.advance().value == "*" else -1
            self._factor_into(factors, sign)
        return Term(tuple(factors))

    def _factor_into(self, factors: List[Factor], sign: int) -> None:
        t = self.tok
        f = self.factor()
        if f is None:  # literal 1
            return
        if sign < 0:
            if isinstance(f, InnerSum):
                raise ParseError("an inner sum may only appear in the numerator", t.line, t.col)
            f = replace(f, exp=-f.exp)
        factors.append(f)

    def _power(self) -> int:
        if self.at("^"):
            self.advance()
            e = self.integer()
            if e == 0:
                raise self.error("zero exponent")
            return e
        return 1

    def factor(self) -> Optional[Factor]:
        t = self.tok
        if t.kind == "IDENT" and self.peek().kind == "OP" and self.peek().value == "(":
            if t.value not in _FUNCTIONS:
                raise self.error(f"unknown function {t.value!r}", [repr(f) for f in _FUNCTIONS])
            self.advance()
            self.expect("(")
            return getattr(self, "func_" + t.value)()
        if t.kind == "INT" or self.at("(") or self.at("n") or self.at("k"):
            if t.kind == "INT" and t.value == "1" and not (self.peek().kind == "OP" and self.peek().value == "^"):
                self.advance()
                return None
            poly = self.poly_atom()
            return Poly(poly, self._power())
        found = t.value or "end of input"
        raise self.error(f"unexpected {found!r}", [repr(f) for f in _FUNCTIONS] + ["polynomial"])

    def func_poch(self) -> Poch:
        a = self.rational()
        self.expect(",")
        arg = self.lin()
        self.expect(")")
        return Poch(a, arg, self._power())

    def func_fact(self) -> Fact:
        arg = self.lin()
        self.expect(")")
        return Fact(arg, self._power())

    def func_binom(self) -> Binom:
        top = self.lin()
        self.expect(",")
        bottom = self.lin()
        self.expect(")")
        return Binom(top, bottom, self._power())

    def func_pow(self) -> Pow:
        base = self.rational()
        if base == 0:
            raise self.error("pow base must be nonzero")
        self.expect(",")
        arg = self.lin()
        self.expect(")")
        return Pow(base, arg, self._power())

    def func_sign(self) -> Sign:
        arg = self.lin()
        self.expect(")")
        return Sign(arg)

    def func_sum(self) -> InnerSum:
        self.expect("k")
        self.expect("=")
        if self.expect_kind("INT").value != "0":
            raise self.error("inner sums start at k = 0", ["'0'"])
        self.expect("..")
        if self.at("n"):
            self.advance()
            divisor = 1
        elif self.at("floor"):
            self.advance()
            self.expect("(")
            self.expect("n")
            self.expect("/")
            divisor = self.integer()
            if divisor < 1:
                raise self.error("floor divisor must be positive")
            self.expect(")")
        else:
            raise self.error("malformed inner bound", ["'n'", "'floor(n/INT)'"])
        self.expect(")")
        self.expect("{")
        body = self.term()
        self.expect("}")
        if body.inner_sum is not None:
            raise self.error("inner sums may not be nested")
        return InnerSum(body, divisor)

    def lin(self) -> LinForm:
        neg = bool(self.at("-") and self.advance())
        total = self._lin_atom(-1 if neg else 1)
        while self.at("+") or self.at("-"):
            s = 1 if self.advance().value == "+" else -1
            total = total + self._lin_atom(s)
        return total

    def _lin_atom(self, sign: int) -> LinForm:
        if self.at("n") or self.at("k"):
            v = self.advance().value
            return LinForm(sign, 0) if v == "n" else LinForm(0, sign)
        c = self.integer() * sign
        if self.at("*"):
            self.advance()
            v = self.expect("n", "k").value
            return LinForm(c, 0) if v == "n" else LinForm(0, c)
        return LinForm(0, 0, c)

    def poly_expr(self) -> BiPoly:
        neg = bool(self.at("-") and self.advance())
        total = self.poly_mul()
        if neg:
            total = -total
        while self.at("+") or self.at("-"):
            s = self.advance().value
            rhs = self.poly_mul()
            total = total + rhs if s == "+" else total - rhs
        return total

    def poly_mul(self) -> BiPoly:
        out = self.poly_pow()
        while self.at("*"):
            self.advance()
            out = out * self.poly_pow()
        return out

    def poly_pow(self) -> BiPoly:
        base = self.poly_atom()
        if self.at("^"):
            self.advance()
            return base ** self.integer()
        return base

    def poly_atom(self) -> BiPoly:
        if self.tok.kind == "INT":
            return BiPoly.const(self.integer())
        if self.at("n") or self.at("k"):
            return BiPoly.var(self.advance().value)
        if self.at("("):
            self.advance()
            inner = self.poly_expr()
            self.expect(")")
            return inner
        raise self.error("malformed polynomial", ["INT", "'n'", "'k'", "'('"])


def parse_specs(text: str) -> List[CongruenceSpec]:
    """Parse every ``congruence`` block in ``text``."""
    return _Parser(text).specs()


def parse_spec(text: str) -> CongruenceSpec:
    specs = parse_specs(text)
    if len(specs) != 1:
        raise ParseError(f"expected exactly one congruence block, found {len(specs)}", 1, 1)
    return specs[0]


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "EOF":
        raise p.error(f"unexpected {p.tok.value!r}", ["'*'", "'/'", "end of input"])
    return t


# --- serializer -------------------------------------------------------------


def _rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _pow_suffix(e: int) -> str:
    return "" if abs(e) == 1 else f"^{abs(e)}"


def _factor_text(f: Factor) -> str:
    if isinstance(f, Poch):
        return f"poch({_rat(f.a)},{f.arg}){_pow_suffix(f.exp)}"
    if isinstance(f, Fact):
        return f"fact({f.arg}){_pow_suffix(f.exp)}"
    if isinstance(f, Binom):
        return f"binom({f.top},{f.bottom}){_pow_suffix(f.exp)}"
    if isinstance(f, Pow):
        return f"pow({_rat(f.base)},{f.arg}){_pow_suffix(f.exp)}"
    if isinstance(f, Sign):
        return f"sign({f.arg})"
    if isinstance(f, Poly):
        if not f.poly.is_integral():
            raise ValueError("only integer polynomials have a textual form")
        coeffs = f.poly.coeffs
        if list(coeffs) == [(0, 0)] and coeffs[(0, 0)] > 1:
            body = str(coeffs[(0, 0)])
        else:
            body = f"({format_poly(f.poly)})"
        return body + _pow_suffix(f.exp)
    if isinstance(f, InnerSum):
        upper = "n" if f.divisor == 1 else f"floor(n/{f.divisor})"
        return f"sum(k=0..{upper}){{{serialize_term(f.body)}}}"
    raise TypeError(f"unknown factor {f!r}")


def serialize_term(t: Term) -> str:
    if not t.factors:
        return "1"
    out = ""
    for i, f in enumerate(t.factors):
        text = _factor_text(f)
        if f.exp < 0:
            out += ("1 / " if i == 0 else " / ") + text
        else:
            out += ("" if i == 0 else " * ") + text
    return out


def _rhs_text(r: RhsExpr) -> str:
    parts = []
    if r.coefficient != 1:
        parts.append(str(r.coefficient))
    if r.legendre_disc is not None:
        parts.append(f"L({r.legendre_disc})")
    parts.append("p" if r.p_power == 1 else f"p^{r.p_power}")
    return " * ".join(parts)


def serialize_spec(s: CongruenceSpec) -> str:
    status = f"partial({s.partial_order})" if s.status == "partial" else s.status
    lines = [
        f"congruence {s.id} {{",
        f"  status = {status}",
        f"  for = p > {s.prime_condition}",
        f"  lhs = sum n in 0..{s.lhs.upper} of {serialize_term(s.lhs.body)}",
        f"  rhs = {_rhs_text(s.rhs)}",
        f"  mod = p^{s.modulus_exponent}",
    ]
    if s.equivalents:
        lines.append(f"  equiv = {', '.join(s.equivalents)}")
    if s.note:
        lines.append(f"  note = {json.dumps(s.note, ensure_ascii=False)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize(specs: Iterable[CongruenceSpec]) -> str:
    return "\n".join(serialize_spec(s) for s in specs)
