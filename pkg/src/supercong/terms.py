"""Hypergeometric summands in the outer variable ``n`` and inner variable ``k``.

A :class:`Term` is a product of factors. Every factor carries an integer
exponent ``exp``; a negative exponent puts it in the denominator.

Reciprocal gamma vanishes at its poles, so a denominator factor such as
``1/(n-k)!`` with ``n < k`` makes the whole term zero. The same pole in
the numerator is a :class:`DomainError`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .exact import pochhammer
from .polyratio import BiPoly, DomainError, RatFunc

__all__ = [
    "Binom",
    "DomainError",
    "Fact",
    "InnerSum",
    "LinForm",
    "Poch",
    "Poly",
    "Pow",
    "Sign",
    "SumExpr",
    "Term",
    "TermEvaluator",
    "UnsupportedTerm",
    "eval_term",
    "partial_sum",
    "resolve_bound",
    "shift_quotient",
    "shift_term",
    "term_ratio",
]


class UnsupportedTerm(ValueError):
    """The term has a shape the symbolic machinery does not handle."""


@dataclass(frozen=True)
class LinForm:
    """``n_coef*n + k_coef*k + const``."""

    n: int = 0
    k: int = 0
    const: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "const", Fraction(self.const))

    def __call__(self, n: int, k: Optional[int] = None) -> Fraction:
        if self.k and k is None:
            raise ValueError(f"{self} needs a value for k")
        return self.n * n + self.k * (k or 0) + self.const

    def coef(self, var: str) -> int:
        return self.n if var == "n" else self.k

    def shift(self, var: str, delta: int) -> LinForm:
        return replace(self, const=self.const + self.coef(var) * delta)

    def __add__(self, other: LinForm) -> LinForm:
        return LinForm(self.n + other.n, self.k + other.k, self.const + other.const)

    def __sub__(self, other: LinForm) -> LinForm:
        return LinForm(self.n - other.n, self.k - other.k, self.const - other.const)

    def scale(self, c: int) -> LinForm:
        return LinForm(self.n * c, self.k * c, self.const * c)

    def as_poly(self) -> BiPoly:
        return BiPoly.linear(self.n, self.k, self.const)

    def __str__(self) -> str:
        parts = []
        for coef, name in ((self.n, "n"), (self.k, "k")):
            if coef:
                mag = abs(coef)
                parts.append(("-" if coef < 0 else "+", name if mag == 1 else f"{mag}*{name}"))
        if self.const or not parts:
            parts.append(("-" if self.const < 0 else "+", str(abs(self.const))))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        return out + "".join(s + b for s, b in parts[1:])


N = LinForm(1, 0, 0)
K = LinForm(0, 1, 0)


@dataclass(frozen=True)
class Poch:
    a: Fraction
    arg: LinForm
    exp: int = 1

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))


@dataclass(frozen=True)
class Fact:
    arg: LinForm
    exp: int = 1


@dataclass(frozen=True)
class Binom:
    top: LinForm
    bottom: LinForm
    exp: int = 1


@dataclass(frozen=True)
class Pow:
    base: Fraction
    arg: LinForm
    exp: int = 1

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        if self.base == 0:
            raise ValueError("pow base must be nonzero")


@dataclass(frozen=True)
class Sign:
    """(-1)^arg."""

    arg: LinForm
    exp: int = 1


@dataclass(frozen=True)
class Poly:
    poly: BiPoly
    exp: int = 1


@dataclass(frozen=True)
class InnerSum:
    """Sum over ``k = 0..floor(n/divisor)`` of ``body``."""

    body: "Term"
    divisor: int = 1
    exp: int = 1

    def __post_init__(self):
        if self.exp != 1:
            raise UnsupportedTerm("an inner sum may only appear in the numerator")
        if self.divisor < 1:
            raise ValueError("inner sum divisor must be positive")
        if any(isinstance(f, InnerSum) for f in self.body.factors):
            raise UnsupportedTerm("inner sums may not be nested")


Factor = Union[Poch, Fact, Binom, Pow, Sign, Poly, InnerSum]


@dataclass(frozen=True)
class Term:
    factors: Tuple[Factor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if sum(isinstance(f, InnerSum) for f in self.factors) > 1:
            raise UnsupportedTerm("at most one inner sum per term")

    def __mul__(self, other: Union[Term, Factor]) -> Term:
        extra = other.factors if isinstance(other, Term) else (other,)
        return Term(self.factors + extra)

    def __truediv__(self, other: Union[Term, Factor]) -> Term:
        extra = other.factors if isinstance(other, Term) else (other,)
        return Term(self.factors + tuple(_invert(f) for f in extra))

    @property
    def inner_sum(self) -> Optional[InnerSum]:
        return next((f for f in self.factors if isinstance(f, InnerSum)), None)

    def mentions_k(self) -> bool:
        """True if ``k`` occurs outside an inner sum."""
        for f in self.factors:
            if isinstance(f, InnerSum):
                continue
            if isinstance(f, Poly):
                if f.poly.degree("k") > 0:
                    return True
            elif isinstance(f, Binom):
                if f.top.k or f.bottom.k:
                    return True
            elif f.arg.k:
                return True
        return False


def _invert(f: Factor) -> Factor:
    if isinstance(f, InnerSum):
        raise UnsupportedTerm("an inner sum may only appear in the numerator")
    return replace(f, exp=-f.exp)


@dataclass(frozen=True)
class SumExpr:
    """Sum over ``n = 0..upper`` where ``upper`` is ``"p-1"``, ``"(p-1)/2"`` or an int."""

    body: Term
    upper: Union[str, int] = "p-1"

    def __post_init__(self):
        if self.upper not in ("p-1", "(p-1)/2") and not isinstance(self.upper, int):
            raise ValueError(f"malformed bound {self.upper!r}")


def resolve_bound(upper: Union[str, int], value: int) -> int:
    if upper == "p-1":
        return value - 1
    if upper == "(p-1)/2":
        return (value - 1) // 2
    return int(upper)


# --- evaluation -------------------------------------------------------------

_POLE = None


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise DomainError(f"{what} evaluates to non-integer {x}")
    return x.numerator


def _poch_general(a: Fraction, m: int) -> Optional[Fraction]:
    """Gamma(a+m)/Gamma(a) for any integer m; ``None`` at a pole of Gamma(a+m)."""
    if m >= 0:
        return pochhammer(a, m)
    d = pochhammer(a + m, -m)
    if d == 0:
        return _POLE
    return 1 / d


class TermEvaluator:
    """Evaluates one term at many points, reusing rising products between calls.

    Queries with growing Pochhammer arguments (a sweep over ``n`` with ``k``
    fixed, say) cost one multiplication per step instead of a full product.
    """

    def __init__(self, term: Term, k: Optional[int] = None):
        self.term = term
        self.k = k
        self._memo: Dict[int, Tuple[int, Fraction]] = {}

    def _poch(self, idx: int, a: Fraction, m: int) -> Optional[Fraction]:
        if m < 0:
            return _poch_general(a, m)
        last = self._memo.get(idx)
        if last is not None and last[0] <= m:
            m0, v0 = last
            val = v0 * pochhammer(a + m0, m - m0) if m > m0 else v0
        else:
            val = pochhammer(a, m)
        self._memo[idx] = (m, val)
        return val

    def at(self, n: int, k: Optional[int] = None) -> Fraction:
        if k is None:
            k = self.k
        if k is None and self.term.mentions_k():
            raise ValueError("term mentions k; supply a value")
        num, den = 1, 1
        numerator_pole = None
        for idx, f in enumerate(self.term.factors):
            if isinstance(f, InnerSum):
                val = self._inner(f, n)
            elif isinstance(f, (Poch, Fact)):
                a = f.a if isinstance(f, Poch) else Fraction(1)
                m = _as_int(f.arg(n, k), "pochhammer argument")
                val = self._poch(idx, a, m)
            elif isinstance(f, Binom):
                top = _as_int(f.top(n, k), "binomial top")
                bot = _as_int(f.bottom(n, k), "binomial bottom")
                if top < 0:
                    raise DomainError(f"binomial with negative top {top}")
                val = Fraction(math.comb(top, bot) if 0 <= bot <= top else 0)
            elif isinstance(f, Pow):
                e = _as_int(f.arg(n, k), "power exponent")
                b = f.base
                val = Fraction(b.numerator**e, b.denominator**e) if e >= 0 else 1 / b ** (-e)
            elif isinstance(f, Sign):
                val = Fraction(-1 if _as_int(f.arg(n, k), "sign exponent") % 2 else 1)
            elif isinstance(f, Poly):
                val = f.poly(n, k or 0)
            else:  # pragma: no cover
                raise TypeError(f"unknown factor {f!r}")

            if val is _POLE:
                if f.exp < 0:
                    return Fraction(0)
                numerator_pole = f
                continue
            if f.exp > 0:
                num *= val.numerator**f.exp
                den *= val.denominator**f.exp
            else:
                if val == 0:
                    raise DomainError(f"factor {f} vanishes in a denominator")
                num *= val.denominator ** (-f.exp)
                den *= val.numerator ** (-f.exp)
        if numerator_pole is not None:
            raise DomainError(f"gamma pole in numerator factor {numerator_pole}")
        return Fraction(num, den)

    def _inner(self, f: InnerSum, n: int) -> Fraction:
        ev = TermEvaluator(f.body)
        return sum((ev.at(n, j) for j in range(n // f.divisor + 1)), Fraction(0))


def eval_term(t: Term, n: int, k: Optional[int] = None) -> Fraction:
    return TermEvaluator(t).at(n, k)


def iter_values(t: Term, stop: int, k: Optional[int] = None, start: int = 0) -> Iterator[Fraction]:
    """Values of ``t`` at ``n = start..stop-1`` (``k`` fixed)."""
    ev = TermEvaluator(t, k)
    for n in range(start, stop):
        yield ev.at(n)


def sum_range(t: Term, upper: int, k: Optional[int] = None) -> Fraction:
    """Exact ``sum_{n=0}^{upper} t(n, k)``."""
    return _fsum(iter_values(t, upper + 1, k))


def _fsum(values) -> Fraction:
    # Pairwise summation keeps intermediate denominators balanced.
    vals = list(values)
    if not vals:
        return Fraction(0)
    while len(vals) > 1:
        nxt = [a + b for a, b in zip(vals[::2], vals[1::2])]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def partial_sum(s: SumExpr, p_or_N: int) -> Fraction:
    return sum_range(s.body, resolve_bound(s.upper, p_or_N))


# --- symbolic ratios --------------------------------------------------------


def shift_term(t: Term, var: str, delta: int) -> Term:
    """The term with ``var`` replaced by ``var + delta``."""
    out: List[Factor] = []
    for f in t.factors:
        if isinstance(f, InnerSum):
            raise UnsupportedTerm("cannot shift a term containing an inner sum")
        if isinstance(f, Binom):
            out.append(replace(f, top=f.top.shift(var, delta), bottom=f.bottom.shift(var, delta)))
        elif isinstance(f, Poly):
            dn, dk = (delta, 0) if var == "n" else (0, delta)
            out.append(replace(f, poly=f.poly.substitute(dn, dk)))
        else:
            out.append(replace(f, arg=f.arg.shift(var, delta)))
    return Term(tuple(out))


def _gamma_like(t: Term, sign: int) -> List[Tuple[Fraction, LinForm, int]]:
    """(a, arg, exponent) triples with binomials expanded into factorials."""
    out = []
    for f in t.factors:
        if isinstance(f, Poch):
            out.append((f.a, f.arg, sign * f.exp))
        elif isinstance(f, Fact):
            out.append((Fraction(1), f.arg, sign * f.exp))
        elif isinstance(f, Binom):
            e = sign * f.exp
            out.append((Fraction(1), f.top, e))
            out.append((Fraction(1), f.bottom, -e))
            out.append((Fraction(1), f.top - f.bottom, -e))
    return out


def term_ratio(a: Term, b: Term) -> RatFunc:
    """``a/b`` as a rational function of (n, k).

    Defined when both terms are built from the same hypergeometric blocks
    with arguments differing by integer constants.
    """
    if a.inner_sum is not None or b.inner_sum is not None:
        raise UnsupportedTerm("inner sums have no shift quotient")
    num, den = BiPoly.const(1), BiPoly.const(1)
    scalar = Fraction(1)

    groups: Dict[Tuple[Fraction, int, int], List[Tuple[Fraction, int]]] = {}
    for alpha, arg, e in _gamma_like(a, 1) + _gamma_like(b, -1):
        groups.setdefault((alpha, arg.n, arg.k), []).append((arg.const, e))
    for (alpha, cn, ck), entries in groups.items():
        if sum(e for _, e in entries) != 0:
            raise UnsupportedTerm(f"pochhammer block ({alpha})_{{{cn}n+{ck}k+c}} does not cancel")
        c0 = min(c for c, _ in entries)
        for c, e in entries:
            d = c - c0
            if d.denominator != 1:
                raise UnsupportedTerm("pochhammer arguments differ by a non-integer")
            block = BiPoly.const(1)
            for j in range(int(d)):
                block = block * BiPoly.linear(cn, ck, alpha + c0 + j)
            if e > 0:
                num = num * block**e
            else:
                den = den * block ** (-e)

    exps: Dict[Fraction, LinForm] = {}
    sign_total = LinForm()
    for t, s in ((a, 1), (b, -1)):
        for f in t.factors:
            if isinstance(f, Pow):
                exps[f.base] = exps.get(f.base, LinForm()) + f.arg.scale(s * f.exp)
            elif isinstance(f, Sign):
                sign_total = sign_total + f.arg.scale(f.exp)
            elif isinstance(f, Poly):
                if s * f.exp > 0:
                    num = num * f.poly ** (s * f.exp)
                else:
                    den = den * f.poly ** (-s * f.exp)
    for base, lf in exps.items():
        if lf.n or lf.k or lf.const.denominator != 1:
            raise UnsupportedTerm(f"power of {base} does not reduce to a constant")
        scalar *= base ** int(lf.const)
    if sign_total.n % 2 or sign_total.k % 2 or sign_total.const.denominator != 1:
        raise UnsupportedTerm("sign factors do not reduce to a constant")
    if int(sign_total.const) % 2:
        scalar = -scalar
    return RatFunc(num * scalar, den)


def shift_quotient(t: Term, var: str, delta: int) -> RatFunc:
    """``t(var+delta)/t(var)``."""
    if var not in ("n", "k") or delta not in (1, -1):
        raise ValueError("shift must be n or k by +1 or -1")
    return term_ratio(shift_term(t, var, delta), t)
