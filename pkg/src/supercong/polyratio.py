"""Bivariate polynomials and rational functions in ``n`` and ``k`` over Q.

Equality of rational functions is decided by cross-multiplication, so no
polynomial GCD is ever needed.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

__all__ = ["BiPoly", "DomainError", "PoleError", "RatFunc", "arith", "eval_at", "ratfunc_equal"]

Monomial = Tuple[int, int]
Scalar = Union[int, Fraction]


class DomainError(ArithmeticError):
    """An operation was applied outside its domain (e.g. division by zero)."""


class PoleError(DomainError):
    """A rational function was evaluated where its denominator vanishes."""


class BiPoly:
    """Sparse polynomial: ``{(deg_n, deg_k): coefficient}`` with no zero entries."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Dict[Monomial, Scalar] | Iterable[Tuple[Monomial, Scalar]] = ()):
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        c: Dict[Monomial, Fraction] = {}
        for mono, val in items:
            val = c.get(mono, 0) + Fraction(val)
            if val:
                c[mono] = val
            else:
                c.pop(mono, None)
        self._c = c

    @classmethod
    def const(cls, value: Scalar) -> BiPoly:
        return cls({(0, 0): value})

    @classmethod
    def var(cls, name: str) -> BiPoly:
        return cls({(1, 0) if name == "n" else (0, 1): 1})

    @classmethod
    def linear(cls, n_coef: Scalar, k_coef: Scalar, const: Scalar) -> BiPoly:
        return cls({(1, 0): n_coef, (0, 1): k_coef, (0, 0): const})

    @property
    def coeffs(self) -> Dict[Monomial, Fraction]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def degree(self, var: str) -> int:
        i = 0 if var == "n" else 1
        return max((m[i] for m in self._c), default=-1)

    def __add__(self, other) -> BiPoly:
        other = _as_poly(other)
        return BiPoly(list(self._c.items()) + list(other._c.items()))

    __radd__ = __add__

    def __neg__(self) -> BiPoly:
        return BiPoly({m: -v for m, v in self._c.items()})

    def __sub__(self, other) -> BiPoly:
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> BiPoly:
        return _as_poly(other) - self

    def __mul__(self, other) -> BiPoly:
        other = _as_poly(other)
        out: Dict[Monomial, Fraction] = {}
        for (a, b), u in self._c.items():
            for (c, d), v in other._c.items():
                key = (a + c, b + d)
                out[key] = out.get(key, 0) + u * v
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> BiPoly:
        if e < 0:
            raise ValueError("negative polynomial power")
        result, base = BiPoly.const(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __call__(self, n: Scalar, k: Scalar = 0) -> Fraction:
        n, k = Fraction(n), Fraction(k)
        return sum((v * n**a * k**b for (a, b), v in self._c.items()), Fraction(0))

    def substitute(self, dn: Scalar = 0, dk: Scalar = 0) -> BiPoly:
        """The polynomial P(n + dn, k + dk)."""
        n_sh = BiPoly.linear(1, 0, dn)
        k_sh = BiPoly.linear(0, 1, dk)
        out = BiPoly()
        for (a, b), v in self._c.items():
            out = out + (n_sh**a) * (k_sh**b) * v
        return out

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._c.values())

    def __repr__(self) -> str:
        return f"BiPoly({self})"

    def __str__(self) -> str:
        return format_poly(self)


def _as_poly(x) -> BiPoly:
    if isinstance(x, BiPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return BiPoly.const(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a polynomial")


def format_poly(p: BiPoly) -> str:
    """``120*n^2-84*n*k+3`` style, highest total degree first."""
    if p.is_zero():
        return "0"
    parts = []
    for (a, b), v in sorted(p.coeffs.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])):
        vars_ = [s if e == 1 else f"{s}^{e}" for s, e in (("n", a), ("k", b)) if e]
        mag = abs(v)
        if vars_:
            head = "" if mag == 1 else f"{mag}*"
            body = head + "*".join(vars_)
        else:
            body = str(mag)
        sign = "-" if v < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


class RatFunc:
    """``num/den`` with ``den != 0``; not kept in lowest terms."""

    __slots__ = ("num", "den")
    __hash__ = None

    def __init__(self, num, den=1):
        num, den = _as_poly(num), _as_poly(den)
        if den.is_zero():
            raise DomainError("rational function with zero denominator")
        self.num = num
        self.den = den

    def __add__(self, other) -> RatFunc:
        return arith(self, other, "add")

    def __radd__(self, other) -> RatFunc:
        return arith(other, self, "add")

    def __sub__(self, other) -> RatFunc:
        return arith(self, other, "sub")

    def __rsub__(self, other) -> RatFunc:
        return arith(other, self, "sub")

    def __mul__(self, other) -> RatFunc:
        return arith(self, other, "mul")

    def __rmul__(self, other) -> RatFunc:
        return arith(other, self, "mul")

    def __truediv__(self, other) -> RatFunc:
        return arith(self, other, "div")

    def __rtruediv__(self, other) -> RatFunc:
        return arith(other, self, "div")

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den)

    def __eq__(self, other) -> bool:
        try:
            return ratfunc_equal(self, _as_ratfunc(other))
        except TypeError:
            return NotImplemented

    def __call__(self, n: Scalar, k: Scalar = 0) -> Fraction:
        return eval_at(self, n, k)

    def __repr__(self) -> str:
        return f"RatFunc(({self.num}) / ({self.den}))"


def _as_ratfunc(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    return RatFunc(_as_poly(x))


def arith(f, g, op: str) -> RatFunc:
    f, g = _as_ratfunc(f), _as_ratfunc(g)
    if op == "add":
        if f.den == g.den:
            return RatFunc(f.num + g.num, f.den)
        return RatFunc(f.num * g.den + g.num * f.den, f.den * g.den)
    if op == "sub":
        if f.den == g.den:
            return RatFunc(f.num - g.num, f.den)
        return RatFunc(f.num * g.den - g.num * f.den, f.den * g.den)
    if op == "mul":
        return RatFunc(f.num * g.num, f.den * g.den)
    if op == "div":
        if g.num.is_zero():
            raise DomainError("division by the zero rational function")
        return RatFunc(f.num * g.den, f.den * g.num)
    raise ValueError(f"unknown operation {op!r}")


def cross_residual(f: RatFunc, g: RatFunc) -> BiPoly:
    """``f.num*g.den - g.num*f.den``; zero iff ``f == g``."""
    return f.num * g.den - g.num * f.den


def ratfunc_equal(f: RatFunc, g: RatFunc) -> bool:
    return cross_residual(f, g).is_zero()


def eval_at(f: RatFunc, n: Scalar, k: Scalar = 0) -> Fraction:
    d = f.den(n, k)
    if d == 0:
        raise PoleError(f"denominator vanishes at (n, k) = ({n}, {k})")
    return f.num(n, k) / d
