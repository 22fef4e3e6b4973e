"""Exact scalars and p-adic bookkeeping.

Rationals are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator). A valuation is a plain ``int`` or :data:`INFINITE`
for the zero element, so ``ord_p(x) >= e`` reads naturally.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "INFINITE",
    "NegativeValuation",
    "PadicContext",
    "Residue",
    "Valuation",
    "binomial",
    "factorial",
    "fermat_quotient",
    "gamma_p",
    "harmonic",
    "is_prime",
    "legendre",
    "ord",
    "pochhammer",
    "reduce",
    "require_prime",
]

INFINITE = math.inf
Valuation = Union[int, float]

RationalLike = Union[int, Fraction]


class NegativeValuation(ArithmeticError):
    """Raised when a rational with p in its denominator is reduced mod p^e."""


# Deterministic for n < 3.3e24, which covers every 64-bit input.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int, *, odd: bool = False) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    if odd and p == 2:
        raise ValueError("an odd prime is required")


@dataclass(frozen=True)
class PadicContext:
    """The pair (p, e) of a statement ``mod p^e``."""

    p: int
    e: int

    def __post_init__(self):
        require_prime(self.p)
        if self.e < 1:
            raise ValueError(f"modulus exponent must be >= 1, got {self.e}")

    @property
    def modulus(self) -> int:
        return self.p**self.e


@dataclass(frozen=True)
class Residue:
    value: int
    context: PadicContext

    def __post_init__(self):
        if not 0 <= self.value < self.context.modulus:
            raise ValueError(f"{self.value} is not reduced mod {self.context.modulus}")

    def __add__(self, other: Residue) -> Residue:
        self._check(other)
        return Residue((self.value + other.value) % self.context.modulus, self.context)

    def __mul__(self, other: Residue) -> Residue:
        self._check(other)
        return Residue(self.value * other.value % self.context.modulus, self.context)

    def _check(self, other: Residue) -> None:
        if other.context != self.context:
            raise ValueError("residues live in different rings")

    def __int__(self) -> int:
        return self.value


def _int_ord(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def ord(r: RationalLike, p: int) -> Valuation:
    """Exponent of ``p`` in ``r``; :data:`INFINITE` for zero."""
    require_prime(p)
    r = Fraction(r)
    if r == 0:
        return INFINITE
    return _int_ord(r.numerator, p) - _int_ord(r.denominator, p)


def reduce(r: RationalLike, ctx: PadicContext) -> Residue:
    r = Fraction(r)
    if r.denominator % ctx.p == 0:
        raise NegativeValuation(f"{r} has negative {ctx.p}-adic valuation")
    m = ctx.modulus
    return Residue(r.numerator * pow(r.denominator, -1, m) % m, ctx)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    require_prime(p, odd=True)
    t = pow(a % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def pochhammer(a: RationalLike, n: int) -> Fraction:
    """Rising factorial a(a+1)...(a+n-1)."""
    if n < 0:
        raise ValueError("pochhammer length must be nonnegative")
    a = Fraction(a)
    u, v = a.numerator, a.denominator
    if v == 1:
        return Fraction(math.prod(range(u, u + n)))
    return Fraction(math.prod(range(u, u + n * v, v)), v**n)


def factorial(n: int) -> int:
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    if n < 0:
        raise ValueError("binomial top must be nonnegative")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def harmonic(n: int, power: int = 1) -> Fraction:
    """Sum of 1/l**power for l = 1..n."""
    if power not in (1, 2):
        raise ValueError("only power 1 and 2 harmonic sums are supported")
    if n <= 0:
        return Fraction(0)
    # Common denominator L = lcm(1..n)^power keeps this O(n) big-int work.
    lcm = math.lcm(*range(1, n + 1)) ** power
    return Fraction(sum(lcm // l**power for l in range(1, n + 1)), lcm)


def fermat_quotient(p: int) -> int:
    """Q_p(2) = (2^(p-1) - 1)/p."""
    require_prime(p, odd=True)
    return (2 ** (p - 1) - 1) // p


def gamma_p(n: int, p: int) -> int:
    """Morita's p-adic gamma at a nonnegative integer, as an exact integer."""
    if n < 0:
        raise ValueError("gamma_p is only provided at nonnegative integers")
    if n == 0:
        return 1
    prod = math.prod(j for j in range(1, n) if j % p)
    return -prod if n % 2 else prod
