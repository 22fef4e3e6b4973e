"""WZ pairs behind the three proved congruences, and the checks on them.

A pair (F, G) satisfies ``F(n,k-1) - F(n,k) = G(n+1,k) - G(n,k)``. Dividing
by ``G(n,k)`` turns this into an identity of rational functions, which is
what :func:`check_wz_identity` decides.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Tuple

from .dsl import parse_term
from .exact import Valuation, ord, require_prime
from .polyratio import BiPoly, RatFunc, cross_residual
from .terms import DomainError, Poly, Term, TermEvaluator, eval_term, shift_quotient, term_ratio

__all__ = [
    "CertificateReport",
    "FOnlyCertificate",
    "WzPair",
    "boundary_orders",
    "boundary_row",
    "check_wz_identity",
    "check_wz_numeric",
    "f_only_certificates",
    "perturb",
    "telescope_check",
    "wz_pairs",
]


@dataclass(frozen=True)
class WzPair:
    id: str
    F: Term
    G: Term
    half_range: bool  # sum over n <= (p-1)/2 instead of n <= p-1
    modulus_exponent: int
    target: str  # congruence id whose lhs is sum_n F(n, 0)


@dataclass(frozen=True)
class FOnlyCertificate:
    id: str
    F: Term
    claimed_partial_order: int


@dataclass(frozen=True)
class CertificateReport:
    pair_id: str
    symbolic_identity_holds: bool
    residual: BiPoly
    numeric_grid_ok: bool


_PAIRS = {
    "thm1": (
        "sign(n+k) * (4*n+1) * poch(1/2,n)^2 * poch(1/2,n+k) / fact(n)^2 / fact(n-k) / poch(1/2,k)^2",
        "sign(n+k) * 2 * poch(1/2,n)^2 * poch(1/2,n+k-1) / fact(n-1)^2 / fact(n-k) / poch(1/2,k)^2",
        True, 3, "A01",
    ),
    "thm2": (
        "(120*n^2-84*n*k+34*n-10*k+3) * poch(1/2,n)^3 * poch(1/2,2*n+k)"
        " / pow(2,6*n) / fact(n)^3 / fact(n-k)^2 / poch(1/2,k)^3",
        "poch(1/2,n)^3 * poch(1/2,2*n+k-1) / pow(2,6*n-8) / fact(n-1)^3 / fact(n-k)^2 / poch(1/2,k)^3",
        False, 5, "B03",
    ),
    "thm3": (
        "(20*n-2*k+3) * sign(n+k) * poch(1/2,n) * poch(1/2,2*n+k)"
        " / pow(2,4*n) / fact(n)^2 / fact(n-k) / poch(1/2,k)^2",
        # The power of 2 is 4n-5: with 4n-6 the mate is exactly twice too large.
        "sign(n+k) * poch(1/2,n) * poch(1/2,2*n+k-1) / pow(2,4*n-5) / fact(n-1)^2 / fact(n-k) / poch(1/2,k)^2",
        False, 3, "x01",
    ),
}

# First members only; their mates are not available.
_F_ONLY = {
    "A02b": (
        "(6*n-2*k+1) * poch(1/2,n) * poch(1/2,n+k) * poch(1/2,n-k)"
        " / pow(2,2*n) / fact(n)^2 / fact(n-k) / poch(1/2,k)",
        2,
    ),
    "A03b": (
        "(6*n-2*k+1) * sign(n+k) * poch(1/2,n+k) * poch(1/2,n-k)^2 / pow(2,3*n-k) / fact(n)^2 / fact(n-k)",
        1,
    ),
    "A04b": (
        "(84*n^2-56*n*k+4*k^2+52*n-12*k+5) * sign(k) * poch(1/2,n) * poch(1/2,n+k) * poch(1/2,n-k)^2"
        " / pow(2,4*n) / fact(n)^2 / fact(2*n-k+1)",
        1,
    ),
    "B01b": (
        "(20*n^2-12*n*k+8*n-2*k+1) * sign(n+k) * poch(1/2,n)^3 * poch(1/2,n+k) * poch(1/2,n-k)"
        " / pow(2,2*n) / fact(n)^3 / fact(n-k)^2 / poch(1/2,k)^2",
        4,
    ),
    "B02b": (
        "(3280*n^4-4592*n^3*k+2160*n^2*k^2-336*n*k^3+4000*n^3-3816*n^2*k+1008*n*k^2-40*k^3"
        "+1592*n^2-884*n*k+92*k^2+232*n-62*k+13)"
        " * sign(n+k) * poch(1/2,n)^3 * poch(1/2,n+k) * poch(1/2,n-k)^3 / pow(2,6*n) / fact(n)^3 / fact(2*n-k+1)^2",
        2,
    ),
}


@functools.lru_cache(maxsize=None)
def _pairs() -> Dict[str, WzPair]:
    return {
        pid: WzPair(pid, parse_term(f), parse_term(g), half, e, target)
        for pid, (f, g, half, e, target) in _PAIRS.items()
    }


def wz_pairs() -> Dict[str, WzPair]:
    return dict(_pairs())


@functools.lru_cache(maxsize=None)
def _f_only() -> Dict[str, FOnlyCertificate]:
    return {cid: FOnlyCertificate(cid, parse_term(f), order) for cid, (f, order) in _F_ONLY.items()}


def f_only_certificates() -> Dict[str, FOnlyCertificate]:
    return dict(_f_only())


def perturb(pair: WzPair, delta: int = 2) -> WzPair:
    """Copy of ``pair`` with the constant coefficient of F's polynomial factor moved by ``delta``."""
    factors = list(pair.F.factors)
    for i, f in enumerate(factors):
        if isinstance(f, Poly) and f.poly.degree("n") >= 1:
            factors[i] = replace(f, poly=f.poly + delta)
            return replace(pair, id=pair.id + "~", F=Term(tuple(factors)))
    raise ValueError(f"{pair.id}: F has no polynomial factor to perturb")


def wz_sides(pair: WzPair) -> Tuple[RatFunc, RatFunc]:
    """Both sides of the WZ relation divided by G(n,k)."""
    f_over_g = term_ratio(pair.F, pair.G)
    r1 = shift_quotient(pair.F, "k", -1) * f_over_g
    r3 = shift_quotient(pair.G, "n", 1)
    return r1 - f_over_g, r3 - 1


def check_wz_identity(pair: WzPair, grid_max: int = 8) -> CertificateReport:
    lhs, rhs = wz_sides(pair)
    residual = cross_residual(lhs, rhs)
    return CertificateReport(
        pair_id=pair.id,
        symbolic_identity_holds=residual.is_zero(),
        residual=residual,
        numeric_grid_ok=check_wz_numeric(pair, grid_max),
    )


def check_wz_numeric(pair: WzPair, grid_max: int) -> bool:
    """The WZ relation at every integer point of [1, grid_max]^2 away from poles."""
    if grid_max < 2:
        raise ValueError("grid_max must be at least 2")
    F, G = pair.F, pair.G
    for n in range(1, grid_max + 1):
        for k in range(1, grid_max + 1):
            try:
                left = eval_term(F, n, k - 1) - eval_term(F, n, k)
                right = eval_term(G, n + 1, k) - eval_term(G, n, k)
            except DomainError:
                continue
            if left != right:
                return False
    return True


def telescope_check(pair: WzPair, N: int, k: int) -> bool:
    """sum_{n=0}^{N} [F(n,k-1) - F(n,k)] == G(N+1,k) - G(0,k)."""
    if N < 0 or k < 1:
        raise ValueError("need N >= 0 and k >= 1")
    upper = TermEvaluator(pair.F, k - 1)
    lower = TermEvaluator(pair.F, k)
    left = sum((upper.at(n) - lower.at(n) for n in range(N + 1)), Fraction(0))
    return left == eval_term(pair.G, N + 1, k) - eval_term(pair.G, 0, k)


def boundary_row(pair: WzPair, p: int) -> int:
    return (p + 1) // 2 if pair.half_range else p


def boundary_orders(pair: WzPair, p: int) -> Tuple[List[Tuple[int, Valuation]], Valuation]:
    """ord_p G(row, k) for k = 1..(p-1)/2, and their minimum."""
    require_prime(p, odd=True)
    row = boundary_row(pair, p)
    orders = [(k, ord(eval_term(pair.G, row, k), p)) for k in range(1, (p - 1) // 2 + 1)]
    return orders, min((v for _, v in orders), default=float("inf"))
