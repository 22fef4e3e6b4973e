"""Builtin congruence database and single-prime verification."""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .dsl import CongruenceSpec, RhsExpr, parse_specs
from .exact import INFINITE, Valuation, factorial, gamma_p, legendre, ord, require_prime
from .terms import Fact, Poch, SumExpr, TermEvaluator, partial_sum, resolve_bound, sum_range

__all__ = [
    "EquivalenceResult",
    "NotApplicable",
    "SkippedPrime",
    "VerificationResult",
    "builtin_database",
    "dropped_term_orders",
    "equivalence_check",
    "gamma_p_diagnostic",
    "get_spec",
    "load_database",
    "rhs_value",
    "truncation_check",
    "verify_congruence",
]

BUILTIN_IDS = (
    "A01b", "A02b", "A03b", "A04b", "A01", "x01b", "x01", "B03b", "B03",
    "A05b", "A06b", "A07b", "A08b", "B01b", "B02b", "B04b", "B05b", "B06b",
    "B07b", "B08b", "C01b", "C02b", "C03b", "C04b",
)  # fmt: skip


class SkippedPrime(Exception):
    """The prime is outside the range the statement is made for."""


class NotApplicable(ValueError):
    """The check does not apply to this congruence."""


@dataclass(frozen=True)
class VerificationResult:
    id: str
    p: int
    holds: bool
    observed_order: Valuation
    modulus_exponent: int
    lhs: Fraction = field(repr=False, compare=False, default=Fraction(0))
    rhs: int = field(repr=False, compare=False, default=0)
    diagnostics: Dict[str, Valuation] = field(repr=False, compare=False, default_factory=dict)


@functools.lru_cache(maxsize=None)
def _builtin() -> Tuple[CongruenceSpec, ...]:
    text = resources.files(__package__).joinpath("data/builtin.cdb").read_text(encoding="utf-8")
    return tuple(parse_specs(text))


def builtin_database() -> List[CongruenceSpec]:
    return list(_builtin())


def load_database(source: str = "builtin") -> List[CongruenceSpec]:
    """``"builtin"`` or a path to a ``.cdb`` file."""
    if source == "builtin":
        return builtin_database()
    with open(source, encoding="utf-8") as fh:
        return parse_specs(fh.read())


def get_spec(spec_id: str, db: Optional[Sequence[CongruenceSpec]] = None) -> CongruenceSpec:
    for s in db if db is not None else _builtin():
        if s.id == spec_id:
            return s
    raise KeyError(f"unknown congruence id {spec_id!r}")


def rhs_value(rhs: RhsExpr, p: int) -> int:
    symbol = 1 if rhs.legendre_disc is None else legendre(rhs.legendre_disc, p)
    return rhs.coefficient * symbol * p**rhs.p_power


def _check_admissible(spec: CongruenceSpec, p: int) -> None:
    require_prime(p)
    if p <= spec.prime_condition:
        raise SkippedPrime(f"{spec.id} is stated for p > {spec.prime_condition}, not p = {p}")


def verify_congruence(spec: CongruenceSpec, p: int, gamma_form: bool = False) -> VerificationResult:
    """Exact check of ``lhs == rhs (mod p^e)`` with the observed order of the difference.

    With ``gamma_form`` the result also carries the diagnostic orders of
    :func:`gamma_p_diagnostic` (never affecting ``holds``).
    """
    _check_admissible(spec, p)
    lhs = partial_sum(spec.lhs, p)
    rhs = rhs_value(spec.rhs, p)
    order = ord(lhs - rhs, p)
    diagnostics: Dict[str, Valuation] = {}
    if gamma_form:
        try:
            diagnostics = gamma_p_diagnostic(spec, p)
        except NotApplicable:
            pass
    return VerificationResult(
        id=spec.id,
        p=p,
        holds=order >= spec.modulus_exponent,
        observed_order=order,
        modulus_exponent=spec.modulus_exponent,
        lhs=lhs,
        rhs=rhs,
        diagnostics=diagnostics,
    )


def _half_block(spec: CongruenceSpec) -> int:
    """m for a body containing poch(1/2,n)^m / fact(n)^m, else 0."""
    up = sum(f.exp for f in spec.lhs.body.factors
             if isinstance(f, Poch) and f.a == Fraction(1, 2) and (f.arg.n, f.arg.k, f.arg.const) == (1, 0, 0))
    down = -sum(f.exp for f in spec.lhs.body.factors
                if isinstance(f, Fact) and (f.arg.n, f.arg.k, f.arg.const) == (1, 0, 0))
    return min(up, down)


def dropped_term_orders(spec: CongruenceSpec, p: int) -> List[Tuple[int, Valuation]]:
    """Orders of the terms ``n = (p+1)/2 .. p-1`` that the half-range sum leaves out."""
    if _half_block(spec) < 3:
        raise NotApplicable(f"{spec.id} has no (1/2)_n^m/n!^m block with m >= 3")
    _check_admissible(spec, p)
    ev = TermEvaluator(spec.lhs.body)
    return [(n, ord(ev.at(n), p)) for n in range((p + 1) // 2, p)]


def truncation_check(spec: CongruenceSpec, p: int) -> bool:
    """Full sum to p-1 agrees with the half sum to (p-1)/2 modulo p^3."""
    dropped = dropped_term_orders(spec, p)
    full = sum_range(spec.lhs.body, p - 1)
    half = sum_range(spec.lhs.body, (p - 1) // 2)
    return all(v >= 3 for _, v in dropped) and ord(full - half, p) >= 3


@dataclass(frozen=True)
class EquivalenceResult:
    ids: Tuple[str, str]
    mode: str  # "termwise" or "congruence"
    equal: bool
    mismatches: Tuple[int, ...] = ()


def equivalence_check(
    id_a: str,
    id_b: str,
    values: Iterable[int],
    db: Optional[Sequence[CongruenceSpec]] = None,
) -> EquivalenceResult:
    """Termwise equality of bodies when both sum to the same bound, else equal verdicts at each prime."""
    a, b = get_spec(id_a, db), get_spec(id_b, db)
    values = list(values)
    bad: List[int] = []
    if a.lhs.upper == b.lhs.upper:
        mode = "termwise"
        ea, eb = TermEvaluator(a.lhs.body), TermEvaluator(b.lhs.body)
        bad = [n for n in values if ea.at(n) != eb.at(n)]
    else:
        mode = "congruence"
        for p in values:
            ra, rb = verify_congruence(a, p), verify_congruence(b, p)
            if not (ra.holds and rb.holds and ra.rhs == rb.rhs):
                bad.append(p)
    return EquivalenceResult((id_a, id_b), mode, not bad, tuple(bad))


def gamma_p_diagnostic(spec: CongruenceSpec, p: int) -> Dict[str, Valuation]:
    """Orders of the infinite Gamma_p form of a congruence, under two sign readings.

    Every ``n!`` in the denominator block is replaced by ``s(n) * Gamma_p(n+1)``:
    ``"morita"`` uses ``s(n) = (-1)^n`` literally, ``"unsigned"`` uses
    ``s(n) = (-1)^(n+1)``, which reduces to ``n!`` itself for ``n < p``.
    The sum runs until the (1/2)_n block alone has order at least ``e``; later
    terms cannot change the residue.
    """
    m = _half_block(spec)
    if m < 1 or spec.lhs.body.inner_sum is not None:
        raise NotApplicable(f"{spec.id} has no (1/2)_n/n! block")
    _check_admissible(spec, p)
    e = spec.modulus_exponent
    rhs = rhs_value(spec.rhs, p)
    ev = TermEvaluator(spec.lhs.body)
    sums = {"morita": Fraction(0), "unsigned": Fraction(0)}
    n, half_order = 0, 0
    # ord (1/2)_n only grows with n, so the cut-off is safe.
    while m * half_order < e:
        t = ev.at(n)
        fac = factorial(n)
        g = gamma_p(n + 1, p)
        for name, s in (("morita", -1 if n % 2 else 1), ("unsigned", 1 if n % 2 else -1)):
            sums[name] += t * Fraction(fac, s * g) ** m
        if (2 * n + 1) % p == 0:
            half_order += ord(Fraction(2 * n + 1, 2), p)
        n += 1
    return {name: ord(v - rhs, p) for name, v in sums.items()}
