"""Acceptance suite: every check is an exact equality, no tolerance.

Each test prints one ``[PASS]``/``[FAIL]`` line for its criterion. Run with
``pytest tests/test_acceptance.py -v -s`` to see them inline.
"""
import random
from fractions import Fraction

import pytest

from supercong.batch import BatchConfig, format_report, rows_equal_ignoring_time, run_batch
from supercong.congruences import (
    builtin_database,
    dropped_term_orders,
    get_spec,
    truncation_check,
    verify_congruence,
)
from supercong.dsl import parse_spec, serialize_spec
from supercong.exact import PadicContext, gamma_p, is_prime, ord, pochhammer, reduce
from supercong.replay import classical_check, replay_theorem
from supercong.terms import eval_term
from supercong.wz import check_wz_identity, check_wz_numeric, perturb, telescope_check, wz_pairs


def odd_primes(lo, hi):
    return [p for p in range(max(lo, 3), hi) if is_prime(p)]


@pytest.fixture
def report(capsys):
    def emit(number, title, failures):
        with capsys.disabled():
            status = "PASS" if not failures else "FAIL"
            extra = "" if not failures else f"  first failures: {failures[:5]}"
            print(f"\n[{status}] criterion {number}: {title}{extra}")
        assert not failures, failures

    return emit


def _sweep(spec_id, lo, hi):
    spec = get_spec(spec_id)
    bad = []
    for p in odd_primes(lo, hi):
        if p <= spec.prime_condition:
            continue
        r = verify_congruence(spec, p)
        if not r.holds:
            bad.append((spec_id, p, r.observed_order))
    return bad


def test_criterion_01_proved_at_scale(report):
    bad = []
    for sid in ("A01b", "A01", "x01b", "x01"):
        bad += _sweep(sid, 3, 500)
    for sid in ("B03", "B03b"):
        bad += _sweep(sid, 3, 200)
    report(1, "A01b/A01/x01b/x01 mod p^3 for p < 500, B03/B03b mod p^5 for p < 200", bad)


def test_criterion_02_golden_thm1_p3(report):
    r = verify_congruence(get_spec("A01b"), 3)
    bad = []
    if r.lhs != Fraction(435, 512):
        bad.append(("lhs", r.lhs))
    if r.rhs != -3:
        bad.append(("rhs", r.rhs))
    if r.observed_order != 3:
        bad.append(("order", r.observed_order))
    report(2, "A01b at p = 3: lhs 435/512, rhs -3, order exactly 3", bad)


def test_criterion_03_golden_final_term_p5(report):
    F = wz_pairs()["thm1"].F
    f22 = eval_term(F, 2, 2)
    rep = replay_theorem(1, 5)
    bad = []
    if f22 != Fraction(945, 64):
        bad.append(("F(2,2)", f22))
    if f22 - 5 != Fraction(625, 64):
        bad.append(("F(2,2)-5", f22 - 5))
    if ord(f22 - 5, 5) != 4 or rep.final_term_order != 4:
        bad.append(("order", ord(f22 - 5, 5), rep.final_term_order))
    report(3, "F(2,2) = 945/64, F(2,2) - 5 = 625/64, order exactly 4", bad)


CONJECTURAL = (
    "A02b A03b A04b A05b A06b A07b A08b B01b B02b B04b B05b B06b B07b B08b C01b C02b C03b C04b".split()
)


def test_criterion_04_conjectural_database(report):
    assert {s.id for s in builtin_database() if s.status != "proved"} == set(CONJECTURAL)
    bad = []
    for sid in CONJECTURAL:
        bad += _sweep(sid, 3, 151)
    report(4, "18 conjectural/partial specs at their stated moduli for admissible p <= 150", bad)


PARTIAL = {"A02b": 2, "A03b": 1, "A04b": 1, "B01b": 4, "B02b": 2}


def test_criterion_05_partial_orders(report):
    bad = []
    for sid, need in PARTIAL.items():
        spec = get_spec(sid)
        if spec.partial_order != need:
            bad.append((sid, "recorded", spec.partial_order))
        for p in odd_primes(3, 151):
            if p <= spec.prime_condition:
                continue
            got = verify_congruence(spec, p).observed_order
            if got < need:
                bad.append((sid, p, got))
    report(5, "partial orders A02b>=2, A03b>=1, A04b>=1, B01b>=4, B02b>=2", bad)


def test_criterion_06_wz_certificates(report):
    bad = []
    for pid, pair in wz_pairs().items():
        rep = check_wz_identity(pair)
        if not (rep.symbolic_identity_holds and rep.residual.is_zero()):
            bad.append((pid, "symbolic"))
        if not check_wz_numeric(pair, 8):
            bad.append((pid, "numeric"))
        broken = perturb(pair)
        brep = check_wz_identity(broken)
        if brep.symbolic_identity_holds or check_wz_numeric(broken, 8):
            bad.append((pid, "perturbation not detected"))
    report(6, "thm1-3 certify symbolically and on [1,8]^2; perturbations fail both", bad)


def test_criterion_07_proof_replay(report):
    need = {1: 3, 2: 5, 3: 3}
    bad = []
    for t in (1, 2, 3):
        for p in odd_primes(3, 100):
            rep = replay_theorem(t, p)
            if not rep.overall:
                bad.append((t, p))
            if not rep.direct:
                if not (rep.boundary_ok and rep.chain_ok and rep.closed_form_ok):
                    bad.append((t, p, "stage"))
                if t != 1 and not rep.tail_ok:
                    bad.append((t, p, "tail"))
                if rep.modulus_exponent != need[t]:
                    bad.append((t, p, "e"))
    report(7, "replay_theorem overall for t = 1,2,3 and odd p < 100", bad)


def test_criterion_08_classical(report):
    bad = []
    for kind in ("wolstenholme", "morley"):
        r3 = classical_check(kind, 3)
        if r3.observed_order != 2:
            bad.append((kind, 3, r3.observed_order))
        for p in odd_primes(5, 1000):
            r = classical_check(kind, p)
            if r.observed_order < 3:
                bad.append((kind, p, r.observed_order))
    need = {"lemma06": 4, "expansion06b": 4, "lehmer45": 2, "power2_12n": 3}
    for kind, e in need.items():
        for p in odd_primes(5, 500):
            r = classical_check(kind, p)
            if r.observed_order < e:
                bad.append((kind, p, r.observed_order))
    lem = classical_check("lemma06", 5)
    if not (lem.lhs % 625 == 455 and lem.rhs % 625 == 455):
        bad.append(("lemma06 golden", lem.lhs % 625, lem.rhs % 625))
    report(8, "classical congruences at their moduli; lemma06 at p = 5 both sides 455 mod 625", bad)


def test_criterion_09_property_suites(report):
    bad = []
    half, quarter, three_q = Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)
    for a in (half, Fraction(1, 3), quarter, Fraction(1, 6), Fraction(1, 8)):
        for n in range(51):
            if pochhammer(a, n + 1) != pochhammer(a, n) * (a + n):
                bad.append(("poch recurrence", a, n))
    for n in range(51):
        if pochhammer(half, 2 * n) != 4**n * pochhammer(quarter, n) * pochhammer(three_q, n):
            bad.append(("duplication", n))

    rng = random.Random(20240601)
    for _ in range(1000):
        p = rng.choice((3, 5, 7, 11, 13))
        ctx = PadicContext(p, rng.randint(1, 6))

        def draw():
            d = rng.randint(1, 10**6)
            while d % p == 0:
                d = rng.randint(1, 10**6)
            return Fraction(rng.randint(-(10**9), 10**9), d)

        r, s = draw(), draw()
        if reduce(r + s, ctx) != reduce(r, ctx) + reduce(s, ctx) or reduce(r * s, ctx) != reduce(r, ctx) * reduce(s, ctx):
            bad.append(("reduce", r, s, ctx))

    for p in (2, 3, 5, 7, 11, 13):
        for n in range(1, 201):
            want = -gamma_p(n, p) if n % p == 0 else -n * gamma_p(n, p)
            if gamma_p(n + 1, p) != want:
                bad.append(("morita", p, n))

    for pid, pair in wz_pairs().items():
        for N in range(13):
            for k in range(1, 7):
                if not telescope_check(pair, N, k):
                    bad.append(("telescope", pid, N, k))

    db = builtin_database()
    if len(db) != 24:
        bad.append(("db size", len(db)))
    for spec in db:
        if parse_spec(serialize_spec(spec)) != spec:
            bad.append(("roundtrip", spec.id))

    cfg = dict(ids=("A01b", "B03", "C02b", "A07b"), primes=(3, 31))
    runs = [run_batch(BatchConfig(jobs=j, **cfg)) for j in (1, 2, 8)]
    for rep in runs[1:]:
        if not rows_equal_ignoring_time(runs[0].rows, rep.rows) or format_report(rep, "csv") != format_report(runs[0], "csv"):
            bad.append(("determinism", len(rep.rows)))
    report(9, "property suites: Pochhammer, reduce, Morita, telescoping, round-trip, determinism", bad)


def test_criterion_10_truncation(report):
    bad = []
    for sid in ("A01b", "A02b", "A03b", "A04b"):
        spec = get_spec(sid)
        for p in odd_primes(3, 101):
            if p <= spec.prime_condition:
                continue
            if not truncation_check(spec, p):
                bad.append((sid, p, "sum"))
            low = [(n, o) for n, o in dropped_term_orders(spec, p) if o < 3]
            if low:
                bad.append((sid, p, low))
    report(10, "full and half sums agree mod p^3 for A01b-A04b, p <= 100; dropped terms have ord >= 3", bad)
