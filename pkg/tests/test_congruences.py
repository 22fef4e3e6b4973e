from fractions import Fraction

import pytest

from supercong.congruences import (
    BUILTIN_IDS,
    NotApplicable,
    SkippedPrime,
    builtin_database,
    dropped_term_orders,
    equivalence_check,
    gamma_p_diagnostic,
    get_spec,
    load_database,
    rhs_value,
    truncation_check,
    verify_congruence,
)
from supercong.dsl import serialize
from supercong.exact import is_prime, ord
from supercong.terms import eval_term

PARTIAL = {"A02b": 2, "A03b": 1, "A04b": 1, "B01b": 4, "B02b": 2}
PROVED = {"A01b", "A01", "B03b", "B03", "x01b", "x01"}


def test_database_shape():
    db = builtin_database()
    assert len(db) == 24
    assert tuple(s.id for s in db) == BUILTIN_IDS
    for s in db:
        if s.id in PROVED:
            assert s.status == "proved"
        elif s.id in PARTIAL:
            assert s.status == "partial" and s.partial_order == PARTIAL[s.id]
        else:
            assert s.status == "conjectural"


def test_moduli():
    e = {s.id: s.modulus_exponent for s in builtin_database()}
    assert e["B08b"] == 7 and e["C01b"] == 2 and e["C04b"] == 3
    for sid in ("A01b", "A08b", "x01b", "C02b", "C03b"):
        assert e[sid] == 3
    for sid in ("B01b", "B02b", "B03b", "B04b", "B07b"):
        assert e[sid] == 5


def test_b08b_c01b_entries():
    b8 = get_spec("B08b")
    assert (b8.modulus_exponent, b8.rhs.legendre_disc, b8.rhs.p_power, b8.prime_condition) == (7, -1, 3, 2)
    c1 = get_spec("C01b")
    assert (c1.modulus_exponent, c1.rhs.legendre_disc, c1.prime_condition) == (2, -15, 3)


def test_get_spec_unknown():
    with pytest.raises(KeyError):
        get_spec("Z99")


def test_a01b_golden():
    r = verify_congruence(get_spec("A01b"), 3)
    assert r.lhs == Fraction(435, 512) and r.rhs == -3
    assert r.lhs - r.rhs == Fraction(1971, 512)
    assert r.holds and r.observed_order == 3


def test_x01b_golden():
    r = verify_congruence(get_spec("x01b"), 3)
    assert r.lhs == Fraction(336105, 131072)
    assert r.holds and r.observed_order == 4
    assert ord(r.lhs + 9, 3) >= 3


def test_skipped_prime():
    with pytest.raises(SkippedPrime):
        verify_congruence(get_spec("A07b"), 11)
    assert verify_congruence(get_spec("A07b"), 13).holds


def test_rhs_value():
    assert rhs_value(get_spec("x01").rhs, 3) == -9
    assert rhs_value(get_spec("B08b").rhs, 5) == 125


def test_x01_needs_its_sign():
    spec = get_spec("x01")
    signed = verify_congruence(spec, 3)
    assert ord(signed.lhs + 9, 3) >= 3
    unsigned = sum((abs(eval_term(spec.lhs.body, n)) for n in range(3)), Fraction(0))
    assert ord(unsigned - 6, 3) >= 3
    assert ord(unsigned + 9, 3) < 3


def test_deterministic():
    spec = get_spec("B05b")
    assert verify_congruence(spec, 13) == verify_congruence(spec, 13)


@pytest.mark.parametrize("spec", builtin_database(), ids=lambda s: s.id)
def test_every_spec_small_primes(spec):
    for p in range(3, 60):
        if not is_prime(p) or p <= spec.prime_condition:
            continue
        r = verify_congruence(spec, p)
        assert r.holds, (spec.id, p, r.observed_order)
        if spec.id in PARTIAL:
            assert r.observed_order >= PARTIAL[spec.id]


def test_lhs_and_rhs_are_exact():
    spec = get_spec("C01b")
    r = verify_congruence(spec, 7)
    assert isinstance(r.lhs, Fraction) and r.observed_order == ord(r.lhs - r.rhs, 7)


def test_truncation_examples():
    assert truncation_check(get_spec("A01b"), 5)
    assert [o for _, o in dropped_term_orders(get_spec("A01b"), 5)] == [3, 3]
    assert truncation_check(get_spec("A02b"), 7)
    with pytest.raises(NotApplicable):
        truncation_check(get_spec("C01b"), 7)


@pytest.mark.parametrize("sid", ["A01b", "A02b", "A03b", "A04b"])
def test_truncation_to_100(sid):
    spec = get_spec(sid)
    for p in range(3, 101):
        if is_prime(p) and p > spec.prime_condition:
            assert truncation_check(spec, p)
            assert all(o >= 3 for _, o in dropped_term_orders(spec, p))


def test_equivalences():
    r = equivalence_check("B03", "B03b", range(31))
    assert r.mode == "termwise" and r.equal
    r = equivalence_check("x01", "x01b", range(31))
    assert r.mode == "termwise" and r.equal
    assert eval_term(get_spec("x01").lhs.body, 1) == eval_term(get_spec("x01b").lhs.body, 1) == Fraction(-69, 128)
    r = equivalence_check("A01", "A01b", [3, 5, 7])
    assert r.mode == "congruence" and r.equal
    with pytest.raises(KeyError):
        equivalence_check("A01", "nope", [3])


def test_equivalence_detects_mismatch():
    r = equivalence_check("A01b", "A02b", range(4))
    assert not r.equal and r.mismatches


def test_gamma_p_diagnostic():
    d = gamma_p_diagnostic(get_spec("A01b"), 5)
    assert set(d) == {"morita", "unsigned"}
    # the unsigned reading agrees with n! below p, so it keeps the full order
    assert d["unsigned"] >= 3
    r = verify_congruence(get_spec("A01b"), 5, gamma_form=True)
    assert r.holds and r.diagnostics == d
    with pytest.raises(NotApplicable):
        gamma_p_diagnostic(get_spec("C01b"), 7)


def test_load_database_from_file(tmp_path):
    path = tmp_path / "two.cdb"
    path.write_text(serialize(builtin_database()[:2]), encoding="utf-8")
    db = load_database(str(path))
    assert [s.id for s in db] == ["A01b", "A02b"]
    with pytest.raises(OSError):
        load_database(str(tmp_path / "missing.cdb"))
