import random

import pytest

from rtlab import oracles
from rtlab.oracles import PrattCertificate


def test_squares():
    assert [n for n in range(30) if oracles.is_perfect_square(n)] == [0, 1, 4, 9, 16, 25]
    assert all(oracles.is_perfect_square(n) == oracles.isqrt_square(n) for n in range(5000))
    assert oracles.in_square_language("aaaab")
    assert oracles.in_square_language("abba")
    assert not oracles.in_square_language("aab")
    assert not oracles.in_square_language("b")
    assert oracles.in_square_language("b", include_zero=True)


def test_md_reference_examples():
    value, snap = oracles.md_reference(6)
    assert value == 2 and snap.digits() == "10" and snap.normal_form
    assert oracles.md_normal_form_steps(4) == {1: 2, 2: 6, 3: 8, 4: 14}


def test_nerode_report_verifies():
    rep = oracles.nerode_lower_bound(oracles.in_square_language,
                                     ["a" * k for k in range(40)],
                                     ["a" * j + "b" for j in range(20)])
    assert rep.verify(oracles.in_square_language)
    assert rep.count >= 10
    # a tampered witness is caught
    (u, v), s = next(iter(rep.witness.items()))
    rep.witness[(u, v)] = "a"
    assert not rep.verify(oracles.in_square_language)


def test_pratt_examples():
    assert oracles.pratt_generate(2) == PrattCertificate(2, 1)
    cert = oracles.pratt_generate(97)
    assert oracles.pratt_verify(97, cert)
    ok, ops = oracles.pratt_check(97, cert)
    assert ok and ops > 0
    with pytest.raises(ValueError):
        oracles.pratt_generate(91)


def test_pratt_rejects_composite_even_factor():
    # 8 has order 2 mod 9, so an unchecked factor 8 would pass the power tests
    assert not oracles.pratt_verify(9, PrattCertificate(9, 8, ((8, 1),)))
    assert not oracles.pratt_verify(2, PrattCertificate(2, 3))


def test_factorize():
    assert oracles.factorize(360) == [(2, 3), (3, 2), (5, 1)]


def test_mutations_agree_with_order_oracle():
    rng = random.Random(7)
    base = [oracles.pratt_generate(p) for p in range(2, 200) if oracles.trial_division_is_prime(p)]
    for _ in range(3000):
        c = oracles.mutate_certificate(rng.choice(base), rng)
        got = c.p >= 2 and oracles.pratt_check(c.p, c)[0]
        assert got == oracles.pratt_valid_by_order(c)
