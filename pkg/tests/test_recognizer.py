from itertools import product

import pytest

from rtlab.machines import pad_length
from rtlab.oracles import PrattCertificate, pratt_generate
from rtlab.recognizer import (
    accepts_unary,
    always_accept,
    budget_report,
    cheapest_certificate,
    make_padded_recognizer,
    measured_n0,
    pratt_decider,
    primes_unary,
    singleton_decider,
)


def test_singleton_recognizer_accepts_exactly_eight():
    r = make_padded_recognizer(singleton_decider("1000"))
    assert [n for n in range(1, 40) if accepts_unary(r, n).accepted] == [8]
    assert accepts_unary(r, 8).record.info["decider_steps"] <= 4


def test_always_accept():
    r = make_padded_recognizer(always_accept(), "exhaustive")
    for n in range(2, 20):
        v = accepts_unary(r, n)
        assert v.accepted and v.record.info["decider_steps"] == 1
    # floor(1/2) = 0 decider steps are reserved for a^1
    assert accepts_unary(r, 1).record.info["decider"] == "budget-exceeded"


@pytest.mark.parametrize("n, want", [(1, False), (2, True), (7, True), (8, False),
                                     (9, False), (12, False), (13, True), (97, True)])
def test_primes_examples(n, want):
    assert accepts_unary(primes_unary(), n).accepted is want
    assert accepts_unary(primes_unary("exhaustive"), n).accepted is want


def test_certificate_in_trace():
    v = accepts_unary(primes_unary(), 97)
    (event,) = [e for e in v.record.events if e["event"] == "decider"]
    assert event["certificate"]["p"] == 97


def test_decider_never_exceeds_budget_and_is_monotone():
    d = pratt_decider()
    for p in (2, 3, 13, 97, 91):
        word = format(p, "b")
        verdicts = [d.decide(word, b, "oracle-guided") for b in range(0, 80)]
        assert all(v.steps <= b for b, v in enumerate(verdicts))
        seen_accept = False
        for v in verdicts:
            seen_accept |= v.accepted
            if seen_accept:
                assert v.accepted


def test_cheapest_certificate_is_valid_and_cheapest():
    from rtlab.oracles import pratt_check
    for p in (3, 5, 7, 31, 127):
        cert, cost = cheapest_certificate(p)
        ok, ops = pratt_check(p, cert)
        assert ok and ops == cost <= pratt_check(p, pratt_generate(p))[1]
    assert cheapest_certificate(91)[0] is None


def test_forged_certificate_rejected():
    d = pratt_decider()
    forged = PrattCertificate(9, 8, ((8, 1),))
    assert not d.decide("1001", 1000, forged).accepted


def test_budget_report():
    rows = budget_report(primes_unary(), range(1, 129))
    assert measured_n0(rows) == 1
    assert all(r.slack >= 0 for r in rows if r.slack is not None)
    always = budget_report(make_padded_recognizer(always_accept()), range(2, 10))
    assert {r.decider_steps for r in always} == {1}


def test_pad_level_agreement():
    deciders = [singleton_decider("101"), pratt_decider()]
    for d in deciders:
        r = make_padded_recognizer(d)
        for k in range(1, 12):
            for tail in product("01", repeat=k - 1):
                w = "1" + "".join(tail)
                n = pad_length(w)
                want = d.decide(w, 10**9, "oracle-guided").accepted
                assert accepts_unary(r, n).accepted == want, w
