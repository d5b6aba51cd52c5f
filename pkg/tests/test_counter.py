import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rtlab import counter
from rtlab.counter import (
    ALPHABET,
    CounterState,
    Exhaustive,
    OracleGuided,
    Perturbed,
    RandomGuesses,
    core_plan,
    md_final_config,
    run_branch,
    run_counter,
    steps_to_config,
    tick_phase1,
    tick_phase2,
    track_for,
)
from rtlab.oracles import md_normal_form_steps, md_reference


def test_steps_to_config_examples():
    assert [steps_to_config(v) for v in (1, 2, 4)] == [2, 6, 14]
    with pytest.raises(ValueError):
        steps_to_config(0)


def test_steps_to_config_matches_brute_force():
    brute = md_normal_form_steps(300)
    assert all(steps_to_config(v) == brute[v] for v in brute)


def test_md_final_config_examples():
    two = md_final_config(2)
    assert two.digits() == "1" and two.head() == 0  # mark right of the digit
    assert md_final_config(6).digits() == "10"
    assert md_final_config(14).digits() == "100"
    with pytest.raises(ValueError):
        md_final_config(0)


@pytest.mark.parametrize("n", [1, 5, 37, 200])
def test_final_config_agrees_with_independent_simulation(n):
    _, snap = md_reference(n)
    cfg = md_final_config(n)
    assert cfg.digits() == snap.digits()
    assert cfg.head() == snap.head and cfg.state == snap.state


def test_first_guess_fans_out_over_alphabet():
    s = CounterState(track_for(4))
    out = tick_phase1(s, Exhaustive())
    # cells 0 and -1 are both touched in the first tick; once a mark is
    # guessed only the 3 unmarked symbols remain
    plain = [b for b in out if b.phase == 1]
    assert len(plain) == 3 * 6 + 3 * 3
    assert {b.guess_log[0].alpha for b in out} == set(ALPHABET)


def test_phase_preconditions():
    s = CounterState(track_for(4))
    with pytest.raises(ValueError):
        tick_phase2(s)
    s.phase = 2
    with pytest.raises(ValueError):
        tick_phase1(s, Exhaustive())


def test_guided_run_on_eight():
    (s,) = run_branch(8, OracleGuided(8))
    assert s.special and s.length == "1000" and s.diff == 0
    kinds = [e.kind for e in s.guess_log]
    assert "phase-trigger" in kinds and "msb-guess" in kinds


@pytest.mark.parametrize("n", range(1, 65))
def test_guided_witness(n):
    summary = run_counter(n, "oracle-guided").summary
    assert summary.exists_correct and summary.all_special_correct


def test_exhaustive_eight_and_twenty():
    for n, bits in ((8, "1000"), (20, "10100")):
        res = run_counter(n, "exhaustive")
        assert res.summary.exists_correct and res.summary.all_special_correct
        assert {r.info["length"] for r in res.records} == {bits}


def test_normal_form_guess_has_zero_t0():
    cfg = md_final_config(14)
    plan = core_plan(tuple(s.code for s in cfg.cells), cfg.state)
    assert plan.t0 == 0 and int(plan.length, 2) == steps_to_config(4)


def test_malformed_guess_dies():
    unmarked = (ALPHABET[0].code, ALPHABET[4].code)
    plan = core_plan(unmarked, "q0")
    assert plan.fail_op is not None and plan.length is None


def test_random_strategy_is_reproducible():
    a = run_counter(8, "random", seed=3, samples=20)
    b = run_counter(8, "random", seed=3, samples=20)
    assert [r.events for r in a.records] == [r.events for r in b.records]


def test_unknown_strategy():
    with pytest.raises(ValueError):
        run_counter(4, "sideways")
    with pytest.raises(ValueError):
        run_counter(0)


def _check_diff(s):
    assert s.diff == s.recompute_diff()
    assert s.diff <= s.max_diff


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 80), st.integers(0, 10**6))
def test_diff_is_exact_at_every_tick(n, seed):
    run_branch(n, RandomGuesses(seed, trigger_probability=0.2), observer=_check_diff)
    run_branch(n, Perturbed(n, seed), observer=_check_diff)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 120), st.integers(0, 10**6))
def test_special_branches_are_sound(n, seed):
    for chooser in (RandomGuesses(seed, 0.3), Perturbed(n, seed)):
        for s in run_branch(n, chooser):
            if s.special:
                assert int(s.length, 2) == n


def test_soundness_fuzz_many_random_branches():
    rng = random.Random(11)
    specials = 0
    for _ in range(400):
        n = rng.randrange(1, 60)
        for s in run_branch(n, Perturbed(n, rng.randrange(1 << 30))):
            if s.special:
                specials += 1
                assert int(s.length, 2) == n
    assert specials > 0


def test_speedup_below_pinned_value_misses_small_n():
    assert not run_counter(1, speedup=counter.DEFAULT_SPEEDUP - 1).summary.exists_correct
