"""Verification suites shared by the CLI and the acceptance tests.

Each suite checks one family of laws at a given scale and returns a
:class:`VerificationReport` whose cases are sorted by key, so equal
parameters always give byte-identical reports.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product

from . import counter, oracles
from .engine import Bounds, initial_configuration, run_clocked, run_deterministic, step
from .machines import build_md, build_ms, pad, pad_length, unpad

# Frozen constants; see the measurement notes in README.md.
SPACE_CONSTANT = 5  # max cells on any counter tape <= c * ceil(log2(n + 2))
TIMING_N0 = 1  # s(n) <= ceil(n / 2) for every n >= TIMING_N0
NERODE_MIN = 20

DEVIATIONS = {
    "lemma1": [
        "LENGTH = 2(v' + sum of proper prefixes of v') - t0 (step-count identity), not the "
        "subtract-first reading",
        "phase-two work and deciding run at a fixed number of elementary steps per tick "
        f"(counter {counter.DEFAULT_SPEEDUP})",
        "the phase switch is offered after each cell guess and fixes up to two more cells "
        "plus the counter state",
        "the counter state is kept in control; cells carry digit and head mark only",
    ],
    "primes": [
        "decider budget = min(floor(LENGTH / 2), remaining input) ticks at a fixed speedup",
    ],
}


@dataclass
class VerificationReport:
    suite: str
    params: dict
    cases: list[dict] = field(default_factory=list)
    deviations: list[str] = field(default_factory=list)
    truncated: bool = False
    extra: dict = field(default_factory=dict)

    def add(self, key, ok: bool, **data) -> None:
        self.cases.append({"key": key, "ok": bool(ok), **data})

    @property
    def passed(self) -> bool:
        return all(c["ok"] for c in self.cases)

    @property
    def failures(self) -> list[dict]:
        return [c for c in self.cases if not c["ok"]]

    @property
    def exit_code(self) -> int:
        if self.truncated:
            return 3
        return 0 if self.passed else 1

    def summary(self) -> dict:
        status = "inconclusive" if self.truncated else ("pass" if self.passed else "fail")
        return {"record": "summary", "suite": self.suite, "status": status,
                "cases": len(self.cases), "failed": len(self.failures), **self.extra}

    def lines(self) -> list[str]:
        """Report as line-delimited JSON: header, one line per case, deviations, summary."""
        out = [{"record": "header", "suite": self.suite, "params": self.params}]
        for c in sorted(self.cases, key=lambda c: _sort_key(c["key"])):
            out.append({"record": "case", **c})
        for d in self.deviations:
            out.append({"record": "deviation", "note": d})
        out.append(self.summary())
        return [json.dumps(o, sort_keys=True) for o in out]


def _sort_key(key):
    return (0, key, "") if isinstance(key, int) else (1, 0, str(key))


# -- square recognizer -------------------------------------------------------------


def suffixes(max_len: int, alphabet: str = "ab"):
    for k in range(max_len + 1):
        for t in product(alphabet, repeat=k):
            yield "".join(t)


def verify_squares(max_n: int = 400, max_suffix: int = 2, space_max_n: int | None = None
                   ) -> VerificationReport:
    """Language law on a^n b x and the space law on a^n b."""
    ms = build_ms()
    rep = VerificationReport("squares", {"max_n": max_n, "max_suffix": max_suffix,
                                         "space_max_n": space_max_n or max_n})
    xs = list(suffixes(max_suffix))
    for n in range(max_n + 1):
        want = n >= 1 and oracles.is_perfect_square(n)
        wrong = [x for x in xs if run_deterministic(ms, "a" * n + "b" + x).accepted != want]
        rep.add(n, not wrong, square=want, wrong_suffixes=wrong[:3])
    worst = 0
    profile = ms_space_profile(space_max_n or max_n)
    for n in range(1, max_n + 1):
        if profile[n] != run_deterministic(ms, "a" * n + "b").space[0]:
            rep.add(f"profile:{n}", False)
    for n in range(1, (space_max_n or max_n) + 1):
        space = profile[n]
        bound = 2 * _ceil_sqrt(n) + 1
        worst = max(worst, space - 2 * math.sqrt(n))
        if space > bound:
            rep.add(f"space:{n}", False, space=space, bound=bound)
    rep.add("space-law", not any(str(c["key"]).startswith("space:") for c in rep.cases),
            max_excess_over_2sqrt=round(worst, 6))
    return rep


def ms_space_profile(max_n: int) -> list[int]:
    """Work space of the square recognizer on a^n b for n = 0..max_n.

    The machine is deterministic, so one run over a^max_n is shared: at each
    n the last input cell is switched to b for one extra step.
    """
    ms = build_ms()
    c = initial_configuration(ms, "a" * max_n)
    out = []
    for n in range(max_n + 1):
        probe = c.copy()
        probe.input.write("b")
        nxt = step(ms, probe)
        out.append(nxt[0].work[0].space_used if nxt else probe.work[0].space_used)
        if n < max_n:
            (c,) = step(ms, c)
    return out


def _ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


# -- binary counter ----------------------------------------------------------------


def verify_md(max_v: int = 1 << 10, max_t: int = 10**5) -> VerificationReport:
    """steps_to_config against brute force, and the engine's counter run
    against the independent trajectory at every step."""
    rep = VerificationReport("md", {"max_v": max_v, "max_t": max_t})
    brute = oracles.md_normal_form_steps(max_v)
    bad = [v for v in range(1, max_v + 1) if counter.steps_to_config(v) != brute[v]]
    rep.add("steps-to-config", not bad, checked=max_v, mismatches=bad[:5])
    rec = [v for v in range(2, max_v + 1)
           if counter.steps_to_config(v) - counter.steps_to_config(v - 1)
           != 2 * (1 + _carry_chain(v - 1))]
    rep.add("step-recurrence", not rec, mismatches=rec[:5])

    md = build_md()
    c = initial_configuration(md)
    bad_t, bad_law = [], []
    for t, (value, snap) in enumerate(oracles.md_trajectory(max_t)):
        if t:
            c = run_clocked(md, 1, c)
        tape = c.work[0]
        cells = tuple(sorted(tape.cells.items()))
        if (cells, tape.head, c.state) != (snap.cells, snap.head, snap.state):
            bad_t.append(t)
            if len(bad_t) > 3:
                break
        if snap.normal_form and value and snap.digits() != format(value, "b"):
            bad_law.append(t)
    rep.add("trajectory", not bad_t, checked=max_t, mismatches=bad_t[:3])
    rep.add("binary-law", not bad_law, mismatches=bad_law[:3])
    return rep


def _carry_chain(v: int) -> int:
    """Trailing ones of v: digits flipped by the carry when adding 1."""
    k = 0
    while v & 1:
        v >>= 1
        k += 1
    return k


# -- non-regularity ------------------------------------------------------------------


def square_prefixes(max_k: int) -> list[str]:
    return ["a" * k for k in range(max_k + 1)]


def square_suffixes(max_j: int = 64) -> list[str]:
    return ["a" * j + "b" for j in range(max_j + 1)]


def verify_nerode(max_k: int = 500, minimum: int = NERODE_MIN) -> VerificationReport:
    rep = VerificationReport("nerode", {"max_k": max_k, "minimum": minimum})
    report = oracles.nerode_lower_bound(oracles.in_square_language, square_prefixes(max_k),
                                        square_suffixes())
    verified = report.verify(oracles.in_square_language)
    rep.add("distinguished", verified and report.count >= minimum, count=report.count,
            witnesses_verified=verified)
    rep.extra["nerode_count"] = report.count
    return rep


# -- counter -----------------------------------------------------------------------


def verify_lemma1(max_n: int = 48, strategy: str = "exhaustive", bounds: Bounds = Bounds(),
                  seed: int = 0, speedup: int = counter.DEFAULT_SPEEDUP,
                  space_constant: int = SPACE_CONSTANT, n0: int = TIMING_N0
                  ) -> VerificationReport:
    """Soundness, completeness, space and timing of the counter for n = 1..max_n."""
    rep = VerificationReport("lemma1", {"max_n": max_n, "strategy": strategy, "seed": seed,
                                        "speedup": speedup, "space_constant": space_constant,
                                        "n0": n0},
                             deviations=list(DEVIATIONS["lemma1"]))
    table = []
    for n in range(1, max_n + 1):
        s = counter.run_counter(n, strategy, seed=seed, bounds=bounds, speedup=speedup).summary
        rep.truncated |= s.truncated
        bound = space_constant * math.ceil(math.log2(n + 2))
        half = math.ceil(n / 2)
        timely = s.witness_tick is not None and s.witness_tick <= half
        ok = (s.exists_correct and s.all_special_correct and s.max_space <= bound
              and (timely or n < n0))
        rep.add(n, ok, s=s.witness_tick, half=half, exists=s.exists_correct,
                all_special_correct=s.all_special_correct, space=s.max_space,
                space_bound=bound, space_by_tape=s.space_by_tape, branches=s.branches,
                special=s.special)
        table.append((n, timely))
    measured = None
    for n, timely in reversed(table):
        if not timely:
            break
        measured = n
    rep.extra["measured_n0"] = measured
    return rep


# -- pad and primes ------------------------------------------------------------------


def verify_pad(max_len: int = 16, max_n: int = 1 << 16) -> VerificationReport:
    """|pad(w)| = value(w) for every w up to max_len digits; pad(unpad(n)) = a^n."""
    rep = VerificationReport("pad", {"max_len": max_len, "max_n": max_n})
    bad = []
    for k in range(1, max_len + 1):
        for tail in product("01", repeat=k - 1):
            w = "1" + "".join(tail)
            if len(pad(w)) != int(w, 2) or pad_length(w) != int(w, 2):
                bad.append(w)
    rep.add("length", not bad, mismatches=bad[:5])
    unary = "a" * max_n
    bad = [n for n in range(1, max_n + 1) if pad(unpad(n)) != unary[:n]]
    rep.add("pad-unpad", not bad, mismatches=bad[:5])
    return rep


def verify_primes(max_n: int = 128, strategy: str = "exhaustive", seed: int = 0,
                  bounds: Bounds = Bounds()) -> VerificationReport:
    from .recognizer import accepts_unary, measured_n0, primes_unary, BudgetRow

    rep = VerificationReport("primes", {"max_n": max_n, "strategy": strategy, "seed": seed},
                             deviations=list(DEVIATIONS["primes"]))
    r = primes_unary(strategy)
    rows = []
    for n in range(1, max_n + 1):
        v = accepts_unary(r, n, strategy, seed=seed, bounds=bounds)
        rep.truncated |= v.truncated
        want = oracles.trial_division_is_prime(n)
        i = v.record.info
        rows.append(BudgetRow(n, v.accepted, i.get("done_tick"), i.get("decider_steps"),
                              i.get("decider_ticks"), i.get("slack")))
        rep.add(n, v.accepted == want, prime=want, accepted=v.accepted, s=i.get("done_tick"),
                decider_steps=i.get("decider_steps"), slack=i.get("slack"))
    rep.extra["measured_n0"] = measured_n0(rows)
    return rep


SUITES = {
    "squares": verify_squares,
    "md": verify_md,
    "nerode": verify_nerode,
    "lemma1": verify_lemma1,
    "pad": verify_pad,
    "primes": verify_primes,
}
