"""Recognizing a padded language in real time.

On input a^n the counter guesses n in binary on LENGTH; once LENGTH is
complete a decider runs on that binary word with the ticks that are left.
The decider is an abstract procedure with a unit-cost step count. Like the
counter's phase-two work it is sped up by a fixed number of steps per tick.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .counter import DEFAULT_SPEEDUP, run_counter
from .engine import Bounds, RunRecord
from .machines import BinaryWord
from .oracles import PrattCertificate, pratt_check, pratt_generate

DECIDER_SPEEDUP = 6
BUDGET_FRACTION = 0.5


@dataclass
class DeciderResult:
    verdict: str  # accept | reject | budget-exceeded
    steps: int
    detail: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"


@dataclass
class BudgetedDecider:
    """``decide(word, budget, guesses)`` never reports more than ``budget`` steps.

    ``cost(word, guesses)`` returns (verdict ignoring the budget, steps, detail);
    the budget only turns a too-expensive run into ``budget-exceeded``.
    """

    name: str
    cost: Callable[[str, str], tuple[bool, int, dict]]

    def decide(self, word: str, budget: int, guesses: str = "exhaustive") -> DeciderResult:
        word = BinaryWord(word)
        ok, steps, detail = self.cost(word, guesses)
        if steps > budget:
            return DeciderResult("budget-exceeded", budget, detail)
        return DeciderResult("accept" if ok else "reject", steps, detail)


def singleton_decider(target: str) -> BudgetedDecider:
    """Accepts exactly one binary word; one step per compared digit."""
    target = BinaryWord(target)

    def cost(word, guesses):
        steps = 0
        for i in range(max(len(word), len(target))):
            steps += 1
            if i >= len(word) or i >= len(target) or word[i] != target[i]:
                return False, steps, {}
        return True, steps, {}

    return BudgetedDecider(f"singleton:{target}", cost)


def always_accept() -> BudgetedDecider:
    return BudgetedDecider("always", lambda word, guesses: (True, 1, {}))


# -- Pratt decider ------------------------------------------------------------


def _factorizations(m: int, smallest: int = 2) -> list[tuple[tuple[int, int], ...]]:
    """All ways to write m as a product of powers of distinct integers >= 2, bases ascending."""
    if m == 1:
        return [()]
    out = []
    for q in range(smallest, m + 1):
        if m % q:
            continue
        power, e = q, 1
        while m % power == 0:
            for rest in _factorizations(m // power, q + 1):
                out.append(((q, e),) + rest)
            power *= q
            e += 1
    return out


@lru_cache(maxsize=None)
def cheapest_certificate(p: int) -> tuple[PrattCertificate | None, int]:
    """Exhaustive certificate search: every generator, every factorization of
    p - 1, cheapest child certificates; returns the valid certificate with the
    fewest verification steps (None if no candidate verifies)."""
    if p < 2:
        return None, 0
    if p == 2:
        cert = PrattCertificate(2, 1)
        return cert, pratt_check(2, cert)[1]
    best, best_cost = None, math.inf
    for fact in _factorizations(p - 1):
        children = []
        for q, _ in fact:
            if q > 2:
                child, _c = cheapest_certificate(q)
                if child is None:
                    break
                children.append(child)
        else:
            for g in range(2, p):
                cert = PrattCertificate(p, g, fact, tuple(children))
                ok, ops = pratt_check(p, cert)
                if ok and ops < best_cost:
                    best, best_cost = cert, ops
    return best, (0 if best is None else best_cost)


def random_certificate(p: int, rng: random.Random, depth: int = 0) -> PrattCertificate:
    """A uniformly guessed candidate (generator, factorization, children)."""
    if p <= 2:
        return PrattCertificate(p, 1)
    fact = rng.choice(_factorizations(p - 1))
    children = tuple(random_certificate(q, rng, depth + 1) for q, _ in fact if q > 2)
    return PrattCertificate(p, rng.randrange(2, p), fact, children)


def pratt_decider(seed: int = 0) -> BudgetedDecider:
    """Guess a primality certificate for value(word), then verify it.

    guesses: ``exhaustive`` (exists a certificate; charged the cheapest),
    ``oracle-guided`` (the generated certificate) or ``random``.
    """
    rng = random.Random(seed)

    def cost(word, guesses):
        p = BinaryWord(word).value
        if guesses == "exhaustive":
            cert, _ = cheapest_certificate(p)
            if cert is None:
                # every candidate fails; charge the cheapest rejection
                return False, 1, {}
        elif guesses == "oracle-guided":
            try:
                cert = pratt_generate(p)
            except ValueError:
                return False, 1, {}
        elif guesses == "random":
            cert = random_certificate(p, rng)
        elif isinstance(guesses, PrattCertificate):
            cert = guesses
        else:
            raise ValueError(f"unknown guess source {guesses!r}")
        ok, ops = pratt_check(p, cert)
        return ok, ops, {"certificate": cert.to_dict()}

    return BudgetedDecider("pratt", cost)


DECIDERS = {
    "pratt": lambda arg=None: pratt_decider(),
    "always": lambda arg=None: always_accept(),
    "singleton": lambda arg="1000": singleton_decider(arg),
}


# -- the padded recognizer ----------------------------------------------------


@dataclass
class PaddedRecognizer:
    decider: BudgetedDecider
    strategy: str = "oracle-guided"
    budget_fraction: float = BUDGET_FRACTION
    speedup: int = DEFAULT_SPEEDUP
    decider_speedup: int = DECIDER_SPEEDUP

    def budget_ticks(self, length_value: int, n: int, done_tick: int) -> int:
        """Ticks left for deciding: the reserved share of the guessed length,
        capped by the input that actually remains."""
        return min(math.floor(length_value * self.budget_fraction), n - done_tick)


def make_padded_recognizer(d: BudgetedDecider, strategy: str = "oracle-guided",
                           budget_fraction: float = BUDGET_FRACTION,
                           speedup: int = DEFAULT_SPEEDUP,
                           decider_speedup: int = DECIDER_SPEEDUP) -> PaddedRecognizer:
    return PaddedRecognizer(d, strategy, budget_fraction, speedup, decider_speedup)


def primes_unary(strategy: str = "oracle-guided") -> PaddedRecognizer:
    return make_padded_recognizer(pratt_decider(), strategy)


@dataclass
class Verdict:
    accepted: bool
    record: RunRecord
    truncated: bool = False


def accepts_unary(r: PaddedRecognizer, n: int, strategy: str | None = None, seed: int = 0,
                  bounds: Bounds = Bounds(), samples: int = 1) -> Verdict:
    """Exists-accepting-branch semantics over counter and decider guesses."""
    if n < 1:
        raise ValueError("the recognizer needs n >= 1")
    strategy = strategy or r.strategy
    res = run_counter(n, strategy, seed=seed, bounds=bounds, speedup=r.speedup,
                      samples=samples)
    guesses = "exhaustive" if strategy.startswith("exhaustive") else strategy
    best = None
    for rec in res.records:
        if not rec.accepted:
            continue
        word = rec.info["length"]
        s = rec.info["done_tick"]
        ticks = r.budget_ticks(BinaryWord(word).value, n, s)
        out = r.decider.decide(word, ticks * r.decider_speedup, guesses)
        used = math.ceil(out.steps / r.decider_speedup)
        events = list(rec.events) + [{
            "event": "decider", "decider": r.decider.name, "word": word,
            "verdict": out.verdict, "steps": out.steps, "ticks": used,
            "budget_ticks": ticks, **out.detail}]
        info = dict(rec.info, decider=out.verdict, decider_steps=out.steps,
                    decider_ticks=used, budget_ticks=ticks, slack=n - s - used)
        cand = RunRecord("accept" if out.accepted else "reject", n, rec.space, events,
                         info=info)
        if best is None or (cand.accepted and not best.accepted):
            best = cand
        if cand.accepted:
            break
    if best is None:
        best = RunRecord("reject", n, (), [{"event": "no-special-branch"}],
                         info={"branches": res.summary.branches})
    return Verdict(best.accepted, best, res.summary.truncated)


@dataclass
class BudgetRow:
    n: int
    accepted: bool
    s: int | None  # counter LENGTH completion tick
    decider_steps: int | None
    decider_ticks: int | None
    slack: int | None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def budget_report(r: PaddedRecognizer, n_range, strategy: str | None = None) -> list[BudgetRow]:
    """Per n: counter completion tick, decider steps, slack n - s(n) - decider ticks."""
    rows = []
    for n in n_range:
        v = accepts_unary(r, n, strategy)
        i = v.record.info
        rows.append(BudgetRow(n, v.accepted, i.get("done_tick"), i.get("decider_steps"),
                              i.get("decider_ticks"), i.get("slack")))
    return rows


def measured_n0(rows: list[BudgetRow]) -> int | None:
    """Smallest n0 with slack >= 0 on every row n >= n0 (None if the last row fails)."""
    n0 = None
    for row in sorted(rows, key=lambda x: x.n, reverse=True):
        if row.slack is None or row.slack < 0:
            break
        n0 = row.n
    return n0
