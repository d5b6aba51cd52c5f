"""Guess-and-check input-length counter.

The counter runs one tick per input symbol as a network of processes over
five tapes:

CURRENT  the binary counter machine (``build_md``) stepped once per tick
FINAL    guessed end-of-input configuration of CURRENT, written cell by cell
WORK     copy of the guess; after the phase switch it is rewound to normal
         form and the input length is derived from it
LENGTH   the derived input length in binary
DIFF     unary count of cells where FINAL disagrees with CURRENT

Every time CURRENT's head touches a fresh cell the counter guesses that
cell's final extended symbol (digit plus head mark). After a guess it may
switch to phase two, guessing at most two further cells (the most
significant ones) and the counter state in finite control. The last guessed
cell stays in control rather than on FINAL. Phase two derives the length on
WORK/LENGTH at ``speedup`` elementary operations per tick. At end of input
the special state is entered iff DIFF is 0, the guessed counter state is
right, no guessed cell is left over and LENGTH is complete.

:func:`tick_phase1` / :func:`tick_phase2` are the per-branch reference
semantics; :mod:`rtlab.enumerate` evaluates all branches in bulk.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Protocol

from . import binary
from .engine import BLANK, Bounds, RunRecord, Tape, explore, initial_configuration, step
from .machines import build_md

DEFAULT_SPEEDUP = 6
MAX_PENDING = 2
MD_STATES = ("q0", "q1")
TAPES = ("CURRENT", "FINAL", "WORK", "LENGTH", "DIFF")


class ExtendedSymbol(NamedTuple):
    base: str  # '#', '0' or '1'
    marked: bool  # counter head rests here

    @property
    def code(self) -> int:
        return _BASES.index(self.base) * 2 + self.marked

    def text(self) -> str:
        return self.base + ("^" if self.marked else "")


_BASES = ("#", "0", "1")
ALPHABET = tuple(ExtendedSymbol(b, m) for b in _BASES for m in (False, True))
UNMARKED = tuple(s.code for s in ALPHABET if not s.marked)
MARKED = tuple(s.code for s in ALPHABET if s.marked)


def sym(code: int) -> ExtendedSymbol:
    return ALPHABET[code]


def ext_code(base: str, marked: bool) -> int:
    return _BASES.index(base) * 2 + marked


def cell_of(index: int) -> int:
    """Offset of the index-th touched cell (1-based): 0, -1, -2, ..."""
    return -(index - 1)


# -- CURRENT: the counter machine, stepped once per tick --------------------


class CurrentTrack:
    """Deterministic CURRENT process, shared by every branch.

    ``codes[t]`` maps each touched cell to its extended symbol after t ticks;
    ``fresh[t]`` lists cells first touched at tick t (cell 0 at tick 1 is
    touched before the step, cell -1 after it).
    """

    def __init__(self, n: int):
        md = build_md()
        c = initial_configuration(md)
        tape = c.work[0]
        self.n = n
        self.states = ["q0"]
        self.heads = [0]
        self.codes: list[dict[int, int]] = [{0: ext_code(BLANK, True)}]
        self.changed: list[tuple[int, ...]] = [()]
        self.fresh: list[tuple[int, ...]] = [()]
        self.visit_tick: list[int] = [1]  # per touched-cell index - 1
        self.space: list[int] = [1]
        lowest = 0
        for t in range(1, n + 1):
            c = step(md, c)[0]
            tape = c.work[0]
            prev = self.codes[-1]
            now = {cell: ext_code(tape.cells.get(cell, BLANK), cell == tape.head)
                   for cell in range(min(lowest, tape.head), 1)}
            fresh = []
            if t == 1:
                fresh.append(0)
            if tape.head < lowest:
                lowest = tape.head
                fresh.append(tape.head)
                self.visit_tick.append(t)
            self.codes.append(now)
            self.changed.append(tuple(k for k in now if k in prev and prev[k] != now[k]))
            self.fresh.append(tuple(fresh))
            self.states.append(c.state)
            self.heads.append(tape.head)
            self.space.append(tape.space_used)

    def window(self, t: int) -> int:
        return self.space[t]

    def true_codes(self, t: int) -> tuple[int, ...]:
        """Extended symbols of touched cells after t ticks, cell 0 first."""
        now = self.codes[t]
        return tuple(now[cell_of(i)] for i in range(1, len(now) + 1))


@lru_cache(maxsize=8)
def current_track(n: int) -> CurrentTrack:
    return CurrentTrack(n)


def track_for(n: int) -> CurrentTrack:
    """Reuse the longest cached track; tracks are prefixes of each other."""
    return current_track(max(n, 64 if n <= 64 else 1 << (n - 1).bit_length()))


# -- closed-form step counts ------------------------------------------------


def steps_to_config(v: int) -> int:
    """Steps for the counter to reach value v in normal form: 2 (v + sum of proper prefixes)."""
    if v < 1:
        raise ValueError("steps_to_config needs v >= 1")
    bits = binary.to_bits(v)
    return binary.value(binary.double_by_append0(
        binary.binary_add(bits, binary.sum_proper_prefixes(bits))))


@dataclass(frozen=True)
class GuessedConfig:
    """A full counter configuration in extended symbols, cell 0 first."""

    cells: tuple[ExtendedSymbol, ...]
    state: str

    def tape(self) -> Tape:
        t = Tape()
        for i, s in enumerate(self.cells):
            t.head = cell_of(i + 1)
            t.write(s.text() if s != ALPHABET[0] else BLANK)
        t.min_touched = cell_of(len(self.cells))
        t.max_touched = 0
        t.head = next(cell_of(i + 1) for i, s in enumerate(self.cells) if s.marked)
        return t

    def digits(self) -> str:
        return "".join(s.base for s in reversed(self.cells) if s.base != BLANK)

    def head(self) -> int:
        return next(cell_of(i + 1) for i, s in enumerate(self.cells) if s.marked)


def md_final_config(n: int) -> GuessedConfig:
    """CURRENT after n raw steps, with the head cell marked."""
    if n < 1:
        raise ValueError("md_final_config needs n >= 1")
    tr = track_for(n)
    return GuessedConfig(tuple(sym(c) for c in tr.true_codes(n)), tr.states[n])


# -- phase two: deriving the length from the guessed configuration ----------


@dataclass(frozen=True)
class CorePlan:
    """Phase-two work after WORK's head reached the marked cell."""

    ops: int
    fail_op: int | None
    fail_reason: str | None
    t0: int
    v_prime: str
    length: str | None
    # (op index, WORK extent, LENGTH extent, LENGTH bits) whenever one of them changes
    checkpoints: tuple[tuple[int, int, int, str], ...]


_MD_RULES = {(r.source, r.read_work[0]): (r.target, r.move_work[0], r.write_work[0])
             for r in build_md().rules}
_STEP = {"R": 1, "L": -1, "N": 0}


@lru_cache(maxsize=1 << 20)
def core_plan(codes: tuple[int, ...], state: str) -> CorePlan:
    """Run the counter on WORK from the guessed configuration to normal form,
    counting steps on LENGTH, then compute 2 (v' + sum of proper prefixes of v') - t0."""
    m = len(codes)
    cells = {}
    mark = None
    for i, code in enumerate(codes):
        s = ALPHABET[code]
        if s.base != BLANK:
            cells[cell_of(i + 1)] = s.base
        if s.marked:
            if mark is not None:
                return CorePlan(1, 1, "two head marks", 0, "", None, ((0, m, 0, ""),))
            mark = cell_of(i + 1)
    if mark is None:
        return CorePlan(1, 1, "no head mark", 0, "", None, ((0, m, 0, ""),))

    lo, hi = cell_of(m), 0
    head, q = mark, state
    ops, t0 = 0, 0
    length = "0"
    cps = [(0, m, 0, "")]
    cap = 2 * m + 4

    def at(c):
        return cells.get(c, BLANK)

    while not (q == "q0" and at(head) == BLANK and at(head - 1) != BLANK):
        if t0 >= cap:
            return CorePlan(ops + 1, ops + 1, "no normal form", t0, "", None, tuple(cps))
        q, mv, w = _MD_RULES[(q, at(head))]
        if w == BLANK:
            cells.pop(head, None)
        else:
            cells[head] = w
        head += _STEP[mv]
        lo, hi = min(lo, head), max(hi, head)
        t0 += 1
        ops += 1
        length = binary.increment(length)
        cps.append((ops, hi - lo + 1, len(length), length))

    digits = []
    c = head - 1
    while at(c) != BLANK:
        digits.append(at(c))
        c -= 1
    v_prime = binary.canonical("".join(reversed(digits)))
    t0_bits = binary.to_bits(t0)
    # scratch accumulator lives right of cell 0 on WORK, after one separator cell
    base_extent = max(hi, 1) - lo + 1
    acc = "0"

    def scratch(ops_now, acc_now):
        cps.append((ops_now, base_extent + len(acc_now), max(len(t0_bits), cps[-1][2]),
                    cps[-1][3]))

    for p in binary.proper_prefixes(v_prime):
        ops += binary.add_cost(acc, p)
        acc = binary.binary_add(acc, p)
        scratch(ops, acc)
    ops += binary.add_cost(acc, v_prime)
    acc = binary.binary_add(acc, v_prime)
    scratch(ops, acc)
    ops += binary.double_cost(acc)
    acc = binary.double_by_append0(acc)
    scratch(ops, acc)
    ops += binary.subtract_cost(acc, t0_bits)
    try:
        result = binary.binary_subtract(acc, t0_bits)
    except binary.NegativeResult:
        return CorePlan(ops, ops, "negative length", t0, v_prime, None, tuple(cps))
    cps.append((ops, cps[-1][1], max(cps[-1][2], len(result)), result))
    return CorePlan(ops, None, None, t0, v_prime, result, tuple(cps))


@dataclass(frozen=True)
class WorkPlan:
    """Complete phase-two schedule for one guess and trigger position."""

    core: CorePlan
    prefix_ops: int  # writing the held cells onto WORK, then seeking the mark
    start_extent: int  # WORK cells touched when phase two begins
    pending: int

    @property
    def total_ops(self) -> int:
        return self.prefix_ops + self.core.ops

    @property
    def fail_op(self) -> int | None:
        return None if self.core.fail_op is None else self.prefix_ops + self.core.fail_op

    @property
    def length(self) -> str | None:
        return self.core.length

    def at(self, p: int) -> tuple[int, int, str | None]:
        """(WORK space, LENGTH space, LENGTH bits or None) after p operations."""
        if p <= self.prefix_ops:
            return self.start_extent + min(p, self.pending), 0, None
        q = p - self.prefix_ops
        work = max(self.start_extent, self.start_extent + self.pending)
        length_space, bits = 0, None
        for op, w, ls, b in self.core.checkpoints:
            if op > q:
                break
            work = max(work, w)
            length_space = max(length_space, ls)
            bits = b or bits
        return work, length_space, bits


def work_plan(codes: tuple[int, ...], state: str, trigger_index: int) -> WorkPlan:
    m = len(codes)
    r = m - trigger_index
    marks = [i for i, c in enumerate(codes) if ALPHABET[c].marked]
    head_after_writes = cell_of(m) if r else cell_of(trigger_index)
    seek = abs(head_after_writes - cell_of(marks[0] + 1)) if len(marks) == 1 else 0
    return WorkPlan(core_plan(codes, state), r + seek, trigger_index, r)


# -- branch state ------------------------------------------------------------


@dataclass(frozen=True)
class GuessEvent:
    tick: int
    cell: int
    alpha: ExtendedSymbol | None
    kind: str  # cell-guess | phase-trigger | msb-guess
    state: str | None = None

    def to_dict(self) -> dict:
        d = {"event": self.kind, "tick": self.tick, "cell": self.cell}
        if self.alpha is not None:
            d["alpha"] = self.alpha.text()
        if self.state is not None:
            d["state"] = self.state
        return d


class TriggerChoice(NamedTuple):
    pending: tuple[int, ...]  # codes, next cell to be touched first
    state: str


class CounterState:
    """One branch of the counter network."""

    __slots__ = ("track", "speedup", "ticks", "phase", "final", "msb", "pending",
                 "mark_guessed", "state_guess", "trigger_tick", "trigger_index", "plan",
                 "ops_done", "diff", "max_diff", "dead", "special", "done_tick",
                 "guess_log", "registered")

    def __init__(self, track: CurrentTrack, speedup: int = DEFAULT_SPEEDUP):
        self.track = track
        self.speedup = speedup
        self.ticks = 0
        self.phase = 1
        self.final: dict[int, int] = {}
        self.msb: tuple[int, int] | None = None
        self.pending: tuple[int, ...] = ()
        self.mark_guessed = False
        self.state_guess: str | None = None
        self.trigger_tick: int | None = None
        self.trigger_index: int | None = None
        self.plan: WorkPlan | None = None
        self.ops_done = 0
        self.diff = 0
        self.max_diff = 0
        self.dead: str | None = None
        self.special = False
        self.done_tick: int | None = None
        self.guess_log: tuple[GuessEvent, ...] = ()
        self.registered = 0  # touched cells with a guess on FINAL or in control

    def copy(self) -> "CounterState":
        c = CounterState.__new__(CounterState)
        for k in CounterState.__slots__:
            setattr(c, k, getattr(self, k))
        c.final = dict(self.final)
        return c

    # derived tape views

    def guess_of(self, cell: int) -> int | None:
        if cell in self.final:
            return self.final[cell]
        if self.msb is not None and self.msb[0] == cell:
            return self.msb[1]
        return None

    @property
    def length(self) -> str | None:
        if self.plan is None:
            return None
        return self.plan.at(self.ops_done)[2] if self.done_tick is None else self.plan.length

    @property
    def current(self) -> Tape:
        t = Tape()
        tr = self.track
        for cell, code in tr.codes[self.ticks].items():
            t.head = cell
            t.write(sym(code).base)
        t.head = tr.heads[self.ticks]
        t.min_touched = min(tr.codes[self.ticks])
        t.max_touched = 0
        return t

    @property
    def final_tape(self) -> Tape:
        t = Tape()
        for cell, code in self.final.items():
            t.head = cell
            t.write(sym(code).text() if code else BLANK)
        t.head = self.track.heads[self.ticks]
        t.min_touched = min(self.track.codes[self.ticks])
        t.max_touched = 0
        return t

    def space(self) -> tuple[int, ...]:
        tr = self.track.window(self.ticks)
        if self.plan is None:
            work, length = tr, 0
        else:
            p = self.plan.fail_op if self.dead == "phase-two failure" else self.ops_done
            work, length, _ = self.plan.at(p)
        return (tr, tr, work, length, self.max_diff)

    def recompute_diff(self) -> int:
        """DIFF from scratch: guessed cells disagreeing with CURRENT."""
        now = self.track.codes[self.ticks]
        cells = list(self.final.items()) + ([self.msb] if self.msb else [])
        return sum(1 for cell, g in cells if g != now.get(cell, 0))


# -- guess sources -------------------------------------------------------------


class GuessSource(Protocol):
    def cell(self, s: CounterState, tick: int, cell: int) -> list[int]: ...

    def trigger(self, s: CounterState, tick: int, cell: int) -> list[TriggerChoice | None]: ...


def allowed_cell_codes(s: CounterState) -> tuple[int, ...]:
    return UNMARKED if s.mark_guessed else tuple(range(len(ALPHABET)))


def trigger_options(s: CounterState) -> list[TriggerChoice]:
    """Every way to close the guess: up to two more cells, exactly one head mark overall."""
    out = []
    for r in range(MAX_PENDING + 1):
        for pend in _pending_tuples(r, s.mark_guessed):
            for q in MD_STATES:
                out.append(TriggerChoice(pend, q))
    return out


@lru_cache(maxsize=None)
def _pending_tuples(r: int, mark_done: bool) -> tuple[tuple[int, ...], ...]:
    import itertools
    out = []
    for combo in itertools.product(range(len(ALPHABET)), repeat=r):
        marks = sum(ALPHABET[c].marked for c in combo)
        if marks == (0 if mark_done else 1):
            out.append(combo)
    return tuple(out)


class Exhaustive:
    name = "exhaustive"

    def cell(self, s, tick, cell):
        return list(allowed_cell_codes(s))

    def trigger(self, s, tick, cell):
        return [None] + trigger_options(s)


class OracleGuided:
    """Guesses the true end configuration; switches phase as early as the
    two-cell allowance permits."""

    name = "oracle-guided"

    def __init__(self, n: int):
        self.n = n
        cfg = md_final_config(n)
        self.truth = tuple(s.code for s in cfg.cells)
        self.state = cfg.state
        self.switch_index = max(1, len(self.truth) - MAX_PENDING)

    def cell(self, s, tick, cell):
        return [self.truth[-cell]]

    def trigger(self, s, tick, cell):
        index = -cell + 1
        if index == self.switch_index:
            return [TriggerChoice(self.truth[index:], self.state)]
        return [None]


class RandomGuesses:
    """One uniformly random choice at every decision point."""

    name = "random"

    def __init__(self, seed: int, trigger_probability: float = 0.5):
        self.rng = random.Random(seed)
        self.p = trigger_probability

    def cell(self, s, tick, cell):
        return [self.rng.choice(allowed_cell_codes(s))]

    def trigger(self, s, tick, cell):
        if self.rng.random() >= self.p:
            return [None]
        return [self.rng.choice(trigger_options(s))]


class Perturbed(OracleGuided):
    """Oracle guesses with one decision replaced by a random alternative."""

    name = "perturbed"

    def __init__(self, n: int, seed: int):
        super().__init__(n)
        self.rng = random.Random(seed)
        decisions = 2 * self.switch_index
        self.target = self.rng.randrange(decisions)
        self.seen = 0

    def _flip(self) -> bool:
        hit = self.seen == self.target
        self.seen += 1
        return hit

    def cell(self, s, tick, cell):
        good = super().cell(s, tick, cell)
        if self._flip():
            return [self.rng.choice(allowed_cell_codes(s))]
        return good

    def trigger(self, s, tick, cell):
        good = super().trigger(s, tick, cell)
        if self._flip():
            return [self.rng.choice([None] + trigger_options(s))]
        return good


# -- ticks ---------------------------------------------------------------------


def _bump(s: CounterState, delta: int) -> None:
    s.diff += delta
    if s.diff > s.max_diff:
        s.max_diff = s.diff


def _register(s: CounterState, cell: int, code: int, t_view: int, on_final: bool) -> None:
    if on_final:
        s.final[cell] = code
    else:
        s.msb = (cell, code)
    s.registered += 1
    _bump(s, code != s.track.codes[t_view].get(cell, 0))


def _advance_current(s: CounterState, t: int) -> None:
    tr = s.track
    prev, now = tr.codes[t - 1], tr.codes[t]
    delta = 0
    for cell in tr.changed[t]:
        g = s.guess_of(cell)
        if g is not None:
            delta += (g != now[cell]) - (g != prev[cell])
    s.ticks = t
    _bump(s, delta)


def _start_phase2(s: CounterState, choice: TriggerChoice, tick: int, cell: int) -> None:
    s.phase = 2
    s.pending = choice.pending
    s.state_guess = choice.state
    s.trigger_tick = tick
    s.trigger_index = -cell + 1
    guessed = tuple(s.guess_of(cell_of(i)) for i in range(1, s.trigger_index + 1))
    s.plan = work_plan(guessed + choice.pending, choice.state, s.trigger_index)
    log = [GuessEvent(tick, cell, None, "phase-trigger", choice.state)]
    for k, code in enumerate(choice.pending):
        log.append(GuessEvent(tick, cell - 1 - k, sym(code), "msb-guess"))
    s.guess_log = s.guess_log + tuple(log)


def _visit_phase1(s: CounterState, cell: int, t: int, t_view: int, choose: GuessSource
                  ) -> list[CounterState]:
    out = []
    for code in choose.cell(s, t, cell):
        g = s.copy()
        _register(g, cell, code, t_view, on_final=True)
        g.mark_guessed = g.mark_guessed or ALPHABET[code].marked
        g.guess_log = g.guess_log + (GuessEvent(t, cell, sym(code), "cell-guess"),)
        for choice in choose.trigger(g, t, cell):
            if choice is None:
                out.append(g)
            else:
                h = g.copy()
                _start_phase2(h, choice, t, cell)
                out.append(h)
    return out


def _visit_phase2(s: CounterState, cell: int, t_view: int) -> None:
    if not s.pending:
        s.dead = "guessed window too small"
        return
    code, s.pending = s.pending[0], s.pending[1:]
    # the most significant guessed cell is held in finite control only
    _register(s, cell, code, t_view, on_final=bool(s.pending))


def _run_work(s: CounterState, t: int) -> None:
    plan = s.plan
    budget = s.ops_done + s.speedup
    if plan.fail_op is not None and plan.fail_op <= budget:
        s.ops_done = plan.fail_op
        s.dead = "phase-two failure"
        return
    if s.done_tick is None:
        s.ops_done = min(plan.total_ops, budget)
        if s.ops_done == plan.total_ops:
            s.done_tick = t


def _tick(s: CounterState, choose: GuessSource | None) -> list[CounterState]:
    t = s.ticks + 1
    tr = s.track
    fresh = tr.fresh[t]
    branches = [s.copy()]
    if t == 1:
        # the start cell is touched before the first step
        cell = fresh[0]
        fresh = fresh[1:]
        branches = [b for b0 in branches for b in _visit_phase1(b0, cell, t, 0, choose)]
    for b in branches:
        _advance_current(b, t)
    for cell in fresh:
        nxt = []
        for b in branches:
            if b.phase == 1:
                nxt.extend(_visit_phase1(b, cell, t, t, choose))
            else:
                _visit_phase2(b, cell, t)
                nxt.append(b)
        branches = nxt
    for b in branches:
        if b.phase == 2 and b.dead is None:
            _run_work(b, t)
    return branches


def tick_phase1(s: CounterState, choose: GuessSource) -> list[CounterState]:
    if s.phase != 1:
        raise ValueError("tick_phase1 needs a phase-one branch")
    return _tick(s, choose)


def tick_phase2(s: CounterState) -> CounterState:
    if s.phase != 2:
        raise ValueError("tick_phase2 needs a phase-two branch")
    (out,) = _tick(s, None)
    return out


def tick(s: CounterState, choose: GuessSource) -> list[CounterState]:
    return tick_phase1(s, choose) if s.phase == 1 else [tick_phase2(s)]


def finish(s: CounterState) -> CounterState:
    """End of input: decide whether the special state is entered."""
    s.special = (
        s.dead is None
        and s.phase == 2
        and s.done_tick is not None
        and not s.pending
        and s.diff == 0
        and s.state_guess == s.track.states[s.ticks]
    )
    return s


def to_record(s: CounterState) -> RunRecord:
    events = [e.to_dict() for e in s.guess_log]
    if s.done_tick is not None:
        events.append({"event": "length-complete", "tick": s.done_tick, "length": s.plan.length})
    if s.dead:
        events.append({"event": "dead", "tick": s.ticks, "reason": s.dead})
    if s.special:
        events.append({"event": "special", "tick": s.ticks})
    info = {
        "length": s.length,
        "done_tick": s.done_tick,
        "trigger_tick": s.trigger_tick,
        "dead": s.dead,
        "diff": s.diff,
    }
    return RunRecord("accept" if s.special else "reject", s.ticks, s.space(), events, info=info)


# -- running ---------------------------------------------------------------------


class CounterProcess:
    """The counter on input a^n as a branching process for :func:`explore`."""

    def __init__(self, n: int, choose: GuessSource | None = None,
                 speedup: int = DEFAULT_SPEEDUP):
        if n < 1:
            raise ValueError("the counter needs n >= 1")
        self.n = n
        self.choose = choose or Exhaustive()
        self.speedup = speedup
        self.track = track_for(n)

    def start(self, word=None):
        return CounterState(self.track, self.speedup)

    def successors(self, s):
        return tick(s, self.choose)

    def finished(self, s):
        if s.dead is not None:
            return to_record(s)
        if s.ticks == self.n:
            return to_record(finish(s))
        return None

    def space(self, s):
        return s.space()


def run_branch(n: int, choose: GuessSource, speedup: int = DEFAULT_SPEEDUP,
               observer=None) -> list[CounterState]:
    """Run every branch ``choose`` offers to the end (single-choice sources give one)."""
    track = track_for(n)
    live = [CounterState(track, speedup)]
    done = []
    while live:
        s = live.pop()
        if s.dead is not None:
            done.append(s)
            continue
        if s.ticks == n:
            done.append(finish(s))
            continue
        nxt = tick(s, choose)
        if observer is not None:
            for b in nxt:
                observer(b)
        live.extend(reversed(nxt))
    return done


@dataclass
class CounterSummary:
    n: int
    strategy: str
    branches: int
    special: int
    exists_correct: bool  # (a) some special branch with LENGTH = n
    all_special_correct: bool  # (b) every special branch has LENGTH = n
    witness_tick: int | None  # (c) earliest LENGTH completion among special branches
    max_space: int  # (d) over all branches and tapes
    space_by_tape: dict[str, int] = field(default_factory=dict)
    truncated: bool = False

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class CounterResult:
    records: list[RunRecord]
    summary: CounterSummary


def summarize(n: int, strategy: str, records: list[RunRecord], truncated=False) -> CounterSummary:
    target = binary.to_bits(n)
    special = [r for r in records if r.accepted]
    space = [max(r.space[i] for r in records) if records else 0 for i in range(len(TAPES))]
    return CounterSummary(
        n=n,
        strategy=strategy,
        branches=len(records),
        special=len(special),
        exists_correct=any(r.info["length"] == target for r in special),
        all_special_correct=all(r.info["length"] == target for r in special),
        witness_tick=min((r.info["done_tick"] for r in special), default=None),
        max_space=max(space, default=0),
        space_by_tape=dict(zip(TAPES, space)),
        truncated=truncated,
    )


def run_counter(n: int, strategy: str = "oracle-guided", seed: int = 0,
                bounds: Bounds = Bounds(), speedup: int = DEFAULT_SPEEDUP,
                samples: int = 1) -> CounterResult:
    """Run the counter on a^n.

    ``exhaustive`` enumerates every branch (bulk evaluator, special records
    only); ``exhaustive-reference`` does the same branch by branch with
    :func:`explore`; ``oracle-guided`` follows the true configuration;
    ``random`` samples ``samples`` branches from ``seed``.
    """
    if n < 1:
        raise ValueError("the counter needs n >= 1")
    if strategy == "exhaustive":
        from .enumerate import enumerate_counter
        return enumerate_counter(n, bounds=bounds, speedup=speedup)
    if strategy == "exhaustive-reference":
        res = explore(CounterProcess(n, Exhaustive(), speedup), "a" * n, bounds)
        return CounterResult(res.records, summarize(n, strategy, res.records, res.truncated))
    if strategy == "oracle-guided":
        choose: GuessSource = OracleGuided(n)
        states = run_branch(n, choose, speedup)
    elif strategy == "random":
        rng = random.Random(seed)
        states = []
        for _ in range(samples):
            states += run_branch(n, RandomGuesses(rng.randrange(2**63)), speedup)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    records = [to_record(s) for s in states]
    return CounterResult(records, summarize(n, strategy, records))


def log2_ceiling(n: int) -> int:
    return math.ceil(math.log2(n + 2))
