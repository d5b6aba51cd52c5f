"""Multi-tape Turing machines with real-time stepping and space metering.

A machine has an optional input tape (read left to right in real-time mode)
and ``num_work_tapes`` work tapes that are unbounded in both directions.
Rules are stored in declaration order; that order fixes successor order in
:func:`step` and the depth-first order of :func:`explore`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Protocol

BLANK = "#"
MOVES = {"R": 1, "L": -1, "N": 0}


class SpecificationError(ValueError):
    """Malformed machine definition."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ContractViolation(RuntimeError):
    """A run was requested that the machine does not support."""


class AcceptanceMode(enum.Enum):
    HALT_STATE = "halt"
    FINAL_EMPTY = "final-empty"


@dataclass(frozen=True)
class TransitionRule:
    source: str
    read_input: str | None
    read_work: tuple[str, ...]
    target: str
    move_input: str | None
    move_work: tuple[str, ...]
    write_input: str | None
    write_work: tuple[str, ...]
    line: int | None = field(default=None, compare=False)

    @property
    def key(self) -> tuple:
        return (self.source, self.read_input, self.read_work)

    def describe(self) -> str:
        ins = "-" if self.read_input is None else self.read_input
        return f"delta({self.source}, {ins}, {' '.join(self.read_work)})"


@dataclass(frozen=True)
class MachineSpec:
    name: str
    states: frozenset[str]
    initial: str
    halt: str | None
    accepting: frozenset[str]
    input_alphabet: frozenset[str]
    work_alphabet: frozenset[str]
    num_work_tapes: int
    rules: tuple[TransitionRule, ...]
    mode: AcceptanceMode = AcceptanceMode.HALT_STATE

    def __post_init__(self):
        if self.num_work_tapes < 1:
            raise SpecificationError("a machine needs at least one work tape")
        if self.initial not in self.states:
            raise SpecificationError(f"initial state {self.initial!r} is not a state")
        if self.halt is not None and self.halt in self.states:
            raise SpecificationError(f"halt state {self.halt!r} must not be an ordinary state")
        if BLANK not in self.work_alphabet:
            raise SpecificationError("work alphabet must contain the blank '#'")
        targets = self.states | ({self.halt} if self.halt else set())
        for q in self.accepting:
            if q not in targets:
                raise SpecificationError(f"accepting state {q!r} is unknown")
        tape_syms = self.input_alphabet | self.work_alphabet
        k = self.num_work_tapes
        for r in self.rules:
            where = r.line
            if r.source not in self.states:
                raise SpecificationError(f"rule source {r.source!r} is not a state", where)
            if r.target not in targets:
                raise SpecificationError(f"rule target {r.target!r} is unknown", where)
            if not (len(r.read_work) == len(r.move_work) == len(r.write_work) == k):
                raise SpecificationError(
                    f"rule arity mismatch: expected {k} work symbols/moves", where)
            if any(m not in MOVES for m in r.move_work):
                raise SpecificationError("moves must be R, L or N", where)
            for s in r.read_work + r.write_work:
                if s not in self.work_alphabet:
                    raise SpecificationError(f"unknown work symbol {s!r}", where)
            if self.input_free:
                if (r.read_input, r.move_input, r.write_input) != (None, None, None):
                    raise SpecificationError("input-free machine rule touches the input", where)
            else:
                if r.move_input not in MOVES:
                    raise SpecificationError("input move must be R, L or N", where)
                for s in (r.read_input, r.write_input):
                    if s != BLANK and s not in tape_syms:
                        raise SpecificationError(f"unknown input symbol {s!r}", where)

    @property
    def input_free(self) -> bool:
        return not self.input_alphabet

    @cached_property
    def index(self) -> dict[tuple, list[TransitionRule]]:
        table: dict[tuple, list[TransitionRule]] = {}
        for r in self.rules:
            table.setdefault(r.key, []).append(r)
        return table

    @property
    def deterministic(self) -> bool:
        return all(len(rs) == 1 for rs in self.index.values())

    def duplicate_sources(self) -> list[tuple]:
        return [k for k, rs in self.index.items() if len(rs) > 1]


class Tape:
    """Sparse two-way tape; ``space_used`` counts the visited/written extent."""

    __slots__ = ("cells", "head", "min_touched", "max_touched")

    def __init__(self, content: str = "", head: int = 0, origin: int = 0):
        self.cells: dict[int, str] = {}
        for i, s in enumerate(content):
            if s != BLANK:
                self.cells[origin + i] = s
        self.head = head
        self.min_touched = head
        self.max_touched = head

    def read(self) -> str:
        return self.cells.get(self.head, BLANK)

    def write(self, sym: str) -> None:
        if sym == BLANK:
            self.cells.pop(self.head, None)
        else:
            self.cells[self.head] = sym

    def move(self, d: int) -> None:
        self.head += d
        if self.head < self.min_touched:
            self.min_touched = self.head
        elif self.head > self.max_touched:
            self.max_touched = self.head

    @property
    def space_used(self) -> int:
        return self.max_touched - self.min_touched + 1

    def is_blank(self) -> bool:
        return not self.cells

    def window(self, lo: int | None = None, hi: int | None = None) -> str:
        lo = self.min_touched if lo is None else lo
        hi = self.max_touched if hi is None else hi
        return "".join(self.cells.get(i, BLANK) for i in range(lo, hi + 1))

    def contents(self) -> str:
        """Non-blank span, e.g. the counter digits of M_d."""
        if not self.cells:
            return ""
        return self.window(min(self.cells), max(self.cells))

    def copy(self) -> "Tape":
        t = Tape.__new__(Tape)
        t.cells = dict(self.cells)
        t.head = self.head
        t.min_touched = self.min_touched
        t.max_touched = self.max_touched
        return t

    def __eq__(self, other):
        if not isinstance(other, Tape):
            return NotImplemented
        return (self.cells, self.head, self.min_touched, self.max_touched) == (
            other.cells, other.head, other.min_touched, other.max_touched)

    def __repr__(self):
        return f"Tape({self.window()!r}, head={self.head})"


@dataclass
class Configuration:
    state: str
    input: Tape | None
    work: tuple[Tape, ...]
    steps: int = 0

    @property
    def input_pos(self) -> int | None:
        return None if self.input is None else self.input.head

    def copy(self) -> "Configuration":
        return Configuration(
            self.state,
            None if self.input is None else self.input.copy(),
            tuple(t.copy() for t in self.work),
            self.steps,
        )


@dataclass
class RunRecord:
    verdict: str  # accept | reject | stuck
    steps: int
    space: tuple[int, ...]
    events: list[dict] = field(default_factory=list)
    truncated: bool = False
    info: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"


@dataclass(frozen=True)
class Bounds:
    max_branches: int = 10**7
    max_space: int = 64


@dataclass
class ExploreResult:
    records: list[RunRecord]
    truncated: bool = False
    reason: str | None = None

    @property
    def complete(self) -> bool:
        return not self.truncated

    def accepts(self) -> bool:
        return any(r.accepted for r in self.records)


def initial_configuration(spec: MachineSpec, word: str | None = None) -> Configuration:
    if spec.input_free:
        inp = None
    else:
        inp = Tape(word or "")
    return Configuration(spec.initial, inp, tuple(Tape() for _ in range(spec.num_work_tapes)))


def _scan(spec: MachineSpec, c: Configuration) -> tuple:
    ins = None if c.input is None else c.input.read()
    return (c.state, ins, tuple(t.read() for t in c.work))


def _apply(rule: TransitionRule, c: Configuration) -> Configuration:
    n = c.copy()
    _apply_in_place(rule, n)
    return n


def _apply_in_place(rule: TransitionRule, c: Configuration) -> None:
    if c.input is not None:
        c.input.write(rule.write_input)
        c.input.move(MOVES[rule.move_input])
    for t, w, m in zip(c.work, rule.write_work, rule.move_work):
        t.write(w)
        t.move(MOVES[m])
    c.state = rule.target
    c.steps += 1


def matching_rules(spec: MachineSpec, c: Configuration) -> list[TransitionRule]:
    return spec.index.get(_scan(spec, c), [])


def step(spec: MachineSpec, c: Configuration) -> list[Configuration]:
    """All successors of ``c`` in rule-declaration order; empty means stuck."""
    if spec.halt is not None and c.state == spec.halt:
        raise ContractViolation("no step is possible from the halt state")
    return [_apply(r, c) for r in matching_rules(spec, c)]


def _rule_event(rule: TransitionRule, c: Configuration) -> dict:
    return {"event": "rule", "step": c.steps, "rule": rule.describe(), "to": rule.target}


def _terminal_verdict(spec: MachineSpec, c: Configuration, word: str) -> str | None:
    """Verdict if the run is over at ``c``, else None."""
    if spec.halt is not None and c.state == spec.halt:
        if spec.mode is AcceptanceMode.HALT_STATE:
            return "accept"
        # final-empty: the input can no longer be finished from h
        if c.steps < len(word):
            return "reject"
    if c.steps >= len(word):
        if spec.mode is AcceptanceMode.HALT_STATE:
            return "reject"
        ok = c.state in spec.accepting and all(t.is_blank() for t in c.work)
        return "accept" if ok else "reject"
    return None


def _require_real_time(spec: MachineSpec) -> None:
    report = validate_real_time(spec)
    if report.verdict == "fail":
        raise ContractViolation(
            "machine is not real-time: " + "; ".join(r.describe() for r in report.violations))
    if report.verdict == "not-applicable":
        raise ContractViolation("input-free machines are clocked with run_clocked")


def run_deterministic(spec: MachineSpec, word: str, trace: bool = False) -> RunRecord:
    _require_real_time(spec)
    c = initial_configuration(spec, word)
    events: list[dict] = []
    while True:
        verdict = _terminal_verdict(spec, c, word)
        if verdict is not None:
            break
        rules = matching_rules(spec, c)
        if not rules:
            verdict = "stuck"
            break
        if len(rules) > 1:
            raise ContractViolation(
                f"nondeterministic fan-out at {rules[0].describe()} ({len(rules)} rules)")
        if trace:
            events.append(_rule_event(rules[0], c))
        _apply_in_place(rules[0], c)
    if trace:
        events.append({"event": verdict, "step": c.steps, "state": c.state})
    return RunRecord(verdict, c.steps, tuple(t.space_used for t in c.work), events)


def run_clocked(spec: MachineSpec, ticks: int, start: Configuration | None = None) -> Configuration:
    """Advance a deterministic input-free machine by ``ticks`` steps."""
    if not spec.input_free:
        raise ContractViolation("run_clocked drives input-free machines only")
    c = initial_configuration(spec) if start is None else start.copy()
    for _ in range(ticks):
        rules = matching_rules(spec, c)
        if len(rules) != 1:
            raise ContractViolation(f"clocked machine has {len(rules)} moves at {_scan(spec, c)}")
        _apply_in_place(rules[0], c)
    return c


class BranchingProcess(Protocol):
    """Anything :func:`explore` can enumerate besides a :class:`MachineSpec`."""

    def start(self, word: str): ...

    def successors(self, config) -> list: ...

    def finished(self, config) -> RunRecord | None: ...

    def space(self, config) -> tuple[int, ...]: ...


class _SpecProcess:
    def __init__(self, spec: MachineSpec, word: str, trace: bool):
        self.spec = spec
        self.word = word
        self.trace = trace

    def start(self, word):
        return (initial_configuration(self.spec, word), ())

    def successors(self, node):
        c, events = node
        out = []
        for r in matching_rules(self.spec, c):
            ev = events + (_rule_event(r, c),) if self.trace else events
            out.append((_apply(r, c), ev))
        return out

    def finished(self, node):
        c, events = node
        verdict = _terminal_verdict(self.spec, c, self.word)
        if verdict is None and not matching_rules(self.spec, c):
            verdict = "stuck"
        if verdict is None:
            return None
        evs = list(events)
        if self.trace:
            evs.append({"event": verdict, "step": c.steps, "state": c.state})
        return RunRecord(verdict, c.steps, self.space(node), evs)

    def space(self, node):
        return tuple(t.space_used for t in node[0].work)


def explore(machine, word: str, bounds: Bounds = Bounds(), trace: bool = False) -> ExploreResult:
    """Depth-first enumeration of every maximal branch.

    ``machine`` is a real-time :class:`MachineSpec` or a :class:`BranchingProcess`.
    Hitting a bound stops the search and flags the result as truncated.
    """
    if isinstance(machine, MachineSpec):
        _require_real_time(machine)
        proc = _SpecProcess(machine, word, trace)
    else:
        proc = machine
    records: list[RunRecord] = []
    stack = [proc.start(word)]
    while stack:
        node = stack.pop()
        if max(proc.space(node), default=0) > bounds.max_space:
            return ExploreResult(records, True, "max_space")
        rec = proc.finished(node)
        if rec is not None:
            if len(records) >= bounds.max_branches:
                return ExploreResult(records, True, "max_branches")
            records.append(rec)
            continue
        # reversed so the first declared rule is explored first
        stack.extend(reversed(proc.successors(node)))
    return ExploreResult(records)


@dataclass
class RealTimeReport:
    verdict: str  # pass | fail | not-applicable
    violations: list[TransitionRule] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def validate_real_time(spec: MachineSpec) -> RealTimeReport:
    if spec.input_free:
        return RealTimeReport("not-applicable")
    bad = [r for r in spec.rules if r.move_input != "R"]
    warnings = [f"{r.describe()} rewrites the input symbol" for r in spec.rules
                if r.write_input != r.read_input]
    return RealTimeReport("fail" if bad else "pass", bad, warnings)


def space_used(record: RunRecord) -> tuple[int, ...]:
    return record.space


def trace_records(spec: MachineSpec, word: str, radius: int = 8) -> list[dict]:
    """Per-step records (step, state, input_pos, tape head/window, event) of a deterministic run."""
    _require_real_time(spec)
    c = initial_configuration(spec, word)
    out = [_snapshot(c, "start", radius)]
    while True:
        verdict = _terminal_verdict(spec, c, word)
        if verdict is not None:
            break
        rules = matching_rules(spec, c)
        if not rules:
            verdict = "stuck"
            break
        if len(rules) > 1:
            raise ContractViolation(f"nondeterministic fan-out at {rules[0].describe()}")
        _apply_in_place(rules[0], c)
        out.append(_snapshot(c, "halt" if c.state == spec.halt else "rule", radius))
    out.append(_snapshot(c, verdict, radius))
    return out


def _snapshot(c: Configuration, tag: str, radius: int) -> dict:
    return {
        "step": c.steps,
        "state": c.state,
        "input_pos": c.input_pos,
        "tapes": [{"head": t.head, "window": t.window(t.head - radius, t.head + radius)}
                  for t in c.work],
        "event": tag,
    }

