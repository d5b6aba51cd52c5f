"""Bulk evaluation of every counter branch on a^n.

A branch is fixed by its guesses: the codes written at each touched cell
before the phase switch, the switch position j, the cells guessed at the
switch and the counter state. Instead of stepping each branch, this module
lists all branches as numpy rows and derives their fate in closed form:

* DIFF after tick t only depends on the guessed codes of cells touched by
  then, so DIFF trajectories are computed once per guessed prefix;
* phase-two work only depends on the guessed configuration, so its schedule
  (:func:`rtlab.counter.core_plan`) is computed once per configuration.

The semantics match :func:`rtlab.counter.tick` branch for branch; the test
suite compares the two on small n record by record.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from . import binary
from .counter import (
    ALPHABET,
    DEFAULT_SPEEDUP,
    MAX_PENDING,
    MD_STATES,
    CounterResult,
    CounterSummary,
    TAPES,
    _pending_tuples,
    core_plan,
    track_for,
)
from .engine import Bounds, RunRecord

_NSYM = len(ALPHABET)
_MARKED = np.array([s.marked for s in ALPHABET], dtype=np.int8)
_NEVER = np.iinfo(np.int64).max // 4


def _prefix_tables(codes_at: np.ndarray, visit: list[int], width: int, n: int):
    """For k = 1..width: all guess sequences of length k with at most one
    mark, their DIFF trajectory (column 0 holds the pre-step comparison of
    the start cell) and its running maximum."""
    seqs = {0: np.zeros((1, 0), dtype=np.int8)}
    marks = {0: np.zeros(1, dtype=np.int8)}
    diff = {0: np.zeros((1, n + 1), dtype=np.int16)}
    ticks = np.arange(n + 1)
    for k in range(1, width + 1):
        cell_codes = codes_at[k - 1]  # code of cell k at each tick, -1 before its visit
        mismatch = (np.arange(_NSYM)[:, None] != cell_codes[None, :]) & (ticks >= visit[k - 1])
        mismatch = mismatch.astype(np.int16)
        if k == 1:
            mismatch[:, 0] = np.arange(_NSYM) != codes_at[0, 0]
        parent = np.repeat(np.arange(len(seqs[k - 1])), _NSYM)
        sym = np.tile(np.arange(_NSYM, dtype=np.int8), len(seqs[k - 1]))
        m = marks[k - 1][parent] + _MARKED[sym]
        keep = m <= 1
        parent, sym, m = parent[keep], sym[keep], m[keep]
        seqs[k] = np.concatenate([seqs[k - 1][parent], sym[:, None]], axis=1)
        marks[k] = m
        diff[k] = diff[k - 1][parent] + mismatch[sym]
    running = {k: np.maximum.accumulate(d, axis=1) for k, d in diff.items()}
    return seqs, marks, diff, running


def _encode(codes: np.ndarray) -> np.ndarray:
    out = np.zeros(len(codes), dtype=np.int64)
    for col in range(codes.shape[1]):
        out = out * _NSYM + codes[:, col]
    return out


def enumerate_counter(n: int, bounds: Bounds = Bounds(), speedup: int = DEFAULT_SPEEDUP,
                      detail: bool = False) -> CounterResult:
    """Every branch of the counter on a^n.

    Returns records for the special branches only; with ``detail`` the
    result additionally carries a multiset of per-branch signatures for
    comparison with the reference explorer.
    """
    if n < 1:
        raise ValueError("the counter needs n >= 1")
    tr = track_for(n)
    width = len(tr.codes[n])
    visit = tr.visit_tick[:width]
    C = speedup
    codes_at = np.full((width, n + 1), -1, dtype=np.int16)
    for t in range(n + 1):
        for cell, code in tr.codes[t].items():
            codes_at[-cell, t] = code
    seqs, marks, diff, running = _prefix_tables(codes_at, visit, width, n)
    window = np.array(tr.space[: n + 1], dtype=np.int64)
    true_state = tr.states[n]

    # index tables: base-6 code of a prefix -> row in seqs[k]
    lookup = {}
    for k in range(1, width + 1):
        table = np.full(_NSYM**k, -1, dtype=np.int64)
        table[_encode(seqs[k])] = np.arange(len(seqs[k]))
        lookup[k] = table

    # -- branches that never switch phase --------------------------------
    total = len(seqs[width])
    space_max = np.zeros(len(TAPES), dtype=np.int64)
    signatures: Counter = Counter()
    quiet_diff_max = running[width][:, n]
    space_max = np.maximum(space_max, [window[n], window[n], window[n], 0,
                                       quiet_diff_max.max()])
    if detail:
        for dmax, dend in zip(quiet_diff_max, diff[width][:, n]):
            sp = (int(window[n]),) * 3 + (0, int(dmax))
            signatures[("reject", n, sp, None, None, None, int(dend), None)] += 1

    # -- branches that switch after guessing cell j ----------------------
    specials: list[RunRecord] = []
    for j in range(1, width + 1):
        T = visit[j - 1]
        for r in range(MAX_PENDING + 1):
            for had_mark in (0, 1):
                options = _pending_tuples(r, bool(had_mark))
                pend = np.array(options, dtype=np.int8).reshape(len(options), r)
                base = np.flatnonzero(marks[j] == had_mark)
                if not len(pend) or not len(base):
                    continue
                rows = _expand(seqs[j][base], pend)
                for si, state in enumerate(MD_STATES):
                    total += len(rows)
                    if total > bounds.max_branches:
                        return _truncated(n, specials, space_max, total)
                    res = _evaluate((width, j, r, had_mark, si), rows, j, r, T, si, state,
                                    n, C, width, visit, window, lookup, diff, running,
                                    true_state, detail)
                    space_max = np.maximum(space_max, res["space_max"])
                    specials.extend(res["specials"])
                    if detail:
                        signatures.update(res["signatures"])

    target = binary.to_bits(n)
    summary = CounterSummary(
        n=n,
        strategy="exhaustive",
        branches=total,
        special=len(specials),
        exists_correct=any(r.info["length"] == target for r in specials),
        all_special_correct=all(r.info["length"] == target for r in specials),
        witness_tick=min((r.info["done_tick"] for r in specials), default=None),
        max_space=int(space_max.max()),
        space_by_tape={t: int(v) for t, v in zip(TAPES, space_max)},
    )
    result = CounterResult(specials, summary)
    if detail:
        result.signatures = signatures
    return result


def _expand(prefix: np.ndarray, pend: np.ndarray) -> np.ndarray:
    a = np.repeat(prefix, len(pend), axis=0)
    b = np.tile(pend, (len(prefix), 1))
    return np.concatenate([a, b], axis=1)


def _truncated(n, specials, space_max, total) -> CounterResult:
    target = binary.to_bits(n)
    summary = CounterSummary(
        n=n, strategy="exhaustive", branches=total, special=len(specials),
        exists_correct=any(r.info["length"] == target for r in specials),
        all_special_correct=all(r.info["length"] == target for r in specials),
        witness_tick=None, max_space=int(space_max.max()),
        space_by_tape={t: int(v) for t, v in zip(TAPES, space_max)}, truncated=True)
    return CounterResult(specials, summary)


def _ceil_div(a, b):
    return -(-a // b)


class _CoreTable:
    """Phase-two schedules of every guessed configuration seen so far, with
    their checkpoints flattened so WORK/LENGTH extents can be looked up for
    many rows at once."""

    _STRIDE = 1 << 20

    def __init__(self):
        self.plans: list = []
        self.index: dict[tuple[str, tuple[int, ...]], int] = {}
        self.groups: dict[tuple, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
        self._lists = ([], [], [], [])  # key, work, length extent, bits id
        self.bits: list = [None]
        self._arrays = None

    def core_ids(self, group: tuple, rows: np.ndarray, state: str):
        """(core id, ops, fail op) per row; cached per row group."""
        if group not in self.groups:
            uniq, first, inv = np.unique(_encode(rows), return_index=True, return_inverse=True)
            cid = np.array([self._add(tuple(int(x) for x in rows[f]), state) for f in first],
                           dtype=np.int64)[inv.reshape(-1)]
            ops = np.array([p.ops for p in self.plans], dtype=np.int64)[cid]
            fail = np.array([_NEVER if p.fail_op is None else p.fail_op for p in self.plans],
                            dtype=np.int64)[cid]
            self.groups[group] = (cid, ops, fail)
        return self.groups[group]

    def _add(self, codes: tuple[int, ...], state: str) -> int:
        key = (state, codes)
        if key not in self.index:
            c = len(self.plans)
            plan = core_plan(codes, state)
            self.index[key] = c
            self.plans.append(plan)
            keys, work, length, bits = self._lists
            w = ls = 0
            b = 0
            for op, we, le, bs in plan.checkpoints:
                w, ls = max(w, we), max(ls, le)
                if bs:
                    self.bits.append(bs)
                    b = len(self.bits) - 1
                keys.append(c * self._STRIDE + op)
                work.append(w)
                length.append(ls)
                bits.append(b)
            self._arrays = None
        return self.index[key]

    def extents(self, cid, q):
        """Core-relative WORK extent, LENGTH extent and bits id after q >= 0 core ops."""
        if self._arrays is None:
            self._arrays = tuple(np.array(x, dtype=np.int64) for x in self._lists)
        keys, work, length, bits = self._arrays
        i = np.searchsorted(keys, cid * self._STRIDE + q, side="right") - 1
        return work[i], length[i], bits[i]


_CORES = _CoreTable()


def _evaluate(group, rows, j, r, T, si, state, n, C, width, visit, window, lookup, diff,
              running, true_state, detail):
    m = rows.shape[1]
    k = min(m, width)
    pid = lookup[k][_encode(rows[:, :k])]
    cid, core_ops, core_fail = _CORES.core_ids(group, rows, state)

    mark_idx = np.argmax(_MARKED[rows], axis=1) + 1
    head_after = m if r else j
    prefix_ops = r + np.abs(head_after - mark_idx)
    total_ops = prefix_ops + core_ops
    failing = core_fail < _NEVER
    fail_ops = np.where(failing, prefix_ops + core_fail, _NEVER)
    fail_tick = np.where(failing, T + _ceil_div(fail_ops, C) - 1, _NEVER)
    done_tick = np.where(failing, _NEVER, T + _ceil_div(total_ops, C) - 1)
    td = visit[m] if m < width else _NEVER

    visit_death = (td <= fail_tick) & (td <= n)
    work_death = ~visit_death & (fail_tick <= n)
    end = np.where(visit_death, td, np.where(work_death, fail_tick, n))
    ops_end = np.where(visit_death, np.minimum(total_ops, C * (end - T)),
                       np.where(work_death, fail_ops, np.minimum(total_ops, C * (end - T + 1))))
    done = np.where(done_tick < np.where(visit_death, td, end + 1), done_tick, -1)

    d_end = diff[k][pid, end]
    d_max = running[k][pid, end]
    alive = ~visit_death & ~work_death
    special = alive & (done >= 0) & (m == width) & (d_end == 0) & (state == true_state)

    # WORK and LENGTH extents at the last executed operation
    q = ops_end - prefix_ops
    in_core = q > 0
    cw, cl, cb = _CORES.extents(cid, np.maximum(q, 0))
    work_sp = np.where(in_core, np.maximum(cw, j + r), j + np.minimum(ops_end, r))
    len_sp = np.where(in_core, cl, 0)
    bits_id = np.where(in_core, cb, 0)
    bits = _CORES.bits
    win = window[end]
    space_max = np.array([win.max(), win.max(), work_sp.max(), len_sp.max(), d_max.max()])

    specials = []
    for i in np.flatnonzero(special):
        length = bits[bits_id[i]]
        specials.append(RunRecord(
            "accept", int(end[i]),
            (int(win[i]), int(win[i]), int(work_sp[i]), int(len_sp[i]), int(d_max[i])),
            [{"event": "phase-trigger", "tick": T, "cell": -(j - 1), "state": state},
             {"event": "length-complete", "tick": int(done[i]), "length": length},
             {"event": "special", "tick": n}],
            info={"length": length, "done_tick": int(done[i]), "trigger_tick": T,
                  "dead": None, "diff": 0}))

    sigs = None
    if detail:
        sigs = _signatures(special, end, win, work_sp, len_sp, d_max, d_end, done,
                           visit_death, work_death, [bits[b] for b in bits_id], T)
    return {"space_max": space_max, "specials": specials, "signatures": sigs}


def _signatures(special, end, win, work_sp, len_sp, d_max, d_end, done, visit_death,
                work_death, lengths, T) -> Counter:
    out: Counter = Counter()
    for i in range(len(end)):
        dead = ("guessed window too small" if visit_death[i]
                else "phase-two failure" if work_death[i] else None)
        sp = (int(win[i]), int(win[i]), int(work_sp[i]), int(len_sp[i]), int(d_max[i]))
        out[("accept" if special[i] else "reject", int(end[i]), sp, lengths[i],
             None if done[i] < 0 else int(done[i]), dead, int(d_end[i]), T)] += 1
    return out


def reference_signatures(records) -> Counter:
    """The same signature multiset from reference records."""
    out: Counter = Counter()
    for r in records:
        i = r.info
        out[(r.verdict, r.steps, tuple(r.space), i["length"], i["done_tick"], i["dead"],
             i["diff"], i["trigger_tick"])] += 1
    return out

