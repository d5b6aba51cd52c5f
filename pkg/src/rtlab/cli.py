"""Command-line entry point ``rtlab``.

Exit codes: 0 pass, 1 fail, 2 usage or domain error, 3 inconclusive (a
search bound was hit). Reports and traces are line-delimited JSON with
sorted keys, so identical invocations give identical files.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import counter, oracles, suites
from .engine import (
    AcceptanceMode,
    Bounds,
    ContractViolation,
    SpecificationError,
    explore,
    run_clocked,
    run_deterministic,
    trace_records,
)
from .machines import load_machine, pad_length, shipped_machine_text, unpad
from .recognizer import DECIDERS, accepts_unary, make_padded_recognizer

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

_UNARY = re.compile(r"^a\^(\d+)$")


class UsageError(Exception):
    pass


def parse_unary(text: str) -> int:
    """Length of a unary word given as ``aaaa``, ``a^4`` or plain ``4``."""
    if text.isdigit():
        return int(text)
    m = _UNARY.match(text)
    if m:
        return int(m.group(1))
    if set(text) - {"a"}:
        raise UsageError(f"not a unary word: {text!r}")
    return len(text)


def parse_word(text: str) -> str:
    """An input word; ``a^n`` blocks are expanded, e.g. ``a^9b``."""
    return re.sub(r"a\^(\d+)", lambda m: "a" * int(m.group(1)), text)


def _load(path: str):
    p = Path(path)
    if p.exists():
        return load_machine(p.read_text())
    name = p.stem
    try:
        return load_machine(shipped_machine_text(name))
    except FileNotFoundError:
        raise UsageError(f"no machine file {path!r}") from None


def _write_lines(path: str | None, records) -> None:
    if not path:
        return
    lines = [r if isinstance(r, str) else json.dumps(r, sort_keys=True) for r in records]
    Path(path).write_text("\n".join(lines) + "\n")


def _bounds(args) -> Bounds:
    return Bounds(max_branches=args.max_branches, max_space=args.max_space)


# -- verbs ------------------------------------------------------------------------


def cmd_run(args) -> int:
    machine = args.machine or args.machine_pos
    word = args.input if args.input is not None else args.input_pos
    if machine is None or word is None:
        raise UsageError("run needs a machine and an input")
    spec = _load(machine)
    if args.mode:
        spec = _with_mode(spec, AcceptanceMode(args.mode))
    word = parse_word(word)
    if spec.input_free:
        # no input tape: the input length is the number of ticks
        c = run_clocked(spec, len(word))
        print(f"clocked steps={c.steps} state={c.state} "
              f"tapes={[t.contents() for t in c.work]} space={[t.space_used for t in c.work]}")
        _write_lines(args.report, [{"record": "run", "machine": spec.name, "ticks": len(word),
                                    "state": c.state, "steps": c.steps}])
        return EXIT_PASS
    if spec.deterministic:
        rec = run_deterministic(spec, word)
        _write_lines(args.trace, trace_records(spec, word) if args.trace else [])
        stuck = " (stuck)" if rec.verdict == "stuck" else ""
        print(f"{'accept' if rec.accepted else 'reject'} steps={rec.steps} "
              f"space={list(rec.space)}{stuck}")
        truncated = False
    else:
        res = explore(spec, word, _bounds(args), trace=bool(args.trace))
        verdict = "accept" if res.accepts() else "reject"
        _write_lines(args.trace, [e for r in res.records for e in r.events])
        space = [max(r.space[i] for r in res.records) for i in range(spec.num_work_tapes)]
        print(f"{verdict} branches={len(res.records)} space={space}"
              + (" truncated" if res.truncated else ""))
        rec, truncated = None, res.truncated
    _write_lines(args.report, [{"record": "run", "machine": spec.name, "input_length": len(word),
                                "verdict": rec.verdict if rec else verdict,
                                "steps": rec.steps if rec else None}])
    return EXIT_INCONCLUSIVE if truncated else EXIT_PASS


def _with_mode(spec, mode):
    from dataclasses import replace
    return replace(spec, mode=mode)


def _finish(rep: suites.VerificationReport, args, table=None) -> int:
    for line in table or []:
        print(line)
    summary = rep.summary()
    print(" ".join(f"{k}={summary[k]}" for k in sorted(summary) if k != "record"))
    for c in rep.failures[:10]:
        print("FAIL", json.dumps(c, sort_keys=True))
    _write_lines(args.report, rep.lines())
    return rep.exit_code


def cmd_verify(args) -> int:
    suite = args.suite
    if suite == "squares":
        rep = suites.verify_squares(args.max_n or 400, space_max_n=args.space_max_n)
    elif suite == "md":
        rep = suites.verify_md(args.max_v, args.max_t)
    elif suite == "nerode":
        rep = suites.verify_nerode(args.max_n or 500)
    elif suite == "pad":
        rep = suites.verify_pad()
    elif suite == "lemma1":
        rep = suites.verify_lemma1(args.max_n or 48, args.strategy or "exhaustive",
                                   _bounds(args), args.seed)
        table = [f"n={c['key']} s={c['s']} half={c['half']} space={c['space']} "
                 f"{'ok' if c['ok'] else 'FAIL'}" for c in rep.cases]
        table.append(f"measured_n0={rep.extra['measured_n0']}")
        return _finish(rep, args, table)
    elif suite == "primes":
        return cmd_primes(args)
    else:
        raise UsageError(f"unknown suite {suite!r}")
    return _finish(rep, args)


def cmd_pad(args) -> int:
    if args.inverse:
        try:
            n = int(args.value)
            print(unpad(n))
        except ValueError as e:
            raise UsageError(str(e)) from None
        return EXIT_PASS
    try:
        n = pad_length(args.value)
    except ValueError as e:
        raise UsageError(str(e)) from None
    print("a" * n if args.literal else f"a^{n}")
    return EXIT_PASS


def cmd_counter(args) -> int:
    if args.action == "verify":
        args.suite = "lemma1"
        return cmd_verify(args)
    n = parse_unary(args.n) if args.n else None
    if not n:
        raise UsageError("counter run needs --n >= 1")
    strategy = args.strategy or "oracle-guided"
    if args.trace and strategy != "exhaustive":
        chooser = {"oracle-guided": lambda: counter.OracleGuided(n),
                   "random": lambda: counter.RandomGuesses(args.seed)}.get(strategy)
        if chooser is None:
            raise UsageError("--trace needs an oracle-guided or random strategy")
        states = counter.run_branch(n, chooser())
        records = [counter.to_record(s) for s in states]
        _write_lines(args.trace, [e for r in records for e in r.events])
        result = counter.CounterResult(records, counter.summarize(n, strategy, records))
    else:
        result = counter.run_counter(n, strategy, seed=args.seed, bounds=_bounds(args))
    s = result.summary.to_dict()
    print(json.dumps(s, sort_keys=True))
    _write_lines(args.report, [dict(s, record="counter")])
    if result.summary.truncated:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS if result.summary.exists_correct and result.summary.all_special_correct \
        else EXIT_FAIL


def cmd_oracle(args) -> int:
    if args.which == "squares":
        n = parse_unary(args.n) if args.n else 0
        out = {"n": n, "square": n >= 1 and oracles.is_perfect_square(n)}
    elif args.which == "pratt":
        n = int(args.n)
        if not oracles.trial_division_is_prime(n):
            out = {"n": n, "prime": False}
        else:
            cert = oracles.pratt_generate(n)
            ok, ops = oracles.pratt_check(n, cert)
            out = {"n": n, "prime": True, "certificate": cert.to_dict(), "verified": ok,
                   "ops": ops}
    else:
        rep = suites.verify_nerode(args.max_n or 500)
        out = {"count": rep.extra["nerode_count"], "verified": rep.passed}
    print(json.dumps(out, sort_keys=True))
    _write_lines(args.report, [dict(out, record="oracle", oracle=args.which)])
    return EXIT_PASS


def cmd_primes(args) -> int:
    rep = suites.verify_primes(args.max_n or 128, args.strategy or "exhaustive", args.seed,
                               _bounds(args))
    table = [f"n={c['key']} prime={c['prime']} accepted={c['accepted']} s={c['s']} "
             f"decider_steps={c['decider_steps']} slack={c['slack']} "
             f"{'ok' if c['ok'] else 'FAIL'}" for c in rep.cases]
    table.append(f"measured_n0={rep.extra['measured_n0']}")
    return _finish(rep, args, table)


def cmd_recognize(args) -> int:
    name, _, arg = args.decider.partition(":")
    if name not in DECIDERS:
        raise UsageError(f"unknown decider {name!r}; choose from {sorted(DECIDERS)}")
    try:
        d = DECIDERS[name](arg) if arg else DECIDERS[name]()
    except ValueError as e:
        raise UsageError(str(e)) from None
    n = parse_unary(args.n) if args.n else 0
    if n < 1:
        raise UsageError("recognize needs --n >= 1")
    strategy = args.strategy or "oracle-guided"
    r = make_padded_recognizer(d, strategy)
    v = accepts_unary(r, n, strategy, seed=args.seed, bounds=_bounds(args))
    verdict = "accept" if v.accepted else "reject"
    info = v.record.info
    print(f"{verdict} n={n} decider={d.name} s={info.get('done_tick')} "
          f"decider_steps={info.get('decider_steps')} slack={info.get('slack')}")
    _write_lines(args.trace, v.record.events)
    _write_lines(args.report, [{"record": "recognize", "n": n, "decider": d.name,
                                "verdict": verdict, **info}])
    if v.truncated:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-branches", type=int, default=10**7)
    common.add_argument("--max-space", type=int, default=64)
    common.add_argument("--strategy", choices=["exhaustive", "exhaustive-reference",
                                               "oracle-guided", "random"])
    common.add_argument("--trace", metavar="FILE", help="write trace records here")
    common.add_argument("--report", metavar="FILE", help="write report records here")

    p = argparse.ArgumentParser(prog="rtlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    run = sub.add_parser("run", parents=[common], help="run a machine file on an input")
    run.add_argument("machine_pos", nargs="?", metavar="MACHINE")
    run.add_argument("input_pos", nargs="?", metavar="INPUT")
    run.add_argument("--machine")
    run.add_argument("--input")
    run.add_argument("--mode", choices=[m.value for m in AcceptanceMode])
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument("suite", choices=sorted(suites.SUITES))
    ver.add_argument("--max-n", type=int)
    ver.add_argument("--space-max-n", type=int)
    ver.add_argument("--max-v", type=int, default=1 << 10)
    ver.add_argument("--max-t", type=int, default=10**5)
    ver.set_defaults(func=cmd_verify)

    pad = sub.add_parser("pad", help="unary padding of a binary word, or its inverse")
    pad.add_argument("value")
    pad.add_argument("--inverse", action="store_true")
    pad.add_argument("--literal", action="store_true", help="print the a's, not a^n")
    pad.set_defaults(func=cmd_pad)

    cnt = sub.add_parser("counter", parents=[common], help="the length counter")
    cnt.add_argument("action", choices=["run", "verify"])
    cnt.add_argument("--n")
    cnt.add_argument("--max-n", type=int)
    cnt.set_defaults(func=cmd_counter)

    orc = sub.add_parser("oracle", parents=[common], help="brute-force reference answers")
    orc.add_argument("which", choices=["squares", "pratt", "nerode"])
    orc.add_argument("--n")
    orc.add_argument("--max-n", type=int)
    orc.set_defaults(func=cmd_oracle)

    pr = sub.add_parser("primes", parents=[common], help="primes in unary vs trial division")
    pr.add_argument("--max-n", type=int)
    pr.set_defaults(func=cmd_primes)

    rec = sub.add_parser("recognize", parents=[common], help="padded recognizer on a^n")
    rec.add_argument("--decider", default="pratt",
                     help="pratt, always or singleton:<binary word>")
    rec.add_argument("--n")
    rec.set_defaults(func=cmd_recognize)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS
    try:
        return args.func(args)
    except (UsageError, SpecificationError, ContractViolation, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
