"""The concrete machines (square recognizer, binary counter), the unary padding
map, and the line-oriented ``.rtm`` machine file format."""

from __future__ import annotations

from importlib import resources

from .engine import (
    BLANK,
    AcceptanceMode,
    MachineSpec,
    SpecificationError,
    TransitionRule,
)

# (state, input, work) -> (target, input move, work move, input write, work write)
_MS_TABLE = [
    ("q0", "a", "#", "q1", "R", "R", "a", "0"),
    ("q0", "a", "0", "q0", "R", "R", "a", "0"),
    ("q1", "a", "#", "q2", "R", "L", "a", "0"),
    ("q1", "b", "#", "h", "R", "L", "b", "0"),
    ("q2", "a", "0", "q2", "R", "L", "a", "0"),
    ("q2", "a", "#", "q3", "R", "L", "a", "0"),
    ("q3", "a", "#", "q0", "R", "R", "a", "0"),
    ("q3", "b", "#", "h", "R", "L", "b", "0"),
]

# (state, read) -> (target, move, write)
_MD_TABLE = [
    ("q0", "#", "q1", "L", "#"),
    ("q0", "0", "q0", "R", "0"),
    ("q0", "1", "q0", "R", "1"),
    ("q1", "#", "q0", "R", "1"),
    ("q1", "0", "q0", "R", "1"),
    ("q1", "1", "q1", "L", "0"),
]


def build_ms() -> MachineSpec:
    """Real-time recognizer of a^n b {a,b}* with n a positive square."""
    rules = tuple(
        TransitionRule(q, i, (w,), t, mi, (mw,), wi, (ww,))
        for q, i, w, t, mi, mw, wi, ww in _MS_TABLE
    )
    return MachineSpec(
        name="ms",
        states=frozenset({"q0", "q1", "q2", "q3"}),
        initial="q0",
        halt="h",
        accepting=frozenset(),
        input_alphabet=frozenset({"a", "b"}),
        work_alphabet=frozenset({BLANK, "a", "0", "1"}),
        num_work_tapes=1,
        rules=rules,
        mode=AcceptanceMode.HALT_STATE,
    )


def build_md() -> MachineSpec:
    """Input-free binary counter; digits grow leftwards from cell -1, no halt state."""
    rules = tuple(
        TransitionRule(q, None, (r,), t, None, (m,), None, (w,))
        for q, r, t, m, w in _MD_TABLE
    )
    return MachineSpec(
        name="md",
        states=frozenset({"q0", "q1"}),
        initial="q0",
        halt=None,
        accepting=frozenset(),
        input_alphabet=frozenset(),
        work_alphabet=frozenset({BLANK, "0", "1"}),
        num_work_tapes=1,
        rules=rules,
        mode=AcceptanceMode.HALT_STATE,
    )


class BinaryWord(str):
    """A word in 1{0,1}*, the domain of :func:`pad`."""

    def __new__(cls, bits: str):
        if not bits or bits[0] != "1" or set(bits) - {"0", "1"}:
            raise ValueError(f"not a binary word with leading 1: {bits!r}")
        return super().__new__(cls, bits)

    @property
    def value(self) -> int:
        return int(self, 2)


def pad(w: str) -> str:
    """Unary padding: pad(1)=a, pad(w0)=pad(w)^2, pad(w1)=pad(w)^2 a."""
    w = BinaryWord(w)
    out = "a"
    for bit in w[1:]:
        out = out + out
        if bit == "1":
            out += "a"
    return out


def unpad(n: int) -> BinaryWord:
    if n < 1:
        raise ValueError("unpad is defined for n >= 1 only")
    return BinaryWord(format(n, "b"))


def pad_length(w: str) -> int:
    """|pad(w)| by the same recursion, without building the word."""
    w = BinaryWord(w)
    m = 1
    for bit in w[1:]:
        m = 2 * m + (bit == "1")
    return m


# -- machine files -----------------------------------------------------------

_HEADERS = ("machine", "tapes", "mode", "states", "initial", "halt", "accepting",
            "input-alphabet", "work-alphabet")


def _opt(tok: str) -> str | None:
    return None if tok == "-" else tok


def load_machine(text: str) -> MachineSpec:
    fields: dict[str, tuple[list[str], int]] = {}
    rule_lines: list[tuple[list[str], int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        key, rest = toks[0], toks[1:]
        if key == "rule":
            rule_lines.append((rest, lineno))
        elif key in _HEADERS:
            if key in fields:
                raise SpecificationError(f"duplicate header {key!r}", lineno)
            fields[key] = (rest, lineno)
        else:
            raise SpecificationError(f"unknown directive {key!r}", lineno)

    if "machine" not in fields:
        raise SpecificationError("missing header 'machine'")
    for required in ("tapes", "states", "initial", "work-alphabet"):
        if required not in fields:
            raise SpecificationError(f"missing header {required!r}")

    def one(key, default=None):
        if key not in fields:
            return default
        vals, ln = fields[key]
        if len(vals) != 1:
            raise SpecificationError(f"{key!r} takes exactly one value", ln)
        return vals[0]

    name = one("machine")
    try:
        k = int(one("tapes"))
    except ValueError:
        raise SpecificationError("tapes must be an integer", fields["tapes"][1]) from None
    mode_txt = one("mode", "halt")
    try:
        mode = AcceptanceMode(mode_txt)
    except ValueError:
        raise SpecificationError(f"unknown mode {mode_txt!r}", fields["mode"][1]) from None
    states = fields["states"][0]
    halt = one("halt")
    known = set(states) | ({halt} if halt else set())
    accepting = fields.get("accepting", ([], 0))[0]
    in_alpha = [s for s in fields.get("input-alphabet", ([], 0))[0] if s != "-"]
    work_alpha = fields["work-alphabet"][0]
    input_free = not in_alpha

    rules = []
    seen: dict[tuple, int] = {}
    for toks, ln in rule_lines:
        if "->" not in toks:
            raise SpecificationError("rule needs '->'", ln)
        arrow = toks.index("->")
        lhs, rhs = toks[:arrow], toks[arrow + 1:]
        if len(lhs) != 2 + k or len(rhs) != 3 + 2 * k:
            raise SpecificationError(
                f"rule arity mismatch for {k} work tape(s): {len(lhs)} source and "
                f"{len(rhs)} target fields", ln)
        q, ins, rw = lhs[0], lhs[1], tuple(lhs[2:])
        t, im = rhs[0], rhs[1]
        mw = tuple(rhs[2:2 + k])
        iw = rhs[2 + k]
        ww = tuple(rhs[3 + k:])
        for s in (q, t):
            if s not in known:
                raise SpecificationError(f"unknown state {s!r}", ln)
        for s in rw + ww:
            if s not in work_alpha:
                raise SpecificationError(f"unknown work symbol {s!r}", ln)
        if not input_free:
            for s in (ins, iw):
                if s != BLANK and s not in in_alpha and s not in work_alpha:
                    raise SpecificationError(f"unknown input symbol {s!r}", ln)
        rule = TransitionRule(q, _opt(ins), rw, t, _opt(im), mw, _opt(iw), ww, line=ln)
        if rule.key in seen:
            raise SpecificationError(
                f"duplicate deterministic source {rule.describe()} (first on line {seen[rule.key]})",
                ln)
        seen[rule.key] = ln
        rules.append(rule)

    return MachineSpec(
        name=name,
        states=frozenset(states),
        initial=one("initial"),
        halt=halt,
        accepting=frozenset(accepting),
        input_alphabet=frozenset(in_alpha),
        work_alphabet=frozenset(work_alpha),
        num_work_tapes=k,
        rules=tuple(rules),
        mode=mode,
    )


def dump_machine(spec: MachineSpec) -> str:
    def dash(x):
        return "-" if x is None else x

    lines = [
        f"machine {spec.name}",
        f"tapes {spec.num_work_tapes}",
        f"mode {spec.mode.value}",
        "states " + " ".join(sorted(spec.states)),
        f"initial {spec.initial}",
    ]
    if spec.halt is not None:
        lines.append(f"halt {spec.halt}")
    if spec.accepting:
        lines.append("accepting " + " ".join(sorted(spec.accepting)))
    if spec.input_alphabet:
        lines.append("input-alphabet " + " ".join(sorted(spec.input_alphabet)))
    lines.append("work-alphabet " + " ".join(sorted(spec.work_alphabet)))
    for r in spec.rules:
        lines.append(" ".join(
            ["rule", r.source, dash(r.read_input), *r.read_work, "->", r.target,
             dash(r.move_input), *r.move_work, dash(r.write_input), *r.write_work]))
    return "\n".join(lines) + "\n"


def shipped_machine_text(name: str) -> str:
    return resources.files("rtlab.data").joinpath(f"{name}.rtm").read_text()


def load_shipped(name: str) -> MachineSpec:
    return load_machine(shipped_machine_text(name))
