"""Brute-force references used to validate the machines and constructions.

Nothing here imports the engine or the counter, so every check against
these functions is independent of the code path under test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterator, Sequence

# -- squares -----------------------------------------------------------------


def is_perfect_square(n: int) -> bool:
    """Accumulate 1 + 3 + 5 + ... until the running sum reaches n."""
    if n < 0:
        return False
    total, odd = 0, 1
    while total < n:
        total += odd
        odd += 2
    return total == n


def isqrt_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def in_square_language(word: str, include_zero: bool = False) -> bool:
    """Membership in {a^n b x : n square, x in {a,b}*}; n = 0 only if asked."""
    n = len(word) - len(word.lstrip("a"))
    if n == len(word) or set(word) - {"a", "b"}:
        return False
    if n == 0 and not include_zero:
        return False
    return is_perfect_square(n)


# -- binary counter ground truth --------------------------------------------

_MD = {
    ("q0", "#"): ("q1", -1, "#"),
    ("q0", "0"): ("q0", 1, "0"),
    ("q0", "1"): ("q0", 1, "1"),
    ("q1", "#"): ("q0", 1, "1"),
    ("q1", "0"): ("q0", 1, "1"),
    ("q1", "1"): ("q1", -1, "0"),
}


@dataclass(frozen=True)
class MdSnapshot:
    cells: tuple[tuple[int, str], ...]  # non-blank cells, ascending offset
    head: int
    state: str
    lowest: int  # leftmost cell ever visited

    def digits(self) -> str:
        return "".join(s for _, s in self.cells)

    def symbol(self, cell: int) -> str:
        return dict(self.cells).get(cell, "#")

    @property
    def normal_form(self) -> bool:
        return self.state == "q0" and self.head == 0


def md_trajectory(steps: int) -> Iterator[tuple[int, MdSnapshot]]:
    """Yield (completed increments, snapshot) for t = 0, 1, ..., steps."""
    tape: dict[int, str] = {}
    head, state, lowest, value = 0, "q0", 0, 0
    for t in range(steps + 1):
        if t:
            sym = tape.get(head, "#")
            state, move, write = _MD[(state, sym)]
            if write == "#":
                tape.pop(head, None)
            else:
                tape[head] = write
            head += move
            lowest = min(lowest, head)
            if state == "q0" and head == 0:
                value += 1
        yield value, MdSnapshot(tuple(sorted(tape.items())), head, state, lowest)


def md_reference(t: int) -> tuple[int, MdSnapshot]:
    """Completed increments and configuration of the counter after t raw steps."""
    if t < 0:
        raise ValueError("t must be non-negative")
    for out in md_trajectory(t):
        pass
    return out


def md_normal_form_steps(max_value: int) -> dict[int, int]:
    """Brute-force step count at which each counter value first sits in normal form."""
    tape: dict[int, str] = {}
    head, state, value, t = 0, "q0", 0, 0
    found: dict[int, int] = {}
    while value < max_value:
        t += 1
        state, move, write = _MD[(state, tape.get(head, "#"))]
        tape[head] = write
        head += move
        if state == "q0" and head == 0:
            value += 1
            found[value] = t
    return found


# -- Myhill-Nerode evidence --------------------------------------------------


@dataclass
class NerodeReport:
    prefixes: list[str]
    witness: dict[tuple[str, str], str]
    count: int

    def verify(self, membership: Callable[[str], bool]) -> bool:
        """Re-check every witness; also checks that every pair has one."""
        for u, v in combinations(self.prefixes, 2):
            s = self.witness.get((u, v))
            if s is None or membership(u + s) == membership(v + s):
                return False
        return len(self.prefixes) == self.count


def nerode_lower_bound(membership: Callable[[str], bool], prefixes: Sequence[str],
                       suffixes: Sequence[str]) -> NerodeReport:
    """Keep one prefix per distinct row of the membership table.

    Prefixes with different rows are pairwise distinguished; the number of
    distinct rows bounds the state count of any DFA for the language.
    """
    rows: dict[int, str] = {}
    masks: dict[str, int] = {}
    for u in prefixes:
        mask = 0
        for j, s in enumerate(suffixes):
            if membership(u + s):
                mask |= 1 << j
        if mask not in rows:
            rows[mask] = u
            masks[u] = mask
    reps = list(rows.values())
    witness = {}
    for u, v in combinations(reps, 2):
        diff = masks[u] ^ masks[v]
        witness[(u, v)] = suffixes[(diff & -diff).bit_length() - 1]
    return NerodeReport(reps, witness, len(reps))


# -- primality ---------------------------------------------------------------


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


@dataclass(frozen=True)
class PrattCertificate:
    p: int
    generator: int
    factors: tuple[tuple[int, int], ...] = ()
    children: tuple["PrattCertificate", ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "generator": self.generator,
            "factors": [list(f) for f in self.factors],
            "children": [c.to_dict() for c in self.children],
        }


def _counted_pow(base: int, exp: int, mod: int, ops: list[int]) -> int:
    result = 1
    base %= mod
    while exp:
        if exp & 1:
            result = result * base % mod
            ops[0] += 1
        exp >>= 1
        if exp:
            base = base * base % mod
            ops[0] += 1
    return result


def pratt_generate(p: int) -> PrattCertificate:
    if not trial_division_is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return PrattCertificate(2, 1)
    factors = tuple(factorize(p - 1))
    g = 2
    while True:
        if pow(g, p - 1, p) == 1 and all(pow(g, (p - 1) // q, p) != 1 for q, _ in factors):
            break
        g += 1
    children = tuple(pratt_generate(q) for q, _ in factors if q > 2)
    return PrattCertificate(p, g, factors, children)


def pratt_verify(p: int, cert: PrattCertificate) -> bool:
    return pratt_check(p, cert)[0]


def pratt_check(p: int, cert: PrattCertificate) -> tuple[bool, int]:
    """(valid, elementary operations spent); operations are modular
    multiplications plus one per factor and per child lookup."""
    ops = [0]
    ok = _check(p, cert, ops)
    return ok, ops[0]


def _check(p: int, cert: PrattCertificate, ops: list[int]) -> bool:
    ops[0] += 1
    if not isinstance(cert, PrattCertificate) or cert.p != p or p < 2:
        return False
    if p == 2:
        return cert.generator == 1 and not cert.factors and not cert.children
    g = cert.generator
    if not 1 < g < p:
        return False
    prod = 1
    qs = []
    for q, e in cert.factors:
        ops[0] += 1
        if q < 2 or e < 1 or q in qs:
            return False
        qs.append(q)
        prod *= q ** e
    if prod != p - 1:
        return False
    if _counted_pow(g, p - 1, p, ops) != 1:
        return False
    for q in qs:
        if _counted_pow(g, (p - 1) // q, p, ops) == 1:
            return False
    # every factor other than 2 needs its own certificate
    needs = [q for q in qs if q > 2]
    if sorted(c.p for c in cert.children) != sorted(needs):
        return False
    by_p = {c.p: c for c in cert.children}
    for q in needs:
        ops[0] += 1
        if not _check(q, by_p[q], ops):
            return False
    return True


@lru_cache(maxsize=None)
def multiplicative_order(g: int, p: int) -> int | None:
    """Order of g modulo p by repeated multiplication; None if g is not a unit."""
    if math.gcd(g, p) != 1 or p < 2:
        return None
    x, k = g % p, 1
    while x != 1 % p:
        x = x * g % p
        k += 1
    return k


def pratt_valid_by_order(cert: PrattCertificate) -> bool:
    """Certificate validity decided a second way: factors by trial division,
    generator order by brute force, children recursively."""
    p = cert.p
    if not isinstance(p, int) or p < 2:
        return False
    if p == 2:
        return cert.generator == 1 and not cert.factors and not cert.children
    qs = [q for q, _ in cert.factors]
    if len(set(qs)) != len(qs) or any(e < 1 for _, e in cert.factors):
        return False
    if math.prod(q ** e for q, e in cert.factors) != p - 1:
        return False
    if not all(trial_division_is_prime(q) for q in qs):
        return False
    if not 1 < cert.generator < p or multiplicative_order(cert.generator, p) != p - 1:
        return False
    wanted = sorted(q for q in qs if q > 2)
    if sorted(c.p for c in cert.children) != wanted:
        return False
    return all(pratt_valid_by_order(c) for c in cert.children)


def mutate_certificate(cert: PrattCertificate, rng) -> PrattCertificate:
    """One random local edit: generator, p, a factor, an exponent or a child."""
    kind = rng.randrange(7)
    facts = list(cert.factors)
    kids = list(cert.children)
    if kind == 0:
        return PrattCertificate(cert.p, rng.randrange(0, cert.p + 2), cert.factors, cert.children)
    if kind == 1:
        return PrattCertificate(cert.p + rng.choice([-2, -1, 1, 2]), cert.generator,
                                cert.factors, cert.children)
    if kind == 2 and facts:
        i = rng.randrange(len(facts))
        q, e = facts[i]
        facts[i] = (q, max(0, e + rng.choice([-1, 1])))
    elif kind == 3 and facts:
        facts.pop(rng.randrange(len(facts)))
    elif kind == 4:
        facts.append((rng.randrange(2, max(3, cert.p)), rng.randrange(1, 3)))
    elif kind == 5 and kids:
        i = rng.randrange(len(kids))
        kids[i] = mutate_certificate(kids[i], rng)
    elif kind == 6 and kids:
        kids.pop(rng.randrange(len(kids)))
    else:
        q = rng.randrange(2, max(3, cert.p))
        facts = [(q * f, e) if i == 0 else (f, e) for i, (f, e) in enumerate(facts)] or [(q, 1)]
    return PrattCertificate(cert.p, cert.generator, tuple(facts), tuple(kids))
