"""Digit-serial arithmetic on canonical bit strings ("0" or 1{0,1}*).

These are the only operations the counter uses to turn a guessed counter
configuration into an input length; each has a matching ``*_cost`` giving
the number of elementary digit operations a tape implementation performs.
"""

from __future__ import annotations


class NegativeResult(ArithmeticError):
    """Subtraction went below zero; the calling branch dies."""


def canonical(bits: str) -> str:
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a bit string: {bits!r}")
    s = bits.lstrip("0")
    return s or "0"


def to_bits(n: int) -> str:
    if n < 0:
        raise NegativeResult(n)
    return format(n, "b")


def value(bits: str) -> int:
    v = 0
    for b in bits:
        v = 2 * v + (b == "1")
    return v


def binary_add(a: str, b: str) -> str:
    a, b = canonical(a), canonical(b)
    width = max(len(a), len(b))
    a, b = a.rjust(width, "0"), b.rjust(width, "0")
    out = []
    carry = 0
    for x, y in zip(reversed(a), reversed(b)):
        s = (x == "1") + (y == "1") + carry
        out.append("1" if s & 1 else "0")
        carry = s >> 1
    if carry:
        out.append("1")
    return canonical("".join(reversed(out)))


def binary_subtract(a: str, b: str) -> str:
    """a - b; raises :class:`NegativeResult` when b > a."""
    a, b = canonical(a), canonical(b)
    if len(b) > len(a):
        raise NegativeResult(f"{a} - {b}")
    b = b.rjust(len(a), "0")
    out = []
    borrow = 0
    for x, y in zip(reversed(a), reversed(b)):
        d = (x == "1") - (y == "1") - borrow
        borrow = 1 if d < 0 else 0
        out.append("1" if d & 1 else "0")
    if borrow:
        raise NegativeResult(f"{a} - {b}")
    return canonical("".join(reversed(out)))


def increment(a: str) -> str:
    return binary_add(a, "1")


def double_by_append0(a: str) -> str:
    a = canonical(a)
    return "0" if a == "0" else a + "0"


def proper_prefixes(a: str) -> list[str]:
    a = canonical(a)
    return [a[:i] for i in range(1, len(a))]


def sum_proper_prefixes(a: str) -> str:
    acc = "0"
    for p in proper_prefixes(a):
        acc = binary_add(acc, p)
    return acc


# Cost model: one elementary operation per digit position swept.

def add_cost(a: str, b: str) -> int:
    return max(len(canonical(a)), len(canonical(b)))


def subtract_cost(a: str, b: str) -> int:
    return max(len(canonical(a)), len(canonical(b)))


def double_cost(a: str) -> int:
    return 1


def sum_proper_prefixes_cost(a: str) -> int:
    acc, cost = "0", 0
    for p in proper_prefixes(a):
        cost += add_cost(acc, p)
        acc = binary_add(acc, p)
    return cost
