"""Bitmask action sets and exact rational helpers.

Action sets are plain ``int`` bitmasks: bit ``a`` is set iff action ``a`` is
in the set.  All numeric quantities are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import CapacityError, InputError, ParseError

MAX_N = 63

RationalLike = Union[int, str, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

EMPTY = 0


def full_set(n: int) -> int:
    return (1 << n) - 1


def size(S: int) -> int:
    return bin(S).count("1")


def members(S: int) -> list[int]:
    out = []
    a = 0
    while S:
        if S & 1:
            out.append(a)
        S >>= 1
        a += 1
    return out


def from_members(actions: Iterable[int]) -> int:
    S = 0
    for a in actions:
        if a < 0:
            raise InputError(f"negative action index {a}")
        S |= 1 << a
    return S


def contains(S: int, a: int) -> bool:
    return bool(S >> a & 1)


def complement(S: int, n: int) -> int:
    return full_set(n) & ~S


def subsets(S: int) -> Iterator[int]:
    """All subsets of ``S`` in increasing bitmask order."""
    sub = 0
    while True:
        yield sub
        if sub == S:
            return
        sub = (sub - S) & S


def subsets_of_size(universe: int, k: int) -> Iterator[int]:
    """All ``k``-subsets of ``universe`` (as bitmasks)."""
    from itertools import combinations

    for combo in combinations(members(universe), k):
        yield from_members(combo)


def check_set(S: int, n: int) -> int:
    if not isinstance(S, int) or S < 0:
        raise InputError(f"action set must be a nonnegative bitmask, got {S!r}")
    if S >> n:
        raise InputError(f"action set {S:#b} has bits outside the ground set of size {n}")
    return S


def check_n(n: int, limit: int = MAX_N, what: str = "ground set") -> int:
    if not isinstance(n, int) or n < 0:
        raise InputError(f"ground-set size must be a nonnegative integer, got {n!r}")
    if n > limit:
        raise CapacityError(f"{what} supports n <= {limit}, got n = {n}")
    return n


def format_set(S: int) -> str:
    return "{" + ",".join(map(str, members(S))) + "}"


def to_rational(x: RationalLike) -> Fraction:
    """Coerce ``x`` to an exact :class:`Fraction`.

    Accepts ``int``, ``Fraction`` and strings of the form ``"p/q"`` or ``"p"``.
    Floats are rejected because they are not exact.
    """
    if isinstance(x, bool):
        raise ParseError(f"booleans are not rationals: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise ParseError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ParseError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(r: Fraction) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


def rationals(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(to_rational(v) for v in values)


def common_denominator(values: Sequence[Fraction]) -> int:
    return math.lcm(1, *(v.denominator for v in values))


def scaled_integers(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Return ``(ints, L)`` with ``values[i] == ints[i] / L`` exactly."""
    L = common_denominator(values)
    return [v.numerator * (L // v.denominator) for v in values], L
