"""Symmetric-plus-additive cost functions and problem instances."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .functions import MAX_TABLE_N, RewardFunction
from .sets import RationalLike, check_n, check_set, rationals, scaled_integers, size


@dataclass(frozen=True)
class SPACost:
    """``c(S) = g(|S|) + sum(p[a] for a in S)``.

    ``additive`` holds ``p``; ``symmetric`` holds the levels ``g_0..g_n``
    (``g_0 = 0``, nondecreasing).  Omitting ``symmetric`` means ``g == 0``.
    """

    additive: tuple[Fraction, ...]
    symmetric: tuple[Fraction, ...] = field(default=())

    def __init__(self, additive: Sequence[RationalLike], symmetric: Sequence[RationalLike] | None = None):
        p = rationals(additive)
        n = len(p)
        g = rationals(symmetric) if symmetric is not None and len(symmetric) else (Fraction(0),) * (n + 1)
        if any(x < 0 for x in p):
            raise InputError("additive costs must be nonnegative")
        if len(g) != n + 1:
            raise InputError(f"expected {n + 1} symmetric cost levels, got {len(g)}")
        if g[0] != 0:
            raise InputError("symmetric cost level g_0 must be 0")
        if any(b < a for a, b in zip(g, g[1:])):
            raise InputError("symmetric cost levels must be nondecreasing")
        object.__setattr__(self, "additive", p)
        object.__setattr__(self, "symmetric", g)

    @classmethod
    def additive_only(cls, p) -> "SPACost":
        return cls(p)

    @classmethod
    def symmetric_only(cls, g) -> "SPACost":
        g = rationals(g)
        return cls([0] * (len(g) - 1), g)

    @property
    def n(self) -> int:
        return len(self.additive)

    @property
    def is_additive(self) -> bool:
        return not any(self.symmetric)

    @property
    def is_symmetric(self) -> bool:
        return not any(self.additive)

    def additive_part(self, S: int) -> Fraction:
        p = self.additive
        total = Fraction(0)
        a = 0
        while S:
            if S & 1:
                total += p[a]
            S >>= 1
            a += 1
        return total

    def value(self, S: int) -> Fraction:
        check_set(S, self.n)
        return self.symmetric[size(S)] + self.additive_part(S)

    __call__ = value

    def table(self) -> list[Fraction]:
        """All ``2**n`` costs indexed by bitmask, built by a subset recurrence."""
        n = check_n(self.n, MAX_TABLE_N, "cost table")
        ints, L = scaled_integers(self.additive + self.symmetric)
        p, g = ints[:n], ints[n:]
        acc = [0] * (1 << n)
        out = [Fraction(0)] * (1 << n)
        for S in range(1, 1 << n):
            low = S & -S
            acc[S] = acc[S ^ low] + p[low.bit_length() - 1]
            out[S] = Fraction(acc[S] + g[size(S)], L)
        return out

    def symmetric_step(self, k: int) -> Fraction:
        """``g(x | S)`` for any ``|S| == k``."""
        return self.symmetric[k + 1] - self.symmetric[k]

    def marginal(self, a: int, S: int) -> Fraction:
        if S >> a & 1:
            raise InputError(f"action {a} already belongs to the set")
        return self.additive[a] + self.symmetric_step(size(S))

    def perturbed(self, additive: Sequence[RationalLike]) -> "SPACost":
        return SPACost(additive, self.symmetric)


def as_cost(c) -> SPACost:
    if isinstance(c, SPACost):
        return c
    return SPACost(c)


def additive_weights(c) -> tuple[Fraction, ...]:
    """Prices of an additive cost, given as an ``SPACost`` with ``g == 0`` or a sequence."""
    if isinstance(c, SPACost):
        if not c.is_additive:
            raise InputError("an additive cost function is required (symmetric part must be 0)")
        return c.additive
    return rationals(c)


@dataclass(frozen=True)
class Instance:
    reward: RewardFunction
    cost: SPACost
    label: str = ""

    def __post_init__(self):
        if self.reward.n != self.cost.n:
            raise InputError(
                f"reward has n = {self.reward.n} but cost has dimension {self.cost.n}"
            )

    @property
    def n(self) -> int:
        return self.reward.n
