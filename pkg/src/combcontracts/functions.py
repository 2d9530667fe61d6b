"""Reward set functions accessed through value queries.

Every reward function maps bitmask action sets over ``{0, ..., n-1}`` to exact
rationals and satisfies ``value(0) == 0``.  Families built from parameters
(additive, symmetric, budget-additive, unit-demand, OXS) are monotone by
construction; explicit tables are checked when built.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import CapacityError, InputError
from .sets import (
    RationalLike,
    check_n,
    check_set,
    from_members,
    full_set,
    members,
    rationals,
    scaled_integers,
    size,
    to_rational,
)

MAX_TABLE_N = 20

ZERO = Fraction(0)


class RewardFunction:
    """Base class of all value oracles.

    Subclasses implement :meth:`_value`; :meth:`value` validates the query.
    """

    n: int
    kind: str = "abstract"

    def value(self, S: int) -> Fraction:
        check_set(S, self.n)
        return self._value(S)

    __call__ = value

    def _value(self, S: int) -> Fraction:
        raise NotImplementedError

    def marginal(self, a: int, S: int) -> Fraction:
        """``f(S + a) - f(S)`` for an action ``a`` outside ``S``."""
        check_set(S, self.n)
        if not 0 <= a < self.n:
            raise InputError(f"action {a} outside ground set of size {self.n}")
        if S >> a & 1:
            raise InputError(f"action {a} already belongs to the set")
        return self._value(S | 1 << a) - self._value(S)

    def table(self) -> list[Fraction]:
        """All ``2**n`` values indexed by bitmask."""
        check_n(self.n, MAX_TABLE_N, "value table")
        v = self._value
        return [v(S) for S in range(1 << self.n)]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"


class ExplicitTable(RewardFunction):
    kind = "explicit"

    def __init__(self, values: Sequence[RationalLike], check_monotone: bool = True):
        values = rationals(values)
        n = len(values).bit_length() - 1
        if len(values) != 1 << n:
            raise InputError(f"table length must be a power of two, got {len(values)}")
        check_n(n, MAX_TABLE_N, "explicit table")
        if values[0] != 0:
            raise InputError("reward of the empty set must be 0")
        self.n = n
        self.values = values
        if check_monotone:
            bad = first_monotonicity_violation(values, n)
            if bad is not None:
                S, a = bad
                raise InputError(
                    f"table is not monotone: f({S} + {a}) < f({S})"
                )

    @classmethod
    def from_function(cls, f: RewardFunction, check_monotone: bool = False) -> "ExplicitTable":
        return cls(f.table(), check_monotone=check_monotone)

    def _value(self, S: int) -> Fraction:
        return self.values[S]

    def table(self) -> list[Fraction]:
        return list(self.values)


def first_monotonicity_violation(values: Sequence[Fraction], n: int):
    """Smallest ``(S, a)`` with ``values[S | a] < values[S]``, or None."""
    for S in range(1 << n):
        vS = values[S]
        for a in range(n):
            if not S >> a & 1 and values[S | 1 << a] < vS:
                return S, a
    return None


class Additive(RewardFunction):
    kind = "additive"

    def __init__(self, weights: Sequence[RationalLike]):
        self.weights = rationals(weights)
        self.n = check_n(len(self.weights))
        if any(w < 0 for w in self.weights):
            raise InputError("additive weights must be nonnegative")
        self._ints, self._den = scaled_integers(self.weights) if self.weights else ([], 1)

    def _value(self, S: int) -> Fraction:
        ints = self._ints
        total = 0
        a = 0
        while S:
            if S & 1:
                total += ints[a]
            S >>= 1
            a += 1
        return Fraction(total, self._den)


class Symmetric(RewardFunction):
    """``f(S) = levels[|S|]``."""

    kind = "symmetric"

    def __init__(self, levels: Sequence[RationalLike]):
        self.levels = rationals(levels)
        if not self.levels:
            raise InputError("symmetric function needs at least one level")
        self.n = check_n(len(self.levels) - 1)
        if self.levels[0] != 0:
            raise InputError("level 0 of a symmetric reward must be 0")
        if any(b < a for a, b in zip(self.levels, self.levels[1:])):
            raise InputError("symmetric reward levels must be nondecreasing")

    def _value(self, S: int) -> Fraction:
        return self.levels[size(S)]


class BudgetAdditive(RewardFunction):
    """``f(S) = min(B, sum of weights in S)``."""

    kind = "budget_additive"

    def __init__(self, weights: Sequence[RationalLike], budget: RationalLike):
        self.weights = rationals(weights)
        self.budget = to_rational(budget)
        self.n = check_n(len(self.weights))
        if any(w < 0 for w in self.weights) or self.budget < 0:
            raise InputError("budget-additive weights and budget must be nonnegative")
        self._additive = Additive(self.weights)

    def _value(self, S: int) -> Fraction:
        return min(self.budget, self._additive._value(S))


class UnitDemand(RewardFunction):
    """``f(S) = max weight in S`` (0 on the empty set)."""

    kind = "unit_demand"

    def __init__(self, weights: Sequence[RationalLike]):
        self.weights = rationals(weights)
        self.n = check_n(len(self.weights))
        if any(w < 0 for w in self.weights):
            raise InputError("unit-demand weights must be nonnegative")

    def _value(self, S: int) -> Fraction:
        w = self.weights
        return max((w[a] for a in members(S)), default=ZERO)


class OXS(RewardFunction):
    """Maximum-weight matching of the actions in ``S`` to ``m`` slots.

    ``weights[j][a]`` is the value of assigning action ``a`` to slot ``j``.
    Values are memoized; the matching is solved exactly by dynamic programming
    over subsets of the smaller side.
    """

    kind = "oxs"

    def __init__(self, weights: Sequence[Sequence[RationalLike]]):
        rows = [rationals(row) for row in weights]
        if not rows:
            raise InputError("OXS needs at least one slot")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise InputError("OXS weight matrix rows must have equal length")
        if any(w < 0 for r in rows for w in r):
            raise InputError("OXS weights must be nonnegative")
        self.n = check_n(n)
        self.weights = tuple(rows)
        self.m = len(rows)
        flat, self._den = scaled_integers([w for r in rows for w in r])
        self._w = [flat[j * n:(j + 1) * n] for j in range(self.m)]
        self._cache: dict[int, Fraction] = {}

    def _value(self, S: int) -> Fraction:
        hit = self._cache.get(S)
        if hit is None:
            hit = self._cache[S] = Fraction(self._matching(members(S)), self._den)
        return hit

    def _matching(self, acts: list[int]) -> int:
        w = self._w
        if not acts:
            return 0
        if self.m <= len(acts):
            # dp over used-slot masks, one action at a time
            best = {0: 0}
            for a in acts:
                nxt = dict(best)
                for used, val in best.items():
                    for j in range(self.m):
                        if not used >> j & 1 and w[j][a]:
                            key = used | 1 << j
                            cand = val + w[j][a]
                            if cand > nxt.get(key, -1):
                                nxt[key] = cand
                best = nxt
        else:
            # acts is the smaller side: dp over used-action masks, one slot at a time
            k = len(acts)
            best = {0: 0}
            for j in range(self.m):
                row = w[j]
                nxt = dict(best)
                for used, val in best.items():
                    for i in range(k):
                        if not used >> i & 1 and row[acts[i]]:
                            key = used | 1 << i
                            cand = val + row[acts[i]]
                            if cand > nxt.get(key, -1):
                                nxt[key] = cand
                best = nxt
        return max(best.values())


class Truncated(RewardFunction):
    """``f_t(S) = f(S)`` if ``|S| <= t``; else the best ``t``-subset value of ``S``."""

    kind = "truncated"

    def __init__(self, inner: RewardFunction, t: int):
        if not isinstance(t, int) or not 1 <= t <= inner.n:
            raise InputError(f"truncation size must lie in [1, {inner.n}], got {t!r}")
        self.inner = inner
        self.t = t
        self.n = inner.n
        self._cache: dict[int, Fraction] = {}
        self._lock = threading.Lock()

    def _value(self, S: int) -> Fraction:
        if size(S) <= self.t:
            return self.inner._value(S)
        hit = self._cache.get(S)
        if hit is None:
            v = self.inner._value
            hit = max(v(from_members(c)) for c in combinations(members(S), self.t))
            with self._lock:
                self._cache[S] = hit
        return hit


class ScaledMinusSymmetric(RewardFunction):
    """``h(S) = alpha * f(S) - levels[|S|]``; may be non-monotone."""

    kind = "scaled_minus_symmetric"

    def __init__(self, inner: RewardFunction, alpha: RationalLike, levels: Sequence[RationalLike]):
        self.inner = inner
        self.alpha = to_rational(alpha)
        self.levels = _symmetric_levels(levels, inner.n)
        self.n = inner.n

    def _value(self, S: int) -> Fraction:
        return self.alpha * self.inner._value(S) - self.levels[size(S)]


class PlusSymmetric(RewardFunction):
    """``h(S) = f(S) + levels[|S|]`` with nondecreasing levels.

    Adding a cardinality-only term leaves the exchange inequality untouched,
    so an Ultra ``f`` yields an Ultra ``h``; a convex bonus makes it
    non-submodular.
    """

    kind = "plus_symmetric"

    def __init__(self, inner: RewardFunction, levels: Sequence[RationalLike]):
        self.inner = inner
        self.levels = _symmetric_levels(levels, inner.n)
        self.n = inner.n

    def _value(self, S: int) -> Fraction:
        return self.inner._value(S) + self.levels[size(S)]


def _symmetric_levels(levels, n: int) -> tuple[Fraction, ...]:
    levels = rationals(levels)
    if len(levels) != n + 1:
        raise InputError(f"expected {n + 1} symmetric levels, got {len(levels)}")
    if levels[0] != 0:
        raise InputError("symmetric level g_0 must be 0")
    if any(b < a for a, b in zip(levels, levels[1:])):
        raise InputError("symmetric levels must be nondecreasing")
    return levels


def make_additive(weights) -> Additive:
    return Additive(weights)


def make_symmetric(levels) -> Symmetric:
    return Symmetric(levels)


def make_budget_additive(weights, budget) -> BudgetAdditive:
    return BudgetAdditive(weights, budget)


def make_unit_demand(weights) -> UnitDemand:
    return UnitDemand(weights)


def make_oxs(weights) -> OXS:
    return OXS(weights)


def make_explicit(values, check_monotone: bool = True) -> ExplicitTable:
    return ExplicitTable(values, check_monotone=check_monotone)


def value(f: RewardFunction, S: int) -> Fraction:
    return f.value(S)


def marginal(f: RewardFunction, a: int, S: int) -> Fraction:
    return f.marginal(a, S)


def truncate(f: RewardFunction, t: int) -> RewardFunction:
    """The ``t``-truncation of ``f``; returns ``f`` itself when ``t == n``."""
    trunc = Truncated(f, t)
    if t == f.n:
        return f
    return trunc


def scale_minus_symmetric(f: RewardFunction, alpha, levels) -> ScaledMinusSymmetric:
    return ScaledMinusSymmetric(f, alpha, levels)


def add_symmetric(f: RewardFunction, levels) -> PlusSymmetric:
    return PlusSymmetric(f, levels)


def materialize(f: RewardFunction) -> ExplicitTable:
    """Snapshot ``f`` into an explicit table (no monotonicity check)."""
    if isinstance(f, ExplicitTable):
        return f
    if f.n > MAX_TABLE_N:
        raise CapacityError(f"cannot tabulate n = {f.n} > {MAX_TABLE_N}")
    return ExplicitTable(f.table(), check_monotone=False)


def grand_set(f: RewardFunction) -> int:
    return full_set(f.n)
