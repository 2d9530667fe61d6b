"""Seeded random instances for every reward family and cost shape.

All draws come from a ``random.Random`` passed in (or built from a seed), and
every number is a small-denominator rational, so instances are exact and
reproducible.  Classes are guaranteed by construction except for
:func:`ultra_rejection`, which certifies each sample with the triplet check.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .classes import check_triplet
from .contracts import PERTURB_BITS
from .costs import Instance, SPACost
from .errors import CapacityError, InputError
from .functions import (
    OXS,
    Additive,
    BudgetAdditive,
    ExplicitTable,
    PlusSymmetric,
    RewardFunction,
    Symmetric,
    UnitDemand,
)

DEN = 20
REJECTION_BUDGET = 10**4
REJECTION_MAX_N = 6
# per-set bump probability: dense enough to be interesting, sparse enough to pass often
BUMP_RATE = {1: 0.5, 2: 0.5, 3: 0.4, 4: 0.2, 5: 0.1, 6: 0.05}


class RejectionBudgetExhausted(CapacityError):
    pass


def _rng(rng) -> random.Random:
    return rng if isinstance(rng, random.Random) else random.Random(rng)


def _rat(rng: random.Random, lo: int = 0, hi: int = DEN, den: int = DEN) -> Fraction:
    return Fraction(rng.randint(lo, hi), den)


def _increments_to_levels(steps) -> list[Fraction]:
    levels = [Fraction(0)]
    for s in steps:
        levels.append(levels[-1] + s)
    return levels


def additive(n: int, rng=None) -> Additive:
    rng = _rng(rng)
    return Additive([_rat(rng, 1) for _ in range(n)])


def symmetric_concave(n: int, rng=None) -> Symmetric:
    rng = _rng(rng)
    steps = sorted((_rat(rng) for _ in range(n)), reverse=True)
    return Symmetric(_increments_to_levels(steps))


def symmetric_any(n: int, rng=None) -> Symmetric:
    rng = _rng(rng)
    return Symmetric(_increments_to_levels(_rat(rng) for _ in range(n)))


def budget_additive(n: int, rng=None) -> BudgetAdditive:
    rng = _rng(rng)
    w = [_rat(rng, 1) for _ in range(n)]
    # budget somewhere inside the range of totals so it binds for some sets
    budget = sum(w) * Fraction(rng.randint(3, 8), 10)
    return BudgetAdditive(w, budget)


def unit_demand(n: int, rng=None) -> UnitDemand:
    rng = _rng(rng)
    return UnitDemand([_rat(rng, 1) for _ in range(n)])


def oxs(n: int, rng=None, m: int | None = None, density: float = 0.7) -> OXS:
    """Random bipartite matching valuation with ``m`` slots (default ``1..n``)."""
    rng = _rng(rng)
    if m is None:
        m = rng.randint(1, max(1, n))
    rows = [[_rat(rng, 1) if rng.random() < density else Fraction(0) for _ in range(n)] for _ in range(m)]
    return OXS(rows)


def convex_levels(n: int, rng=None, scale: int = 1) -> list[Fraction]:
    rng = _rng(rng)
    steps = sorted(_rat(rng) * scale for _ in range(n))
    return _increments_to_levels(steps)


def ultra(n: int, rng=None, m: int | None = None) -> RewardFunction:
    """Monotone Ultra reward, typically not submodular.

    An OXS valuation plus a convex cardinality bonus: exchanges preserve set
    sizes, so the bonus cancels in the exchange inequality.
    """
    rng = _rng(rng)
    if m is None:
        m = rng.randint(1, min(n, 4))
    return PlusSymmetric(oxs(n, rng, m), convex_levels(n, rng))


def ultra_mixed(n: int, rng=None) -> RewardFunction:
    """Draw from several Ultra sources: GS families, bonus-shifted ones, symmetric."""
    rng = _rng(rng)
    kind = rng.randrange(5)
    if kind == 0:
        return ultra(n, rng)
    if kind == 1:
        return PlusSymmetric(additive(n, rng), convex_levels(n, rng))
    if kind == 2:
        return PlusSymmetric(unit_demand(n, rng), symmetric_any(n, rng).levels)
    if kind == 3:
        return symmetric_any(n, rng)
    return oxs(n, rng)


def gs(n: int, rng=None) -> RewardFunction:
    """Gross-substitutes reward drawn from OXS, unit-demand, additive or concave symmetric."""
    rng = _rng(rng)
    kind = rng.randrange(4)
    if kind == 0:
        return unit_demand(n, rng)
    if kind == 1:
        return additive(n, rng)
    if kind == 2:
        return symmetric_concave(n, rng)
    return oxs(n, rng)


def wwl(n: int, rng=None) -> RewardFunction:
    """Weakly well-layered reward: budget-additive or an Ultra draw."""
    rng = _rng(rng)
    return budget_additive(n, rng) if rng.random() < 0.6 else ultra_mixed(n, rng)


def random_monotone_table(n: int, rng=None, bump: float | None = None) -> ExplicitTable:
    """Monotone table built upward: each set takes its best subset's value plus a rare bump."""
    rng = _rng(rng)
    if bump is None:
        bump = BUMP_RATE.get(n, 0.05)
    v = [Fraction(0)] * (1 << n)
    for S in range(1, 1 << n):
        base = max(v[S & ~(1 << a)] for a in range(n) if S >> a & 1)
        v[S] = base + (Fraction(rng.randint(1, 6), 4) if rng.random() < bump else 0)
    return ExplicitTable(v, check_monotone=False)


def ultra_rejection(n: int, rng=None, budget: int = REJECTION_BUDGET) -> ExplicitTable:
    """Random monotone table certified Ultra by the triplet check (``n <= 6``)."""
    if not 1 <= n <= REJECTION_MAX_N:
        raise CapacityError(f"rejection sampling supports 1 <= n <= {REJECTION_MAX_N}, got {n}")
    rng = _rng(rng)
    for _ in range(budget):
        f = random_monotone_table(n, rng)
        if f.values[-1] > 0 and check_triplet(f):
            return f
    raise RejectionBudgetExhausted(f"no Ultra table found in {budget} draws")


# --- costs -------------------------------------------------------------------


def additive_cost(n: int, rng=None, hi: int = DEN // 2) -> SPACost:
    rng = _rng(rng)
    return SPACost([_rat(rng, 1, hi) for _ in range(n)])


def degenerate_cost(n: int, rng=None) -> SPACost:
    """Additive cost with at least one duplicated action cost."""
    rng = _rng(rng)
    p = [_rat(rng, 1, DEN // 2) for _ in range(n)]
    if n >= 2:
        i, j = rng.sample(range(n), 2)
        p[j] = p[i]
    return SPACost(p)


def generic_cost(n: int, rng=None) -> SPACost:
    """Costs with ``2**40`` denominators; generic with overwhelming probability."""
    rng = _rng(rng)
    return SPACost([Fraction(rng.randrange(1, 1 << (PERTURB_BITS - 2)), 1 << PERTURB_BITS) for _ in range(n)])


def symmetric_cost(n: int, rng=None, hi: int = DEN // 2) -> SPACost:
    rng = _rng(rng)
    steps = [_rat(rng, 0, hi) for _ in range(n)]
    return SPACost.symmetric_only(_increments_to_levels(steps))


def spa_cost(n: int, rng=None) -> SPACost:
    """Additive part plus a nondecreasing (often convex) symmetric part."""
    rng = _rng(rng)
    p = [_rat(rng, 0, DEN // 2) for _ in range(n)]
    steps = [_rat(rng, 0, DEN // 4) for _ in range(n)]
    if rng.random() < 0.5:
        steps.sort()
    return SPACost(p, _increments_to_levels(steps))


REWARDS = {
    "additive": additive,
    "symmetric-concave": symmetric_concave,
    "budget-additive": budget_additive,
    "unit-demand": unit_demand,
    "oxs": oxs,
    "ultra": ultra,
    "ultra-rejection-sampled": ultra_rejection,
}

COSTS = {
    "additive": additive_cost,
    "spa": spa_cost,
    "symmetric": symmetric_cost,
    "generic": generic_cost,
    "degenerate": degenerate_cost,
}


def instance(reward_class: str, n: int, seed: int = 0, cost: str = "additive") -> Instance:
    """Instance from named reward and cost generators, one RNG seeded by ``seed``."""
    if reward_class not in REWARDS:
        raise InputError(f"unknown reward class {reward_class!r}; choose from {', '.join(REWARDS)}")
    if cost not in COSTS:
        raise InputError(f"unknown cost shape {cost!r}; choose from {', '.join(COSTS)}")
    if n < 1:
        raise InputError("n must be at least 1")
    rng = random.Random(seed)
    f = REWARDS[reward_class](n, rng)
    c = COSTS[cost](n, rng)
    return Instance(f, c, label=f"{reward_class}/{cost}/n={n}/seed={seed}")
