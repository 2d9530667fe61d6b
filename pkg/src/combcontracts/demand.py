"""Demand queries: greedy algorithms and the exhaustive oracle.

Tie-breaking is identical everywhere so results are consistent across
contracts: among equal agent utilities prefer the larger reward ``f``; among
residual ties prefer the lower action index (inside a greedy step) or the
lower bitmask (when choosing a set).  Chain-based algorithms also consider
``S_0 = {}`` in their final argmax, since the empty set always has utility 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .costs import Instance, SPACost, additive_weights
from .errors import InputError
from .functions import RewardFunction, truncate
from .sets import check_n, format_rational, rationals, scaled_integers, size, to_rational

BRUTE_FORCE_MAX_N = 16

ZERO = Fraction(0)


@dataclass(frozen=True)
class DemandResult:
    chosen: int
    utility: Fraction
    reward: Fraction
    trace: tuple[tuple[int, int], ...] = ()
    tie_events: int = 0
    candidates: tuple[int, ...] = ()
    demand: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "set": self.chosen,
            "utility": format_rational(self.utility),
            "reward": format_rational(self.reward),
            "trace": [list(step) for step in self.trace],
            "ties": self.tie_events,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _alpha(alpha) -> Fraction:
    alpha = to_rational(alpha)
    if not 0 <= alpha <= 1:
        raise InputError(f"contract must lie in [0, 1], got {alpha}")
    return alpha


def _prices(p, n: int) -> tuple[Fraction, ...]:
    p = additive_weights(p)
    if len(p) != n:
        raise InputError(f"expected {n} prices, got {len(p)}")
    if any(x < 0 for x in p):
        raise InputError("prices must be nonnegative")
    return p


def _levels(g, n: int) -> tuple[Fraction, ...]:
    if g is None:
        return (ZERO,) * (n + 1)
    g = rationals(g)
    if len(g) != n + 1 or g[0] != 0 or any(b < a for a, b in zip(g, g[1:])):
        raise InputError("symmetric cost levels must be nondecreasing with g_0 = 0")
    return g


def _price_of(S: int, p: Sequence[Fraction]) -> Fraction:
    total = ZERO
    a = 0
    while S:
        if S & 1:
            total += p[a]
        S >>= 1
        a += 1
    return total


def _step(S: int, fS: Fraction, n: int, f: RewardFunction, score):
    """One greedy step: ``(x, f(S + x), score, f-marginal, tied)`` or None if no action is left.

    ``score(x, m)`` maps action and reward marginal ``m`` to the quantity
    being maximized.
    """
    v = f._value
    best = None
    tied = False
    for x in range(n):
        if S >> x & 1:
            continue
        fx = v(S | 1 << x)
        m = fx - fS
        s = score(x, m)
        if best is None or s > best[2] or (s == best[2] and m > best[3]):
            if best is not None and s == best[2]:
                tied = True
            else:
                tied = False
            best = (x, fx, s, m)
        elif s == best[2]:
            tied = True
    if best is None:
        return None
    return best + (tied,)


def _select(candidates, utility, reward) -> tuple[int, int]:
    """Pick the best candidate set; returns ``(index, tie_flag)``."""
    best_i = 0
    tied = False
    for i in range(1, len(candidates)):
        u, bu = utility[i], utility[best_i]
        if u > bu or (u == bu and (reward[i] > reward[best_i]
                                    or (reward[i] == reward[best_i] and candidates[i] < candidates[best_i]))):
            tied = u == bu
            best_i = i
        elif u == bu:
            tied = True
    return best_i, tied


def _finish(alpha, chain, fvals, pvals, gl, trace, ties) -> DemandResult:
    util = [alpha * fv - pv - gl[size(S)] for S, fv, pv in zip(chain, fvals, pvals)]
    i, tied = _select(chain, util, fvals)
    return DemandResult(
        chosen=chain[i],
        utility=util[i],
        reward=fvals[i],
        trace=tuple(trace),
        tie_events=ties + int(tied),
        candidates=tuple(chain),
    )


def _chain(alpha, f, p, g, steps, stop_rule=None):
    """Shared greedy chain; ``stop_rule(score, m)`` returns True to stop."""
    n = f.n
    S, fS, pS = 0, f._value(0), ZERO
    chain, fvals, pvals, trace = [0], [fS], [ZERO], []
    ties = 0
    for i in range(steps):
        gstep = g[i + 1] - g[i]
        step = _step(S, fS, n, f, lambda x, m: alpha * m - p[x] - gstep)
        if step is None:
            break
        x, fx, s, m, tied = step
        if stop_rule is not None and stop_rule(s, m):
            ties += int(tied)
            break
        ties += int(tied)
        S |= 1 << x
        fS = fx
        pS += p[x]
        chain.append(S)
        fvals.append(fS)
        pvals.append(pS)
        trace.append((x, S))
    return chain, fvals, pvals, trace, ties


def _gs_stop(score: Fraction, m: Fraction) -> bool:
    # a zero-utility step is still taken when it raises the reward
    return score < 0 or (score == 0 and m <= 0)


def _literal_stop(score: Fraction, m: Fraction) -> bool:
    return score <= 0


def greedy_gs1(f: RewardFunction, p) -> int:
    """Demand under additive prices for a GS valuation; stops at the first nonpositive marginal."""
    n = f.n
    p = _prices(p, n)
    S, fS = 0, f._value(0)
    for _ in range(n):
        step = _step(S, fS, n, f, lambda x, m: m - p[x])
        if step is None or step[2] <= 0:
            break
        S |= 1 << step[0]
        fS = step[1]
    return S


def greedy_gs2(
    alpha, f: RewardFunction, p, max_steps: int | None = None, literal_stop: bool = False
) -> DemandResult:
    """Contract demand for GS rewards and additive costs.

    Greedy on ``alpha * f(x|S) - p(x)``.  The walk stops at a negative best
    marginal, or at a zero one that does not raise ``f``: a zero-utility step
    with positive reward gain is taken, which is the reward-favouring tie rule
    applied to the stop decision.  ``literal_stop`` stops at any nonpositive
    marginal instead; that variant matches the demand in utility but may
    return a set of lower reward.  ``max_steps`` caps the chain length.
    """
    alpha = _alpha(alpha)
    n = f.n
    p = _prices(p, n)
    steps = n if max_steps is None else min(n, max_steps)
    rule = _literal_stop if literal_stop else _gs_stop
    chain, fvals, pvals, trace, ties = _chain(alpha, f, p, (ZERO,) * (n + 1), steps, rule)
    S, fS, pS = chain[-1], fvals[-1], pvals[-1]
    return DemandResult(S, alpha * fS - pS, fS, tuple(trace), ties, tuple(chain))


def greedy_ultra1(f: RewardFunction, p) -> int:
    """Demand under additive prices for an Ultra valuation.

    Builds the whole chain and returns its best element (``S_0`` included).
    """
    res = greedy_ultra2(1, f, p)
    return res.chosen


def greedy_ultra2(alpha, f: RewardFunction, p) -> DemandResult:
    """Contract demand for Ultra rewards and additive costs."""
    alpha = _alpha(alpha)
    n = f.n
    p = _prices(p, n)
    g = (ZERO,) * (n + 1)
    chain, fvals, pvals, trace, ties = _chain(alpha, f, p, g, n)
    return _finish(alpha, chain, fvals, pvals, g, trace, ties)


def greedy_up_to_t(alpha, t: int, f: RewardFunction, p) -> DemandResult:
    """Ultra greedy chain stopped after ``t`` steps; demand for the ``t``-truncation."""
    alpha = _alpha(alpha)
    n = f.n
    if not isinstance(t, int) or not 1 <= t <= n:
        raise InputError(f"t must lie in [1, {n}], got {t!r}")
    p = _prices(p, n)
    g = (ZERO,) * (n + 1)
    chain, fvals, pvals, trace, ties = _chain(alpha, f, p, g, t)
    return _finish(alpha, chain, fvals, pvals, g, trace, ties)


def greedy_ultra_spa(alpha, f: RewardFunction, p, g) -> DemandResult:
    """Contract demand for Ultra rewards and symmetric-plus-additive costs."""
    alpha = _alpha(alpha)
    n = f.n
    p = _prices(p, n)
    g = _levels(g, n)
    chain, fvals, pvals, trace, ties = _chain(alpha, f, p, g, n)
    return _finish(alpha, chain, fvals, pvals, g, trace, ties)


def greedy_gs_spa(alpha, f: RewardFunction, p, g, literal_stop: bool = False) -> DemandResult:
    """Contract demand for GS rewards and SPA costs.

    Stops the additive-price greedy as :func:`greedy_gs2` does, then picks
    the best prefix under the full cost.
    """
    alpha = _alpha(alpha)
    n = f.n
    p = _prices(p, n)
    g = _levels(g, n)
    rule = _literal_stop if literal_stop else _gs_stop
    chain, fvals, pvals, trace, ties = _chain(alpha, f, p, (ZERO,) * (n + 1), n, rule)
    return _finish(alpha, chain, fvals, pvals, g, trace, ties)


def greedy_wwl_symmetric(alpha, f: RewardFunction, g) -> DemandResult:
    """Contract demand for weakly well-layered rewards and symmetric costs.

    The chain follows raw reward marginals and so does not depend on
    ``alpha``; only the final selection does.
    """
    alpha = _alpha(alpha)
    n = f.n
    g = _levels(g, n)
    v = f._value
    S, fS = 0, v(0)
    chain, fvals, trace, ties = [0], [fS], [], 0
    for _ in range(n):
        x, fx, _, _, tied = _step(S, fS, n, f, lambda x, m: m)
        ties += int(tied)
        S |= 1 << x
        fS = fx
        chain.append(S)
        fvals.append(fS)
        trace.append((x, S))
    return _finish(alpha, chain, fvals, [ZERO] * len(chain), g, trace, ties)


def demand_for_spa(alpha, f: RewardFunction, p, g, size_solver: Callable[[int], object]) -> DemandResult:
    """Best of ``{}, S_1, ..., S_n`` under the full SPA cost.

    ``size_solver(i)`` must return a best response of size at most ``i``
    under the additive part of the cost (an ``int`` bitmask or a
    :class:`DemandResult`).
    """
    alpha = _alpha(alpha)
    n = f.n
    p = _prices(p, n)
    g = _levels(g, n)
    chain = [0]
    for i in range(1, n + 1):
        S = size_solver(i)
        chain.append(S.chosen if isinstance(S, DemandResult) else int(S))
    v = f._value
    fvals = [v(S) for S in chain]
    pvals = [_price_of(S, p) for S in chain]
    return _finish(alpha, chain, fvals, pvals, g, [], 0)


def alt_greedy_ultra_spa(alpha, f: RewardFunction, p, g) -> DemandResult:
    """SPA demand assembled from :func:`greedy_up_to_t` for every size bound."""
    alpha = _alpha(alpha)
    return demand_for_spa(alpha, f, p, g, lambda i: greedy_up_to_t(alpha, i, f, p))


def alt_greedy_gs_spa(alpha, f: RewardFunction, p, g) -> DemandResult:
    """SPA demand assembled from :func:`greedy_gs2` on each truncation ``f_i``."""
    alpha = _alpha(alpha)
    return demand_for_spa(
        alpha, f, p, g, lambda i: greedy_gs2(alpha, truncate(f, i), p, max_steps=i)
    )


class BruteForceOracle:
    """Exhaustive demand over all ``2**n`` sets for a fixed ``(f, c)``.

    Values are tabulated once as integers over a common denominator, so each
    query is exact integer arithmetic.
    """

    def __init__(self, f: RewardFunction, c: SPACost):
        check_n(f.n, BRUTE_FORCE_MAX_N, "brute-force demand")
        if c.n != f.n:
            raise InputError("reward and cost dimensions differ")
        self.f, self.c, self.n = f, c, f.n
        self.fvals = f.table()
        self.cvals = c.table()
        self.F, self.Lf = scaled_integers(self.fvals)
        self.C, self.Lc = scaled_integers(self.cvals)

    def scores(self, alpha: Fraction) -> list[int]:
        """Agent utilities scaled by the positive constant ``den(alpha) * Lf * Lc``."""
        a, b = alpha.numerator * self.Lc, alpha.denominator * self.Lf
        return [a * Fi - b * Ci for Fi, Ci in zip(self.F, self.C)]

    def maximizers(self, alpha, sizes=None) -> list[int]:
        alpha = _alpha(alpha)
        u = self.scores(alpha)
        idx = range(1 << self.n) if sizes is None else [S for S in range(1 << self.n) if size(S) in sizes]
        best = max(u[S] for S in idx)
        return [S for S in idx if u[S] == best]

    def demand_sets(self, alpha) -> list[int]:
        D = self.maximizers(alpha)
        top = max(self.F[S] for S in D)
        return [S for S in D if self.F[S] == top]

    def __call__(self, alpha) -> DemandResult:
        alpha = _alpha(alpha)
        Dstar = self.demand_sets(alpha)
        S = Dstar[0]
        return DemandResult(
            chosen=S,
            utility=alpha * self.fvals[S] - self.cvals[S],
            reward=self.fvals[S],
            demand=tuple(Dstar),
        )


def brute_force_demand(f: RewardFunction, c, alpha) -> DemandResult:
    """Exhaustive demand; ``result.demand`` lists every set in the demand collection."""
    c = c if isinstance(c, SPACost) else SPACost(c)
    return BruteForceOracle(f, c)(alpha)


def best_response_of_size(f: RewardFunction, c, alpha, i: int, mode: str = "exactly") -> list[int]:
    """All utility maximizers among sets of size exactly ``i`` or at most ``i``."""
    c = c if isinstance(c, SPACost) else SPACost(c)
    if not 0 <= i <= f.n:
        raise InputError(f"size bound must lie in [0, {f.n}], got {i}")
    if mode == "exactly":
        sizes = {i}
    elif mode == "at_most":
        sizes = set(range(i + 1))
    else:
        raise InputError(f"mode must be 'exactly' or 'at_most', got {mode!r}")
    return BruteForceOracle(f, c).maximizers(alpha, sizes)


# --- oracles bound to an instance -------------------------------------------

Oracle = Callable[[Fraction], DemandResult]


def _need_additive(inst: Instance, name: str):
    if not inst.cost.is_additive:
        raise InputError(f"algorithm {name!r} requires an additive cost (symmetric part 0)")


def _need_symmetric(inst: Instance, name: str):
    if not inst.cost.is_symmetric:
        raise InputError(f"algorithm {name!r} requires a purely symmetric cost")


def make_oracle(name: str, inst: Instance) -> Oracle:
    """Bind demand algorithm ``name`` to an instance as ``alpha -> DemandResult``."""
    f, c = inst.reward, inst.cost
    p, g = c.additive, c.symmetric
    if name == "brute":
        return BruteForceOracle(f, c)
    if name == "gs2":
        _need_additive(inst, name)
        return lambda a: greedy_gs2(a, f, p)
    if name == "ultra2":
        _need_additive(inst, name)
        return lambda a: greedy_ultra2(a, f, p)
    if name == "ultra-spa":
        return lambda a: greedy_ultra_spa(a, f, p, g)
    if name == "alt-ultra-spa":
        return lambda a: alt_greedy_ultra_spa(a, f, p, g)
    if name == "gs-spa":
        return lambda a: greedy_gs_spa(a, f, p, g)
    if name == "alt-gs-spa":
        return lambda a: alt_greedy_gs_spa(a, f, p, g)
    if name == "wwl":
        _need_symmetric(inst, name)
        return lambda a: greedy_wwl_symmetric(a, f, g)
    raise InputError(f"unknown demand algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")


ALGORITHMS = ("brute", "gs2", "ultra2", "ultra-spa", "alt-ultra-spa", "gs-spa", "alt-gs-spa", "wwl")

# reward class each greedy algorithm is certified for, and the cost shape it needs
REQUIREMENTS = {
    "gs2": ("gs", "additive"),
    "ultra2": ("ultra", "additive"),
    "ultra-spa": ("ultra", "spa"),
    "alt-ultra-spa": ("ultra", "spa"),
    "gs-spa": ("gs", "spa"),
    "alt-gs-spa": ("gs", "spa"),
    "wwl": ("wwl", "symmetric"),
}
