"""Critical values, optimal linear contracts and the structural diagnostics
behind the polynomial bounds on the number of critical values.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .classes import Verdict
from .costs import SPACost, additive_weights, as_cost
from .demand import DemandResult
from .errors import InputError, OracleError
from .functions import RewardFunction
from .sets import check_n, check_set, format_rational, members, scaled_integers, size, to_rational

SCHEDULE_MAX_N = 14
GAMMA_MAX_N = 8
PERTURB_BITS = 40


def agent_utility(f: RewardFunction, c, alpha, S: int) -> Fraction:
    c = as_cost(c)
    return to_rational(alpha) * f.value(S) - c.value(S)


def principal_utility(f: RewardFunction, alpha, S: int) -> Fraction:
    return (1 - to_rational(alpha)) * f.value(S)


@dataclass(frozen=True)
class Breakpoint:
    alpha: Fraction
    before: int
    after: int
    f_before: Fraction
    f_after: Fraction
    c_before: Fraction
    c_after: Fraction

    @property
    def line_before(self) -> tuple[Fraction, Fraction]:
        return self.f_before, self.c_before

    @property
    def line_after(self) -> tuple[Fraction, Fraction]:
        return self.f_after, self.c_after


@dataclass(frozen=True)
class CriticalSchedule:
    """Best response on ``(0, alpha_1)`` plus the ordered breakpoints in ``(0, 1]``.

    At a breakpoint the agent already plays the ``after`` set (ties favour
    the higher reward).
    """

    initial: int
    breakpoints: tuple[Breakpoint, ...]

    def __len__(self) -> int:
        return len(self.breakpoints)

    @property
    def alphas(self) -> list[Fraction]:
        return [b.alpha for b in self.breakpoints]

    @property
    def sets(self) -> list[int]:
        """Best responses in order: the initial set, then each ``after`` set."""
        return [self.initial] + [b.after for b in self.breakpoints]

    def lines(self) -> list[tuple]:
        """Schedule as exact ``(alpha, f_before, c_before, f_after, c_after)`` records."""
        return [(b.alpha, b.f_before, b.c_before, b.f_after, b.c_after) for b in self.breakpoints]

    def response_at(self, alpha) -> int:
        alpha = to_rational(alpha)
        S = self.initial
        for b in self.breakpoints:
            if b.alpha <= alpha:
                S = b.after
            else:
                break
        return S

    def to_dict(self) -> dict:
        return {
            "initial": self.initial,
            "breakpoints": [
                {"alpha": format_rational(b.alpha), "before": b.before, "after": b.after}
                for b in self.breakpoints
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _breakpoint(f, c, alpha, S, T) -> Breakpoint:
    return Breakpoint(alpha, S, T, f.value(S), f.value(T), c.value(S), c.value(T))


def brute_force_critical_values(f: RewardFunction, c) -> CriticalSchedule:
    """Walk the upper envelope of all ``2**n`` utility lines ``alpha -> alpha f(S) - c(S)``.

    From the current best response, the next breakpoint is the smallest
    intersection with any line of larger slope; ties among lines meeting
    there go to the larger reward, then the lower bitmask.
    """
    c = as_cost(c)
    n = check_n(f.n, SCHEDULE_MAX_N, "brute-force critical values")
    fvals = f.table()
    cvals = c.table()
    F, Lf = scaled_integers(fvals)
    C, Lc = scaled_integers(cvals)
    universe = range(1 << n)
    # best response at alpha = 0: cheapest, then highest reward, then lowest mask
    S = min(universe, key=lambda T: (C[T], -F[T], T))
    bps = []
    while True:
        best = None  # (num, den, -F, T)
        for T in universe:
            dF = F[T] - F[S]
            if dF <= 0:
                continue
            num, den = (C[T] - C[S]) * Lf, dF * Lc
            if best is None:
                best = (num, den, T)
                continue
            lhs, rhs = num * best[1], best[0] * den
            if lhs < rhs or (lhs == rhs and (F[T] > F[best[2]] or (F[T] == F[best[2]] and T < best[2]))):
                best = (num, den, T)
        if best is None:
            break
        alpha = Fraction(best[0], best[1])
        if alpha > 1:
            break
        T = best[2]
        bps.append(Breakpoint(alpha, S, T, fvals[S], fvals[T], cvals[S], cvals[T]))
        S = T
    first = bps[0].before if bps else S
    return CriticalSchedule(first, tuple(bps))


def _as_set(res) -> int:
    return res.chosen if isinstance(res, DemandResult) else int(res)


def enumerate_critical_values(f: RewardFunction, c, demand: Callable) -> CriticalSchedule:
    """Critical values using only demand queries.

    Keeps the current best response ``S`` and the top response ``T`` at
    ``alpha = 1``; intersects their lines, queries the demand there, and
    either records a breakpoint (the answer lies on ``T``'s line) or
    replaces ``T`` by the answer and intersects again.
    """
    c = as_cost(c)
    n = f.n
    fv, cv = f.value, c.value
    query = lambda a: _as_set(demand(a))
    S = query(Fraction(0))
    top = query(Fraction(1))
    f_top = fv(top)
    cap = 1 << min(n, 62)
    bps = []
    while fv(S) < f_top:
        T = top
        fS, cS = fv(S), cv(S)
        for _ in range(cap + 1):
            fT, cT = fv(T), cv(T)
            if fT <= fS:
                raise OracleError(
                    "demand oracle returned a set whose reward does not exceed the current best response"
                )
            alpha = (cT - cS) / (fT - fS)
            U = query(alpha)
            if fv(U) == fT:
                break
            T = U
        else:
            raise OracleError("critical-value search did not converge; the demand oracle is inconsistent")
        bps.append(_breakpoint(f, c, alpha, S, U))
        S = U
    return CriticalSchedule(S if not bps else bps[0].before, tuple(bps))


@dataclass(frozen=True)
class OptimalContract:
    alpha: Fraction
    best_response: int
    principal_utility: Fraction
    agent_utility: Fraction
    candidates_examined: int
    schedule_size: int = 0

    def to_dict(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "best_response": self.best_response,
            "principal_utility": format_rational(self.principal_utility),
            "agent_utility": format_rational(self.agent_utility),
            "candidates_examined": self.candidates_examined,
            "schedule_size": self.schedule_size,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def optimal_contract(
    f: RewardFunction, c, demand: Callable | None = None, schedule: CriticalSchedule | None = None
) -> OptimalContract:
    """Principal-optimal linear contract among ``alpha = 0`` and all critical values.

    With neither ``demand`` nor ``schedule`` given, the schedule is found by
    exhaustive enumeration.  The smallest maximizing ``alpha`` is returned.
    """
    c = as_cost(c)
    if schedule is None:
        schedule = (
            brute_force_critical_values(f, c) if demand is None else enumerate_critical_values(f, c, demand)
        )
    candidates = [(Fraction(0), schedule.initial)] + [(b.alpha, b.after) for b in schedule.breakpoints]
    best = None
    for alpha, S in candidates:
        up = (1 - alpha) * f.value(S)
        if best is None or up > best[0]:
            best = (up, alpha, S)
    up, alpha, S = best
    return OptimalContract(
        alpha=alpha,
        best_response=S,
        principal_utility=up,
        agent_utility=alpha * f.value(S) - c.value(S),
        candidates_examined=len(candidates),
        schedule_size=len(schedule),
    )


# --- genericity ----------------------------------------------------------------


class _Everywhere:
    """Marker for a Gamma set that contains every real number."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "EVERYWHERE"

    def __contains__(self, alpha) -> bool:
        return True


EVERYWHERE = _Everywhere()


def _marginal_sets(F: list[int], n: int, disjoint_context: bool) -> list[set[int]]:
    full = (1 << n) - 1
    out = []
    for T in range(1 << n):
        if T == 0:
            out.append({0})
            continue
        vals = set()
        for S in range(1 << n):
            if disjoint_context and S & T:
                continue
            vals.add(F[S | T] - F[S])
        out.append(vals)
    del full
    return out


def _gamma(M1: set[int], M2: set[int], dc: int, Lf: int, Lc: int):
    """Gamma as reduced ``(num, den)`` pairs over the integer-scaled model."""
    if dc == 0:
        return EVERYWHERE if M1 & M2 else set()
    roots = set()
    for m1 in M1:
        for m2 in M2:
            d = m1 - m2
            if d == 0:
                continue
            num, den = dc * Lf, d * Lc
            if den < 0:
                num, den = -num, -den
            g = math.gcd(num, den)
            roots.add((num // g, den // g))
    return roots


def gamma_set(f: RewardFunction, c, T1: int, T2: int, disjoint_context: bool = False):
    """All ``alpha`` solving ``alpha f(T1|S1) - c(T1) = alpha f(T2|S2) - c(T2)`` for some ``S1, S2``.

    Contexts range over all subsets unless ``disjoint_context`` restricts
    ``S_i`` to avoid ``T_i``.  Returns a frozenset of Fractions, or
    :data:`EVERYWHERE` when the two lines coincide for some contexts.
    """
    p = additive_weights(c)
    n = check_n(f.n, GAMMA_MAX_N, "Gamma enumeration")
    check_set(T1, n), check_set(T2, n)
    if T1 & T2:
        raise InputError("T1 and T2 must be disjoint")
    if not T1 and not T2:
        raise InputError("at most one of T1, T2 may be empty")
    F, Lf = scaled_integers(f.table())
    P, Lc = scaled_integers(list(p))
    cost = lambda T: sum(P[a] for a in members(T))
    M = _marginal_sets(F, n, disjoint_context)
    res = _gamma(M[T1], M[T2], cost(T1) - cost(T2), Lf, Lc)
    if res is EVERYWHERE:
        return EVERYWHERE
    return frozenset(Fraction(a, b) for a, b in res)


def has_distinct_set_costs(c) -> Verdict:
    """Every action set has a distinct additive cost; witness is the first colliding pair."""
    p = additive_weights(c)
    n = check_n(len(p), 20, "set-cost enumeration")
    P, _ = scaled_integers(list(p)) if p else ([], 1)
    seen: dict[int, int] = {}
    cost = [0] * (1 << n)
    for S in range(1, 1 << n):
        low = S & -S
        cost[S] = cost[S ^ low] + P[low.bit_length() - 1]
    for S in range(1 << n):
        if cost[S] in seen:
            return Verdict(False, (seen[cost[S]], S))
        seen[cost[S]] = S
    return Verdict(True)


def is_generic(f: RewardFunction, c, disjoint_context: bool = False) -> Verdict:
    """At most one unordered disjoint pair ``(T1, T2)`` has any given ``alpha > 0`` in its Gamma set.

    Witness ``(alpha, pair1, pair2)`` for a collision, or
    ``("everywhere", T1, T2)`` when two disjoint sets share a cost and a
    marginal (which already rules out genericity).
    """
    p = additive_weights(c)
    n = check_n(f.n, GAMMA_MAX_N, "genericity check")
    F, Lf = scaled_integers(f.table())
    P, Lc = scaled_integers(list(p))
    cost = [0] * (1 << n)
    for S in range(1, 1 << n):
        low = S & -S
        cost[S] = cost[S ^ low] + P[low.bit_length() - 1]
    M = _marginal_sets(F, n, disjoint_context)
    full = (1 << n) - 1

    def pairs():
        for T1 in range(1 << n):
            rest = full & ~T1
            # T2 ranges over subsets of the complement with T2 > T1 (unordered pairs)
            T2 = rest
            while T2 > T1:
                yield T1, T2
                T2 = (T2 - 1) & rest

    # identical lines first: they make Gamma the whole real line
    for T1, T2 in pairs():
        if cost[T1] == cost[T2] and M[T1] & M[T2]:
            return Verdict(False, ("everywhere", T1, T2))
    owner: dict[tuple[int, int], tuple[int, int]] = {}
    for T1, T2 in pairs():
        for root in _gamma(M[T1], M[T2], cost[T1] - cost[T2], Lf, Lc):
            if root[0] <= 0:
                continue
            prev = owner.setdefault(root, (T1, T2))
            if prev != (T1, T2):
                return Verdict(False, (Fraction(*root), prev, (T1, T2)))
    return Verdict(True)


def genericity_advisory(schedule: CriticalSchedule, demand: Callable) -> Verdict:
    """Large-n stand-in for :func:`is_generic`: at most one tie event per breakpoint query.

    Advisory only; passing does not certify genericity.  Witness is the
    first breakpoint ``alpha`` whose trace saw two or more ties.
    """
    for a in schedule.alphas:
        r = demand(a)
        if isinstance(r, DemandResult) and r.tie_events > 1:
            return Verdict(False, (a, r.tie_events))
    return Verdict(True)


def epsilon_perturb(c, eps, seed: int = 0, draws: Sequence[int] | None = None):
    """Raise each additive cost by ``eps * k / 2**40`` with ``k`` uniform in ``[0, 2**40)``.

    ``draws`` overrides the random ``k`` values.  A :class:`SPACost` keeps its
    symmetric part; a plain sequence yields a tuple.
    """
    eps = to_rational(eps)
    if eps <= 0:
        raise InputError("perturbation size must be positive")
    spa = c if isinstance(c, SPACost) else None
    p = c.additive if spa is not None else tuple(to_rational(x) for x in c)
    if draws is None:
        rng = random.Random(seed)
        draws = [rng.randrange(1 << PERTURB_BITS) for _ in p]
    if len(draws) != len(p) or any(not 0 <= k < 1 << PERTURB_BITS for k in draws):
        raise InputError("draws must give one integer in [0, 2**40) per action")
    hat = tuple(x + eps * Fraction(k, 1 << PERTURB_BITS) for x, k in zip(p, draws))
    return spa.perturbed(hat) if spa is not None else hat


# --- potential and neighbour structure ------------------------------------------


def potential_ranks(c) -> dict[int, int]:
    """Rank actions by cost (cheapest 1, most expensive ``n``); costs must be distinct."""
    p = additive_weights(c)
    if len(set(p)) != len(p):
        raise InputError("potential ranks need pairwise distinct action costs")
    order = sorted(range(len(p)), key=lambda a: p[a])
    return {a: r + 1 for r, a in enumerate(order)}


def potential(S: int, c) -> int:
    ranks = potential_ranks(c)
    return sum(ranks[a] for a in members(S))


def check_potential_monotone(schedule: CriticalSchedule, c) -> Verdict:
    """Potential strictly increases along the schedule's best responses."""
    ranks = potential_ranks(c)
    phi = [sum(ranks[a] for a in members(S)) for S in schedule.sets]
    for k in range(1, len(phi)):
        if phi[k] < phi[k - 1] + 1:
            return Verdict(False, (schedule.breakpoints[k - 1].alpha, phi[k - 1], phi[k]))
    return Verdict(True)


def check_neighbor_structure(schedule: CriticalSchedule, c) -> Verdict:
    """Each transition either drops a subset of the new response, or swaps one
    of its actions for a strictly cheaper one."""
    p = additive_weights(c)
    for b in schedule.breakpoints:
        before, after = b.before, b.after
        if before & ~after == 0:
            continue
        gone = after & ~before
        new = before & ~after
        if size(gone) == 1 and size(new) == 1:
            a1, a2 = members(gone)[0], members(new)[0]
            if p[a2] < p[a1]:
                continue
        return Verdict(False, (b.alpha, before, after))
    return Verdict(True)


def count_bound(kind: str, n: int) -> int:
    if kind in ("ultra_additive", "truncated"):
        return n * (n + 1) // 2
    if kind == "spa":
        return n * n * (n + 1) * (n + 2) // 2
    if kind == "symmetric_cost":
        return n + 1
    raise InputError(f"unknown bound kind {kind!r}")


def verify_count_bound(schedule: CriticalSchedule, kind: str, n: int) -> bool:
    return len(schedule) <= count_bound(kind, n)
