"""Exhaustive certification of set-function classes with counterexamples.

All checkers work on the full value table, so they are limited to small
ground sets.  Each returns a :class:`Verdict`, which is truthy iff the
property holds and otherwise carries the lexicographically smallest
violating tuple (sets as bitmasks) in the checker's documented scan order.

Ultra membership is certified by the triplet inequality; the exchange form
and a randomized check of the well-layered form are provided as
independent cross-checks.  GS is certified as monotone, submodular and
Ultra.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

from .functions import OXS, Additive, BudgetAdditive, PlusSymmetric, RewardFunction, Symmetric, Truncated, UnitDemand
from .sets import check_n, format_rational, scaled_integers, size

TRIPLET_MAX_N = 16
SUBMODULAR_MAX_N = 16
EXCHANGE_MAX_N = 12
WELL_LAYERED_MAX_N = 14
WWL_MAX_N = 14
FRONTIER_CAP = 10**6


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: tuple | None = None
    inconclusive: bool = False

    def __bool__(self) -> bool:
        return self.holds


def _int_table(f: RewardFunction, limit: int, what: str) -> list[int]:
    check_n(f.n, limit, what)
    ints, _ = scaled_integers(f.table())
    return ints


def _nonmonotone(vals: list[int], n: int):
    for S in range(1 << n):
        for a in range(n):
            if not S >> a & 1 and vals[S | 1 << a] < vals[S]:
                return Verdict(False, ("non-monotone", S, a))
    return None


def check_monotone(f: RewardFunction) -> Verdict:
    """Witness ``(S, a)``: the first ``S`` (by bitmask) and ``a`` with ``f(S + a) < f(S)``."""
    vals = _int_table(f, TRIPLET_MAX_N, "monotonicity check")
    bad = _nonmonotone(vals, f.n)
    return Verdict(True) if bad is None else Verdict(False, bad.witness[1:])


def check_additive(f: RewardFunction) -> Verdict:
    vals = _int_table(f, TRIPLET_MAX_N, "additivity check")
    single = [vals[1 << a] for a in range(f.n)]
    for S in range(1 << f.n):
        if vals[S] != sum(single[a] for a in range(f.n) if S >> a & 1):
            return Verdict(False, (S,))
    return Verdict(True)


def check_symmetric(f: RewardFunction) -> Verdict:
    vals = _int_table(f, TRIPLET_MAX_N, "symmetry check")
    first: dict[int, int] = {}
    for S in range(1 << f.n):
        k = size(S)
        if k not in first:
            first[k] = S
        elif vals[S] != vals[first[k]]:
            return Verdict(False, (first[k], S))
    return Verdict(True)


def check_submodular(f: RewardFunction) -> Verdict:
    """Diminishing marginal returns.

    Scans the local form ``f(a | S) >= f(a | S + b)`` (equivalent to the
    ``S subset T`` definition) over ``S`` ascending, then ``T = S + b``, then
    ``a``; the witness is ``(S, T, a)``.
    """
    vals = _int_table(f, SUBMODULAR_MAX_N, "submodularity check")
    n = f.n
    for S in range(1 << n):
        vS = vals[S]
        for b in range(n):
            if S >> b & 1:
                continue
            T = S | 1 << b
            vT = vals[T]
            for a in range(n):
                if T >> a & 1:
                    continue
                if vals[T | 1 << a] - vT > vals[S | 1 << a] - vS:
                    return Verdict(False, (S, T, a))
    return Verdict(True)


def _triplet_scan(vals: list[int], n: int) -> Verdict:
    for S in range(1 << n):
        vS = vals[S]
        free = [a for a in range(n) if not S >> a & 1]
        if len(free) < 3:
            continue
        single = {a: vals[S | 1 << a] - vS for a in free}
        for i, j, k in combinations(free, 3):
            pij = vals[S | 1 << i | 1 << j] - vS
            pik = vals[S | 1 << i | 1 << k] - vS
            pjk = vals[S | 1 << j | 1 << k] - vS
            # the three pairings; Ultra requires the maximum to be attained twice
            for left, r1, r2, kk in (
                (pij + single[k], single[i] + pjk, single[j] + pik, (i, j, k)),
                (pik + single[j], single[i] + pjk, single[k] + pij, (i, k, j)),
                (pjk + single[i], single[j] + pik, single[k] + pij, (j, k, i)),
            ):
                if left > r1 and left > r2:
                    return Verdict(False, (S,) + kk)
    return Verdict(True)


def check_triplet(f: RewardFunction, allow_nonmonotone: bool = False) -> Verdict:
    """Triplet inequality for every ``S`` and distinct ``i, j, k`` outside ``S``.

    Witness ``(S, i, j, k)`` with ``f(i+j|S) + f(k|S)`` exceeding both
    alternatives.  Unless ``allow_nonmonotone`` is set, a non-monotone ``f``
    is rejected with witness ``("non-monotone", S, a)``.
    """
    vals = _int_table(f, TRIPLET_MAX_N, "triplet check")
    if not allow_nonmonotone:
        bad = _nonmonotone(vals, f.n)
        if bad is not None:
            return bad
    return _triplet_scan(vals, f.n)


def check_exchange(f: RewardFunction, allow_nonmonotone: bool = False) -> Verdict:
    """Exchange property; witness ``(S, T, x)`` for which no ``y`` works."""
    vals = _int_table(f, EXCHANGE_MAX_N, "exchange check")
    n = f.n
    if not allow_nonmonotone:
        bad = _nonmonotone(vals, n)
        if bad is not None:
            return bad
    sizes = [size(S) for S in range(1 << n)]
    for S in range(1 << n):
        for T in range(1 << n):
            if sizes[S] > sizes[T]:
                continue
            only_s = S & ~T
            if not only_s:
                continue
            only_t = T & ~S
            target = vals[S] + vals[T]
            for x in range(n):
                if not only_s >> x & 1:
                    continue
                ok = False
                for y in range(n):
                    if only_t >> y & 1:
                        if vals[S ^ (1 << x) | 1 << y] + vals[(T & ~(1 << y)) | 1 << x] >= target:
                            ok = True
                            break
                if not ok:
                    return Verdict(False, (S, T, x))
    return Verdict(True)


def _greedy_layers(vals: list[int], n: int, prices: list[int]):
    """Explore every tie branch of the priced greedy chain.

    Yields ``(i, frontier)`` where ``frontier`` is the set of reachable ``S_i``.
    Returns early with ``None`` frontier when the cap is exceeded.
    """
    frontier = {0}
    for i in range(1, n + 1):
        nxt = set()
        for S in frontier:
            best = None
            picks = []
            vS = vals[S]
            for x in range(n):
                if S >> x & 1:
                    continue
                score = vals[S | 1 << x] - vS - prices[x]
                if best is None or score > best:
                    best, picks = score, [x]
                elif score == best:
                    picks.append(x)
            for x in picks:
                nxt.add(S | 1 << x)
        if len(nxt) > FRONTIER_CAP:
            yield i, None
            return
        frontier = nxt
        yield i, frontier


def _price_table(n: int, prices: list[int]) -> list[int]:
    pc = [0] * (1 << n)
    for S in range(1, 1 << n):
        low = S & -S
        pc[S] = pc[S ^ low] + prices[low.bit_length() - 1]
    return pc


def _check_layers(vals: list[int], n: int, prices: list[int]):
    pc = _price_table(n, prices)
    best = [None] * (n + 1)
    for S in range(1 << n):
        k = size(S)
        u = vals[S] - pc[S]
        if best[k] is None or u > best[k]:
            best[k] = u
    for i, frontier in _greedy_layers(vals, n, prices):
        if frontier is None:
            return "inconclusive", i
        for S in sorted(frontier):
            if vals[S] - pc[S] != best[i]:
                return "violation", (i, S)
    return None


def check_well_layered_sampled(
    f: RewardFunction, trials: int = 50, seed: int = 0, allow_nonmonotone: bool = False
) -> Verdict:
    """Randomized check of the well-layered property.

    Draws ``trials`` rational price vectors and checks that every greedy
    chain (over all tie branches) hits a size-``i`` utility maximizer at
    every length.  Witness ``(prices, i, S_i)``.  A pass is evidence, not a
    certificate.
    """
    check_n(f.n, WELL_LAYERED_MAX_N, "well-layered check")
    table = f.table()
    vals, L = scaled_integers(table)
    n = f.n
    if not allow_nonmonotone:
        bad = _nonmonotone(vals, n)
        if bad is not None:
            return bad
    rng = random.Random(seed)
    top = max((abs(v) for v in table), default=Fraction(0)) or Fraction(1)
    for trial in range(trials):
        prices = _draw_prices(rng, n, top, coarse=trial % 2 == 0)
        pden = math.lcm(1, *(p.denominator for p in prices))
        scale = math.lcm(L, pden)
        vs = [v * (scale // L) for v in vals]
        ps = [p.numerator * (scale // p.denominator) for p in prices]
        res = _check_layers(vs, n, ps)
        if res is None:
            continue
        kind, info = res
        if kind == "inconclusive":
            return Verdict(False, (tuple(prices), info), inconclusive=True)
        i, S = info
        return Verdict(False, (tuple(prices), i, S))
    return Verdict(True)


def _draw_prices(rng: random.Random, n: int, top: Fraction, coarse: bool) -> list[Fraction]:
    # coarse grids provoke ties, fine grids explore generic prices
    den = 4 if coarse else 997
    hi = max(1, math.ceil(top * den))
    return [Fraction(rng.randint(0, hi), den) for _ in range(n)]


def check_wwl(f: RewardFunction) -> Verdict:
    """Weakly well-layered: every price-free greedy chain hits ``argmax_{|S|=i} f``.

    Witness ``(i, S_i)``; ``inconclusive`` is set if the tie frontier
    exceeds the state cap.
    """
    vals = _int_table(f, WWL_MAX_N, "weakly-well-layered check")
    res = _check_layers(vals, f.n, [0] * f.n)
    if res is None:
        return Verdict(True)
    kind, info = res
    if kind == "inconclusive":
        return Verdict(False, (info,), inconclusive=True)
    return Verdict(False, info)


@dataclass
class ClassReport:
    monotone: bool
    additive: bool
    symmetric: bool
    submodular: bool
    ultra: bool
    gs: bool
    wwl: bool
    witnesses: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            k: getattr(self, k)
            for k in ("monotone", "additive", "symmetric", "submodular", "ultra", "gs", "wwl")
        }
        out["witnesses"] = {k: _jsonable(v) for k, v in self.witnesses.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    return x


def classify(f: RewardFunction, allow_nonmonotone: bool = False) -> ClassReport:
    check_n(f.n, WWL_MAX_N, "classification")
    verdicts = {
        "monotone": check_monotone(f),
        "additive": check_additive(f),
        "symmetric": check_symmetric(f),
        "submodular": check_submodular(f),
        "ultra": check_triplet(f, allow_nonmonotone=allow_nonmonotone),
        "wwl": check_wwl(f),
    }
    witnesses = {k: v.witness for k, v in verdicts.items() if not v and v.witness is not None}
    mono, sub, ultra = bool(verdicts["monotone"]), bool(verdicts["submodular"]), bool(verdicts["ultra"])
    gs = mono and sub and ultra
    if not gs:
        witnesses["gs"] = next(k for k in ("monotone", "submodular", "ultra") if not verdicts[k])
    return ClassReport(
        monotone=mono,
        additive=bool(verdicts["additive"]),
        symmetric=bool(verdicts["symmetric"]),
        submodular=sub,
        ultra=ultra,
        gs=gs,
        wwl=bool(verdicts["wwl"]),
        witnesses=witnesses,
    )


def structural_classes(f) -> frozenset[str] | None:
    """Classes implied by how ``f`` was built, or None for opaque tables.

    OXS, unit-demand, additive and concave symmetric rewards are GS; every
    symmetric reward is Ultra; a nondecreasing cardinality bonus keeps
    Ultra; budget-additive rewards are weakly well-layered; truncations of
    GS rewards are GS.
    """
    gs = frozenset({"monotone", "submodular", "ultra", "gs", "wwl"})
    ultra = frozenset({"monotone", "ultra", "wwl"})
    if isinstance(f, (OXS, UnitDemand, Additive)):
        return gs
    if isinstance(f, Symmetric):
        steps = [b - a for a, b in zip(f.levels, f.levels[1:])]
        concave = all(y <= x for x, y in zip(steps, steps[1:]))
        return gs if concave else ultra
    if isinstance(f, PlusSymmetric):
        inner = structural_classes(f.inner)
        return ultra if inner is not None and "ultra" in inner else None
    if isinstance(f, BudgetAdditive):
        return frozenset({"monotone", "submodular", "wwl"})
    if isinstance(f, Truncated):
        inner = structural_classes(f.inner)
        return gs if inner is not None and "gs" in inner else None
    return None
