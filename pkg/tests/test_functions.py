import random
import threading
from itertools import combinations, permutations
from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from combcontracts import generators as gen
from combcontracts.errors import InputError
from combcontracts.functions import (
    Truncated,
    add_symmetric,
    make_additive,
    make_budget_additive,
    make_explicit,
    make_oxs,
    make_symmetric,
    make_unit_demand,
    marginal,
    scale_minus_symmetric,
    truncate,
    value,
)
from oracles import all_sets, mask, truncated_naive


def test_value_examples():
    assert value(make_additive(["1/2", "1/3"]), 0b11) == Fr(5, 6)
    assert value(make_budget_additive(["3/5", "1/2"], 1), 0b11) == 1
    assert value(make_budget_additive(["3/5", "1/2"], 1), 0b10) == Fr(1, 2)


def test_value_rejects_out_of_range_bits():
    with pytest.raises(InputError):
        value(make_additive(["1/2", "1/3"]), 0b100)


def test_marginal_examples(f1):
    assert marginal(make_additive(["1/2", "1/3"]), 1, 0b01) == Fr(1, 3)
    assert marginal(f1, 1, 0b01) == Fr(7, 10)
    with pytest.raises(InputError):
        marginal(f1, 0, 0b01)


def test_budget_never_binding_is_additive():
    w = ["1/2", "1/3", "1/5"]
    f, g = make_budget_additive(w, 100), make_additive(w)
    assert f.table() == g.table()


def test_negative_parameters_rejected():
    with pytest.raises(InputError):
        make_budget_additive(["-1/2"], 1)
    with pytest.raises(InputError):
        make_budget_additive(["1/2"], -1)
    with pytest.raises(InputError):
        make_oxs([["-1"]])


def test_explicit_table_validation():
    with pytest.raises(InputError):
        make_explicit(["0", "1", "1"])
    with pytest.raises(InputError):
        make_explicit(["1", "1"])
    with pytest.raises(InputError):
        make_explicit(["0", "1", "1", "1/2"])


def test_oxs_examples():
    w = ["1/2", "1/3", "3/4"]
    assert make_oxs([w]).table() == make_unit_demand(w).table()
    diag = [["1/2", 0, 0], [0, "1/3", 0], [0, 0, "3/4"]]
    assert make_oxs(diag).table() == make_additive(w).table()
    assert make_oxs([[1, 1], [1, 1]]).value(0b11) == 2


def _matching_naive(rows, S):
    # independent oracle: best injective assignment by trying every permutation of slots
    acts = sorted(S)
    m = len(rows)
    best = Fr(0)
    for k in range(min(len(acts), m) + 1):
        for chosen in combinations(acts, k):
            for slots in permutations(range(m), k):
                best = max(best, sum((rows[j][a] for a, j in zip(chosen, slots)), Fr(0)))
    return best


@pytest.mark.parametrize("seed", range(15))
def test_oxs_matches_permutation_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    f = gen.oxs(n, rng)
    for S in all_sets(n):
        assert f.value(mask(S)) == _matching_naive(f.weights, S)


def _constructors(n, rng):
    yield gen.additive(n, rng)
    yield gen.symmetric_concave(n, rng)
    yield gen.symmetric_any(n, rng)
    yield gen.budget_additive(n, rng)
    yield gen.unit_demand(n, rng)
    yield gen.oxs(n, rng, m=min(3, n))
    yield gen.ultra(n, rng, m=min(3, n))
    yield truncate(gen.additive(n, rng), max(1, n // 2))


@pytest.mark.parametrize("n", [1, 4, 8, 12])
def test_constructors_normalized_and_monotone(n):
    rng = random.Random(n)
    for f in _constructors(n, rng):
        vals = f.table()
        assert vals[0] == 0
        for S in range(1 << n):
            for a in range(n):
                if not S >> a & 1:
                    assert vals[S | 1 << a] >= vals[S], (f, S, a)


def test_truncate_examples():
    f = make_additive(["1/2", "3/10", "1/5"])
    assert truncate(f, 1).value(0b111) == Fr(1, 2)
    assert truncate(f, 2).value(0b111) == Fr(4, 5)
    assert truncate(f, 3) is f
    for t in (0, 4):
        with pytest.raises(InputError):
            truncate(f, t)


@pytest.mark.parametrize("seed", range(12))
def test_truncate_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    f = gen.ultra_mixed(n, rng)
    t = rng.randint(1, n)
    ft = truncate(f, t)
    subsets = all_sets(n) if n <= 8 else rng.sample(all_sets(n), 200)
    for S in subsets:
        assert ft.value(mask(S)) == truncated_naive(f, t, S)
        assert ft.value(mask(S)) <= f.value(mask(S))


def test_truncate_full_size_is_identity():
    f = gen.ultra(6, random.Random(1))
    ft = Truncated(f, 6)
    assert ft.table() == f.table()


def test_truncated_concurrent_queries_agree():
    rng = random.Random(5)
    f = gen.oxs(10, rng, m=4)
    expected = Truncated(f, 3).table()
    shared = Truncated(f, 3)
    results = [None] * 4

    def work(k):
        results[k] = [shared.value(S) for S in range(1 << 10)]

    threads = [threading.Thread(target=work, args=(k,)) for k in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == expected for r in results)


def test_scale_minus_symmetric_examples(f1):
    assert scale_minus_symmetric(f1, 1, [0, 0, 0]).table() == f1.table()
    assert scale_minus_symmetric(f1, 0, [0, 0, 0]).table() == [0] * 4
    h = scale_minus_symmetric(make_additive(["1/2"]), Fr(1, 2), [0, "1/10"])
    assert h.value(1) == Fr(3, 20)
    with pytest.raises(InputError):
        scale_minus_symmetric(f1, 1, [0, "1/2", "1/3"])


def test_plus_symmetric_and_symmetric_validation():
    f = add_symmetric(make_additive(["1/2", "1/3"]), [0, "1/10", "1/2"])
    assert f.value(0b11) == Fr(5, 6) + Fr(1, 2)
    with pytest.raises(InputError):
        make_symmetric(["1/2", 1])
    with pytest.raises(InputError):
        make_symmetric([0, 1, "1/2"])


@given(st.lists(st.fractions(min_value=0, max_value=5), min_size=1, max_size=6), st.data())
def test_additive_marginals_are_constant(w, data):
    f = make_additive(w)
    n = len(w)
    S = data.draw(st.integers(0, (1 << n) - 1))
    a = data.draw(st.integers(0, n - 1).filter(lambda a: not S >> a & 1)) if S != (1 << n) - 1 else None
    if a is not None:
        assert f.marginal(a, S) == w[a]
