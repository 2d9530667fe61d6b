import json
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from combcontracts import generators as gen
from combcontracts.contracts import brute_force_critical_values
from combcontracts.costs import Instance, SPACost
from combcontracts.demand import (
    ALGORITHMS,
    BruteForceOracle,
    alt_greedy_gs_spa,
    alt_greedy_ultra_spa,
    best_response_of_size,
    brute_force_demand,
    demand_for_spa,
    greedy_gs1,
    greedy_gs2,
    greedy_gs_spa,
    greedy_ultra1,
    greedy_ultra2,
    greedy_ultra_spa,
    greedy_up_to_t,
    greedy_wwl_symmetric,
    make_oracle,
)
from combcontracts.errors import CapacityError, InputError
from combcontracts.functions import (
    make_additive,
    make_explicit,
    make_oxs,
    materialize,
    truncate,
)
from oracles import alpha_grid, naive_demand, naive_demand_collection, random_instance


def test_brute_force_examples(f1, f1_prices):
    f = make_additive(["1/2", "1/3"])
    assert brute_force_demand(f, ["1/10", "1/5"], 0).chosen == 0
    assert brute_force_demand(f, [0, 0], 1).chosen == 0b11
    r = brute_force_demand(f1, f1_prices, Fr(3, 10))
    assert (r.chosen, r.utility, r.demand) == (0b11, Fr(1, 10), (0b11,))


def test_brute_force_capacity():
    with pytest.raises(CapacityError):
        brute_force_demand(make_additive([1] * 17), [0] * 17, 1)


def test_gs1_examples():
    f = make_additive(["1/2", "1/3", "1/5"])
    assert greedy_gs1(f, ["1/10", "1/2", "1/10"]) == 0b101
    assert greedy_gs1(f, [1, 1, 1]) == 0
    assert greedy_gs1(make_oxs([[1, 1], [1, 1]]), ["1/2", "1/2"]) == 0b11


def test_gs2_examples(f1, f1_prices):
    f = make_additive(["1/2", "1/3"])
    assert greedy_gs2(0, f, ["1/10", "1/5"]).chosen == 0
    r = greedy_gs2(Fr(3, 10), f1, f1_prices)
    assert (r.chosen, r.utility) == (0, 0)


def test_gs2_takes_zero_utility_step_that_raises_reward():
    f = make_additive([1])
    r = greedy_gs2(Fr(1, 2), f, ["1/2"])
    assert (r.chosen, r.utility, r.reward) == (1, 0, 1)
    lit = greedy_gs2(Fr(1, 2), f, ["1/2"], literal_stop=True)
    assert (lit.chosen, lit.utility, lit.reward) == (0, 0, 0)
    assert brute_force_demand(f, ["1/2"], Fr(1, 2)).chosen == 1


def test_ultra1_and_ultra2_examples(f1, f1_prices):
    f = make_additive(["1/2", "1/3", "1/5"])
    p = ["1/10", "1/2", "1/10"]
    assert greedy_ultra1(f, p) == greedy_gs1(f, p)
    scaled = make_explicit([0, "9/100", "3/50", "3/10"])  # 3/10 times f1
    assert greedy_ultra1(scaled, f1_prices) == 0b11
    assert greedy_ultra1(make_explicit([0, 0, 0, 0]), ["1/2", "1/3"]) == 0
    r = greedy_ultra2(Fr(3, 10), f1, f1_prices)
    assert (r.chosen, r.utility, r.reward) == (0b11, Fr(1, 10), 1)
    assert r.trace == ((0, 0b01), (1, 0b11))
    assert greedy_ultra2(1, make_additive([1, 2, 3]), [0, 0, 0]).chosen == 0b111


def test_up_to_t_examples(f1, f1_prices):
    r = greedy_up_to_t(Fr(3, 10), 1, f1, f1_prices)
    assert (r.chosen, r.utility) == (0, 0)
    assert greedy_up_to_t(Fr(3, 10), 2, f1, f1_prices) == greedy_ultra2(Fr(3, 10), f1, f1_prices)
    for t in (0, 3):
        with pytest.raises(InputError):
            greedy_up_to_t(Fr(1, 2), t, f1, f1_prices)


def test_best_response_of_size_examples(f1, f1_prices):
    assert best_response_of_size(f1, f1_prices, Fr(3, 10), 1) == [0b01]
    assert best_response_of_size(f1, f1_prices, Fr(3, 10), 0) == [0]
    full = best_response_of_size(f1, f1_prices, Fr(3, 10), 2, mode="at_most")
    assert full == BruteForceOracle(f1, SPACost(f1_prices)).maximizers(Fr(3, 10))
    with pytest.raises(InputError):
        best_response_of_size(f1, f1_prices, Fr(3, 10), 1, mode="some")


def test_f3_fixture(f3, f3_cost):
    # utilities at alpha = 1/2: {0} 3/20, {0,1} 7/60, {1} 1/15, everything else lower
    p, g = f3_cost.additive, f3_cost.symmetric
    ref = brute_force_demand(f3, f3_cost, Fr(1, 2))
    assert (ref.chosen, ref.utility, ref.reward) == (0b001, Fr(3, 20), Fr(1, 2))
    for algo in (greedy_ultra_spa, alt_greedy_ultra_spa, greedy_gs_spa, alt_greedy_gs_spa):
        r = algo(Fr(1, 2), f3, p, g)
        assert (r.chosen, r.utility, r.reward) == (ref.chosen, ref.utility, ref.reward)
    r = demand_for_spa(Fr(1, 2), f3, p, g, lambda i: greedy_up_to_t(Fr(1, 2), i, f3, p))
    assert r.utility == Fr(3, 20)


def test_wwl_example(f2):
    # {0} and {0,1} both give 1/5; the reward tie rule picks {0,1}
    r = greedy_wwl_symmetric(Fr(1, 2), f2, [0, "1/10", "3/10"])
    assert (r.chosen, r.utility, r.reward) == (0b11, Fr(1, 5), 1)
    assert brute_force_demand(f2, SPACost([0, 0], [0, "1/10", "3/10"]), Fr(1, 2)).chosen == 0b11
    assert greedy_wwl_symmetric(1, f2, [0, 0, 0]).chosen == 0b11


def test_wwl_chain_ignores_alpha(f2):
    g = [0, "1/10", "3/10"]
    traces = {greedy_wwl_symmetric(Fr(k, 7), f2, g).trace for k in range(8)}
    assert len(traces) == 1


def test_spa_reduces_to_additive_when_g_is_zero():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(2, 6)
        f, c = materialize(gen.oxs(n, rng)), gen.additive_cost(n, rng)
        a = Fr(rng.randint(0, 20), 20)
        base = greedy_gs2(a, f, c.additive)
        for r in (
            greedy_ultra_spa(a, f, c.additive, c.symmetric),
            alt_greedy_ultra_spa(a, f, c.additive, c.symmetric),
            greedy_gs_spa(a, f, c.additive, c.symmetric),
            alt_greedy_gs_spa(a, f, c.additive, c.symmetric),
            greedy_ultra2(a, f, c.additive),
        ):
            assert (r.utility, r.reward) == (base.utility, base.reward)


def test_demand_result_json(f1, f1_prices):
    d = json.loads(greedy_ultra2(Fr(3, 10), f1, f1_prices).to_json())
    assert d == {"set": 3, "utility": "1/10", "reward": "1/1", "trace": [[0, 1], [1, 3]], "ties": 0}


def test_input_validation(f1):
    with pytest.raises(InputError):
        greedy_ultra2(Fr(3, 2), f1, [0, 0])
    with pytest.raises(InputError):
        greedy_ultra2(Fr(1, 2), f1, [0])
    with pytest.raises(InputError):
        greedy_ultra2(Fr(1, 2), f1, ["-1/2", 0])
    with pytest.raises(InputError):
        greedy_ultra_spa(Fr(1, 2), f1, [0, 0], [0, 1, 0])
    with pytest.raises(InputError):
        make_oracle("ultra2", Instance(f1, SPACost([0, 0], [0, 1, 1])))
    with pytest.raises(InputError):
        make_oracle("wwl", Instance(f1, SPACost([1, 0])))
    with pytest.raises(InputError):
        make_oracle("nope", Instance(f1, SPACost([1, 0])))


def test_brute_force_matches_naive_enumeration():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 6)
        f, c = random_instance(rng.choice(["ultra+spa", "wwl+symmetric"]), n, rng.random())
        a = Fr(rng.randint(0, 12), 12)
        r = brute_force_demand(f, c, a)
        assert (r.chosen, r.utility, r.reward) == naive_demand(f, c, a)
        assert list(r.demand) == naive_demand_collection(f, c, a)


# class pairing for each algorithm name
CLASS_OF = {
    "gs2": "gs+additive",
    "ultra2": "ultra+additive",
    "ultra-spa": "ultra+spa",
    "alt-ultra-spa": "ultra+spa",
    "gs-spa": "gs+spa",
    "alt-gs-spa": "gs+spa",
    "wwl": "wwl+symmetric",
}


@pytest.mark.parametrize("name", sorted(CLASS_OF))
@given(n=st.integers(1, 7), seed=st.integers(0, 10**9))
def test_oracle_equivalence_property(name, n, seed):
    f, c = random_instance(CLASS_OF[name], n, seed)
    oracle = make_oracle(name, Instance(f, c))
    ref = BruteForceOracle(f, c)
    for a in alpha_grid(brute_force_critical_values(f, c)):
        r, b = oracle(a), ref(a)
        assert (r.utility, r.reward) == (b.utility, b.reward)
        assert r.chosen in b.demand
        assert r.utility == a * f.value(r.chosen) - c.value(r.chosen)


@given(n=st.integers(2, 7), seed=st.integers(0, 10**9))
def test_ultra_chain_is_layered(n, seed):
    f, c = random_instance("ultra+additive", n, seed)
    a = Fr(random.Random(seed).randint(0, 30), 30)
    r = greedy_ultra2(a, f, c.additive)
    for i, (_, S) in enumerate(r.trace, 1):
        assert S in best_response_of_size(f, c, a, i)


@given(n=st.integers(2, 7), seed=st.integers(0, 10**9))
def test_up_to_t_nesting_and_truncated_demand(n, seed):
    f, c = random_instance("ultra+additive", n, seed)
    a = Fr(random.Random(seed).randint(0, 30), 30)
    res = [greedy_up_to_t(a, t, f, c.additive) for t in range(1, n + 1)]
    for i in range(len(res)):
        for j in range(i + 1, len(res)):
            assert res[i].chosen & ~res[j].chosen == 0
    for t, r in enumerate(res, 1):
        ft = materialize(truncate(f, t))
        b = brute_force_demand(ft, c, a)
        assert bin(r.chosen).count("1") <= t
        assert (a * ft.value(r.chosen) - c.value(r.chosen), ft.value(r.chosen)) == (b.utility, b.reward)
        assert r.chosen in best_response_of_size(f, c, a, t, "at_most")


@given(n=st.integers(2, 7), seed=st.integers(0, 10**9))
def test_alt_gs_spa_candidates_nested(n, seed):
    f, c = random_instance("gs+spa", n, seed)
    a = Fr(random.Random(seed).randint(0, 30), 30)
    r = alt_greedy_gs_spa(a, f, c.additive, c.symmetric)
    cands = r.candidates
    for i in range(len(cands) - 1):
        assert cands[i] & ~cands[i + 1] == 0
        assert bin(cands[i + 1]).count("1") <= i + 1


def test_determinism():
    f, c = random_instance("ultra+spa", 7, 42)
    for name in ALGORITHMS:
        if name in ("gs2", "ultra2", "wwl"):
            continue
        o = make_oracle(name, Instance(f, c))
        assert o(Fr(1, 3)) == o(Fr(1, 3))
