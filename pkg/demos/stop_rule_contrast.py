"""Why the early-stopping greedy is only safe for submodular rewards.

The reward below is Ultra but complementary: each action alone is worth
little, the pair is worth a lot.  The early-stop greedy quits at the empty set
while the full-chain greedy walks on and finds the better pair.
"""

from combcontracts import brute_force_demand, classify, greedy_gs2, greedy_ultra2, make_explicit
from combcontracts.costs import SPACost
from combcontracts.sets import format_rational as q
from combcontracts.sets import format_set

f = make_explicit(["0", "3/10", "1/5", "1"])
p = ["1/10", "1/10"]
alpha = "3/10"

rep = classify(f)
print(f"submodular: {rep.submodular}   ultra: {rep.ultra}   gs: {rep.gs}")
if not rep.submodular:
    print(f"  submodularity witness: {rep.witnesses.get('submodular')}")

stop = greedy_gs2(alpha, f, p)
chain = greedy_ultra2(alpha, f, p)
truth = brute_force_demand(f, SPACost(p), alpha)
print(f"\nalpha = {alpha}")
print(f"  early-stop greedy: {format_set(stop.chosen)} utility {q(stop.utility)}")
print(f"  full-chain greedy: {format_set(chain.chosen)} utility {q(chain.utility)}  trace {chain.trace}")
print(f"  exhaustive search: {format_set(truth.chosen)} utility {q(truth.utility)}")
