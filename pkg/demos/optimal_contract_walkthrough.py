"""Walk through one small contract problem end to end.

Two actions with a budget-additive reward and additive costs.  We list the
agent's best response as the share alpha grows, then pick the share the
principal likes best.
"""

from fractions import Fraction as Fr

from combcontracts import SPACost, brute_force_demand, brute_force_critical_values, make_budget_additive, optimal_contract
from combcontracts.sets import format_rational as q
from combcontracts.sets import format_set

f = make_budget_additive(["3/5", "1/2"], 1)
c = SPACost(["1/10", "3/10"])

print("reward table:")
for S in range(4):
    print(f"  f({format_set(S)}) = {q(f.value(S))}   c = {q(c(S))}")

sched = brute_force_critical_values(f, c)
print(f"\nbest response before any breakpoint: {format_set(sched.initial)}")
for b in sched.breakpoints:
    print(f"  alpha = {q(b.alpha)}: {format_set(b.before)} -> {format_set(b.after)}")

# a single demand query, just below and just above the first breakpoint
for a in (Fr(1, 7), Fr(1, 5)):
    r = brute_force_demand(f, c, a)
    print(f"demand at alpha = {q(a)}: {format_set(r.chosen)} (agent utility {q(r.utility)})")

best = optimal_contract(f, c, schedule=sched)
print(f"\noptimal share alpha* = {q(best.alpha)}")
print(f"agent plays {format_set(best.best_response)}, principal gets {q(best.principal_utility)}")
