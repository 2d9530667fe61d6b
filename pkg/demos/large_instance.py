"""Solve a 16-action instance without touching all 65536 sets.

The schedule is built from demand queries answered by the full-chain greedy,
so the work scales with the number of breakpoints rather than 2**n.
"""

import time

from combcontracts import enumerate_critical_values, make_oracle, optimal_contract, structural_classes
from combcontracts import generators as gen
from combcontracts.sets import format_rational as q
from combcontracts.sets import format_set

inst = gen.instance("ultra", 16, seed=10)
print(f"{inst.label}: certified {sorted(structural_classes(inst.reward))}")

t0 = time.perf_counter()
oracle = make_oracle("ultra2", inst)
sched = enumerate_critical_values(inst.reward, inst.cost, oracle)
best = optimal_contract(inst.reward, inst.cost, schedule=sched)
secs = time.perf_counter() - t0

print(f"{len(sched)} critical values (ceiling {16 * 17 // 2}), found in {secs:.2f} s")
for b in sched.breakpoints[:5]:
    print(f"  alpha = {q(b.alpha)}: reward {q(b.f_before)} -> {q(b.f_after)}")
if len(sched) > 5:
    print("  ...")
print(f"alpha* = {q(best.alpha)}, agent plays {format_set(best.best_response)}, principal gets {q(best.principal_utility)}")
