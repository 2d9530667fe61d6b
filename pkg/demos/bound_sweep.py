"""How many times can the best response change?

Draw random Ultra rewards with additive costs and record the largest number
of critical values seen for each n next to the n(n+1)/2 ceiling.  Then take
one instance with tied costs and watch what a tiny cost perturbation does.
"""

import random
from fractions import Fraction as Fr

from combcontracts import (
    brute_force_critical_values,
    count_bound,
    epsilon_perturb,
    has_distinct_set_costs,
    is_generic,
    materialize,
)
from combcontracts import generators as gen

TRIALS = 150

print(" n  max seen  ceiling")
for n in range(2, 7):
    rng = random.Random(n)
    worst = 0
    for _ in range(TRIALS):
        f = materialize(gen.ultra_mixed(n, rng))
        worst = max(worst, len(brute_force_critical_values(f, gen.additive_cost(n, rng))))
    print(f"{n:2d}  {worst:8d}  {count_bound('ultra_additive', n):7d}")

rng = random.Random(7)
f = materialize(gen.ultra_mixed(4, rng))
c = gen.degenerate_cost(4, rng)
print(f"\ntied costs {[str(x) for x in c.additive]}: distinct set costs? {bool(has_distinct_set_costs(c))}")
print(f"  generic? {bool(is_generic(f, c))}, critical values: {len(brute_force_critical_values(f, c))}")
for k in (4, 10, 20):
    hat = epsilon_perturb(c, Fr(1, 2**k), seed=1)
    print(f"  eps = 2^-{k}: generic? {bool(is_generic(f, hat))}, critical values: {len(brute_force_critical_values(f, hat))}")
