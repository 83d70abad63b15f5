"""One round of the suppression duel, solved three ways.

Freeze a single round: the honest side has posted allocations g_i on the
shards it is behind on (deficits u_i), and the adversary now spends beta
to minimize the weighted recovery sum(u_i * g_i/(g_i + b_i)). The
closed-form answer is water-filling: pour budget on the juiciest shards
until marginal damage equalizes. A brute-force grid search lands on the
same value, and the deficit-weighted honest split makes the adversary
indifferent, which pins the game value exactly.
"""
import numpy as np

from shardlab.adversaries import myopic_optimal, suppression_objective

gamma = beta = 0.5
u = np.array([0.30, 0.20, 0.10, 0.05])
g = gamma * u / u.sum()  # deficit-weighted honest split

print("deficits u :", np.array2string(u, precision=3))
print("honest g   :", np.array2string(g, precision=4), f"(spends {g.sum():.2f})")

best = myopic_optimal(u, g, beta)
value = suppression_objective(u, g, best)
print("\nadversary's water-filling response:")
print("  b        :", np.array2string(best, precision=4), f"(spends {best.sum():.2f})")
print(f"  objective: {value:.6f}")

# a coarse independent check: greedy unit grid allocation
step = 1e-3
b = np.zeros_like(g)
for _ in range(int(beta / step)):
    scores = u * (g / (g + b + step) - g / (g + b))
    b[scores.argmin()] += step
grid_value = suppression_objective(u, g, b)
print(f"  grid search ({step:g} steps): {grid_value:.6f}")

# alternatives only lose damage potential
uniform = np.full_like(g, beta / len(g))
one_shard = np.zeros_like(g)
one_shard[0] = beta
print("\nsloppier adversaries recover more for the honest side:")
print(f"  uniform   : {suppression_objective(u, g, uniform):.6f}")
print(f"  all-on-0  : {suppression_objective(u, g, one_shard):.6f}")

# with g proportional to u and gamma + beta = 1 the value is gamma * sum(u)
print(f"\ngame value gamma*sum(u) = {gamma * u.sum():.6f}")
print(f"water-filling achieves    {value:.6f} (indifference: every shard hurts equally)")
