"""Everything on three vertices can be enumerated, so the fits are exact."""

from collections import Counter

import numpy as np

from ersc import KahleParams, MaxEntProblem, enumerate_space, exact_distribution, gibbs_distribution, solve_theta
from ersc.enumeration import partition_function
from ersc.maxent import a3_theta, a4_theta, tilde_distribution_n3
from ersc.observables import f_obs, phi_obs

p1, p2 = 0.4, 0.6
S = enumerate_space("C_n", 3)
obs = [f_obs(1), f_obs(2), phi_obs(2)]
X = S.matrix(obs).astype(int)

print(len(S), "complexes on 3 vertices")
print("(f1, f2, phi2) multiplicities:", dict(Counter(map(tuple, X.tolist()))))

# Kahle probabilities
kahle = exact_distribution(KahleParams(3, (p1, p2)), S)
for C, q in zip(S, kahle.probs):
    print(f"  {q:.5f}  {C.simplices()}")

# the closed-form multipliers give Z = 1/(1-p1)^3
theta = a3_theta(p1, p2)
print("\nZ at closed-form theta:", partition_function(theta, obs, S), " 1/(1-p1)^3 =", 1 / (1 - p1) ** 3)

# and Newton on the dual finds them from the Kahle means alone
fit = solve_theta(MaxEntProblem(S, obs, [3 * p1, p1**3 * p2, p1**3]))
print("exp(-theta) fitted:", np.exp(-fit.theta))
print("exp(-theta) closed:", np.exp(-theta), f"({fit.iterations} Newton steps)")

# drop phi_2: the max-entropy answer changes
two = MaxEntProblem(S, obs[:2], [3 * p1, p1**3 * p2])
fit2 = solve_theta(two)
tilde = tilde_distribution_n3(p1, p2, S)
print("\nwithout phi_2, fitted vs closed-form theta:", fit2.theta, a4_theta(3 * p1, p1**3 * p2))
print("max |P~ - fitted|:", np.abs(gibbs_distribution(two).probs - tilde.probs).max())
print("max |P~ - P_Kahle|:", np.abs(tilde.probs - kahle.probs).max())
print(f"entropies: Kahle {kahle.entropy():.6f}  P~ {tilde.entropy():.6f}")
