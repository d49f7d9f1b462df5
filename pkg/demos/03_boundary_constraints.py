"""Perturb the Kahle distribution without moving its constrained means.

With the boundary counts phi_2 among the constraints every such perturbation
loses entropy.  Without them, some gain it.
"""

from ersc import KahleParams, enumerate_space, exact_distribution
from ersc.maxent import verify_maxent
from ersc.observables import f_obs, phi_obs

S = enumerate_space("C_n", 3)
pk = exact_distribution(KahleParams(3, (0.4, 0.6)), S)

for name, obs in [("f1, f2, phi2", [f_obs(1), f_obs(2), phi_obs(2)]), ("f1, f2", [f_obs(1), f_obs(2)])]:
    r = verify_maxent(pk, obs, 2000, seed=0)
    print(f"constraints ({name}): {r.violations}/{r.perturbations} perturbations raise the entropy, "
          f"largest gain {max(r.max_increase, 0.0):.3e}")
