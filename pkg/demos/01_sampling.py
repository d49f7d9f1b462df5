"""Draw complexes from the five generators and look at their face counts."""

import numpy as np

from ersc import KahleParams, RngState, counts, sample_batch
from ersc.generators import (
    GeneralParams,
    sample_flag,
    sample_general_delta,
    sample_gnp,
    sample_kahle,
    sample_linial_meshulam,
)
from ersc.measures import expected_f, expected_phi

n = 12
state = RngState(seed=2024)

# one complex per model, same seed
print("G(n,p)      ", counts(sample_gnp(n, 0.4, state)).f)
print("flag        ", counts(sample_flag(n, 0.4, state)).f)
print("Y_1(n,p)    ", counts(sample_linial_meshulam(n, 1, 0.2, state)).f)
print("Kahle       ", counts(sample_kahle(KahleParams.from_prefix(n, (0.6, 0.5, 0.5)), state)).f)
print("general     ", counts(sample_general_delta(GeneralParams.random(n, 0.5, 1.0, seed=1), state)).f)

# with p_2 = p_3 = 1 the flag complex falls out of the Kahle chain
flag = sample_flag(n, 0.4, state)
kahle = sample_kahle(KahleParams(n, (0.4,) + (1.0,) * (n - 2)), state)
print("flag == Kahle(p,1,...,1):", flag == kahle)

# batch sampling for moments
params = KahleParams.from_prefix(25, (0.3, 0.5, 0.2))
batch = sample_batch(params, 5000, RngState(7))
f, phi = batch.f_counts(), batch.phi_counts
print("\n d   mean f     E f        mean phi   E phi")
for d in range(1, 4):
    print(f"{d:2d} {f[:, d].mean():9.3f} {expected_f(params, d):9.3f} "
          f"{phi[:, d].mean():10.3f} {expected_phi(params, d):9.3f}")

# acceptance fraction among candidates recovers p_d
for d in range(1, 4):
    print(f"p_{d} ~ {f[:, d].sum() / phi[:, d].sum():.4f}  (true {params.p[d - 1]})")

print("largest dimension seen:", int(np.max(np.nonzero(f.any(axis=0))[0])))
