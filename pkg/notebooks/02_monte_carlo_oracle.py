# %% [markdown]
# # Checking the algebra against brute force sampling
#
# The analytic fidelity sums twirl-surviving Choi entries. Monte Carlo instead
# averages <ideal output|E(rho)|ideal output> over random equatorial inputs.

# %%
import numpy as np

from phaseclone import MapKind, SamplerConfig, mc_process_fidelity, optimal_channel
from phaseclone.cloners import process_fidelity_analytic
from phaseclone.qcore import random_channel

rng = np.random.default_rng(0)
E = random_channel(3, (3, 3), rng)
exact = process_fidelity_analytic(E, MapKind.PHASE_CLONER)
for n in (1_000, 10_000, 100_000):
    mean, se = mc_process_fidelity(E, MapKind.PHASE_CLONER, SamplerConfig(42, n))
    print(f"n={n:>6}  mc={mean:.5f} +- {se:.5f}   exact={exact:.5f}   z={(mean - exact) / se:+.2f}")

# %% [markdown]
# Covariant optima behave differently. Their integrand does not depend on the
# input, so every sample gives the same value.

# %%
E = optimal_channel(MapKind.PHASE_CLONER, 3)
print(mc_process_fidelity(E, MapKind.PHASE_CLONER, SamplerConfig(42, 5_000)))
