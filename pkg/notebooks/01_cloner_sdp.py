# %% [markdown]
# # Optimal phase-covariant cloning as a small SDP
#
# Symmetry shrinks the Choi matrix of a 1 -> 2 cloner to nine real
# coefficients. We solve the reduced problem and compare with (2d-1)/d^2.

# %%
import numpy as np

from phaseclone import sdp
from phaseclone.bases import CLONER9, assemble

for d in range(2, 7):
    prob = sdp.SdpProblem.for_family(CLONER9, d)
    res = sdp.solve_primal(prob)
    print(f"d={d}  sdp={res.value:.8f}  closed form={(2 * d - 1) / d**2:.8f}  newton steps={res.iterations}")

# %% [markdown]
# The optimiser only tells us a number. A matching dual point turns it into a proof.

# %%
d = 4
prob = sdp.SdpProblem.for_family(CLONER9, d)
cert = sdp.verify_certificate(prob, *sdp.certificates_for(CLONER9, d))
print(cert.verdict, "gap", cert.gap, "min eigs", cert.primal_min_eig, cert.dual_min_eig)

# %%
# the optimal Choi matrix itself: real, symmetric, rank deficient
J = assemble(sdp.certificates_for(CLONER9, d)[0])
w = np.linalg.eigvalsh(J)
print("rank", int((w > 1e-10).sum()), "of", J.shape[0])
