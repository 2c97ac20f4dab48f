# %% [markdown]
# # Building a cloner from a hybrid map and a transposer
#
# Send one output of the optimal theta -> theta (x) -theta map through the
# optimal phase transposer. Compare the result with the direct optimum.

# %%
from phaseclone.composition import modular_report

print(" d   variant            modular   direct    ratio   quoted")
for variant in ("cloner", "transpose-cloner"):
    for d in range(2, 8):
        r = modular_report(d, variant)
        print(f"{d:2d}   {variant:17s}  {r.modular:.5f}   {r.direct_optimum:.5f}   {r.ratio:.3f}   {r.reference:.5f}")

# %% [markdown]
# At d=2 the transposer is exact on the equator, so nothing is lost. For
# large d the modular cloner behaves like 1/(2d) against 2/d for the direct
# optimum (ratio -> 4), and the modular transpose-cloner like 4/d^2 against
# 6/d^2 (ratio -> 3/2). The quoted (3d-4)/(d(d-1)(2d-1)) lies below both.
