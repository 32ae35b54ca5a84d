# %% [markdown]
# # Entangled or not?
#
# A two-qubit source `sqrt(1-a)|01> + sqrt(a)|10>` interpolates between a
# single photon in the probe (a=0) and one in the retained idler (a=1).
# Fidelity between the two hypotheses is always smallest at a=0, but at
# strong damping the trace distance peaks at a partially entangled state.

# %%
import numpy as np

from cpf import CpfScenario, GenBipartite
from cpf.analytics import fidelity_gen_bipartite, hypothesis_trace_distance

grid = np.linspace(0.0, 1.0, 101)

for gamma1 in (0.55, 0.65, 0.75, 0.85):
    gamma0 = gamma1 + 0.1
    fid = np.array([fidelity_gen_bipartite(a, gamma0, gamma1) for a in grid])
    dist = np.array(
        [hypothesis_trace_distance(CpfScenario(4, 1, gamma0, gamma1, GenBipartite(a))) for a in grid]
    )
    print(
        f"gamma1={gamma1:.2f}: min F at a={grid[fid.argmin()]:.2f}, "
        f"max T at a={grid[dist.argmax()]:.2f} (T={dist.max():.4f})"
    )
