# %% [markdown]
# # When does a single photon beat a laser?
#
# Four boxes, one of which hides a lossy target (damping 0.2) while the
# rest are lossless. We probe each box M times and ask how many probes a
# single-photon source needs before its worst case beats the best case of
# a coherent source with one photon on average.

# %%
from cpf import CpfScenario, Coherent, Fock, bounds_for_scenario

base = CpfScenario(n_boxes=4, m_uses=1, gamma0=0.2, gamma1=0.0, source=Fock())

# %%
print(" M   Fock upper   coherent lower")
for m in (1, 5, 10, 11, 12, 20):
    quantum = bounds_for_scenario(base.replace(m_uses=m))
    classical = bounds_for_scenario(base.replace(m_uses=m, source=Coherent()))
    flag = "  <- advantage" if quantum.upper < classical.lower else ""
    print(f"{m:2d}   {quantum.upper:.6f}     {classical.lower:.6f}{flag}")

# %% [markdown]
# The same question is answered directly by `verdict`, which also backs the
# `cpf verdict` command.

# %%
from cpf.sweep import verdict

print(verdict(base).report(base))
