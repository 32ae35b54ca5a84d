# %% [markdown]
# # A simple receiver
#
# Count clicks in every box over M probes and point at the box with the
# fewest (or most) counts. With ten boxes, ten probes and a lossless
# background, the single-photon receiver already sits under the
# best-possible error of any coherent-state strategy for most damping rates.

# %%
from cpf import CpfScenario, Coherent
from cpf.analytics import bounds_for_scenario
from cpf.receiver import ReceiverModel, click_prob_fock, p_error_minmax, simulate_receiver

N, M = 10, 10
print("gamma0  receiver   MC(1e5)    coherent LB")
for gamma0 in (0.1, 0.3, 0.5, 0.7, 0.9):
    model = ReceiverModel.from_probs(click_prob_fock(0.0), click_prob_fock(gamma0))
    exact = p_error_minmax(N, M, model)
    sim = simulate_receiver(N, M, model, trials=100_000, seed=7)
    floor = bounds_for_scenario(CpfScenario(N, M, gamma0, 0.0, Coherent())).lower
    print(f"{gamma0:.1f}     {exact:.6f}   {sim.p_err_estimate:.6f}   {floor:.6f}")
