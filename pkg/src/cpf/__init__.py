"""Error-probability bounds and photon-counting receivers for quantum channel position finding."""

from .analytics import (
    BoundsResult,
    CpfScenario,
    bound_lower,
    bound_upper,
    bounds_for_scenario,
    fidelity_biphoton_if,
    fidelity_biphoton_si,
    fidelity_coherent,
    fidelity_fock,
    fidelity_gen_bipartite,
    fidelity_ghz,
    minimize_fidelity_over_a,
)
from .channels import KrausChannel, ProductChannel, adc, apply, cpf_channel, lift
from .linalg import fidelity, sqrtm_psd, tensor, trace_distance
from .receiver import (
    ReceiverModel,
    SimResult,
    click_prob_coherent,
    click_prob_fock,
    p_cum_below,
    p_det,
    p_error_minmax,
    p_success_minmax,
    simulate_receiver,
)
from .sources import (
    BiphotonIF,
    BiphotonSI,
    Coherent,
    Fock,
    GenBipartite,
    Ghz,
    biphoton_bell,
    coherent_state,
    fock_one,
    gen_bipartite,
    ghz_state,
    make_source,
)
from .sweep import SweepSpec, preset, run, verdict
