"""Quantum correlation measures, channel information quantities and continuity bounds."""

from .core import (
    DensityMatrix,
    PureState,
    ValidationError,
    bures_distance,
    fidelity,
    make_rng,
    partial_trace,
    permute,
    purify,
    random_density,
    random_pure,
    random_unitary,
    tensor,
    trace_distance,
)
from .entropy import (
    Ensemble,
    NumericalConsistencyError,
    binary_entropy,
    conditional_mutual_information,
    g_func,
    holevo_chi,
    mutual_information,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from .channels import (
    Channel,
    ChannelDistance,
    apply,
    apply_local,
    bures_distance_channels,
    channel_mutual_information,
    choi_matrix,
    complementary,
    compose,
    dephasing_channel,
    depolarizing_channel,
    depolarizing_semigroup,
    diamond_distance,
    diamond_upper,
    ec_distance,
    entropy_exchange,
    erasure_channel,
    identity_channel,
    random_channel,
    random_unitary_mixture,
    stinespring,
    unitary_channel,
)
from .measures import (
    OptResult,
    Povm,
    chi_A,
    classical_correlation,
    constrained_holevo_capacity,
    discord,
    ensemble_povm,
    entanglement_of_formation,
    entropy_reduction,
    holevo_capacity,
    holevo_capacity_ec,
    is_qc_state,
    posterior_ensemble,
    random_povm,
    unopt_classical_correlation,
    unopt_discord,
    unopt_discord_dilated,
    wootters_entanglement_of_formation,
)
from .bounds import (
    BoundReport,
    GrowthFunction,
    Hamiltonian,
    cb_min,
    cb_t,
    chi_capacity_lower_bound,
    f_H,
    gibbs_state,
    growth_from_hamiltonian,
    growth_osc,
    number_operator,
)
from .verify import CheckRecord, SuiteConfig, replay, run_all, run_suite

__version__ = "0.1.0"
