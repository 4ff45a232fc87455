"""loopwalk: quantum state transfer on graphs with weighted loops at the
source and target, with certified numerical bounds."""

from .graph import (
    Graph,
    VertexPair,
    canonical_edge_list,
    complete_graph,
    cycle_graph,
    distance,
    from_edges,
    max_degree,
    parse_edge_list,
    path_graph,
    restricted_adjacency,
    star_graph,
    vertex_pair,
)
from .walks import (
    INFINITY,
    CospectralityResult,
    Tunneling,
    WalkTable,
    ZEstimate,
    brute_force_walks,
    classify_tunneling,
    cospectrality,
    walk_counts,
    walk_table,
    z_value,
)
from .spectral import (
    SpectralData,
    TopPair,
    eigendecompose_symmetric,
    gershgorin_split,
    spectral_data_auto,
    spectral_data_mp,
    top_pair,
)
from .dynamics import (
    Hamiltonian,
    TransferReport,
    amplitude,
    build_hamiltonian,
    curve_csv,
    default_t_max,
    fidelity_curve,
    fidelity_search,
    propagator_oracle,
    readout_mp,
    readout_time,
    transfer_strength,
    window_min_mp,
)
from .certify import (
    CertificateReport,
    Check,
    certify_instance,
    construct_q_for_lambda,
    epsilon_prime,
    extend_eigenvector,
    fidelity_floor,
    q_threshold,
    verify_fidelity_theorem,
    verify_mass_concentration,
    verify_ratio_lemma,
    verify_readout_bounds,
)

__version__ = "0.1.0"
