"""Entropy-deceiving graphs: constructions, competing measures and experiments."""

from .digits import DigitStream, binarize, champernowne_digits, load_digit_file, pi_digits, prng_digits
from .generators import (
    CorrelationMatrix,
    ZkTrace,
    ba_graph,
    correlated_pair,
    digit_graph,
    er_graph,
    er_graph_exact,
    regular_ring_graph,
    targeted_degree_sequence,
    zk_edge_count_formula,
    zk_graph,
    zk_graph_randomized,
)
from .graph import (
    Graph,
    adjacency_matrix,
    are_isomorphic,
    build_graph,
    canonical_form,
    degree_sequence,
    edge_density,
    is_graphical,
    realize_graph,
)
from .measures import (
    Distribution,
    EntropyReport,
    adjacency_entropy,
    block_entropy,
    clustering_coefficient,
    degree_histogram,
    degree_sequence_entropy,
    entropy_rate_profile,
    graph_entropy,
    lz_complexity,
    shannon_entropy,
)

__version__ = "0.1.0"
