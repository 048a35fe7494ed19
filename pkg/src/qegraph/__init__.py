"""Quadratic embeddability of connected graphs.

A graph is quadratically embeddable when its vertices map into a Hilbert
space so that squared distances between images equal graph distances.  The
package decides membership three independent ways (closed form for theta
graphs, conditional negative definiteness of the distance matrix, positive
semidefiniteness of a spanning-tree kernel), computes the quadratic
embedding constant, reconstructs explicit embeddings, and recomputes a suite
of bundled reference values for the theta-graph classification.
"""

from .analysis import (
    FixtureResult,
    QecValue,
    QeVerdict,
    SweepReport,
    SweepRow,
    WitnessReport,
    classification_sweep,
    classify_schoenberg,
    classify_theta_closed_form,
    classify_winkler,
    qec,
    qec_cycle,
    qec_theta1_bounds,
    run_reference_suite,
    sweep_to_csv,
    sweep_to_json,
    witness_quadratic_form,
    witness_report,
)
from .config import DEFAULT_TOLERANCES, MODES, Tolerances
from .graphs import (
    Graph,
    GraphError,
    ThetaSpec,
    distance_matrix,
    format_edgelist,
    graph_from_uri,
    is_connected,
    is_isometrically_embedded,
    make_cycle,
    make_path,
    make_theta,
    parse_edgelist,
    read_edgelist,
    theta_spec_from_uri,
    write_edgelist,
)
from .spectra import (
    CndVerdict,
    JacobiConvergenceError,
    PsdVerdict,
    SpectraError,
    SpectrumResult,
    eigen_sym,
    is_cnd,
    is_psd,
    max_eig_on_ones_complement,
)
from .winkler import (
    EdgePairError,
    EdgePairValue,
    Embedding,
    EmbeddingError,
    KernelMatrix,
    OrientedTree,
    TreeError,
    build_theta1_block_kernel,
    classify_edge_pair,
    default_orientation_and_tree,
    reconstruct_embedding,
    winkler_kernel,
    zeta_path_signs,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "MODES",
    "Graph",
    "GraphError",
    "ThetaSpec",
    "make_theta",
    "make_path",
    "make_cycle",
    "distance_matrix",
    "is_connected",
    "is_isometrically_embedded",
    "parse_edgelist",
    "format_edgelist",
    "read_edgelist",
    "write_edgelist",
    "graph_from_uri",
    "theta_spec_from_uri",
    "SpectraError",
    "JacobiConvergenceError",
    "SpectrumResult",
    "eigen_sym",
    "PsdVerdict",
    "is_psd",
    "CndVerdict",
    "is_cnd",
    "max_eig_on_ones_complement",
    "TreeError",
    "EmbeddingError",
    "EdgePairError",
    "OrientedTree",
    "default_orientation_and_tree",
    "KernelMatrix",
    "winkler_kernel",
    "EdgePairValue",
    "classify_edge_pair",
    "build_theta1_block_kernel",
    "Embedding",
    "reconstruct_embedding",
    "zeta_path_signs",
    "QeVerdict",
    "QecValue",
    "WitnessReport",
    "SweepRow",
    "SweepReport",
    "FixtureResult",
    "classify_theta_closed_form",
    "classify_schoenberg",
    "classify_winkler",
    "qec",
    "qec_cycle",
    "qec_theta1_bounds",
    "witness_quadratic_form",
    "witness_report",
    "classification_sweep",
    "sweep_to_csv",
    "sweep_to_json",
    "run_reference_suite",
]
