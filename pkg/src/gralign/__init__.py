"""Seedless alignment of correlated random graphs.

Two-phase algorithm: rank-match the h highest-degree vertices of both
graphs (anchors), then match every remaining vertex by minimum Hamming
distance between anchor-adjacency signatures.  The package also ships
the correlated random-graph samplers, the analytical error and threshold
calculators, robustness variants for small graphs, and a deterministic
Monte Carlo experiment harness with a CLI.
"""

from .anchors import AnchorList, SeparationReport, anchor_align, separation_report, top_h
from .bounds import (
    AnchorFailureReport,
    BoundInputs,
    ConditionReport,
    RegionPoint,
    anchor_failure_bound,
    bollobas_gap,
    default_anchor_count,
    degree_inversion_frequency,
    fig1_region,
    h_threshold,
    max_degree_bound,
    min_gap_for_tail,
    misalignment_bound,
    pgf_beta,
    pgf_gamma,
    phi_eps,
    q0_q1,
    rho,
    theorem_region_check,
)
from .graphs import (
    BiGraph,
    DegreeSequence,
    Graph,
    degree_sequence,
    edge_list_text,
    induced_bigraph,
    induced_subgraph,
    read_edge_list,
    write_edge_list,
)
from .harness import (
    ExperimentSpec,
    TimingReport,
    TrialRecord,
    noise_prob,
    run_sweep,
    run_trial,
    subsample_real,
    timing_report,
)
from .models import (
    UNMATCHED,
    Alignment,
    CorrelatedPair,
    ProbVector,
    sample_correlated_bigraph,
    sample_correlated_er,
    sample_perturbation,
    sample_subsampling,
    scramble,
)
from .pipeline import AlignReport, MatchCfg, full_align, full_align_report
from .robust import RobustCfg, robust_anchor_align
from .signatures import (
    Signature,
    SignatureTable,
    consistent_bipartite_align,
    hamming,
    misalignment_frequency,
    naive_bipartite_align,
    signatures_of,
)

__version__ = "0.1.0"
