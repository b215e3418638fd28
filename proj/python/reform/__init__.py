"""Join-tree reformulation under time pressure."""

from ._core import (
    BoundaryError,
    ConfigError,
    EstimateOverflow,
    InconsistentEvidence,
    JointTooLarge,
    JoinTree,
    Network,
    NoFeasibleTarget,
    ParseError,
    ReformError,
    StructuralError,
    ValidationError,
    brute_force_marginals,
    control,
    corpus_manifest,
    deadline_optimum,
    first_tree,
    foc_residual,
    infer,
    join_tree_for_ordering,
    moralize_edges,
    optimize,
    profile,
    reformulate,
    run_experiment,
    target_optimum,
    value,
)

__all__ = [name for name in dir() if not name.startswith("_")]
