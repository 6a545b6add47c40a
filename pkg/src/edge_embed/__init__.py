"""Joint function placement and multipath stream mapping for DAG workloads
running on heterogeneous edge networks.

The embedding engine minimizes a workload's makespan by choosing, per
function, a hosting server, and per data stream, a division across every
simple path between the hosting servers. Baselines (upward-rank list
scheduling and a placement-only variant), an exhaustive oracle, and a
seeded benchmark harness round out the package.
"""

from .baselines import (
    PassiveRoute,
    RankTable,
    compute_rank_table,
    heft_schedule,
    passive_routes,
    placement_only_embed,
)
from .bench import (
    DagRecord,
    ReportBundle,
    TrialRecord,
    WorkloadSpec,
    emit_report,
    generate_dag_batch,
    generate_dag_records,
    generate_network,
    import_dags,
    load_dag_records,
    load_network,
    nested_networks,
    network_fingerprint,
    run_benchmark,
    scale_network,
    write_workload,
)
from .embedder import (
    EdgeMapping,
    EmbeddingResult,
    ScheduleState,
    SubproblemResult,
    brute_force_embed,
    dpe_embed,
    embedding_to_json,
    entry_finish_times,
    simulate_embedding,
    solve_subproblem,
)
from .errors import (
    AlreadyAugmentedError,
    ConnectivityUnreachableError,
    CycleDetectedError,
    DisconnectedNetworkError,
    DuplicateLinkError,
    DuplicateStreamEdgeError,
    EdgeEmbedError,
    MissingOutputSizeError,
    NonPositiveParameterError,
    NonPositiveStreamError,
    NotEntryError,
    OrderViolationError,
    PathExplosionError,
    SamePairError,
    SchemaError,
    SelfLoopLinkError,
    TooLargeError,
    UnpopulatedPredecessorError,
    ValidationError,
)
from .model import (
    AugmentedDag,
    EdgeNetwork,
    FunctionNode,
    Link,
    Server,
    StreamEdge,
    WorkloadDag,
    augment_dummy_tail,
    canonical_json,
    dag_from_json,
    dag_to_json,
    make_network,
    network_from_json,
    network_to_json,
    normalize_entry_order,
    processing_time,
    validate_dag,
    validate_network,
)
from .pathfind import (
    DEFAULT_PATH_CAP,
    PATH_CAP_ENV_VAR,
    PathCatalog,
    SimplePath,
    build_catalog,
    enumerate_simple_paths,
    path_coefficient,
    resolve_path_cap,
)
from .splitter import (
    SAME_SERVER,
    SplitProblem,
    SplitSolution,
    bisection_oracle,
    optimal_split,
    routing_time,
)

__version__ = "0.1.0"

__all__ = [
    "AlreadyAugmentedError",
    "AugmentedDag",
    "ConnectivityUnreachableError",
    "CycleDetectedError",
    "DagRecord",
    "DEFAULT_PATH_CAP",
    "DisconnectedNetworkError",
    "DuplicateLinkError",
    "DuplicateStreamEdgeError",
    "EdgeEmbedError",
    "EdgeMapping",
    "EdgeNetwork",
    "EmbeddingResult",
    "FunctionNode",
    "Link",
    "MissingOutputSizeError",
    "NonPositiveParameterError",
    "NonPositiveStreamError",
    "NotEntryError",
    "OrderViolationError",
    "PATH_CAP_ENV_VAR",
    "PassiveRoute",
    "PathCatalog",
    "PathExplosionError",
    "RankTable",
    "ReportBundle",
    "SAME_SERVER",
    "SamePairError",
    "ScheduleState",
    "SchemaError",
    "SelfLoopLinkError",
    "Server",
    "SimplePath",
    "SplitProblem",
    "SplitSolution",
    "StreamEdge",
    "SubproblemResult",
    "TooLargeError",
    "TrialRecord",
    "UnpopulatedPredecessorError",
    "ValidationError",
    "WorkloadDag",
    "WorkloadSpec",
    "augment_dummy_tail",
    "bisection_oracle",
    "brute_force_embed",
    "build_catalog",
    "canonical_json",
    "compute_rank_table",
    "dag_from_json",
    "dag_to_json",
    "dpe_embed",
    "embedding_to_json",
    "emit_report",
    "entry_finish_times",
    "enumerate_simple_paths",
    "generate_dag_batch",
    "generate_dag_records",
    "generate_network",
    "heft_schedule",
    "import_dags",
    "load_dag_records",
    "load_network",
    "make_network",
    "nested_networks",
    "network_fingerprint",
    "network_from_json",
    "network_to_json",
    "normalize_entry_order",
    "optimal_split",
    "passive_routes",
    "path_coefficient",
    "placement_only_embed",
    "processing_time",
    "resolve_path_cap",
    "routing_time",
    "run_benchmark",
    "scale_network",
    "simulate_embedding",
    "solve_subproblem",
    "validate_dag",
    "validate_network",
    "write_workload",
]
