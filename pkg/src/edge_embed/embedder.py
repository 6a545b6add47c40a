"""Joint placement and stream-mapping via dynamic programming.

Functions are processed in topological order. For a fixed placement of a
function f_j on server n, the earliest finish of f_j is the slowest of its
incoming transfers, where each transfer independently picks the source
placement and stream split that deliver it soonest:

    T*(f_j, n) = max over preds f_i of
                 min over source m of
                 T*(f_i, m) + transit(m, n, s_ij) + proc(f_j, n)

Transit uses the bottleneck-equalizing split over every simple path of the
(m, n) pair, or zero when m == n. A predecessor that feeds several
functions cannot be re-placed per consumer: the first consumer processed
commits its placement, later consumers reuse it, and the first consumer's
row is recomputed under that commitment so every stored finish time
describes one single consistent embedding.

An exhaustive search over all placement vectors doubles as the optimality
oracle, and a forward replay of any returned embedding re-derives its
finish times from nothing but the recurrence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    NotEntryError,
    TooLargeError,
    UnpopulatedPredecessorError,
    ValidationError,
)
from .model import AugmentedDag, EdgeNetwork, StreamEdge, processing_time
from .pathfind import PathCatalog, SimplePath, path_coefficient
from .splitter import SplitProblem, SplitSolution, optimal_split, routing_time

EXHAUSTIVE_LIMIT = 10**6


@dataclass
class ScheduleState:
    """Mutable working state of the dynamic program.

    best_finish maps (function, server) to the earliest finish achievable
    with that pairing; decided_placement pins functions whose placement
    has been committed; server_ready holds per-server ready times applied
    to entry functions only.
    """

    best_finish: dict[tuple[int, int], float] = field(default_factory=dict)
    decided_placement: dict[int, int] = field(default_factory=dict)
    server_ready: dict[int, float] = field(default_factory=dict)
    # (src function, dst function, src server, dst server) -> transit
    # seconds, filled once a committed source is queried. Keyed per edge:
    # two streams leaving the same committed source carry different sizes.
    transit_cache: dict[tuple[int, int, int, int], float] = field(
        default_factory=dict
    )


@dataclass(frozen=True)
class SubproblemResult:
    """Outcome of one per-edge minimization at a fixed destination."""

    phi: float
    src_server: int
    paths: tuple[SimplePath, ...]
    split: SplitSolution | None
    transit: float


@dataclass(frozen=True)
class EdgeMapping:
    """How one stream travels: over concrete paths, or not at all."""

    same_server: bool
    paths: tuple[SimplePath, ...] = ()
    allocations: tuple[float, ...] = ()


@dataclass(frozen=True)
class EmbeddingResult:
    """A complete embedding: placements, stream mappings, finish times."""

    placements: dict[int, int]
    edge_mappings: dict[tuple[int, int], EdgeMapping]
    finish_times: dict[int, float]
    makespan: float


def entry_finish_times(
    dag: AugmentedDag, net: EdgeNetwork, state: ScheduleState, function_id: int
) -> ScheduleState:
    """Populate best_finish for an entry function on every server.

    An entry function has no inputs to wait for: its finish on server n is
    its processing time there plus the server's ready time.
    """
    if dag.predecessors[function_id]:
        raise NotEntryError(function_id)
    node = dag.by_id[function_id]
    for server in net.servers:
        ready = state.server_ready.get(server.id, 0.0)
        state.best_finish[(function_id, server.id)] = (
            processing_time(node, server) + ready
        )
    return state


def solve_subproblem(
    dag: AugmentedDag,
    net: EdgeNetwork,
    catalog: PathCatalog,
    state: ScheduleState,
    edge: StreamEdge,
    fixed_dst: int,
) -> SubproblemResult:
    """Cheapest way to feed ``edge`` into its function placed on fixed_dst.

    When the source function's placement is already committed, only that
    server is evaluated and its transit is served from the cache. Otherwise
    every candidate source server m is scored as

        phi(m) = T*(f_i, m) + transit(m, fixed_dst, s_ij) + proc(f_j, fixed_dst)

    and the smallest phi wins, ties going to the smallest server id.
    """
    src_f, dst_f = edge.src, edge.dst
    proc = processing_time(dag.by_id[dst_f], net.servers[fixed_dst])

    committed = state.decided_placement.get(src_f)
    if committed is not None:
        finish = state.best_finish.get((src_f, committed))
        if finish is None:
            raise UnpopulatedPredecessorError(src_f)
        cache_key = (src_f, dst_f, committed, fixed_dst)
        transit = state.transit_cache.get(cache_key)
        if transit is None:
            transit = catalog.transit_seconds(committed, fixed_dst, edge.size)
            state.transit_cache[cache_key] = transit
        best_m = committed
        best_phi = finish + transit + proc
        best_transit = transit
    else:
        best_m = -1
        best_phi = float("inf")
        best_transit = 0.0
        for server in net.servers:
            m = server.id
            finish = state.best_finish.get((src_f, m))
            if finish is None:
                raise UnpopulatedPredecessorError(src_f)
            transit = catalog.transit_seconds(m, fixed_dst, edge.size)
            phi = finish + transit + proc
            if phi < best_phi:  # strict: first minimum keeps smallest id
                best_phi = phi
                best_m = m
                best_transit = transit

    if best_m == fixed_dst:
        return SubproblemResult(
            phi=best_phi, src_server=best_m, paths=(), split=None, transit=0.0
        )
    paths = catalog.pair_paths(best_m, fixed_dst)
    split = optimal_split(
        SplitProblem(
            coefficients=catalog.pair_coefficients(best_m, fixed_dst),
            stream_size=edge.size,
        )
    )
    return SubproblemResult(
        phi=best_phi,
        src_server=best_m,
        paths=paths,
        split=split,
        transit=best_transit,
    )


def _require_entries_first(dag: AugmentedDag) -> None:
    """The dynamic program expects entries at the head of the order."""
    entries = set(dag.entry_ids)
    head = {f.id for f in dag.functions[: len(entries)]}
    if head != entries:
        raise ValidationError(
            "entry functions must occupy the first positions of the stored "
            f"topological order; entries are {sorted(entries)}"
        )


def _ready_map(net: EdgeNetwork, ready) -> dict[int, float]:
    if ready is None:
        return {s.id: 0.0 for s in net.servers}
    return {s.id: float(ready.get(s.id, 0.0)) for s in net.servers}


def _dynamic_embed(dag: AugmentedDag, net: EdgeNetwork, solve, ready) -> EmbeddingResult:
    """Shared DP driver; ``solve(state, edge, fixed_dst)`` scores one edge.

    Runs the recurrence over non-entry functions, applies the commit-once
    rule for shared predecessors (recomputing the committing row so stored
    values stay consistent), then walks pointers backward from the best
    collector placement to materialize one embedding.
    """
    _require_entries_first(dag)
    state = ScheduleState(server_ready=_ready_map(net, ready))
    for entry in dag.entry_ids:
        entry_finish_times(dag, net, state, entry)

    n_servers = net.n_servers
    edge_by_pair = {(e.src, e.dst): e for e in dag.edges}
    pointers: dict[tuple[int, int], dict[int, SubproblemResult]] = {}

    for fj in dag.topo_non_entries:
        preds = dag.predecessors[fj]

        def compute_row() -> list[float]:
            row = []
            for n in range(n_servers):
                per_pred = {
                    fi: solve(state, edge_by_pair[(fi, fj)], n) for fi in preds
                }
                pointers[(fj, n)] = per_pred
                row.append(max(r.phi for r in per_pred.values()))
            return row

        row = compute_row()
        # Commit-once: a predecessor feeding more than one function is
        # pinned to the source it used at this row's best destination; the
        # row is then recomputed so its values describe the pinned world.
        n_hat = min(range(n_servers), key=lambda k: (row[k], k))
        newly_committed = False
        for fi in preds:
            if fi not in state.decided_placement and dag.out_degree[fi] >= 2:
                state.decided_placement[fi] = pointers[(fj, n_hat)][fi].src_server
                newly_committed = True
        if newly_committed:
            row = compute_row()
        for n in range(n_servers):
            state.best_finish[(fj, n)] = row[n]

    dummy = dag.dummy_id
    n_star = min(
        range(n_servers), key=lambda k: (state.best_finish[(dummy, k)], k)
    )
    makespan = state.best_finish[(dummy, n_star)]

    # Materialize placements and mappings by following the pointers back
    # from the collector; reverse topological order guarantees a function's
    # own placement is known before its in-edges are resolved.
    placements: dict[int, int] = {dummy: n_star}
    mappings: dict[tuple[int, int], EdgeMapping] = {}
    for node in reversed(dag.functions):
        fj = node.id
        if not dag.predecessors[fj]:
            continue
        n_j = placements[fj]
        for fi, res in pointers[(fj, n_j)].items():
            src = res.src_server
            prior = placements.get(fi)
            if prior is None:
                placements[fi] = src
            elif prior != src:
                raise AssertionError(
                    f"inconsistent placement for function {fi}: {prior} vs {src}"
                )
            if src == n_j:
                mappings[(fi, fj)] = EdgeMapping(same_server=True)
            else:
                mappings[(fi, fj)] = EdgeMapping(
                    same_server=False,
                    paths=res.paths,
                    allocations=res.split.allocations,
                )

    finish_times = {
        f.id: state.best_finish[(f.id, placements[f.id])] for f in dag.functions
    }
    return EmbeddingResult(
        placements=placements,
        edge_mappings=mappings,
        finish_times=finish_times,
        makespan=makespan,
    )


def dpe_embed(
    dag: AugmentedDag,
    net: EdgeNetwork,
    catalog: PathCatalog,
    ready=None,
) -> EmbeddingResult:
    """Minimize the collector's finish time over placements and splits."""

    def solve(state: ScheduleState, edge: StreamEdge, fixed_dst: int):
        return solve_subproblem(dag, net, catalog, state, edge, fixed_dst)

    return _dynamic_embed(dag, net, solve, ready)


def brute_force_embed(
    dag: AugmentedDag,
    net: EdgeNetwork,
    catalog: PathCatalog,
    ready=None,
    limit: int = EXHAUSTIVE_LIMIT,
) -> EmbeddingResult:
    """Exhaustive optimum over every placement vector (streams still split
    optimally per edge, which is closed-form and independent per edge).

    Ties are broken toward the lexicographically smallest placement vector
    in stored function order. Guarded by ``limit`` on the number of
    placement vectors.
    """
    n = net.n_servers
    q = len(dag.functions)
    combos = n**q
    if combos > limit:
        raise TooLargeError(combos, limit)

    ready_map = _ready_map(net, ready)
    order = [f.id for f in dag.functions]
    index_of = {fid: k for k, fid in enumerate(order)}
    proc = [
        [processing_time(dag.by_id[fid], server) for server in net.servers]
        for fid in order
    ]
    # transit_factor[m][n]: seconds per bit between servers m and n.
    transit_factor = [
        [
            0.0 if m == v else 1.0 / catalog.inv_coeff_sum[(m, v)]
            for v in range(n)
        ]
        for m in range(n)
    ]
    ready_row = [ready_map[s.id] for s in net.servers]
    # Per function: list of (pred index, stream bits) for the recurrence.
    pred_rows: list[list[tuple[int, float]]] = [[] for _ in order]
    for e in dag.edges:
        pred_rows[index_of[e.dst]].append((index_of[e.src], e.size))

    best_value = float("inf")
    best_vector: tuple[int, ...] | None = None
    finish = [0.0] * q
    for vector in itertools.product(range(n), repeat=q):
        for k in range(q):
            server = vector[k]
            inputs = pred_rows[k]
            if not inputs:
                finish[k] = proc[k][server] + ready_row[server]
            else:
                slowest = 0.0
                for pk, bits in inputs:
                    arrive = finish[pk] + bits * transit_factor[vector[pk]][server]
                    if arrive > slowest:
                        slowest = arrive
                finish[k] = slowest + proc[k][server]
        value = finish[q - 1]  # collector is last in stored order
        if value < best_value:  # strict: keeps lexicographically first
            best_value = value
            best_vector = vector

    assert best_vector is not None
    placements = {fid: best_vector[index_of[fid]] for fid in order}
    mappings: dict[tuple[int, int], EdgeMapping] = {}
    for e in dag.edges:
        m, v = placements[e.src], placements[e.dst]
        if m == v:
            mappings[(e.src, e.dst)] = EdgeMapping(same_server=True)
        else:
            split = optimal_split(
                SplitProblem(
                    coefficients=catalog.pair_coefficients(m, v),
                    stream_size=e.size,
                )
            )
            mappings[(e.src, e.dst)] = EdgeMapping(
                same_server=False,
                paths=catalog.pair_paths(m, v),
                allocations=split.allocations,
            )
    finish_times, makespan = simulate_embedding(dag, net, placements, mappings, ready)
    return EmbeddingResult(
        placements=placements,
        edge_mappings=mappings,
        finish_times=finish_times,
        makespan=makespan,
    )


def simulate_embedding(
    dag: AugmentedDag,
    net: EdgeNetwork,
    placements: dict[int, int],
    edge_mappings: dict[tuple[int, int], EdgeMapping],
    ready=None,
) -> tuple[dict[int, float], float]:
    """Replay a fixed embedding through the finish-time recurrence.

    Routing times are re-derived from the mapped paths and the raw link
    throughputs, independent of any catalog aggregates, so this doubles as
    the self-consistency oracle for every embedding producer.
    """
    ready_map = _ready_map(net, ready)
    finish: dict[int, float] = {}
    for node in dag.functions:
        fid = node.id
        server = net.servers[placements[fid]]
        proc = processing_time(node, server)
        preds = dag.predecessors[fid]
        if not preds:
            finish[fid] = proc + ready_map[server.id]
            continue
        slowest_input = 0.0
        for fi in preds:
            mapping = edge_mappings[(fi, fid)]
            if mapping.same_server:
                transit = routing_time(same_server=True)
            else:
                branches = [
                    (path_coefficient(p, net), z)
                    for p, z in zip(mapping.paths, mapping.allocations)
                ]
                transit = routing_time(branches)
            slowest_input = max(slowest_input, finish[fi] + transit)
        finish[fid] = slowest_input + proc
    return finish, finish[dag.dummy_id]


def embedding_to_json(result: EmbeddingResult) -> dict:
    """Plain-dict rendering of an embedding for the CLI and reports."""
    edges = []
    for (src, dst), mapping in sorted(result.edge_mappings.items()):
        edges.append(
            {
                "src": src,
                "dst": dst,
                "same_server": mapping.same_server,
                "paths": [list(p.nodes) for p in mapping.paths],
                "z": list(mapping.allocations),
            }
        )
    return {
        "placements": {str(f): s for f, s in sorted(result.placements.items())},
        "edges": edges,
        "finish_times": {str(f): t for f, t in sorted(result.finish_times.items())},
        "makespan": result.makespan,
    }
