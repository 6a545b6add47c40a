"""Reference schedulers the dynamic program is benchmarked against.

Both baselines restrict every transfer to a single fixed route per server
pair (the cheapest simple path, used for the whole stream). The list
scheduler additionally serializes functions that share a server, while the
placement-only embedder reuses the dynamic program and differs from it in
nothing but the missing stream splits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .embedder import (
    EdgeMapping,
    EmbeddingResult,
    ScheduleState,
    SubproblemResult,
    _dynamic_embed,
)
from .errors import UnpopulatedPredecessorError
from .model import AugmentedDag, EdgeNetwork, StreamEdge, processing_time
from .pathfind import PathCatalog, SimplePath
from .splitter import SplitSolution


@dataclass(frozen=True)
class PassiveRoute:
    """Cheapest single simple path per ordered server pair.

    ``coefficient(u, v)`` is that path's seconds-per-bit cost, zero on the
    diagonal where no routing happens.
    """

    path: dict[tuple[int, int], SimplePath] = field(repr=False)
    _coefficient: dict[tuple[int, int], float] = field(repr=False)

    def coefficient(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        return self._coefficient[(u, v)]


def passive_routes(catalog: PathCatalog) -> PassiveRoute:
    """Pick the minimum-coefficient path per pair from the catalog.

    Coefficient ties resolve to the path that comes first in canonical
    order, which the catalog already guarantees.
    """
    best_path: dict[tuple[int, int], SimplePath] = {}
    best_coeff: dict[tuple[int, int], float] = {}
    for pair, coeffs in catalog.coefficients.items():
        winner = 0
        for k in range(1, len(coeffs)):
            if coeffs[k] < coeffs[winner]:  # strict keeps canonical-first
                winner = k
        best_path[pair] = catalog.paths[pair][winner]
        best_coeff[pair] = coeffs[winner]
    return PassiveRoute(path=best_path, _coefficient=best_coeff)


# ---------------------------------------------------------------------------
# List scheduling by upward rank with insertion-based slot search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankTable:
    """Priority data for the list scheduler.

    avg_exec averages a function's processing time over all servers;
    avg_comm averages an edge's transfer time over all ordered server
    pairs (same-server pairs contribute zero). upward_rank is avg_exec
    plus the largest (avg_comm + successor rank) over out-edges, i.e. the
    average length of the longest remaining chain.
    """

    upward_rank: dict[int, float]
    avg_exec: dict[int, float]
    avg_comm: dict[tuple[int, int], float]


def compute_rank_table(
    dag: AugmentedDag, net: EdgeNetwork, routes: PassiveRoute
) -> RankTable:
    n = net.n_servers
    avg_exec = {
        f.id: sum(processing_time(f, s) for s in net.servers) / n
        for f in dag.functions
    }
    # Mean over all n^2 ordered pairs; the n same-server pairs add zero.
    coeff_total = sum(
        routes.coefficient(u, v) for u in range(n) for v in range(n) if u != v
    )
    mean_coeff = coeff_total / (n * n)
    avg_comm = {(e.src, e.dst): e.size * mean_coeff for e in dag.edges}

    successors: dict[int, list[StreamEdge]] = {f.id: [] for f in dag.functions}
    for e in dag.edges:
        successors[e.src].append(e)
    upward: dict[int, float] = {}
    for node in reversed(dag.functions):
        best_tail = 0.0
        for e in successors[node.id]:
            tail = avg_comm[(e.src, e.dst)] + upward[e.dst]
            if tail > best_tail:
                best_tail = tail
        upward[node.id] = avg_exec[node.id] + best_tail
    return RankTable(upward_rank=upward, avg_exec=avg_exec, avg_comm=avg_comm)


def _insertion_start(
    busy: list[tuple[float, float]], ready: float, duration: float
) -> float:
    """Earliest start >= ready that fits ``duration`` into the busy list."""
    start = ready
    for b_start, b_end in busy:
        if start + duration <= b_start:
            break
        if b_end > start:
            start = b_end
    return start


def heft_schedule(
    dag: AugmentedDag, net: EdgeNetwork, routes: PassiveRoute
) -> EmbeddingResult:
    """Classic upward-rank list scheduling on the augmented workload.

    Functions are taken in decreasing rank order; each is placed on the
    server with the earliest insertion-based finish time, where input
    transfers pay the passive route's full-stream cost. Servers run one
    function at a time. The collector ranks last and its finish time is
    the makespan.
    """
    table = compute_rank_table(dag, net, routes)
    order = sorted(
        (f.id for f in dag.functions),
        key=lambda fid: (-table.upward_rank[fid], dag.position[fid]),
    )
    in_edges: dict[int, list[StreamEdge]] = {f.id: [] for f in dag.functions}
    for e in dag.edges:
        in_edges[e.dst].append(e)

    busy: dict[int, list[tuple[float, float]]] = {s.id: [] for s in net.servers}
    placements: dict[int, int] = {}
    finish_times: dict[int, float] = {}

    for fid in order:
        node = dag.by_id[fid]
        best_finish = float("inf")
        best_server = -1
        best_start = 0.0
        for server in net.servers:
            ready = 0.0
            for e in in_edges[fid]:
                comm = e.size * routes.coefficient(placements[e.src], server.id)
                arrive = finish_times[e.src] + comm
                if arrive > ready:
                    ready = arrive
            duration = processing_time(node, server)
            start = _insertion_start(busy[server.id], ready, duration)
            eft = start + duration
            if eft < best_finish:  # strict: ties keep the smallest id
                best_finish = eft
                best_server = server.id
                best_start = start
        placements[fid] = best_server
        finish_times[fid] = best_finish
        busy[best_server].append((best_start, best_finish))
        busy[best_server].sort()

    mappings: dict[tuple[int, int], EdgeMapping] = {}
    for e in dag.edges:
        u, v = placements[e.src], placements[e.dst]
        if u == v:
            mappings[(e.src, e.dst)] = EdgeMapping(same_server=True)
        else:
            mappings[(e.src, e.dst)] = EdgeMapping(
                same_server=False,
                paths=(routes.path[(u, v)],),
                allocations=(e.size,),
            )
    return EmbeddingResult(
        placements=placements,
        edge_mappings=mappings,
        finish_times=finish_times,
        makespan=finish_times[dag.dummy_id],
    )


# ---------------------------------------------------------------------------
# Placement-only embedding: the dynamic program without stream splitting
# ---------------------------------------------------------------------------


def _solve_passive(
    dag: AugmentedDag,
    net: EdgeNetwork,
    routes: PassiveRoute,
    state: ScheduleState,
    edge: StreamEdge,
    fixed_dst: int,
) -> SubproblemResult:
    """Per-edge minimization with whole-stream single-path transfers."""
    src_f, dst_f = edge.src, edge.dst
    proc = processing_time(dag.by_id[dst_f], net.servers[fixed_dst])

    committed = state.decided_placement.get(src_f)
    if committed is not None:
        candidates = [committed]
    else:
        candidates = [s.id for s in net.servers]

    best_m = -1
    best_phi = float("inf")
    best_transit = 0.0
    for m in candidates:
        finish = state.best_finish.get((src_f, m))
        if finish is None:
            raise UnpopulatedPredecessorError(src_f)
        transit = edge.size * routes.coefficient(m, fixed_dst)
        phi = finish + transit + proc
        if phi < best_phi:
            best_phi = phi
            best_m = m
            best_transit = transit

    if best_m == fixed_dst:
        return SubproblemResult(
            phi=best_phi, src_server=best_m, paths=(), split=None, transit=0.0
        )
    # The whole stream rides the one passive path: a one-branch split.
    return SubproblemResult(
        phi=best_phi,
        src_server=best_m,
        paths=(routes.path[(best_m, fixed_dst)],),
        split=SplitSolution(
            allocations=(edge.size,), bottleneck_time=best_transit
        ),
        transit=best_transit,
    )


def placement_only_embed(
    dag: AugmentedDag,
    net: EdgeNetwork,
    catalog: PathCatalog,
    routes: PassiveRoute | None = None,
) -> EmbeddingResult:
    """The dynamic program with every split replaced by the passive route.

    Same recurrence, same commit-once rule, same tie-breaks; the only
    difference from the full embedder is that each transfer sends the
    whole stream over the pair's single cheapest path.
    """
    if routes is None:
        routes = passive_routes(catalog)

    def solve(state: ScheduleState, edge: StreamEdge, fixed_dst: int):
        return _solve_passive(dag, net, routes, state, edge, fixed_dst)

    return _dynamic_embed(dag, net, solve, ready=None)
