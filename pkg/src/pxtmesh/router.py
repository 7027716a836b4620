"""Online demand routing: cheapest branch-point-free protection reuse.

One demand at a time: the working path takes the shortest route over links
with spare capacity; the protection path is found in an auxiliary graph whose
zero-cost "shortcut" arcs stand for whole reusable segments of existing PXTs
(between occurrences of the demand's terminals, or open trail ends) and whose
unit-cost "unused" arcs stand for fresh edges.  Arc pairs whose expansions
would collide in the real graph are marked rivals, and the constrained search
guarantees the expanded protection route is a simple path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cdijkstra import (
    DEFAULT_LIMITS,
    Arc,
    ResourceLimitExceeded,
    RivalGraph,
    SearchLimits,
    solve,
)
from .graph import EdgeId, Graph, Walk, disjoint, is_path, link_key, shortest_path
from .plan import AllocationPlan, Demand, PlanEntry, PlanError


class RoutingError(RuntimeError):
    def __init__(self, message: str, resource_limit: str | None = None):
        super().__init__(message)
        self.resource_limit = resource_limit


@dataclass(frozen=True)
class Subtrail:
    """A contiguous reusable piece of a PXT, bounded by terminal occurrences
    or open trail ends; usable only in its entirety."""

    walk: Walk
    start_kind: str  # "terminal" | "trail-end"
    end_kind: str


@dataclass(frozen=True)
class AuxEdge:
    """One undirected auxiliary-graph edge plus its expansion in G."""

    kind: str  # "unused" | "shortcut"
    u: str
    v: str
    cost: int
    subtrail: Subtrail | None = None

    def expansion_nodes(self) -> frozenset[str]:
        if self.kind == "unused":
            return frozenset((self.u, self.v))
        return frozenset(self.subtrail.walk.nodes)


@dataclass
class AuxGraph:
    graph: RivalGraph  # directed, rival-annotated
    edges: list[AuxEdge]

    def arc_edge(self, arc_id: int) -> tuple[AuxEdge, bool]:
        """Map a directed arc id back to (aux edge, reversed?)."""
        return self.edges[arc_id // 2], bool(arc_id % 2)


class RouterState:
    """Owns the growing plan; route() calls must stay sequential."""

    def __init__(self, graph: Graph, mode: str = "node",
                 limits: SearchLimits = DEFAULT_LIMITS,
                 log: list[str] | None = None):
        self.graph = graph
        self.plan = AllocationPlan(graph, mode=mode)
        self.limits = limits
        self.log = log
        # node -> indices of entries whose working path touches it
        self._working_touch: dict[str, list[int]] = {}
        self._indexed = 0

    def route(self, demand: Demand) -> PlanEntry:
        return route_demand(self, demand)

    def _sync_index(self) -> None:
        # entries may also be seeded directly into the plan
        for idx in range(self._indexed, len(self.plan.entries)):
            for n in self.plan.entries[idx].working.nodes:
                self._working_touch.setdefault(n, []).append(idx)
        self._indexed = len(self.plan.entries)

    def conflicting_entries(self, working: Walk) -> list[PlanEntry]:
        """Entries whose working path is not disjoint from `working`."""
        self._sync_index()
        mode = self.plan.mode
        candidates: set[int] = set()
        for n in working.nodes:
            candidates.update(self._working_touch.get(n, ()))
        out = []
        for idx in sorted(candidates):
            entry = self.plan.entries[idx]
            if not disjoint(entry.working, working, mode):
                out.append(entry)
        return out


def _all_shortest_workings(state: RouterState, u: str, v: str) -> list[tuple[str, ...]]:
    g, plan = state.graph, state.plan
    dist = {}
    frontier = [v]
    dist[v] = 0
    from collections import deque
    q = deque(frontier)
    while q:
        x = q.popleft()
        for w in g.neighbors(x):
            if plan.has_free_edge(x, w) and w not in dist:
                dist[w] = dist[x] + 1
                q.append(w)
    if u not in dist:
        return []
    out: list[tuple[str, ...]] = []

    def rec(cur, acc):
        if cur == v:
            out.append(tuple(acc))
            return
        for w in g.neighbors(cur):
            if plan.has_free_edge(cur, w) and dist.get(w, -2) == dist[cur] - 1:
                rec(w, acc + [w])

    rec(u, [u])
    return out


def _protection_feasible(state: RouterState, nodes: tuple[str, ...]) -> bool:
    """Cheap sufficient check: a disjoint all-fresh detour exists."""
    g, plan = state.graph, state.plan
    interior = set(nodes[1:-1]) if plan.mode == "node" else set()
    links = {link_key(nodes[i], nodes[i + 1]) for i in range(len(nodes) - 1)}

    def usable(a, b):
        return (a not in interior and b not in interior
                and link_key(a, b) not in links and plan.has_free_edge(a, b))

    return shortest_path(g, nodes[0], nodes[-1], usable) is not None


def find_working(state: RouterState, demand: Demand) -> Walk:
    """Shortest route over links with spare capacity, materialized fresh.

    Ties between equal-length routes go to the one over the least-used links
    (spreading copies of repeated demands apart so their backups can share),
    then lexicographically.  Routes whose interior would cut the terminals
    off from any disjoint protection are avoided when an alternative exists.
    """
    plan = state.plan
    candidates = _all_shortest_workings(state, demand.u, demand.v)
    if not candidates:
        raise RoutingError(f"demand {demand.id}: no working route "
                           f"between {demand.u} and {demand.v}")

    def rank(p):
        usage = sum(plan.used_on_link(p[i], p[i + 1]) for i in range(len(p) - 1))
        return (usage, p)

    feasible = [p for p in candidates if _protection_feasible(state, p)]
    nodes = min(feasible or candidates, key=rank)
    edges = tuple(plan.fresh_edge(nodes[i], nodes[i + 1]) for i in range(len(nodes) - 1))
    return Walk(nodes, edges)


def collect_subtrails(state: RouterState, demand: Demand) -> list[Subtrail]:
    """Cut every PXT into maximal reusable segments for this demand.

    Closed PXTs are usable only when both terminals occur on them.  Open PXTs
    are additionally cut at their two ends, since a protection route may enter
    there by extending the trail.  Segments that are not simple paths are
    discarded: they could never be part of a protection path.
    """
    u, v = demand.u, demand.v
    out: list[Subtrail] = []
    for pxt in state.plan.pxts:
        nodes, edges = pxt.walk.nodes, pxt.walk.edges
        k = len(edges)
        if pxt.closed:
            ring = nodes[:-1]
            positions = [i for i in range(k) if ring[i] in (u, v)]
            if not any(ring[i] == u for i in positions) or \
               not any(ring[i] == v for i in positions):
                continue
            for j, a in enumerate(positions):
                b = positions[(j + 1) % len(positions)]
                if b > a:
                    seg_nodes, seg_edges = nodes[a:b + 1], edges[a:b]
                else:
                    seg_nodes = nodes[a:k] + nodes[:b + 1]
                    seg_edges = edges[a:] + edges[:b]
                out.append(Subtrail(Walk(seg_nodes, seg_edges), "terminal", "terminal"))
        else:
            positions = sorted({0, k} | {i for i in range(k + 1) if nodes[i] in (u, v)})
            for a, b in zip(positions, positions[1:]):
                seg = Walk(nodes[a:b + 1], edges[a:b])
                out.append(Subtrail(
                    seg,
                    "terminal" if nodes[a] in (u, v) else "trail-end",
                    "terminal" if nodes[b] in (u, v) else "trail-end",
                ))
    return [s for s in out if is_path(s.walk)]


def prohibited_edges(state: RouterState, demand: Demand, working: Walk):
    """Predicate over edges that the protection route must not contain.

    An edge is prohibited when it touches the working interior (node mode),
    when it lies on a link of the working path (they could never be
    disjoint), or when it belongs to the protection path of a demand whose
    working conflicts with this one (those backups may be needed at the same
    time, so sharing is off).
    """
    mode = state.plan.mode
    interior = working.interior() if mode == "node" else set()
    w_links = working.link_set()
    conflict_edges: set[EdgeId] = set()
    for entry in state.conflicting_entries(working):
        conflict_edges.update(entry.protection.edges)

    def prohibited(e: EdgeId) -> bool:
        return (e.u in interior or e.v in interior
                or e.link in w_links
                or e in conflict_edges)

    return prohibited


def build_aux(state: RouterState, demand: Demand, working: Walk,
              subtrails: list[Subtrail]) -> AuxGraph:
    """Auxiliary search graph: unit-cost fresh-capacity arcs plus zero-cost
    shortcut arcs, with rival marks wherever two expansions would collide."""
    plan = state.plan
    prohibited = prohibited_edges(state, demand, working)
    interior = working.interior() if plan.mode == "node" else set()
    w_links = working.link_set()

    aux_edges: list[AuxEdge] = []
    for u, v in state.graph.links():
        if not plan.has_free_edge(u, v):
            continue
        if (u, v) in w_links or u in interior or v in interior:
            continue
        aux_edges.append(AuxEdge("unused", u, v, 1))
    for s in subtrails:
        if any(prohibited(e) for e in s.walk.edges):
            continue
        a, b = s.walk.ends
        if a == b:
            continue  # would re-enter where it left: never expands to a path
        aux_edges.append(AuxEdge("shortcut", a, b, 0, subtrail=s))

    rivals: dict[int, set[int]] = {i: set() for i in range(len(aux_edges))}
    expansions = [e.expansion_nodes() for e in aux_edges]
    endpoints = [frozenset((e.u, e.v)) for e in aux_edges]
    for i in range(len(aux_edges)):
        for j in range(i + 1, len(aux_edges)):
            if aux_edges[i].kind == "unused" and aux_edges[j].kind == "unused":
                continue  # two fresh-capacity arcs only ever meet at endpoints
            shared = expansions[i] & expansions[j]
            if shared - (endpoints[i] & endpoints[j]):
                rivals[i].add(j)
                rivals[j].add(i)

    arcs = []
    for i, e in enumerate(aux_edges):
        rival_arcs = frozenset(x for r in rivals[i] for x in (2 * r, 2 * r + 1))
        tiebreak = 1 if e.kind == "shortcut" else 0
        arcs.append(Arc(2 * i, e.u, e.v, e.cost, rival_arcs, tiebreak))
        arcs.append(Arc(2 * i + 1, e.v, e.u, e.cost, rival_arcs, tiebreak))
    rg = RivalGraph(state.graph.sorted_nodes(), arcs, demand.u)
    return AuxGraph(rg, aux_edges)


def _expand_route(state: RouterState, demand: Demand, aux: AuxGraph,
                  arc_ids: tuple[int, ...]) -> Walk:
    nodes: list[str] = [demand.u]
    edges: list[EdgeId] = []
    for arc_id in arc_ids:
        edge, reverse = aux.arc_edge(arc_id)
        if edge.kind == "unused":
            tail = nodes[-1]
            head = edge.v if tail == edge.u else edge.u
            edges.append(state.plan.fresh_edge(tail, head))
            nodes.append(head)
        else:
            seg = edge.subtrail.walk
            if reverse:
                seg = seg.reversed()
            assert seg.nodes[0] == nodes[-1]
            nodes.extend(seg.nodes[1:])
            edges.extend(seg.edges)
    return Walk(tuple(nodes), tuple(edges))


def route_demand(state: RouterState, demand: Demand) -> PlanEntry:
    """Route one demand and commit it to the plan; the plan stays valid."""
    working = find_working(state, demand)
    subtrails = collect_subtrails(state, demand)
    aux = build_aux(state, demand, working, subtrails)
    try:
        res = solve(aux.graph, state.limits, target=demand.v)
    except ResourceLimitExceeded as exc:
        raise RoutingError(
            f"demand {demand.id}: protection search exceeded the "
            f"{exc.limit} limit", resource_limit=exc.limit) from exc
    best = res.paths.get(demand.v)
    if best is None:
        raise RoutingError(f"demand {demand.id}: no admissible protection route")
    protection = _expand_route(state, demand, aux, best.arcs)
    if not is_path(protection):  # pragma: no cover - guarded by rival marks
        raise RoutingError(f"demand {demand.id}: expansion is not a path")
    entry = PlanEntry(demand, working, protection)
    try:
        state.plan.add_entry(entry)
    except PlanError as exc:  # pragma: no cover - internal consistency guard
        raise RoutingError(f"demand {demand.id}: routed entry violates the "
                           f"plan invariants: {exc}") from exc
    state._sync_index()
    if state.log is not None:
        n_short = sum(1 for a in best.arcs if aux.arc_edge(a)[0].kind == "shortcut")
        state.log.append(
            f"demand {demand.id} {demand.u}-{demand.v}: "
            f"working={'-'.join(working.nodes)} "
            f"subtrails={len(subtrails)} aux_edges={len(aux.edges)} "
            f"cost={int(best.length)} shortcuts={n_short} "
            f"protection={'-'.join(protection.nodes)}")
    return entry


def route_all(state: RouterState, demands: list[Demand]) -> AllocationPlan:
    for d in demands:
        route_demand(state, d)
    return state.plan
