"""Comparison schemes: dedicated 1+1 pairs and naive shared-path protection.

Both route every demand on a fixed disjoint path pair per terminal pair.  The
1+1 scheme dedicates fresh bandwidth to each copy; the shared-path scheme
reuses protection edges whenever the edge-exclusivity and conflicting-working
rules allow, but pays no attention to branch points, so its plans are not
pre-cross-connectable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import Graph, Walk, link_key
from .plan import AllocationPlan, Demand, PlanEntry


class PairError(ValueError):
    """No disjoint working/protection pair exists for a terminal pair."""


@dataclass(frozen=True)
class DisjointPair:
    working: tuple[str, ...]
    protection: tuple[str, ...]
    mode: str


def _all_shortest_paths(g: Graph, u: str, v: str) -> list[tuple[str, ...]]:
    """Every minimum-hop node path u..v, lexicographically ordered."""
    dist = {v: 0}
    q = deque([v])
    while q:
        x = q.popleft()
        for w in g.neighbors(x):
            if w not in dist:
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
            if dist.get(w, -2) == dist[cur] - 1:
                rec(w, acc + [w])

    rec(u, [u])
    return out


def _shortest_avoiding(g: Graph, u: str, v: str, banned_nodes: set[str],
                       banned_links: set[tuple[str, str]]) -> tuple[str, ...] | None:
    def usable(a, b):
        return b not in banned_nodes and a not in banned_nodes \
            and link_key(a, b) not in banned_links

    dist = {v: 0}
    q = deque([v])
    while q:
        x = q.popleft()
        for w in g.neighbors(x):
            if not usable(x, w) or w in dist:
                continue
            dist[w] = dist[x] + 1
            q.append(w)
    if u not in dist:
        return None
    path = [u]
    cur = u
    while cur != v:
        for w in g.neighbors(cur):
            if usable(cur, w) and dist.get(w, -2) == dist[cur] - 1:
                path.append(w)
                cur = w
                break
    return tuple(path)


def disjoint_pair(g: Graph, u: str, v: str, mode: str = "node") -> DisjointPair:
    """Shortest working, then the shortest protection disjoint from it.

    The working length always equals the plain shortest-path distance; among
    all shortest workings the one admitting the shortest protection wins,
    with lexicographic order deciding any remaining tie.
    """
    if u == v:
        raise PairError("terminals must be distinct")
    best = None
    for working in _all_shortest_paths(g, u, v):
        interior = set(working[1:-1]) if mode == "node" else set()
        links = {link_key(working[i], working[i + 1]) for i in range(len(working) - 1)}
        protection = _shortest_avoiding(g, u, v, interior, links)
        if protection is None:
            continue
        key = (len(protection), working, protection)
        if best is None or key < best:
            best = key
    if best is None:
        raise PairError(f"no {mode}-disjoint path pair between {u} and {v}")
    return DisjointPair(best[1], best[2], mode)


def _materialize(plan: AllocationPlan, nodes: tuple[str, ...]) -> Walk:
    edges = tuple(plan.fresh_edge(nodes[i], nodes[i + 1]) for i in range(len(nodes) - 1))
    return Walk(nodes, edges)


def route_1plus1(g: Graph, demands: list[Demand], mode: str = "node") -> AllocationPlan:
    """Dedicated protection: every copy gets fresh bandwidth on both paths."""
    plan = AllocationPlan(g, mode=mode)
    cache: dict[frozenset, DisjointPair] = {}
    for d in demands:
        if d.terminals not in cache:
            cache[d.terminals] = disjoint_pair(g, d.u, d.v, mode)
        pair = cache[d.terminals]
        working = _materialize(plan, _orient(pair.working, d.u))
        protection = _materialize(plan, _orient(pair.protection, d.u))
        plan.add_entry(PlanEntry(d, working, protection))
    return plan


def _all_shortest_avoiding(g: Graph, u: str, v: str, banned_nodes: set[str],
                           banned_links: set[tuple[str, str]]) -> list[tuple[str, ...]]:
    def usable(a, b):
        return (a not in banned_nodes and b not in banned_nodes
                and link_key(a, b) not in banned_links)

    dist = {v: 0}
    q = deque([v])
    while q:
        x = q.popleft()
        for w in g.neighbors(x):
            if usable(x, w) and w not in dist:
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
            if usable(cur, w) and dist.get(w, -2) == dist[cur] - 1:
                rec(w, acc + [w])

    rec(u, [u])
    return out


def fixed_pair_routes(g: Graph, mode: str = "node",
                      overlap_cap: int = 3) -> dict[frozenset, DisjointPair]:
    """One disjoint pair per terminal pair, placed to cluster protections.

    Pairs are computed in lexicographic terminal order with the same
    lexicographic length objective as disjoint_pair, but ties prefer
    protection routes over links already chosen for other pairs' protections
    (counting each link up to overlap_cap).  Clustering protections onto
    common corridors is what lets copies of different demands share edges.
    """
    import itertools

    chosen: dict[frozenset, DisjointPair] = {}
    used: dict[tuple[str, str], int] = {}
    for u, v in itertools.combinations(sorted(g.nodes), 2):
        best = None
        for working in _all_shortest_paths(g, u, v):
            interior = set(working[1:-1]) if mode == "node" else set()
            links = {link_key(working[i], working[i + 1]) for i in range(len(working) - 1)}
            for prot in _all_shortest_avoiding(g, u, v, interior, links):
                overlap = sum(min(overlap_cap, used.get(link_key(prot[i], prot[i + 1]), 0))
                              for i in range(len(prot) - 1))
                key = (len(prot), -overlap, working, prot)
                if best is None or key < best:
                    best = key
        if best is None:
            raise PairError(f"no {mode}-disjoint path pair between {u} and {v}")
        _, _, working, prot = best
        chosen[frozenset((u, v))] = DisjointPair(working, prot, mode)
        for i in range(len(prot) - 1):
            lk = link_key(prot[i], prot[i + 1])
            used[lk] = used.get(lk, 0) + 1
    return chosen


def route_shared_path(g: Graph, demands: list[Demand], mode: str = "node",
                      share_mode: str = "link") -> AllocationPlan:
    """Greedy sharing on fixed pair routes, ignoring branch points.

    Every copy of a terminal pair rides that pair's fixed routes.  A
    protection hop reuses the lowest-ordinal existing protection edge whose
    current users' workings are all share_mode-disjoint from this copy's
    working (link-level by default: no shared link means no common failure),
    otherwise a fresh edge is materialized.
    """
    plan = AllocationPlan(g, mode=share_mode, enforce="abc")
    pairs = fixed_pair_routes(g, mode) if demands else {}
    for d in demands:
        pair = pairs[d.terminals]
        working = _materialize(plan, _orient(pair.working, d.u))
        p_nodes = _orient(pair.protection, d.u)
        p_edges = []
        for i in range(len(p_nodes) - 1):
            a, b = p_nodes[i], p_nodes[i + 1]
            chosen = None
            for k in sorted(plan._used_ordinals.get(link_key(a, b), ())):
                e = g.edge(a, b, k)
                if plan.role(e) != "protection":
                    continue
                users = plan.protection_users(e)
                if all(_disjoint_workings(plan, idx, working) for idx in users):
                    chosen = e
                    break
            p_edges.append(chosen if chosen is not None else plan.fresh_edge(a, b))
        plan.add_entry(PlanEntry(d, working, Walk(p_nodes, tuple(p_edges))))
    return plan


def _disjoint_workings(plan: AllocationPlan, idx: int, working: Walk) -> bool:
    from .graph import disjoint

    return disjoint(plan.entries[idx].working, working, plan.mode)


def _orient(nodes: tuple[str, ...], start: str) -> tuple[str, ...]:
    return nodes if nodes[0] == start else nodes[::-1]
