"""Allocation plans: working/protection path pairs under the four sharing rules.

The rules, checked per plan and referred to by letter throughout:
  a. each demand's working and protection paths are node-disjoint
     (link-disjoint when the plan's mode is "link");
  b. an edge in any working path appears in no other path;
  c. demands whose working paths are not disjoint have edge-disjoint
     protection paths;
  d. no branch points: an edge is cross-connected to at most one partner
     at each of its endnodes.

Rule d is what makes the protection edges decompose into pre-cross-connected
trails (PXTs): chains of protection edges statically joined at shared nodes,
so intermediate nodes never switch in real time.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import (
    EdgeId,
    Graph,
    GraphError,
    Walk,
    disjoint,
    is_path,
    link_key,
    validate_walk,
)

ALL_CONDITIONS = frozenset("abcd")


@dataclass(frozen=True, order=True)
class Demand:
    """One unit-capacity request between two distinct terminals."""

    id: int
    u: str
    v: str

    def __post_init__(self):
        if self.u == self.v:
            raise GraphError(f"demand {self.id} terminals must be distinct")
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    @property
    def terminals(self) -> frozenset[str]:
        return frozenset((self.u, self.v))


@dataclass(frozen=True)
class PlanEntry:
    demand: Demand
    working: Walk
    protection: Walk

    def serialize(self) -> str:
        d = self.demand
        return (f"entry {d.id} {d.u} {d.v} | working {self.working} "
                f"| protection {self.protection}")


@dataclass(frozen=True)
class PlanViolation:
    condition: str           # 'a'..'d', or 'structure'
    demands: tuple[int, ...]
    witness: str

    def __str__(self) -> str:
        who = ",".join(str(d) for d in self.demands)
        return f"condition {self.condition} (demands {who}): {self.witness}"


class PlanError(ValueError):
    def __init__(self, violations: list[PlanViolation] | str):
        if isinstance(violations, str):
            violations = [PlanViolation("structure", (), violations)]
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


@dataclass(frozen=True)
class PXT:
    """A maximal trail of cross-connected protection edges."""

    walk: Walk
    closed: bool

    def serialize(self) -> str:
        return f"pxt {'closed' if self.closed else 'open'} {self.walk}"


class _Trail:
    """Mutable trail under incremental extension/merging."""

    __slots__ = ("nodes", "edges", "closed")

    def __init__(self, nodes: list[str], edges: list[EdgeId]):
        self.nodes = nodes
        self.edges = edges
        self.closed = False

    def end_slots(self) -> tuple[tuple[EdgeId, str], tuple[EdgeId, str]]:
        return ((self.edges[0], self.nodes[0]), (self.edges[-1], self.nodes[-1]))

    def reverse(self) -> None:
        self.nodes.reverse()
        self.edges.reverse()


def _canonical_open(nodes: list[str], edges: list[EdgeId]) -> Walk:
    fwd = tuple(nodes), tuple(edges)
    rev = tuple(reversed(nodes)), tuple(reversed(edges))
    return Walk(*min(fwd, rev))


def _canonical_closed(nodes: list[str], edges: list[EdgeId]) -> Walk:
    # nodes[0] == nodes[-1]; pick the smallest among all rotations of both
    # directions so equality of PXT sets is textual
    k = len(edges)
    best = None
    for wn, we in ((nodes, edges), (nodes[::-1], edges[::-1])):
        for s in range(k):
            cand_nodes = tuple(wn[s:-1] + wn[:s + 1])
            cand_edges = tuple(we[s:] + we[:s])
            key = (cand_nodes, cand_edges)
            if best is None or key < best:
                best = key
    return Walk(*best)


def _canonical_pxt(nodes: list[str], edges: list[EdgeId], closed: bool) -> PXT:
    if closed:
        return PXT(_canonical_closed(nodes, edges), True)
    return PXT(_canonical_open(nodes, edges), False)


def _pxt_sort_key(p: PXT):
    return (str(min(p.walk.edges)), p.walk.nodes, p.walk.edges)


class AllocationPlan:
    """Single-owner mutable plan; grows by add_entry, never rewrites history."""

    def __init__(self, graph: Graph, mode: str = "node",
                 enforce: frozenset[str] | str = ALL_CONDITIONS):
        if mode not in ("node", "link"):
            raise ValueError(f"unknown disjointness mode {mode!r}")
        self.graph = graph
        self.mode = mode
        self.enforce = frozenset(enforce)
        if not self.enforce <= ALL_CONDITIONS:
            raise ValueError(f"unknown conditions {set(self.enforce) - set(ALL_CONDITIONS)}")
        self.entries: list[PlanEntry] = []
        self._roles: dict[EdgeId, str] = {}
        self._used_ordinals: dict[tuple[str, str], set[int]] = {}
        self._protection_users: dict[EdgeId, list[int]] = {}
        # cross-connect pairing and incremental trail state (only when rule d
        # is enforced; without it the pairing is not well defined)
        self._partner: dict[tuple[EdgeId, str], EdgeId] = {}
        self._trails: dict[int, _Trail] = {}
        self._trail_ends: dict[tuple[EdgeId, str], int] = {}
        self._next_trail_id = 0

    # -- edge pool ---------------------------------------------------------

    def used_on_link(self, u: str, v: str) -> int:
        return len(self._used_ordinals.get(link_key(u, v), ()))

    def has_free_edge(self, u: str, v: str) -> bool:
        cap = self.graph.capacity(u, v)
        return cap is None or self.used_on_link(u, v) < cap

    def fresh_edge(self, u: str, v: str) -> EdgeId:
        """Smallest unused ordinal on the link; raises when capacity is full."""
        if not self.has_free_edge(u, v):
            raise PlanError(f"link {u}-{v} capacity exhausted")
        used = self._used_ordinals.get(link_key(u, v), set())
        k = 0
        while k in used:
            k += 1
        return self.graph.edge(u, v, k)

    def role(self, edge: EdgeId) -> str | None:
        return self._roles.get(edge)

    def protection_users(self, edge: EdgeId) -> tuple[int, ...]:
        return tuple(self._protection_users.get(edge, ()))

    def crossconnect_partner(self, edge: EdgeId, node: str) -> EdgeId | None:
        return self._partner.get((edge, node))

    @property
    def crossconnects(self) -> dict[tuple[EdgeId, str], EdgeId]:
        return dict(self._partner)

    # -- construction ------------------------------------------------------

    def _structural_check(self, entry: PlanEntry) -> None:
        d = entry.demand
        problems = []
        for label, walk in (("working", entry.working), ("protection", entry.protection)):
            try:
                validate_walk(self.graph, walk)
            except GraphError as exc:
                problems.append(f"{label} path invalid: {exc}")
                continue
            if not is_path(walk):
                problems.append(f"{label} route is not a path")
            if set(walk.ends) != {d.u, d.v}:
                problems.append(f"{label} path does not connect {d.u} and {d.v}")
        if problems:
            raise PlanError([PlanViolation("structure", (d.id,), p) for p in problems])

    def _entry_violations(self, entry: PlanEntry) -> list[PlanViolation]:
        """Violations that adding `entry` would introduce, per enforced rule."""
        d = entry.demand
        out = []
        if "a" in self.enforce and not disjoint(entry.working, entry.protection, self.mode):
            out.append(PlanViolation("a", (d.id,),
                                     f"working and protection are not {self.mode}-disjoint"))
        if "b" in self.enforce:
            for e in entry.working.edges:
                role = self._roles.get(e)
                if role is not None:
                    out.append(PlanViolation("b", (d.id,), f"working edge {e} already {role}"))
            for e in entry.protection.edges:
                if self._roles.get(e) == "working":
                    out.append(PlanViolation("b", (d.id,), f"protection reuses working edge {e}"))
        if "c" in self.enforce:
            flagged = set()
            for e in entry.protection.edges:
                for idx in self._protection_users.get(e, ()):
                    other = self.entries[idx]
                    key = other.demand.id
                    if key in flagged:
                        continue
                    if not disjoint(entry.working, other.working, self.mode):
                        flagged.add(key)
                        out.append(PlanViolation(
                            "c", (d.id, other.demand.id),
                            f"shared protection edge {e} but conflicting workings"))
        if "d" in self.enforce:
            for i in range(len(entry.protection.edges) - 1):
                e, f = entry.protection.edges[i], entry.protection.edges[i + 1]
                x = entry.protection.nodes[i + 1]
                for a, b in ((e, f), (f, e)):
                    cur = self._partner.get((a, x))
                    if cur is not None and cur != b:
                        out.append(PlanViolation(
                            "d", (d.id,),
                            f"branch point at {x}: {a} already cross-connected to {cur}, "
                            f"needs {b}"))
        return out

    def add_entry(self, entry: PlanEntry) -> None:
        """Append one routed demand; raises PlanError rather than mutate on failure."""
        self._structural_check(entry)
        violations = self._entry_violations(entry)
        if violations:
            raise PlanError(violations)
        for e in set(entry.working.edges) | set(entry.protection.edges):
            if e not in self._roles:
                cap = self.graph.capacity(e.u, e.v)
                used = self._used_ordinals.get(e.link, set())
                if cap is not None and len(used) >= cap:
                    raise PlanError(f"link {e.u}-{e.v} capacity exhausted")
        idx = len(self.entries)
        for e in entry.working.edges:
            self._set_role(e, "working")
        new_protection = [e for e in entry.protection.edges if e not in self._roles]
        for e in entry.protection.edges:
            if e not in self._roles:
                self._set_role(e, "protection")
            self._protection_users.setdefault(e, []).append(idx)
        if "d" in self.enforce:
            for e in new_protection:
                self._new_singleton_trail(e)
            for i in range(len(entry.protection.edges) - 1):
                e, f = entry.protection.edges[i], entry.protection.edges[i + 1]
                x = entry.protection.nodes[i + 1]
                if self._partner.get((e, x)) != f:
                    self._connect(e, f, x)
        self.entries.append(entry)

    def _set_role(self, e: EdgeId, role: str) -> None:
        self._roles[e] = role
        self._used_ordinals.setdefault(e.link, set()).add(e.index)

    # -- incremental PXT maintenance ----------------------------------------

    def _new_singleton_trail(self, e: EdgeId) -> None:
        tid = self._next_trail_id
        self._next_trail_id += 1
        t = _Trail([e.u, e.v], [e])
        self._trails[tid] = t
        self._trail_ends[(e, e.u)] = tid
        self._trail_ends[(e, e.v)] = tid

    def _connect(self, e: EdgeId, f: EdgeId, x: str) -> None:
        t1 = self._trail_ends.pop((e, x))
        t2 = self._trail_ends.pop((f, x))
        self._partner[(e, x)] = f
        self._partner[(f, x)] = e
        if t1 == t2:
            self._trails[t1].closed = True
            return
        a, b = self._trails[t1], self._trails[t2]
        if a.end_slots()[1] != (e, x):
            a.reverse()
        if b.end_slots()[0] != (f, x):
            b.reverse()
        a.nodes.extend(b.nodes[1:])
        a.edges.extend(b.edges)
        del self._trails[t2]
        for slot in list(self._trail_ends):
            if self._trail_ends[slot] == t2:
                self._trail_ends[slot] = t1

    @property
    def pxts(self) -> list[PXT]:
        """PXTs from the incrementally maintained trails, canonically ordered."""
        out = [_canonical_pxt(t.nodes, t.edges, t.closed) for t in self._trails.values()]
        out.sort(key=_pxt_sort_key)
        return out

    # -- derived views -------------------------------------------------------

    def bandwidth(self) -> tuple[int, int, int]:
        working = sum(1 for r in self._roles.values() if r == "working")
        protection = sum(1 for r in self._roles.values() if r == "protection")
        return working, protection, working + protection

    def _pairing_from_paths(self) -> dict[tuple[EdgeId, str], set[EdgeId]]:
        pairs: dict[tuple[EdgeId, str], set[EdgeId]] = {}
        for entry in self.entries:
            p = entry.protection
            for i in range(len(p.edges) - 1):
                e, f = p.edges[i], p.edges[i + 1]
                x = p.nodes[i + 1]
                pairs.setdefault((e, x), set()).add(f)
                pairs.setdefault((f, x), set()).add(e)
        return pairs

    def branch_points(self) -> set[str]:
        """Nodes where some edge would need two different cross-connect partners."""
        return {slot[1] for slot, partners in self._pairing_from_paths().items()
                if len(partners) > 1}

    def validate(self) -> list[PlanViolation]:
        """Full re-check of rules a-d from the entries alone."""
        out: list[PlanViolation] = []
        for entry in self.entries:
            try:
                self._structural_check(entry)
            except PlanError as exc:
                out.extend(exc.violations)
            if not disjoint(entry.working, entry.protection, self.mode):
                out.append(PlanViolation(
                    "a", (entry.demand.id,),
                    f"working and protection are not {self.mode}-disjoint"))
        usage: dict[EdgeId, list[tuple[int, str]]] = {}
        for entry in self.entries:
            for e in entry.working.edges:
                usage.setdefault(e, []).append((entry.demand.id, "working"))
            for e in entry.protection.edges:
                usage.setdefault(e, []).append((entry.demand.id, "protection"))
        for e, users in sorted(usage.items(), key=lambda kv: str(kv[0])):
            w_users = {d for d, kind in users if kind == "working"}
            others = {d for d, _ in users} - w_users
            if w_users and (others or len(w_users) > 1):
                ids = tuple(sorted({d for d, _ in users}))
                out.append(PlanViolation("b", ids, f"working edge {e} shared"))
        shared_flagged: set[tuple[int, int]] = set()
        users_by_edge: dict[EdgeId, list[int]] = {}
        for i, entry in enumerate(self.entries):
            for e in set(entry.protection.edges):
                users_by_edge.setdefault(e, []).append(i)
        for e, idxs in users_by_edge.items():
            for ai in range(len(idxs)):
                for bi in range(ai + 1, len(idxs)):
                    e1, e2 = self.entries[idxs[ai]], self.entries[idxs[bi]]
                    pair = (e1.demand.id, e2.demand.id)
                    if pair in shared_flagged:
                        continue
                    if not disjoint(e1.working, e2.working, self.mode):
                        shared_flagged.add(pair)
                        out.append(PlanViolation(
                            "c", pair, f"shared protection edge {e} but conflicting workings"))
        for (e, x), partners in sorted(self._pairing_from_paths().items(),
                                       key=lambda kv: (str(kv[0][0]), kv[0][1])):
            if len(partners) > 1:
                names = ", ".join(sorted(str(p) for p in partners))
                out.append(PlanViolation(
                    "d", self._demands_pairing(e, x),
                    f"branch point at {x}: {e} cross-connected to {names}"))
        return out

    def _demands_pairing(self, e: EdgeId, x: str) -> tuple[int, ...]:
        ids = []
        for entry in self.entries:
            p = entry.protection
            for i in range(len(p.edges) - 1):
                if p.nodes[i + 1] == x and e in (p.edges[i], p.edges[i + 1]):
                    ids.append(entry.demand.id)
                    break
        return tuple(sorted(set(ids)))

    def extract_pxts(self) -> list[PXT]:
        """Recompute the PXT decomposition from scratch (cross-check path)."""
        violations = [v for v in self.validate() if v.condition == "d"]
        if violations:
            raise PlanError(violations)
        partner: dict[tuple[EdgeId, str], EdgeId] = {}
        for (e, x), partners in self._pairing_from_paths().items():
            partner[(e, x)] = next(iter(partners))
        edges = sorted({e for en in self.entries for e in en.protection.edges}, key=str)
        seen: set[EdgeId] = set()
        out = []
        for start in edges:
            if start in seen:
                continue
            nodes, trail, closed = self._walk_trail(start, partner)
            seen.update(trail)
            out.append(_canonical_pxt(nodes, trail, closed))
        out.sort(key=_pxt_sort_key)
        return out

    @staticmethod
    def _walk_trail(start: EdgeId, partner: dict[tuple[EdgeId, str], EdgeId]):
        # extend forward from start.v, then backward from start.u
        fwd_edges, fwd_nodes = [], []
        cur, node = start, start.v
        closed = False
        while True:
            nxt = partner.get((cur, node))
            if nxt is None:
                break
            if nxt == start:
                # wrapped around: the pairing closes the trail
                closed = True
                break
            fwd_edges.append(nxt)
            node = nxt.other(node)
            fwd_nodes.append(node)
            cur = nxt
        if closed:
            edges = [start] + fwd_edges
            nodes = [start.u, start.v] + fwd_nodes
            return nodes, edges, True
        bwd_edges, bwd_nodes = [], []
        cur, node = start, start.u
        while True:
            nxt = partner.get((cur, node))
            if nxt is None:
                break
            bwd_edges.append(nxt)
            node = nxt.other(node)
            bwd_nodes.append(node)
            cur = nxt
        edges = bwd_edges[::-1] + [start] + fwd_edges
        nodes = bwd_nodes[::-1] + [start.u, start.v] + fwd_nodes
        return nodes, edges, False

    # -- serialization -------------------------------------------------------

    def serialize(self) -> str:
        lines = ["pxtmesh-plan 1", f"mode {self.mode}",
                 f"enforce {''.join(sorted(self.enforce))}"]
        for entry in self.entries:
            lines.append(entry.serialize())
        if "d" in self.enforce:
            for p in self.pxts:
                lines.append(p.serialize())
            xcs = set()
            for (e, x), f in self._partner.items():
                xcs.add((x,) + tuple(sorted((str(e), str(f)))))
            for x, e, f in sorted(xcs):
                lines.append(f"xc {x} {e} {f}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, graph: Graph, text: str) -> "AllocationPlan":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("pxtmesh-plan"):
            raise PlanError("missing plan header")
        mode = "node"
        enforce: frozenset[str] = ALL_CONDITIONS
        plan: AllocationPlan | None = None
        pxt_lines, xc_lines = [], []
        for raw in lines[1:]:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            kind, rest = line.split(None, 1)
            if kind == "mode":
                mode = rest.strip()
            elif kind == "enforce":
                enforce = frozenset(rest.strip())
            elif kind == "entry":
                if plan is None:
                    plan = cls(graph, mode=mode, enforce=enforce)
                head, working, protection = (part.strip() for part in line.split("|"))
                _, did, u, v = head.split()
                w = Walk.parse(working.removeprefix("working").strip())
                p = Walk.parse(protection.removeprefix("protection").strip())
                plan.add_entry(PlanEntry(Demand(int(did), u, v), w, p))
            elif kind == "pxt":
                pxt_lines.append(line)
            elif kind == "xc":
                xc_lines.append(line)
            else:
                raise PlanError(f"unknown plan directive {kind!r}")
        if plan is None:
            plan = cls(graph, mode=mode, enforce=enforce)
        if "d" in plan.enforce:
            expect = [p.serialize() for p in plan.pxts]
            if pxt_lines and pxt_lines != expect:
                raise PlanError("pxt lines do not match the entries' cross-connects")
            expect_xc = [l for l in plan.serialize().splitlines() if l.startswith("xc ")]
            if xc_lines and xc_lines != expect_xc:
                raise PlanError("xc lines do not match the entries' cross-connects")
        return plan
