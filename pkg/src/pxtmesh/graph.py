"""Undirected multigraph model: links with capacity pools, walks, disjointness.

An edge is one unit of switchable bandwidth; a link is the set of all parallel
edges between two adjacent nodes.  Edges are implicit: a link of capacity c
owns edge ordinals 0..c-1 (every ordinal for unbounded links), and an EdgeId
names one of them.  Which ordinals are in use is tracked by allocation plans,
so Graph itself stays immutable and safe to share.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable

UNBOUNDED = None

# reserved by the edge/plan serialization formats
_FORBIDDEN_ID_CHARS = set("~#|")


class GraphError(ValueError):
    """Malformed graph construction or query."""


class GraphParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def link_key(u: str, v: str) -> tuple[str, str]:
    """Canonical unordered link key (lexicographic)."""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True, order=True)
class EdgeId:
    """One unit of capacity on the link u-v; index is the ordinal in the pool."""

    u: str
    v: str
    index: int

    def __post_init__(self):
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)
        if self.u == self.v:
            raise GraphError(f"self-loop edge {self.u}")
        if self.index < 0:
            raise GraphError(f"negative edge ordinal {self.index}")

    @property
    def link(self) -> tuple[str, str]:
        return (self.u, self.v)

    def other(self, node: str) -> str:
        if node == self.u:
            return self.v
        if node == self.v:
            return self.u
        raise GraphError(f"{node} is not an endpoint of {self}")

    def __str__(self) -> str:
        return f"{self.u}~{self.v}#{self.index}"

    @classmethod
    def parse(cls, token: str) -> "EdgeId":
        try:
            pair, index = token.rsplit("#", 1)
            u, v = pair.split("~")
            return cls(u, v, int(index))
        except (ValueError, GraphError) as exc:
            raise GraphError(f"bad edge token {token!r}") from exc


def _check_node_id(name: str) -> str:
    if not name or any(ch.isspace() or ch in _FORBIDDEN_ID_CHARS for ch in name):
        raise GraphError(f"invalid node id {name!r}")
    return name


class Graph:
    """Immutable set of nodes plus capacitated links between them."""

    def __init__(self, nodes: Iterable[str], links: Iterable[tuple[str, str, int | None]]):
        self._nodes = frozenset(_check_node_id(n) for n in nodes)
        self._caps: dict[tuple[str, str], int | None] = {}
        adj: dict[str, set[str]] = {n: set() for n in self._nodes}
        for u, v, cap in links:
            if u not in self._nodes or v not in self._nodes:
                raise GraphError(f"link {u}-{v} references unknown node")
            if u == v:
                raise GraphError(f"self-loop link at {u}")
            key = link_key(u, v)
            if key in self._caps:
                raise GraphError(f"duplicate link {key[0]}-{key[1]}")
            if cap is not UNBOUNDED and cap <= 0:
                raise GraphError(f"link {u}-{v} capacity must be positive")
            self._caps[key] = cap
            adj[u].add(v)
            adj[v].add(u)
        self._adj = {n: tuple(sorted(neigh)) for n, neigh in adj.items()}

    @property
    def nodes(self) -> frozenset[str]:
        return self._nodes

    def sorted_nodes(self) -> list[str]:
        return sorted(self._nodes)

    def links(self) -> list[tuple[str, str]]:
        return sorted(self._caps)

    def num_links(self) -> int:
        return len(self._caps)

    def has_link(self, u: str, v: str) -> bool:
        return link_key(u, v) in self._caps

    def capacity(self, u: str, v: str) -> int | None:
        key = link_key(u, v)
        if key not in self._caps:
            raise GraphError(f"no link {key[0]}-{key[1]}")
        return self._caps[key]

    def neighbors(self, node: str) -> tuple[str, ...]:
        if node not in self._adj:
            raise GraphError(f"unknown node {node}")
        return self._adj[node]

    def degree(self, node: str) -> int:
        return len(self.neighbors(node))

    def edge(self, u: str, v: str, index: int = 0) -> EdgeId:
        """Materialize an EdgeId, validating the link and capacity bound."""
        cap = self.capacity(u, v)
        if cap is not UNBOUNDED and index >= cap:
            raise GraphError(f"edge ordinal {index} exceeds capacity {cap} on {u}-{v}")
        return EdgeId(u, v, index)


@dataclass(frozen=True)
class Walk:
    """Alternating node/edge sequence; len(nodes) == len(edges) + 1."""

    nodes: tuple[str, ...]
    edges: tuple[EdgeId, ...]

    def __post_init__(self):
        if len(self.nodes) != len(self.edges) + 1 or not self.nodes:
            raise GraphError("walk must alternate nodes and edges")
        for i, e in enumerate(self.edges):
            if {self.nodes[i], self.nodes[i + 1]} != {e.u, e.v}:
                raise GraphError(f"edge {e} does not join {self.nodes[i]} and {self.nodes[i + 1]}")

    @classmethod
    def from_sequence(cls, seq: Iterable) -> "Walk":
        """Build from an alternating [node, edge, node, ...] sequence."""
        items = list(seq)
        return cls(tuple(items[0::2]), tuple(items[1::2]))

    @classmethod
    def single(cls, node: str) -> "Walk":
        return cls((node,), ())

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def closed(self) -> bool:
        return self.nodes[0] == self.nodes[-1]

    @property
    def ends(self) -> tuple[str, str]:
        return (self.nodes[0], self.nodes[-1])

    def interior(self) -> set[str]:
        return set(self.nodes[1:-1])

    def node_set(self) -> set[str]:
        return set(self.nodes)

    def edge_set(self) -> set[EdgeId]:
        return set(self.edges)

    def link_set(self) -> set[tuple[str, str]]:
        return {e.link for e in self.edges}

    def reversed(self) -> "Walk":
        return Walk(self.nodes[::-1], self.edges[::-1])

    def __str__(self) -> str:
        parts = [self.nodes[0]]
        for i, e in enumerate(self.edges):
            parts.append(str(e))
            parts.append(self.nodes[i + 1])
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "Walk":
        tokens = text.split()
        if not tokens:
            raise GraphError("empty walk")
        nodes = tokens[0::2]
        edges = [EdgeId.parse(t) for t in tokens[1::2]]
        return cls(tuple(nodes), tuple(edges))


def classify(walk: Walk) -> str:
    """Most specific kind: path > (closed-)trail > (closed-)walk.

    A single node is a length-0 path; longer closed sequences are never paths.
    """
    if len(set(walk.nodes)) == len(walk.nodes):
        return "path"
    if walk.length == 0:
        return "path"
    edges_distinct = len(set(walk.edges)) == len(walk.edges)
    if walk.closed:
        return "closed-trail" if edges_distinct else "closed-walk"
    return "trail" if edges_distinct else "walk"


def is_path(walk: Walk) -> bool:
    return classify(walk) == "path"


def disjoint(w1: Walk, w2: Walk, mode: str = "node") -> bool:
    """Disjointness of two walks.

    edge: no shared edge; link: no shared link; node: link-disjoint and no
    node of either walk lies in the interior of the other.
    """
    if mode == "edge":
        return not (w1.edge_set() & w2.edge_set())
    if mode == "link":
        return not (w1.link_set() & w2.link_set())
    if mode == "node":
        if w1.link_set() & w2.link_set():
            return False
        if w1.interior() & w2.node_set():
            return False
        if w2.interior() & w1.node_set():
            return False
        return True
    raise ValueError(f"unknown disjointness mode {mode!r}")


def validate_walk(graph: Graph, walk: Walk) -> None:
    """Check every node exists and every edge is within its link's capacity."""
    for n in walk.nodes:
        if n not in graph.nodes:
            raise GraphError(f"unknown node {n}")
    for e in walk.edges:
        graph.edge(e.u, e.v, e.index)


def bfs_distances(graph: Graph, source: str,
                  usable: Callable[[str, str], bool] | None = None) -> dict[str, int]:
    """Hop distance from source over links accepted by `usable`."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for w in graph.neighbors(x):
            if usable is not None and not usable(x, w):
                continue
            if w not in dist:
                dist[w] = dist[x] + 1
                queue.append(w)
    return dist


def shortest_path(graph: Graph, u: str, v: str,
                  usable: Callable[[str, str], bool] | None = None) -> tuple[str, ...] | None:
    """Minimum-hop node sequence from u to v, or None if disconnected.

    Deterministic: among all shortest paths, returns the lexicographically
    smallest node sequence.
    """
    if u not in graph.nodes or v not in graph.nodes:
        raise GraphError(f"unknown terminal {u if u not in graph.nodes else v}")
    dist = bfs_distances(graph, v, usable)
    if u not in dist:
        return None
    path = [u]
    cur = u
    while cur != v:
        # neighbors() is sorted, so the first admissible step is the smallest
        for w in graph.neighbors(cur):
            if usable is not None and not usable(cur, w):
                continue
            if dist.get(w, -2) == dist[cur] - 1:
                path.append(w)
                cur = w
                break
        else:
            raise GraphError("BFS invariant broken")  # pragma: no cover
    return tuple(path)


def distance_sum(graph: Graph) -> int:
    """Sum of shortest-path hop distances over unordered node pairs."""
    total = 0
    nodes = graph.sorted_nodes()
    for i, u in enumerate(nodes):
        dist = bfs_distances(graph, u)
        if len(dist) != len(nodes):
            raise GraphError("graph is disconnected")
        total += sum(dist[v] for v in nodes[i + 1:])
    return total


def load_graph(text: str) -> Graph:
    """Parse the line-oriented graph format.

    Lines: `# comment`, `node <id>`, `link <u> <v> [<capacity>|unbounded]`.
    Order-insensitive apart from nodes needing to exist before use; duplicate
    node or link declarations are errors.
    """
    nodes: list[str] = []
    seen: set[str] = set()
    links: list[tuple[str, str, int | None]] = []
    pending: list[tuple[int, str, str, int | None]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0]
        if kind == "node":
            if len(fields) != 2:
                raise GraphParseError(lineno, "expected: node <id>")
            name = fields[1]
            if name in seen:
                raise GraphParseError(lineno, f"duplicate node {name}")
            try:
                _check_node_id(name)
            except GraphError as exc:
                raise GraphParseError(lineno, str(exc)) from exc
            seen.add(name)
            nodes.append(name)
        elif kind == "link":
            if len(fields) not in (3, 4):
                raise GraphParseError(lineno, "expected: link <u> <v> [capacity]")
            u, v = fields[1], fields[2]
            cap: int | None = UNBOUNDED
            if len(fields) == 4 and fields[3] != "unbounded":
                try:
                    cap = int(fields[3])
                except ValueError:
                    raise GraphParseError(lineno, f"bad capacity {fields[3]!r}") from None
                if cap <= 0:
                    raise GraphParseError(lineno, "capacity must be positive")
            pending.append((lineno, u, v, cap))
        else:
            raise GraphParseError(lineno, f"unknown directive {kind!r}")
    keys: set[tuple[str, str]] = set()
    for lineno, u, v, cap in pending:
        for x in (u, v):
            if x not in seen:
                raise GraphParseError(lineno, f"unknown node {x} in link")
        if u == v:
            raise GraphParseError(lineno, f"self-loop link at {u}")
        key = link_key(u, v)
        if key in keys:
            raise GraphParseError(lineno, f"duplicate link {u}-{v}")
        keys.add(key)
        links.append((u, v, cap))
    return Graph(nodes, links)


def dump_graph(graph: Graph) -> str:
    """Inverse of load_graph, in canonical sorted order."""
    lines = [f"node {n}" for n in graph.sorted_nodes()]
    for u, v in graph.links():
        cap = graph.capacity(u, v)
        lines.append(f"link {u} {v}" + ("" if cap is UNBOUNDED else f" {cap}"))
    return "\n".join(lines) + "\n"
