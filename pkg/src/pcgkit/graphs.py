"""Undirected simple graphs with string node names.

Generators follow the naming used throughout the package: rim nodes
``v1..vn``, second rim ``u1..un`` and hub ``c``.  Graphs are immutable.
"""
from __future__ import annotations

import json
from collections import deque
from itertools import combinations
from typing import Iterable, Iterator


class GraphError(ValueError):
    """Raised for malformed graphs or invalid generator parameters."""


class InvalidNodeError(GraphError):
    pass


def pair(a: str, b: str) -> tuple[str, str]:
    """Canonical (lexicographically ordered) unordered node pair."""
    if a == b:
        raise GraphError(f"degenerate pair ({a}, {a})")
    return (a, b) if a < b else (b, a)


class Graph:
    __slots__ = ("nodes", "_adj", "_index")

    def __init__(self, nodes: Iterable[str], edges: Iterable[tuple[str, str]] = ()):
        nodes = tuple(nodes)
        if len(set(nodes)) != len(nodes):
            raise GraphError("duplicate node identifiers")
        for v in nodes:
            if not isinstance(v, str) or not v:
                raise GraphError(f"node identifiers must be non-empty strings, got {v!r}")
        adj: dict[str, set[str]] = {v: set() for v in nodes}
        for e in edges:
            a, b = e
            if a not in adj or b not in adj:
                raise InvalidNodeError(f"edge ({a}, {b}) references an undeclared node")
            if a == b:
                raise GraphError(f"self-loop on {a}")
            if b in adj[a]:
                raise GraphError(f"duplicate edge ({a}, {b})")
            adj[a].add(b)
            adj[b].add(a)
        self.nodes = nodes
        self._adj = {v: frozenset(s) for v, s in adj.items()}
        self._index = {v: i for i, v in enumerate(nodes)}

    # -- basic queries -------------------------------------------------

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __eq__(self, other) -> bool:
        # same node names and same edges; node order is irrelevant
        if not isinstance(other, Graph):
            return NotImplemented
        return set(self.nodes) == set(other.nodes) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((frozenset(self.nodes), frozenset(self.edges())))

    def __repr__(self) -> str:
        return f"Graph({len(self.nodes)} nodes, {self.num_edges()} edges)"

    def index(self, v: str) -> int:
        return self._index[v]

    def neighbors(self, v: str) -> frozenset[str]:
        try:
            return self._adj[v]
        except KeyError:
            raise InvalidNodeError(f"unknown node {v!r}") from None

    def degree(self, v: str) -> int:
        return len(self.neighbors(v))

    def has_edge(self, a: str, b: str) -> bool:
        return b in self._adj.get(a, ())

    def _pairs(self) -> Iterator[tuple[str, str]]:
        for a, b in combinations(self.nodes, 2):
            yield pair(a, b)

    def edges(self) -> list[tuple[str, str]]:
        """Edges as canonical pairs, in node order."""
        return [p for p in self._pairs() if self.has_edge(*p)]

    def non_edges(self) -> list[tuple[str, str]]:
        """Non-edges as canonical pairs, in node order."""
        return [p for p in self._pairs() if not self.has_edge(*p)]

    def num_edges(self) -> int:
        return sum(len(s) for s in self._adj.values()) // 2

    def distances_from(self, source: str) -> dict[str, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for y in self._adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def relabel(self, mapping: dict[str, str]) -> "Graph":
        return Graph((mapping[v] for v in self.nodes),
                     ((mapping[a], mapping[b]) for a, b in self.edges()))

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {"nodes": list(self.nodes), "edges": [list(e) for e in self.edges()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data) -> "Graph":
        if not isinstance(data, dict):
            raise GraphError("graph JSON must be an object")
        unknown = set(data) - {"nodes", "edges"}
        if unknown:
            raise GraphError(f"unknown keys in graph JSON: {sorted(unknown)}")
        if "nodes" not in data or "edges" not in data:
            raise GraphError("graph JSON requires 'nodes' and 'edges'")
        nodes, edges = data["nodes"], data["edges"]
        if not isinstance(nodes, list) or not all(isinstance(v, str) for v in nodes):
            raise GraphError("'nodes' must be an array of strings")
        if not isinstance(edges, list):
            raise GraphError("'edges' must be an array")
        for e in edges:
            if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, str) for v in e)):
                raise GraphError(f"malformed edge {e!r}")
        seen = set()
        for a, b in edges:
            if a != b and pair(a, b) in seen:
                raise GraphError(f"duplicate edge ({a}, {b})")
            if a != b:
                seen.add(pair(a, b))
        return cls(nodes, [tuple(e) for e in edges])

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)


# -- generators ----------------------------------------------------------

def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 3:
        raise GraphError(f"n must be an integer >= 3, got {n!r}")


def build_cycle(n: int) -> Graph:
    _check_n(n)
    rim = [f"v{i}" for i in range(1, n + 1)]
    return Graph(rim, [(rim[i], rim[(i + 1) % n]) for i in range(n)])


def build_path(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"n must be >= 1, got {n}")
    nodes = [f"v{i}" for i in range(1, n + 1)]
    return Graph(nodes, [(nodes[i], nodes[i + 1]) for i in range(n - 1)])


def build_wheel(n: int) -> Graph:
    """W_{n+1}: the cycle v1..vn plus a hub ``c`` adjacent to every rim node."""
    _check_n(n)
    rim = [f"v{i}" for i in range(1, n + 1)]
    edges = [(rim[i], rim[(i + 1) % n]) for i in range(n)]
    edges += [("c", v) for v in rim]
    return Graph(["c"] + rim, edges)


def build_cycle_strong_p2(n: int) -> Graph:
    """Strong product of C_n with P_2: rims u1..un, v1..vn, rungs and both diagonals."""
    _check_n(n)
    u = [f"u{i}" for i in range(1, n + 1)]
    v = [f"v{i}" for i in range(1, n + 1)]
    edges = []
    for i in range(n):
        j = (i + 1) % n
        edges += [(u[i], v[i]), (u[i], u[j]), (v[i], v[j]), (u[i], v[j]), (v[i], u[j])]
    return Graph(u + v, edges)


def build_fan(n: int) -> Graph:
    """Path v1..vn plus hub ``c`` adjacent to all of it."""
    path = build_path(n)
    return Graph(("c",) + path.nodes, path.edges() + [("c", v) for v in path.nodes])


def complete_graph(nodes: Iterable[str]) -> Graph:
    nodes = list(nodes)
    return Graph(nodes, combinations(nodes, 2))


# -- induced structure ---------------------------------------------------

def induced_subgraph(G: Graph, S: Iterable[str]) -> Graph:
    S = set(S)
    if not S:
        raise GraphError("induced subgraph needs at least one node")
    missing = S - set(G.nodes)
    if missing:
        raise InvalidNodeError(f"unknown nodes {sorted(missing)}")
    keep = [v for v in G.nodes if v in S]
    return Graph(keep, [e for e in G.edges() if e[0] in S and e[1] in S])


def remove_node(G: Graph, x: str) -> Graph:
    if x not in G:
        raise InvalidNodeError(f"unknown node {x!r}")
    return induced_subgraph(G, [v for v in G.nodes if v != x])


def two_non_edges(G: Graph) -> list[tuple[str, str]]:
    """Non-edges whose endpoints are at distance exactly 2."""
    out = []
    for a, b in G.non_edges():
        if G.neighbors(a) & G.neighbors(b):
            out.append((a, b))
    return out


def induced_occurrences(G: Graph, H: Graph) -> list[dict[str, str]]:
    """All injective maps H -> G preserving adjacency and non-adjacency.

    Maps are produced in lexicographic order of the image tuple (G's node
    order), with H's nodes assigned in H's node order.  Automorphic copies are
    all reported.
    """
    hn = H.nodes
    k = len(hn)
    if k > len(G.nodes):
        return []
    # adjacency requirements of hn[i] towards hn[:i]
    req = [[H.has_edge(hn[i], hn[j]) for j in range(i)] for i in range(k)]
    hdeg = [H.degree(v) for v in hn]
    out: list[dict[str, str]] = []
    image: list[str] = []
    used: set[str] = set()

    def extend(i: int) -> None:
        if i == k:
            out.append(dict(zip(hn, image)))
            return
        for x in G.nodes:
            if x in used or G.degree(x) < hdeg[i]:
                continue
            if all(G.has_edge(x, image[j]) == req[i][j] for j in range(i)):
                image.append(x)
                used.add(x)
                extend(i + 1)
                used.discard(x)
                image.pop()

    extend(0)
    return out


# -- isomorphism -----------------------------------------------------------

def _refined_labels(G: Graph) -> dict[str, tuple]:
    """Degree plus sorted neighbour degrees: an isomorphism invariant per node."""
    return {v: (G.degree(v), tuple(sorted(G.degree(w) for w in G.neighbors(v))))
            for v in G.nodes}


def find_isomorphism(G: Graph, H: Graph) -> dict[str, str] | None:
    if len(G.nodes) != len(H.nodes) or G.num_edges() != H.num_edges():
        return None
    lg, lh = _refined_labels(G), _refined_labels(H)
    if sorted(lg.values()) != sorted(lh.values()):
        return None
    # most constrained (rarest label) nodes first
    counts: dict[tuple, int] = {}
    for lab in lg.values():
        counts[lab] = counts.get(lab, 0) + 1
    order = sorted(G.nodes, key=lambda v: (counts[lg[v]], -G.degree(v), G.index(v)))
    candidates = {v: [w for w in H.nodes if lh[w] == lg[v]] for v in G.nodes}
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in candidates[v]:
            if w in used:
                continue
            if all(G.has_edge(v, x) == H.has_edge(w, mapping[x]) for x in order[:i]):
                mapping[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                used.discard(w)
                del mapping[v]
        return False

    return dict(mapping) if extend(0) else None


def are_isomorphic(G: Graph, H: Graph) -> bool:
    return find_isomorphism(G, H) is not None


def automorphisms(G: Graph) -> list[dict[str, str]]:
    return induced_occurrences(G, G)
