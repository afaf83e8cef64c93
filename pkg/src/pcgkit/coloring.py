"""Tri-colorings, the forbidden-coloring catalog and clause generation.

A clause is a disjunction of ``(non-edge, color)`` literals.  A pattern
occurrence yields the clause "some constrained pair of this occurrence has
the other color", i.e. the occurrence is not colored exactly as the
forbidden pattern prescribes.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .graphs import Graph, GraphError, induced_occurrences, pair


class Color(str, enum.Enum):
    RED = "red"
    BLUE = "blue"
    BLACK = "black"

    @property
    def opposite(self) -> "Color":
        if self is Color.RED:
            return Color.BLUE
        if self is Color.BLUE:
            return Color.RED
        raise ValueError("black has no opposite")

    def __str__(self) -> str:
        return self.value


RED, BLUE, BLACK = Color.RED, Color.BLUE, Color.BLACK

Pair = tuple[str, str]
Literal = tuple[Pair, Color]


class ColoringError(ValueError):
    pass


class IncompleteColoringError(ColoringError):
    pass


class InvalidCycleError(ColoringError):
    pass


class InvalidPathError(ColoringError):
    pass


class TriColoring:
    """Red/blue labels on (some of) the non-edges of ``host``; edges are black."""

    __slots__ = ("host", "assignment")

    def __init__(self, host: Graph, assignment: Mapping[Pair, Color] | None = None):
        norm: dict[Pair, Color] = {}
        for (a, b), col in (assignment or {}).items():
            p = pair(a, b)
            col = Color(col)
            if col is BLACK:
                raise ColoringError(f"non-edge {p} cannot be black")
            if a not in host or b not in host:
                raise ColoringError(f"pair {p} references unknown nodes")
            if host.has_edge(a, b):
                raise ColoringError(f"pair {p} is an edge of the host")
            norm[p] = col
        self.host = host
        self.assignment = norm

    def __repr__(self) -> str:
        return f"TriColoring({self.host!r}, {len(self.assignment)} labelled)"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriColoring):
            return NotImplemented
        return self.host == other.host and self.assignment == other.assignment

    @property
    def is_complete(self) -> bool:
        return len(self.assignment) == len(self.host.non_edges())

    def color(self, a: str, b: str) -> Color | None:
        """Color of a pair; ``None`` for an unlabelled non-edge."""
        if self.host.has_edge(a, b):
            return BLACK
        return self.assignment.get(pair(a, b))

    def pairs_of(self, col: Color) -> list[Pair]:
        if col is BLACK:
            return self.host.edges()
        return [p for p in self.host.non_edges() if self.assignment.get(p) is col]

    def restrict(self, nodes: Iterable[str]) -> "TriColoring":
        from .graphs import induced_subgraph
        sub = induced_subgraph(self.host, nodes)
        keep = set(sub.nodes)
        return TriColoring(sub, {p: c for p, c in self.assignment.items()
                                 if p[0] in keep and p[1] in keep})

    def to_dict(self) -> dict:
        return {"host": self.host.to_dict(),
                "colors": [[list(p), self.color(*p).value]
                           for p in combinations_pairs(self.host)
                           if self.color(*p) is not None]}


def combinations_pairs(G: Graph) -> list[Pair]:
    return [pair(a, b) for a, b in combinations(G.nodes, 2)]


# -- forbidden patterns ---------------------------------------------------------

@dataclass(frozen=True)
class ForbiddenPattern:
    id: str
    base: Graph
    red: frozenset = frozenset()
    blue: frozenset = frozenset()

    def __post_init__(self):
        red = frozenset(pair(*p) for p in self.red)
        blue = frozenset(pair(*p) for p in self.blue)
        object.__setattr__(self, "red", red)
        object.__setattr__(self, "blue", blue)
        if red & blue:
            raise ColoringError(f"{self.id}: pairs both red and blue: {sorted(red & blue)}")
        non_edges = set(self.base.non_edges())
        bad = (red | blue) - non_edges
        if bad:
            raise ColoringError(f"{self.id}: constrained pairs are not non-edges: {sorted(bad)}")

    def constraints(self) -> list[tuple[Pair, Color]]:
        """Constrained pairs with their pattern color, in base node order."""
        out = []
        for p in self.base.non_edges():
            if p in self.red:
                out.append((p, RED))
            elif p in self.blue:
                out.append((p, BLUE))
        return out

    def as_coloring(self) -> TriColoring:
        return TriColoring(self.base, dict(self.constraints()))

    def to_dict(self) -> dict:
        return {"id": self.id, "nodes": list(self.base.nodes),
                "edges": [list(e) for e in self.base.edges()],
                "red": sorted(list(p) for p in self.red),
                "blue": sorted(list(p) for p in self.blue)}

    @classmethod
    def from_dict(cls, data: dict) -> "ForbiddenPattern":
        unknown = set(data) - {"id", "nodes", "edges", "red", "blue"}
        if unknown:
            raise ColoringError(f"unknown pattern keys {sorted(unknown)}")
        try:
            base = Graph(data["nodes"], [tuple(e) for e in data["edges"]])
            return cls(data["id"], base,
                       frozenset(tuple(p) for p in data.get("red", [])),
                       frozenset(tuple(p) for p in data.get("blue", [])))
        except (KeyError, TypeError, GraphError) as exc:
            raise ColoringError(f"malformed pattern: {exc}") from None


def _pattern(pid: str, nodes: str, edges: str, red: str = "", blue: str = "") -> ForbiddenPattern:
    def pairs(s):
        return frozenset(tuple(t) for t in s.split())
    base = Graph(list(nodes), [tuple(e) for e in edges.split()])
    return ForbiddenPattern(pid, base, pairs(red), pairs(blue))


_CATALOG = (
    _pattern("f-c(2K2)a", "abcd", "ab cd", red="ac ad bc bd"),
    _pattern("f-c(2K2)b", "abcd", "ab cd", red="bc ad", blue="ac bd"),
    _pattern("f-c(P4)", "abcd", "ab bc cd", red="ad", blue="ac bd"),
    _pattern("f-c(K1,3)", "abcd", "ab bc bd", red="ad cd", blue="ac"),
    _pattern("f-c(K3uK1)", "abcd", "bc bd cd", red="ac ad", blue="ab"),
    _pattern("f-c(A)", "abcdef", "ae ab af bc bf de dc ef", blue="bd ce"),
    _pattern("f-c(B)", "abcde", "ab ae be ce de cd", red="bc", blue="ac bd"),
    _pattern("f-c(C)", "abcdef", "ab bc bd cd ce de ef", red="ac cf", blue="ad df"),
)

# the proof of f-c(2K2)b never uses red (a,d); dropping it gives a stronger clause
_WEAK = (_pattern("f-c(2K2)b-weak", "abcd", "ab cd", red="bc", blue="ac bd"),)


def catalog(weak: bool = False) -> list[ForbiddenPattern]:
    """The eight forbidden colorings; ``weak=True`` appends the weakened 2K2b."""
    return list(_CATALOG + _WEAK) if weak else list(_CATALOG)


def pattern_by_id(pid: str) -> ForbiddenPattern:
    for p in catalog(weak=True):
        if p.id == pid:
            return p
    raise KeyError(pid)


# -- clauses ------------------------------------------------------------------------

@dataclass(frozen=True)
class Clause:
    """Disjunction of literals, with the rule and node map that produced it."""

    literals: tuple[Literal, ...]
    rule: str
    map: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    @property
    def key(self) -> frozenset:
        return frozenset(self.literals)

    def node_map(self) -> dict[str, str]:
        return dict(self.map)

    def satisfied_by(self, colors: Mapping[Pair, Color]) -> bool:
        return any(colors.get(p) is c for p, c in self.literals)

    def to_dict(self) -> dict:
        return {"rule": self.rule, "map": dict(self.map),
                "literals": [[list(p), c.value] for p, c in self.literals]}

    @classmethod
    def from_dict(cls, data: dict) -> "Clause":
        lits = tuple((pair(*p), Color(c)) for p, c in data["literals"])
        return cls(lits, data["rule"], tuple(data.get("map", {}).items()))


def _make_clause(lits: Iterable[Literal], rule: str, node_map) -> Clause | None:
    lits = tuple(dict.fromkeys(lits))
    seen = {}
    for p, c in lits:
        if seen.setdefault(p, c) is not c:
            return None  # tautology
    if not lits:
        raise ColoringError(f"empty clause from rule {rule}")
    return Clause(lits, rule, tuple(node_map.items()))


def dedup_clauses(clauses: Iterable[Clause]) -> list[Clause]:
    """Drop clauses whose literal set was already seen; first occurrence wins."""
    seen = set()
    out = []
    for c in clauses:
        if c.key not in seen:
            seen.add(c.key)
            out.append(c)
    return out


def pattern_clauses(G: Graph, p: ForbiddenPattern) -> list[Clause]:
    cons = p.constraints()
    out = []
    for f in induced_occurrences(G, p.base):
        lits = [(pair(f[a], f[b]), col.opposite) for (a, b), col in cons]
        c = _make_clause(lits, p.id, f)
        if c is not None:
            out.append(c)
    return dedup_clauses(out)


def _check_induced_cycle(G: Graph, cycle) -> list[str]:
    cycle = list(cycle)
    n = len(cycle)
    if n < 4 or len(set(cycle)) != n:
        raise InvalidCycleError(f"cycle must have at least 4 distinct nodes, got {cycle}")
    for v in cycle:
        if v not in G:
            raise InvalidCycleError(f"unknown node {v!r}")
    for i, j in combinations(range(n), 2):
        consecutive = (j - i) in (1, n - 1)
        if G.has_edge(cycle[i], cycle[j]) != consecutive:
            raise InvalidCycleError(f"{cycle} is not an induced cycle")
    return cycle


def cycle_rule_clauses(G: Graph, cycle) -> list[Clause]:
    """Some cycle-distance-2 pair is red; for length >= 5, some cycle non-edge is blue.

    The blue clause is false on 4-cycles: cherries {a,c} and {b,d} joined by a
    long edge realise C_4 with both chords red.
    """
    cycle = _check_induced_cycle(G, cycle)
    n = len(cycle)
    node_map = {str(i): v for i, v in enumerate(cycle)}
    chords = [pair(cycle[i], cycle[j]) for i, j in combinations(range(n), 2)
              if (j - i) not in (1, n - 1)]
    two = [pair(cycle[i], cycle[(i + 2) % n]) for i in range(n)]
    two = list(dict.fromkeys(two))
    out = [_make_clause([(p, RED) for p in two], "cycle-red2", node_map)]
    if n >= 5:
        out.insert(0, _make_clause([(p, BLUE) for p in chords], "cycle-blue", node_map))
    return [c for c in out if c is not None]


def _check_induced_path(G: Graph, path) -> list[str]:
    path = list(path)
    m = len(path)
    if m < 3 or len(set(path)) != m:
        raise InvalidPathError(f"path must have at least 3 distinct nodes, got {path}")
    for v in path:
        if v not in G:
            raise InvalidPathError(f"unknown node {v!r}")
    for i, j in combinations(range(m), 2):
        if G.has_edge(path[i], path[j]) != (j - i == 1):
            raise InvalidPathError(f"{path} is not an induced path")
    return path


def path_rule_clauses(G: Graph, path) -> list[Clause]:
    path = _check_induced_path(G, path)
    m = len(path)
    node_map = {str(i): v for i, v in enumerate(path)}
    two = [pair(path[i], path[i + 2]) for i in range(m - 2)]
    out = []
    # a red non-edge forces a red 2-non-edge
    for i, j in combinations(range(m), 2):
        if j - i >= 2:
            c = _make_clause([(pair(path[i], path[j]), BLUE)] + [(p, RED) for p in two],
                             "path-le1", node_map)
            if c is not None:
                out.append(c)
    # blue (v1,vi) for 3<=i<=m-1 and blue (v2,vm) force blue (v1,vm)
    if m >= 4:
        for seq in (path, path[::-1]):
            lits = [(pair(seq[0], seq[i]), RED) for i in range(2, m - 1)]
            lits += [(pair(seq[1], seq[m - 1]), RED), (pair(seq[0], seq[m - 1]), BLUE)]
            c = _make_clause(lits, "path-claim1", {str(i): v for i, v in enumerate(seq)})
            if c is not None:
                out.append(c)
    return dedup_clauses(out)


def check_coloring(c: TriColoring, clauses: Iterable[Clause]) -> list[Clause]:
    """Clauses with no satisfied literal under the complete coloring ``c``."""
    if not c.is_complete:
        raise IncompleteColoringError("coloring must label every non-edge")
    return [cl for cl in clauses if not cl.satisfied_by(c.assignment)]


def clauses_to_json(clauses: Iterable[Clause]) -> str:
    return json.dumps([c.to_dict() for c in clauses])
