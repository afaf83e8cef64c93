"""Edge-weighted trees with exact rational weights, and their PCGs.

Internal nodes carry names starting with ``#``; leaf names match
``[A-Za-z0-9_]+`` so the two never collide.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .coloring import BLUE, RED, TriColoring
from .graphs import Graph, pair

INTERNAL_PREFIX = "#"
_LEAF_NAME = re.compile(r"[A-Za-z0-9_]+\Z")


class TreeError(ValueError):
    pass


class InvalidLeafError(TreeError):
    pass


class NewickError(TreeError):
    def __init__(self, msg: str, pos: int | None = None):
        self.pos = pos
        super().__init__(msg if pos is None else f"{msg} at position {pos}")


class PreconditionError(TreeError):
    pass


def as_rational(x) -> Fraction:
    """Exact rational from an int, Fraction or decimal/fraction string.  Floats are refused."""
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not re.fullmatch(r"[+-]?(\d+(\.\d*)?|\.\d+)(/\d+)?", s) or ("." in s and "/" in s):
            raise ValueError(f"not a decimal or rational literal: {x!r}")
        return Fraction(s)
    raise TypeError(f"unsupported numeric type {type(x).__name__}")


def format_rational(q: Fraction) -> str:
    """Integer, terminating decimal, or ``p/q`` when no finite decimal exists."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    places = max(twos, fives)
    scaled = q * 10 ** places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}".rstrip("0").rstrip(".")


@dataclass(frozen=True)
class DistanceBounds:
    dmin: Fraction
    dmax: Fraction

    def __post_init__(self):
        lo, hi = as_rational(self.dmin), as_rational(self.dmax)
        if lo < 0 or hi < 0:
            raise TreeError("distance bounds must be non-negative")
        if lo > hi:
            raise TreeError(f"dmin {lo} exceeds dmax {hi}")
        object.__setattr__(self, "dmin", lo)
        object.__setattr__(self, "dmax", hi)

    def scaled(self, factor) -> "DistanceBounds":
        f = as_rational(factor)
        return DistanceBounds(self.dmin * f, self.dmax * f)

    def __str__(self) -> str:
        return f"{format_rational(self.dmin)} {format_rational(self.dmax)}"


class WeightedTree:
    """Unrooted tree; ``adj[x][y]`` is the weight of edge x-y."""

    def __init__(self, edges):
        adj: dict[str, dict[str, Fraction]] = {}
        count = 0
        for a, b, w in edges:
            w = as_rational(w)
            if w <= 0:
                raise TreeError(f"edge {a}-{b} has non-positive weight {w}")
            if a == b or b in adj.get(a, {}):
                raise TreeError(f"bad or repeated edge {a}-{b}")
            adj.setdefault(a, {})[b] = w
            adj.setdefault(b, {})[a] = w
            count += 1
        if len(adj) < 2 or count != len(adj) - 1:
            raise TreeError("edges do not form a tree on at least two nodes")
        start = next(iter(adj))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(adj):
            raise TreeError("tree is not connected")
        for v, nb in adj.items():
            internal = v.startswith(INTERNAL_PREFIX)
            if len(nb) == 1 and internal:
                raise TreeError(f"internal node {v} has degree 1")
            if len(nb) > 1 and not internal:
                raise TreeError(f"leaf name {v} used for a node of degree {len(nb)}")
            if not internal and not _LEAF_NAME.match(v):
                raise TreeError(f"invalid leaf name {v!r}")
        self.adj = adj
        self.leaves = tuple(v for v in adj if len(adj[v]) == 1)

    def __repr__(self) -> str:
        return f"WeightedTree({len(self.leaves)} leaves, {len(self.adj)} nodes)"

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(self.adj)

    def edges(self) -> list[tuple[str, str, Fraction]]:
        out = []
        seen = set()
        for a, nb in self.adj.items():
            for b, w in nb.items():
                if (b, a) not in seen:
                    seen.add((a, b))
                    out.append((a, b, w))
        return out

    def scaled(self, factor) -> "WeightedTree":
        f = as_rational(factor)
        return WeightedTree([(a, b, w * f) for a, b, w in self.edges()])

    @cached_property
    def distances(self) -> dict[str, dict[str, Fraction]]:
        """Leaf-to-leaf distance matrix, one traversal per leaf."""
        leafset = set(self.leaves)
        out = {}
        for src in self.leaves:
            dist = {src: Fraction(0)}
            stack = [src]
            while stack:
                x = stack.pop()
                for y, w in self.adj[x].items():
                    if y not in dist:
                        dist[y] = dist[x] + w
                        stack.append(y)
            out[src] = {v: d for v, d in dist.items() if v in leafset}
        return out

    def distance(self, u: str, v: str) -> Fraction:
        try:
            return self.distances[u][v]
        except KeyError:
            missing = u if u not in self.distances else v
            raise InvalidLeafError(f"unknown leaf {missing!r}") from None

    def to_newick(self) -> str:
        internal = [v for v in self.adj if v.startswith(INTERNAL_PREFIX)]
        if not internal:
            (a, b, w), = self.edges()
            half = format_rational(w / 2)
            return f"({a}:{half},{b}:{half});"

        def emit(x, parent):
            kids = [y for y in self.adj[x] if y != parent]
            if not kids:
                return x
            return "(" + ",".join(f"{emit(y, x)}:{format_rational(self.adj[x][y])}"
                                  for y in kids) + ")"

        return emit(internal[0], None) + ";"


def leaf_distance(T: WeightedTree, u: str, v: str) -> Fraction:
    return T.distance(u, v)


# -- Newick --------------------------------------------------------------------

class _NewickParser:
    _NAME = re.compile(r"[A-Za-z0-9_]+")
    _NUM = re.compile(r"\d+(\.\d+)?(/\d+)?|\.\d+")

    def __init__(self, text: str):
        self.s = text
        self.i = 0
        self.edges: list[list] = []
        self.counter = 0
        self.leaf_names: set[str] = set()

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self):
        self.ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def expect(self, ch):
        if self.peek() != ch:
            got = repr(self.peek()) if self.peek() else "end of input"
            raise NewickError(f"expected {ch!r}, got {got}", self.i)
        self.i += 1

    def name(self, required):
        self.ws()
        m = self._NAME.match(self.s, self.i)
        if not m:
            if required:
                raise NewickError("expected a leaf name", self.i)
            return None
        self.i = m.end()
        return m.group()

    def weight(self):
        self.ws()
        start = self.i
        m = self._NUM.match(self.s, self.i)
        if not m:
            raise NewickError("expected a weight", start)
        self.i = m.end()
        w = Fraction(m.group())
        if w <= 0:
            raise NewickError(f"non-positive weight {m.group()}", start)
        return w

    def subtree(self):
        """Returns the node id of the parsed subtree."""
        if self.peek() == "(":
            self.i += 1
            node = f"{INTERNAL_PREFIX}{self.counter}"
            self.counter += 1
            children = [self.child()]
            while self.peek() == ",":
                self.i += 1
                children.append(self.child())
            self.expect(")")
            if len(children) < 2:
                raise NewickError("internal node needs at least two children", self.i)
            self.name(required=False)  # internal labels are ignored
            for cid, w, pos in children:
                self.edges.append([node, cid, w, pos])
            return node
        pos = self.i
        leaf = self.name(required=True)
        if leaf in self.leaf_names:
            raise NewickError(f"duplicate leaf name {leaf!r}", pos)
        self.leaf_names.add(leaf)
        return leaf

    def child(self):
        cid = self.subtree()
        pos = self.i
        if self.peek() == ":":
            self.i += 1
            return cid, self.weight(), pos
        return cid, None, pos

    def parse(self):
        root = self.subtree()
        self.expect(";")
        if self.peek():
            raise NewickError("trailing characters", self.i)
        if not root.startswith(INTERNAL_PREFIX):
            raise NewickError("tree has a single leaf", 0)
        edges = self.edges
        root_edges = [e for e in edges if e[0] == root]
        for e in edges:
            if e[2] is None and not (e[0] == root and len(root_edges) == 2):
                raise NewickError("missing weight", e[3])
        if len(root_edges) == 2:
            # degree-2 root: merge its two edges into one
            (_, a, wa, _), (_, b, wb, _) = root_edges
            w = (wa or 0) + (wb or 0)
            if w <= 0:
                raise NewickError("root edges carry no weight", 0)
            edges = [e for e in edges if e[0] != root] + [[a, b, w, 0]]
        return WeightedTree([(a, b, w) for a, b, w, _ in edges])


def parse_newick(text: str) -> WeightedTree:
    """Parse the Newick subset: leaf weights required, root edges may omit one weight.

    Weights are decimal literals (``p/q`` also accepted) and are kept exact.
    """
    return _NewickParser(text).parse()


# -- PCG construction ------------------------------------------------------------

def _check_leaves(T: WeightedTree) -> None:
    if len(T.leaves) < 2:
        raise TreeError("need at least two leaves")


def pcg_graph(T: WeightedTree, b: DistanceBounds) -> Graph:
    _check_leaves(T)
    edges = [(u, v) for u, v in combinations(T.leaves, 2)
             if b.dmin <= T.distance(u, v) <= b.dmax]
    return Graph(T.leaves, edges)


def pcg_coloring(T: WeightedTree, b: DistanceBounds) -> TriColoring:
    G = pcg_graph(T, b)
    colors = {}
    for u, v in G.non_edges():
        colors[pair(u, v)] = RED if T.distance(u, v) < b.dmin else BLUE
    return TriColoring(G, colors)


def check_subtree_lemma(T: WeightedTree, u: str, v: str, w: str, x: str) -> bool:
    """d(w,x) <= max(d(u,x), d(v,x)) when u-v is the longest path among u, v, w."""
    if len({u, v, w, x}) != 4:
        raise PreconditionError("leaves must be distinct")
    d = T.distance
    if d(u, v) < max(d(u, w), d(v, w)):
        raise PreconditionError(f"P({u},{v}) is not the largest path among {u},{v},{w}")
    return d(w, x) <= max(d(u, x), d(v, x))


# -- explicit witnesses --------------------------------------------------------------

def wheel7_witness() -> tuple[WeightedTree, DistanceBounds]:
    """Tree realising W_{6+1} with bounds (5, 7)."""
    T = WeightedTree([
        ("#I1", "v3", 1), ("#I1", "v6", 3),
        ("#I2", "v5", 1), ("#I2", "v2", 3),
        ("#I3", "c", 3),
        ("#I4", "v1", 1), ("#I4", "v4", 3),
        ("#I1", "#I3", 1), ("#I2", "#I3", 1), ("#I3", "#I4", 1),
    ])
    return T, DistanceBounds(5, 7)


def wheel8_witness() -> tuple[WeightedTree, DistanceBounds]:
    """Tree realising W_{7+1} with bounds (9, 13)."""
    T = WeightedTree([
        ("#P", "v2", 3), ("#P", "v4", 1), ("#P", "v7", 5),
        ("#Q", "v1", 3), ("#Q", "v3", 5), ("#Q", "v6", 1),
        ("#P", "#M", 2), ("#M", "#Q", 2), ("#M", "#R", 3),
        ("#R", "c", 3), ("#R", "v5", 6),
    ])
    return T, DistanceBounds(9, 13)


def minimality_caterpillar(n: int) -> tuple[WeightedTree, DistanceBounds]:
    """Caterpillar whose PCG for bounds (2n-2, 2n+2) is C_n strong P_2 minus u_n."""
    if not isinstance(n, int) or n < 4:
        raise TreeError(f"n must be an integer >= 4, got {n!r}")
    x = [None] + [f"#x{i}" for i in range(1, n)]
    edges = []
    for i in range(1, n):
        edges += [(x[i], f"u{i}", n), (x[i], f"v{i}", n)]
    if n % 2 == 0:
        edges += [(x[i], x[i + 1], 2) for i in range(1, n - 1)]
        edges.append((x[n // 2], f"v{n}", 1))
    else:
        lo, hi = n // 2, n // 2 + 1
        edges += [(x[i], x[i + 1], 2) for i in range(1, n - 1) if i != lo]
        edges += [(x[lo], "#y", 1), ("#y", x[hi], 1), ("#y", f"v{n}", 1)]
    return WeightedTree(edges), DistanceBounds(2 * n - 2, 2 * n + 2)


def random_tree(rng, k: int, max_weight: int = 12, max_den: int = 4) -> WeightedTree:
    """Random tree on leaves l0..l{k-1}, weights p/q with 1 <= p <= max_weight, q <= max_den.

    Each new leaf either subdivides a random edge or hangs off a random internal
    node, so binary and higher-degree trees both occur.
    """
    if k < 2:
        raise TreeError("need at least two leaves")
    w = lambda: Fraction(rng.randint(1, max_weight), rng.randint(1, max_den))  # noqa: E731
    if k == 2:
        return WeightedTree([("l0", "l1", w())])
    edges = {("#0", f"l{i}"): w() for i in range(3)}
    internal = ["#0"]
    for i in range(3, k):
        if rng.random() < 0.7:
            a, b = rng.choice(sorted(edges))
            old = edges.pop((a, b))
            mid = f"#{len(internal)}"
            internal.append(mid)
            cut = old * Fraction(rng.randint(1, 3), 4)
            edges[(a, mid)], edges[(mid, b)] = cut, old - cut
            edges[(mid, f"l{i}")] = w()
        else:
            edges[(rng.choice(internal), f"l{i}")] = w()
    return WeightedTree([(a, b, x) for (a, b), x in edges.items()])
