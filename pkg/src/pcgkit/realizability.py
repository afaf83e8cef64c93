"""Decide whether a tri-coloring is induced by some weighted tree.

Every leaf-labelled unrooted binary topology is tried in turn; on each, the
coloring becomes a linear system over edge weights and the two bounds,
solved exactly.  Multifurcating trees are covered because a binary
refinement with zero-weight internal edges has the same leaf metric.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .coloring import BLUE, RED, Color, ForbiddenPattern, TriColoring, catalog
from .exact_lp import find_feasible_point
from .graphs import Graph, pair
from .trees import DistanceBounds, WeightedTree, pcg_coloring

MAX_LEAVES = 8
MAX_RECOGNIZE_NODES = 7
MAX_RECOGNIZE_NON_EDGES = 16


class GuardError(ValueError):
    """Input exceeds the enumeration limits."""


class WitnessCheckError(AssertionError):
    """A solver solution failed exact re-verification."""


@dataclass(frozen=True)
class Topology:
    leaves: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    @property
    def k(self) -> int:
        return len(self.leaves)

    def paths(self) -> dict[tuple[str, str], tuple[int, ...]]:
        """Edge indices on the path between each canonical leaf pair."""
        adj: dict[str, list[tuple[str, int]]] = {}
        for idx, (a, b) in enumerate(self.edges):
            adj.setdefault(a, []).append((b, idx))
            adj.setdefault(b, []).append((a, idx))
        out = {}
        for src in self.leaves:
            via = {src: ()}
            stack = [src]
            while stack:
                x = stack.pop()
                for y, idx in adj[x]:
                    if y not in via:
                        via[y] = via[x] + (idx,)
                        stack.append(y)
            for dst in self.leaves:
                if dst != src:
                    out[pair(src, dst)] = tuple(sorted(via[dst]))
        return out

    def is_leaf_edge(self, idx: int) -> bool:
        a, b = self.edges[idx]
        return a in self.leaves or b in self.leaves


def double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def enumerate_topologies(k_or_leaves) -> list[Topology]:
    """All unrooted binary trees on the given labelled leaves, by leaf insertion.

    Accepts a leaf count (leaves named ``"0".."k-1"``) or a sequence of names.
    """
    leaves = ([str(i) for i in range(k_or_leaves)] if isinstance(k_or_leaves, int)
              else list(k_or_leaves))
    k = len(leaves)
    if not 3 <= k <= MAX_LEAVES:
        raise GuardError(f"topology enumeration supports 3..{MAX_LEAVES} leaves, got {k}")
    current = [[("#0", leaves[0]), ("#0", leaves[1]), ("#0", leaves[2])]]
    for i in range(3, k):
        node = f"#{i - 2}"
        nxt = []
        for edges in current:
            for pos, (a, b) in enumerate(edges):
                nxt.append(edges[:pos] + [(a, node), (node, b)] + edges[pos + 1:]
                           + [(node, leaves[i])])
        current = nxt
    return [Topology(tuple(leaves), tuple(e)) for e in current]


@dataclass
class Witness:
    tree: WeightedTree
    bounds: DistanceBounds
    topology_index: int | None = None
    zero_leaf_weight: bool = False  # pre-lift solution had a zero leaf edge

    def newick_line(self) -> str:
        return f"{self.tree.to_newick()} {self.bounds}"


@dataclass
class InfeasibleAll:
    topologies: int
    infeasible: list[int] = field(default_factory=list)


@dataclass
class NotPCGByExhaustion:
    colorings: int
    topologies: int


def _constraints(coloring: TriColoring):
    """(black, red, blue) pair lists over the host's node pairs."""
    G = coloring.host
    black = G.edges()
    red = [p for p, c in coloring.assignment.items() if c is RED]
    blue = [p for p, c in coloring.assignment.items() if c is BLUE]
    return black, red, blue


def build_system(t: Topology, coloring: TriColoring):
    """Rows of ``A x <= b`` over [edge weights..., dmin, dmax] (dmin dropped if no red).

    Strict inequalities use unit slack: positive homogeneity makes this lossless.
    """
    black, red, blue = _constraints(coloring)
    paths = t.paths()
    ne = len(t.edges)
    has_red = bool(red)
    DMIN = ne if has_red else None
    DMAX = ne + 1 if has_red else ne
    nvars = DMAX + 1
    A, b = [], []

    def row(path, coef, extra):
        r = {e: Fraction(coef) for e in path}
        for var, c in extra:
            if var is not None:
                r[var] = r.get(var, 0) + Fraction(c)
        return r

    if has_red:
        A.append({DMIN: Fraction(-1)}); b.append(-1)
        A.append({DMIN: Fraction(1), DMAX: Fraction(-1)}); b.append(0)
    for p in black:
        if has_red:
            A.append(row(paths[p], -1, [(DMIN, 1)])); b.append(0)
        A.append(row(paths[p], 1, [(DMAX, -1)])); b.append(0)
    for p in red:
        A.append(row(paths[p], 1, [(DMIN, -1)])); b.append(-1)
    for p in blue:
        A.append(row(paths[p], -1, [(DMAX, 1)])); b.append(-1)
    return A, b, nvars, DMIN, DMAX


def _lift(t: Topology, x, dmin_idx, dmax_idx):
    """Shift bounds by 1/4 and lift zero weights by eps; then scale to integers."""
    ne = len(t.edges)
    weights = list(x[:ne])
    dmin = x[dmin_idx] if dmin_idx is not None else Fraction(0)
    dmax = x[dmax_idx]
    zero_leaf = any(weights[i] == 0 and t.is_leaf_edge(i) for i in range(ne))
    eps = Fraction(1, 8 * (2 * t.k - 3))
    weights = [w if w > 0 else eps for w in weights]
    if dmin_idx is not None:
        dmin -= Fraction(1, 4)
    dmax += Fraction(1, 4)
    scale = math.lcm(*(q.denominator for q in weights + [dmin, dmax]))
    tree = WeightedTree([(a, b, w * scale) for (a, b), w in zip(t.edges, weights)])
    return tree, DistanceBounds(dmin * scale, dmax * scale), zero_leaf


def reproduces(tree: WeightedTree, bounds: DistanceBounds, coloring: TriColoring) -> bool:
    """Exact check that (tree, bounds) induces ``coloring`` on every constrained pair."""
    got = pcg_coloring(tree, bounds)
    if got.host != coloring.host:  # also rejects a free non-edge turned black
        return False
    return all(got.assignment[p] is c for p, c in coloring.assignment.items())


def _solve(t: Topology, coloring: TriColoring) -> Witness | None:
    A, b, nvars, dmin_idx, dmax_idx = build_system(t, coloring)
    x = find_feasible_point(A, b, nvars)
    if x is None:
        return None
    tree, bounds, zero_leaf = _lift(t, x, dmin_idx, dmax_idx)
    if not reproduces(tree, bounds, coloring):
        raise WitnessCheckError("lifted witness does not reproduce the coloring")
    return Witness(tree, bounds, zero_leaf_weight=zero_leaf)


def completions(coloring: TriColoring):
    """Complete colorings extending ``coloring``, free pairs in mask order (bit set = red)."""
    free = [p for p in coloring.host.non_edges() if p not in coloring.assignment]
    for mask in range(1 << len(free)):
        extra = {p: (RED if mask >> i & 1 else BLUE) for i, p in enumerate(free)}
        yield TriColoring(coloring.host, {**coloring.assignment, **extra})


def feasible_on_topology(t: Topology, coloring: TriColoring) -> Witness | None:
    """Witness on this topology, or None.

    Unlabelled non-edges still have to be red or blue (never black), so a
    partial coloring is feasible iff one of its completions is.  The
    relaxation that ignores them is tried first as a cheap filter.
    """
    if set(t.leaves) != set(coloring.host.nodes):
        raise ValueError("topology leaves must match the coloring's host nodes")
    if coloring.is_complete:
        return _solve(t, coloring)
    A, b, nvars, _, _ = build_system(t, coloring)
    if find_feasible_point(A, b, nvars) is None:
        return None
    for full in completions(coloring):
        w = _solve(t, full)
        if w is not None:
            return w
    return None


def _two_node_witness(coloring: TriColoring) -> Witness:
    a, b = coloring.host.nodes
    tree = WeightedTree([(a, b, 2)])
    if coloring.host.has_edge(a, b):
        bounds = DistanceBounds(0, 2)
    elif coloring.assignment.get(pair(a, b)) is RED:
        bounds = DistanceBounds(3, 3)
    else:
        bounds = DistanceBounds(0, 1)
    return Witness(tree, bounds)


def _check_topology(args):
    idx, t, coloring = args
    return idx, feasible_on_topology(t, coloring)


def realizable(coloring: TriColoring, workers: int = 1) -> Witness | InfeasibleAll:
    """First witness in topology order, else the list of infeasible topologies.

    Partial colorings are allowed: unlabelled non-edges are unconstrained.
    """
    nodes = coloring.host.nodes
    if len(nodes) > MAX_LEAVES:
        raise GuardError(f"realizability supports at most {MAX_LEAVES} nodes, got {len(nodes)}")
    if len(nodes) < 2:
        raise GuardError("need at least two nodes")
    if len(nodes) == 2:
        return _two_node_witness(coloring)
    tops = enumerate_topologies(nodes)
    jobs = [(i, t, coloring) for i, t in enumerate(tops)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = pool.map(_check_topology, jobs, chunksize=8)
            for idx, w in results:
                if w is not None:
                    w.topology_index = idx
                    return w
    else:
        for job in jobs:
            idx, w = _check_topology(job)
            if w is not None:
                w.topology_index = idx
                return w
    return InfeasibleAll(len(tops), list(range(len(tops))))


# -- catalog certification -----------------------------------------------------

@dataclass
class PatternReport:
    id: str
    leaves: int
    topologies: int
    infeasible: int
    witness: Witness | None = None

    @property
    def forbidden(self) -> bool:
        return self.witness is None and self.infeasible == self.topologies

    def to_dict(self) -> dict:
        d = {"pattern": self.id, "leaves": self.leaves, "topologies": self.topologies,
             "infeasible_topologies": self.infeasible, "forbidden": self.forbidden}
        if self.witness is not None:
            d["witness"] = self.witness.newick_line()
        return d


@dataclass
class CatalogReport:
    patterns: list[PatternReport]

    @property
    def ok(self) -> bool:
        return all(p.forbidden for p in self.patterns)

    @property
    def certified_ids(self) -> list[str]:
        return [p.id for p in self.patterns if p.forbidden]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "patterns": [p.to_dict() for p in self.patterns]}


def certify_pattern(p: ForbiddenPattern, workers: int = 1) -> PatternReport:
    res = realizable(p.as_coloring(), workers=workers)
    k = len(p.base.nodes)
    if isinstance(res, InfeasibleAll):
        return PatternReport(p.id, k, res.topologies, len(res.infeasible))
    return PatternReport(p.id, k, double_factorial(2 * k - 5), 0, witness=res)


def verify_catalog(patterns: list[ForbiddenPattern] | None = None, workers: int = 1) -> CatalogReport:
    """Certify every pattern (default: catalog plus the weak 2K2b) as unrealizable."""
    if patterns is None:
        patterns = catalog(weak=True)
    return CatalogReport([certify_pattern(p, workers) for p in patterns])


# -- small-graph recognition ---------------------------------------------------------

def all_colorings(G: Graph):
    """Complete colorings in mask order; bit i set means non-edge i is red."""
    ne = G.non_edges()
    for mask in range(1 << len(ne)):
        yield TriColoring(G, {p: (RED if mask >> i & 1 else BLUE) for i, p in enumerate(ne)})


def recognize_pcg_small(G: Graph, workers: int = 1) -> Witness | NotPCGByExhaustion:
    n = len(G.nodes)
    m = len(G.non_edges())
    if n > MAX_RECOGNIZE_NODES or m > MAX_RECOGNIZE_NON_EDGES:
        raise GuardError(f"recognition limited to {MAX_RECOGNIZE_NODES} nodes and "
                         f"{MAX_RECOGNIZE_NON_EDGES} non-edges (got {n} and {m}); "
                         "use the prover for larger graphs")
    if n < 2:
        raise GuardError("need at least two nodes")
    count = 0
    for c in all_colorings(G):
        count += 1
        res = realizable(c, workers=workers)
        if isinstance(res, Witness):
            return res
    return NotPCGByExhaustion(count, double_factorial(2 * n - 5) if n >= 3 else 1)
