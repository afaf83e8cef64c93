import functools
import itertools
from fractions import Fraction

from hypothesis import strategies as st

from pcgkit.graphs import Graph
from pcgkit.trees import WeightedTree

FIG1_NEWICK = "((a:2,d:1):2,(b:1,c:2));"


@functools.lru_cache(maxsize=None)
def graph_classes(n):
    """One representative per isomorphism class of n-node graphs (canonical form by permutation)."""
    nodes = [f"x{i}" for i in range(n)]
    pairs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    seen, out = set(), []
    for mask in range(1 << len(pairs)):
        es = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        canon = min(tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in es)) for p in perms)
        if canon not in seen:
            seen.add(canon)
            out.append(Graph(nodes, [(nodes[a], nodes[b]) for a, b in es]))
    return tuple(out)


weights = st.builds(Fraction, st.integers(1, 12), st.integers(1, 4))


@st.composite
def trees(draw, min_leaves=2, max_leaves=8):
    """Random weighted trees; leaves are attached to subdivided edges or to internal nodes."""
    k = draw(st.integers(min_leaves, max_leaves))
    edges = {("#0", "l0"): draw(weights), ("#0", "l1"): draw(weights)}
    internal = ["#0"]
    for i in range(2, k):
        if draw(st.booleans()):
            a, b = draw(st.sampled_from(sorted(edges)))
            w = edges.pop((a, b))
            mid = f"#{len(internal)}"
            internal.append(mid)
            # splitting keeps the total weight positive on both sides
            cut = w * draw(st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]))
            edges[(a, mid)] = cut
            edges[(mid, b)] = w - cut
            edges[(mid, f"l{i}")] = draw(weights)
        else:
            edges[(draw(st.sampled_from(internal)), f"l{i}")] = draw(weights)
    return WeightedTree([(a, b, w) for (a, b), w in edges.items()])


@st.composite
def relabelings(draw, G):
    names = draw(st.permutations([f"n{i}" for i in range(len(G.nodes))]))
    return dict(zip(G.nodes, names))
