"""Random PCGs must violate none of the clauses compiled for their own graph."""
import random
from dataclasses import dataclass
from itertools import combinations

from common import parse_config

from pcgkit import prover
from pcgkit.coloring import catalog, check_coloring
from pcgkit.trees import DistanceBounds, pcg_coloring, random_tree


@dataclass
class Config:
    """Clause soundness on random witness trees."""
    trees: int = 500
    max_leaves: int = 8
    seed: int = 7


def main(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    certified = [p.id for p in catalog()]
    bad = 0
    for _ in range(cfg.trees):
        T = random_tree(rng, rng.randint(4, cfg.max_leaves))
        ds = sorted({T.distance(a, b) for a, b in combinations(T.leaves, 2)})
        lo, hi = sorted(rng.sample(ds, 2)) if len(ds) > 1 else (ds[0], ds[0])
        c = pcg_coloring(T, DistanceBounds(lo, hi))
        pr = prover.compile(c.host, certified=certified)
        hit = check_coloring(c, pr.clauses)
        if hit:
            bad += 1
            print(f"violation: {T.to_newick()} {lo} {hi} -> {hit[0]}")
    print(f"{cfg.trees} trees, {bad} with violated clauses")
    return bad


if __name__ == "__main__":
    raise SystemExit(1 if main(parse_config(Config)) else 0)
