"""Pairwise compatibility graphs: witnesses, forbidden colorings and refutation certificates."""
from .coloring import Color, ForbiddenPattern, TriColoring, catalog, pattern_by_id
from .graphs import (Graph, are_isomorphic, build_cycle, build_cycle_strong_p2, build_fan,
                     build_path, build_wheel, induced_subgraph, remove_node)
from .prover import ProofCertificate, ProverOptions, brute_force_refute, compile, prove_not_pcg
from .realizability import (InfeasibleAll, NotPCGByExhaustion, Witness, realizable,
                            recognize_pcg_small, verify_catalog)
from .trees import (DistanceBounds, WeightedTree, minimality_caterpillar, parse_newick,
                    pcg_coloring, pcg_graph, wheel7_witness, wheel8_witness)
from .verify import check_certificate, verify_certificate

__version__ = "0.1.0"
