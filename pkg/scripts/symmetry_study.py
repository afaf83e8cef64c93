"""Certificate size with and without root-level orbit symmetry breaking."""
import time
from dataclasses import dataclass

from common import parse_config, table

from pcgkit import prover
from pcgkit.coloring import catalog
from pcgkit.graphs import automorphisms, build_cycle_strong_p2, build_wheel
from pcgkit.verify import verify_certificate


@dataclass
class Config:
    """Compare proof size with symmetry off and on."""
    wheels: tuple[int, ...] = (8, 9, 10)
    strong: tuple[int, ...] = (4, 5, 6)


def main(cfg: Config) -> list[dict]:
    certified = [p.id for p in catalog()]
    hosts = [(f"W{n}+1", build_wheel(n)) for n in cfg.wheels]
    hosts += [(f"C{n}xP2", build_cycle_strong_p2(n)) for n in cfg.strong]
    rows = []
    for name, G in hosts:
        row = {"host": name, "|Aut|": len(automorphisms(G))}
        for sym in (False, True):
            pr = prover.compile(G, certified=certified,
                                options=prover.ProverOptions(symmetry=sym))
            t0 = time.perf_counter()
            res = prover.prove_not_pcg(pr)
            dt = time.perf_counter() - t0
            assert res.not_pcg and verify_certificate(G, res.certificate, pr), name
            tag = "sym" if sym else "plain"
            row[f"{tag} leaves"] = res.certificate.size()["leaf"]
            row[f"{tag} s"] = f"{dt:.2f}"
        row["ratio"] = f"{row['sym leaves'] / row['plain leaves']:.2f}"
        rows.append(row)
    print(table(rows))
    return rows


if __name__ == "__main__":
    main(parse_config(Config))
