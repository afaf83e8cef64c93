"""Prove the fixed-instance non-PCG results and re-verify every certificate.

    python scripts/reproduce_theorems.py --wheels 8,9,10 --strong 4,5,6 --out-dir results
"""
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from common import parse_config, table

from pcgkit import prover
from pcgkit.coloring import catalog
from pcgkit.graphs import build_cycle_strong_p2, build_wheel
from pcgkit.realizability import verify_catalog
from pcgkit.verify import verify_certificate


@dataclass
class Config:
    """Prove W_{n+1} and C_n strong P_2 are not PCGs."""
    wheels: tuple[int, ...] = (6, 7, 8, 9, 10)
    strong: tuple[int, ...] = (4, 5, 6)
    symmetry: bool = False
    workers: int = 1
    budget_seconds: float | None = 600.0
    out_dir: str | None = None


def main(cfg: Config) -> list[dict]:
    report = verify_catalog(catalog())
    assert report.ok, "catalog failed certification"
    certified = report.certified_ids
    hosts = [(f"W{n}+1", build_wheel(n)) for n in cfg.wheels]
    hosts += [(f"C{n}xP2", build_cycle_strong_p2(n)) for n in cfg.strong]
    opts = prover.ProverOptions(symmetry=cfg.symmetry, workers=cfg.workers,
                                budget_seconds=cfg.budget_seconds)
    out = Path(cfg.out_dir) if cfg.out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    rows = []
    for name, G in hosts:
        t0 = time.perf_counter()
        pr = prover.compile(G, certified=certified, options=opts)
        res = prover.prove_not_pcg(pr)
        dt = time.perf_counter() - t0
        ok = verify_certificate(G, res.certificate, pr) if res.not_pcg else "-"
        size = res.certificate.size() if res.certificate else {}
        rows.append({"host": name, "vars": len(pr.variables), "clauses": len(pr.clauses),
                     "result": res.kind, "verified": ok, "leaves": size.get("leaf", "-"),
                     "nodes": res.stats.get("nodes", "-"), "seconds": f"{dt:.2f}"})
        if out and res.certificate:
            (out / f"{name}.cert.json").write_text(res.certificate.to_json() + "\n")
    print(table(rows))
    if out:
        (out / "theorems.json").write_text(json.dumps({"config": asdict(cfg), "rows": rows},
                                                      indent=1) + "\n")
    return rows


if __name__ == "__main__":
    main(parse_config(Config))
