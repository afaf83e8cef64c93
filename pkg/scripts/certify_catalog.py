"""Certify each forbidden pattern by exhausting topologies with exact LPs."""
import json
import time
from dataclasses import dataclass

from common import parse_config, table

from pcgkit.coloring import catalog
from pcgkit.realizability import certify_pattern


@dataclass
class Config:
    """Exact realizability check for every catalog pattern."""
    include_weak: bool = True
    workers: int = 1
    report: str | None = None


def main(cfg: Config) -> list[dict]:
    rows = []
    for p in catalog(weak=cfg.include_weak):
        t0 = time.perf_counter()
        r = certify_pattern(p, workers=cfg.workers)
        rows.append({**r.to_dict(), "seconds": f"{time.perf_counter() - t0:.2f}"})
    print(table([{k: r.get(k, "") for k in ("pattern", "leaves", "topologies",
                                             "infeasible_topologies", "forbidden", "seconds",
                                             "witness")} for r in rows]))
    if cfg.report:
        with open(cfg.report, "w") as fh:
            json.dump(rows, fh, indent=1)
    return rows


if __name__ == "__main__":
    main(parse_config(Config))
