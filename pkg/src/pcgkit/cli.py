"""Command-line entry point.

Exit codes: 0 proved/produced, 1 verification or certification failure,
2 input or guard error, 3 unknown outcome.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
from pathlib import Path

from . import prover, realizability
from .coloring import ForbiddenPattern, catalog
from .graphs import (Graph, GraphError, are_isomorphic, build_cycle, build_cycle_strong_p2,
                     build_wheel, remove_node)
from .trees import (DistanceBounds, TreeError, as_rational, minimality_caterpillar, parse_newick,
                    pcg_coloring, pcg_graph, wheel7_witness, wheel8_witness)
from .verify import CertificateError, check_certificate

OK, FAILED, BAD_INPUT, UNKNOWN = 0, 1, 2, 3
DEFAULT_STAMP = "pcgkit-catalog.stamp"

GENERATORS = {"cycle": build_cycle, "wheel": build_wheel, "cnp2": build_cycle_strong_p2}


class InputError(Exception):
    """Bad user input; reported with exit code 2."""


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text + "\n")
    else:
        Path(path).write_text(text + "\n")


def _load_graph(path: str) -> Graph:
    try:
        return Graph.from_json(_read(path))
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from None


def _rational(text: str):
    try:
        return as_rational(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {text!r} ({exc})") from None


def pattern_hash(p: ForbiddenPattern) -> str:
    blob = json.dumps(p.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _stamp_path(args) -> Path:
    return Path(args.stamp or os.environ.get("PCGKIT_STAMP") or DEFAULT_STAMP)


def split_rules(text: str) -> list[str]:
    # commas inside parentheses belong to ids such as f-c(K1,3)
    return [r.strip() for r in re.split(r",(?![^()]*\))", text) if r.strip()]


# -- subcommands ---------------------------------------------------------------

def cmd_gen(args) -> int:
    try:
        G = GENERATORS[args.family](args.n)
    except GraphError as exc:
        raise InputError(str(exc)) from None
    _write(args.out, G.to_json())
    msg = f"{len(G.nodes)} nodes / {G.num_edges()} edges"
    print(msg, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return OK


def _tree_and_bounds(args):
    text = _read(args.tree).strip()
    head, sep, tail = text.partition(";")
    if not sep:
        raise InputError("Newick text must end with ';'")
    file_bounds = tail.split()
    try:
        T = parse_newick(head + ";")
    except TreeError as exc:
        raise InputError(f"{args.tree}: {exc}") from None
    dmin, dmax = args.dmin, args.dmax
    if dmin is None and dmax is None and len(file_bounds) == 2:
        dmin, dmax = file_bounds
    elif file_bounds and len(file_bounds) != 2:
        raise InputError("expected 'dmin dmax' after the Newick tree")
    if dmin is None or dmax is None:
        raise InputError("bounds required: --dmin and --dmax (or 'dmin dmax' after the tree)")
    try:
        return T, DistanceBounds(_rational(dmin), _rational(dmax))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_from_tree(args) -> int:
    T, b = _tree_and_bounds(args)
    G = pcg_graph(T, b)
    _write(args.out, G.to_json())
    if args.emit_coloring is not None:
        _write(args.emit_coloring, json.dumps(pcg_coloring(T, b).to_dict()))
    return OK


def _load_stamp(path: Path) -> dict | None:
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    return data if isinstance(data, dict) and isinstance(data.get("patterns"), dict) else None


def _parse_rule_flags(args):
    known = {p.id: p for p in catalog(weak=True)}
    patterns, cycles = [], None
    for r in split_rules(args.rules) if args.rules else [p.id for p in catalog()] + [prover.RIM_CYCLE]:
        if r == prover.RIM_CYCLE:
            cycles = prover.RIM_CYCLE
        elif r in known:
            patterns.append(known[r])
        else:
            raise InputError(f"unknown rule {r!r}; expected pattern ids or {prover.RIM_CYCLE!r}")
    return patterns, cycles


def cmd_prove(args) -> int:
    G = _load_graph(args.graph)
    patterns, cycles = _parse_rule_flags(args)
    stamp = _load_stamp(_stamp_path(args))
    certified = [p.id for p in patterns
                 if stamp is not None and stamp["patterns"].get(p.id) == pattern_hash(p)]
    missing = [p.id for p in patterns if p.id not in certified]
    if missing and not args.allow_uncertified:
        where = _stamp_path(args)
        print(f"not certified by stamp {where}: {', '.join(missing)}; "
              "run 'pcgkit check-catalog' first (or pass --allow-uncertified)", file=sys.stderr)
        return FAILED
    opts = prover.ProverOptions(symmetry=args.symmetry, workers=args.workers,
                                budget_seconds=float(_rational(args.budget_seconds))
                                if args.budget_seconds is not None else None,
                                allow_uncertified=args.allow_uncertified)
    problem = prover.compile(G, patterns=patterns, cycles=cycles, certified=certified, options=opts)
    resume = None
    if args.resume:
        try:
            resume = prover.ProofCertificate.from_json(_read(args.resume))
        except (ValueError, GraphError) as exc:
            raise InputError(f"{args.resume}: {exc}") from None
        if resume.host != G:
            raise InputError("resumed certificate is for a different graph")
    out = prover.prove_not_pcg(problem, resume=resume)
    stats = {"variables": len(problem.variables), "clauses": len(problem.clauses), **out.stats}
    stats["seconds"] = round(stats.get("seconds", 0.0), 3)
    print("stats: " + json.dumps(stats, sort_keys=True))
    cert_path = args.cert or str(Path(args.graph).with_suffix("")) + ".cert.json"
    if out.certificate is not None:
        Path(cert_path).write_text(out.certificate.to_json() + "\n")
    if out.not_pcg:
        print(f"not-pcg; certificate written to {cert_path}")
        return OK
    print(f"unknown ({out.reason})")
    if out.coloring is not None:
        _write(args.out, json.dumps(out.coloring.to_dict()))
    elif out.certificate is not None:
        print(f"partial certificate written to {cert_path}; resume with --resume")
    return UNKNOWN


def cmd_verify_cert(args) -> int:
    G = _load_graph(args.graph)
    text = _read(args.cert)
    try:
        cert = prover.ProofCertificate.from_json(text)
    except (ValueError, GraphError) as exc:
        raise InputError(f"{args.cert}: unreadable certificate ({exc})") from None
    try:
        check_certificate(G, cert)
    except CertificateError as exc:
        print(f"certificate rejected at {exc}", file=sys.stderr)
        return FAILED
    print(f"certificate ok: {cert.size()['leaf']} leaves")
    return OK


def cmd_witness(args) -> int:
    if args.kind == "minimality":
        if args.n is None or args.n < 4:
            raise InputError("minimality needs n >= 4")
        T, b = minimality_caterpillar(args.n)
        expected = remove_node(build_cycle_strong_p2(args.n), f"u{args.n}")
    else:
        if args.n is not None:
            raise InputError(f"{args.kind} takes no n")
        T, b = wheel7_witness() if args.kind == "wheel7" else wheel8_witness()
        expected = build_wheel(6 if args.kind == "wheel7" else 7)
    if not are_isomorphic(pcg_graph(T, b), expected):
        print("self-check failed: witness does not realise the expected graph", file=sys.stderr)
        return FAILED
    print(f"{T.to_newick()} {b}")
    return OK


def _catalog_from_file(path: str) -> list[ForbiddenPattern]:
    try:
        data = json.loads(_read(path))
        if not isinstance(data, list):
            raise ValueError("catalog file must hold a JSON array of patterns")
        return [ForbiddenPattern.from_dict(d) for d in data]
    except (ValueError, KeyError, TypeError, GraphError) as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_check_catalog(args) -> int:
    patterns = _catalog_from_file(args.catalog) if args.catalog else catalog(weak=args.include_weak)
    report = realizability.verify_catalog(patterns, workers=args.workers)
    for r in report.patterns:
        verdict = "forbidden" if r.forbidden else "REALIZABLE"
        print(f"{r.id}: {r.infeasible}/{r.topologies} topologies infeasible, {verdict}")
        if r.witness is not None:
            print(f"  witness: {r.witness.newick_line()}")
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    if not report.ok:
        bad = ", ".join(r.id for r in report.patterns if not r.forbidden)
        print(f"certification failed: {bad}", file=sys.stderr)
        return FAILED
    hashes = {p.id: pattern_hash(p) for p in patterns}
    whole = hashlib.sha256(json.dumps(hashes, sort_keys=True).encode()).hexdigest()
    stamp = {"catalog_sha256": whole, "patterns": hashes}
    _stamp_path(args).write_text(json.dumps(stamp, indent=2, sort_keys=True) + "\n")
    print(f"stamp written to {_stamp_path(args)}")
    return OK


def cmd_recognize(args) -> int:
    G = _load_graph(args.graph)
    try:
        res = realizability.recognize_pcg_small(G, workers=args.workers)
    except realizability.GuardError as exc:
        print(f"{exc} (try 'pcgkit prove')", file=sys.stderr)
        return BAD_INPUT
    if isinstance(res, realizability.Witness):
        print(res.newick_line())
        if res.zero_leaf_weight:
            print("note: the pre-lift solution used a zero-weight leaf edge", file=sys.stderr)
    else:
        print("not-pcg-by-exhaustion")
    return OK


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pcgkit", description="Pairwise compatibility graph toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a graph from a named family")
    p.add_argument("family", choices=sorted(GENERATORS))
    p.add_argument("n", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("from-tree", help="graph (and coloring) induced by a weighted tree")
    p.add_argument("tree", help="Newick file, optionally followed by 'dmin dmax'; '-' for stdin")
    p.add_argument("--dmin")
    p.add_argument("--dmax")
    p.add_argument("--out")
    p.add_argument("--emit-coloring", nargs="?", const="-", metavar="PATH",
                   help="also write the full coloring (stdout when no path)")
    p.set_defaults(func=cmd_from_tree)

    p = sub.add_parser("prove", help="refute every coloring and write a certificate")
    p.add_argument("graph")
    p.add_argument("--rules", help="comma list of pattern ids and 'rim-cycle'")
    p.add_argument("--cert", help="certificate path (default: <graph>.cert.json)")
    p.add_argument("--out", help="where to write a surviving coloring")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget-seconds")
    p.add_argument("--symmetry", action="store_true", help="orbit split at the first decision")
    p.add_argument("--resume", metavar="CERT", help="continue a budget-interrupted certificate")
    p.add_argument("--allow-uncertified", action="store_true")
    p.add_argument("--stamp")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("verify-cert", help="replay a certificate against a graph")
    p.add_argument("graph")
    p.add_argument("cert")
    p.set_defaults(func=cmd_verify_cert)

    p = sub.add_parser("witness", help="print a known witness tree and bounds")
    p.add_argument("kind", choices=["wheel7", "wheel8", "minimality"])
    p.add_argument("n", type=int, nargs="?")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("check-catalog", help="certify the forbidden patterns and write the stamp")
    p.add_argument("--catalog", help="JSON array of patterns instead of the built-in catalog")
    p.add_argument("--include-weak", action="store_true")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--stamp")
    p.set_defaults(func=cmd_check_catalog)

    p = sub.add_parser("recognize", help="exhaustive recognition for small graphs")
    p.add_argument("graph")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_recognize)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        print("--workers must be >= 1", file=sys.stderr)
        return BAD_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
