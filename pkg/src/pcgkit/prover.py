"""Exhaustive refutation of all tri-colorings of a graph.

Clauses come from forbidden-pattern occurrences and the cycle/path lemmas.
A DPLL search with unit propagation either closes every branch, producing
a certificate (decision tree whose leaves cite falsified clauses), or finds
a complete coloring that violates nothing, in which case the graph's status
is unknown.

Each certificate node is a function of the assignment on its root path
alone, which makes certificates identical whether built in one process,
in parallel, or across budgeted resumptions.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .coloring import (BLUE, RED, Clause, Color, ForbiddenPattern, TriColoring, catalog,
                       cycle_rule_clauses, dedup_clauses, path_rule_clauses, pattern_clauses)
from .graphs import Graph, automorphisms, pair

RIM_CYCLE = "rim-cycle"
BRUTE_FORCE_LIMIT = 24


class UncertifiedRuleError(RuntimeError):
    """The rule set uses patterns not certified forbidden."""


class GuardError(ValueError):
    pass


@lru_cache(maxsize=None)
def _certified(pattern_json: str) -> bool:
    from .realizability import certify_pattern
    return certify_pattern(ForbiddenPattern.from_dict(json.loads(pattern_json))).forbidden


def is_certified(p: ForbiddenPattern) -> bool:
    """Run (once per process and pattern content) the realizability certification."""
    return _certified(json.dumps(p.to_dict(), sort_keys=True))


def canonical_rims(G: Graph) -> list[list[str]]:
    """The ``v1..vn`` and ``u1..un`` sequences present in G that are induced cycles (n >= 4)."""
    out = []
    for letter in ("v", "u"):
        seq = []
        i = 1
        while f"{letter}{i}" in G:
            seq.append(f"{letter}{i}")
            i += 1
        if len(seq) >= 4:
            n = len(seq)
            ok = all(G.has_edge(seq[a], seq[b]) == ((b - a) in (1, n - 1))
                     for a in range(n) for b in range(a + 1, n))
            if ok:
                out.append(seq)
    return out


def designated_cycles(G: Graph) -> list[list[str]]:
    """Canonical rims together with their images under every automorphism of G.

    For C_n strong P_2 this adds the 2^n rims choosing u_i or v_i per position.
    """
    rims = canonical_rims(G)
    if not rims:
        return []
    out, seen = [], set()
    for sigma in [{v: v for v in G.nodes}] + automorphisms(G):
        for rim in rims:
            img = [sigma[v] for v in rim]
            key = frozenset(img)
            if key not in seen:
                seen.add(key)
                out.append(img)
    return out


@dataclass
class ProverOptions:
    symmetry: bool = False
    workers: int = 1
    budget_seconds: float | None = None
    allow_uncertified: bool = False
    split_depth: int = 4  # decision depth at which work is handed to workers

    def certificate_fields(self) -> dict:
        return {"branching": "most-occurrences", "symmetry": self.symmetry,
                "allow_uncertified": self.allow_uncertified}


@dataclass
class ProverProblem:
    host: Graph
    variables: tuple
    clauses: list
    rules: tuple
    uncertified: tuple = ()
    options: ProverOptions = field(default_factory=ProverOptions)

    def var_index(self) -> dict:
        return {p: i for i, p in enumerate(self.variables)}


def compile(G: Graph, patterns=None, cycles=RIM_CYCLE, paths=(), certified=None,
            options: ProverOptions | None = None) -> ProverProblem:
    """Build the clause set for ``G``.

    ``patterns`` defaults to the eight-pattern catalog; ``cycles`` is a list of
    node sequences or ``"rim-cycle"`` for :func:`designated_cycles`; ``paths`` lists
    induced paths for the path lemmas.  ``certified`` is a set of pattern ids
    known to be forbidden; by default each pattern is certified in-process.
    """
    if patterns is None:
        patterns = catalog()
    if cycles == RIM_CYCLE:
        cycles = designated_cycles(G)
    elif cycles is None:
        cycles = []
    clauses: list[Clause] = []
    rules: list[str] = []
    for p in patterns:
        rules.append(p.id)
        clauses += pattern_clauses(G, p)
    for cyc in cycles:
        clauses += cycle_rule_clauses(G, cyc)
    if cycles:
        rules.append(RIM_CYCLE)
    for path in paths:
        clauses += path_rule_clauses(G, path)
    if paths:
        rules.append("paths")
    if certified is None:
        uncertified = tuple(p.id for p in patterns if not is_certified(p))
    else:
        uncertified = tuple(p.id for p in patterns if p.id not in set(certified))
    return ProverProblem(G, tuple(G.non_edges()), dedup_clauses(clauses), tuple(rules),
                         uncertified, options or ProverOptions())


# -- outcomes and certificates -----------------------------------------------

@dataclass
class ProofCertificate:
    host: Graph
    options: dict
    root: dict

    def to_dict(self) -> dict:
        return {"host": self.host.to_dict(), "options": self.options, "root": self.root}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "ProofCertificate":
        if not isinstance(data, dict) or set(data) != {"host", "options", "root"}:
            raise ValueError("certificate must have exactly 'host', 'options' and 'root'")
        return cls(Graph.from_dict(data["host"]), data["options"], data["root"])

    @classmethod
    def from_json(cls, text: str) -> "ProofCertificate":
        return cls.from_dict(json.loads(text))

    def size(self) -> dict:
        counts = {"branch": 0, "leaf": 0, "orbit": 0, "open": 0}
        stack = [self.root]
        while stack:
            node = stack.pop()
            kind = next(iter(node))
            counts[kind] += 1
            if kind == "branch":
                stack += [node["branch"][1]["red"], node["branch"][1]["blue"]]
            elif kind == "orbit":
                stack += [node["orbit"]["red"], node["orbit"]["blue"]]
        return counts


@dataclass
class ProverOutcome:
    kind: str  # "not-pcg" or "unknown"
    certificate: ProofCertificate | None = None
    coloring: TriColoring | None = None
    reason: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def not_pcg(self) -> bool:
        return self.kind == "not-pcg"


# -- search -----------------------------------------------------------------------------

class _Sat(Exception):
    def __init__(self, values):
        self.values = values


class _Search:
    """Incremental clause bookkeeping plus the node-by-node tree construction."""

    def __init__(self, problem: ProverProblem, deadline=None, split_depth=None):
        idx = problem.var_index()
        self.problem = problem
        self.nvars = len(problem.variables)
        self.lits = []
        self.occ = [[] for _ in range(2 * self.nvars)]
        for ci, cl in enumerate(problem.clauses):
            lits = [2 * idx[p] + (c is BLUE) for p, c in cl.literals]
            self.lits.append(lits)
            for lit in lits:
                self.occ[lit].append(ci)
        self.size = [len(l) for l in self.lits]
        self.nsat = [0] * len(self.lits)
        self.nfalse = [0] * len(self.lits)
        self.units = {ci for ci, s in enumerate(self.size) if s == 1}
        self.conflicts = set()
        self.value = [None] * self.nvars
        self.deadline = deadline
        self.split_depth = split_depth
        self.nodes = 0
        self.orbit_info = None

    def assign(self, var, col):
        self.value[var] = col
        true_lit, false_lit = 2 * var + col, 2 * var + 1 - col
        for ci in self.occ[true_lit]:
            self.nsat[ci] += 1
            if self.nsat[ci] == 1:
                self.units.discard(ci)
        for ci in self.occ[false_lit]:
            self.nfalse[ci] += 1
            if self.nsat[ci] == 0:
                left = self.size[ci] - self.nfalse[ci]
                if left == 1:
                    self.units.add(ci)
                elif left == 0:
                    self.units.discard(ci)
                    self.conflicts.add(ci)

    def unassign(self, var):
        col = self.value[var]
        true_lit, false_lit = 2 * var + col, 2 * var + 1 - col
        for ci in self.occ[false_lit]:
            self.nfalse[ci] -= 1
            if self.nsat[ci] == 0:
                left = self.size[ci] - self.nfalse[ci]
                if left == 1:
                    self.conflicts.discard(ci)
                    self.units.add(ci)
                elif left == 2:
                    self.units.discard(ci)
        for ci in self.occ[true_lit]:
            self.nsat[ci] -= 1
            if self.nsat[ci] == 0:
                left = self.size[ci] - self.nfalse[ci]
                if left == 1:
                    self.units.add(ci)
                elif left == 0:
                    self.conflicts.add(ci)
        self.value[var] = None

    def pick_branch_var(self):
        best, best_count = None, -1
        for v in range(self.nvars):
            if self.value[v] is not None:
                continue
            cnt = 0
            for lit in (2 * v, 2 * v + 1):
                for ci in self.occ[lit]:
                    if self.nsat[ci] == 0:
                        cnt += 1
            if cnt > best_count:
                best, best_count = v, cnt
        return best, best_count

    def child(self, var, col, depth):
        self.assign(var, col)
        try:
            return self.node(depth)
        finally:
            self.unassign(var)

    def node(self, depth=0):
        """Tree node for the current assignment.

        Internal form: ("leaf", ci) | ("branch", var, red, blue) |
        ("orbit", var, members, red, blue) | ("open",).
        """
        self.nodes += 1
        if self.deadline is not None and time.monotonic() > self.deadline:
            return ("open",)
        if self.conflicts:
            return ("leaf", min(self.conflicts))
        if self.units:
            ci = min(self.units)
            var, col = next((l >> 1, l & 1) for l in self.lits[ci] if self.value[l >> 1] is None)
            forced = self.child(var, col, depth)
            closed = ("leaf", ci)
            return ("branch", var, forced, closed) if col == 0 else ("branch", var, closed, forced)
        var, count = self.pick_branch_var()
        if var is None or count == 0:
            raise _Sat([RED if v is None else (RED, BLUE)[v] for v in self.value])
        if self.split_depth is not None and depth >= self.split_depth:
            return ("open",)
        if depth == 0 and self.orbit_info is not None:
            members = self.orbit_info(var, self.value)
            if members:
                return self._orbit_node(var, members, depth)
        red = self.child(var, 0, depth + 1)
        blue = self.child(var, 1, depth + 1)
        return ("branch", var, red, blue)

    def _orbit_node(self, var, members, depth):
        red = self.child(var, 0, depth + 1)
        assigned = []
        try:
            for m, _ in members:
                self.assign(m, 1)
                assigned.append(m)
            self.assign(var, 1)
            assigned.append(var)
            blue = self.node(depth + 1)
        finally:
            for m in reversed(assigned):
                self.unassign(m)
        return ("orbit", var, members, red, blue)

    def replay(self, trail):
        for var, col in trail:
            self.assign(var, col)


def _orbit_finder(problem: ProverProblem):
    """Members of the chosen variable's orbit under Aut(host), each with a mapping onto it."""
    G = problem.host
    autos = automorphisms(G)
    idx = problem.var_index()

    def find(var, value):
        target = problem.variables[var]
        members = {}
        for sigma in autos:
            for p in problem.variables:
                img = pair(sigma[p[0]], sigma[p[1]])
                if img == target and p != target and idx[p] not in members:
                    members[idx[p]] = sigma
        if any(value[m] is not None for m in members):
            return None
        return sorted(members.items())

    return find


def _explore(args):
    problem, trail, deadline = args
    s = _Search(problem, deadline=deadline)
    s.replay(trail)
    try:
        return s.node(depth=len(trail)), s.nodes, None
    except _Sat as sat:
        return None, s.nodes, sat.values


def _open_trails(tree, problem, trail=()):
    """Trails leading to open nodes, in deterministic (red before blue) order."""
    kind = tree[0]
    if kind == "open":
        return [list(trail)]
    if kind == "branch":
        _, var, red, blue = tree
        return (_open_trails(red, problem, trail + ((var, 0),))
                + _open_trails(blue, problem, trail + ((var, 1),)))
    if kind == "orbit":
        _, var, members, red, blue = tree
        blue_trail = trail + tuple((m, 1) for m, _ in members) + ((var, 1),)
        return (_open_trails(red, problem, trail + ((var, 0),))
                + _open_trails(blue, problem, blue_trail))
    return []


def _fill(tree, filled):
    kind = tree[0]
    if kind == "open":
        return next(filled)
    if kind == "branch":
        return ("branch", tree[1], _fill(tree[2], filled), _fill(tree[3], filled))
    if kind == "orbit":
        return ("orbit", tree[1], tree[2], _fill(tree[3], filled), _fill(tree[4], filled))
    return tree


def _has_open(tree) -> bool:
    kind = tree[0]
    if kind == "open":
        return True
    if kind == "branch":
        return _has_open(tree[2]) or _has_open(tree[3])
    if kind == "orbit":
        return _has_open(tree[3]) or _has_open(tree[4])
    return False


def _to_json_node(tree, problem: ProverProblem):
    kind = tree[0]
    if kind == "leaf":
        return {"leaf": {"clause": problem.clauses[tree[1]].to_dict()}}
    if kind == "open":
        return {"open": True}
    if kind == "branch":
        _, var, red, blue = tree
        return {"branch": [list(problem.variables[var]),
                           {"red": _to_json_node(red, problem),
                            "blue": _to_json_node(blue, problem)}]}
    _, var, members, red, blue = tree
    return {"orbit": {"pair": list(problem.variables[var]),
                      "members": [[list(problem.variables[m]), dict(sigma)] for m, sigma in members],
                      "red": _to_json_node(red, problem),
                      "blue": _to_json_node(blue, problem)}}


def _from_json_node(node, problem: ProverProblem):
    idx = problem.var_index()
    keys = {c.key: i for i, c in enumerate(problem.clauses)}

    def conv(n):
        kind = next(iter(n))
        if kind == "open":
            return ("open",)
        if kind == "leaf":
            return ("leaf", keys[Clause.from_dict(n["leaf"]["clause"]).key])
        if kind == "branch":
            p, kids = n["branch"]
            return ("branch", idx[pair(*p)], conv(kids["red"]), conv(kids["blue"]))
        o = n["orbit"]
        members = [(idx[pair(*p)], sigma) for p, sigma in o["members"]]
        return ("orbit", idx[pair(*o["pair"])], members, conv(o["red"]), conv(o["blue"]))

    return conv(node)


def prove_not_pcg(problem: ProverProblem, resume: ProofCertificate | None = None) -> ProverOutcome:
    """DPLL refutation of every complete coloring of ``problem.host``.

    ``resume`` continues a budget-interrupted certificate (one with open nodes).
    """
    opts = problem.options
    if problem.uncertified and not opts.allow_uncertified:
        raise UncertifiedRuleError(
            f"patterns not certified forbidden: {', '.join(problem.uncertified)}")
    start = time.monotonic()
    deadline = start + opts.budget_seconds if opts.budget_seconds is not None else None
    nodes = 0
    try:
        if resume is not None:
            tree = _from_json_node(resume.root, problem)
        else:
            split = opts.split_depth if opts.workers > 1 else None
            s = _Search(problem, deadline=deadline, split_depth=split)
            if opts.symmetry:
                s.orbit_info = _orbit_finder(problem)
            try:
                tree = s.node()
            finally:
                nodes += s.nodes
        trails = _open_trails(tree, problem)
        if trails:
            jobs = [(problem, t, deadline) for t in trails]
            if opts.workers > 1:
                with ProcessPoolExecutor(opts.workers) as pool:
                    results = list(pool.map(_explore, jobs))
            else:
                results = [_explore(j) for j in jobs]
            nodes += sum(n for _, n, _ in results)
            for _, _, sat in results:
                if sat is not None:
                    raise _Sat(sat)
            tree = _fill(tree, iter(sub for sub, _, _ in results))
    except _Sat as sat:
        coloring = TriColoring(problem.host, dict(zip(problem.variables, sat.values)))
        return ProverOutcome("unknown", coloring=coloring, reason="surviving coloring",
                             stats={"nodes": nodes, "seconds": time.monotonic() - start})
    cert = ProofCertificate(problem.host, {"rules": list(problem.rules), **opts.certificate_fields()},
                            _to_json_node(tree, problem))
    stats = {"nodes": nodes, "seconds": time.monotonic() - start, **cert.size()}
    if _has_open(tree):
        return ProverOutcome("unknown", certificate=cert, reason="budget exhausted", stats=stats)
    return ProverOutcome("not-pcg", certificate=cert, stats=stats)


# -- brute force oracle ---------------------------------------------------------------

def brute_force_refute(problem: ProverProblem, chunk: int = 1 << 20) -> ProverOutcome:
    """Enumerate all 2^m colorings (bit i set = variable i red); no certificate."""
    m = len(problem.variables)
    if m > BRUTE_FORCE_LIMIT:
        raise GuardError(f"brute force limited to {BRUTE_FORCE_LIMIT} variables, got {m}")
    idx = problem.var_index()
    masks = []
    for cl in problem.clauses:
        mask = need = 0
        for p, c in cl.literals:
            bit = 1 << idx[p]
            mask |= bit
            if c is BLUE:  # a blue literal is false when the variable is red (bit set)
                need |= bit
        masks.append((mask, need))
    total = 1 << m
    for lo in range(0, total, chunk):
        x = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        alive = np.ones(len(x), dtype=bool)
        for mask, need in masks:
            alive &= (x & mask) != need
        hits = np.flatnonzero(alive)
        if len(hits):
            code = int(x[hits[0]])
            colors = {p: (RED if code >> i & 1 else BLUE) for i, p in enumerate(problem.variables)}
            return ProverOutcome("unknown", coloring=TriColoring(problem.host, colors),
                                 reason="surviving coloring")
    return ProverOutcome("not-pcg", stats={"colorings": total})
