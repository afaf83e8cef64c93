"""Independent replay of refutation certificates.

Nothing here calls the prover or the occurrence matcher: every cited
clause is rebuilt from its rule id and node map by checking adjacency in
the host directly, and each leaf is checked against the colors fixed on its
root path.
"""
from __future__ import annotations

from .coloring import ForbiddenPattern, catalog
from .graphs import Graph


class CertificateError(Exception):
    def __init__(self, path: str, msg: str):
        self.path = path
        super().__init__(f"{path}: {msg}")


def _key(a, b):
    return (a, b) if a < b else (b, a)


_OPP = {"red": "blue", "blue": "red"}


def _literal_set(lits, where):
    out = set()
    try:
        for p, c in lits:
            if c not in _OPP or len(p) != 2:
                raise ValueError
            out.add((_key(*p), c))
    except (TypeError, ValueError):
        raise CertificateError(where, "malformed literal list") from None
    return out


def _expect_pattern(G: Graph, pat: ForbiddenPattern, m: dict, where: str):
    nodes = list(pat.base.nodes)
    if sorted(m) != sorted(nodes):
        raise CertificateError(where, f"map keys do not match pattern {pat.id}")
    image = [m[x] for x in nodes]
    if len(set(image)) != len(image) or any(v not in G for v in image):
        raise CertificateError(where, "map is not injective into the host")
    for i, x in enumerate(nodes):
        for y in nodes[i + 1:]:
            if pat.base.has_edge(x, y) != G.has_edge(m[x], m[y]):
                raise CertificateError(where, f"occurrence of {pat.id} not induced at ({m[x]},{m[y]})")
    out = set()
    for x, y in pat.red:
        out.add((_key(m[x], m[y]), "blue"))
    for x, y in pat.blue:
        out.add((_key(m[x], m[y]), "red"))
    return out


def _sequence(G: Graph, m: dict, where: str):
    try:
        seq = [m[str(i)] for i in range(len(m))]
    except KeyError:
        raise CertificateError(where, "sequence map must be keyed 0..n-1") from None
    if len(set(seq)) != len(seq) or any(v not in G for v in seq):
        raise CertificateError(where, "sequence repeats nodes or leaves the host")
    return seq


def _expect_cycle(G, rule, m, where):
    seq = _sequence(G, m, where)
    n = len(seq)
    if n < 4:
        raise CertificateError(where, "cycle shorter than 4")
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j - i == 1 or (i == 0 and j == n - 1)
            if G.has_edge(seq[i], seq[j]) != adjacent:
                raise CertificateError(where, "cited cycle is not induced in the host")
    if rule == "cycle-blue":
        if n < 5:
            raise CertificateError(where, "blue cycle rule needs length >= 5")
        return {(_key(seq[i], seq[j]), "blue") for i in range(n) for j in range(i + 2, n)
                if not (i == 0 and j == n - 1)}
    return {(_key(seq[i], seq[(i + 2) % n]), "red") for i in range(n)}


def _expect_path(G, rule, m, lits, where):
    seq = _sequence(G, m, where)
    k = len(seq)
    for i in range(k):
        for j in range(i + 1, k):
            if G.has_edge(seq[i], seq[j]) != (j - i == 1):
                raise CertificateError(where, "cited path is not induced in the host")
    if rule == "path-claim1":
        if k < 4:
            raise CertificateError(where, "claim needs at least 4 path nodes")
        out = {(_key(seq[0], seq[i]), "red") for i in range(2, k - 1)}
        out |= {(_key(seq[1], seq[k - 1]), "red"), (_key(seq[0], seq[k - 1]), "blue")}
        return out
    reds = {(_key(seq[i], seq[i + 2]), "red") for i in range(k - 2)}
    extra = lits - reds
    if len(extra) != 1:
        return None
    (p, c), = extra
    far = {_key(seq[i], seq[j]) for i in range(k) for j in range(i + 3, k)}
    if c != "blue" or p not in far:
        return None
    return reds | extra


def rederive(G: Graph, clause: dict, rules, patterns: dict, where: str) -> set:
    """Literal set of a cited clause after checking it really arises in ``G``."""
    try:
        rule, m, raw = clause["rule"], clause["map"], clause["literals"]
    except (KeyError, TypeError):
        raise CertificateError(where, "malformed clause") from None
    lits = _literal_set(raw, where)
    if not isinstance(m, dict):
        raise CertificateError(where, "clause map must be an object")
    if rule in patterns:
        if rule not in rules:
            raise CertificateError(where, f"pattern {rule} not in the certificate's rule set")
        expected = _expect_pattern(G, patterns[rule], m, where)
    elif rule in ("cycle-blue", "cycle-red2"):
        if "rim-cycle" not in rules:
            raise CertificateError(where, "cycle rule used but not enabled")
        expected = _expect_cycle(G, rule, m, where)
    elif rule in ("path-le1", "path-claim1"):
        if "paths" not in rules:
            raise CertificateError(where, "path rule used but not enabled")
        expected = _expect_path(G, rule, m, lits, where)
    else:
        raise CertificateError(where, f"unknown rule {rule!r}")
    if expected != lits:
        raise CertificateError(where, f"literals do not match rule {rule} on the cited nodes")
    return lits


def _is_automorphism(G: Graph, sigma: dict) -> bool:
    if sorted(sigma) != sorted(G.nodes) or sorted(sigma.values()) != sorted(G.nodes):
        return False
    nodes = list(G.nodes)
    return all(G.has_edge(a, b) == G.has_edge(sigma[a], sigma[b])
               for i, a in enumerate(nodes) for b in nodes[i + 1:])


def check_certificate(G: Graph, cert, problem=None, patterns=None) -> None:
    """Raise :class:`CertificateError` (with the offending node's path) unless ``cert`` refutes G."""
    if patterns is None:
        patterns = {p.id: p for p in catalog(weak=True)}
    data = cert.to_dict() if hasattr(cert, "to_dict") else cert
    if not isinstance(data, dict) or "root" not in data:
        raise CertificateError("root", "not a certificate")
    try:
        host = Graph.from_dict(data["host"])
    except Exception as exc:
        raise CertificateError("host", f"unreadable host: {exc}") from None
    if host != G:
        raise CertificateError("host", "certificate host differs from the given graph")
    rules = set((data.get("options") or {}).get("rules", []))
    if problem is not None:
        if set(problem.rules) != rules:
            raise CertificateError("options", "rule set differs from the problem's")
        if problem.host != G:
            raise CertificateError("options", "problem host differs from the given graph")
    variables = {_key(a, b) for a, b in G.non_edges()}

    def pair_of(raw, where):
        try:
            a, b = raw
        except (TypeError, ValueError):
            raise CertificateError(where, "malformed pair") from None
        p = _key(a, b)
        if p not in variables:
            raise CertificateError(where, f"{p} is not a non-edge of the host")
        return p

    # (node, trail, path, all ancestors forced, orbit used)
    stack = [(data["root"], {}, "root", True, False)]
    while stack:
        node, trail, where, forced_only, orbit_used = stack.pop()
        if not isinstance(node, dict) or len(node) != 1:
            raise CertificateError(where, "malformed node")
        kind, body = next(iter(node.items()))
        if kind == "leaf":
            try:
                clause = body["clause"]
            except (KeyError, TypeError):
                raise CertificateError(where, "leaf without clause") from None
            lits = rederive(G, clause, rules, patterns, where)
            for p, c in lits:
                if p not in variables:
                    raise CertificateError(where, f"literal on {p}, which is not a non-edge")
                if trail.get(p) != _OPP[c]:
                    raise CertificateError(where, f"literal {p}={c} is not falsified on this path")
        elif kind == "branch":
            try:
                raw, kids = body
                red, blue = kids["red"], kids["blue"]
            except (TypeError, ValueError, KeyError):
                raise CertificateError(where, "branch needs a pair and red/blue children") from None
            p = pair_of(raw, where)
            if p in trail:
                raise CertificateError(where, f"{p} branched twice on one path")
            forced = forced_only and ("leaf" in red or "leaf" in blue)
            stack.append((blue, {**trail, p: "blue"}, f"{where}/{p[0]}-{p[1]}=blue", forced, orbit_used))
            stack.append((red, {**trail, p: "red"}, f"{where}/{p[0]}-{p[1]}=red", forced, orbit_used))
        elif kind == "orbit":
            if not (data.get("options") or {}).get("symmetry"):
                raise CertificateError(where, "orbit node in a certificate without symmetry breaking")
            if not forced_only or orbit_used:
                raise CertificateError(where, "orbit split allowed only at the first decision")
            try:
                p = pair_of(body["pair"], where)
                members = [(pair_of(mp, where), sigma) for mp, sigma in body["members"]]
                red, blue = body["red"], body["blue"]
            except (KeyError, TypeError, ValueError):
                raise CertificateError(where, "malformed orbit node") from None
            if p in trail:
                raise CertificateError(where, f"{p} already fixed")
            blue_trail = {**trail, p: "blue"}
            for mp, sigma in members:
                if mp in trail or mp == p:
                    raise CertificateError(where, f"orbit member {mp} already fixed")
                if not isinstance(sigma, dict) or not _is_automorphism(G, sigma):
                    raise CertificateError(where, f"mapping for {mp} is not an automorphism")
                if _key(sigma[mp[0]], sigma[mp[1]]) != p:
                    raise CertificateError(where, f"mapping does not send {mp} to {p}")
                blue_trail[mp] = "blue"
            stack.append((blue, blue_trail, f"{where}/orbit=blue", False, True))
            stack.append((red, {**trail, p: "red"}, f"{where}/{p[0]}-{p[1]}=red", False, True))
        elif kind == "open":
            raise CertificateError(where, "open node: certificate is incomplete")
        else:
            raise CertificateError(where, f"unknown node kind {kind!r}")


def verify_certificate(G: Graph, cert, problem=None, patterns=None) -> bool:
    try:
        check_certificate(G, cert, problem, patterns)
    except CertificateError:
        return False
    return True
