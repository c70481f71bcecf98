"""Minor models: data type, clause-by-clause verifier, text round-trip, and
a brute-force minor oracle for small instances."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import GraphFormatError, OracleBudgetError
from .graphs import Graph, connected_components, make_graph

_CLAUSE_RANK = {"ref": 0, "i": 1, "ii": 2, "iii": 3, "iv": 4}


@dataclass(frozen=True)
class MinorModel:
    host: Graph
    target: Graph
    branch_sets: Mapping[int, frozenset[int]]
    edge_paths: Mapping[tuple[int, int], tuple[int, ...]]


@dataclass(frozen=True)
class Violation:
    clause: str
    witness: tuple

    def __str__(self) -> str:
        return f"({self.clause}) {' '.join(str(w) for w in self.witness)}"


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    violations: tuple[Violation, ...]


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def verify_model(m: MinorModel) -> VerifyResult:
    """Check all four model clauses; report every violation with a witness.

    Clauses: (i) each branch set nonempty and connected in the host,
    (ii) branch sets pairwise disjoint, (iii) each edge path's endpoints lie
    in the two incident branch sets, (iv) paths simple, internally disjoint
    from each other and from all branch sets.  Out-of-range references are
    reported as (ref) violations, never raised.
    """
    g, h = m.host, m.target
    bad: list[Violation] = []
    branch: dict[int, frozenset[int]] = {}
    for u, xs in m.branch_sets.items():
        if not (0 <= u < h.n):
            bad.append(Violation("ref", ("branch", u)))
            continue
        if any(not (0 <= v < g.n) for v in xs):
            bad.append(Violation("ref", ("branch-vertex", u)))
            continue
        branch[u] = frozenset(xs)
    for u in range(h.n):
        xs = branch.get(u)
        if not xs:
            bad.append(Violation("i", (u,)))
            continue
        if len(connected_components(g, xs)) != 1:
            bad.append(Violation("i", (u,)))
    keys = sorted(branch)
    for a_pos, u in enumerate(keys):
        for v in keys[a_pos + 1:]:
            if branch[u] & branch[v]:
                bad.append(Violation("ii", (u, v)))

    paths: dict[tuple[int, int], tuple[int, ...]] = {}
    for e, p in m.edge_paths.items():
        u, v = e
        key = _norm_edge(u, v)
        if key not in h.edge_set:
            bad.append(Violation("ref", ("path-edge",) + key))
            continue
        if any(not (0 <= w < g.n) for w in p):
            bad.append(Violation("ref", ("path-vertex",) + key))
            continue
        paths[key] = tuple(p)
    for u, v in h.edges():
        p = paths.get((u, v))
        if p is None or len(p) == 0:
            bad.append(Violation("iii", (u, v)))
            continue
        xu, xv = branch.get(u, frozenset()), branch.get(v, frozenset())
        straight = p[0] in xu and p[-1] in xv
        reverse = p[0] in xv and p[-1] in xu
        if not (straight or reverse):
            bad.append(Violation("iii", (u, v)))
        if len(set(p)) != len(p):
            bad.append(Violation("iv", (u, v, "not-simple")))
            continue
        if any(not g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1)):
            bad.append(Violation("ref", ("path-step", u, v)))
            continue
        interior = set(p[1:-1])
        for w in keys:
            hit = interior & branch[w]
            if hit:
                bad.append(Violation("iv", (u, v, "branch", w, min(hit))))
    edge_keys = sorted(paths)
    for a_pos, e in enumerate(edge_keys):
        pe = paths[e]
        if len(set(pe)) != len(pe):
            continue  # already reported as not-simple
        ends_e = {pe[0], pe[-1]}
        for f in edge_keys[a_pos + 1:]:
            pf = paths[f]
            if len(set(pf)) != len(pf):
                continue
            shared = set(pe) & set(pf)
            if shared and not (shared <= ends_e and shared <= {pf[0], pf[-1]}):
                bad.append(Violation("iv", e + f))
    bad.sort(key=lambda x: (_CLAUSE_RANK[x.clause], x.witness))
    return VerifyResult(not bad, tuple(bad))


def save_model(m: MinorModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"MODEL {m.target.n}\n")
        for u in sorted(m.branch_sets):
            verts = " ".join(str(v) for v in sorted(m.branch_sets[u]))
            fh.write(f"BRANCH {u}: {verts}\n")
        for e in sorted(m.edge_paths):
            p = " ".join(str(w) for w in m.edge_paths[e])
            fh.write(f"PATH {e[0]} {e[1]}: {p}\n")


def load_model(path: str, host: Graph, target: Graph) -> MinorModel:
    branch: dict[int, frozenset[int]] = {}
    paths: dict[tuple[int, int], tuple[int, ...]] = {}
    saw_header = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if not saw_header:
                parts = line.split()
                if len(parts) != 2 or parts[0] != "MODEL":
                    raise GraphFormatError(f"{path}:{lineno}: expected MODEL header")
                if int(parts[1]) != target.n:
                    raise GraphFormatError(
                        f"{path}:{lineno}: model is for {parts[1]} target vertices, "
                        f"not {target.n}")
                saw_header = True
                continue
            if ":" not in line:
                raise GraphFormatError(f"{path}:{lineno}: missing ':'")
            head, _, tail = line.partition(":")
            head_parts = head.split()
            try:
                values = [int(t) for t in tail.split()]
                if head_parts[0] == "BRANCH" and len(head_parts) == 2:
                    u = int(head_parts[1])
                    if u in branch:
                        raise GraphFormatError(f"{path}:{lineno}: duplicate BRANCH {u}")
                    branch[u] = frozenset(values)
                elif head_parts[0] == "PATH" and len(head_parts) == 3:
                    key = _norm_edge(int(head_parts[1]), int(head_parts[2]))
                    if key in paths:
                        raise GraphFormatError(f"{path}:{lineno}: duplicate PATH {key}")
                    paths[key] = tuple(values)
                else:
                    raise GraphFormatError(f"{path}:{lineno}: unknown record")
            except ValueError as exc:
                raise GraphFormatError(f"{path}:{lineno}: non-integer token") from exc
    if not saw_header:
        raise GraphFormatError(f"{path}: empty model file")
    return MinorModel(host, target, branch, paths)


# ---------------------------------------------------------------------------
# brute-force minor oracle


def _degree_sequence(n: int, edges: frozenset[tuple[int, int]]) -> list[int]:
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def _components_count(n: int, edges: frozenset[tuple[int, int]]) -> int:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return comps


def _is_isomorphic(n: int, e1: frozenset[tuple[int, int]],
                   e2: frozenset[tuple[int, int]]) -> bool:
    """Exact isomorphism for equal (n, m) graphs via degree-refined backtracking."""
    d1, d2 = _degree_sequence(n, e1), _degree_sequence(n, e2)
    if sorted(d1) != sorted(d2):
        return False
    adj1 = [0] * n
    adj2 = [0] * n
    for u, v in e1:
        adj1[u] |= 1 << v
        adj1[v] |= 1 << u
    for u, v in e2:
        adj2[u] |= 1 << v
        adj2[v] |= 1 << u
    order = sorted(range(n), key=lambda v: (-d1[v], v))
    mapping = [-1] * n
    used = 0

    def place(pos: int, used: int) -> bool:
        if pos == n:
            return True
        u = order[pos]
        for w in range(n):
            if used >> w & 1 or d2[w] != d1[u]:
                continue
            ok = True
            for prev_pos in range(pos):
                p = order[prev_pos]
                if (adj1[u] >> p & 1) != (adj2[w] >> mapping[p] & 1):
                    ok = False
                    break
            if ok:
                mapping[u] = w
                if place(pos + 1, used | 1 << w):
                    return True
                mapping[u] = -1
        return False

    return place(0, 0)


def _relabel(n: int, edges: Iterable[tuple[int, int]],
             drop: int | None = None,
             merge: tuple[int, int] | None = None) -> tuple[int, frozenset[tuple[int, int]]]:
    """Apply a vertex deletion or an edge contraction, then compact labels."""
    if drop is not None:
        keep = [v for v in range(n) if v != drop]
        new_id = {v: i for i, v in enumerate(keep)}
        out = {(min(new_id[u], new_id[v]), max(new_id[u], new_id[v]))
               for u, v in edges if u != drop and v != drop}
        return n - 1, frozenset(out)
    assert merge is not None
    a, b = merge
    new_id = {}
    nxt = 0
    for v in range(n):
        if v == b:
            continue
        new_id[v] = nxt
        nxt += 1
    new_id[b] = new_id[a]
    out = set()
    for u, v in edges:
        x, y = new_id[u], new_id[v]
        if x != y:
            out.add((min(x, y), max(x, y)))
    return n - 1, frozenset(out)


_ORACLE_BUDGET = 200_000


def brute_force_is_minor(g: Graph, h: Graph) -> bool:
    """True iff h is a minor of g, by exhaustive deletion/contraction search.

    Memoizes explored isomorphism classes (cheap-invariant buckets refined by
    exact isomorphism).  Limited to |V(g)| <= 10.
    """
    if g.n > 10:
        raise ValueError("oracle limited to hosts with n <= 10")
    if h.n + h.m > g.n + g.m:
        raise ValueError("target larger than host")
    if h.n == 0:
        return True
    he = frozenset(h.edge_list)
    h_comps = _components_count(h.n, he)
    seen: dict[tuple, list[tuple[int, frozenset]]] = {}
    budget = [_ORACLE_BUDGET]

    def bucket_key(n: int, edges: frozenset) -> tuple:
        deg = sorted(_degree_sequence(n, edges))
        return (n, len(edges), tuple(deg))

    def visit(n: int, edges: frozenset) -> bool:
        if n < h.n or len(edges) < h.m:
            return False
        if _components_count(n, edges) > h_comps:
            return False
        key = bucket_key(n, edges)
        for n2, e2 in seen.get(key, ()):
            if _is_isomorphic(n, edges, e2):
                return False
        seen.setdefault(key, []).append((n, edges))
        budget[0] -= 1
        if budget[0] < 0:
            raise OracleBudgetError("minor search exceeded its state budget")
        if n == h.n and len(edges) == h.m:
            if _is_isomorphic(n, edges, he):
                return True
        if n > h.n:
            for u, v in sorted(edges):  # contractions first: move toward h.n
                if visit(*_relabel(n, edges, merge=(u, v))):
                    return True
            for v in range(n):
                if visit(*_relabel(n, edges, drop=v)):
                    return True
        if len(edges) > h.m:
            for e in sorted(edges):
                if visit(n, edges - {e}):
                    return True
        return False

    return visit(g.n, frozenset(g.edge_list))
