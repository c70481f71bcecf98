"""Partition primitives: balanced integer split, spanning-tree grouping of
terminals, connected-cut repair, and post-deletion expander repair."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DisconnectedGraphError
from .graphs import (Cut, Graph, bfs_tree, connected_components, cut_of,
                     induced_subgraph, make_graph)
from .spectral import sweep_cut


def balanced_integer_partition(xs: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split indices of xs into two sides, each summing to >= N/4.

    Requires every item <= 3N/4 (N = total).  Greedy: sort descending, add
    each item to the lighter side, ties to the first side.
    """
    total = sum(xs)
    if total <= 0:
        raise ValueError("total weight must be positive")
    if any(x < 0 for x in xs):
        raise ValueError("weights must be nonnegative")
    worst = max(xs)
    if 4 * worst > 3 * total:
        raise ValueError(f"item {worst} exceeds 3/4 of total {total}")
    order = sorted(range(len(xs)), key=lambda i: (-xs[i], i))
    side_a: list[int] = []
    side_b: list[int] = []
    sum_a = sum_b = 0
    for i in order:
        if sum_a <= sum_b:
            side_a.append(i)
            sum_a += xs[i]
        else:
            side_b.append(i)
            sum_b += xs[i]
    assert 4 * sum_a >= total and 4 * sum_b >= total
    return tuple(sorted(side_a)), tuple(sorted(side_b))


@dataclass(frozen=True)
class Grouping:
    parts: tuple[tuple[int, ...], ...]
    terminals_per_part: tuple[int, ...]


def _rooted_tree(g: Graph, vertices: Sequence[int]) -> tuple[int, dict[int, list[int]]]:
    """BFS spanning tree of g restricted to `vertices`, re-rooted at the
    lowest-index tree leaf.  Returns (root, children lists, sorted)."""
    verts = sorted(vertices)
    parent = bfs_tree(g, verts[0], within=verts)
    if len(parent) != len(verts):
        raise DisconnectedGraphError("grouping requires a connected vertex set")
    tadj: dict[int, list[int]] = {v: [] for v in verts}
    for v, p in parent.items():
        if v != p:
            tadj[v].append(p)
            tadj[p].append(v)
    if len(verts) == 1:
        root = verts[0]
    else:
        root = min(v for v in verts if len(tadj[v]) == 1)
    children: dict[int, list[int]] = {v: [] for v in verts}
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in sorted(tadj[x]):
            if y not in seen:
                seen.add(y)
                children[x].append(y)
                queue.append(y)
    return root, children


def _postorder(root: int, children: dict[int, list[int]], removed: set[int]) -> list[int]:
    out: list[int] = []
    stack: list[tuple[int, bool]] = [(root, False)]
    while stack:
        v, expanded = stack.pop()
        if expanded:
            out.append(v)
            continue
        stack.append((v, True))
        for c in reversed(children[v]):
            if c not in removed:
                stack.append((c, False))
    return out


def _subtree(v: int, children: dict[int, list[int]], removed: set[int]) -> list[int]:
    out = []
    stack = [v]
    while stack:
        x = stack.pop()
        out.append(x)
        stack.extend(c for c in children[x] if c not in removed)
    return out


def _extract_parts(root: int, children: dict[int, list[int]],
                   terminals: set[int], thr: int) -> tuple[list[list[int]], list[int]]:
    """Repeatedly cut off the post-order-first subtree holding >= thr terminals."""
    removed: set[int] = set()
    parts: list[list[int]] = []
    while root not in removed:
        order = _postorder(root, children, removed)
        count: dict[int, int] = {}
        found = None
        for v in order:
            count[v] = (1 if v in terminals else 0) + sum(
                count[c] for c in children[v] if c not in removed)
            if count[v] >= thr:
                found = v
                break
        if found is None:
            break
        part = _subtree(found, children, removed)
        removed.update(part)
        parts.append(sorted(part))
    remainder = [v for v in _postorder(root, children, removed)] if root not in removed else []
    return parts, remainder


def _threshold_ladder(s: int, d: int, r: int) -> list[int]:
    """Candidate extraction thresholds, largest first.

    Starts near the balanced value s/r and descends geometrically to the
    guaranteed-feasible floor max(1, s // (d*r)); 1 is the last resort.
    """
    floor_thr = max(1, s // (d * r))
    cands: list[int] = []
    t = max(s // r, floor_thr)
    while t > floor_thr:
        cands.append(t)
        t = max(floor_thr, (t * 3) // 4)
    cands.append(floor_thr)
    if cands[-1] != 1:
        cands.append(1)
    return cands


def spanning_tree_grouping(g: Graph, r_terminals: Iterable[int], r: int) -> Grouping:
    """Group >= r disjoint connected parts around terminals; return the r best.

    Each part is a deleted subtree of a BFS spanning tree and contains at
    least max(1, |R| // (d*r)) terminals, where d is the max degree.  The
    extraction threshold starts higher than that floor and backs off, which
    keeps the parts balanced when terminals are plentiful.
    """
    terms = set(r_terminals)
    if r < 1:
        raise ValueError("r must be positive")
    if len(terms) < r:
        raise ValueError(f"need at least {r} terminals, got {len(terms)}")
    if not all(0 <= t < g.n for t in terms):
        raise ValueError("terminal out of range")
    root, children = _rooted_tree(g, range(g.n))
    d = max(1, g.max_degree)
    floor_thr = max(1, len(terms) // (d * r))
    for thr in _threshold_ladder(len(terms), d, r):
        parts, _ = _extract_parts(root, children, terms, thr)
        if len(parts) >= r:
            counts = [sum(1 for v in p if v in terms) for p in parts]
            chosen = sorted(range(len(parts)), key=lambda i: (-counts[i], i))[:r]
            chosen.sort()
            out_parts = tuple(tuple(parts[i]) for i in chosen)
            out_counts = tuple(counts[i] for i in chosen)
            assert all(c >= floor_thr for c in out_counts)
            return Grouping(out_parts, out_counts)
    raise ValueError(
        f"could not extract {r} parts holding >= {floor_thr} terminals each "
        f"from {len(terms)} terminals")


def connected_cut_repair(g: Graph, cut: Cut) -> Cut:
    """Migrate components across the cut until both sides induce connected
    subgraphs.  Sparsity never increases (exact rational comparison)."""
    side_a = set(cut.side_a)
    side_b = set(cut.side_b)
    if side_a & side_b or len(side_a) + len(side_b) != g.n:
        raise ValueError("cut sides must partition the vertex set")
    if not side_a or not side_b:
        raise ValueError("cut sides must be nonempty")
    comps_total = len(connected_components(g))
    if comps_total != 1:
        raise DisconnectedGraphError("repair requires a connected graph")

    def cross_count() -> int:
        return sum(1 for u, v in g.edges() if (u in side_a) != (v in side_a))

    for _ in range(2 * g.n + 2):
        comps_a = connected_components(g, side_a)
        comps_b = connected_components(g, side_b)
        if len(comps_a) == 1 and len(comps_b) == 1:
            break
        cross = cross_count()
        if len(side_a) <= len(side_b):
            small, big = side_a, side_b
            comps_small, comps_big = comps_a, comps_b
        else:
            small, big = side_b, side_a
            comps_small, comps_big = comps_b, comps_a
        if len(comps_small) > 1:
            # move a component C of the small side with |E(C,big)| >= rho*|C|
            src, dst, comps, denom = small, big, comps_small, len(small)
        else:
            src, dst, comps, denom = big, small, comps_big, len(big)
        moved = False
        for comp in comps:
            out_edges = sum(1 for v in comp for y in g.adj[v] if y in dst)
            # out_edges >= (cross/denom) * |comp|, cross-multiplied
            if out_edges * denom >= cross * len(comp):
                src.difference_update(comp)
                dst.update(comp)
                moved = True
                break
        if not moved:  # averaging over components makes this unreachable
            raise RuntimeError("component migration found no eligible component")
    else:
        raise RuntimeError("cut repair failed to terminate")
    return cut_of(g, sorted(side_a))


def expander_repair(g: Graph, alpha, deleted_edges: Iterable[tuple[int, int]]) -> tuple[Graph, tuple[int, ...]]:
    """Delete edges, then peel off sparse sides until a sweep cut certifies
    sparsity >= alpha/4 (or a single vertex remains).

    Returns (subgraph, original vertex ids).  When the input really is an
    alpha-expander the result keeps >= n - 4*|deleted|/alpha vertices.
    """
    alpha = Fraction(alpha)
    if g.n == 0:
        raise ValueError("empty graph")
    removed = set()
    for u, v in deleted_edges:
        if u > v:
            u, v = v, u
        if (u, v) not in g.edge_set:
            raise ValueError(f"deleted edge ({u},{v}) not in graph")
        removed.add((u, v))
    base = make_graph(g.n, [e for e in g.edges() if e not in removed])
    vertices = list(range(g.n))
    while True:
        sub, idx = induced_subgraph(base, vertices)
        inv = {new: old for old, new in idx.items()}
        if sub.n <= 1:
            return sub, tuple(vertices)
        comps = connected_components(sub)
        if len(comps) > 1:
            keep = max(comps, key=lambda c: (len(c), -min(c)))
            vertices = sorted(inv[v] for v in keep)
            continue
        cert = sweep_cut(sub)
        if cert.sparsity >= alpha / 4:
            return sub, tuple(vertices)
        keep_side = cert.side_a if len(cert.side_a) >= len(cert.side_b) else cert.side_b
        vertices = sorted(inv[v] for v in keep_side)
