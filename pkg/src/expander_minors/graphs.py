"""Core graph value type, file I/O, cuts, and matchings.

Graphs are simple and undirected, with vertices numbered 0..n-1 and sorted
adjacency tuples.  Cut sparsity is always an exact `fractions.Fraction`:
|E(A,B)| / min(|A|,|B|).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import GraphFormatError


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[tuple[int, ...], ...]

    @cached_property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    @cached_property
    def edge_list(self) -> tuple[tuple[int, int], ...]:
        """All edges as (u, v) with u < v, sorted."""
        return tuple((u, v) for u in range(self.n) for v in self.adj[u] if u < v)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edge_list)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edge_set

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def edges(self) -> Iterator[tuple[int, int]]:
        return iter(self.edge_list)


def make_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a Graph, validating simplicity and vertex range."""
    if n < 0:
        raise GraphFormatError("vertex count must be nonnegative")
    seen: set[tuple[int, int]] = set()
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}")
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            raise GraphFormatError(f"duplicate edge ({u},{v})")
        seen.add((u, v))
        adj[u].append(v)
        adj[v].append(u)
    return Graph(n, tuple(tuple(sorted(a)) for a in adj))


def load_graph(path: str) -> Graph:
    """Read an edge-list file: header line "n m", then one "u v" line per edge.

    '#' starts a comment; blank lines are skipped.  Edges must satisfy
    0 <= u < v < n, with no duplicates.
    """
    rows: list[tuple[int, int]] = []
    header: tuple[int, int] | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError(f"{path}:{lineno}: expected two integers")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise GraphFormatError(f"{path}:{lineno}: non-integer token") from exc
            if header is None:
                header = (a, b)
                continue
            if not a < b:
                raise GraphFormatError(
                    f"{path}:{lineno}: edge endpoints must satisfy u < v")
            rows.append((a, b))
    if header is None:
        raise GraphFormatError(f"{path}: missing header line")
    n, m = header
    if len(rows) != m:
        raise GraphFormatError(
            f"{path}: header promises {m} edges, found {len(rows)}")
    return make_graph(n, rows)


def save_graph(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph plus the old->new index map."""
    keep = sorted(set(vertices))
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[u], index[v]) for u, v in g.edges()
             if u in index and v in index]
    return make_graph(len(keep), edges), index


@dataclass(frozen=True)
class Cut:
    side_a: tuple[int, ...]
    side_b: tuple[int, ...]
    crossing_edges: tuple[tuple[int, int], ...]
    sparsity: Fraction


def cut_of(g: Graph, side: Iterable[int]) -> Cut:
    """The cut (side, complement) with its exact sparsity."""
    a = sorted(set(side))
    in_a = [False] * g.n
    for v in a:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
        in_a[v] = True
    b = [v for v in range(g.n) if not in_a[v]]
    if not a or not b:
        raise ValueError("cut sides must both be nonempty")
    crossing = tuple((u, v) for u, v in g.edges() if in_a[u] != in_a[v])
    spars = Fraction(len(crossing), min(len(a), len(b)))
    return Cut(tuple(a), tuple(b), crossing, spars)


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)


def greedy_matching_across(g: Graph, side_1: Iterable[int], side_2: Iterable[int]) -> Matching:
    """Maximum matching on the edges crossing between two disjoint vertex sets.

    Pairs come back as (u, v) with u in side_1, sorted by u.  Starts greedy,
    then augments, so the size is the true bipartite maximum (in particular
    at least |E(side_1, side_2)| / (2 * max_degree)).
    """
    s1 = sorted(set(side_1))
    s2set = set(side_2)
    if s2set & set(s1):
        raise ValueError("sides must be disjoint")
    mate1: dict[int, int] = {}
    mate2: dict[int, int] = {}
    for u in s1:
        for v in g.adj[u]:
            if v in s2set and v not in mate2:
                mate1[u] = v
                mate2[v] = u
                break
    # Kuhn augmentation from unmatched side-1 vertices.
    for u in s1:
        if u in mate1:
            continue
        seen: set[int] = set()

        def try_augment(x: int) -> bool:
            for y in g.adj[x]:
                if y not in s2set or y in seen:
                    continue
                seen.add(y)
                if y not in mate2 or try_augment(mate2[y]):
                    mate1[x] = y
                    mate2[y] = x
                    return True
            return False

        try_augment(u)
    return Matching(tuple((u, mate1[u]) for u in s1 if u in mate1))


def connected_components(g: Graph, within: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components (sorted vertex lists, ordered by smallest member)."""
    pool = set(range(g.n)) if within is None else set(within)
    comps: list[list[int]] = []
    while pool:
        start = min(pool)
        comp = {start}
        queue = deque([start])
        pool.discard(start)
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if y in pool:
                    pool.discard(y)
                    comp.add(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph, within: Iterable[int] | None = None) -> bool:
    if g.n == 0:
        return True
    if within is not None:
        within = list(within)
        if not within:
            return True
    return len(connected_components(g, within)) == 1


def bfs_distances(g: Graph, source: int, within: Iterable[int] | None = None) -> dict[int, int]:
    """Hop distances from source, restricted to `within` if given."""
    allowed = None if within is None else set(within)
    if allowed is not None and source not in allowed:
        raise ValueError("source not in restriction set")
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if y in dist or (allowed is not None and y not in allowed):
                continue
            dist[y] = dist[x] + 1
            queue.append(y)
    return dist


def bfs_tree(g: Graph, root: int, within: Iterable[int] | None = None) -> dict[int, int]:
    """BFS parent map (root maps to itself), restricted to `within` if given."""
    allowed = None if within is None else set(within)
    if allowed is not None and root not in allowed:
        raise ValueError("root not in restriction set")
    parent = {root: root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if y in parent or (allowed is not None and y not in allowed):
                continue
            parent[y] = x
            queue.append(y)
    return parent


def path_between(g: Graph, u: int, v: int, within: Iterable[int] | None = None) -> list[int]:
    """Some shortest u-v path (deterministic), or raise if unreachable."""
    parent = bfs_tree(g, u, within)
    if v not in parent:
        raise ValueError(f"no path from {u} to {v}")
    out = [v]
    while out[-1] != u:
        out.append(parent[out[-1]])
    out.reverse()
    return out


def is_simple_path(g: Graph, path: Sequence[int]) -> bool:
    """True when `path` is a simple path along edges of g."""
    if len(path) == 0:
        return False
    if len(set(path)) != len(path):
        return False
    return all(g.has_edge(path[i], path[i + 1]) for i in range(len(path) - 1))
