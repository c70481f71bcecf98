"""Vertex-disjoint path selection from candidate groups.

Each of r groups holds q candidate paths; the selector picks one path per
group by resampling conflicting pairs until the picks are pairwise
vertex-disjoint.  Group families for minor embedding are routed here too.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from . import rng
from .errors import ResampleCapExceeded
from .flows import Paths, RoutingParams, SparseCut, route_matching
from .graphs import Graph, Matching

log = logging.getLogger(__name__)

# Minimum candidate paths per group that disjointness selection should see.
_CANDIDATE_TARGET = 8


def _pairwise_disjoint(paths: Sequence[Sequence[int]]) -> bool:
    seen: set[int] = set()
    total = 0
    for p in paths:
        seen.update(p)
        total += len(p)
    return len(seen) == total


def _excluded_bfs(g: Graph, u: int, v: int, blocked: set[int]) -> list[int] | None:
    """Shortest u-v path whose interior avoids `blocked`, or None."""
    if u == v:
        return [u]
    parent = {u: u}
    frontier = [u]
    while frontier:
        nxt: list[int] = []
        for x in frontier:
            for y in g.adj[x]:
                if y in parent or (y != v and y in blocked):
                    continue
                parent[y] = x
                if y == v:
                    path = [v]
                    while path[-1] != u:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                nxt.append(y)
        frontier = nxt
    return None


def _set_to_set_bfs(g: Graph, starts: Sequence[int], goals: Sequence[int],
                    blocked: set[int], prio: Mapping[int, float]
                    ) -> tuple[int, ...] | None:
    """Shortest path from any start to any goal avoiding `blocked`, at least
    one edge long; `prio` breaks ties so reruns can explore alternatives."""
    goal_set = {t for t in goals if t not in blocked}
    frontier = sorted((s for s in starts if s not in blocked),
                      key=lambda v: prio[v])
    if not frontier or not goal_set:
        return None
    parent = {s: s for s in frontier}
    while frontier:
        nxt: list[int] = []
        for x in frontier:
            if x in goal_set and parent[x] != x:
                path = [x]
                while parent[path[-1]] != path[-1]:
                    path.append(parent[path[-1]])
                return tuple(reversed(path))
            for y in sorted(g.adj[x], key=lambda v: prio[v]):
                if y in parent or y in blocked:
                    continue
                parent[y] = x
                nxt.append(y)
        frontier = sorted(nxt, key=lambda v: prio[v])
    return None


def route_flexible_disjoint(g: Graph,
                            slots: Sequence[tuple[Sequence[int], Sequence[int]]],
                            seed: int, hop_cap: int
                            ) -> tuple[tuple[int, ...], ...] | None:
    """Pairwise vertex-disjoint paths, one per slot, each running from some
    vertex of the slot's start set to some other vertex of its goal set.

    Rip-up-and-reroute: slots are routed in seeded random order by shortest
    search around everything already laid; a slot that cannot be routed rips
    up one blocking path and requeues it.  Returns None when the step budget
    runs out, so the caller can retry with a fresh seed.
    """
    gen = rng.stream(seed, 0x666C6578)
    prio = {v: float(x) for v, x in enumerate(gen.random(g.n))}
    routed: dict[int, tuple[int, ...]] = {}
    queue = deque(int(i) for i in gen.permutation(len(slots)))
    budget = 40 * max(1, len(slots))
    steps = 0
    while queue:
        steps += 1
        if steps > budget:
            return None
        i = queue.popleft()
        starts, goals = slots[i]
        blocked: set[int] = set()
        for j, p in routed.items():
            if j != i:
                blocked.update(p)
        path = _set_to_set_bfs(g, starts, goals, blocked, prio)
        if path is None:
            others = [j for j in routed if j != i]
            order = ([others[int(x)] for x in gen.permutation(len(others))]
                     if others else [])
            for j in order:
                blocked2: set[int] = set()
                for k, p in routed.items():
                    if k not in (i, j):
                        blocked2.update(p)
                path = _set_to_set_bfs(g, starts, goals, blocked2, prio)
                if path is not None:
                    del routed[j]
                    queue.append(j)
                    break
            if path is None:
                return None
        if len(path) - 1 > hop_cap:
            return None
        routed[i] = path
    paths = tuple(routed[i] for i in range(len(slots)))
    assert _pairwise_disjoint(paths)
    return paths


def _repair_round(g: Graph, pairs: Sequence[tuple[int, int]],
                  paths: Sequence[tuple[int, ...]], hop_cap: int
                  ) -> tuple[tuple[int, ...], ...] | None:
    """Reroute overlapping paths through vertices no other path touches.

    Each pass rebuilds one conflicted path by a shortest path that hard-avoids
    every vertex of every other path; repeats until the family is pairwise
    vertex-disjoint or no conflicted path can be rerouted.
    """
    work = [tuple(p) for p in paths]
    for _ in range(4 * max(1, len(work))):
        occ: dict[int, list[int]] = {}
        for i, p in enumerate(work):
            for x in p:
                occ.setdefault(x, []).append(i)
        bad = sorted({i for xs in occ.values() if len(xs) > 1 for i in xs})
        if not bad:
            return tuple(work)
        rerouted = False
        for i in bad:
            blocked: set[int] = set()
            for j, p in enumerate(work):
                if j != i:
                    blocked.update(p)
            u, v = pairs[i]
            if u in blocked or v in blocked:
                continue
            path = _excluded_bfs(g, u, v, blocked)
            if path is not None and len(path) - 1 <= hop_cap:
                work[i] = tuple(path)
                rerouted = True
                break
        if not rerouted:
            return None
    return None


@dataclass(frozen=True)
class PathGroups:
    groups: tuple[tuple[tuple[int, ...], ...], ...]
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be >= 1")
        for gi, group in enumerate(self.groups):
            if len(group) != self.q:
                raise ValueError(f"group {gi} has {len(group)} paths, expected q={self.q}")
            for p in group:
                if not p or len(set(p)) != len(p):
                    raise ValueError(f"group {gi} contains a non-simple or empty path")

    @cached_property
    def occupancy(self) -> dict[int, int]:
        """vertex -> number of candidate paths (across all groups) containing it."""
        occ: dict[int, int] = {}
        for group in self.groups:
            for p in group:
                for v in p:
                    occ[v] = occ.get(v, 0) + 1
        return occ


def _vertex_sets(pg: PathGroups) -> list[list[frozenset[int]]]:
    return [[frozenset(p) for p in group] for group in pg.groups]


def lll_select_disjoint(pg: PathGroups, seed: int,
                        resample_cap: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Pick one path per group so the picks are pairwise vertex-disjoint.

    Moser–Tardos style: start from independent uniform picks, repeatedly
    resample the lowest-indexed intersecting pair.  The expected resample
    count is linear when e*p*(D+1) <= 1 with p = 1/q^2 and
    D = 2*q*L_max*eta_max; outside that regime a warning is logged and the
    loop still runs up to the cap.
    """
    r = len(pg.groups)
    if r == 0:
        return ()
    q = pg.q
    cap = resample_cap if resample_cap is not None else 1000 * r * q
    l_max = max(len(p) for group in pg.groups for p in group)
    eta_max = max(pg.occupancy.values())
    p_bad = 1.0 / (q * q)
    degree = 2 * q * l_max * eta_max
    if math.e * p_bad * (degree + 1) > 1.0:
        log.warning(
            "disjointness condition e*p*(D+1) = %.3f > 1 (q=%d, L_max=%d, eta_max=%d); "
            "selection may need many resamples", math.e * p_bad * (degree + 1),
            q, l_max, eta_max)
    sets = _vertex_sets(pg)
    gen = rng.stream(seed, 0x6C6C6C)
    choice = [int(gen.integers(q)) for _ in range(r)]
    events = 0
    while True:
        conflict = None
        for i in range(r):
            si = sets[i][choice[i]]
            for j in range(i + 1, r):
                if si & sets[j][choice[j]]:
                    conflict = (i, j)
                    break
            if conflict:
                break
        if conflict is None:
            break
        if q == 1:
            raise ResampleCapExceeded(
                "groups intersect and q = 1 leaves nothing to resample", events + 1, cap)
        i, j = conflict
        choice[i] = int(gen.integers(q))
        choice[j] = int(gen.integers(q))
        events += 1
        if events > cap:
            raise ResampleCapExceeded(
                f"resample count exceeded cap {cap}", events, cap)
    picked = tuple(pg.groups[i][choice[i]] for i in range(r))
    for i in range(len(picked)):
        for j in range(i + 1, len(picked)):
            assert not (set(picked[i]) & set(picked[j])), "post-check: picks intersect"
    return picked


def route_group_family(g: Graph, params: RoutingParams,
                       family: Sequence[Sequence[int]], seed: int,
                       q_constant: int = 1, mode: str = "spread"):
    """Route q paths between block C_j and block C_{j+r} for each j < r, then
    select one pairwise vertex-disjoint path per group.

    family = (C_0..C_{r-1}, C_r..C_{2r-1}): 2r pairwise-disjoint vertex blocks
    of equal size q.  Pair k of group j connects the k-th smallest vertex of
    C_j to the k-th smallest of C_{j+r}.  Returns Paths(r disjoint paths) on
    success or passes through a SparseCut from the underlying routing.
    """
    blocks = [tuple(sorted(b)) for b in family]
    if len(blocks) < 2 or len(blocks) % 2 != 0:
        raise ValueError("family must contain an even number (>= 2) of blocks")
    r = len(blocks) // 2
    q = len(blocks[0])
    if q < 1:
        raise ValueError("blocks must be nonempty")
    seen: set[int] = set()
    for b in blocks:
        if len(b) != q:
            raise ValueError("all blocks must have equal size")
        for v in b:
            if not (0 <= v < g.n):
                raise ValueError(f"block vertex {v} out of range")
            if v in seen:
                raise ValueError(f"vertex {v} appears in two blocks")
            seen.add(v)
    log2n = math.log2(max(2, g.n))
    q_floor = math.ceil(q_constant * params.d ** 2 * log2n ** 2 / float(params.alpha) ** 2)
    if q < q_floor:
        log.warning("group width q=%d below guideline %d; success probability degrades",
                    q, q_floor)
    pairs = []
    for j in range(r):
        a, b = blocks[j], blocks[j + r]
        pairs.extend((a[k], b[k]) for k in range(q))
    # Thin groups leave the disjointness selection no room to resample, so
    # top the width up to _CANDIDATE_TARGET with independently seeded routing
    # rounds; every candidate still connects the same block pair.
    rounds = max(1, math.ceil(_CANDIDATE_TARGET / q))
    per_round: list[tuple[tuple[int, ...], ...]] = []
    for rd in range(rounds):
        routed = route_matching(g, params, Matching(tuple(pairs)),
                                rng.derive(seed, 1, rd), mode=mode)
        if isinstance(routed, SparseCut):
            return routed
        assert isinstance(routed, Paths)
        if q == 1:
            # A fully disjoint round is a valid one-per-group selection, and
            # an almost-disjoint one often becomes valid after rerouting the
            # colliding paths around everything else.
            if _pairwise_disjoint(routed.paths):
                return Paths(routed.paths)
            repaired = _repair_round(g, pairs, routed.paths, 2 * params.L)
            if repaired is not None:
                return Paths(repaired)
        per_round.append(routed.paths)
    width = q * rounds
    groups = tuple(
        tuple(rnd[j * q + k] for rnd in per_round for k in range(q))
        for j in range(r))
    pg = PathGroups(groups, width)
    cap = None if rounds == 1 else 50 * r * width
    selected = lll_select_disjoint(pg, rng.derive(seed, 2), resample_cap=cap)
    return Paths(selected)
