"""Hop-bounded uniform multicommodity flow, region-growing partitions,
low-diameter cores, layered sparse cuts, and low-congestion matching routing.

Node addressing for the subdivided graph G+: original vertices keep their
integer ids; subdivision vertices are ("s", edge_index, position) tuples.
"""
from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import rng
from .errors import CongestionExceeded, DisconnectedGraphError, RoutingError
from .graphs import Cut, Graph, Matching, bfs_distances, bfs_tree, cut_of, is_connected
from .partition import balanced_integer_partition
from .spectral import sweep_cut

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RoutingParams:
    alpha: Fraction
    d: int
    n: int
    L: int
    W_star: float
    eta: int
    eps: float = 0.1
    c_eta: int = 128


def routing_params(alpha, d: int, n: int, eps: float = 0.1, c_eta: int = 128) -> RoutingParams:
    """Derive (L, W_star, eta) from (alpha, d, n).

    L = ceil(64*d*log2(n)/alpha), W_star = alpha/(64*n*log2(n)),
    eta = ceil(c_eta*d*log2(n)/alpha).
    """
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if n < 2:
        raise ValueError("need n >= 2")
    if d < 1:
        raise ValueError("need d >= 1")
    log2n = math.log2(n)
    a = float(alpha)
    L = max(1, math.ceil(64.0 * d * log2n / a))
    w_star = a / (64.0 * n * log2n)
    eta = max(1, math.ceil(c_eta * d * log2n / a))
    return RoutingParams(alpha, d, n, L, w_star, eta, eps, c_eta)


@dataclass(frozen=True)
class FlowSolution:
    flow_paths: tuple[tuple[tuple[int, ...], float], ...]
    per_pair_demand: float


@dataclass(frozen=True)
class LengthAssignment:
    lengths: Mapping[tuple[int, int], float]

    @property
    def total_weight(self) -> float:
        return sum(self.lengths.values())


@dataclass(frozen=True)
class Flow:
    solution: FlowSolution


@dataclass(frozen=True)
class Dual:
    lengths: LengthAssignment


@dataclass(frozen=True)
class Core:
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class SparseCut:
    cut: Cut


@dataclass(frozen=True)
class Paths:
    paths: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class InfeasibleEvidence:
    distance_sum: float
    threshold: float
    reason: str


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _check_lengths(g: Graph, la: LengthAssignment) -> dict[tuple[int, int], float]:
    lengths = {}
    for e in g.edges():
        val = la.lengths.get(e)
        if val is None:
            raise ValueError(f"missing length for edge {e}")
        if val < 0:
            raise ValueError(f"negative length on edge {e}")
        lengths[e] = float(val)
    return lengths


# ---------------------------------------------------------------------------
# hop-bounded shortest paths (dynamic program over hop layers)


def hop_limited_distances(g: Graph, sources: Sequence[int], hop_cap: int,
                          lengths: Mapping[tuple[int, int], float] | None = None) -> list[float]:
    """D^{<=hop_cap}(v, sources) for every vertex v; unreachable = inf."""
    dist = [math.inf] * g.n
    for s in sources:
        dist[s] = 0.0
    for _ in range(hop_cap):
        nxt = dist[:]
        changed = False
        for u, v in g.edges():
            w = 1.0 if lengths is None else lengths[(u, v)]
            if dist[u] + w < nxt[v]:
                nxt[v] = dist[u] + w
                changed = True
            if dist[v] + w < nxt[u]:
                nxt[u] = dist[v] + w
                changed = True
        dist = nxt
        if not changed:
            break
    return dist


def _hop_layers(g: Graph, src: int, hop_cap: int,
                lengths: Mapping[tuple[int, int], float]) -> list[list[float]]:
    layers = [[math.inf] * g.n]
    layers[0][src] = 0.0
    for _ in range(hop_cap):
        prev = layers[-1]
        cur = prev[:]
        for v in range(g.n):
            for u in g.adj[v]:
                cand = prev[u] + lengths[_norm(u, v)]
                if cand < cur[v]:
                    cur[v] = cand
        layers.append(cur)
        if cur == prev:
            break
    return layers


def _hop_shortest_path(g: Graph, src: int, dst: int, hop_cap: int,
                       lengths: Mapping[tuple[int, int], float]) -> tuple[int, ...] | None:
    """Min-length src->dst path of <= hop_cap edges; None if unreachable.

    Backtracking relies on stored layer values being exact sums, so float
    equality against the recomputed candidate is safe.
    """
    layers = _hop_layers(g, src, hop_cap, lengths)
    if not math.isfinite(layers[-1][dst]):
        return None
    path = [dst]
    v = dst
    h = len(layers) - 1
    while v != src:
        if h == 0:
            raise RoutingError("hop-path backtrack hit layer 0 away from source")
        if layers[h - 1][v] == layers[h][v]:
            h -= 1
            continue
        target = layers[h][v]
        step = None
        for u in g.adj[v]:
            if layers[h - 1][u] + lengths[_norm(u, v)] == target:
                step = u
                break
        if step is None:
            raise RoutingError("hop-path backtrack found no predecessor")
        path.append(step)
        v = step
        h -= 1
    path.reverse()
    return tuple(path)


# ---------------------------------------------------------------------------
# uniform multicommodity flow


def solve_uniform_mcf(g: Graph, params: RoutingParams, eps: float = 0.1,
                      demand: float | None = None):
    """Route `demand` (default W_star) between every vertex pair, or certify
    that no such routing exists via a feasible dual length assignment.

    Fast path: one BFS path per pair; accepted when the resulting edge
    congestion is <= 1.  Otherwise a multiplicative-weights loop takes over.
    The `demand` override exists so tests can force the slow branches.
    """
    if eps <= 0 or eps >= 1:
        raise ValueError("eps must be in (0,1)")
    if g.n < 2:
        return Flow(FlowSolution((), params.W_star if demand is None else demand))
    if not is_connected(g):
        raise DisconnectedGraphError("flow requires a connected graph")
    target = params.W_star if demand is None else float(demand)
    pairs = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)]
    hop_cap = min(params.L, g.n - 1)

    bfs_paths: dict[tuple[int, int], tuple[int, ...]] = {}
    reachable = True
    for u in range(g.n):
        parent = bfs_tree(g, u)
        dist = bfs_distances(g, u)
        for v in range(u + 1, g.n):
            if dist.get(v, math.inf) > hop_cap:
                reachable = False
                break
            walk = [v]
            while walk[-1] != u:
                walk.append(parent[walk[-1]])
            walk.reverse()
            bfs_paths[(u, v)] = tuple(walk)
        if not reachable:
            break
    if reachable:
        load: dict[tuple[int, int], int] = defaultdict(int)
        for p in bfs_paths.values():
            for i in range(len(p) - 1):
                load[_norm(p[i], p[i + 1])] += 1
        if not load or max(load.values()) * target <= 1.0 + 1e-12:
            flow_paths = tuple((bfs_paths[pr], target) for pr in pairs)
            return Flow(FlowSolution(flow_paths, target))
    return _mwu_mcf(g, pairs, target, hop_cap, eps)


def _mwu_mcf(g: Graph, pairs: Sequence[tuple[int, int]], demand: float,
             hop_cap: int, eps: float):
    """Garg–Könemann style packing with per-phase primal/dual checks."""
    m = g.m
    eps_gk = eps / 3.0
    delta = (1 + eps_gk) * ((1 + eps_gk) * m) ** (-1.0 / eps_gk)
    w = {e: delta for e in g.edges()}
    routed: dict[tuple[tuple[int, int], tuple[int, ...]], float] = defaultdict(float)
    iter_cap = max(200, int(20.0 * m * max(1.0, math.log(m)) / (eps * eps)))
    iters = 0
    phases = 0
    while sum(w.values()) < 1.0:
        # dual certificate check with the current lengths
        dist_sum = 0.0
        for u, v in pairs:
            layers = _hop_layers(g, u, hop_cap, w)
            dist_sum += layers[-1][v]
            if not math.isfinite(dist_sum):
                break
        total_w = sum(w.values())
        if math.isfinite(dist_sum) and dist_sum > 0 and total_w / dist_sum < demand:
            scale = 1.0 / dist_sum
            lengths = LengthAssignment({e: w[e] * scale for e in g.edges()})
            return Dual(lengths)
        for u, v in pairs:
            p = _hop_shortest_path(g, u, v, hop_cap, w)
            if p is None:
                raise RoutingError(f"pair ({u},{v}) unreachable within {hop_cap} hops")
            routed[((u, v), p)] += demand
            for i in range(len(p) - 1):
                w[_norm(p[i], p[i + 1])] *= (1 + eps_gk * demand)
            iters += 1
            if iters > iter_cap:
                raise RoutingError(
                    f"multiplicative-weights loop exceeded {iter_cap} iterations")
        phases += 1
        # primal check: scale accumulated paths to unit congestion
        outcome = _scaled_primal(g, pairs, routed, demand, eps)
        if outcome is not None:
            return outcome
    outcome = _scaled_primal(g, pairs, routed, demand, eps)
    if outcome is not None:
        return outcome
    raise RoutingError("flow loop terminated without a certified primal or dual")


def _scaled_primal(g: Graph, pairs, routed, demand: float, eps: float):
    if not routed:
        return None
    load: dict[tuple[int, int], float] = defaultdict(float)
    sent: dict[tuple[int, int], float] = defaultdict(float)
    for (pair, p), val in routed.items():
        sent[pair] += val
        for i in range(len(p) - 1):
            load[_norm(p[i], p[i + 1])] += val
    max_load = max(load.values()) if load else 0.0
    scale = 1.0 / max(1.0, max_load)
    if all(sent[pr] * scale >= (1 - eps) * demand - 1e-15 for pr in pairs):
        flow_paths = tuple(
            (p, val * scale)
            for (pair, p), val in sorted(routed.items())
            if val * scale > 1e-12)
        return Flow(FlowSolution(flow_paths, demand))
    return None


# ---------------------------------------------------------------------------
# subdivided graph and region growing

SubNode = "int | tuple"


def subdivided_graph(g: Graph, lengths: Mapping[tuple[int, int], float],
                     total: float) -> dict:
    """Adjacency of G+: edge e split into max(1, ceil(m*l(e)/W)) unit pieces."""
    adj: dict = {v: [] for v in range(g.n)}
    m = g.m
    for k, (u, v) in enumerate(g.edge_list):
        pieces = max(1, math.ceil(m * lengths[(u, v)] / total)) if total > 0 else 1
        if pieces == 1:
            adj[u].append(v)
            adj[v].append(u)
            continue
        prev = u
        for pos in range(1, pieces):
            node = ("s", k, pos)
            adj[node] = []
            adj[prev].append(node)
            adj[node].append(prev)
            prev = node
        adj[prev].append(v)
        adj[v].append(prev)
    return adj


def _grow_ball(adj: dict, seed_node, unassigned: set, eps_rg: float,
               base: float) -> set:
    """Grow a ball until the guarded volume stops multiplying by (1+eps)."""
    ball = {seed_node}
    inner_edges = 0
    c_prev = base
    while True:
        frontier = sorted(
            {y for x in ball for y in adj[x] if y in unassigned and y not in ball},
            key=str)
        if not frontier:
            return ball
        added_edges = 0
        staged = set(ball)
        for y in frontier:
            added_edges += sum(1 for z in adj[y] if z in staged)
            staged.add(y)
        c_next = base + inner_edges + added_edges
        if c_next < (1 + eps_rg) * c_prev:
            return ball
        ball = staged
        inner_edges += added_edges
        c_prev = c_next


def _region_grow(g: Graph, delta: float, la: LengthAssignment):
    """Returns (components, balls): balls are G+ node sets, components their
    original-vertex parts."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    lengths = _check_lengths(g, la)
    n, m = g.n, g.m
    if n == 0:
        return [], []
    total = sum(lengths.values())
    if total == 0:
        comps = [tuple(c) for c in _graph_components(g)]
        return comps, [set(c) for c in comps]
    if n >= 2 and delta < 8.0 * total * math.log2(n) / m:
        return [tuple([v]) for v in range(n)], [{v} for v in range(n)]
    eps_rg = 2.0 * total * math.log(n) / (delta * m) if n >= 2 else 0.0
    if eps_rg <= 0:
        return [tuple(range(n))], [set(range(n))]
    adj = subdivided_graph(g, lengths, total)
    unassigned = set(adj.keys())
    comps: list[tuple[int, ...]] = []
    balls: list[set] = []
    base = 2.0 * m / n
    while True:
        seeds = [x for x in unassigned if isinstance(x, int)]
        if not seeds:
            break
        ball = _grow_ball(adj, min(seeds), unassigned, eps_rg, base)
        comps.append(tuple(sorted(x for x in ball if isinstance(x, int))))
        balls.append(ball)
        unassigned -= ball
    return comps, balls


def _graph_components(g: Graph) -> list[list[int]]:
    from .graphs import connected_components
    return connected_components(g)


def region_grow_partition(g: Graph, delta: float, lengths: LengthAssignment) -> list[tuple[int, ...]]:
    """Partition V into connected components of bounded hop-and-length radius.

    Zero total weight returns the graph's connected components; delta below
    the degenerate threshold 8*W*log2(n)/m returns singletons.  Otherwise
    balls are grown on the subdivided graph and the total number of edges
    between different components stays below 8*W*log2(n)/delta.
    """
    comps, _ = _region_grow(g, delta, lengths)
    return comps


def low_diameter_core(g: Graph, alpha, lengths: LengthAssignment):
    """Either a core T (|T| >= 2n/3, small hop-bounded diameter) or a cut of
    sparsity < alpha.  Requires W(l) <= alpha/(64*n*log2(n))."""
    alpha = Fraction(alpha)
    n = g.n
    if n == 0:
        raise ValueError("empty graph")
    if n == 1:
        return Core((0,))
    total = sum(_check_lengths(g, lengths).values())
    bound = float(alpha) / (64.0 * n * math.log2(n))
    if total > bound * (1 + 1e-9):
        raise ValueError(f"total weight {total} exceeds alpha/(64 n log2 n) = {bound}")
    delta = 1.0 / (2.0 * n * n)
    comps = region_grow_partition(g, delta, lengths)
    need = math.ceil(2 * n / 3)
    for comp in comps:
        if len(comp) >= need:
            return Core(comp)
    sizes = [len(c) for c in comps]
    side_a_idx, _ = balanced_integer_partition(sizes)
    side = sorted(v for i in side_a_idx for v in comps[i])
    cut = cut_of(g, side)
    if not cut.sparsity < alpha:
        raise RoutingError(
            f"region partition produced sparsity {cut.sparsity}, not below {alpha}")
    return SparseCut(cut)


def layered_cut(g: Graph, alpha, lengths: LengthAssignment, hop_limit: int,
                t_core: Sequence[int]):
    """Grow layers around the core on G+ until some layer certifies a cut of
    sparsity < alpha; if the distance-sum precondition fails, return the
    measured evidence instead."""
    alpha = Fraction(alpha)
    n = g.n
    core = set(t_core)
    if not core or any(not (0 <= v < n) for v in core):
        raise ValueError("t_core must be a nonempty subset of V")
    if len(core) < math.ceil(2 * n / 3):
        raise ValueError("t_core smaller than 2n/3")
    if hop_limit < 1:
        raise ValueError("hop limit must be >= 1")
    d = max(1, g.max_degree)
    if n >= 2 and hop_limit < 2.0 * d * math.log(n) / float(alpha):
        raise ValueError("hop limit below 2*d*ln(n)/alpha")
    lmap = _check_lengths(g, lengths)
    total = sum(lmap.values())
    dist = hop_limited_distances(g, sorted(core), hop_limit, lmap)
    dist_sum = sum(dist)
    threshold = 4.0 * total / float(alpha)
    if not dist_sum > threshold:
        return InfeasibleEvidence(dist_sum, threshold, "distance-sum")
    adj = subdivided_graph(g, lmap, total) if total > 0 else subdivided_graph(g, lmap, 0.0)
    grown = set(core)
    node_count = len(adj)
    for _ in range(node_count + 2):
        boundary_edges = [(x, y) for x in grown for y in adj[x] if y not in grown]
        c_i = len(boundary_edges)
        outside = n - sum(1 for x in grown if isinstance(x, int))
        if outside == 0:
            return InfeasibleEvidence(dist_sum, threshold, "exhausted")
        if Fraction(c_i) < alpha * outside:
            side = sorted(x for x in grown if isinstance(x, int))
            cut = cut_of(g, side)
            if not cut.sparsity < alpha:
                raise RoutingError("layer stop did not certify a sparse cut")
            return cut
        to_original = sum(1 for _, y in boundary_edges if isinstance(y, int))
        if 2 * to_original >= c_i:
            grown.update(y for _, y in boundary_edges)
        else:
            grown.update(y for _, y in boundary_edges if not isinstance(y, int))
    raise RoutingError("layer growth failed to terminate")


# ---------------------------------------------------------------------------
# matching routing


def _spread_paths(g: Graph, pairs: Sequence[tuple[int, int]], gen) -> list[tuple[int, ...]]:
    """Route pairs sequentially (random order), each along a min-cost path
    where touching an already-used vertex — or any other pair's endpoint —
    costs a heavy penalty.  Keeps the family nearly vertex-disjoint whenever
    capacity allows, which is what downstream disjoint selection needs."""
    import heapq

    penalty = 64.0
    pot = gen.random(g.n)  # per-call jitter so repeated calls diversify
    uses: dict[int, float] = defaultdict(float)
    for u, v in pairs:
        uses[u] += 1.0
        uses[v] += 1.0
    order = [int(i) for i in gen.permutation(len(pairs))]
    chosen: list[tuple[int, ...] | None] = [None] * len(pairs)
    for idx in order:
        u, v = pairs[idx]
        free = {u, v}
        dist = {u: 0.0}
        parent: dict[int, int] = {}
        pq = [(0.0, u)]
        done: set[int] = set()
        while pq:
            c, x = heapq.heappop(pq)
            if x in done:
                continue
            done.add(x)
            if x == v:
                break
            for y in g.adj[x]:
                load = 0.0 if y in free else uses[y]
                nc = c + 1.0 + penalty * load + 0.25 * float(pot[y])
                if nc < dist.get(y, math.inf) - 1e-12:
                    dist[y] = nc
                    parent[y] = x
                    heapq.heappush(pq, (nc, y))
        if v not in done:
            raise RoutingError(f"pair ({u},{v}) disconnected")
        path = [v]
        while path[-1] != u:
            path.append(parent[path[-1]])
        path.reverse()
        for x in path:
            uses[x] += 1.0
        chosen[idx] = tuple(path)
    return [p for p in chosen if p is not None]


def _sample_shortest(g: Graph, u: int, v: int, gen) -> tuple[int, ...]:
    """Random shortest u-v path: walk the BFS DAG backwards, picking each
    predecessor uniformly."""
    dist = bfs_distances(g, u)
    if v not in dist:
        raise RoutingError(f"pair ({u},{v}) disconnected")
    path = [v]
    x = v
    while x != u:
        preds = [y for y in g.adj[x] if dist.get(y, -1) == dist[x] - 1]
        x = preds[int(gen.integers(len(preds)))] if len(preds) > 1 else preds[0]
        path.append(x)
    path.reverse()
    return tuple(path)


def _loop_erase(walk: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    pos: dict[int, int] = {}
    for v in walk:
        if v in pos:
            del_from = pos[v] + 1
            for w in out[del_from:]:
                del pos[w]
            out = out[:del_from]
        else:
            pos[v] = len(out)
            out.append(v)
    return tuple(out)


def _sample_concatenated(g: Graph, u: int, v: int, gen,
                         pair_paths: Mapping[tuple[int, int], list[tuple[tuple[int, ...], float]]]) -> tuple[int, ...]:
    """Pick an intermediate w with probability proportional to
    flow(u,w)*flow(w,v), concatenate the two flow paths, and loop-erase."""

    def total(a: int, b: int) -> float:
        if a == b:
            return 0.0
        return sum(val for _, val in pair_paths.get(_norm(a, b), ()))

    weights = [(w, total(u, w) * total(w, v)) for w in range(g.n) if w not in (u, v)]
    mass = sum(x for _, x in weights)
    if mass <= 0:
        choices = pair_paths.get(_norm(u, v), ())
        if not choices:
            raise RoutingError(f"no flow paths available for pair ({u},{v})")
        return _oriented(choices[0][0], u)
    roll = gen.random() * mass
    pick = weights[-1][0]
    acc = 0.0
    for w, x in weights:
        acc += x
        if roll <= acc:
            pick = w
            break
    first = _pick_flow_path(pair_paths[_norm(u, pick)], gen)
    second = _pick_flow_path(pair_paths[_norm(pick, v)], gen)
    walk = list(_oriented(first, u)) + list(_oriented(second, pick))[1:]
    return _loop_erase(walk)


def _oriented(path: tuple[int, ...], start: int) -> tuple[int, ...]:
    return path if path[0] == start else tuple(reversed(path))


def _pick_flow_path(choices: list[tuple[tuple[int, ...], float]], gen) -> tuple[int, ...]:
    if len(choices) == 1:
        return choices[0][0]
    mass = sum(val for _, val in choices)
    roll = gen.random() * mass
    acc = 0.0
    for p, val in choices:
        acc += val
        if roll <= acc:
            return p
    return choices[-1][0]


def dual_to_cut(g: Graph, params: RoutingParams, la: LengthAssignment) -> Cut:
    """Convert a feasible dual (W < W*) into a cut of sparsity < alpha via the
    low-diameter core and, if needed, layered growth."""
    alpha = params.alpha
    total = la.total_weight
    if total <= 0:
        raise RoutingError("dual with zero total weight cannot be converted")
    scale = params.W_star / total
    scaled = LengthAssignment({e: v * scale for e, v in la.lengths.items()})
    out = low_diameter_core(g, alpha, scaled)
    if isinstance(out, SparseCut):
        return out.cut
    core = out.vertices
    hop = max(1, math.ceil(params.L / 4))
    lmap = _check_lengths(g, scaled)
    dist = hop_limited_distances(g, sorted(core), hop, lmap)
    dist_sum = sum(dist)
    threshold = 4.0 * params.W_star / float(alpha)
    if dist_sum > threshold:
        res = layered_cut(g, alpha, scaled, hop, core)
        if isinstance(res, Cut):
            return res
        raise RoutingError("layered growth contradicted its distance-sum precheck")
    raise RoutingError(
        "dual certificate does not separate: core distances too small")


def route_matching(g: Graph, params: RoutingParams, demands: Matching, seed: int,
                   mode: str = "shortest"):
    """Route every demand pair along a short path with low vertex congestion,
    or surface a cut of sparsity < alpha.

    mode "shortest" (default) samples a random shortest path per pair;
    mode "uniform" concatenates two flow paths through a random intermediate;
    mode "spread" routes pairs sequentially with a reuse penalty, keeping the
    family nearly vertex-disjoint when capacity allows.
    Congestion above 8*eta raises CongestionExceeded (retry with a new seed).
    """
    if mode not in ("shortest", "uniform", "spread"):
        raise ValueError(f"unknown mode {mode!r}")
    pairs = list(demands.pairs)
    for u, v in pairs:
        if not (0 <= u < g.n and 0 <= v < g.n) or u == v:
            raise ValueError(f"bad demand pair ({u},{v})")
    if not pairs:
        return Paths(())
    if not is_connected(g):
        raise DisconnectedGraphError("routing requires a connected graph")
    if g.n >= 2:
        screen = sweep_cut(g)
        if screen.sparsity < params.alpha:
            return SparseCut(screen)
    out = solve_uniform_mcf(g, params, params.eps)
    if isinstance(out, Dual):
        return SparseCut(dual_to_cut(g, params, out.lengths))
    solution = out.solution
    pair_paths: dict[tuple[int, int], list[tuple[tuple[int, ...], float]]] = defaultdict(list)
    if mode == "uniform":
        for p, val in solution.flow_paths:
            pair_paths[_norm(p[0], p[-1])].append((p, val))
    gen = rng.stream(seed, 0x726F7574)
    if mode == "spread":
        chosen = _spread_paths(g, pairs, gen)
    else:
        chosen = []
        for u, v in pairs:
            if mode == "shortest":
                p = _sample_shortest(g, u, v, gen)
            else:
                p = _sample_concatenated(g, u, v, gen, pair_paths)
            chosen.append(p)
    for p in chosen:
        if len(p) - 1 > 2 * params.L:
            raise RoutingError(
                f"sampled path of {len(p)-1} hops exceeds 2L = {2*params.L}")
    occupancy: dict[int, int] = defaultdict(int)
    for p in chosen:
        for x in p:
            occupancy[x] += 1
    worst = max(occupancy.values())
    budget = 8 * params.eta
    if worst > budget:
        raise CongestionExceeded(
            f"vertex congestion {worst} exceeds 8*eta = {budget}", worst, budget)
    return Paths(tuple(chosen))
