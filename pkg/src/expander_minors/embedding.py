"""Minor embedding into bounded-degree expanders.

Pipeline: reduce the target to maximum degree 3, split the host into a good
partition (both sides connected, both at least n/(4d)), match terminals across
the cut, group them in one side, route edge paths in the other, and assemble a
verified minor model.  Every routing failure either shrinks the crossing edge
count (progress toward a certified sparse cut) or consumes a retry.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import rng
from .errors import (CongestionExceeded, DisconnectedGraphError,
                     ResampleCapExceeded, SizeGuardRejected, TerminalShortage)
from .flows import Paths, SparseCut, routing_params
from .graphs import (Cut, Graph, bfs_distances, bfs_tree, cut_of,
                     greedy_matching_across, induced_subgraph, is_connected,
                     make_graph)
from .models import MinorModel, verify_model
from .partition import (_postorder, _rooted_tree, _subtree,
                        connected_cut_repair, spanning_tree_grouping)
from .paths import route_flexible_disjoint, route_group_family
from .spectral import sweep_cut

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmbedConfig:
    """Knobs for embed_minor.

    alpha: expansion the host is assumed to have (exact rational).
    rho_constant: c in rho = 3*ceil(4*c*d^2*log2(n)^2/alpha^2).
    size_guard: "permissive" attempts any target; "strict" rejects targets
    above floor((n/(size_constant*log2(n)^2))*alpha^3/d^5) up front.
    """
    alpha: Fraction
    max_retries: int = 5
    seed: int = 0
    rho_constant: int = 1
    size_guard: str = "permissive"
    size_constant: int = 1
    c_eta: int = 128
    eps: float = 0.1
    stage_retries: int = 12

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")
        if self.stage_retries < 1:
            raise ValueError("stage_retries must be >= 1")
        if self.rho_constant < 1:
            raise ValueError("rho_constant must be >= 1")
        if self.size_guard not in ("permissive", "strict"):
            raise ValueError("size_guard must be 'permissive' or 'strict'")


@dataclass(frozen=True)
class DegreeReduction:
    reduced: Graph
    lift: tuple[int, ...]


@dataclass(frozen=True)
class Model:
    model: MinorModel


@dataclass(frozen=True)
class NotAnExpander:
    cut: Cut


@dataclass(frozen=True)
class Failed:
    diagnostics: tuple[str, ...]


def reduce_degree(h: Graph) -> DegreeReduction:
    """Replace every vertex of degree > 3 by a cycle with one port per
    incident edge (ports in sorted-neighbor order); record the lift map."""
    lift: list[int] = []
    ports: dict[int, dict[int, int]] = {}
    for u in range(h.n):
        nbrs = sorted(h.adj[u])
        if len(nbrs) <= 3:
            vid = len(lift)
            lift.append(u)
            ports[u] = {v: vid for v in nbrs}
        else:
            ids = []
            for _ in nbrs:
                ids.append(len(lift))
                lift.append(u)
            ports[u] = {v: ids[i] for i, v in enumerate(nbrs)}
    edges: list[tuple[int, int]] = []
    for u in range(h.n):
        nbrs = sorted(h.adj[u])
        if len(nbrs) > 3:
            ids = [ports[u][v] for v in nbrs]
            for i in range(len(ids)):
                a, b = ids[i], ids[(i + 1) % len(ids)]
                edges.append((min(a, b), max(a, b)))
    for u, v in h.edges():
        a, b = ports[u][v], ports[v][u]
        edges.append((min(a, b), max(a, b)))
    reduced = make_graph(len(lift), edges)
    return DegreeReduction(reduced, tuple(lift))


def good_partition_init(g: Graph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split V into (v1, v2), both inducing connected subgraphs, both of size
    >= n/(4d), with |v1| >= |v2|.  A spanning-tree subtree whose size lands
    closest to n/2 within [ceil(n/(4d)), n - ceil(n/(4d))] is cut off."""
    n = g.n
    if n < 2:
        raise ValueError("need at least 2 vertices to partition")
    d = max(1, g.max_degree)
    t = max(1, math.ceil(n / (4 * d)))
    root, children = _rooted_tree(g, range(n))
    order = _postorder(root, children, set())
    size: dict[int, int] = {}
    for v in order:
        size[v] = 1 + sum(size[c] for c in children[v])
    best = None
    best_gap = None
    for v in order:
        s = size[v]
        if t <= s <= n - t:
            gap = abs(2 * s - n)
            if best is None or gap < best_gap:
                best, best_gap = v, gap
    if best is None:
        raise RuntimeError("no subtree split satisfies the n/(4d) size bound")
    side = sorted(_subtree(best, children, set()))
    rest = sorted(set(range(n)) - set(side))
    if len(rest) > len(side):
        return tuple(rest), tuple(side)
    return tuple(side), tuple(rest)


def _crossing_count(g: Graph, side: set[int]) -> int:
    return sum(1 for u, v in g.edges() if (u in side) != (v in side))


def _multi_bfs(g: Graph, starts: list[int]) -> dict[int, int]:
    """Distance from the nearest start vertex, for every reachable vertex."""
    dist = {s: 0 for s in starts}
    queue = deque(sorted(starts))
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _optimize_assignment(hp_edges: list[tuple[int, int]], counts: list[int],
                         deg: list[int], pd: list[list[int]],
                         base: Mapping[int, int], gen) -> dict[int, int]:
    """Assign target vertices to terminal parts so adjacent target vertices
    land in parts whose terminals sit close together in the routing side.

    Local search over part swaps from the rank-based baseline plus seeded
    random restarts; only assignments funding every vertex's degree are kept.
    Shorter edge paths are what let the whole family stay vertex-disjoint.
    """
    K = len(counts)

    def cost(sig: dict[int, int]) -> int:
        return sum(pd[sig[a]][sig[b]] for a, b in hp_edges)

    def feasible(sig: dict[int, int]) -> bool:
        return all(counts[sig[u]] >= deg[u] for u in range(K))

    best = dict(base)
    best_cost = cost(best)
    for restart in range(4):
        if restart == 0:
            sig = dict(base)
        else:
            perm = [int(x) for x in gen.permutation(K)]
            sig = {u: perm[u] for u in range(K)}
            if not feasible(sig):
                continue
        cur = cost(sig)
        improved = True
        while improved:
            improved = False
            for u in range(K):
                for v in range(u + 1, K):
                    sig[u], sig[v] = sig[v], sig[u]
                    if (counts[sig[u]] >= deg[u] and counts[sig[v]] >= deg[v]
                            and cost(sig) < cur):
                        cur = cost(sig)
                        improved = True
                    else:
                        sig[u], sig[v] = sig[v], sig[u]
        if cur < best_cost:
            best, best_cost = dict(sig), cur
    return best


def _seeded_partition(g: Graph, cfg: EmbedConfig, attempt: int
                      ) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Partition for one embedding attempt.

    Attempt 0 takes the deterministic balanced split.  Later attempts grow
    spanning trees from several seeded random roots, cut off each tree's
    subtree with the most crossing edges (ties broken toward balance), and
    keep the split whose sides admit the largest matching — the matching is
    what funds terminals, so each retry explores a genuinely different
    terminal supply instead of replaying the same deterministic failure.
    """
    if attempt == 0:
        return good_partition_init(g)
    n = g.n
    d = max(1, g.max_degree)
    t = max(1, math.ceil(n / (4 * d)))
    gen = rng.stream(cfg.seed, 0x73706C6974, attempt)
    best_split = None
    best_score: tuple[int, int, int] | None = None
    for _ in range(4):
        root = int(gen.integers(n))
        parent = bfs_tree(g, root)
        children: dict[int, list[int]] = {v: [] for v in range(n)}
        for v, p in sorted(parent.items()):
            if v != p:
                children[p].append(v)
        order = _postorder(root, children, set())
        members: dict[int, set[int]] = {}
        for v in order:
            acc = {v}
            for c in children[v]:
                acc |= members[c]
            members[v] = acc
        best = None
        best_key: tuple[int, int, int] | None = None
        for v in order:
            s = len(members[v])
            if not t <= s <= n - t:
                continue
            key = (-_crossing_count(g, members[v]), abs(2 * s - n), v)
            if best_key is None or key < best_key:
                best_key, best = key, v
        if best is None:
            continue
        side = sorted(members[best])
        rest = sorted(set(range(n)) - members[best])
        if len(rest) < len(side):
            side, rest = rest, side
        matched = len(greedy_matching_across(g, rest, side))
        score = (matched, -best_key[0], -best_key[1])
        if best_score is None or score > best_score:
            best_score = score
            best_split = (tuple(rest), tuple(side))
    if best_split is None:
        raise RuntimeError("no subtree split satisfies the n/(4d) size bound")
    return best_split


def embed_minor(g: Graph, cfg: EmbedConfig, h: Graph):
    """Embed h as a minor of g, or certify a cut of sparsity < cfg.alpha.

    Returns Model (verified), NotAnExpander (exact sparsity < alpha), or
    Failed after max_retries probabilistic attempts.  Raises TerminalShortage
    when every attempt dies from too few well-spread terminals — the instance
    is too small for the parameterization, which retrying cannot fix.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("host must be connected")
    if h.n == 0:
        return Model(MinorModel(g, h, {}, {}))
    n, d = g.n, max(1, g.max_degree)
    if cfg.size_guard == "strict":
        log2n = math.log2(max(2, n))
        bound = math.floor((n / (cfg.size_constant * log2n ** 2))
                           * float(cfg.alpha) ** 3 / d ** 5)
        if h.n + h.m > bound:
            raise SizeGuardRejected(
                f"target size {h.n}+{h.m} exceeds strict bound {bound}")
    if h.n == 1:
        return Model(MinorModel(g, h, {0: frozenset({0})}, {}))
    if h.n > g.n:
        return Failed((f"target has {h.n} vertices, host only {g.n}",))

    screen = sweep_cut(g)
    if screen.sparsity < cfg.alpha:
        repaired = connected_cut_repair(g, screen)
        assert repaired.sparsity < cfg.alpha
        return NotAnExpander(repaired)

    red = reduce_degree(h)
    if red.reduced.n > g.n:
        return Failed((f"degree-reduced target has {red.reduced.n} vertices, "
                       f"host only {g.n}",))
    diagnostics: list[str] = []
    shortages = 0
    last_shortage: TerminalShortage | None = None
    for attempt in range(cfg.max_retries):
        try:
            return _attempt(g, h, red, cfg, attempt)
        except TerminalShortage as ts:
            shortages += 1
            last_shortage = ts
            diagnostics.append(f"attempt {attempt}: terminal shortage: {ts}")
        except (CongestionExceeded, ResampleCapExceeded) as ex:
            diagnostics.append(f"attempt {attempt}: {type(ex).__name__}: {ex}")
    if shortages == cfg.max_retries and last_shortage is not None:
        raise last_shortage
    return Failed(tuple(diagnostics))


def _attempt(g: Graph, h: Graph, red: DegreeReduction, cfg: EmbedConfig,
             attempt: int):
    hp, lift = red.reduced, red.lift
    alpha = cfg.alpha
    n, d = g.n, max(1, g.max_degree)
    v1, v2 = _seeded_partition(g, cfg, attempt)
    prev_crossing: int | None = None
    for it in range(g.m + 2):
        v1set = set(v1)
        crossing = _crossing_count(g, v1set)
        if prev_crossing is not None:
            assert crossing < prev_crossing, "crossing count failed to decrease"
        prev_crossing = crossing
        if Fraction(crossing) < alpha * Fraction(n, 4 * d):
            cut = cut_of(g, sorted(v1))
            assert cut.sparsity < alpha
            return NotAnExpander(cut)

        matching = greedy_matching_across(g, v1, v2)
        if len(matching) < hp.n:
            raise TerminalShortage(
                f"matching of size {len(matching)} cannot seed {hp.n} branch parts",
                needed=hp.n, available=len(matching))
        partner = {w: z for z, w in matching.pairs}

        sub2, map2 = induced_subgraph(g, sorted(v2))
        inv2 = {b: a for a, b in map2.items()}
        terms2 = sorted(map2[w] for w in partner)
        try:
            grouping = spanning_tree_grouping(sub2, terms2, hp.n)
        except ValueError as ex:
            raise TerminalShortage(
                f"terminal grouping into {hp.n} parts failed: {ex}",
                needed=hp.n, available=len(terms2))

        hp_order = sorted(range(hp.n), key=lambda u: (-hp.degree(u), u))
        part_order = sorted(range(hp.n),
                            key=lambda i: (-grouping.terminals_per_part[i], i))
        part_of = {u: part_order[k] for k, u in enumerate(hp_order)}

        log2n = math.log2(max(2, n))
        rho = 3 * math.ceil(4 * cfg.rho_constant * d * d * log2n * log2n
                            / float(alpha) ** 2)
        rho_eff = rho
        for u in range(hp.n):
            du = hp.degree(u)
            if du >= 1:
                rho_eff = min(rho_eff,
                              grouping.terminals_per_part[part_of[u]] // du)
        if rho_eff < 1:
            counts = tuple(grouping.terminals_per_part)
            raise TerminalShortage(
                f"parts received terminal counts {counts}; some part cannot "
                f"fund one terminal per incident edge",
                needed=rho, available=min(counts) if counts else 0)
        if rho_eff < rho:
            log.info("terminal budget per edge downgraded from %d to %d",
                     rho, rho_eff)

        hp_edges = sorted(hp.edges())
        r = len(hp_edges)
        part_sets = [set(p) for p in grouping.parts]
        part_terms = {
            i: [t for t in terms2 if t in part_sets[i]]
            for i in range(hp.n)
        }

        sel_paths_g: list[tuple[int, ...]] = []
        carved_z: dict[tuple[tuple[int, int], int], list[int]] = {}
        if r > 0:
            sub1, map1 = induced_subgraph(g, sorted(v1))
            inv1 = {b: a for a, b in map1.items()}
            # terminal -> its matched endpoint inside the routing side
            z_of = {t: map1[partner[inv2[t]]] for t in terms2}
            z_dist = {z: bfs_distances(sub1, z) for z in set(z_of.values())}
            if rho_eff == 1:
                # With one path per edge there is no slack: re-derive the
                # vertex->part assignment from terminal geometry so edge
                # paths can be short.
                pd = [[0] * hp.n for _ in range(hp.n)]
                for i in range(hp.n):
                    for j in range(hp.n):
                        if i != j and part_terms[i] and part_terms[j]:
                            pd[i][j] = min(
                                z_dist[z_of[ta]].get(z_of[tb], g.n)
                                for ta in part_terms[i]
                                for tb in part_terms[j])
                counts = [len(part_terms[i]) for i in range(hp.n)]
                degs = [hp.degree(u) for u in range(hp.n)]
                gen = rng.stream(cfg.seed, 0x61736769, attempt, it)
                part_of = _optimize_assignment(hp_edges, counts, degs, pd,
                                               part_of, gen)
                rho_eff = min((counts[part_of[u]] // degs[u]
                               for u in range(hp.n) if degs[u] >= 1),
                              default=rho_eff)
                assert rho_eff >= 1
            avail = {i: set(part_terms[i]) for i in range(hp.n)}
            # Carve rho_eff terminals per (edge, endpoint), preferring pairs
            # whose matched endpoints are close in the routing side (short
            # edge paths) but not adjacent to endpoints already carved for
            # other edges (adjacent endpoints force path collisions).
            carved: list[int] = []

            def congestion(z: int) -> int:
                dz = z_dist[z]
                return sum(1 for c in carved if dz.get(c, g.n) <= 1)

            for _ in range(rho_eff):
                for a, b in hp_edges:
                    pa, pb = avail[part_of[a]], avail[part_of[b]]
                    pick = min(
                        ((z_dist[z_of[ta]].get(z_of[tb], g.n)
                          + 3 * (congestion(z_of[ta]) + congestion(z_of[tb])),
                          ta, tb)
                         for ta in pa for tb in pb))
                    _, ta, tb = pick
                    pa.discard(ta)
                    pb.discard(tb)
                    carved.extend((z_of[ta], z_of[tb]))
                    carved_z.setdefault(((a, b), a), []).append(z_of[ta])
                    carved_z.setdefault(((a, b), b), []).append(z_of[tb])
            family = [sorted(carved_z[(e, e[0])]) for e in hp_edges]
            family += [sorted(carved_z[(e, e[1])]) for e in hp_edges]
            params = routing_params(alpha / 2, max(1, sub1.max_degree), sub1.n,
                                    cfg.eps, cfg.c_eta)
            # Any routing-side neighbour of a part keeps its branch connected
            # when absorbed as a path endpoint, so late routing stages may
            # end paths at any of them instead of only at carved terminals.
            # Those stages get their own assignment, optimized on attachment
            # geometry rather than carved-terminal geometry.
            attach: list[list[int]] = []
            for i in range(hp.n):
                cand: set[int] = set()
                for t in part_sets[i]:
                    for nb in g.adj[inv2[t]]:
                        if nb in v1set:
                            cand.add(map1[nb])
                attach.append(sorted(cand))
            degs_hp = [hp.degree(u) for u in range(hp.n)]
            counts_att = [len(a) for a in attach]
            base_flex = {u: p for u, p in zip(
                sorted(range(hp.n), key=lambda u: (-degs_hp[u], u)),
                sorted(range(hp.n), key=lambda i: (-counts_att[i], i)))}

            def flex_ok(sig: Mapping[int, int]) -> bool:
                return all(counts_att[sig[u]] >= degs_hp[u]
                           for u in range(hp.n))

            # No single assignment heuristic dominates, so the flexible
            # stages rotate through the candidates that can fund one distinct
            # endpoint per incident edge.
            variants: list[dict[int, int]] = []
            if flex_ok(base_flex):
                ad = [_multi_bfs(sub1, a) for a in attach]
                pd_att = [[0] * hp.n for _ in range(hp.n)]
                for i in range(hp.n):
                    for j in range(hp.n):
                        if i != j:
                            pd_att[i][j] = min(
                                (ad[i].get(y, sub1.n) for y in attach[j]),
                                default=sub1.n)
                variants.append(_optimize_assignment(
                    hp_edges, counts_att, degs_hp, pd_att, base_flex,
                    rng.stream(cfg.seed, 0x666C6173, attempt, it)))
                if flex_ok(part_of) and part_of not in variants:
                    variants.append(dict(part_of))
                if base_flex not in variants:
                    variants.append(base_flex)
            routed = None
            failure: Exception | None = None
            for stage in range(cfg.stage_retries):
                stage_seed = rng.derive(cfg.seed, attempt, it, stage)
                if stage < 3 or not variants:
                    try:
                        routed = route_group_family(sub1, params, family,
                                                    stage_seed)
                        break
                    except (CongestionExceeded, ResampleCapExceeded) as ex:
                        failure = ex
                else:
                    sig = variants[(stage - 3) % len(variants)]
                    slots = [(attach[sig[a]], attach[sig[b]])
                             for a, b in hp_edges]
                    flex = route_flexible_disjoint(sub1, slots, stage_seed,
                                                   2 * params.L)
                    if flex is not None:
                        routed = Paths(flex)
                        part_of = sig
                        break
            if routed is None:
                assert failure is not None
                raise failure
            if isinstance(routed, SparseCut):
                rep = connected_cut_repair(sub1, routed.cut)
                assert 2 * rep.sparsity < alpha
                if len(rep.side_a) <= len(rep.side_b):
                    y_loc, x_loc = rep.side_a, rep.side_b
                else:
                    y_loc, x_loc = rep.side_b, rep.side_a
                y = sorted(inv1[t] for t in y_loc)
                x = sorted(inv1[t] for t in x_loc)
                yset = set(y)
                delta_y = _crossing_count(g, yset)
                if Fraction(delta_y) < alpha * len(y):
                    cut = cut_of(g, y)
                    assert cut.sparsity < alpha
                    return NotAnExpander(cut)
                v1 = tuple(x)
                v2 = tuple(sorted(set(v2) | yset))
                if len(v2) > len(v1):
                    v1, v2 = v2, v1
                continue
            assert isinstance(routed, Paths)
            sel_paths_g = [tuple(inv1[t] for t in p) for p in routed.paths]

        branch: dict[int, set[int]] = {
            u: {inv2[t] for t in grouping.parts[part_of[u]]}
            for u in range(hp.n)
        }
        edge_paths: dict[tuple[int, int], tuple[int, ...]] = {}
        for k, (a, b) in enumerate(hp_edges):
            p = sel_paths_g[k]
            branch[a].add(p[0])
            branch[b].add(p[-1])
            edge_paths[(a, b)] = p
        hp_model = MinorModel(g, hp,
                              {u: frozenset(branch[u]) for u in range(hp.n)},
                              edge_paths)
        check = verify_model(hp_model)
        if not check.ok:
            raise RuntimeError(
                "internal: reduced-target model failed verification: "
                + "; ".join(str(v) for v in check.violations[:3]))

        h_branch: dict[int, set[int]] = {u: set() for u in range(h.n)}
        for w in range(hp.n):
            h_branch[lift[w]] |= branch[w]
        h_paths: dict[tuple[int, int], tuple[int, ...]] = {}
        for k, (a, b) in enumerate(hp_edges):
            ua, ub = lift[a], lift[b]
            if ua == ub:
                h_branch[ua].update(sel_paths_g[k])
            else:
                key = (ua, ub) if ua < ub else (ub, ua)
                assert key not in h_paths, "duplicate cross edge between lift classes"
                h_paths[key] = sel_paths_g[k]
        h_model = MinorModel(g, h,
                             {u: frozenset(h_branch[u]) for u in range(h.n)},
                             h_paths)
        check = verify_model(h_model)
        if not check.ok:
            raise RuntimeError(
                "internal: lifted model failed verification: "
                + "; ".join(str(v) for v in check.violations[:3]))
        return Model(h_model)
    raise RuntimeError("partition loop exceeded its edge-count bound")
