"""Acceptance criteria for the embedding library and CLI.

Each test covers one numbered criterion end to end, at the stated sample
sizes and tolerances, and prints a single summary line on success.
"""
from __future__ import annotations

import math
import time
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest

from expander_minors import (GenSpec, Matching, PathGroups, MinorModel,
                             balanced_integer_partition, brute_force_is_minor,
                             connected_cut_repair, cut_of, exact_expansion,
                             generate, hop_limited_distances, is_connected,
                             lambda2, lll_select_disjoint, make_graph,
                             route_matching, routing_params, save_graph,
                             solve_uniform_mcf, spanning_tree_grouping,
                             verify_model)
from expander_minors import rng
from expander_minors.cli import main
from expander_minors.errors import CongestionExceeded
from expander_minors.flows import Dual, Flow, Paths
from expander_minors.graphs import is_simple_path


def cube_q3():
    return make_graph(8, [(0, 1), (0, 2), (0, 4), (1, 3), (1, 5), (2, 3),
                          (2, 6), (3, 7), (4, 5), (4, 6), (5, 7), (6, 7)])


def petersen():
    return make_graph(10, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                           (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
                           (0, 5), (1, 6), (2, 7), (3, 8), (4, 9)])


def triangles_bridge():
    return make_graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5),
                          (2, 3)])


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance")


_graph_files: dict[str, str] = {}


def graph_file(workdir, name: str, g) -> str:
    """Write a graph once per session and reuse the file."""
    if name not in _graph_files:
        path = workdir / f"{name}.txt"
        save_graph(g, str(path))
        _graph_files[name] = str(path)
    return _graph_files[name]


_lambda2_cache: dict[str, Fraction] = {}


def half_lambda2(name: str, g) -> Fraction:
    if name not in _lambda2_cache:
        _lambda2_cache[name] = Fraction(
            lambda2(g).lambda2 / 2).limit_denominator(10 ** 6)
    return _lambda2_cache[name]


def read_cut_side(path: str) -> tuple[list[int], Fraction]:
    lines = open(path, encoding="ascii").read().splitlines()
    side = [int(v) for v in lines[0].split()[1:]]
    spars = Fraction(lines[2].split()[-1])
    return side, spars


def run_embed(workdir, tag, host_file, target_file, alpha, seed, retries=3):
    """One cmd_embed run; returns (exit code, out dir, elapsed seconds)."""
    out_dir = workdir / f"run_{tag}"
    started = time.perf_counter()
    rc = main(["embed", "--host", host_file, "--target", target_file,
               "--alpha", str(alpha), "--seed", str(seed),
               "--retries", str(retries), "--out-dir", str(out_dir)])
    return rc, out_dir, time.perf_counter() - started


def check_embed_soundness(host, alpha, rc, out_dir, host_file, target_file):
    assert rc in (0, 2, 3)
    if rc == 0:
        assert main(["verify", "--host", host_file, "--target", target_file,
                     "--model", str(out_dir / "model.txt")]) == 0
    elif rc == 2:
        side, spars = read_cut_side(str(out_dir / "cut.txt"))
        recomputed = cut_of(host, side).sparsity
        assert recomputed == spars
        assert recomputed < alpha
    return rc


def test_criterion_01_either_or_soundness(workdir):
    targets = {
        "C4": generate(GenSpec("cycle", {"n": 4})),
        "C6": generate(GenSpec("cycle", {"n": 6})),
        "P5": generate(GenSpec("path", {"n": 5})),
        "P8": generate(GenSpec("path", {"n": 8})),
        "K3": generate(GenSpec("clique", {"n": 3})),
        "K4": generate(GenSpec("clique", {"n": 4})),
        "K5": generate(GenSpec("clique", {"n": 5})),
        "R8": generate(GenSpec("random-regular", {"n": 8, "d": 3}, seed=0)),
    }
    for name, g in targets.items():
        graph_file(workdir, f"target_{name}", g)

    runs = []  # (host name, host graph, alpha, target name)
    for s in range(50):
        g = generate(GenSpec("random-regular", {"n": 32, "d": 3}, seed=s))
        name = f"rr32_{s}"
        a = half_lambda2(name, g)
        for t in ("C4", "P5", "K3"):
            runs.append((name, g, a, t))
    for s in range(25):
        g = generate(GenSpec("random-regular", {"n": 64, "d": 3}, seed=s))
        name = f"rr64_{s}"
        a = half_lambda2(name, g)
        for t in ("C6", "P5", "K4", "R8"):
            runs.append((name, g, a, t))
    for s in range(15):
        g = generate(GenSpec("random-regular", {"n": 128, "d": 3}, seed=s))
        name = f"rr128_{s}"
        a = half_lambda2(name, g)
        for t in ("C6", "P8", "K5", "R8"):
            runs.append((name, g, a, t))
    for s in range(10):
        g = generate(GenSpec("random-regular", {"n": 256, "d": 3}, seed=s))
        name = f"rr256_{s}"
        a = half_lambda2(name, g)
        for t in ("C6", "P8", "K4"):
            runs.append((name, g, a, t))
    for s in range(25):
        for n in (32, 64):
            g = generate(GenSpec("two-expanders-bridge", {"n": n, "d": 3},
                                 seed=s))
            runs.append((f"bridge{n}_{s}", g, Fraction(1, 4), "C4"))
    for s in range(10):
        for k in (4, 5, 6, 7, 8):
            g = generate(GenSpec("barbell", {"k": k}))
            runs.append((f"barbell{k}", g, Fraction(1), "C4"))
    for s in range(10):
        for dims in ((8, 8), (6, 10), (4, 8), (10, 10)):
            g = generate(GenSpec("grid", {"a": dims[0], "b": dims[1]}))
            name = f"grid{dims[0]}x{dims[1]}"
            alpha = Fraction(1, 2) if s % 2 == 0 else Fraction(1, 8)
            runs.append((name, g, alpha, "C4"))
    for s in range(10):
        for n in (32, 64):
            g = generate(GenSpec("random-regular", {"n": n, "d": 3},
                                 seed=100 + s))
            runs.append((f"rrfix{n}_{s}", g, Fraction(1, 8), "C4"))
    assert len(runs) >= 500

    outcomes = defaultdict(int)
    for i, (name, g, alpha, t) in enumerate(runs):
        hf = graph_file(workdir, f"host_{name}", g)
        tf = _graph_files[f"target_{t}"]
        seed = rng.derive(0xACC1, i)
        rc, out_dir, elapsed = run_embed(workdir, f"c1_{i}", hf, tf, alpha,
                                         seed)
        check_embed_soundness(g, alpha, rc, out_dir, hf, tf)
        assert elapsed < 60.0
        outcomes[rc] += 1
    assert outcomes[0] > 0 and outcomes[2] > 0  # both arms exercised
    print(f"PASS criterion 1: {len(runs)} runs sound "
          f"(exit0={outcomes[0]}, exit2={outcomes[2]}, exit3={outcomes[3]})")


def test_criterion_02_non_expander_detection(workdir):
    tf = graph_file(workdir, "target_C4_c2",
                    generate(GenSpec("cycle", {"n": 4})))
    hits = 0
    cases = [(n, s) for n in (32, 48, 64, 96, 128) for s in range(10)]
    for n, s in cases:
        g = generate(GenSpec("two-expanders-bridge", {"n": n, "d": 3}, seed=s))
        hf = graph_file(workdir, f"c2_bridge{n}_{s}", g)
        rc, out_dir, _ = run_embed(workdir, f"c2_{n}_{s}", hf, tf,
                                   Fraction(1, 4), rng.derive(0xACC2, n, s))
        assert rc == 2
        _, spars = read_cut_side(str(out_dir / "cut.txt"))
        assert spars <= Fraction(1, 32)
        hits += 1
    assert hits == len(cases) == 50
    print("PASS criterion 2: 50/50 bridge hosts certified at sparsity <= 1/32")


def test_criterion_03_embedding_success_rate(workdir):
    targets = {
        "C6": generate(GenSpec("cycle", {"n": 6})),
        "P8": generate(GenSpec("path", {"n": 8})),
        "Q3": cube_q3(),
    }
    rates = {}
    for tname, h in targets.items():
        tf = graph_file(workdir, f"c3_target_{tname}", h)
        ok = 0
        for seed in range(50):
            g = generate(GenSpec("random-regular", {"n": 128, "d": 3},
                                 seed=seed))
            name = f"rr128c3_{seed}"
            hf = graph_file(workdir, f"host_{name}", g)
            alpha = half_lambda2(name, g)
            rc, _, _ = run_embed(workdir, f"c3_{tname}_{seed}", hf, tf, alpha,
                                 seed, retries=5)
            ok += rc == 0
        rates[tname] = ok
        assert ok >= 45, f"{tname}: only {ok}/50 seeds produced a model"
    print("PASS criterion 3: success rates "
          + ", ".join(f"{t}={k}/50" for t, k in rates.items()))


def test_criterion_04_cheeger_sandwich():
    corpus = []
    corpus += [generate(GenSpec("cycle", {"n": n})) for n in range(3, 15)]
    corpus += [generate(GenSpec("path", {"n": n})) for n in range(2, 15)]
    corpus += [generate(GenSpec("clique", {"n": n})) for n in range(2, 15)]
    corpus += [generate(GenSpec("grid", {"a": a, "b": b}))
               for a, b in ((2, 2), (2, 3), (2, 5), (2, 7), (3, 3), (3, 4))]
    corpus += [generate(GenSpec("barbell", {"k": k})) for k in range(3, 8)]
    corpus += [make_graph(n, [(0, i) for i in range(1, n)])
               for n in range(3, 15)]  # stars
    corpus += [generate(GenSpec("random-regular", {"n": n, "d": 3}, seed=s))
               for n in (8, 10, 12, 14) for s in (0, 1)]
    corpus += [triangles_bridge(), petersen(), cube_q3()]
    for s in range(6):
        g = generate(GenSpec("gnp", {"n": 10, "p": 0.4}, seed=s))
        if is_connected(g):
            corpus.append(g)
    checked = 0
    for g in corpus:
        assert g.n <= 14 and is_connected(g)
        lam = lambda2(g).lambda2
        phi = float(exact_expansion(g)[0])
        d = g.max_degree
        assert lam / 2 - 1e-6 <= phi, f"lower bound fails: n={g.n} m={g.m}"
        assert phi <= math.sqrt(2 * d * lam) + 1e-6, \
            f"upper bound fails: n={g.n} m={g.m}"
        checked += 1
    assert checked >= 60
    print(f"PASS criterion 4: Cheeger sandwich holds on {checked} graphs")


def _check_flow_outcome(g, params, out, eps=0.1):
    hop_cap = min(params.L, g.n - 1)
    load = defaultdict(float)
    sent = defaultdict(float)
    for path, val in out.solution.flow_paths:
        assert len(path) - 1 <= hop_cap
        pair = (min(path[0], path[-1]), max(path[0], path[-1]))
        sent[pair] += val
        for i in range(len(path) - 1):
            e = (min(path[i], path[i + 1]), max(path[i], path[i + 1]))
            load[e] += val
    assert max(load.values(), default=0.0) <= 1.0 + eps
    target = out.solution.per_pair_demand
    for u in range(g.n):
        for v in range(u + 1, g.n):
            assert sent[(u, v)] >= (1 - eps) * target - 1e-12


def _check_dual_outcome(g, params, out, bound, eps=0.1):
    assert out.lengths.total_weight < bound
    lmap = {e: out.lengths.lengths[e] for e in g.edges()}
    hop_cap = min(params.L, g.n - 1)
    total = 0.0
    for u in range(g.n):
        dist = hop_limited_distances(g, [u], hop_cap, lmap)
        total += sum(dist[v] for v in range(u + 1, g.n))
    assert total >= 1 - eps


def test_criterion_05_flow_postconditions():
    flows = duals = 0
    for n in (16, 24, 32, 64):
        for s in range(25):
            g = generate(GenSpec("random-regular", {"n": n, "d": 3}, seed=s))
            alpha = Fraction(lambda2(g).lambda2 / 2).limit_denominator(10 ** 6)
            params = routing_params(alpha, 3, n)
            out = solve_uniform_mcf(g, params)
            if isinstance(out, Flow):
                _check_flow_outcome(g, params, out)
                flows += 1
            else:
                assert isinstance(out, Dual)
                _check_dual_outcome(g, params, out, params.W_star)
                duals += 1
    assert flows + duals == 100
    # force the dual branch: per-pair demand above the bridge capacity
    tb = triangles_bridge()
    params = routing_params(Fraction(1), 2, 6)
    for demand in (0.2, 0.5):
        out = solve_uniform_mcf(tb, params, demand=demand)
        assert isinstance(out, Dual)
        _check_dual_outcome(tb, params, out, demand)
        duals += 1
    print(f"PASS criterion 5: {flows} Flow + {duals} Dual outcomes verified")


def test_criterion_06_routing_postconditions():
    exceeded = 0
    routed = 0
    for seed in range(100):
        g = generate(GenSpec("random-regular", {"n": 128, "d": 3}, seed=seed))
        alpha = Fraction(lambda2(g).lambda2 / 2).limit_denominator(10 ** 6)
        params = routing_params(alpha, 3, 128)
        gen = rng.stream(seed, 0xC6)
        verts = [int(v) for v in gen.permutation(128)[:16]]
        demands = Matching(tuple((verts[2 * i], verts[2 * i + 1])
                                 for i in range(8)))
        try:
            out = route_matching(g, params, demands, seed=seed)
        except CongestionExceeded:
            exceeded += 1
            continue
        assert isinstance(out, Paths)
        congestion = defaultdict(int)
        for path, (u, v) in zip(out.paths, demands.pairs):
            assert is_simple_path(g, path)
            assert {path[0], path[-1]} == {u, v}
            assert len(path) - 1 <= 2 * params.L
            for x in path:
                congestion[x] += 1
        assert max(congestion.values()) <= 8 * params.eta
        routed += 1
    assert exceeded <= 10, f"CongestionExceeded on {exceeded}/100 seeds"
    print(f"PASS criterion 6: {routed} routed matchings in bounds, "
          f"{exceeded} congestion retries")


def _planted_groups(gen):
    r = int(gen.integers(2, 5))
    q = int(gen.integers(1, 4))
    span = 3
    universe = r * span + 20
    groups = []
    for j in range(r):
        head = tuple(range(j * span, j * span + int(gen.integers(1, span + 1))))
        cands = [head]
        for _ in range(q - 1):
            k = int(gen.integers(1, 4))
            cands.append(tuple(int(v) for v in gen.permutation(universe)[:k]))
        groups.append(tuple(cands))
    return PathGroups(tuple(groups), q)


def test_criterion_07_lll_correctness():
    gen = np.random.default_rng(0xACC7)
    for trial in range(10 ** 4):
        pg = _planted_groups(gen)
        sel = lll_select_disjoint(pg, trial)
        seen: set[int] = set()
        for j, p in enumerate(sel):
            assert p in pg.groups[j]
            assert not seen & set(p), "intersecting selection"
            seen.update(p)
    unique = PathGroups((((0, 1), (2, 3)), ((3, 4), (0, 2))), 2)
    for seed in range(100):
        assert lll_select_disjoint(unique, seed) == ((0, 1), (3, 4))
    print("PASS criterion 7: 10^4 disjoint selections, "
          "unique fixture 100/100 seeds")


def test_criterion_08_partition_primitives():
    gen = np.random.default_rng(0xACC8)
    for _ in range(10 ** 4):
        k = int(gen.integers(2, 14))
        xs = [int(gen.integers(1, 25)) for _ in range(k)]
        total = sum(xs)
        if 4 * max(xs) > 3 * total:
            continue
        a, b = balanced_integer_partition(xs)
        assert 4 * sum(xs[i] for i in a) >= total
        assert 4 * sum(xs[i] for i in b) >= total

    def random_connected(n):
        edges = {(i, i + 1) for i in range(n - 1)}
        for u in range(n):
            for v in range(u + 1, n):
                if gen.random() < 0.25:
                    edges.add((u, v))
        return make_graph(n, sorted(edges))

    grouped = 0
    while grouped < 10 ** 3:
        n = int(gen.integers(5, 24))
        g = random_connected(n)
        terms = sorted(set(int(v)
                           for v in gen.permutation(n)[: int(gen.integers(2, n))]))
        r = int(gen.integers(1, min(3, len(terms)) + 1))
        try:
            gr = spanning_tree_grouping(g, terms, r)
        except ValueError:
            continue
        d = max(1, g.max_degree)
        floor = max(1, len(terms) // (d * r))
        seen: set[int] = set()
        for part, count in zip(gr.parts, gr.terminals_per_part):
            assert is_connected(g, within=part)
            assert not seen & set(part)
            seen.update(part)
            assert count >= floor
        grouped += 1

    for _ in range(10 ** 3):
        n = int(gen.integers(4, 18))
        g = random_connected(n)
        side = [int(v) for v in gen.permutation(n)[: int(gen.integers(1, n))]]
        cut = cut_of(g, side)
        fixed = connected_cut_repair(g, cut)
        assert fixed.sparsity <= cut.sparsity
        assert is_connected(g, within=fixed.side_a)
        assert is_connected(g, within=fixed.side_b)
    print("PASS criterion 8: 10^4 splits, 10^3 groupings, 10^3 repairs clean")


def _random_true_model(gen, g):
    n = g.n
    k = int(gen.integers(1, n + 1))
    seeds = [int(v) for v in gen.permutation(n)[:k]]
    owner = {s: i for i, s in enumerate(seeds)}
    frontier = list(seeds)
    while len(owner) < n:
        grow = [v for v in frontier for w in g.adj[v] if w not in owner]
        v = grow[int(gen.integers(len(grow)))]
        w = [w for w in g.adj[v] if w not in owner][0]
        owner[w] = owner[v]
        frontier.append(w)
    groups: dict[int, set[int]] = {}
    for v, i in owner.items():
        groups.setdefault(i, set()).add(v)
    labels = {i: j for j, i in enumerate(sorted(groups))}
    edges = set()
    witness = {}
    for u, v in g.edges():
        a, b = labels[owner[u]], labels[owner[v]]
        if a != b:
            e = (min(a, b), max(a, b))
            edges.add(e)
            witness.setdefault(e, (u, v) if a < b else (v, u))
    h = make_graph(len(groups), sorted(edges))
    branch = {labels[i]: frozenset(gs) for i, gs in groups.items()}
    return MinorModel(g, h, branch, {e: witness[e] for e in edges})


def test_criterion_09_oracle_agreement():
    gen = np.random.default_rng(0xACC9)
    confirmed = 0
    while confirmed < 200:
        n = int(gen.integers(3, 10))
        edges = [(a, b) for a in range(n) for b in range(a + 1, n)
                 if gen.random() < 0.45]
        if not edges:
            continue
        g = make_graph(n, edges)
        if not is_connected(g):
            continue
        m = _random_true_model(gen, g)
        assert verify_model(m).ok
        assert brute_force_is_minor(g, m.target)
        confirmed += 1
    c4 = generate(GenSpec("cycle", {"n": 4}))
    k3 = generate(GenSpec("clique", {"n": 3}))
    assert brute_force_is_minor(c4, k3)
    pet = petersen()
    assert brute_force_is_minor(pet, generate(GenSpec("clique", {"n": 5})))
    assert not brute_force_is_minor(pet, generate(GenSpec("clique", {"n": 6})))
    print("PASS criterion 9: 200 random models confirmed; "
          "C4/K3, Petersen/K5, Petersen/K6 fixtures exact")


def test_criterion_10_cli_determinism(workdir):
    host = graph_file(workdir, "c10_host",
                      generate(GenSpec("random-regular", {"n": 64, "d": 3},
                                       seed=21)))
    target = graph_file(workdir, "c10_target",
                        generate(GenSpec("cycle", {"n": 4})))
    bridge = graph_file(workdir, "c10_bridge",
                        generate(GenSpec("two-expanders-bridge",
                                         {"n": 32, "d": 3}, seed=3)))
    cases = [
        ("model", ["embed", "--host", host, "--target", target,
                   "--alpha", "1/8", "--seed", "123", "--retries", "5"],
         ["model.txt", "report.txt"]),
        ("cut", ["embed", "--host", bridge, "--target", target,
                 "--alpha", "1/4", "--seed", "9"],
         ["cut.txt", "report.txt"]),
    ]
    for tag, argv, files in cases:
        out_dir = workdir / f"c10_{tag}"
        argv = argv + ["--out-dir", str(out_dir)]
        snapshots = []
        rcs = []
        for _ in range(2):
            rcs.append(main(argv))
            snapshots.append({f: (out_dir / f).read_bytes() for f in files})
        assert rcs[0] == rcs[1]
        for fname in files:
            assert snapshots[0][fname] == snapshots[1][fname], \
                f"{tag}/{fname} differs between identical runs"
    g1 = workdir / "c10_gen_a.txt"
    g2 = workdir / "c10_gen_b.txt"
    for p in (g1, g2):
        assert main(["gen", "--kind", "random-regular", "--n", "128",
                     "--d", "3", "--seed", "7", "--out", str(p)]) == 0
    assert g1.read_bytes() == g2.read_bytes()
    print("PASS criterion 10: byte-identical model, cut, report, "
          "and graph files on seed replay")
