"""Minor-model verification, model file IO, and the brute-force oracle."""
from __future__ import annotations

import numpy as np
import pytest

from expander_minors import (GenSpec, GraphFormatError, MinorModel,
                             brute_force_is_minor, generate, is_connected,
                             load_model, make_graph, save_model, verify_model)


def k4():
    return generate(GenSpec("clique", {"n": 4}))


def petersen():
    return make_graph(10, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                           (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
                           (0, 5), (1, 6), (2, 7), (3, 8), (4, 9)])


def identity_model(g):
    return MinorModel(g, g, {u: frozenset({u}) for u in range(g.n)},
                      {e: e for e in g.edge_list})


def test_identity_model_is_valid():
    res = verify_model(identity_model(k4()))
    assert res.ok and res.violations == ()


def test_violation_clauses():
    g = k4()
    c6 = generate(GenSpec("cycle", {"n": 6}))
    k2 = make_graph(2, [(0, 1)])
    # (i) branch set not connected in the host
    m = MinorModel(c6, k2, {0: frozenset({0, 3}), 1: frozenset({1})},
                   {(0, 1): (0, 1)})
    assert [v.clause for v in verify_model(m).violations] == ["i"]
    # (ii) branch sets overlap
    m = MinorModel(g, g, {0: frozenset({0, 1}), 1: frozenset({1}),
                          2: frozenset({2}), 3: frozenset({3})},
                   {e: e for e in g.edge_list})
    assert "ii" in {v.clause for v in verify_model(m).violations}
    # (iii) missing edge path
    paths = {e: e for e in g.edge_list if e != (2, 3)}
    m = MinorModel(g, g, {u: frozenset({u}) for u in range(4)}, paths)
    assert [str(v) for v in verify_model(m).violations] == ["(iii) 2 3"]
    # (iii) path endpoint outside its branch set
    m = MinorModel(g, k2, {0: frozenset({0}), 1: frozenset({1})},
                   {(0, 1): (0, 2)})
    assert [v.clause for v in verify_model(m).violations] == ["iii"]
    # (iv) two edge paths share an interior vertex
    k3 = make_graph(3, [(0, 1), (1, 2), (0, 2)])
    m = MinorModel(g, k3,
                   {0: frozenset({0}), 1: frozenset({1}), 2: frozenset({2})},
                   {(0, 1): (0, 3, 1), (1, 2): (1, 3, 2), (0, 2): (0, 2)})
    assert "iv" in {v.clause for v in verify_model(m).violations}


def test_interior_detour_is_allowed():
    k2 = make_graph(2, [(0, 1)])
    m = MinorModel(k4(), k2, {0: frozenset({0}), 1: frozenset({1})},
                   {(0, 1): (0, 2, 1)})
    assert verify_model(m).ok


def test_model_io_roundtrip(tmp_path):
    g = k4()
    m = identity_model(g)
    p1 = tmp_path / "m1.txt"
    p2 = tmp_path / "m2.txt"
    save_model(m, str(p1))
    back = load_model(str(p1), g, g)
    assert dict(back.branch_sets) == dict(m.branch_sets)
    assert dict(back.edge_paths) == dict(m.edge_paths)
    save_model(back, str(p2))
    assert p1.read_bytes() == p2.read_bytes()
    (tmp_path / "junk.txt").write_text("not a model\n")
    with pytest.raises(GraphFormatError):
        load_model(str(tmp_path / "junk.txt"), g, g)


def test_petersen_spoke_model_is_valid():
    pet = petersen()
    k5 = generate(GenSpec("clique", {"n": 5}))
    branch = {i: frozenset({i, i + 5}) for i in range(5)}
    paths = {}
    for a in range(5):
        for b in range(a + 1, 5):
            if pet.has_edge(a, b):
                paths[(a, b)] = (a, b)  # pentagon edge
            else:
                paths[(a, b)] = (a + 5, b + 5)  # pentagram edge
    res = verify_model(MinorModel(pet, k5, branch, paths))
    assert res.ok, res.violations


def test_brute_force_fixtures():
    c4 = generate(GenSpec("cycle", {"n": 4}))
    k3 = make_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert brute_force_is_minor(c4, k3)  # one contraction suffices
    p4 = generate(GenSpec("path", {"n": 4}))
    assert not brute_force_is_minor(p4, k3)  # trees host no cycles
    c6 = generate(GenSpec("cycle", {"n": 6}))
    assert not brute_force_is_minor(c6, k4())  # cycles are not 3-connected
    k5 = generate(GenSpec("clique", {"n": 5}))
    with pytest.raises(ValueError):
        brute_force_is_minor(k4(), k5)  # target exceeds the host
    with pytest.raises(ValueError):
        brute_force_is_minor(generate(GenSpec("cycle", {"n": 11})), k3)


def _random_true_model(gen, g):
    """Contract a random partition of g into connected groups; the quotient
    graph is a minor of g by construction."""
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
    groups = {}
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
    paths = {e: witness[e] for e in edges}
    return MinorModel(g, h, branch, paths)


def test_brute_force_confirms_random_valid_models():
    gen = np.random.default_rng(0x0C1)
    done = 0
    while done < 30:
        n = int(gen.integers(3, 9))
        edges = [(a, b) for a in range(n) for b in range(a + 1, n)
                 if gen.random() < 0.5]
        if not edges:
            continue
        g = make_graph(n, edges)
        if not is_connected(g):
            continue
        m = _random_true_model(gen, g)
        assert verify_model(m).ok
        assert brute_force_is_minor(g, m.target)
        done += 1
