"""Reproducible graph generators.

Every random kind draws from a counter-based Philox stream keyed by
(seed, kind tag, attempt), so the same GenSpec always yields the same graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import rng
from .errors import ConvergenceError
from .graphs import Graph, is_connected, make_graph

_KIND_TAG = {
    "cycle": 1,
    "path": 2,
    "grid": 3,
    "clique": 4,
    "barbell": 5,
    "two-expanders-bridge": 6,
    "gnp": 7,
    "random-regular": 8,
}

_REJECTION_CAP = 2000


@dataclass(frozen=True)
class GenSpec:
    kind: str
    params: Mapping[str, object] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in _KIND_TAG:
            raise ValueError(f"unknown generator kind {self.kind!r}; "
                             f"choose from {sorted(_KIND_TAG)}")


def _int_param(spec: GenSpec, name: str, minimum: int) -> int:
    if name not in spec.params:
        raise ValueError(f"{spec.kind} requires parameter {name!r}")
    val = int(spec.params[name])
    if val < minimum:
        raise ValueError(f"{spec.kind} parameter {name}={val} below minimum {minimum}")
    return val


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return make_graph(n, [(i, i + 1) for i in range(n - 1)])


def grid_graph(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise ValueError("grid needs a, b >= 1")
    edges = []
    for i in range(a):
        for j in range(b):
            v = i * b + j
            if j + 1 < b:
                edges.append((v, v + 1))
            if i + 1 < a:
                edges.append((v, v + b))
    return make_graph(a * b, edges)


def clique_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("clique needs n >= 1")
    return make_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def barbell_graph(k: int) -> Graph:
    """Two k-cliques joined by the single edge (k-1, k)."""
    if k < 3:
        raise ValueError("barbell needs clique size k >= 3")
    edges = [(u, v) for u in range(k) for v in range(u + 1, k)]
    edges += [(k + u, k + v) for u in range(k) for v in range(u + 1, k)]
    edges.append((k - 1, k))
    return make_graph(2 * k, edges)


def gnp_graph(n: int, p: float, seed: int) -> Graph:
    if n < 1:
        raise ValueError("gnp needs n >= 1")
    if not (0.0 <= p <= 1.0):
        raise ValueError("gnp needs p in [0,1]")
    gen = rng.stream(seed, _KIND_TAG["gnp"])
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if gen.random() < p]
    return make_graph(n, edges)


def random_regular_graph(n: int, d: int, seed: int) -> Graph:
    """Connected simple d-regular graph via the configuration model with
    rejection (loops, multi-edges, or disconnection restart the pairing)."""
    if n < 1 or d < 0 or d >= n:
        raise ValueError("random-regular needs 0 <= d < n")
    if (n * d) % 2 != 0:
        raise ValueError("random-regular needs n*d even")
    if d == 0:
        if n == 1:
            return make_graph(1, [])
        raise ValueError("d = 0 cannot be connected for n > 1")
    stubs = [v for v in range(n) for _ in range(d)]
    for attempt in range(_REJECTION_CAP):
        gen = rng.stream(seed, _KIND_TAG["random-regular"], attempt)
        order = gen.permutation(len(stubs))
        shuffled = [stubs[i] for i in order]
        seen: set[tuple[int, int]] = set()
        ok = True
        for i in range(0, len(shuffled), 2):
            u, v = shuffled[i], shuffled[i + 1]
            if u == v:
                ok = False
                break
            e = (u, v) if u < v else (v, u)
            if e in seen:
                ok = False
                break
            seen.add(e)
        if not ok:
            continue
        g = make_graph(n, sorted(seen))
        if not is_connected(g):
            continue
        assert all(g.degree(v) == d for v in range(n))
        return g
    raise ConvergenceError(
        f"configuration model rejected {_REJECTION_CAP} pairings for "
        f"random-regular(n={n}, d={d}, seed={seed})")


def two_expanders_bridge(n: int, d: int, seed: int) -> Graph:
    """Two disjoint random d-regular blocks of n vertices each, joined by the
    single bridge edge (0, n).  The block cut has sparsity exactly 1/n."""
    if n < 2:
        raise ValueError("two-expanders-bridge needs block size n >= 2")
    left = random_regular_graph(n, d, rng.derive(seed, _KIND_TAG["two-expanders-bridge"], 0))
    right = random_regular_graph(n, d, rng.derive(seed, _KIND_TAG["two-expanders-bridge"], 1))
    edges = list(left.edges())
    edges += [(n + u, n + v) for u, v in right.edges()]
    edges.append((0, n))
    return make_graph(2 * n, edges)


def generate(spec: GenSpec) -> Graph:
    """Build the graph described by spec; deterministic per (kind, params, seed)."""
    kind = spec.kind
    if kind == "cycle":
        return cycle_graph(_int_param(spec, "n", 3))
    if kind == "path":
        return path_graph(_int_param(spec, "n", 1))
    if kind == "grid":
        return grid_graph(_int_param(spec, "a", 1), _int_param(spec, "b", 1))
    if kind == "clique":
        return clique_graph(_int_param(spec, "n", 1))
    if kind == "barbell":
        return barbell_graph(_int_param(spec, "k", 3))
    if kind == "gnp":
        n = _int_param(spec, "n", 1)
        if "p" not in spec.params:
            raise ValueError("gnp requires parameter 'p'")
        return gnp_graph(n, float(spec.params["p"]), spec.seed)
    if kind == "random-regular":
        return random_regular_graph(_int_param(spec, "n", 1),
                                    _int_param(spec, "d", 0), spec.seed)
    if kind == "two-expanders-bridge":
        return two_expanders_bridge(_int_param(spec, "n", 2),
                                    _int_param(spec, "d", 1), spec.seed)
    raise AssertionError(f"unhandled kind {kind!r}")
