"""Second Laplacian eigenvalue, sweep cuts, and exact edge expansion."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import rng
from .errors import ConvergenceError, DisconnectedGraphError
from .graphs import Cut, Graph, cut_of, is_connected

_SWEEP_CAP = 100_000


@dataclass(frozen=True)
class SpectralResult:
    lambda2: float
    fiedler: np.ndarray
    residual: float


def _laplacian(g: Graph) -> sp.csc_matrix:
    rows, cols, vals = [], [], []
    for v in range(g.n):
        rows.append(v)
        cols.append(v)
        vals.append(float(g.degree(v)))
    for u, v in g.edges():
        rows.extend((u, v))
        cols.extend((v, u))
        vals.extend((-1.0, -1.0))
    return sp.csc_matrix((vals, (rows, cols)), shape=(g.n, g.n))


def _canonical_sign(vec: np.ndarray) -> np.ndarray:
    for x in vec:
        if abs(x) > 1e-12:
            return vec if x > 0 else -vec
    return vec


def lambda2(g: Graph, tol: float = 1e-8) -> SpectralResult:
    """Second-smallest Laplacian eigenvalue with its eigenvector.

    Shifted inverse iteration on L + sI, deflating the all-ones direction
    after every solve.  Converged when ||L v - lam v|| <= tol for the unit
    iterate v.  Deterministic: the start vector comes from a fixed stream
    keyed by (n, m).
    """
    n = g.n
    if n < 2:
        raise ValueError("need at least two vertices")
    if not is_connected(g):
        raise DisconnectedGraphError("graph is disconnected; lambda2 would be 0")
    lap = _laplacian(g)
    shift = 1e-6 * max(1.0, float(g.max_degree))
    solver = spla.splu((lap + shift * sp.identity(n, format="csc")).tocsc())
    ones = np.ones(n) / np.sqrt(n)
    gen = rng.stream(0, n, g.m)
    v = gen.standard_normal(n)
    v -= ones * (ones @ v)
    norm = np.linalg.norm(v)
    if norm < 1e-12:  # absurdly unlucky start; fall back to a fixed vector
        v = np.arange(n, dtype=float) - (n - 1) / 2.0
        norm = np.linalg.norm(v)
    v /= norm
    lam = float(v @ (lap @ v))
    for _ in range(_SWEEP_CAP):
        w = solver.solve(v)
        w -= ones * (ones @ w)
        norm = np.linalg.norm(w)
        if norm < 1e-300:
            raise ConvergenceError("inverse iteration collapsed to zero")
        v = w / norm
        lv = lap @ v
        lam = float(v @ lv)
        residual = float(np.linalg.norm(lv - lam * v))
        if residual <= tol:
            return SpectralResult(lam, _canonical_sign(v), residual)
    raise ConvergenceError(
        f"eigensolver residual {residual:.3e} above {tol:.1e} after {_SWEEP_CAP} sweeps")


def sweep_cut(g: Graph, tol: float = 1e-8) -> Cut:
    """Best prefix cut of the Fiedler ordering (ties broken by vertex index).

    The returned sparsity is exact; it is at most sqrt(2 * max_degree * lambda2)
    up to the eigensolver tolerance.
    """
    if g.n < 2:
        raise ValueError("need at least two vertices")
    res = lambda2(g, tol)
    order = sorted(range(g.n), key=lambda v: (res.fiedler[v], v))
    in_a = [False] * g.n
    crossing = 0
    best_k = 1
    best = None  # (sparsity Fraction, k)
    for k, v in enumerate(order[:-1], start=1):
        crossing += g.degree(v) - 2 * sum(1 for y in g.adj[v] if in_a[y])
        in_a[v] = True
        spars = Fraction(crossing, min(k, g.n - k))
        if best is None or spars < best:
            best = spars
            best_k = k
    return cut_of(g, order[:best_k])


def exact_expansion(g: Graph) -> tuple[Fraction, Cut]:
    """Exact edge expansion by exhaustive enumeration (n <= 22).

    Walks all 2^(n-1) - 1 sides not containing vertex n-1 in Gray-code order,
    updating the crossing count incrementally.
    """
    n = g.n
    if n < 2:
        raise ValueError("need at least two vertices")
    if n > 22:
        raise ValueError("exhaustive expansion is limited to n <= 22")
    in_a = bytearray(n)
    size = 0
    crossing = 0
    best_num, best_den = -1, 1  # best sparsity num/den, invalid sentinel
    best_mask: list[int] = []
    for i in range(1, 1 << (n - 1)):
        v = (i & -i).bit_length() - 1  # Gray code: flip lowest set bit of i
        c_in = sum(1 for y in g.adj[v] if in_a[y])
        if in_a[v]:
            in_a[v] = 0
            size -= 1
            crossing -= g.degree(v) - 2 * c_in
        else:
            in_a[v] = 1
            size += 1
            crossing += g.degree(v) - 2 * c_in
        if size == 0:
            continue
        den = min(size, n - size)
        # crossing/den < best_num/best_den  <=>  crossing*best_den < best_num*den
        if best_num < 0 or crossing * best_den < best_num * den:
            best_num, best_den = crossing, den
            best_mask = [u for u in range(n) if in_a[u]]
    cut = cut_of(g, best_mask)
    return cut.sparsity, cut
