"""Dense reference solver for a single energy-maximizing sparse cut.

The relaxed problem is a Rayleigh quotient of

    M = P (C S C) P,   P = ((C + beta L)^+)^(1/2)

where ``C`` is the complete-graph Laplacian, ``L`` the induced-subgraph
Laplacian and ``S`` the matrix of squared signal differences. ``C S C`` is
rank one, ``-2 (Cw)(Cw)^T``, so M is negative semidefinite and its most
negative eigenvector is the relaxed cut. Rounding is a sweep over prefix
cuts in eigenvector order, scored by the exact coefficient energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, as_vertex_set, check_signal, induced_subgraph

PINV_RTOL = 1e-9
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class CutResult:
    """A bipartition of a vertex set; ``left`` holds the smallest vertex id."""

    left: np.ndarray
    right: np.ndarray
    cut_edges: np.ndarray
    energy: float
    beta: float = 0.0

    @property
    def cut_size(self) -> int:
        return len(self.cut_edges)

    def same_partition(self, other: "CutResult") -> bool:
        return np.array_equal(self.left, other.left) and np.array_equal(self.right, other.right)


@dataclass(frozen=True, eq=False)
class DenseOperatorBundle:
    """Dense ``C``, ``L``, ``S`` over a vertex subset (local indexing)."""

    graph: Graph
    ids: np.ndarray
    w: np.ndarray
    C: np.ndarray
    L: np.ndarray
    S: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.ids)

    @property
    def CSC(self) -> np.ndarray:
        if "CSC" not in self._cache:
            self._cache["CSC"] = self.C @ self.S @ self.C
        return self._cache["CSC"]

    def pinv_sqrt(self, beta: float) -> np.ndarray:
        """``((C + beta L)^+)^(1/2)`` with small eigenvalues treated as zero."""
        key = ("P", float(beta))
        if key not in self._cache:
            lam, U = np.linalg.eigh(self.C + beta * self.L)
            cutoff = PINV_RTOL * max(lam.max(), 0.0)
            inv = np.zeros_like(lam)
            ok = lam > cutoff
            inv[ok] = 1.0 / np.sqrt(lam[ok])
            self._cache[key] = (U * inv) @ U.T
        return self._cache[key]


def build_bundle(g: Graph, w, s) -> DenseOperatorBundle:
    w = check_signal(g, w)
    s = as_vertex_set(s, g.n)
    if len(s) < 2:
        raise ValueError("need at least two vertices")
    sub, idmap = induced_subgraph(g, s)
    k = len(s)
    ws = w[s]
    C = k * np.eye(k) - np.ones((k, k))
    L = sub.laplacian_matrix.toarray()
    S = (ws[:, None] - ws[None, :]) ** 2
    return DenseOperatorBundle(sub, s, ws, C, L, S)


def build_M(b: DenseOperatorBundle, beta: float) -> np.ndarray:
    if beta < 0:
        raise ValueError("beta must be non-negative")
    P = b.pinv_sqrt(beta)
    M = P @ b.CSC @ P
    return (M + M.T) / 2


def _fix_sign(v: np.ndarray) -> np.ndarray:
    scale = np.abs(v).max() if v.size else 0.0
    if scale == 0:
        return v
    first = np.flatnonzero(np.abs(v) > 1e-12 * scale)[0]
    return -v if v[first] < 0 else v


def min_eigenvector_dense(M) -> np.ndarray:
    """Unit eigenvector of the smallest eigenvalue; first nonzero entry positive."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if not np.any(M):
        e = np.zeros(n)
        e[0] = 1.0
        return e
    _, U = np.linalg.eigh(M)
    return _fix_sign(U[:, 0].copy())


def recover_x(b: DenseOperatorBundle, beta: float, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.shape != (b.size,):
        raise ValueError(f"vector length {y.shape} does not match {b.size}")
    return b.pinv_sqrt(beta) @ y


# --------------------------------------------------------------------------
# sweep rounding


def prefix_cut_sizes(sub: Graph, order: np.ndarray) -> np.ndarray:
    """Cut size of every proper prefix ``order[:k]``, ``k = 1..n-1``."""
    n = sub.n
    if sub.m == 0:
        return np.zeros(n - 1, dtype=np.int64)
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    ru = rank[sub.edges[:, 0]]
    rv = rank[sub.edges[:, 1]]
    lo, hi = np.minimum(ru, rv), np.maximum(ru, rv)
    # an edge crosses prefix k exactly when lo < k <= hi
    delta = np.zeros(n + 1, dtype=np.int64)
    np.add.at(delta, lo + 1, 1)
    np.add.at(delta, hi + 1, -1)
    return np.cumsum(delta)[1:n]


def prefix_energies(values: np.ndarray) -> np.ndarray:
    """Coefficient energy of every proper prefix split of ``values``."""
    n = len(values)
    k = np.arange(1, n)
    csum = np.cumsum(values)[:-1]
    total = values.sum()
    mean_i = csum / k
    mean_j = (total - csum) / (n - k)
    return (mean_i - mean_j) ** 2 * k * (n - k) / n


def _make_cut(g: Graph, s: np.ndarray, left_local: np.ndarray, w: np.ndarray | None,
              beta: float = 0.0) -> CutResult:
    mask = np.zeros(len(s), dtype=bool)
    mask[left_local] = True
    if not mask[0]:
        mask = ~mask
    left, right = s[mask], s[~mask]
    inside = np.zeros(g.n, dtype=bool)
    inside[s] = True
    on_left = np.zeros(g.n, dtype=bool)
    on_left[left] = True
    e = g.edges
    crossing = e[inside[e[:, 0]] & inside[e[:, 1]] & (on_left[e[:, 0]] != on_left[e[:, 1]])]
    energy = 0.0
    if w is not None:
        wl, wr = w[left], w[right]
        d = wl.mean() - wr.mean()
        energy = float(d * d * len(wl) * len(wr) / len(s))
    return CutResult(left, right, crossing.reshape(-1, 2), energy, beta)


def sweep_order(g: Graph, w, s, order, q: int, beta: float = 0.0) -> CutResult | None:
    """Best feasible prefix cut for an explicit local vertex ordering."""
    w = check_signal(g, w)
    s = as_vertex_set(s, g.n)
    if len(s) < 2:
        return None
    sub, _ = induced_subgraph(g, s)
    order = np.asarray(order, dtype=np.int64)
    sizes = prefix_cut_sizes(sub, order)
    energy = prefix_energies(w[s][order])
    feasible = sizes <= q
    if not feasible.any():
        return None
    scored = np.where(feasible, energy, -np.inf)
    k = int(np.argmax(scored)) + 1
    return _make_cut(g, s, order[:k], w, beta)


def sweep(x, g: Graph, w, s, q: int, beta: float = 0.0) -> CutResult | None:
    """Round ``x`` (indexed like sorted ``s``) to its best prefix cut with cut size <= q.

    Vertices are ordered by ascending ``x`` with ties broken by vertex id;
    among feasible prefixes the highest energy wins, earliest prefix on ties.
    """
    if q < 0:
        raise ValueError("q must be non-negative")
    s = as_vertex_set(s, g.n)
    x = np.asarray(x, dtype=float)
    if x.shape != (len(s),):
        raise ValueError("x must have one entry per vertex of s")
    order = np.lexsort((np.arange(len(s)), x))
    return sweep_order(g, w, s, order, q, beta)


# --------------------------------------------------------------------------
# golden-section search over the regularization


def _better(a: CutResult | None, b: CutResult | None) -> bool:
    """True when ``a`` strictly beats ``b``."""
    if a is None:
        return False
    return b is None or a.energy > b.energy


def swt_cut(g: Graph, w, s, q: int, beta_max: float = 1000.0,
            search_iters: int = 10) -> CutResult | None:
    """Best sparse cut over ``search_iters`` probes of ``beta`` in ``[0, beta_max]``.

    Both endpoints are probed first, then golden-section steps shrink the
    bracket toward the better interior probe. The best probe seen is kept
    because the swept energy is not unimodal in ``beta``.
    """
    if q < 1:
        raise ValueError("q must be at least 1")
    if beta_max <= 0:
        raise ValueError("beta_max must be positive")
    if search_iters < 2:
        raise ValueError("search_iters must be at least 2")
    w = check_signal(g, w)
    s = as_vertex_set(s, g.n)
    bundle = build_bundle(g, w, s)

    best: CutResult | None = None
    seen: dict[float, float] = {}

    def probe(beta: float) -> float:
        nonlocal best
        M = build_M(bundle, beta)
        y = min_eigenvector_dense(M)
        x = recover_x(bundle, beta, y)
        cut = sweep(x, g, w, s, q, beta)
        if _better(cut, best):
            best = cut
        seen[beta] = cut.energy if cut is not None else -np.inf
        return seen[beta]

    probe(0.0)
    probe(float(beta_max))
    budget = search_iters - 2
    a, b = 0.0, float(beta_max)
    if budget == 1:
        probe((a + b) / 2)
        budget = 0
    if budget >= 2:
        c = b - GOLDEN * (b - a)
        d = a + GOLDEN * (b - a)
        fc, fd = probe(c), probe(d)
        budget -= 2
        while budget > 0:
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - GOLDEN * (b - a)
                fc = probe(c)
            else:
                a, c, fc = c, d, fd
                d = a + GOLDEN * (b - a)
                fd = probe(d)
            budget -= 1
    return best
