"""Greedy construction of a full wavelet tree under an edge budget.

Signal-adapted cuts are committed greedily by energy while the remaining
budget allows; everything left over is refined with signal-independent
ratio cuts, which a decoder can recompute from the graph alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import eigsh

from .graph import Graph, as_vertex_set, check_signal, induced_subgraph
from .spectral import CutResult, _make_cut, prefix_cut_sizes, swt_cut
from .wavelet import TreeBuilder, WaveletTree

DENSE_FIEDLER_LIMIT = 1024
SHIFT = 1e-2


@dataclass(frozen=True)
class BasisConfig:
    q: int = 0
    algo: str = "fswt"
    beta_max: float = 1000.0
    search_iters: int = 10
    cheb_p: int = 20
    power_iters: int = 10
    seed: int = 1

    def __post_init__(self):
        if self.q < 0:
            raise ValueError("q must be non-negative")
        if self.algo not in ("swt", "fswt"):
            raise ValueError(f"unknown cut algorithm {self.algo!r}")


def dense_laplacian(g: Graph) -> np.ndarray:
    L = np.zeros((g.n, g.n))
    u, v = g.edges[:, 0], g.edges[:, 1]
    L[u, v] = -1.0
    L[v, u] = -1.0
    L[np.arange(g.n), np.arange(g.n)] = g.degrees
    return L


def fiedler_vector(sub: Graph) -> np.ndarray:
    """Second-smallest Laplacian eigenvector of a connected graph.

    Small graphs use a dense eigensolver. Larger ones use shift-invert
    Lanczos just below zero from a fixed start vector, so the result is
    reproducible. The sign is fixed so the first nonzero entry is positive.
    """
    n = sub.n
    if n <= DENSE_FIEDLER_LIMIT:
        _, U = np.linalg.eigh(dense_laplacian(sub))
        v = U[:, 1]
    else:
        v0 = np.cos(np.arange(n) * 1.618033988749895) + 1.0
        lam, U = eigsh(sub.laplacian_matrix.tocsc(), k=2, sigma=-SHIFT, which="LM", v0=v0)
        v = U[:, np.argsort(lam)[1]]
    scale = np.abs(v).max()
    first = np.flatnonzero(np.abs(v) > 1e-12 * scale)[0]
    return -v if v[first] < 0 else v


def ratio_cut(g: Graph, s, w=None) -> CutResult:
    """Signal-independent split of ``s`` minimizing ``cut / (|Xi| |Xj|)``.

    A disconnected induced subgraph loses the component holding its smallest
    vertex at zero cost. ``w``, when given, only fills in the cut energy.
    """
    s = as_vertex_set(s, g.n)
    if len(s) < 2:
        raise ValueError("need at least two vertices")
    if w is not None:
        w = check_signal(g, w)
    sub, _ = induced_subgraph(g, s)
    k, labels = sub.components
    if k > 1:
        return _make_cut(g, s, np.flatnonzero(labels == labels[0]), w)
    x = fiedler_vector(sub)
    order = np.lexsort((np.arange(sub.n), x))
    sizes = prefix_cut_sizes(sub, order)
    prefix = np.arange(1, sub.n)
    ratio = sizes / (prefix * (sub.n - prefix))
    best = int(np.argmin(ratio)) + 1
    return _make_cut(g, s, order[:best], w)


def refine_structural(builder: TreeBuilder) -> None:
    """Split every non-singleton leaf with ratio cuts down to singletons.

    Leaves are taken in ascending smallest-member order and each subtree is
    finished depth-first, left child first.
    """
    g = builder.graph
    pending = sorted((i for i in builder.leaves() if len(builder.members(i)) > 1),
                     key=lambda i: builder.members(i)[0])
    stack = list(reversed(pending))
    while stack:
        node = stack.pop()
        members = builder.members(node)
        if len(members) < 2:
            continue
        cut = ratio_cut(g, members)
        left, right = builder.split(node, cut.left, adapted=False)
        stack.append(right)
        stack.append(left)


def _candidate(g: Graph, w: np.ndarray, members: np.ndarray, budget: int,
               cfg: BasisConfig) -> CutResult | None:
    if cfg.algo == "swt":
        return swt_cut(g, w, members, budget, cfg.beta_max, cfg.search_iters)
    from .fast import fswt_cut

    return fswt_cut(g, w, members, budget, cfg.cheb_p, cfg.power_iters, cfg.seed)


def _connected(g: Graph, members: np.ndarray) -> bool:
    sub, _ = induced_subgraph(g, members)
    return sub.components[0] == 1


def build_basis(g: Graph, w, cfg: BasisConfig) -> WaveletTree:
    """Greedy budgeted wavelet tree, completed with structural ratio cuts.

    Once the budget is spent, disconnected leaves can still take zero-cost
    adapted splits; connected leaves wait for the structural pass. A zero
    budget skips the greedy phase entirely, so ``q=0`` gives the GWT tree.
    """
    w = check_signal(g, w)
    builder = TreeBuilder(g)
    remaining = cfg.q
    tol = 1e-12 * max(float(w @ w), 1e-300)
    cache: dict[int, CutResult | None] = {}
    active = [0] if g.n > 1 and cfg.q > 0 else []
    while active:
        if remaining == 0:
            active = [i for i in active if not _connected(g, builder.members(i))]
        for node in active:
            cached = cache.get(node, "missing")
            if cached == "missing" or (cached is not None and cached.cut_size > remaining):
                members = builder.members(node)
                vals = w[members]
                flat = float(((vals - vals.mean()) ** 2).sum()) <= tol
                cache[node] = None if flat else _candidate(g, w, members, max(remaining, 1), cfg)
        live = [(cache[i].energy, i) for i in active
                if cache[i] is not None and cache[i].cut_size <= remaining and cache[i].energy > tol]
        if not live:
            break
        _, node = max(live, key=lambda t: (t[0], -t[1]))
        cut = cache.pop(node)
        left, right = builder.split(node, cut.left, adapted=True)
        remaining -= cut.cut_size
        active = [i for i in active if i != node and cache.get(i, "missing") is not None]
        active += [c for c in (left, right) if len(builder.members(c)) > 1]
    refine_structural(builder)
    return builder.freeze()


def gwt_tree(g: Graph) -> WaveletTree:
    """Signal-independent tree from recursive ratio cuts."""
    builder = TreeBuilder(g)
    refine_structural(builder)
    return builder.freeze()
