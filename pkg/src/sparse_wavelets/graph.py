"""Graphs and vertex signals.

Graphs are undirected, unweighted and immutable. Adjacency is kept in CSR
form so Laplacian products never materialize a dense matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph


class ParseError(ValueError):
    """Malformed graph or signal text."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(ValueError):
    """Structurally invalid graph (self-loop, duplicate edge, bad id)."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected unweighted graph on vertices ``0..n-1``.

    Use :meth:`from_edges` to build one; the constructor trusts its inputs.

    Attributes
    ----------
    n : int
        Number of vertices.
    edges : ndarray of shape (m, 2)
        Unordered pairs stored as ``u < v``, sorted lexicographically.
    indptr, indices : ndarray
        CSR adjacency; neighbor lists are sorted.
    """

    n: int
    edges: np.ndarray
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64).reshape(-1, 2)
        if n < 0:
            raise ValidationError("vertex count must be non-negative")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValidationError(f"edge endpoint out of range 0..{n - 1}")
        loops = arr[:, 0] == arr[:, 1]
        if loops.any():
            u = int(arr[loops][0, 0])
            raise ValidationError(f"self-loop at vertex {u}")
        canon = np.sort(arr, axis=1)
        uniq, counts = np.unique(canon, axis=0, return_counts=True)
        if (counts > 1).any():
            u, v = uniq[counts > 1][0]
            raise ValidationError(f"duplicate edge ({u}, {v})")
        return cls._from_canonical(n, uniq.reshape(-1, 2))

    @classmethod
    def _from_canonical(cls, n: int, edges: np.ndarray) -> "Graph":
        m = len(edges)
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        adj = sp.csr_array((np.ones(2 * m), (rows, cols)), shape=(n, n))
        adj.sort_indices()
        return cls(n, edges, adj.indptr.astype(np.int64), adj.indices.astype(np.int64))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def adjacency_matrix(self) -> sp.csr_array:
        data = np.ones(len(self.indices))
        return sp.csr_array((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def laplacian_matrix(self) -> sp.csr_array:
        return (sp.diags_array(self.degrees.astype(float)) - self.adjacency_matrix).tocsr()

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(v) for v in range(self.n)]

    @cached_property
    def components(self) -> tuple[int, np.ndarray]:
        """Connected components as ``(count, labels)``."""
        if self.n == 0:
            return 0, np.zeros(0, dtype=np.int64)
        k, labels = csgraph.connected_components(self.adjacency_matrix, directed=False)
        return int(k), labels

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def as_vertex_set(s: Iterable[int], n: int) -> np.ndarray:
    """Normalize ``s`` to a sorted array of distinct ids in ``0..n-1``."""
    arr = np.unique(np.asarray(list(s) if not isinstance(s, np.ndarray) else s,
                               dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise ValidationError(f"vertex id out of range 0..{n - 1}")
    return arr


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def load_graph(text: str) -> Graph:
    """Parse an edge list.

    One ``u v`` pair per line; ``#`` starts a comment. An optional header
    ``n <count>`` on the first data line fixes the vertex count, otherwise
    it is one more than the largest id seen.
    """
    n_header = None
    pairs = []
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        tokens = line.split()
        if first and tokens[0] == "n":
            if len(tokens) != 2:
                raise ParseError("header must be 'n <count>'", lineno)
            n_header = _parse_int(tokens[1], lineno)
            first = False
            continue
        first = False
        if len(tokens) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        u, v = (_parse_int(t, lineno) for t in tokens)
        if u == v:
            raise ValidationError(f"line {lineno}: self-loop at vertex {u}")
        pairs.append((u, v))
    n = n_header if n_header is not None else (1 + max(max(p) for p in pairs) if pairs else 0)
    return Graph.from_edges(n, pairs)


def _parse_int(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"not an integer: {token!r}", lineno) from None
    if value < 0:
        raise ParseError(f"negative vertex id {value}", lineno)
    return value


def format_graph(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def load_signal(text: str, n: int | None = None) -> np.ndarray:
    """Parse one decimal value per line (line order is vertex order)."""
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ParseError(f"not a number: {line!r}", lineno) from None
    w = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(w)):
        raise ValidationError("signal contains non-finite values")
    if n is not None and len(w) != n:
        raise ValidationError(f"signal has {len(w)} values, graph has {n} vertices")
    return w


def format_signal(w: np.ndarray) -> str:
    return "".join(f"{x:.12g}\n" for x in w)


def check_signal(g: Graph, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (g.n,):
        raise ValueError(f"signal length {w.shape} does not match n={g.n}")
    if not np.all(np.isfinite(w)):
        raise ValueError("signal contains non-finite values")
    return w


def laplacian_apply(g: Graph, x) -> np.ndarray:
    """Return ``L x`` with ``L = D - A``."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != g.n:
        raise ValueError(f"vector length {x.shape[0]} does not match n={g.n}")
    deg = g.degrees if x.ndim == 1 else g.degrees[:, None]
    return deg * x - g.adjacency_matrix @ x


def cut_size(g: Graph, s: Iterable[int]) -> int:
    """Number of edges with exactly one endpoint in ``s``."""
    s = as_vertex_set(s, g.n)
    mask = np.zeros(g.n, dtype=bool)
    mask[s] = True
    if g.m == 0:
        return 0
    return int(np.count_nonzero(mask[g.edges[:, 0]] != mask[g.edges[:, 1]]))


def cut_edges(g: Graph, s: Iterable[int], within: Iterable[int] | None = None) -> np.ndarray:
    """Edges crossing ``s``, optionally restricted to edges inside ``within``."""
    s = as_vertex_set(s, g.n)
    mask = np.zeros(g.n, dtype=bool)
    mask[s] = True
    e = g.edges
    crossing = mask[e[:, 0]] != mask[e[:, 1]]
    if within is not None:
        inside = np.zeros(g.n, dtype=bool)
        inside[as_vertex_set(within, g.n)] = True
        crossing &= inside[e[:, 0]] & inside[e[:, 1]]
    return e[crossing]


@dataclass(frozen=True)
class IdMap:
    """Bidirectional map between subgraph-local ids and parent-graph ids."""

    global_ids: np.ndarray

    def to_global(self, local) -> np.ndarray:
        return self.global_ids[np.asarray(local, dtype=np.int64)]

    def to_local(self, ids) -> np.ndarray:
        ids = np.asarray(ids, dtype=np.int64)
        pos = np.searchsorted(self.global_ids, ids)
        if np.any(pos >= len(self.global_ids)) or np.any(self.global_ids[np.minimum(pos, len(self.global_ids) - 1)] != ids):
            raise KeyError("vertex not in subgraph")
        return pos

    def as_dict(self) -> dict[int, int]:
        return {int(v): i for i, v in enumerate(self.global_ids)}


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, IdMap]:
    """Subgraph on ``s`` relabelled to ``0..|s|-1`` (ascending global id)."""
    s = as_vertex_set(s, g.n)
    if s.size == 0:
        raise ValueError("induced subgraph of an empty vertex set")
    local = np.full(g.n, -1, dtype=np.int64)
    local[s] = np.arange(s.size)
    e = g.edges
    keep = (local[e[:, 0]] >= 0) & (local[e[:, 1]] >= 0) if g.m else np.zeros(0, dtype=bool)
    sub_edges = local[e[keep]]
    # global order u<v and ascending relabelling preserve the canonical form
    return Graph._from_canonical(int(s.size), sub_edges.reshape(-1, 2)), IdMap(s)


def normalize_signal(w) -> np.ndarray:
    """Affine map onto [0, 1]; a constant signal maps to all zeros."""
    w = np.asarray(w, dtype=float)
    if not np.all(np.isfinite(w)):
        raise ValueError("signal contains non-finite values")
    if w.size == 0:
        return w.copy()
    lo, hi = w.min(), w.max()
    if hi == lo:
        return np.zeros_like(w)
    return (w - lo) / (hi - lo)
