"""Haar-like wavelet trees on graphs: transform, inverse and compression.

A tree recursively bipartitions the vertex set down to singletons. Each
internal node carries one weighted difference coefficient; together with the
signal mean these form an orthogonal expansion, so coefficient energies add
up to the signal energy and dropping coefficients has an exactly known cost.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .graph import Graph, as_vertex_set, cut_edges, induced_subgraph

AVERAGE_ID = -1
COEF_BITS = 64


class FormatError(ValueError):
    """Compressed or tree data that cannot be replayed against a graph."""


@dataclass(frozen=True, eq=False)
class TreeNode:
    id: int
    level: int
    members: np.ndarray
    parent: int | None
    children: tuple[int, int] | None = None
    adapted: bool = False
    cut_edges: np.ndarray | None = field(default=None, repr=False)
    side_bits: tuple[int, ...] = field(default=(), repr=False)

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class WaveletTree:
    """Binary hierarchy of vertex sets; ``nodes[i].id == i`` and the root is 0.

    Children always get larger ids than their parent, and the left child is
    the one holding the smallest vertex id.
    """

    n: int
    m: int
    nodes: tuple[TreeNode, ...]

    root = 0

    def internal_nodes(self) -> list[TreeNode]:
        return [nd for nd in self.nodes if not nd.is_leaf]

    def leaves(self) -> list[TreeNode]:
        return [nd for nd in self.nodes if nd.is_leaf]

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def adapted_cut_size(self) -> int:
        return sum(len(nd.cut_edges) for nd in self.nodes if nd.adapted and nd.cut_edges is not None)

    def validate(self) -> None:
        root = self.nodes[0]
        if not np.array_equal(root.members, np.arange(self.n)):
            raise ValueError("root must hold every vertex")
        for nd in self.nodes:
            if nd.is_leaf:
                if nd.size != 1:
                    raise ValueError(f"leaf {nd.id} is not a singleton")
                continue
            left, right = (self.nodes[c] for c in nd.children)
            if left.size == 0 or right.size == 0:
                raise ValueError(f"node {nd.id} has an empty child")
            both = np.concatenate([left.members, right.members])
            if len(np.unique(both)) != len(both) or not np.array_equal(np.sort(both), nd.members):
                raise ValueError(f"children of node {nd.id} do not partition it")
            if left.members[0] != nd.members[0]:
                raise ValueError(f"node {nd.id}: left child must hold the smallest id")

    def same_structure(self, other: "WaveletTree") -> bool:
        if len(self) != len(other) or self.n != other.n:
            return False
        return all(
            a.children == b.children and a.level == b.level and np.array_equal(a.members, b.members)
            for a, b in zip(self.nodes, other.nodes)
        )


class TreeBuilder:
    """Grows a :class:`WaveletTree` one split at a time.

    Ids are handed out sequentially, which is what lets a decoder that
    repeats the same splits in the same order reproduce every node id.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        self._members: list[np.ndarray] = [np.arange(graph.n)]
        self._level = [0]
        self._parent: list[int | None] = [None]
        self._children: list[tuple[int, int] | None] = [None]
        self._adapted = [False]
        self._cuts: list[np.ndarray | None] = [None]
        self._sides: list[tuple[int, ...]] = [()]

    def __len__(self) -> int:
        return len(self._members)

    def members(self, node: int) -> np.ndarray:
        return self._members[node]

    def is_leaf(self, node: int) -> bool:
        return self._children[node] is None

    def leaves(self) -> list[int]:
        return [i for i, c in enumerate(self._children) if c is None]

    def split(self, node: int, left: Iterable[int], adapted: bool = False) -> tuple[int, int]:
        if self._children[node] is not None:
            raise ValueError(f"node {node} is already split")
        members = self._members[node]
        left = as_vertex_set(left, self.graph.n)
        inside = np.isin(left, members)
        if not inside.all():
            raise ValueError("split side is not a subset of the node")
        right = np.setdiff1d(members, left, assume_unique=True)
        if left.size == 0 or right.size == 0:
            raise ValueError("split must leave both sides nonempty")
        if left[0] != members[0]:
            left, right = right, left
        crossing = cut_edges(self.graph, left, within=members)
        sides: tuple[int, ...] = ()
        if adapted:
            sides = encode_sides(self.graph, members, left, crossing)
        ids = []
        for part in (left, right):
            ids.append(len(self._members))
            self._members.append(part)
            self._level.append(self._level[node] + 1)
            self._parent.append(node)
            self._children.append(None)
            self._adapted.append(False)
            self._cuts.append(None)
            self._sides.append(())
        self._children[node] = (ids[0], ids[1])
        self._adapted[node] = adapted
        self._cuts[node] = crossing
        self._sides[node] = sides
        return ids[0], ids[1]

    def freeze(self) -> WaveletTree:
        nodes = tuple(
            TreeNode(i, self._level[i], self._members[i], self._parent[i], self._children[i],
                     self._adapted[i], self._cuts[i], self._sides[i])
            for i in range(len(self._members))
        )
        return WaveletTree(self.graph.n, self.graph.m, nodes)


def _cut_component_groups(graph: Graph, members: np.ndarray, crossing: np.ndarray):
    """Components of the node's induced subgraph once ``crossing`` is removed.

    Returns per-vertex component ranks (ordered by smallest member), the
    component-level adjacency induced by cut edges, and the components
    grouped by connectivity through cut edges, each group ordered by rank.
    """
    sub, idmap = induced_subgraph(graph, members)
    n = sub.n
    try:
        local_cut = idmap.to_local(crossing.reshape(-1)).reshape(-1, 2) if len(crossing) else np.zeros((0, 2), np.int64)
    except KeyError:
        raise FormatError("cut edge endpoint outside the node") from None
    local_cut = np.sort(local_cut, axis=1)
    if sub.m:
        codes = sub.edges[:, 0] * n + sub.edges[:, 1]
        cut_codes = local_cut[:, 0] * n + local_cut[:, 1]
        present = np.isin(cut_codes, codes)
        if not present.all():
            raise FormatError("cut edge is not an edge of the graph")
        keep = ~np.isin(codes, cut_codes)
        e = sub.edges[keep]
    else:
        if len(local_cut):
            raise FormatError("cut edge is not an edge of the graph")
        e = np.zeros((0, 2), np.int64)
    adj = sp.csr_array((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
    k, labels = csgraph.connected_components(adj, directed=False)
    first = np.full(k, n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(n))
    rank_of_label = np.empty(k, dtype=np.int64)
    rank_of_label[np.argsort(first, kind="stable")] = np.arange(k)
    comp = rank_of_label[labels]
    links: list[set[int]] = [set() for _ in range(k)]
    for u, v in local_cut:
        a, b = int(comp[u]), int(comp[v])
        if a == b:
            raise FormatError("cut edge joins vertices left connected after the cut")
        links[a].add(b)
        links[b].add(a)
    group_of = np.full(k, -1, dtype=np.int64)
    groups: list[list[int]] = []
    for start in range(k):
        if group_of[start] >= 0:
            continue
        gid = len(groups)
        order = [start]
        group_of[start] = gid
        for c in order:
            for d in sorted(links[c]):
                if group_of[d] < 0:
                    group_of[d] = gid
                    order.append(d)
        groups.append(order)
    return comp, links, groups


def encode_sides(graph: Graph, members: np.ndarray, left: np.ndarray, crossing: np.ndarray) -> tuple[int, ...]:
    """Extra bits needed to replay a split from its cut edges.

    One bit per group of components (after the first) that the cut edges do
    not tie to the group holding the smallest vertex.
    """
    comp, _, groups = _cut_component_groups(graph, members, crossing)
    in_left = np.isin(members, left)
    side_of_comp = np.zeros(comp.max() + 1, dtype=np.int64)
    side_of_comp[comp] = np.where(in_left, 0, 1)
    return tuple(int(side_of_comp[grp[0]]) for grp in groups[1:])


def decode_sides(graph: Graph, members: np.ndarray, crossing: np.ndarray,
                 sides: tuple[int, ...]) -> np.ndarray:
    """Inverse of :func:`encode_sides`: returns the left vertex set."""
    comp, links, groups = _cut_component_groups(graph, members, crossing)
    if len(sides) != len(groups) - 1:
        raise FormatError(f"expected {len(groups) - 1} side bits, got {len(sides)}")
    color = np.full(len(links), -1, dtype=np.int64)
    for gi, grp in enumerate(groups):
        color[grp[0]] = 0 if gi == 0 else int(sides[gi - 1])
        for c in grp:
            for d in links[c]:
                if color[d] < 0:
                    color[d] = 1 - color[c]
                elif color[d] == color[c]:
                    raise FormatError("cut edges do not describe a bipartition")
    left = members[color[comp] == 0]
    if len(left) == 0 or len(left) == len(members):
        raise FormatError("replayed cut leaves an empty side")
    return left


# --------------------------------------------------------------------------
# coefficients


def difference_coefficient(w, xi, xj) -> float:
    """Weighted difference of child sums for a node split into ``xi``, ``xj``."""
    w = np.asarray(w, dtype=float)
    xi = np.asarray(xi, dtype=np.int64)
    xj = np.asarray(xj, dtype=np.int64)
    ni, nj = len(xi), len(xj)
    if ni == 0 or nj == 0:
        raise ValueError("both sides of a split must be nonempty")
    if np.intersect1d(xi, xj).size:
        raise ValueError("split sides overlap")
    nk = ni + nj
    return (nj * w[xi].sum() - ni * w[xj].sum()) / nk


def coefficient_energy(a: float, size_i: int, size_j: int) -> float:
    if size_i < 1 or size_j < 1:
        raise ValueError("child sizes must be positive")
    return a * a / size_i + a * a / size_j


def energy_from_means(mean_i: float, mean_j: float, size_i: int, size_j: int) -> float:
    if size_i < 1 or size_j < 1:
        raise ValueError("child sizes must be positive")
    d = mean_i - mean_j
    return d * d * size_i * size_j / (size_i + size_j)


@dataclass(frozen=True)
class Transform:
    average: float
    diffs: dict[int, float]

    def energies(self, tree: WaveletTree) -> dict[int, float]:
        out = {}
        for node_id, a in self.diffs.items():
            left, right = tree.nodes[node_id].children
            out[node_id] = coefficient_energy(a, tree.nodes[left].size, tree.nodes[right].size)
        return out

    def total_energy(self, tree: WaveletTree) -> float:
        return tree.n * self.average ** 2 + sum(self.energies(tree).values())


def _check_tree_signal(t: WaveletTree, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (t.n,):
        raise ValueError(f"signal length {w.shape} does not match tree size {t.n}")
    return w


def transform(t: WaveletTree, w) -> Transform:
    w = _check_tree_signal(t, w)
    sums = np.zeros(len(t))
    for nd in reversed(t.nodes):
        if nd.is_leaf:
            sums[nd.id] = w[nd.members].sum()
        else:
            sums[nd.id] = sums[nd.children[0]] + sums[nd.children[1]]
    diffs = {}
    for nd in t.nodes:
        if nd.is_leaf:
            continue
        li, ri = nd.children
        ni, nj = t.nodes[li].size, t.nodes[ri].size
        diffs[nd.id] = float((nj * sums[li] - ni * sums[ri]) / (ni + nj))
    return Transform(float(w.mean()) if t.n else 0.0, diffs)


def inverse(t: WaveletTree, c: Transform) -> np.ndarray:
    value = np.zeros(len(t))
    value[0] = c.average
    out = np.zeros(t.n)
    for nd in t.nodes:
        if nd.is_leaf:
            out[nd.members] = value[nd.id]
            continue
        try:
            a = c.diffs[nd.id]
        except KeyError:
            raise ValueError(f"missing coefficient for node {nd.id}") from None
        li, ri = nd.children
        value[li] = value[nd.id] + a / t.nodes[li].size
        value[ri] = value[nd.id] - a / t.nodes[ri].size
    return out


# --------------------------------------------------------------------------
# compression


@dataclass(frozen=True)
class StoredCut:
    node: int
    edges: np.ndarray
    sides: tuple[int, ...] = ()


@dataclass(frozen=True)
class CompressedSignal:
    """Kept coefficients plus the signal-adapted cuts needed to rebuild the tree.

    ``expected_sq_error`` is the summed energy of dropped coefficients, which
    equals the squared L2 distance between the signal and its reconstruction.
    """

    n: int
    m: int
    keep: int
    cuts: tuple[StoredCut, ...]
    coefs: dict[int, float]
    average: float | None
    expected_sq_error: float = 0.0
    signal_energy: float = 0.0
    norm: tuple[float, float] | None = None

    @property
    def budget_used(self) -> int:
        return sum(len(c.edges) for c in self.cuts)

    @property
    def bits_per_edge(self) -> int:
        return max(1, math.ceil(math.log2(self.m))) if self.m > 1 else 1

    @property
    def size_bits(self) -> int:
        kept = len(self.coefs) + (self.average is not None)
        side_bits = sum(len(c.sides) for c in self.cuts)
        return COEF_BITS * kept + self.bits_per_edge * self.budget_used + side_bits

    @property
    def size_fraction(self) -> float:
        return self.size_bits / (COEF_BITS * self.n) if self.n else 0.0

    @property
    def relative_error(self) -> float:
        """Dropped energy over signal energy (squared-norm ratio)."""
        return self.expected_sq_error / self.signal_energy if self.signal_energy > 0 else 0.0


def ranked_coefficients(t: WaveletTree, c: Transform) -> list[tuple[int, float, float]]:
    """``(node_id, value, energy)`` sorted by decreasing energy, ties by node id.

    The average uses id ``AVERAGE_ID`` and energy ``n * mean**2``.
    """
    energies = c.energies(t)
    items = [(AVERAGE_ID, c.average, t.n * c.average ** 2)]
    items += [(k, c.diffs[k], energies[k]) for k in sorted(c.diffs)]
    return sorted(items, key=lambda it: (-it[2], it[0]))


def _check_replayable(t: WaveletTree) -> None:
    adapted_first = [nd.children[0] for nd in t.nodes if not nd.is_leaf and nd.adapted]
    structural_first = [nd.children[0] for nd in t.nodes if not nd.is_leaf and not nd.adapted]
    if adapted_first and structural_first and max(adapted_first) > min(structural_first):
        raise ValueError("tree is not replayable: a signal-adapted split follows a structural one")


def compress(t: WaveletTree, w, keep: int) -> CompressedSignal:
    """Keep the ``keep`` highest-energy coefficients (average included)."""
    if keep < 0:
        raise ValueError("keep must be non-negative")
    w = _check_tree_signal(t, w)
    _check_replayable(t)
    coeffs = transform(t, w)
    ranked = ranked_coefficients(t, coeffs)
    if keep > len(ranked):
        warnings.warn(f"keep={keep} exceeds {len(ranked)} coefficients; clamped", stacklevel=2)
        keep = len(ranked)
    kept, dropped = ranked[:keep], ranked[keep:]
    average = next((float(v) for k, v, _ in kept if k == AVERAGE_ID), None)
    coefs = {k: float(v) for k, v, _ in kept if k != AVERAGE_ID}
    adapted = sorted((nd for nd in t.nodes if not nd.is_leaf and nd.adapted),
                     key=lambda nd: nd.children[0])
    cuts = tuple(StoredCut(nd.id, nd.cut_edges, nd.side_bits) for nd in adapted)
    return CompressedSignal(
        n=t.n, m=t.m, keep=keep, cuts=cuts, coefs=coefs, average=average,
        expected_sq_error=float(sum(e for _, _, e in dropped)),
        signal_energy=float(w @ w),
    )


def replay_tree(c: CompressedSignal, g: Graph) -> WaveletTree:
    """Rebuild the full tree: stored cuts first, then structural refinement."""
    from .basis import refine_structural

    if (c.n, c.m) != (g.n, g.m):
        raise FormatError(f"compressed data is for n={c.n}, m={c.m}; graph has n={g.n}, m={g.m}")
    builder = TreeBuilder(g)
    for cut in c.cuts:
        if cut.node >= len(builder) or not builder.is_leaf(cut.node):
            raise FormatError(f"stored cut refers to unavailable node {cut.node}")
        members = builder.members(cut.node)
        left = decode_sides(g, members, np.asarray(cut.edges, dtype=np.int64).reshape(-1, 2), cut.sides)
        builder.split(cut.node, left, adapted=True)
    refine_structural(builder)
    return builder.freeze()


def decompress(c: CompressedSignal, g: Graph) -> np.ndarray:
    t = replay_tree(c, g)
    diffs = {nd.id: 0.0 for nd in t.internal_nodes()}
    for node_id, value in c.coefs.items():
        if node_id not in diffs:
            raise FormatError(f"coefficient for unknown internal node {node_id}")
        diffs[node_id] = value
    out = inverse(t, Transform(c.average if c.average is not None else 0.0, diffs))
    if c.norm is not None:
        offset, scale = c.norm
        out = offset + scale * out
    return out


# --------------------------------------------------------------------------
# text formats


def format_compressed(c: CompressedSignal) -> str:
    lines = [f"{c.n} {c.m} {c.keep} {c.budget_used}",
             f"# size_bits {c.size_bits} size_fraction {c.size_fraction:.12g} "
             f"expected_sq_error {c.expected_sq_error:.12g}"]
    for cut in c.cuts:
        parts = ["cut", str(cut.node)] + [str(int(x)) for x in np.asarray(cut.edges).reshape(-1)]
        if cut.sides:
            parts += ["sides", "".join(map(str, cut.sides))]
        lines.append(" ".join(parts))
    for node_id in sorted(c.coefs):
        lines.append(f"coef {node_id} {float(c.coefs[node_id])!r}")
    if c.average is not None:
        lines.append(f"avg {float(c.average)!r}")
    if c.norm is not None:
        lines.append(f"norm {float(c.norm[0])!r} {float(c.norm[1])!r}")
    return "\n".join(lines) + "\n"


def parse_compressed(text: str) -> CompressedSignal:
    header = None
    cuts, coefs = [], {}
    average = None
    norm = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if header is None:
                if len(tok) != 4:
                    raise FormatError("header must be 'n m keep budget'")
                header = tuple(int(x) for x in tok)
            elif tok[0] == "cut":
                sides: tuple[int, ...] = ()
                body = tok[2:]
                if "sides" in body:
                    k = body.index("sides")
                    bits = "".join(body[k + 1:])
                    if set(bits) - {"0", "1"}:
                        raise FormatError("side bits must be 0/1")
                    sides = tuple(int(b) for b in bits)
                    body = body[:k]
                if len(body) % 2:
                    raise FormatError("cut needs an even number of endpoints")
                edges = np.array([int(x) for x in body], dtype=np.int64).reshape(-1, 2)
                cuts.append(StoredCut(int(tok[1]), edges, sides))
            elif tok[0] == "coef" and len(tok) == 3:
                coefs[int(tok[1])] = float(tok[2])
            elif tok[0] == "avg" and len(tok) == 2:
                average = float(tok[1])
            elif tok[0] == "norm" and len(tok) == 3:
                norm = (float(tok[1]), float(tok[2]))
            else:
                raise FormatError(f"unrecognized line {line!r}")
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    if header is None:
        raise FormatError("missing header")
    n, m, keep, budget = header
    c = CompressedSignal(n, m, keep, tuple(cuts), coefs, average, norm=norm)
    if c.budget_used != budget:
        raise FormatError(f"header budget {budget} != stored cut edges {c.budget_used}")
    return c


def format_tree(t: WaveletTree) -> str:
    lines = [f"n {t.n} nodes {len(t)}"]
    for nd in t.nodes:
        parent = "-" if nd.parent is None else str(nd.parent)
        kind = "adapted" if nd.adapted else "structural"
        members = " ".join(str(int(v)) for v in nd.members)
        lines.append(f"node {nd.id} {nd.level} {parent} {kind} members: {members}")
    return "\n".join(lines) + "\n"


def parse_tree(text: str, g: Graph) -> WaveletTree:
    """Read a tree file back, recomputing cut edges against ``g``."""
    rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    head = rows[0].split() if rows else []
    if len(head) != 4 or head[0] != "n" or head[2] != "nodes":
        raise FormatError("tree header must be 'n <n> nodes <count>'")
    n, count = int(head[1]), int(head[3])
    if n != g.n:
        raise FormatError("tree size does not match graph")
    parent: dict[int, int | None] = {}
    adapted: dict[int, bool] = {}
    members: dict[int, np.ndarray] = {}
    for r in rows[1:]:
        left, _, tail = r.partition("members:")
        tok = left.split()
        if len(tok) != 5 or tok[0] != "node":
            raise FormatError(f"bad node line {r!r}")
        node_id = int(tok[1])
        parent[node_id] = None if tok[3] == "-" else int(tok[3])
        adapted[node_id] = tok[4] == "adapted"
        members[node_id] = np.array([int(x) for x in tail.split()], dtype=np.int64)
    if len(parent) != count:
        raise FormatError("node count mismatch")
    builder = TreeBuilder(g)
    for node_id in range(1, count, 2):
        p = parent.get(node_id)
        if p is None or parent.get(node_id + 1) != p:
            raise FormatError(f"nodes {node_id} and {node_id + 1} are not siblings")
        lid, _ = builder.split(p, members[node_id], adapted=adapted[p])
        if lid != node_id:
            raise FormatError("node ids are not in creation order")
    t = builder.freeze()
    t.validate()
    return t


def tree_from_partitions(g: Graph, splits: Iterable[tuple[int, Iterable[int]]], adapted: bool = True) -> WaveletTree:
    """Build a tree from ``(node_id, left_side)`` splits applied in order."""
    builder = TreeBuilder(g)
    for node, left in splits:
        builder.split(node, left, adapted=adapted)
    return builder.freeze()


def with_norm(c: CompressedSignal, offset: float, scale: float) -> CompressedSignal:
    return replace(c, norm=(float(offset), float(scale)))
