"""Error-versus-size benchmark of wavelet and Fourier representations."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .baselines import fourier_basis, gft_compress
from .basis import BasisConfig, build_basis, gwt_tree
from .graph import Graph, check_signal, normalize_signal
from .wavelet import COEF_BITS, CompressedSignal, WaveletTree, compress, decompress

METHODS = ("fswt", "swt", "gwt", "gft")
DEFAULT_GRID = (0.02, 0.05, 0.1, 0.2)
# shares of the bit budget offered to cut edges when choosing q
EDGE_SHARES = (0.25, 0.5, 0.75)


@dataclass(frozen=True)
class BenchRecord:
    method: str
    size_fraction: float
    l2_error: float
    seconds: float
    note: str = ""


def _keep_for(bits: int, cut_bits: int, limit: int) -> int:
    return int(min(max((bits - cut_bits) // COEF_BITS, 0), limit))


def _cut_bits(t: WaveletTree, c_template: CompressedSignal) -> int:
    side = sum(len(nd.side_bits) for nd in t.internal_nodes() if nd.adapted)
    return c_template.bits_per_edge * t.adapted_cut_size + side


def budget_candidates(n: int, m: int, grid: Sequence[float],
                      shares: Sequence[float] = EDGE_SHARES) -> list[int]:
    """Edge budgets tried for every grid point (shared so errors stay monotone)."""
    bpe = max(1, math.ceil(math.log2(m))) if m > 1 else 1
    qs = {0}
    for f in grid:
        for share in shares:
            qs.add(int(share * f * COEF_BITS * n // bpe))
    return sorted(qs)


def _wavelet_rows(g: Graph, w: np.ndarray, method: str, grid: Sequence[float],
                  cfg: BasisConfig) -> list[BenchRecord]:
    trees: list[tuple[WaveletTree, float]] = []
    for q in budget_candidates(g.n, g.m, grid):
        start = time.perf_counter()
        t = build_basis(g, w, replace(cfg, q=q, algo=method))
        trees.append((t, time.perf_counter() - start))
    rows = []
    for f in grid:
        bits = int(f * COEF_BITS * g.n)
        best = None
        for t, build_s in trees:
            start = time.perf_counter()
            probe = compress(t, w, 0)
            cut_bits = _cut_bits(t, probe)
            if cut_bits > bits:
                continue
            c = compress(t, w, _keep_for(bits, cut_bits, g.n))
            rec = decompress(c, g)
            err = float(np.linalg.norm(w - rec))
            seconds = build_s + time.perf_counter() - start
            if best is None or err < best.l2_error:
                best = BenchRecord(method, c.size_fraction, err, seconds, f"q={t.adapted_cut_size}")
        rows.append(best)
    return rows


def _gwt_rows(g: Graph, w: np.ndarray, grid: Sequence[float]) -> list[BenchRecord]:
    start = time.perf_counter()
    t = gwt_tree(g)
    build_s = time.perf_counter() - start
    rows = []
    for f in grid:
        start = time.perf_counter()
        keep = min(int(f * g.n), g.n)
        c = compress(t, w, keep)
        err = float(np.linalg.norm(w - decompress(c, g)))
        # baselines pay for coefficients only
        rows.append(BenchRecord("gwt", keep / g.n, err, build_s + time.perf_counter() - start))
    return rows


def _gft_rows(g: Graph, w: np.ndarray, grid: Sequence[float]) -> list[BenchRecord]:
    start = time.perf_counter()
    try:
        basis = fourier_basis(g)
    except ValueError as exc:
        return [BenchRecord("gft", math.nan, math.nan, 0.0, str(exc)) for _ in grid]
    build_s = time.perf_counter() - start
    rows = []
    for f in grid:
        start = time.perf_counter()
        res = gft_compress(g, w, min(int(f * g.n), g.n), basis)
        rows.append(BenchRecord("gft", res.size_fraction, res.l2_error,
                                build_s + time.perf_counter() - start))
    return rows


def run_bench(g: Graph, w, methods: Iterable[str] = METHODS,
              grid: Sequence[float] = DEFAULT_GRID,
              cfg: BasisConfig = BasisConfig()) -> list[BenchRecord]:
    """One record per (method, grid point) on the signal normalized to [0, 1].

    ``l2_error`` is the measured ``||w - w'||_2`` of the actual reconstruction.
    Wavelet methods with cuts pay 64 bits per kept coefficient plus the cut
    edges; for each grid point the best of a fixed set of edge budgets is
    reported. ``gwt`` and ``gft`` pay for coefficients only.
    """
    w = normalize_signal(check_signal(g, w))
    grid = sorted(float(f) for f in grid)
    if any(not 0 <= f <= 1 for f in grid):
        raise ValueError("size fractions must lie in [0, 1]")
    rows: list[BenchRecord] = []
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
        if method in ("fswt", "swt"):
            rows += [r if r is not None else BenchRecord(method, f, math.nan, 0.0, "no feasible size")
                     for f, r in zip(grid, _wavelet_rows(g, w, method, grid, cfg))]
        elif method == "gwt":
            rows += _gwt_rows(g, w, grid)
        else:
            rows += _gft_rows(g, w, grid)
    return rows


def format_bench(rows: Sequence[BenchRecord], with_seconds: bool = True) -> str:
    lines = ["method\tsize_fraction\tl2_error\tseconds"]
    for r in rows:
        secs = f"{r.seconds:.12g}" if with_seconds else "0"
        lines.append(f"{r.method}\t{r.size_fraction:.12g}\t{r.l2_error:.12g}\t{secs}")
    return "\n".join(lines) + "\n"
