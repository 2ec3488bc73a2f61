"""Synthetic graphs with a planted, known-energy cut.

Vertices ``0..n/2-1`` form one side and the rest the other. Each edge
crosses with probability ``h``; otherwise it lands inside a uniformly chosen
side. Side means are ``+-sqrt(alpha/n)`` so the planted split carries energy
``alpha`` before noise. Random draws come from numpy's PCG64 generator.

A multi-level variant nests the same construction: each side is split again
and the offsets halve at every level, giving a piecewise-constant signal
whose best basis is a known hierarchy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, format_graph, format_signal
from .spectral import CutResult, _make_cut


@dataclass(frozen=True)
class SynthConfig:
    n: int = 500
    m: int = 1500
    h: float = 0.5
    alpha: float = 100.0
    sigma: float | None = None  # None means |mu|
    seed: int = 1
    levels: int = 1

    def __post_init__(self):
        blocks = 2 ** self.levels
        if self.levels < 1:
            raise ValueError("levels must be at least 1")
        if self.n < blocks or self.n % blocks:
            raise ValueError(f"n must be a positive multiple of {blocks}")
        if self.levels > 1 and self.n // blocks < 2:
            raise ValueError("every planted block needs at least two vertices")
        if not 0 <= self.m <= self.n * (self.n - 1) // 2:
            raise ValueError("m must be between 0 and n(n-1)/2")
        if not 0.0 <= self.h <= 1.0:
            raise ValueError("h must lie in [0, 1]")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.sigma is not None and self.sigma < 0:
            raise ValueError("sigma must be non-negative")

    @property
    def mu(self) -> float:
        return math.sqrt(self.alpha / self.n)

    @property
    def noise(self) -> float:
        return abs(self.mu) if self.sigma is None else float(self.sigma)


def _sample_edges(cfg: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """Edges whose lowest disagreeing level is drawn with probability h per level."""
    n, levels = cfg.n, cfg.levels
    seen: set[tuple[int, int]] = set()
    out = []
    attempts = 0
    while len(out) < cfg.m:
        attempts += 1
        if attempts > 100 * max(cfg.m, 1):
            raise RuntimeError(f"edge sampling gave up after {attempts - 1} attempts")
        depth = levels
        for d in range(levels):
            if rng.random() < cfg.h:
                depth = d
                break
        u = int(rng.integers(n))
        if depth == levels:
            size = n >> levels
            base = u - u % size
            v = base + int(rng.integers(size))
        else:
            # same block down to level depth, opposite half below it
            size = n >> depth
            half = size // 2
            base = u - u % size
            offset = 0 if u - base >= half else half
            v = base + offset + int(rng.integers(half))
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        out.append(key)
    return np.array(out, dtype=np.int64).reshape(-1, 2)


def block_means(cfg: SynthConfig) -> np.ndarray:
    """Mean value of each of the ``2**levels`` planted blocks."""
    blocks = np.arange(2 ** cfg.levels)
    means = np.zeros(len(blocks))
    for lvl in range(cfg.levels):
        bit = (blocks >> (cfg.levels - 1 - lvl)) & 1
        means += np.where(bit == 0, 1.0, -1.0) * cfg.mu / 2 ** lvl
    return means


def generate(cfg: SynthConfig) -> tuple[Graph, np.ndarray, CutResult]:
    """Graph, signal and the planted top-level cut with its realized energy."""
    rng = np.random.default_rng(cfg.seed)
    g = Graph.from_edges(cfg.n, _sample_edges(cfg, rng))
    block = np.arange(cfg.n) // (cfg.n >> cfg.levels)
    w = block_means(cfg)[block] + rng.normal(0.0, 1.0, cfg.n) * cfg.noise
    planted = _make_cut(g, np.arange(cfg.n), np.arange(cfg.n // 2), w)
    return g, w, planted


def planted_sidecar(planted: CutResult) -> str:
    return f"planted_cut_size {planted.cut_size} planted_energy {planted.energy:.12g}\n"


def write_instance(prefix: str, g: Graph, w: np.ndarray, planted: CutResult) -> list[str]:
    """Write ``<prefix>.graph``, ``.signal`` and ``.planted``; returns the paths."""
    from .io import atomic_write

    paths = [f"{prefix}.graph", f"{prefix}.signal", f"{prefix}.planted"]
    for path, text in zip(paths, (format_graph(g), format_signal(w), planted_sidecar(planted))):
        atomic_write(path, text)
    return paths
