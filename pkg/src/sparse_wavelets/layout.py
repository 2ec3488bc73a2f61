"""Two-dimensional vertex coordinates from Laplacian or wavelet eigenvectors."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .graph import Graph, check_signal
from .spectral import _fix_sign, build_bundle, build_M, min_eigenvector_dense, recover_x

LAYOUT_MAX_N = 10_000


class Layout(NamedTuple):
    coords: np.ndarray
    degenerate: bool
    note: str


def _unit(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    return v / norm if norm > 0 else v


def _guard(g: Graph) -> None:
    if g.n > LAYOUT_MAX_N:
        raise ValueError(f"layout limited to n <= {LAYOUT_MAX_N}, got n={g.n}")
    if g.n < 3:
        raise ValueError("layout needs at least three vertices")


def laplacian_layout(g: Graph) -> Layout:
    """Vertex ``i`` at ``(e2(i), e3(i))``, the second and third Laplacian eigenvectors."""
    _guard(g)
    _, U = np.linalg.eigh(g.laplacian_matrix.toarray())
    coords = np.column_stack([_fix_sign(U[:, 1].copy()), _fix_sign(U[:, 2].copy())])
    return Layout(coords, False, "laplacian e2 e3")


def wavelet_layout(g: Graph, w, beta: float = 1.0) -> Layout:
    """Coordinates from the regularized wavelet operator ``M`` at ``beta``.

    ``M`` has rank one, so only its most negative eigenvector is informative.
    The first axis is that eigenvector mapped back to vertex values; the
    second is the Fiedler vector with the first axis projected out. A
    constant signal makes ``M`` zero and is reported as degenerate.
    """
    _guard(g)
    w = check_signal(g, w)
    bundle = build_bundle(g, w, np.arange(g.n))
    M = build_M(bundle, beta)
    _, U = np.linalg.eigh(g.laplacian_matrix.toarray())
    fiedler = U[:, 1]
    if not np.any(np.abs(M) > 1e-12 * max(float(w @ w), 1.0) * g.n ** 2):
        coords = np.column_stack([np.zeros(g.n), _fix_sign(fiedler.copy())])
        return Layout(coords, True, "degenerate: zero wavelet operator")
    x = _unit(recover_x(bundle, beta, min_eigenvector_dense(M)))
    # orient so high signal values sit on the positive side
    if x @ (w - w.mean()) < 0:
        x = -x
    second = _unit(fiedler - (fiedler @ x) * x)
    return Layout(np.column_stack([x, _fix_sign(second)]), False, f"wavelet beta {beta:.12g}")


def format_layout(layout: Layout) -> str:
    lines = [f"# {layout.note}", "id\tx\ty"]
    lines += [f"{i}\t{a:.12g}\t{b:.12g}" for i, (a, b) in enumerate(layout.coords)]
    return "\n".join(lines) + "\n"
