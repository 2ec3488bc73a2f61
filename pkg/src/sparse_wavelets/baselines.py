"""Baselines for the compression benchmark: graph Fourier basis and ratio-cut trees."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import gwt_tree
from .graph import Graph, check_signal

GFT_MAX_N = 10_000

__all__ = ["FourierBasis", "GFTCompressed", "fourier_basis", "gft", "igft", "gft_compress", "gwt_tree"]


@dataclass(frozen=True, eq=False)
class FourierBasis:
    """Laplacian eigenpairs, eigenvalues ascending, eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def fourier_basis(g: Graph) -> FourierBasis:
    """Dense eigendecomposition of the Laplacian (refuses ``n > 10000``)."""
    if g.n > GFT_MAX_N:
        raise ValueError(f"graph Fourier basis limited to n <= {GFT_MAX_N}, got n={g.n}")
    lam, U = np.linalg.eigh(g.laplacian_matrix.toarray())
    return FourierBasis(lam, U)


def gft(g: Graph, w, basis: FourierBasis | None = None) -> np.ndarray:
    w = check_signal(g, w)
    basis = basis or fourier_basis(g)
    return basis.eigenvectors.T @ w


def igft(basis: FourierBasis, coefs) -> np.ndarray:
    return basis.eigenvectors @ np.asarray(coefs, dtype=float)


@dataclass(frozen=True, eq=False)
class GFTCompressed:
    kept: np.ndarray
    coefs: np.ndarray
    reconstruction: np.ndarray
    l2_error: float
    size_fraction: float


def gft_compress(g: Graph, w, keep: int, basis: FourierBasis | None = None) -> GFTCompressed:
    """Keep the ``keep`` largest-magnitude Fourier coefficients (ties by index)."""
    w = check_signal(g, w)
    if not 0 <= keep <= g.n:
        raise ValueError(f"keep must be in 0..{g.n}")
    basis = basis or fourier_basis(g)
    full = gft(g, w, basis)
    kept = np.sort(np.lexsort((np.arange(g.n), -np.abs(full)))[:keep])
    sparse = np.zeros(g.n)
    sparse[kept] = full[kept]
    rec = igft(basis, sparse)
    return GFTCompressed(kept, full[kept], rec, float(np.linalg.norm(w - rec)),
                         keep / g.n if g.n else 0.0)
