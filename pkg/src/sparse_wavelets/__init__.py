"""Signal-adapted graph wavelet bases built from sparse edge cuts."""

from .baselines import fourier_basis, gft, gft_compress
from .basis import BasisConfig, build_basis, gwt_tree, ratio_cut
from .fast import cheb_apply, fswt_cut, make_plan, power_method
from .graph import (Graph, ParseError, ValidationError, cut_size, induced_subgraph, laplacian_apply,
                    load_graph, load_signal, normalize_signal)
from .spectral import CutResult, swt_cut, sweep
from .synth import SynthConfig, generate
from .wavelet import (CompressedSignal, FormatError, WaveletTree, compress, decompress, inverse,
                      transform, tree_from_partitions)

__all__ = [
    "BasisConfig", "CompressedSignal", "CutResult", "FormatError", "Graph", "ParseError",
    "SynthConfig", "ValidationError", "WaveletTree", "build_basis", "cheb_apply", "compress",
    "cut_size", "decompress", "fourier_basis", "fswt_cut", "generate", "gft", "gft_compress",
    "gwt_tree", "induced_subgraph", "inverse", "laplacian_apply", "load_graph", "load_signal",
    "make_plan", "normalize_signal", "power_method", "ratio_cut", "swt_cut", "sweep", "transform",
    "tree_from_partitions",
]
