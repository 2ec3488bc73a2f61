"""
Recovering a planted cut
========================

A 500-vertex graph whose two halves carry different means. With no noise
the fast cut finds the planted halves exactly; with noise as large as the
mean it still finds a cut at least as strong as the planted one, and it
does so far faster than the regularized dense search.
"""

import time

import numpy as np

from sparse_wavelets import SynthConfig, fswt_cut, generate, swt_cut

g, w, planted = generate(SynthConfig(sigma=0.0, seed=1))
s = np.arange(g.n)
print(f"planted cut: {planted.cut_size} edges, energy {planted.energy:.3f}")

cut = fswt_cut(g, w, s, q=planted.cut_size)
print("noise-free fast cut matches the planted halves:", cut.same_partition(planted))

g, w, planted = generate(SynthConfig(seed=1))
for name, fn in (("fswt", fswt_cut), ("swt", swt_cut)):
    start = time.perf_counter()
    cut = fn(g, w, s, planted.cut_size)
    seconds = time.perf_counter() - start
    print(f"{name}: energy {cut.energy:.1f} (planted {planted.energy:.1f}) with {cut.cut_size} edges "
          f"in {seconds * 1e3:.0f} ms")
