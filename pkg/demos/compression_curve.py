"""
Error versus size
=================

A four-block piecewise-constant signal with a little noise, compressed at a
few size budgets. The adapted basis pays for the edges it cuts, the
structural tree and the Fourier basis only pay for coefficients.
"""

from sparse_wavelets import SynthConfig, generate
from sparse_wavelets.bench import format_bench, run_bench

mu = SynthConfig(n=256, m=768, levels=2).mu
g, w, _ = generate(SynthConfig(n=256, m=768, h=0.2, levels=2, sigma=0.05 * mu, seed=1))

rows = run_bench(g, w, ("fswt", "gwt", "gft"))
print(format_bench(rows, with_seconds=False), end="")

for f in sorted({r.size_fraction for r in rows if r.method == "gft"}):
    best = min((r for r in rows if abs(r.size_fraction - f) < 0.02), key=lambda r: r.l2_error)
    print(f"near {f:.2f}: lowest error from {best.method}")
