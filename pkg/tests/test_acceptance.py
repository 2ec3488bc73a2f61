"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (with the measured numbers and runtime)
that is printed in the terminal summary, and also prints it directly so
``pytest -s`` shows it inline.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import (ACCEPTANCE_LINES, FIG1_EDGES, FIG1_SIGNAL, FIG1_SPLITS, all_bipartitions,
                      random_graph, random_tree_splits)
from sparse_wavelets.bench import run_bench
from sparse_wavelets.fast import cheb_apply, fswt_cut, plan_for
from sparse_wavelets.graph import Graph, cut_size
from sparse_wavelets.spectral import build_bundle, swt_cut
from sparse_wavelets.synth import SynthConfig, generate
from sparse_wavelets.wavelet import (compress, decompress, energy_from_means, inverse, transform,
                                     tree_from_partitions)


def report(k, ok, detail, seconds, limit):
    ok = bool(ok) and seconds < limit
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({seconds:.2f}s, limit {limit}s) {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    return ok


def test_criterion_1_worked_example():
    start = time.perf_counter()
    g = Graph.from_edges(7, FIG1_EDGES)
    t = tree_from_partitions(g, FIG1_SPLITS)
    w = FIG1_SIGNAL
    c = transform(t, w)
    rec = inverse(t, c)
    comp = compress(t, w, keep=2)
    approx = decompress(comp, g)
    rel = float(np.sum((w - approx) ** 2) / np.sum(w ** 2))
    checks = [c.average == 0.0, c.diffs[2] == 4.0, rec[4] == -6.0,
              set(comp.coefs) == {0, 2}, rel <= 0.02]
    ok = report(1, all(checks), f"a00={c.average} a(level 2)={c.diffs[2]} rec(-6)={rec[4]} "
                f"top-2 relative error={rel:.4%}", time.perf_counter() - start, 1)
    assert ok


def test_criterion_2_parseval():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_energy = worst_inverse = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 201))
        g = random_graph(n, min(1.0, 4.0 / max(n, 1)), rng)
        builder = random_tree_splits(n, rng)
        builder.graph = g
        t = builder.freeze()
        w = rng.standard_normal(n) * rng.uniform(0.1, 10)
        c = transform(t, w)
        total = float(w @ w)
        worst_energy = max(worst_energy, abs(c.total_energy(t) - total) / total)
        worst_inverse = max(worst_inverse, np.linalg.norm(inverse(t, c) - w) / np.linalg.norm(w))
    ok = report(2, worst_energy <= 1e-9 and worst_inverse <= 1e-9,
                f"max energy rel err={worst_energy:.2e} max inverse rel err={worst_inverse:.2e}",
                time.perf_counter() - start, 10)
    assert ok


def test_criterion_3_objective_identity():
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    worst_ratio = worst_rank = 0.0
    sign_ok = True
    for _ in range(20):
        n = int(rng.integers(3, 11))
        g = random_graph(n, 0.4, rng)
        w = rng.standard_normal(n)
        b = build_bundle(g, w, np.arange(n))
        cw = b.C @ w
        # largest value 2n * energy can take on this instance
        scale = 2 * n * float(((w - w.mean()) ** 2).sum())
        worst_rank = max(worst_rank, np.linalg.norm(b.CSC + 2 * np.outer(cw, cw)) / np.linalg.norm(b.CSC))
        for mask in all_bipartitions(n):
            x = np.where(mask, 1.0, -1.0)
            ratio = (x @ b.CSC @ x) / (x @ b.C @ x)
            sign_ok &= ratio <= 1e-12
            energy = energy_from_means(w[mask].mean(), w[~mask].mean(), mask.sum(), (~mask).sum())
            target = 2 * n * energy
            worst_ratio = max(worst_ratio, abs(abs(ratio) - target) / max(target, scale))
    ok = report(3, worst_ratio <= 1e-9 and worst_rank <= 1e-9 and sign_ok,
                f"max |ratio| rel err={worst_ratio:.2e} rank-one rel err={worst_rank:.2e} "
                f"ratio sign {'non-positive' if sign_ok else 'mixed'}", time.perf_counter() - start, 10)
    assert ok


def _exhaustive(g, w, q):
    best = 0.0
    for mask in all_bipartitions(g.n):
        if cut_size(g, np.flatnonzero(mask)) <= q:
            best = max(best, energy_from_means(w[mask].mean(), w[~mask].mean(), mask.sum(), (~mask).sum()))
    return best


def test_criterion_4_small_optimality():
    start = time.perf_counter()
    good = {"swt": 0, "fswt": 0}
    for i in range(20):
        n = (8, 10, 12)[i % 3]
        g, w, planted = generate(SynthConfig(n=n, m=2 * n, h=0.25, sigma=0.0, alpha=float(n), seed=100 + i))
        q = max(planted.cut_size, 1)
        opt = _exhaustive(g, w, q)
        s = np.arange(n)
        for name, cut in (("swt", swt_cut(g, w, s, q)), ("fswt", fswt_cut(g, w, s, q))):
            good[name] += cut is not None and cut.energy >= 0.95 * opt
    ok = report(4, good["swt"] >= 18 and good["fswt"] >= 18,
                f"within 95% of optimum: swt {good['swt']}/20, fswt {good['fswt']}/20",
                time.perf_counter() - start, 30)
    assert ok


def test_criterion_5_planted_recovery():
    start = time.perf_counter()
    g, w, planted = generate(SynthConfig(sigma=0.0, seed=1))
    exact = fswt_cut(g, w, np.arange(g.n), planted.cut_size, p=20)
    recovered = exact is not None and exact.same_partition(planted)
    above = within = 0
    for seed in range(1, 11):
        g, w, planted = generate(SynthConfig(seed=seed))
        cut = fswt_cut(g, w, np.arange(g.n), planted.cut_size, p=20)
        above += cut.energy >= 0.9 * 100.0
        within += abs(cut.energy - 100.0) <= 10.0
    ok = report(5, recovered and above >= 8,
                f"sigma=0 exact recovery={recovered}; sigma=|mu|: energy >= 0.9 alpha in {above}/10 "
                f"(two-sided within 10%: {within}/10)", time.perf_counter() - start, 60)
    assert ok


def test_criterion_6_speedup():
    start = time.perf_counter()
    g, w, planted = generate(SynthConfig(seed=1))
    s = np.arange(g.n)
    fswt_cut(g, w, s, planted.cut_size)  # warm caches
    t0 = time.perf_counter()
    for _ in range(5):
        fswt_cut(g, w, s, planted.cut_size)
    fast = (time.perf_counter() - t0) / 5
    t0 = time.perf_counter()
    swt_cut(g, w, s, planted.cut_size, search_iters=10)
    dense = time.perf_counter() - t0
    ok = report(6, fast <= dense / 5, f"fswt {fast * 1e3:.1f} ms vs swt {dense * 1e3:.1f} ms "
                f"(speedup {dense / fast:.1f}x)", time.perf_counter() - start, 120)
    assert ok


def test_criterion_7_compression_dominance():
    start = time.perf_counter()
    mu = SynthConfig(n=256, m=768, levels=2).mu
    cfg = SynthConfig(n=256, m=768, h=0.2, levels=2, sigma=0.05 * mu, seed=1)
    g, w, _ = generate(cfg)
    rows = run_bench(g, w, ("fswt", "gwt", "gft"))
    err = {m: [r.l2_error for r in rows if r.method == m] for m in ("fswt", "gwt", "gft")}
    wins = sum(f < a and f < b for f, a, b in zip(err["fswt"], err["gwt"], err["gft"]))
    detail = "fswt/gwt/gft errors " + "; ".join(
        f"{f:.3g}/{a:.3g}/{b:.3g}" for f, a, b in zip(err["fswt"], err["gwt"], err["gft"]))
    ok = report(7, wins >= 2, f"strict wins {wins}/4: {detail}", time.perf_counter() - start, 60)
    assert ok


def test_criterion_8_chebyshev_convergence():
    start = time.perf_counter()
    rng = np.random.default_rng(8)
    ok_all = True
    worst = 0.0
    for _ in range(10):
        n = int(rng.integers(10, 51))
        g = random_graph(n, float(rng.uniform(0.08, 0.4)), rng)
        lam, U = np.linalg.eigh(g.laplacian_matrix.toarray())
        inv = np.where(lam > 1e-9 * lam.max(), 1 / np.sqrt(np.clip(lam, 1e-300, None)), 0.0)
        f = rng.standard_normal(n)
        exact = (U * inv) @ (U.T @ f)
        errs = [np.linalg.norm(cheb_apply(g, plan_for(g, p), f) - exact) / np.linalg.norm(f)
                for p in (5, 20, 50)]
        ok_all &= errs[0] >= errs[1] >= errs[2] and errs[2] <= 1e-2
        worst = max(worst, errs[2])
    ok = report(8, ok_all, f"monotone in p on 10 graphs; worst p=50 error={worst:.2e}",
                time.perf_counter() - start, 10)
    assert ok


def _cli(*args):
    proc = subprocess.run([sys.executable, "-m", "sparse_wavelets.cli", *map(str, args)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_criterion_9_determinism(tmp_path):
    start = time.perf_counter()
    outputs = {}
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        log = [_cli("synth", "--n", 64, "--m", 192, "--h", 0.2, "--levels", 2, "--seed", 5, "--out", d / "s")]
        graph, signal = d / "s.graph", d / "s.signal"
        log.append(_cli("transform", "--graph", graph, "--signal", signal, "--q", 10,
                        "--out", d / "t.tsv", "--tree-out", d / "t.tree"))
        log.append(_cli("compress", "--graph", graph, "--signal", signal, "--q", 10, "--keep", 8,
                        "--out", d / "c.txt"))
        log.append(_cli("decompress", "--compressed", d / "c.txt", "--graph", graph, "--out", d / "r.txt"))
        log.append(_cli("bench", "--graph", graph, "--signal", signal, "--methods", "fswt,swt,gwt,gft",
                        "--no-timing", "--out", d / "b.tsv"))
        log.append(_cli("layout", "--graph", graph, "--out", d / "l1.tsv"))
        log.append(_cli("layout", "--graph", graph, "--signal", signal, "--mode", "wavelet",
                        "--out", d / "l2.tsv"))
        files = {p.name: p.read_bytes() for p in sorted(d.iterdir())}
        outputs[run] = (files, [line.replace(str(d), "<dir>") for line in log])
    same_files = outputs["a"][0] == outputs["b"][0]
    same_stdout = outputs["a"][1] == outputs["b"][1]
    ok = report(9, same_files and same_stdout,
                f"{len(outputs['a'][0])} files byte-identical={same_files}, stdout identical={same_stdout}",
                time.perf_counter() - start, 30)
    assert ok


@pytest.mark.xfail(strict=True, reason="with sigma=|mu| the planted split is no longer the best cut; "
                                       "fswt finds cuts 20-45% above alpha")
def test_criterion_5_two_sided_reading():
    within = 0
    for seed in range(1, 11):
        g, w, planted = generate(SynthConfig(seed=seed))
        cut = fswt_cut(g, w, np.arange(g.n), planted.cut_size, p=20)
        within += abs(cut.energy - 100.0) <= 10.0
    assert within >= 8
