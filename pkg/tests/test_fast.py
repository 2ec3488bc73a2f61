import time

import numpy as np
import pytest

from conftest import connected_random_graph, random_graph
from sparse_wavelets.fast import (ChebyshevPlan, cheb_apply, dense_m_columnwise, fswt_cut,
                                  make_plan, plan_for, power_method, project_components,
                                  rank_one_factor, spectral_interval)
from sparse_wavelets.graph import Graph
from sparse_wavelets.spectral import build_bundle, build_M, min_eigenvector_dense, recover_x, sweep
from sparse_wavelets.synth import SynthConfig, generate


def dense_pinv_sqrt(g):
    lam, U = np.linalg.eigh(g.laplacian_matrix.toarray())
    inv = np.where(lam > 1e-9 * lam.max(), 1 / np.sqrt(np.clip(lam, 1e-300, None)), 0.0)
    return (U * inv) @ U.T


def cheb_rel_error(g, f, p):
    exact = dense_pinv_sqrt(g) @ f
    return np.linalg.norm(cheb_apply(g, plan_for(g, p), f) - exact) / np.linalg.norm(f)


# ---- make_plan


@pytest.mark.xfail(strict=True, reason="a 20-term fit on a 1000:1 interval has about 2% relative "
                                       "error in the middle of the interval")
def test_plan_midpoint_accuracy():
    plan = make_plan(20, 2.0)
    lo, hi = plan.interval
    mid = (lo + hi) / 2
    assert plan(mid) == pytest.approx(1 / np.sqrt(mid), abs=1e-3)


def test_plan_default_lower_bound_and_midpoint_error():
    plan = make_plan(20, 2.0)
    lo, hi = plan.interval
    assert lo == pytest.approx(2e-3) and hi == 2.0
    mid = (lo + hi) / 2
    assert abs(plan(mid) * np.sqrt(mid) - 1) < 2.5e-2


def test_plan_refines_with_p():
    grid = np.linspace(1e-2, 10.0, 400)
    err = {p: np.max(np.abs(make_plan(p, 10.0)(grid) * np.sqrt(grid) - 1)) for p in (2, 20)}
    assert err[2] > err[20]


def test_plan_narrow_interval_is_near_constant():
    plan = make_plan(5, 1.0 + 1e-6, 1.0)
    assert plan(1.0) == pytest.approx(1.0, abs=1e-6)
    assert np.all(np.abs(plan.coefficients[1:]) < 1e-5)


def test_plan_rejects_bad_arguments():
    with pytest.raises(ValueError):
        make_plan(1, 2.0)
    with pytest.raises(ValueError):
        make_plan(5, 0.0)
    with pytest.raises(ValueError):
        make_plan(5, 1.0, 2.0)


def test_plan_is_a_dataclass():
    plan = make_plan(4, 3.0)
    assert isinstance(plan, ChebyshevPlan) and len(plan.coefficients) == 4


def test_spectral_interval_bounds_spectrum():
    rng = np.random.default_rng(1)
    for _ in range(5):
        g = random_graph(30, 0.15, rng)
        lo, hi = spectral_interval(g)
        lam = np.linalg.eigvalsh(g.laplacian_matrix.toarray())
        nonzero = lam[lam > 1e-9]
        assert 0 < lo < hi
        assert nonzero.max() <= hi + 1e-9
        assert nonzero.min() >= lo - 1e-9


# ---- cheb_apply


def test_cheb_ones_projected_away():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    np.testing.assert_allclose(cheb_apply(g, plan_for(g, 20), np.ones(4)), 0, atol=1e-12)


def test_cheb_single_edge():
    g = Graph.from_edges(2, [(0, 1)])
    out = cheb_apply(g, plan_for(g, 20), np.array([1.0, -1.0]))
    np.testing.assert_allclose(out, [1 / np.sqrt(2), -1 / np.sqrt(2)], atol=1e-3)


def test_cheb_dimension_mismatch():
    g = Graph.from_edges(2, [(0, 1)])
    with pytest.raises(ValueError):
        cheb_apply(g, plan_for(g, 5), np.ones(3))


def test_cheb_matrix_input_matches_columns():
    rng = np.random.default_rng(0)
    g = connected_random_graph(20, 0.2, rng)
    plan = plan_for(g, 20)
    F = rng.standard_normal((20, 3))
    cols = np.column_stack([cheb_apply(g, plan, F[:, j]) for j in range(3)])
    np.testing.assert_allclose(cheb_apply(g, plan, F), cols, atol=1e-12)


def test_cheb_disconnected_graph():
    rng = np.random.default_rng(5)
    g = Graph.from_edges(7, [(0, 1), (1, 2), (3, 4), (4, 5)])
    f = rng.standard_normal(7)
    assert cheb_rel_error(g, f, 50) < 1e-2
    out = cheb_apply(g, plan_for(g, 20), f)
    assert out[6] == 0.0
    np.testing.assert_allclose(project_components(g, out), out, atol=1e-12)


@pytest.mark.parametrize("seed", range(6))
def test_cheb_error_decreases_with_p(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(10, 51))
    g = random_graph(n, float(rng.uniform(0.05, 0.4)), rng)
    if g.m == 0:
        pytest.skip("edgeless draw")
    f = rng.standard_normal(n)
    errs = [cheb_rel_error(g, f, p) for p in (5, 20, 50)]
    assert errs[0] >= errs[1] >= errs[2]
    assert errs[2] <= 1e-2


# ---- power method


def test_power_diagonal():
    res = power_method(lambda v: np.diag([-5.0, -1.0]) @ v, 2, iters=10, seed=1, deflate=False)
    assert abs(res.vector @ [1.0, 0.0]) >= 0.999
    assert res.eigenvalue == pytest.approx(-5.0, rel=1e-3)


def test_power_deflated_stays_orthogonal_to_ones():
    D = np.diag([-5.0, -1.0, -1.0, -1.0])
    res = power_method(lambda v: D @ v, 4, iters=10, seed=3)
    ones = np.ones(4) / 2
    P = np.eye(4) - np.outer(ones, ones)
    lam, U = np.linalg.eigh(P @ D @ P)
    assert abs(res.vector.sum()) < 1e-12
    assert abs(res.vector @ U[:, 0]) >= 0.999


def test_power_rank_one_single_iteration():
    g = np.array([1.0, -2.0, 0.5, 0.5])
    res = power_method(lambda v: -2 * g * (g @ v), 4, iters=1, seed=7)
    assert abs(res.vector @ g) / np.linalg.norm(g) == pytest.approx(1.0, abs=1e-12)
    assert res.eigenvalue == pytest.approx(-2 * g @ g)
    assert not res.degenerate


def test_power_zero_operator():
    res = power_method(lambda v: np.zeros_like(v), 5, iters=10, seed=2)
    again = power_method(lambda v: np.zeros_like(v), 5, iters=3, seed=2)
    assert res.degenerate and res.eigenvalue == 0.0
    np.testing.assert_array_equal(res.vector, again.vector)


def test_power_rejects_zero_iters():
    with pytest.raises(ValueError):
        power_method(lambda v: v, 3, iters=0)


def test_power_rank_one_consistency_with_cheb():
    rng = np.random.default_rng(4)
    g = connected_random_graph(40, 0.1, rng)
    w = rng.standard_normal(40)
    plan = plan_for(g, 20)
    h = rank_one_factor(g, w, plan)
    res = power_method(lambda v: -2 * h * (h @ v), 40, iters=10, seed=1)
    assert abs(res.vector @ h) / np.linalg.norm(h) >= 0.999


def test_columnwise_matches_rank_one():
    rng = np.random.default_rng(6)
    g = connected_random_graph(15, 0.2, rng)
    w = rng.standard_normal(15)
    plan = plan_for(g, 20)
    h = rank_one_factor(g, w, plan)
    M = dense_m_columnwise(g, w, plan)
    np.testing.assert_allclose(M, -2 * np.outer(h, h), atol=1e-8 * np.abs(M).max())


# ---- fswt_cut


def test_fswt_two_triangles(two_triangles, two_triangle_signal):
    cut = fswt_cut(two_triangles, two_triangle_signal, np.arange(6), q=1, p=20)
    assert cut.left.tolist() == [0, 1, 2]
    assert cut.energy == pytest.approx(1.5)
    assert cut.beta == 0.0


def test_fswt_constant_signal_falls_back(two_triangles):
    cut = fswt_cut(two_triangles, np.full(6, 3.0), np.arange(6), q=1)
    assert cut.left.tolist() == [0, 1, 2] and cut.energy == 0.0
    assert fswt_cut(Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]), np.ones(3), np.arange(3), q=1) is None


def test_fswt_rejects_bad_arguments(two_triangles, two_triangle_signal):
    with pytest.raises(ValueError):
        fswt_cut(two_triangles, two_triangle_signal, np.arange(6), q=0)
    with pytest.raises(ValueError):
        fswt_cut(two_triangles, two_triangle_signal, [2], q=1)


def test_fswt_splits_components_for_free():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    w = np.array([2.0, 2.0, 2.0, -1.0, -1.0, -1.0])
    cut = fswt_cut(g, w, np.arange(6), q=1)
    assert cut.left.tolist() == [0, 1, 2] and cut.cut_size == 0


def test_fswt_deterministic():
    g, w, planted = generate(SynthConfig(n=100, m=300, seed=4))
    a = fswt_cut(g, w, np.arange(100), planted.cut_size)
    b = fswt_cut(g, w, np.arange(100), planted.cut_size)
    assert a.same_partition(b) and a.energy == b.energy


def test_fswt_default_instance_energy():
    g, w, planted = generate(SynthConfig(seed=1))
    cut = fswt_cut(g, w, np.arange(g.n), planted.cut_size, p=20)
    assert cut.energy >= 0.9 * 100.0


def _dense_large_beta(g, w, q):
    n = g.n
    b = build_bundle(g, w, np.arange(n))
    beta = 100.0 * n
    x = recover_x(b, beta, min_eigenvector_dense(build_M(b, beta)))
    return sweep(x, g, w, np.arange(n), q)


def _equivalence_trials(count=50):
    out = []
    for seed in range(count):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(10, 51))
        g = connected_random_graph(n, 0.15, rng)
        w = rng.standard_normal(n)
        q = int(rng.integers(1, g.m))
        dense = _dense_large_beta(g, w, q)
        fast = fswt_cut(g, w, np.arange(n), q)
        if dense is not None and fast is not None:
            out.append((dense, fast))
    return out


def test_fswt_energy_not_below_dense_large_beta():
    trials = _equivalence_trials()
    assert len(trials) >= 40
    assert all(f.energy >= 0.95 * d.energy for d, f in trials)


@pytest.mark.xfail(strict=True, reason="sweep order is sensitive to Chebyshev error near ties; "
                                       "partitions agree in about 30% of trials, energies never lag")
def test_fswt_partition_matches_dense_large_beta():
    trials = _equivalence_trials()
    same = sum(d.same_partition(f) for d, f in trials)
    assert same >= 0.9 * len(trials)


def test_fswt_subcubic_scaling():
    times = {}
    for n in (250, 1000):
        g, w, planted = generate(SynthConfig(n=n, m=3 * n, seed=2))
        fswt_cut(g, w, np.arange(n), planted.cut_size)  # warm-up
        start = time.perf_counter()
        for _ in range(3):
            fswt_cut(g, w, np.arange(n), planted.cut_size)
        times[n] = (time.perf_counter() - start) / 3
    # cubic growth would be 64x for a 4x larger graph
    assert times[1000] < 16 * times[250]
