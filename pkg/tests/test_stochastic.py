import math

import numpy as np
import pytest

from regland.analysis import loglog_slope
from regland.eigen import lowest_eigenpairs
from regland.hamiltonian import Potential, assemble_hamiltonian, make_grid
from regland.regularize import regularized_potential
from regland.stochastic import (
    EnsembleMismatchError,
    MCCheck,
    MCEstimate,
    PathParameterError,
    ScaleSelectionError,
    average_bias_bound,
    average_mirror,
    average_profile,
    avg_potential_mc,
    dirichlet_along,
    dump_paths_csv,
    expansion_check,
    field_along,
    fk_reproducing_check,
    khasminskii_check,
    path_integral,
    sample_paths,
    scale_for_alpha,
    second_moment_mc,
    start_node,
)
from regland.utils import io


def constant(grid, c: float) -> Potential:
    return Potential(grid=grid, values=np.full(grid.n, c))


def test_ensemble_layout():
    ensemble = sample_paths(0.4, 1e-3, m=16, N=20000, seed=2)
    assert ensemble.positions.shape == (20000, 17)
    assert np.all(ensemble.positions[:, 0] == 0.4)
    assert ensemble.step == pytest.approx(1e-3 / 16)
    assert ensemble.times[-1] == pytest.approx(1e-3)
    assert ensemble.survived.shape == (20000,)


def test_mean_square_displacement():
    t = 1e-3
    ensemble = sample_paths(0.5, t, m=16, N=20000, seed=1)
    displacement = ensemble.endpoints - 0.5

    squares = displacement**2
    stderr = np.std(squares, ddof=1) / math.sqrt(squares.size)
    assert abs(np.mean(squares) - 2 * t) <= 4 * stderr

    stderr = np.std(displacement, ddof=1) / math.sqrt(displacement.size)
    assert abs(np.mean(displacement)) <= 4 * stderr


def test_short_paths_survive():
    ensemble = sample_paths(0.5, 1e-4, m=8, N=5000, seed=0)
    assert np.all(ensemble.survived)


def test_deterministic_across_workers():
    a = sample_paths(0.3, 1e-3, m=16, N=20000, seed=4, workers=1)
    b = sample_paths(0.3, 1e-3, m=16, N=20000, seed=4, workers=4)
    c = sample_paths(0.3, 1e-3, m=16, N=20000, seed=5, workers=1)
    np.testing.assert_array_equal(a.positions, b.positions)
    assert not np.array_equal(a.positions, c.positions)


@pytest.mark.parametrize(
    "x, t, m, N",
    [(0.0, 1e-3, 16, 10), (1.0, 1e-3, 16, 10), (0.5, 0.0, 16, 10), (0.5, 1e-3, 4, 10), (0.5, 1e-3, 16, 0)],
)
def test_path_parameters(x, t, m, N):
    with pytest.raises(PathParameterError):
        sample_paths(x, t, m, N)


def test_interpolation_helpers(grid3):
    V = Potential(grid=grid3, values=[1.0, 2.0, 3.0])
    np.testing.assert_allclose(field_along(V, np.array([0.0, 0.375, 1.0])), [1.0, 1.5, 3.0])
    np.testing.assert_allclose(
        dirichlet_along(grid3, np.ones(3), np.array([0.0, 0.125, 0.5, 1.0])), [0.0, 0.5, 1.0, 0.0]
    )


def test_path_integral_of_constant(grid1001):
    ensemble = sample_paths(0.5, 1e-3, m=16, N=100, seed=0)
    np.testing.assert_allclose(path_integral(ensemble, constant(grid1001, 7.0)), 7e-3, rtol=1e-13)


def test_dump_paths(tmp_path):
    ensemble = sample_paths(0.5, 1e-3, m=8, N=5, seed=0)
    columns = io.read_columns(dump_paths_csv(ensemble, tmp_path / "paths.csv"))
    assert list(columns) == ["s", "path_0", "path_1", "path_2", "path_3", "path_4"]
    np.testing.assert_allclose(columns["path_3"], ensemble.positions[3])


@pytest.mark.slow
def test_fk_sine_free(zero_potential):
    # E sin(πω(t)) = e^{-π²t} sin(πx) for absorbed paths
    x, t = 0.5, 0.01
    ensemble = sample_paths(x, t, m=32, N=20000, seed=3)
    check = fk_reproducing_check(lambda y: np.sin(np.pi * y), np.pi**2, zero_potential, x, t, ensemble)

    assert check.target == pytest.approx(1.0)
    assert check.deviation <= 4 * check.estimate.stderr + check.allowance
    assert check.estimate.stderr < 5e-3
    assert check.estimate.n_effective <= 20000


@pytest.mark.slow
def test_fk_sine_constant_potential(grid1001):
    # V ≡ c shifts λ by c and weights every path by e^{-ct}
    c, x, t = 50.0, 0.5, 0.01
    ensemble = sample_paths(x, t, m=32, N=20000, seed=3)
    free = fk_reproducing_check(lambda y: np.sin(np.pi * y), np.pi**2, constant(grid1001, 0.0), x, t, ensemble)
    shifted = fk_reproducing_check(
        lambda y: np.sin(np.pi * y), np.pi**2 + c, constant(grid1001, c), x, t, ensemble
    )
    assert shifted.estimate.mean == pytest.approx(free.estimate.mean, rel=1e-12)
    assert shifted.allowance == pytest.approx(t * c / 32, rel=1e-6)


@pytest.mark.slow
def test_fk_with_eigenpair(zero_potential):
    H = assemble_hamiltonian(zero_potential.grid, zero_potential)
    ground = lowest_eigenpairs(H, 1)[0]
    x, t = 0.5, 0.01
    ensemble = sample_paths(x, t, m=32, N=20000, seed=8)
    check = fk_reproducing_check(ground, ground.lambda_, zero_potential, x, t, ensemble)

    assert check.target == pytest.approx(1.0)
    assert check.deviation <= 4 * check.estimate.stderr + check.allowance


def test_fk_rejects_foreign_ensemble(zero_potential):
    ensemble = sample_paths(0.5, 1e-3, m=8, N=10, seed=0)
    with pytest.raises(EnsembleMismatchError):
        fk_reproducing_check(np.ones(zero_potential.grid.n), 0.0, zero_potential, 0.3, 1e-3, ensemble)
    with pytest.raises(EnsembleMismatchError):
        fk_reproducing_check(np.ones(zero_potential.grid.n), 0.0, zero_potential, 0.5, 2e-3, ensemble)


def test_average_of_constant(grid1001):
    x, t = 0.5, 1e-3
    ensemble = sample_paths(x, t, m=16, N=2000, seed=0)
    check = avg_potential_mc(constant(grid1001, 7.0), x, t, ensemble)
    assert check.estimate.mean == pytest.approx(7.0, rel=1e-13)
    assert check.passed


@pytest.mark.slow
def test_average_of_smooth_potential(smooth_potential):
    x, t = float(smooth_potential.grid.nodes[300]), 1e-4
    ensemble = sample_paths(x, t, m=32, N=20000, seed=6)
    check = avg_potential_mc(smooth_potential, x, t, ensemble)
    assert check.allowance <= check.bias_bound
    assert check.deviation <= 4 * check.estimate.stderr + check.allowance


def test_checks_need_a_node_start(smooth_potential):
    ensemble = sample_paths(0.3, 1e-4, m=8, N=10, seed=0)
    for check in (avg_potential_mc, second_moment_mc, expansion_check):
        with pytest.raises(PathParameterError):
            check(smooth_potential, 0.3, 1e-4, ensemble)


def test_start_node(smooth_potential):
    assert start_node(smooth_potential, float(smooth_potential.grid.nodes[300])) == 300
    with pytest.raises(PathParameterError):
        start_node(smooth_potential, 0.3)


def test_mirror_gap_beyond_bias_bound_fails(smooth_potential):
    grid = smooth_potential.grid
    node, t, m = 300, 1e-4, 16
    x = float(grid.nodes[node])
    ensemble = sample_paths(x, t, m=m, N=2000, seed=6)
    check = avg_potential_mc(smooth_potential, x, t, ensemble)
    mirror = average_mirror(smooth_potential, node, t, m)
    assert check.allowance == pytest.approx(abs(mirror - check.target), rel=1e-6)
    assert 0 < check.allowance <= check.bias_bound

    # a target off by more than the left-point bias can explain
    target = check.target + 3 * check.bias_bound
    perturbed = MCCheck.judge(
        check.name, x, t, check.estimate, target, abs(mirror - target), check.bias_bound
    )
    assert perturbed.allowance > perturbed.bias_bound
    assert not perturbed.passed


def test_judge_within_bound():
    estimate = MCEstimate(mean=10.0, stderr=0.1, n_effective=100)
    assert MCCheck.judge("average-potential", 0.5, 1e-3, estimate, 10.2, 0.5, 1.0).passed
    assert not MCCheck.judge("average-potential", 0.5, 1e-3, estimate, 10.2, 1.5, 1.0).passed
    assert not MCCheck.judge("average-potential", 0.5, 1e-3, estimate, 11.0, 0.5, 1.0).passed
    assert MCCheck.judge("feynman-kac", 0.5, 1e-3, estimate, 10.2, 0.0).bias_bound is None


def test_bias_bound_of_monotone_profile():
    profile = np.array([8.0, 6.0, 5.0, 4.5, 4.0])
    assert average_bias_bound(profile) == pytest.approx(2.0 * 4.0 / 4)


def test_doubling_substeps_halves_left_point_bias(smooth_potential):
    node, t = 300, 1e-3
    reference = average_mirror(smooth_potential, node, t, 1024)
    coarse = average_mirror(smooth_potential, node, t, 32) - reference
    fine = average_mirror(smooth_potential, node, t, 64) - reference
    assert abs(fine) > 0
    assert 1.8 <= coarse / fine <= 2.3


def test_profile_starts_at_nodal_value(smooth_potential):
    profile = average_profile(smooth_potential, 300, 1e-4, 8)
    assert profile.shape == (9,)
    assert profile[0] == smooth_potential.values[300]


@pytest.mark.slow
def test_stderr_scales_as_inverse_sqrt_paths(smooth_potential):
    x, t = float(smooth_potential.grid.nodes[300]), 1e-3
    counts = np.array([2000, 4000, 8000, 16000, 32000])
    errors = [
        avg_potential_mc(smooth_potential, x, t, sample_paths(x, t, m=16, N=int(N), seed=20 + i)).estimate.stderr
        for i, N in enumerate(counts)
    ]
    assert loglog_slope(counts, np.array(errors)) == pytest.approx(-0.5, abs=0.05)


def test_second_moment_of_constant(grid1001):
    c, x, t = 40.0, 0.5, 1e-3
    ensemble = sample_paths(x, t, m=8, N=1000, seed=0)
    check = second_moment_mc(constant(grid1001, c), x, t, ensemble)
    assert check.target == pytest.approx((c * t) ** 2, rel=1e-8)
    assert check.passed


def test_second_moment_of_zero(zero_potential):
    ensemble = sample_paths(0.5, 1e-3, m=8, N=1000, seed=0)
    check = second_moment_mc(zero_potential, 0.5, 1e-3, ensemble)
    assert check.estimate.mean == 0.0
    assert check.target == 0.0
    assert check.passed


def test_expansion_of_constant(grid1001):
    c, x, t = 10.0, 0.5, 1e-3
    ensemble = sample_paths(x, t, m=8, N=1000, seed=0)
    report = expansion_check(constant(grid1001, c), x, t, ensemble)
    assert report.estimate.mean == pytest.approx(math.exp(-c * t), rel=1e-12)
    assert report.first_order == pytest.approx(1 - c * t, rel=1e-12)
    assert report.second_order_error < report.first_order_error
    assert report.second_order_error < 1e-6


def test_khasminskii_constant(grid1001):
    report = khasminskii_check(constant(grid1001, 100.0), 5e-3, [0.3, 0.5], m=8, N=200, seed=1)
    assert report.alpha == pytest.approx(0.5, rel=1e-12)
    assert report.mc_sup == pytest.approx(math.exp(0.5), rel=1e-12)
    assert report.bound == pytest.approx(2.0, rel=1e-12)
    assert report.passed
    assert not report.skipped


def test_khasminskii_zero(zero_potential):
    report = khasminskii_check(zero_potential, 5e-3, [0.5], m=8, N=200)
    assert report.alpha == 0.0
    assert report.mc_sup == 1.0
    assert report.passed


def test_khasminskii_skipped_when_alpha_large(grid1001, caplog):
    report = khasminskii_check(constant(grid1001, 1e3), 5e-3, [0.5], m=8, N=200)
    assert report.skipped
    assert report.alpha == pytest.approx(5.0, rel=1e-12)
    assert report.mc_sup is None
    assert "alpha" in report.notice
    assert "skipped" in caplog.text


def test_scale_for_alpha_constant(grid1001):
    assert scale_for_alpha(constant(grid1001, 100.0), 0.5) == pytest.approx(5e-3, rel=1e-9)


def test_scale_for_alpha_smooth(smooth_potential):
    t = scale_for_alpha(smooth_potential, 0.1)
    peak = float(np.max(regularized_potential(smooth_potential, t).values))
    assert t * peak == pytest.approx(0.1, rel=1e-5)


def test_scale_for_alpha_errors(zero_potential, grid1001):
    with pytest.raises(ScaleSelectionError):
        scale_for_alpha(zero_potential, 0.5)
    with pytest.raises(ScaleSelectionError):
        scale_for_alpha(constant(grid1001, 1.0), 1.0)


def test_grid_of_other_size_for_paths():
    grid = make_grid(99)
    ensemble = sample_paths(0.5, 1e-4, m=8, N=10, seed=0)
    np.testing.assert_allclose(path_integral(ensemble, constant(grid, 2.0)), 2e-4, rtol=1e-13)
