import numpy as np
import pytest
from pydantic import ValidationError

from regland.analysis import (
    EmptyWindowError,
    PeakError,
    PeakSet,
    SweepError,
    agmon_distance,
    agmon_profile,
    compare_envelopes,
    decay_envelope_check,
    detect_peaks,
    interior_window,
    kernel_comparison,
    localization_match,
    loglog_slope,
    residual_sweep,
    thm1_residual,
    thm2_residual,
)
from regland.eigen import lowest_eigenpairs
from regland.hamiltonian import Potential, assemble_hamiltonian, gen_piecewise_potential, make_grid
from regland.landscape import inverse_landscape, solve_landscape
from regland.regularize import regularized_potential


def ground_state(V: Potential):
    return lowest_eigenpairs(assemble_hamiltonian(V.grid, V), 1)[0]


def landscape(V: Potential):
    return solve_landscape(assemble_hamiltonian(V.grid, V), 1.0, V)


def test_interior_window(grid1001):
    window = interior_window(grid1001, 1e-4)
    assert window[500]
    assert not window[0]
    assert np.all(grid1001.boundary_distance()[window] >= 0.05)


def test_empty_window(grid1001):
    with pytest.raises(EmptyWindowError):
        interior_window(grid1001, 0.02)


def test_eigen_residual_identity(random_potential):
    entry = thm1_residual(ground_state(random_potential), random_potential, 1e-4)
    assert entry.identity_error <= 1e-10
    assert entry.sup_norm > 0
    assert entry.weighted_norm <= entry.sup_norm * (1 + 1e-12)


def test_landscape_residual_identity(random_potential):
    entry = thm2_residual(landscape(random_potential), 1e-4)
    assert entry.identity_error <= 1e-10
    assert entry.window_size == int(np.sum(interior_window(random_potential.grid, 1e-4)))


def test_constant_potential_residual_vanishes(grid1001):
    V = Potential(grid=grid1001, values=np.full(grid1001.n, 100.0))
    entry = thm2_residual(landscape(V), 1e-4)
    assert entry.sup_norm <= 1e-8


@pytest.mark.slow
def test_smooth_potential_first_order_rate():
    # V_t - V ≈ (t/2)·V'' for smooth V
    grid = make_grid(4001)
    V = Potential(grid=grid, values=1e3 * np.sin(2 * np.pi * grid.nodes) ** 2)
    report = residual_sweep(np.geomspace(1e-6, 1e-4, 5), pair=ground_state(V), V=V)

    assert report.kind == "eigen"
    assert list(report.ts) == sorted(report.ts, reverse=True)
    assert report.slope == pytest.approx(1.0, abs=0.2)
    assert report.weighted_slope is not None
    assert all(entry.window_size == report.entries[0].window_size for entry in report.entries)


def test_landscape_sweep(random_potential):
    report = residual_sweep([1e-4, 1e-5, 3e-5], u=landscape(random_potential))
    assert report.kind == "landscape"
    np.testing.assert_allclose(report.ts, [1e-4, 3e-5, 1e-5])
    assert report.slope is None
    assert np.all(report.norms > 0)


@pytest.mark.parametrize("ts", [[], [1e-4, 1e-4], [1e-4, -1e-5]])
def test_sweep_rejects_scales(random_potential, ts):
    with pytest.raises(SweepError):
        residual_sweep(ts, u=landscape(random_potential))


def test_sweep_rejects_argument_combination(random_potential):
    with pytest.raises(SweepError):
        residual_sweep([1e-4], pair=ground_state(random_potential))


def test_loglog_slope():
    ts = np.geomspace(1e-6, 1e-3, 6)
    assert loglog_slope(ts, 3 * ts**0.5) == pytest.approx(0.5)
    assert loglog_slope(ts[:4], ts[:4]) is None
    assert loglog_slope(ts, np.zeros(6)) is None


def test_kernel_comparison_linear(grid1001):
    V = Potential(grid=grid1001, values=100.0 * grid1001.nodes)
    assert abs(kernel_comparison(V, 0.5, 1e-4)) <= 1e-10


def test_kernel_comparison_smooth(smooth_potential):
    # the two kernels differ in second moment by t
    a = kernel_comparison(smooth_potential, 0.3, 1e-4)
    b = kernel_comparison(smooth_potential, 0.3, 5e-5)
    assert a / b == pytest.approx(2.0, rel=0.15)


def test_agmon_constant_density():
    # √(5 - 1) over a distance of 0.5
    w = np.full(3, 5.0)
    assert agmon_distance(w, 1.0, 0, 2) == pytest.approx(1.0)
    assert agmon_distance(w, 1.0, 1, 1) == 0.0


def test_agmon_below_energy_is_zero():
    w = np.linspace(0.0, 1.0, 50)
    np.testing.assert_array_equal(agmon_profile(w, 2.0, 10), np.zeros(50))


def test_agmon_metric(random_potential):
    w = random_potential.values
    lam = float(np.median(w))
    a, b, c = 40, 300, 550
    assert agmon_distance(w, lam, a, b) == pytest.approx(agmon_distance(w, lam, b, a))
    assert agmon_distance(w, lam, a, c) <= agmon_distance(w, lam, a, b) + agmon_distance(w, lam, b, c) + 1e-12


def test_envelope_without_barrier(zero_potential):
    pair = ground_state(zero_potential)
    report = decay_envelope_check(pair, np.zeros(zero_potential.grid.n), pair.lambda_)
    assert report.offset == pytest.approx(0.0, abs=1e-12)
    assert report.violation_fraction == 0.0
    assert report.r0 == pair.peak


def test_compare_envelopes(random_potential):
    H = assemble_hamiltonian(random_potential.grid, random_potential)
    pair = lowest_eigenpairs(H, 1)[0]
    u = solve_landscape(H, 1.0, random_potential)
    comparison = compare_envelopes(pair, inverse_landscape(u), regularized_potential(random_potential, 1e-4).values)
    assert comparison.landscape.violation_fraction == 0.0
    assert comparison.regularized.violation_fraction == 0.0
    assert comparison.relative_difference >= 0.0


def test_peaks_of_monotone_field():
    assert len(detect_peaks(np.linspace(0.0, 1.0, 20))) == 0


def test_peak_of_triangle():
    field = np.array([0.0, 1.0, 2.0, 3.0, 2.0, 1.0, 0.0])
    peaks = detect_peaks(field)
    np.testing.assert_array_equal(peaks.indices, [3])
    np.testing.assert_array_equal(detect_peaks(-field, "minima").indices, [3])
    assert peaks.nearest(5) == 2
    np.testing.assert_array_equal(peaks.top(1), [3])


def test_peak_set_keeps_prominences_with_their_nodes():
    peaks = PeakSet(indices=[30, 10, 20], prominences=[3.0, 1.0, 2.0], prominence=0.5)
    np.testing.assert_array_equal(peaks.indices, [10, 20, 30])
    np.testing.assert_array_equal(peaks.prominences, [1.0, 2.0, 3.0])
    np.testing.assert_array_equal(peaks.top(1), [30])
    np.testing.assert_array_equal(peaks.top(2), [20, 30])


def test_peak_set_length_mismatch():
    with pytest.raises(ValidationError):
        PeakSet(indices=[1, 2], prominences=[1.0], prominence=0.5)


def test_peak_prominence_must_be_positive():
    with pytest.raises(PeakError):
        detect_peaks(np.ones(5), prominence=0.0)


def test_localization_free_operator(zero_potential):
    pair = ground_state(zero_potential)
    u = landscape(zero_potential)
    V_t = regularized_potential(zero_potential, 1e-4).values
    report = localization_match([pair], u.values, V_t, tolerance_nodes=0)

    assert pair.peak == 500
    assert report.rows[0].distances["landscape"] == 0
    assert report.rows[0].distances["regularized"] is None
    assert report.counts == {"landscape": 1, "regularized": 0}
    assert report.matched("landscape") == [True]


def test_localization_needs_pairs(zero_potential):
    with pytest.raises(PeakError):
        localization_match([], np.ones(zero_potential.grid.n), np.ones(zero_potential.grid.n))


def test_kernel_comparison_rate(smooth_potential):
    ts = np.geomspace(2e-5, 2e-4, 5)
    differences = [abs(kernel_comparison(smooth_potential, 0.3, t)) for t in ts]
    assert loglog_slope(ts, differences) == pytest.approx(1.0, abs=0.2)


@pytest.mark.parametrize("seed", range(10))
def test_residual_identities_over_seeds(seed):
    V = gen_piecewise_potential(make_grid(400), 10, 1e5, seed)
    H = assemble_hamiltonian(V.grid, V)
    for pair in lowest_eigenpairs(H, 3):
        assert thm1_residual(pair, V, 1e-3).identity_error <= 1e-10
    assert thm2_residual(solve_landscape(H, 1.0, V), 1e-3).identity_error <= 1e-10
