import math

import numpy as np
import pytest

from regland.hamiltonian import Potential, make_grid
from regland.kernel import KernelSpec
from regland.regularize import (
    InteriorWindowError,
    KernelDimensionError,
    check_interior,
    convolve,
    convolve_at,
    identity_kernel,
    inverse_mean_scale,
    regularized_potential,
    sample_kernel,
    second_order_term,
)


def potential(n: int, profile) -> Potential:
    grid = make_grid(n)
    return Potential(grid=grid, values=profile(grid.nodes))


def test_kernel_shape():
    h = 1e-3
    K = sample_kernel(KernelSpec(scale=1e-3), h)
    assert K.truncation_radius >= 10 * math.sqrt(1e-3)
    assert K.radius == math.ceil(10 * math.sqrt(1e-3) / h)
    np.testing.assert_array_equal(K.weights, K.weights[::-1])
    assert np.all(K.weights > 0)
    assert np.sum(K.taps) == pytest.approx(1.0, abs=1e-14)
    assert not K.identity


def test_kernel_minimal_radius():
    h = 0.01
    K = sample_kernel(KernelSpec(scale=4e-6), h)
    assert K.radius == 5


def test_raw_mass_lattice_drift():
    # the cusp of k_t at 0 shifts the lattice sum by h²/(12t)
    t, h = 1e-3, 1.0 / 1000
    K = sample_kernel(KernelSpec(scale=t), h)
    assert K.raw_mass - 1.0 == pytest.approx(h**2 / (12 * t), abs=1e-6)
    assert K.tail_mass <= 1e-6


def test_gaussian_kernel_mass():
    K = sample_kernel(KernelSpec(scale=1e-4), 1e-3, "gaussian")
    assert K.raw_mass == pytest.approx(1.0, abs=1e-9)
    assert K.second_moment() == pytest.approx(2e-4, rel=1e-6)


def test_kernel_second_moment():
    t, h = 1e-4, 1e-3
    K = sample_kernel(KernelSpec(scale=t), h)
    assert K.second_moment() == pytest.approx(t, rel=1e-2)


def test_unresolvable_scale_gives_identity(caplog):
    K = sample_kernel(KernelSpec(scale=1e-12), 1e-3)
    assert K.identity
    np.testing.assert_allclose(K.weights, [1000.0])
    assert "identity" in caplog.text


def test_kernel_dimension():
    with pytest.raises(KernelDimensionError):
        sample_kernel(KernelSpec(dimension=2, scale=1e-3), 1e-3)


def test_constants_preserved():
    V = potential(500, lambda x: np.full_like(x, 3.7))
    Vt = regularized_potential(V, 1e-3, "reflect")
    np.testing.assert_allclose(Vt.values, 3.7, rtol=1e-13)
    assert Vt.t == 1e-3
    assert Vt.policy == "reflect"


def test_zero_padding_loses_mass_at_boundary():
    V = potential(500, lambda x: np.ones_like(x))
    Vt = regularized_potential(V, 1e-3, "zero").values
    assert Vt[0] < 0.6
    assert Vt[250] == pytest.approx(1.0, rel=1e-12)


def test_identity_at_zero_scale(random_potential):
    Vt = regularized_potential(random_potential, 0.0)
    assert Vt.identity
    np.testing.assert_array_equal(Vt.values, random_potential.values)


def test_sup_norm_bound(random_potential):
    for t in (1e-5, 1e-4, 1e-3):
        Vt = regularized_potential(random_potential, t)
        assert np.max(np.abs(Vt.values)) <= random_potential.sup * (1 + 1e-12)


def test_smooth_potential_pointwise():
    # V = sin²(2πx): (t/2)·V''(0.25) = -4π²t
    t = 1e-4
    V = potential(1999, lambda x: np.sin(2 * np.pi * x) ** 2)
    node = V.grid.index_of(0.25)
    difference = regularized_potential(V, t).values[node] - V.values[node]
    assert difference == pytest.approx(-4 * np.pi**2 * t, rel=0.05)


def test_quadratic_shifts_by_t():
    t = 1e-4
    V = potential(999, lambda x: x**2)
    node = V.grid.index_of(0.5)
    difference = regularized_potential(V, t).values[node] - V.values[node]
    assert difference == pytest.approx(t, rel=0.01)


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_rough_potential_rate(alpha):
    V = potential(20001, lambda x: np.abs(x - 0.5) ** alpha)
    node = V.grid.index_of(0.5)
    assert V.values[node] == 0.0

    ts = np.geomspace(1e-6, 1e-3, 7)
    errors = [convolve_at(V, sample_kernel(KernelSpec(scale=t), V.grid.h), node) for t in ts]
    slope = np.polyfit(np.log(ts), np.log(errors), 1)[0]
    assert slope == pytest.approx(alpha / 2, abs=0.05)


@pytest.mark.parametrize("policy", ["reflect", "zero"])
def test_convolve_at_matches_convolve(random_potential, policy):
    K = sample_kernel(KernelSpec(scale=2e-3), random_potential.grid.h)
    full = convolve(random_potential, K, policy)
    for node in (0, 3, 300, 597, 600):
        assert convolve_at(random_potential, K, node, policy) == pytest.approx(full[node], rel=1e-12)


def test_convolve_at_with_kernel_wider_than_grid():
    V = potential(20, lambda x: 1.0 + x)
    K = sample_kernel(KernelSpec(scale=1e-2), V.grid.h)
    assert K.radius > V.grid.n
    full = convolve(V, K, "reflect")
    for node in range(V.grid.n):
        assert convolve_at(V, K, node, "reflect") == pytest.approx(full[node], rel=1e-12)


def test_identity_kernel_convolution(random_potential):
    K = identity_kernel(random_potential.grid.h)
    np.testing.assert_array_equal(convolve(random_potential, K), random_potential.values)
    assert convolve_at(random_potential, K, 17) == random_potential.values[17]


def test_second_order_term_constant():
    c, t = 50.0, 1e-4
    V = potential(999, lambda x: np.full_like(x, c))
    assert second_order_term(V, 0.5, t) == pytest.approx(c**2 * t**2, rel=1e-8)


def test_second_order_term_vanishes_for_zero(zero_potential):
    assert second_order_term(zero_potential, 0.5, 1e-4) == 0.0


def test_second_order_term_needs_interior(random_potential):
    with pytest.raises(InteriorWindowError):
        second_order_term(random_potential, 0.01, 1e-3)


def test_check_interior(random_potential):
    check_interior(random_potential, 300, 1e-3)
    with pytest.raises(InteriorWindowError):
        check_interior(random_potential, 5, 1e-3)


def test_inverse_mean_scale():
    grid = make_grid(999)
    assert inverse_mean_scale(Potential(grid=grid, values=np.zeros(grid.n))) == 1e-2
    assert inverse_mean_scale(Potential(grid=grid, values=np.full(grid.n, 1e3))) == pytest.approx(1e-3)
    assert inverse_mean_scale(Potential(grid=grid, values=np.full(grid.n, 1e9))) == pytest.approx(4 * grid.h**2)
