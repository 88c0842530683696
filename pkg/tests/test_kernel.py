import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import special

from regland.kernel import (
    KernelRadiusError,
    KernelSingularError,
    KernelSpec,
    eval_gaussian,
    eval_kernel,
    eval_kernel_quadrature,
    kernel_moment,
    sphere_area,
)


def test_origin_value_d1():
    # 1/√(πt) at t = 0.01
    assert eval_kernel(KernelSpec(scale=0.01), 0.0) == pytest.approx(5.641895835, rel=1e-9)


def test_d2_closed_form_value():
    spec = KernelSpec(dimension=2, scale=0.01)
    expected = special.exp1(1.0) / (4 * math.pi * 0.01)
    assert eval_kernel(spec, 0.2) == pytest.approx(expected, rel=1e-12)
    assert eval_kernel(spec, 0.2) == pytest.approx(1.7458, abs=1e-4)


def test_gaussian_origin():
    assert eval_gaussian(KernelSpec(scale=0.01), 0.0) == pytest.approx(2.82095, rel=1e-5)


def test_gaussian_is_even():
    spec = KernelSpec(scale=0.02)
    assert eval_gaussian(spec, -0.1) == eval_gaussian(spec, 0.1)


@pytest.mark.parametrize("dimension", [1, 2])
def test_closed_form_matches_quadrature(dimension):
    t = 0.01
    spec = KernelSpec(dimension=dimension, scale=t)
    r = math.sqrt(t) * np.geomspace(0.01, 20.0, 25)
    closed = eval_kernel(spec, r)
    quadrature = eval_kernel_quadrature(spec, r, tolerance=1e-11)
    np.testing.assert_allclose(quadrature, closed, rtol=0, atol=1e-10)


def test_d3_quadrature_matches_erfc_form():
    # (1/t)∫₀ᵗ (4πs)^{-3/2} e^{-r²/4s} ds = erfc(r/2√t)/(4π r t)
    t = 0.01
    spec = KernelSpec(dimension=3, scale=t)
    r = np.array([0.01, 0.05, 0.1, 0.3])
    expected = special.erfc(r / (2 * math.sqrt(t))) / (4 * math.pi * r * t)
    np.testing.assert_allclose(eval_kernel(spec, r), expected, rtol=1e-10)


@pytest.mark.parametrize("dimension", [1, 2, 3])
def test_unit_mass(dimension):
    spec = KernelSpec(dimension=dimension, scale=0.01)
    assert kernel_moment(spec, 0) == pytest.approx(1.0, abs=1e-6)


def test_second_moment_d1():
    t = 0.004
    assert kernel_moment(KernelSpec(scale=t), 2) == pytest.approx(t, abs=1e-6)


def test_gaussian_second_moment_d1():
    t = 0.004
    assert kernel_moment(KernelSpec(scale=t), 2, "gaussian") == pytest.approx(2 * t, rel=1e-8)


@pytest.mark.parametrize("dimension", [1, 2])
def test_strictly_decreasing(dimension):
    spec = KernelSpec(dimension=dimension, scale=1e-3)
    values = eval_kernel(spec, np.linspace(1e-4, 0.2, 500))
    assert np.all(np.diff(values) < 0)


def test_array_shape_preserved():
    spec = KernelSpec(scale=1e-3)
    r = np.linspace(0.0, 0.1, 12).reshape(3, 4)
    assert eval_kernel(spec, r).shape == (3, 4)
    assert isinstance(eval_kernel(spec, 0.01), float)


def test_far_tail_is_zero_not_nan():
    spec = KernelSpec(dimension=2, scale=1e-6)
    assert eval_kernel(spec, 1.0) == 0.0


@pytest.mark.parametrize("dimension", [2, 3])
def test_singular_at_origin(dimension):
    with pytest.raises(KernelSingularError):
        eval_kernel(KernelSpec(dimension=dimension, scale=0.01), 0.0)


def test_negative_radius():
    with pytest.raises(KernelRadiusError):
        eval_kernel(KernelSpec(scale=0.01), -0.1)


def test_quadrature_needs_positive_radius():
    with pytest.raises(KernelRadiusError):
        eval_kernel_quadrature(KernelSpec(scale=0.01), 0.0)


@pytest.mark.parametrize("scale", [0.0, -1.0, float("nan")])
def test_invalid_scale(scale):
    with pytest.raises(ValidationError):
        KernelSpec(scale=scale)


def test_sphere_area():
    assert sphere_area(1) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
