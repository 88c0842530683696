import numpy as np
import pytest

from regland.eigen import lowest_eigenpairs
from regland.hamiltonian import (
    Potential,
    SourceTerm,
    assemble_hamiltonian,
    gen_modulated_rhs,
    gen_piecewise_potential,
    make_grid,
)
from regland.landscape import (
    LandscapePositivityError,
    LandscapeSolution,
    NonPositiveSourceError,
    generalized_effective_potential,
    inverse_landscape,
    landscape_bound_violation,
    regularized_source,
    solve_landscape,
    write_landscape_csv,
)
from regland.utils import io


def operator(V: Potential):
    return assemble_hamiltonian(V.grid, V)


def test_free_landscape_is_parabola():
    grid = make_grid(999)
    V = Potential(grid=grid, values=np.zeros(grid.n))
    u = solve_landscape(operator(V))

    x = grid.nodes
    np.testing.assert_allclose(u.values, x * (1 - x) / 2, rtol=1e-8)
    assert u.values[grid.index_of(0.5)] == pytest.approx(0.125, rel=1e-9)
    assert u.residual <= 1e-8


def test_large_constant_potential():
    grid = make_grid(201)
    c = 1e8
    u = solve_landscape(operator(Potential(grid=grid, values=np.full(grid.n, c))))
    assert u.values[100] * c == pytest.approx(1.0, rel=1e-9)
    assert inverse_landscape(u)[100] == pytest.approx(c, rel=1e-9)


def test_linearity(random_potential):
    H = operator(random_potential)
    n = random_potential.grid.n
    f1 = np.linspace(1.0, 2.0, n)
    f2 = 1.0 + np.sin(np.arange(n)) ** 2

    total = solve_landscape(H, f1 + f2).values
    parts = solve_landscape(H, f1).values + solve_landscape(H, f2).values
    np.testing.assert_allclose(total, parts, rtol=1e-10)


def test_source_term_and_potential_kept(random_potential):
    f = gen_modulated_rhs(random_potential.grid, seed=3)
    v = solve_landscape(operator(random_potential), f, random_potential)
    np.testing.assert_array_equal(v.rhs, f.values)
    assert v.potential is random_potential
    assert np.all(v.values > 0)


def test_maximum_principle_over_seeds():
    grid = make_grid(200)
    for seed in range(25):
        V = gen_piecewise_potential(grid, 10, 1e5, seed)
        assert np.all(solve_landscape(operator(V)).values > 0)


@pytest.mark.parametrize("f", [0.0, -1.0])
def test_nonpositive_source(grid3, f):
    V = Potential(grid=grid3, values=np.zeros(3))
    with pytest.raises(NonPositiveSourceError):
        solve_landscape(operator(V), f)


def test_nonpositive_source_entry(grid3):
    V = Potential(grid=grid3, values=np.zeros(3))
    with pytest.raises(NonPositiveSourceError):
        solve_landscape(operator(V), np.array([1.0, 0.0, 1.0]))


def test_inverse_landscape(grid3):
    V = Potential(grid=grid3, values=np.zeros(3))
    u = LandscapeSolution(grid=grid3, values=[0.5, 0.5, 0.5], rhs=[1, 1, 1], potential=V, residual=0.0)
    np.testing.assert_array_equal(inverse_landscape(u), [2.0, 2.0, 2.0])


def test_inverse_landscape_rejects_nonpositive(grid3):
    V = Potential(grid=grid3, values=np.zeros(3))
    u = LandscapeSolution(grid=grid3, values=[0.5, 0.0, 0.5], rhs=[1, 1, 1], potential=V, residual=0.0)
    with pytest.raises(LandscapePositivityError):
        inverse_landscape(u)


def test_inverse_reverses_order(random_potential):
    u = solve_landscape(operator(random_potential))
    order = np.argsort(u.values)
    assert np.all(np.diff(inverse_landscape(u)[order]) <= 0)


def test_constant_source_recovers_inverse_landscape(random_potential):
    u = solve_landscape(operator(random_potential))
    effective = generalized_effective_potential(u, 1e-3, "reflect")
    np.testing.assert_allclose(effective, inverse_landscape(u), rtol=1e-12)


def test_effective_potential_scale_invariant(random_potential):
    H = operator(random_potential)
    f = gen_modulated_rhs(random_potential.grid, seed=1).values
    one = generalized_effective_potential(solve_landscape(H, f), 1e-3)
    two = generalized_effective_potential(solve_landscape(H, 2 * f), 1e-3)
    np.testing.assert_allclose(one, two, rtol=1e-12)


def test_regularized_source_of_constant(random_potential):
    v = solve_landscape(operator(random_potential), 3.0)
    np.testing.assert_allclose(regularized_source(v, 1e-3), 3.0, rtol=1e-13)


def test_landscape_bound(random_potential):
    H = operator(random_potential)
    pairs = lowest_eigenpairs(H, 5)
    u = solve_landscape(H)
    assert landscape_bound_violation(pairs, u) <= 1e-8


def test_landscape_csv(tmp_path, random_potential):
    u = solve_landscape(operator(random_potential))
    effective = generalized_effective_potential(u)
    path = write_landscape_csv(u, tmp_path / "landscape.csv", effective)

    columns = io.read_columns(path)
    assert list(columns) == ["node", "x", "f", "u", "inv_u", "effective"]
    np.testing.assert_array_equal(columns["u"], u.values)
    np.testing.assert_array_equal(columns["node"], np.arange(1, u.grid.n + 1))


def test_source_term_type_accepted(grid3):
    V = Potential(grid=grid3, values=np.zeros(3))
    f = SourceTerm(grid=grid3, values=[1.0, 1.0, 1.0])
    np.testing.assert_allclose(solve_landscape(operator(V), f).values, [0.09375, 0.125, 0.09375])


@pytest.mark.parametrize("seed", range(10))
def test_landscape_bound_over_seeds(seed):
    V = gen_piecewise_potential(make_grid(600), 20, 1e5, seed)
    H = operator(V)
    assert landscape_bound_violation(lowest_eigenpairs(H, 5), solve_landscape(H)) <= 1e-8
