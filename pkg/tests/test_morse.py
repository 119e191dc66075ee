import math

from hypothesis import example, given, settings, strategies as st
import numpy as np
import pytest

from morsepacket import morse
from morsepacket.exceptions import (
    ContractError,
    DomainError,
    LevelError,
    NoBoundStateError,
    TruncationError,
)


def with_lambda(lam):
    # beta = mu = r0 = 1 gives lambda = sqrt(2 D)
    return morse.MoleculeParams(D=lam ** 2 / 2.0, beta=1.0, mu=1.0, r0=1.0)


def test_lambda_regression(params):
    # [DERIVED] mpmath at 40 digits
    assert morse.lambda_param(params) == pytest.approx(29.60091260794681251, rel=1e-14)


def test_hi_has_thirty_levels(params):
    # [PUBLISHED] HI supports 30 bound states
    assert morse.bound_level_max(params) == 29
    assert morse.level_count(params) == 30


@pytest.mark.parametrize("lam, n_max", [(1.6, 1), (0.6, 0), (2.49, 1), (1.5, 0), (3.5, 2)])
def test_bound_level_max(lam, n_max):
    p = with_lambda(lam)
    assert morse.lambda_param(p) == pytest.approx(lam, rel=1e-14)
    assert morse.bound_level_max(p) == n_max
    assert morse.s_param(n_max, p) > 0


@pytest.mark.parametrize("lam", [0.5, 0.3])
def test_no_bound_state(lam):
    with pytest.raises(NoBoundStateError):
        with_lambda(lam)


@pytest.mark.parametrize("field, value", [("D", -1.0), ("beta", 0.0), ("mu", math.nan), ("r0", math.inf)])
def test_params_validation(field, value):
    kwargs = dict(D=0.1125, beta=2.07932, mu=1819.99, r0=3.04159)
    kwargs[field] = value
    with pytest.raises(DomainError):
        morse.MoleculeParams(**kwargs)
    with pytest.raises(DomainError):
        morse.MoleculeParams(D=0.1125, beta=2.07932, mu=1819.99, r0=3.04159, hbar=2.0)


# [DERIVED] -(D/lambda^2)(lambda - n - 1/2)^2 in mpmath, frozen.
ENERGY_TABLE = [
    (0, -0.1087315398226870636),
    (1, -0.10138720940015205629),
    (10, -0.046843631522788920451),
    (29, -1.3074743603751761702e-6),
]


@pytest.mark.parametrize("n, expected", ENERGY_TABLE)
def test_energy_values(params, n, expected):
    assert morse.energy(n, params) == pytest.approx(expected, rel=1e-12)


def test_energies_vector_and_ordering(params):
    e = morse.energies(params)
    assert e.shape == (30,)
    assert np.all(np.diff(e) > 0)
    assert np.all(e < 0)
    assert np.allclose(e, [morse.energy(n, params) for n in range(30)], rtol=0, atol=0)


@pytest.mark.parametrize("n", [-1, 30, 2.5])
def test_level_bounds(params, n):
    with pytest.raises(LevelError):
        morse.energy(n, params)
    with pytest.raises(LevelError):
        morse.eigenfunction(n, morse.DEFAULT_GRID, params)


def test_potential_shape(params):
    x = np.linspace(-0.5, 5.0, 2001)
    v = morse.potential(x, params)
    assert morse.potential(0.0, params) == pytest.approx(-params.D, rel=1e-15)
    assert x[np.argmin(v)] == pytest.approx(0.0, abs=3e-3)
    assert abs(morse.potential(30.0, params)) < 1e-20


# [DERIVED] N exp(-xi/2) xi^(s/2) L_n^s(xi) in mpmath at 40 digits, frozen.
# Grid linspace(-0.1, 0.8, 10) puts nodes at -0.1, 0.0, 0.1, 0.3, 0.8.
EIGEN_TABLE = [
    (0, 1, 2.5031943494380063039),
    (0, 2, 1.5277023490136030302),
    (3, 0, -1.2214548919366575478),
    (10, 4, -0.87204776985233275892),
    (20, 9, -0.045157036165761461887),
]


@pytest.mark.parametrize("n, index, expected", EIGEN_TABLE)
def test_eigenfunction_values(params, n, index, expected):
    grid = morse.SpatialGrid(-0.1, 0.8, 10)
    psi = morse.eigenfunction(n, grid, params, check=False)
    assert psi.values[index] == pytest.approx(expected, rel=1e-11)


@pytest.mark.parametrize("n", [0, 1, 7, 15, 24])
def test_eigenfunction_norm_and_nodes(params, grid, n):
    psi = morse.eigenfunction(n, grid, params)
    assert psi.norm() == pytest.approx(1.0, abs=1e-10)
    vals = psi.values[np.abs(psi.values) > 1e-6 * np.abs(psi.values).max()]
    assert np.count_nonzero(np.diff(np.sign(vals))) == n


def test_low_levels_orthonormal(params, grid):
    basis = np.array([morse.eigenfunction(n, grid, params).values for n in range(20)])
    gram = (basis * grid.rule.weights) @ basis.T
    assert np.abs(gram - np.eye(20)).max() < 1e-10


def test_loosely_bound_levels_need_a_wider_grid(params, grid):
    with pytest.raises(TruncationError) as info:
        morse.eigenfunction(29, grid, params)
    assert info.value.right > morse.EDGE_DECAY
    wide = morse.support_grid(params, spacing=5e-3)
    assert morse.eigenfunction(29, wide, params).norm() == pytest.approx(1.0, abs=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=24))
@example(24)
def test_schrodinger_residual(n):
    """Fourth-order finite differences of H psi_n against E_n psi_n."""
    params = morse.HI
    grid = morse.SpatialGrid(-0.8, 4.0, 24001)
    psi = morse.eigenfunction(n, grid, params).values
    h = grid.spacing
    d2 = (-psi[4:] + 16 * psi[3:-1] - 30 * psi[2:-2] + 16 * psi[1:-3] - psi[:-4]) / (12 * h * h)
    x = grid.points[2:-2]
    kinetic = -d2 / (2.0 * params.mu * params.r0 ** 2)
    resid = kinetic + morse.potential(x, params) * psi[2:-2] - morse.energy(n, params) * psi[2:-2]
    assert np.abs(resid).max() < 1e-6 * params.D * np.abs(psi).max()


def test_wavefunction_contracts(params):
    g1 = morse.SpatialGrid(0.0, 1.0, 11)
    g2 = morse.SpatialGrid(0.0, 1.0, 21)
    with pytest.raises(ContractError):
        morse.WaveFunction(g1, np.zeros(5))
    a = morse.WaveFunction(g1, np.ones(11))
    b = morse.WaveFunction(g2, np.ones(21))
    with pytest.raises(ContractError):
        a + b
    with pytest.raises(ContractError):
        morse.inner_product(a, b)
    assert morse.overlap(a, a.scaled(3j)) == pytest.approx(1.0)
    with pytest.raises(ContractError):
        morse.SpatialGrid(1.0, 0.0, 10)
