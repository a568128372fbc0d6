import math

import pytest

from conftest import R0_INNER_ZERO, R0_OUTER_ZERO
from hardcore2d.eigensolver import solve_m_values
from hardcore2d.errors import ConvergenceError, DomainError
from hardcore2d.oracle import OracleConfig, OracleEigenvalue, fd_eigenvalues, fd_matrix_eigenvalues


@pytest.mark.parametrize(
    "l, r0, index, energy",
    [
        (0, math.sqrt(2), 0, 3.0),
        (4, math.sqrt(10), 0, 7.0),
        (0, R0_INNER_ZERO, 1, 5.0),
        (0, R0_OUTER_ZERO, 0, 5.0),
    ],
)
def test_closed_form_anchors(l, r0, index, energy):
    res = fd_eigenvalues(l, r0)
    assert isinstance(res[index], OracleEigenvalue)
    assert res[index].energy == pytest.approx(energy, abs=1e-4)
    assert res[index].est_error < 1e-4


@pytest.mark.parametrize("l, r0", [(0, 0.5), (1, 2.0), (3, 1.0), (6, 4.0)])
def test_agrees_with_hypergeometric_route(l, r0):
    exact = [l + 1 + 2 * m for m in solve_m_values(l, r0, 3)]
    for got, want in zip(fd_eigenvalues(l, r0), exact):
        assert got.energy == pytest.approx(want, abs=1e-8)


def test_log_grid_second_order_at_tiny_wall():
    r0 = 1e-3
    exact = [1 + 2 * m for m in solve_m_values(0, r0, 2)]
    res = fd_eigenvalues(0, r0, OracleConfig(h=4e-3, grid="log", n_eigen=2))
    for got, want in zip(res, exact):
        assert 3.6 <= (got.coarse - want) / (got.fine - want) <= 4.4
        assert got.energy == pytest.approx(want, abs=1e-9)


def test_matrix_eigenvalues_are_sorted_variational_bounds():
    vals = fd_matrix_eigenvalues(2, 1.0, 15.0, 1e-2, 3)
    exact = [3 + 2 * m for m in solve_m_values(2, 1.0, 3)]
    assert list(vals) == sorted(vals)
    # The three-point stencil underestimates the kinetic term.
    assert all(v < e for v, e in zip(vals, exact))


@pytest.mark.parametrize(
    "kw", [{"h": 0.0}, {"n_eigen": 0}, {"grid": "chebyshev"}],
)
def test_config_validation(kw):
    with pytest.raises(DomainError):
        OracleConfig(**kw)


def test_argument_validation():
    with pytest.raises(DomainError):
        fd_eigenvalues(0, 0.0)
    with pytest.raises(DomainError):
        fd_eigenvalues(-1, 1.0)
    with pytest.raises(DomainError):
        fd_eigenvalues(0, 1.0, OracleConfig(r_max=4.0))


def test_unresolved_grid_raises():
    with pytest.raises(ConvergenceError, match="l=0"):
        fd_eigenvalues(0, 1.0, OracleConfig(h=0.2, tol=1e-6))
