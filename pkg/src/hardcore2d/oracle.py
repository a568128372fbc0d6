"""Finite-difference eigenvalues, independent of the hypergeometric route.

The radial problem is discretized in the Liouville form ``u = sqrt(r) R``::

    -u'' + [(l**2 - 1/4) / r**2 + r**2 / 4] u = E u,   u(r0) = u(r_max) = 0

with the three-point second difference, giving a symmetric tridiagonal
matrix. Its lowest eigenvalues are extracted by Sturm-count bisection
(LAPACK ``stebz`` behind :func:`scipy.linalg.eigh_tridiagonal`), and the
results at spacings ``h`` and ``h/2`` are Richardson-extrapolated.

For tiny ``r0`` the ``l = 0`` solution varies on the scale of ``r0`` itself,
so a logarithmic grid ``t = ln r`` is offered as well. There the equation
reads ``-R_tt + (l**2 + e**(4t)/4) R = E e**(2t) R``, which is symmetrized by
the diagonal weight ``e**t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .eigensolver import free_energy
from .errors import ConvergenceError, DomainError

__all__ = ["OracleConfig", "OracleEigenvalue", "fd_eigenvalues", "fd_matrix_eigenvalues"]


@dataclass(frozen=True)
class OracleConfig:
    """Grid spacing ``h``, cutoff ``r_max`` (``None``: automatic) and count.

    ``grid`` is ``"uniform"`` in ``r`` or ``"log"`` (``h`` is then the
    spacing in ``ln r``). ``tol`` is the accuracy the caller needs; the solve
    fails when the two resolutions disagree by more than ``10 tol``.
    """

    h: float = 1e-3
    r_max: float | None = None
    n_eigen: int = 3
    grid: str = "uniform"
    tol: float = 1e-4

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("h must be positive")
        if self.n_eigen < 1:
            raise DomainError("n_eigen must be >= 1")
        if self.grid not in ("uniform", "log"):
            raise DomainError(f"unknown grid {self.grid!r}")


@dataclass(frozen=True)
class OracleEigenvalue:
    energy: float
    est_error: float
    coarse: float
    fine: float


# Bisection tolerance. The default, eps * ||T||, is useless on the graded
# log-grid matrix whose diagonal reaches ~1e13 next to a tiny wall.
_BISECT_TOL = 1e-13


def _default_r_max(l, r0, n_eigen):
    # Free-spectrum guess, lifted by the trap energy at the wall.
    e_guess = free_energy(l, n_eigen) + 0.25 * r0 * r0
    return max(2.0 * math.sqrt(e_guess) + 10.0, r0 + 10.0)


def _uniform_matrix(l, r0, r_max, h):
    n = int(round((r_max - r0) / h))
    r = r0 + h * np.arange(1, n)
    diag = 2.0 / h**2 + (l * l - 0.25) / r**2 + 0.25 * r**2
    off = np.full(n - 2, -1.0 / h**2)
    return diag, off


def _log_matrix(l, r0, r_max, h):
    n = int(round(math.log(r_max / r0) / h))
    t = math.log(r0) + h * np.arange(1, n)
    w = np.exp(t)
    diag = (2.0 / h**2 + l * l + 0.25 * w**4) / w**2
    off = -1.0 / (h**2 * w[:-1] * w[1:])
    return diag, off


def fd_matrix_eigenvalues(l, r0, r_max, h, n_eigen, grid="uniform"):
    """Lowest ``n_eigen`` eigenvalues of one discretization (no extrapolation)."""
    build = _uniform_matrix if grid == "uniform" else _log_matrix
    diag, off = build(l, r0, r_max, h)
    return eigh_tridiagonal(
        diag, off, eigvals_only=True, select="i", select_range=(0, n_eigen - 1),
        lapack_driver="stebz", tol=_BISECT_TOL,
    )


def fd_eigenvalues(l, r0, config=None):
    """Lowest eigenvalues for angular momentum ``l`` and hard-core range ``r0``.

    Returns a list of :class:`OracleEigenvalue`, Richardson-extrapolated from
    spacings ``h`` and ``h/2``, each with the extrapolation difference as its
    error estimate.
    """
    cfg = config or OracleConfig()
    if not r0 > 0:
        raise DomainError("hard-core range must satisfy r0 > 0")
    if int(l) != l or l < 0:
        raise DomainError(f"l must be a non-negative integer, got {l!r}")
    r_max = cfg.r_max if cfg.r_max is not None else _default_r_max(l, r0, cfg.n_eigen)
    if not r_max > r0 + 5:
        raise DomainError(f"r_max={r_max} must exceed r0 + 5")
    coarse = fd_matrix_eigenvalues(l, r0, r_max, cfg.h, cfg.n_eigen, cfg.grid)
    fine = fd_matrix_eigenvalues(l, r0, r_max, 0.5 * cfg.h, cfg.n_eigen, cfg.grid)
    gap = np.abs(fine - coarse)
    if np.any(gap > 10 * cfg.tol):
        raise ConvergenceError(
            f"finite-difference eigenvalues for l={l}, r0={r0:g} move by {gap.max():.3g} "
            f"between h={cfg.h:g} and h/2; refine h"
        )
    extrap = (4.0 * fine - coarse) / 3.0
    return [
        OracleEigenvalue(energy=float(e), est_error=float(g) / 3.0, coarse=float(c), fine=float(f))
        for e, g, c, f in zip(extrap, gap, coarse, fine)
    ]
