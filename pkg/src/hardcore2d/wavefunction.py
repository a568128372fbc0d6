"""Radial relative wavefunction ``R(r) = r**l exp(-r**2/4) U(-m, l+1, r**2/2)``.

Normalization uses the polar measure without the angular ``2 pi``:
``int_{r0}^{inf} R(r)**2 r dr = 1``. Real eigenfunctions carry a sign gauge:
the first sample beyond the wall is positive.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, QuadratureError
from .quadrature import integrate
from .specfun import kummer_u_array

__all__ = [
    "GridConfig",
    "RadialProfile",
    "eval_radial_unnormalized",
    "eval_radial_derivative_unnormalized",
    "build_profile",
    "density_overlap",
    "default_r_max",
    "wall_breakpoints",
    "write_profile_csv",
]


@dataclass(frozen=True)
class GridConfig:
    """Sampling and accuracy settings for :func:`build_profile`."""

    n_samples: int = 4000
    quad_tol: float = 1e-12
    tail_tol: float = 1e-12
    r_max: float | None = None
    max_extensions: int = 8


def default_r_max(state):
    """Classical turning point ``2 sqrt(E)`` plus ten oscillator lengths."""
    return max(2.0 * math.sqrt(max(state.energy, 0.0)) + 10.0, state.r0 + 10.0)


def _radial_raw(state, r):
    r = np.asarray(r, dtype=float)
    l = state.label.l
    u, _ = kummer_u_array(-state.m, l + 1, 0.5 * r * r)
    return np.exp(l * np.log(r) - 0.25 * r * r) * u


def _radial_raw_derivative(state, r):
    # dU(a, b, z)/dz = -a U(a + 1, b + 1, z) and dz/dr = r
    r = np.asarray(r, dtype=float)
    l, m = state.label.l, state.m
    z = 0.5 * r * r
    u, _ = kummer_u_array(-m, l + 1, z)
    du, _ = kummer_u_array(1.0 - m, l + 2, z)
    envelope = np.exp(l * np.log(r) - 0.25 * r * r)
    return envelope * ((l / r - 0.5 * r) * u + r * m * du)


def eval_radial_unnormalized(state, r):
    """``r**l exp(-r**2/4) U(-m, l+1, r**2/2)`` for ``r >= r0``."""
    if np.any(np.asarray(r) < state.r0):
        raise DomainError(f"radial function evaluated below the wall r0={state.r0}")
    out = _radial_raw(state, r)
    return float(out) if np.ndim(out) == 0 else out


def eval_radial_derivative_unnormalized(state, r):
    """Radial derivative of :func:`eval_radial_unnormalized`."""
    if np.any(np.asarray(r) < state.r0):
        raise DomainError(f"radial derivative evaluated below the wall r0={state.r0}")
    out = _radial_raw_derivative(state, r)
    return float(out) if np.ndim(out) == 0 else out


def wall_breakpoints(r0, r_max, levels=24):
    """Panel edges graded geometrically towards the wall."""
    width = r_max - r0
    return r0 + width * 0.5 ** np.arange(1, levels)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Normalized, sign-fixed radial function of one solved state.

    ``scale`` maps the raw hypergeometric form to the normalized function and
    already includes the sign gauge. Sampled arrays live on a uniform grid of
    ``[r0, r_max]`` with the interior nodes inserted (``R = 0`` there);
    :meth:`radial` evaluates the function anywhere.
    """

    state: object
    r_grid: np.ndarray = field(repr=False)
    R_values: np.ndarray = field(repr=False)
    rho_values: np.ndarray = field(repr=False)
    r_max: float
    node_count: int
    nodes: tuple
    scale: float
    norm_error: float = 0.0

    @property
    def r0(self):
        return self.state.r0

    def radial(self, r, continued=False):
        """Normalized ``R(r)``; zero below the wall unless ``continued``.

        With ``continued=True`` the analytic expression is used below ``r0``
        as well, which finite differences in ``r0`` rely on.
        """
        r = np.asarray(r, dtype=float)
        out = self.scale * _radial_raw(self.state, np.maximum(r, 1e-300))
        if not continued:
            out = np.where(r >= self.r0, out, 0.0)
        return out

    def radial_derivative(self, r, continued=False):
        """Normalized ``dR/dr``; zero below the wall unless ``continued``."""
        r = np.asarray(r, dtype=float)
        out = self.scale * _radial_raw_derivative(self.state, np.maximum(r, 1e-300))
        if not continued:
            out = np.where(r >= self.r0, out, 0.0)
        return out

    def integrate(self, integrand, lo=None, hi=None, tol=1e-12):
        """``int integrand(r) dr`` over ``[lo, hi]`` (default ``[r0, r_max]``)."""
        lo = self.r0 if lo is None else lo
        hi = self.r_max if hi is None else hi
        return integrate(integrand, lo, hi, tol=tol, breakpoints=wall_breakpoints(lo, hi))


def build_profile(state, grid_config=None):
    """Normalize ``state`` and sample it on a uniform diagnostic grid."""
    cfg = grid_config or GridConfig()
    r0 = state.r0
    r_max = cfg.r_max if cfg.r_max is not None else default_r_max(state)

    def weight(r):
        return _radial_raw(state, r) ** 2 * r

    for _ in range(cfg.max_extensions + 1):
        mass, err = integrate(weight, r0, r_max, tol=cfg.quad_tol, breakpoints=wall_breakpoints(r0, r_max))
        tail, _ = integrate(weight, r_max, r_max + 10.0, tol=1e-6)
        if tail <= cfg.tail_tol * mass:
            break
        r_max += 5.0
    else:
        raise QuadratureError(
            f"tail mass beyond r_max={r_max:.6g} stays above {cfg.tail_tol:g} for {state.label}"
        )

    r_grid = np.linspace(r0, r_max, cfg.n_samples)
    raw = _radial_raw(state, r_grid)
    raw[0] = 0.0
    first = raw[np.flatnonzero(raw)[0]] if np.any(raw) else 1.0
    scale = math.copysign(1.0 / math.sqrt(mass), first)
    R = scale * raw

    inner = R[1:-1]
    nodes = []
    for i in np.flatnonzero(np.sign(inner[:-1]) * np.sign(inner[1:]) < 0):
        a, b = r_grid[i + 1], r_grid[i + 2]
        nodes.append(brentq(lambda x: float(_radial_raw(state, x)), a, b, xtol=1e-13, rtol=1e-15))
    if nodes:
        # Put the refined nodes on the grid so sampled output pins them exactly.
        at = np.searchsorted(r_grid, nodes)
        r_grid = np.insert(r_grid, at, nodes)
        R = np.insert(R, at, 0.0)
    return RadialProfile(
        state=state,
        r_grid=r_grid,
        R_values=R,
        rho_values=R * R,
        r_max=float(r_max),
        node_count=len(nodes),
        nodes=tuple(nodes),
        scale=scale,
        norm_error=err / mass,
    )


def density_overlap(p, q, tol=1e-12):
    """``int R_p R_q r dr`` with each function zero below its own wall."""
    lo = max(p.r0, q.r0)
    hi = max(p.r_max, q.r_max)
    val, _ = integrate(
        lambda r: p.radial(r) * q.radial(r) * r, lo, hi, tol=tol, breakpoints=wall_breakpoints(lo, hi)
    )
    return val


def write_profile_csv(profile, path_or_file, fmt="{:.12g}"):
    """Write ``r, R, rho`` rows of a profile."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["r", "R", "rho"])
        for r, R, rho in zip(profile.r_grid, profile.R_values, profile.rho_values):
            w.writerow([fmt.format(r), fmt.format(R), fmt.format(rho)])
    finally:
        if own:
            fh.close()
