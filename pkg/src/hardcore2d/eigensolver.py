"""Hard-core boundary condition and the resulting energy levels.

A relative-motion level with angular momentum ``l`` has energy
``E = l + 1 + 2 m`` where ``m`` solves ``U(-m, l + 1, r0**2 / 2) = 0``.
Roots are located by a sign-change scan on a uniform ``m`` grid and refined by
a bracketing regula falsi (Illinois) with bisection safeguard. Everything is
vectorized over many ``r0`` at once so whole spectrum sweeps stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, RootNotFoundError
from .specfun import kummer_u_array

__all__ = [
    "QuantumLabel",
    "EigenState",
    "boundary_function",
    "free_energy",
    "solve_m_values",
    "solve_m_batch",
    "solve_state",
    "refine_m",
    "refine_m_batch",
    "M_MAX",
    "SCAN_STEP",
    "XTOL",
]

M_MAX = 30.0
SCAN_STEP = 0.02
XTOL = 1e-13
_CHUNK = 128


@dataclass(frozen=True, order=True)
class QuantumLabel:
    """Angular momentum ``l`` and m-order ``order`` (1 = smallest root)."""

    l: int
    order: int

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 0:
            raise DomainError(f"l must be a non-negative integer, got {self.l!r}")
        if int(self.order) != self.order or self.order < 1:
            raise DomainError(f"order must be a positive integer, got {self.order!r}")

    def __str__(self):
        return f"(l={self.l}, o={self.order})"


@dataclass(frozen=True)
class EigenState:
    """A solved level; ``energy = l + 1 + 2 m``."""

    label: QuantumLabel
    r0: float
    m: float

    @property
    def energy(self):
        return self.label.l + 1 + 2 * self.m

    @property
    def l(self):
        return self.label.l


def free_energy(l, order):
    """Non-interacting level ``l + 1 + 2 (order - 1)``, the ``r0 -> 0`` limit."""
    return l + 1 + 2 * (order - 1)


def _check_r0(r0):
    r0 = np.asarray(r0, dtype=float)
    if np.any(~(r0 > 0)) or np.any(~np.isfinite(r0)):
        raise DomainError("hard-core range must satisfy r0 > 0")
    return r0


def boundary_function(l, r0, m):
    """``U(-m, l + 1, r0**2 / 2)``; zero exactly at the allowed ``m``."""
    r0 = _check_r0(r0)
    v, _ = kummer_u_array(-np.asarray(m, dtype=float), l + 1, 0.5 * r0 * r0)
    return float(v) if np.ndim(v) == 0 else v


def _refine(func, lo, hi, flo, fhi, xtol):
    """Vectorized Illinois regula falsi on sign-changing brackets ``[lo, hi]``.

    Two safeguards keep the bracket shrinking: a bisection whenever two steps
    failed to halve it, and a minimum step of ``xtol / 2`` away from either
    end, so the far end collapses once one side has converged.
    """
    lo, hi, flo, fhi = (np.array(v, dtype=float) for v in (lo, hi, flo, fhi))
    eps = np.finfo(float).eps
    side = np.zeros(lo.shape, dtype=int)
    bisect = np.zeros(lo.shape, dtype=bool)
    prev_width = np.full(lo.shape, np.inf)
    for _ in range(200):
        width = hi - lo
        tol = xtol + 4 * eps * np.abs(hi)
        active = width > tol
        if not active.any():
            break
        with np.errstate(invalid="ignore", divide="ignore"):
            x = (lo * fhi - hi * flo) / (fhi - flo)
        mid = 0.5 * (lo + hi)
        x = np.where(bisect | ~np.isfinite(x), mid, x)
        x = np.clip(x, lo + 0.5 * tol, hi - 0.5 * tol)
        idx = np.flatnonzero(active)
        fx = np.zeros(lo.shape)
        fx[idx] = func(x[idx], idx)
        hit = active & (fx == 0.0)
        left = active & ~hit & (np.sign(fx) == np.sign(flo))
        right = active & ~hit & ~left

        # Illinois: halve the stale end value when the same side moves twice.
        fhi = np.where(left & (side == -1), 0.5 * fhi, fhi)
        flo = np.where(right & (side == 1), 0.5 * flo, flo)
        new_lo = np.where(left | hit, x, lo)
        new_hi = np.where(right | hit, x, hi)
        flo = np.where(left | hit, fx, flo)
        fhi = np.where(right | hit, fx, fhi)
        side = np.where(left, -1, np.where(right, 1, side))
        bisect = active & ((new_hi - new_lo) > 0.5 * prev_width)
        prev_width = np.where(active, width, prev_width)
        lo, hi = new_lo, new_hi
    with np.errstate(invalid="ignore", divide="ignore"):
        root = (lo * fhi - hi * flo) / (fhi - flo)
    root = np.where(np.isfinite(root) & (root >= lo) & (root <= hi), root, 0.5 * (lo + hi))
    return np.where(hi == lo, lo, root)


def solve_m_batch(l, r0s, count, m_max=M_MAX, step=SCAN_STEP, xtol=XTOL):
    """Smallest ``count`` positive roots ``m`` for every ``r0`` in ``r0s``.

    Returns an array of shape ``(len(r0s), count)``, rows strictly increasing.
    """
    r0s = np.atleast_1d(_check_r0(r0s))
    if count < 1:
        raise DomainError("count must be >= 1")
    z = 0.5 * r0s * r0s
    nrow = len(r0s)
    n_grid = int(round(m_max / step))

    found = [[] for _ in range(nrow)]
    brackets = []  # (row, lo, hi, flo, fhi)
    pending = np.arange(nrow)
    last_m = np.zeros(nrow)
    last_f, _ = kummer_u_array(np.zeros(nrow), l + 1, z)
    j0 = 1
    while pending.size and j0 <= n_grid:
        j1 = min(j0 + _CHUNK, n_grid + 1)
        mgrid = np.arange(j0, j1) * step
        f, _ = kummer_u_array(-mgrid[None, :], l + 1, z[pending, None])
        still = []
        for i, row in enumerate(pending):
            ms = np.concatenate(([last_m[row]], mgrid))
            fs = np.concatenate(([last_f[row]], f[i]))
            need = count - len(found[row])
            for k in range(1, len(ms)):
                if need == 0:
                    break
                if fs[k] == 0.0:
                    found[row].append(ms[k])
                    need -= 1
                elif fs[k - 1] != 0.0 and np.sign(fs[k - 1]) != np.sign(fs[k]):
                    found[row].append(-1 - len(brackets))
                    brackets.append((row, ms[k - 1], ms[k], fs[k - 1], fs[k]))
                    need -= 1
            last_m[row], last_f[row] = ms[-1], fs[-1]
            if need > 0:
                still.append(row)
        pending = np.array(still, dtype=int)
        j0 = j1
    if pending.size:
        bad = r0s[pending[0]]
        raise RootNotFoundError(
            f"only {len(found[pending[0]])} of {count} roots "
            f"below m_max={m_max} for l={l}, r0={bad:.12g}; raise m_max"
        )

    if brackets:
        rows = np.array([b[0] for b in brackets])
        bz = z[rows]

        def func(m, idx):
            v, _ = kummer_u_array(-m, l + 1, bz[idx])
            return v

        roots = _refine(
            func,
            [b[1] for b in brackets],
            [b[2] for b in brackets],
            [b[3] for b in brackets],
            [b[4] for b in brackets],
            xtol,
        )
        for row in range(nrow):
            found[row] = [roots[-1 - v] if v < 0 else v for v in found[row]]
    return np.array(found, dtype=float).reshape(nrow, count)


def refine_m_batch(l, r0s, m_lo, m_hi, xtol=XTOL):
    """Roots of :func:`boundary_function` inside ``[m_lo, m_hi]`` per ``r0``.

    Skips the scan when brackets are already known, e.g. from neighbouring
    ``r0`` values of one level (its ``m`` grows monotonically with ``r0``).
    Entries whose ends do not differ in sign come back as ``nan``.
    """
    r0s = np.atleast_1d(_check_r0(r0s))
    m_lo = np.asarray(m_lo, dtype=float)
    m_hi = np.asarray(m_hi, dtype=float)
    z = 0.5 * r0s * r0s
    f_lo, _ = kummer_u_array(-m_lo, l + 1, z)
    f_hi, _ = kummer_u_array(-m_hi, l + 1, z)
    out = np.full(r0s.shape, np.nan)
    out = np.where(f_hi == 0.0, m_hi, out)
    out = np.where(f_lo == 0.0, m_lo, out)
    todo = np.flatnonzero((f_lo != 0.0) & (f_hi != 0.0) & (np.sign(f_lo) != np.sign(f_hi)))
    if todo.size:
        zz = z[todo]
        out[todo] = _refine(
            lambda m, idx: kummer_u_array(-m, l + 1, zz[idx])[0],
            m_lo[todo], m_hi[todo], f_lo[todo], f_hi[todo], xtol,
        )
    return out


def refine_m(l, r0, m_lo, m_hi, xtol=XTOL):
    """Scalar :func:`refine_m_batch`; ``None`` when there is no sign change."""
    m = refine_m_batch(l, [r0], [m_lo], [m_hi], xtol)[0]
    return None if np.isnan(m) else float(m)


@lru_cache(maxsize=4096)
def _solve_cached(l, r0, count, m_max, step, xtol):
    return tuple(solve_m_batch(l, [r0], count, m_max, step, xtol)[0])


def solve_m_values(l, r0, count, m_max=M_MAX, step=SCAN_STEP, xtol=XTOL):
    """The ``count`` smallest positive roots of :func:`boundary_function` in ``m``."""
    r0 = float(_check_r0(r0))
    if int(l) != l or l < 0:
        raise DomainError(f"l must be a non-negative integer, got {l!r}")
    return list(_solve_cached(int(l), r0, int(count), float(m_max), float(step), float(xtol)))


def solve_state(label, r0, **kwargs):
    """Solve the level ``label`` at hard-core range ``r0``."""
    ms = solve_m_values(label.l, r0, label.order, **kwargs)
    return EigenState(label=label, r0=float(r0), m=float(ms[-1]))
