"""Spectrum sweeps over the hard-core range, level crossings and ranked QFI.

Levels are tracked by their ``(l, order)`` label rather than by sorting
energies: ``l`` is conserved and roots within one ``l`` never cross, so a
label names the same physical level on the whole ``r0`` axis.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .eigensolver import QuantumLabel, refine_m_batch, solve_m_batch, solve_m_values
from .errors import DomainError, HardcoreError, RootNotFoundError
from .observables import fisher_parameter

__all__ = [
    "SpectrumTable",
    "CrossingEvent",
    "RankedQfi",
    "default_labels",
    "default_grid",
    "scan",
    "detect_crossings",
    "refine_crossing",
    "ordered_level_qfi",
]

# Fixed work-unit size. Results of a vectorized batch may depend on which
# points share it, so the partition never depends on the thread count.
_UNIT = 25
CROSSING_XTOL = 1e-10


def default_labels(l_max=8, orders=4):
    return [QuantumLabel(l, o) for l in range(l_max + 1) for o in range(1, orders + 1)]


def default_grid(r0_min=0.05, r0_max=8.0, steps=200):
    return np.linspace(r0_min, r0_max, steps)


@dataclass(frozen=True, eq=False)
class SpectrumTable:
    """Energies and degrees ``m`` on an ``r0`` grid, one column per label."""

    r0_grid: np.ndarray
    levels: list
    energies: np.ndarray
    m_values: np.ndarray

    def column(self, label):
        return self.energies[:, self.levels.index(label)]

    def rows(self):
        """``(r0, l, order, m, energy)`` in r0-major, label-minor order."""
        for i, r0 in enumerate(self.r0_grid):
            for j, lab in enumerate(self.levels):
                yield float(r0), lab.l, lab.order, float(self.m_values[i, j]), float(self.energies[i, j])


@dataclass(frozen=True)
class CrossingEvent:
    label_a: QuantumLabel
    label_b: QuantumLabel
    r0_star: float
    energy_star: float
    bracket_width: float


class RankedQfi(NamedTuple):
    r0: float
    value: float
    label: QuantumLabel
    energy: float


def _check_grid(r0_grid):
    grid = np.asarray(r0_grid, dtype=float).ravel()
    if grid.size == 0:
        raise DomainError("r0 grid is empty")
    if np.any(~(grid > 0)) or np.any(~np.isfinite(grid)):
        raise DomainError("hard-core range must satisfy r0 > 0 on the whole grid")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("r0 grid must be strictly increasing")
    return grid


def _solve_unit(l, count, grid_chunk):
    try:
        return solve_m_batch(l, grid_chunk, count)
    except RootNotFoundError as exc:
        raise RootNotFoundError(f"spectrum scan, orders 1..{count}: {exc}") from exc


def scan(labels, r0_grid, threads=1):
    """Solve every label on every grid point.

    Work is split into fixed ``(l, grid chunk)`` units that may run on
    ``threads`` workers; the table is identical for any thread count.
    """
    grid = _check_grid(r0_grid)
    labels = list(labels)
    if not labels:
        raise DomainError("no levels requested")
    need = {}
    for lab in labels:
        need[lab.l] = max(need.get(lab.l, 0), lab.order)
    units = [
        (l, need[l], start)
        for l in sorted(need)
        for start in range(0, grid.size, _UNIT)
    ]

    def work(unit):
        l, count, start = unit
        return _solve_unit(l, count, grid[start:start + _UNIT])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, units))
    else:
        results = [work(u) for u in units]

    per_l = {}
    for (l, _, start), res in zip(units, results):
        per_l.setdefault(l, {})[start] = res
    m = np.empty((grid.size, len(labels)))
    for j, lab in enumerate(labels):
        blocks = per_l[lab.l]
        m[:, j] = np.concatenate([blocks[s][:, lab.order - 1] for s in sorted(blocks)])
    ls = np.array([lab.l for lab in labels], dtype=float)
    return SpectrumTable(r0_grid=grid, levels=labels, energies=ls[None, :] + 1 + 2 * m, m_values=m)


def _m_at(label, r0):
    return solve_m_values(label.l, r0, label.order)[-1]


def _m_batch(labels, r0s, m_lo, m_hi):
    """``m`` of each label at each ``r0``, searched inside ``[m_lo, m_hi]``.

    Requests are grouped by ``l`` and refined together; a bracket without a
    sign change falls back to a full scan.
    """
    out = np.empty(len(labels))
    ls = np.array([lab.l for lab in labels])
    lo, hi = np.minimum(m_lo, m_hi), np.maximum(m_lo, m_hi)
    for l in np.unique(ls):
        sel = np.flatnonzero(ls == l)
        out[sel] = refine_m_batch(int(l), r0s[sel], lo[sel], hi[sel])
    for i in np.flatnonzero(np.isnan(out)):
        out[i] = _m_at(labels[i], r0s[i])
    return out


def _bisect_crossings(pairs, xtol):
    """Lock-step bisection of ``E_a - E_b`` for many brackets at once.

    ``pairs`` holds ``(label_a, label_b, lo, hi, (ma_lo, mb_lo), (ma_hi, mb_hi))``
    with a strict sign change between the ends.
    """
    if not pairs:
        return []
    k = len(pairs)
    labels = [lab for p in pairs for lab in p[:2]]
    ls = np.array([lab.l for lab in labels], dtype=float)
    lo = np.array([p[2] for p in pairs], dtype=float)
    hi = np.array([p[3] for p in pairs], dtype=float)
    m_lo = np.array([m for p in pairs for m in p[4]], dtype=float)
    m_hi = np.array([m for p in pairs for m in p[5]], dtype=float)

    def gap(m):
        e = ls + 1 + 2 * m
        return e[0::2] - e[1::2]

    s_lo = np.sign(gap(m_lo))
    active = np.ones(k, dtype=bool)
    while True:
        mid = 0.5 * (lo + hi)
        active &= (hi - lo > xtol) & (mid > lo) & (mid < hi)
        if not active.any():
            break
        ev = np.flatnonzero(active)
        tr = np.stack((2 * ev, 2 * ev + 1), axis=1).ravel()
        m = _m_batch([labels[t] for t in tr], np.repeat(mid[ev], 2), m_lo[tr], m_hi[tr])
        e = ls[tr] + 1 + 2 * m
        d = e[0::2] - e[1::2]
        hit = d == 0.0
        left = ~hit & (np.sign(d) == s_lo[ev])
        right = ~hit & ~left
        lo[ev] = np.where(left | hit, mid[ev], lo[ev])
        hi[ev] = np.where(right | hit, mid[ev], hi[ev])
        to_lo = tr[np.repeat(left | hit, 2)]
        to_hi = tr[np.repeat(right | hit, 2)]
        m_lo[to_lo] = m[np.repeat(left | hit, 2)]
        m_hi[to_hi] = m[np.repeat(right | hit, 2)]

    star = 0.5 * (lo + hi)
    m = _m_batch(labels, np.repeat(star, 2), m_lo, m_hi)
    e = ls + 1 + 2 * m
    return [
        CrossingEvent(
            pairs[i][0], pairs[i][1], float(star[i]),
            float(0.5 * (e[2 * i] + e[2 * i + 1])), float(hi[i] - lo[i]),
        )
        for i in range(k)
    ]


def refine_crossing(label_a, label_b, lo, hi, xtol=CROSSING_XTOL):
    """Bisect ``E_a - E_b`` on ``[lo, hi]`` until the bracket is below ``xtol``."""
    ends = [(_m_at(label_a, r), _m_at(label_b, r)) for r in (lo, hi)]
    d = [label_a.l - label_b.l + 2 * (ma - mb) for ma, mb in ends]
    for r, dd, (ma, _) in zip((lo, hi), d, ends):
        if dd == 0.0:
            return CrossingEvent(label_a, label_b, r, label_a.l + 1 + 2 * ma, 0.0)
    if np.sign(d[0]) == np.sign(d[1]):
        raise DomainError(f"{label_a} and {label_b} do not change order on [{lo}, {hi}]")
    return _bisect_crossings([(label_a, label_b, lo, hi, ends[0], ends[1])], xtol)[0]


def detect_crossings(table, xtol=CROSSING_XTOL):
    """Every order exchange between two columns, refined in ``r0``.

    Pairs with equal ``l`` are skipped since their roots are strictly
    ordered. Events are sorted by ``r0_star``.
    """
    if len(table.levels) < 2:
        raise DomainError("crossing detection needs at least two levels")
    grid, m = table.r0_grid, table.m_values
    exact, pairs = [], []
    for ja, jb in itertools.combinations(range(len(table.levels)), 2):
        a, b = table.levels[ja], table.levels[jb]
        if a.l == b.l:
            continue
        sign = np.sign(table.energies[:, ja] - table.energies[:, jb])
        for i in np.flatnonzero(sign == 0.0):
            exact.append(CrossingEvent(a, b, float(grid[i]), float(table.energies[i, ja]), 0.0))
        for i in np.flatnonzero(sign[:-1] * sign[1:] < 0):
            pairs.append((
                a, b, float(grid[i]), float(grid[i + 1]),
                (m[i, ja], m[i, jb]), (m[i + 1, ja], m[i + 1, jb]),
            ))
    events = exact + _bisect_crossings(pairs, xtol)
    events.sort(key=lambda e: (e.r0_star, e.label_a, e.label_b))
    return events


def ordered_level_qfi(n, r0_grid, labels, threads=1, **fisher_kw):
    """``F_r0`` of the ``n``-th lowest level (``n = 1`` is the ground level).

    At each ``r0`` the labels are ranked by energy, ties broken by label, and
    the parameter Fisher information of the selected label is computed. The
    curve jumps wherever the identity of the ``n``-th level changes.
    """
    labels = list(labels)
    if not 1 <= n <= len(labels):
        raise DomainError(f"level rank {n} outside 1..{len(labels)}")
    table = scan(labels, r0_grid, threads=threads)
    picks = []
    for i, r0 in enumerate(table.r0_grid):
        order = sorted(range(len(labels)), key=lambda j: (table.energies[i, j], labels[j]))
        j = order[n - 1]
        picks.append((float(r0), labels[j], float(table.energies[i, j])))

    def work(pick):
        r0, lab, _ = pick
        try:
            return fisher_parameter(lab, r0, **fisher_kw).value
        except HardcoreError as exc:
            raise type(exc)(f"{lab} at r0={r0:.12g}: {exc}") from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(work, picks))
    else:
        values = [work(p) for p in picks]
    return [RankedQfi(r0, v, lab, e) for (r0, lab, e), v in zip(picks, values)]
