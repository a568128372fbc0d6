"""Command-line interface.

Exit codes: 0 success, 2 invalid configuration, 3 computational failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .eigensolver import QuantumLabel, solve_m_values, solve_state
from .errors import HardcoreError
from .observables import energy_split, fisher_density, fisher_parameter
from .oracle import OracleConfig, fd_eigenvalues
from .output import svg_line_chart, write_rows
from .spectrum import detect_crossings, ordered_level_qfi, scan
from .wavefunction import GridConfig, build_profile

EXIT_CONFIG = 2
EXIT_COMPUTE = 3

SPECTRUM_COLUMNS = ["r0", "l", "order", "m", "energy"]
CROSSING_COLUMNS = ["l_a", "order_a", "l_b", "order_b", "r0_star", "energy_star"]
OBSERVABLE_COLUMNS = ["r0", "l", "order", "m", "energy", "kinetic", "potential", "fisher_rho", "fisher_r0"]
QFI_COLUMNS = ["r0", "rank", "l", "order", "energy", "fisher_r0"]
WAVEFUNCTION_COLUMNS = ["r", "R", "rho"]
VALIDATE_COLUMNS = ["l", "r0", "order", "E_hyper", "E_fd", "abs_diff"]


class ConfigError(ValueError):
    """Invalid command-line configuration."""


@dataclass
class RunConfig:
    subcommand: str
    l_max: int = 8
    orders: int = 4
    r0_min: float = 0.05
    r0_max: float = 8.0
    r0_steps: int = 200
    format: str = "csv"
    out: str = "-"
    threads: int = 1
    plot: bool = False
    labels: list = field(default_factory=list)
    l: int | None = None
    order: int | None = None
    r0: list | None = None
    level_rank: int | None = None
    samples: int = 4000
    step: float | None = None
    tol: float = 1e-4
    grid: str = "auto"

    def validate(self):
        if not self.r0_min > 0:
            raise ConfigError(f"--r0-min must satisfy r0 > 0, got {self.r0_min}")
        if self.r0_steps < 1:
            raise ConfigError(f"--r0-steps must be >= 1, got {self.r0_steps}")
        if self.r0_steps > 1 and not self.r0_max > self.r0_min:
            raise ConfigError("--r0-max must exceed --r0-min")
        if self.l_max < 0:
            raise ConfigError(f"--l-max must be >= 0, got {self.l_max}")
        if self.orders < 1:
            raise ConfigError(f"--orders must be >= 1, got {self.orders}")
        if self.threads < 1:
            raise ConfigError(f"--threads must be >= 1, got {self.threads}")
        if self.r0 is not None and any(not r > 0 for r in self.r0):
            raise ConfigError("--r0 values must satisfy r0 > 0")
        if self.l is not None and self.l < 0:
            raise ConfigError(f"--l must be >= 0, got {self.l}")
        if self.order is not None and self.order < 1:
            raise ConfigError(f"--order must be >= 1, got {self.order}")
        if self.plot and self.out in (None, "-"):
            raise ConfigError("--plot needs --out FILE (the SVG is written next to it)")
        if self.step is not None and not self.step > 0:
            raise ConfigError("--step must be positive")
        if not self.tol > 0:
            raise ConfigError("--tol must be positive")

    def grid_points(self):
        """Explicit ``--r0`` values if given, else the ``--r0-min/max/steps`` grid."""
        if self.r0:
            return np.unique(np.asarray(self.r0, dtype=float))
        if self.r0_steps == 1:
            return np.array([self.r0_min])
        return np.linspace(self.r0_min, self.r0_max, self.r0_steps)

    def level_labels(self):
        if self.labels:
            return list(self.labels)
        if self.l is not None:
            orders = [self.order] if self.order is not None else range(1, self.orders + 1)
            return [QuantumLabel(self.l, o) for o in orders]
        return [QuantumLabel(l, o) for l in range(self.l_max + 1) for o in range(1, self.orders + 1)]

    def meta(self):
        d = asdict(self)
        d["labels"] = [[lab.l, lab.order] for lab in self.level_labels()]
        d["version"] = __version__
        return d


def _parse_labels(text):
    labels = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            l, o = (int(x) for x in item.split(":"))
            labels.append(QuantumLabel(l, o))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad label {item!r}; expected L:ORDER ({exc})") from exc
    return labels


def _pool_map(fn, items, threads):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _context(label, r0):
    return f"(l={label.l}, order={label.order}, r0={r0:.12g})"


def _write_plot(cfg, series, xlabel, ylabel, title):
    path = Path(cfg.out).with_suffix(".svg")
    path.write_text(svg_line_chart(series, xlabel, ylabel, title), encoding="utf-8")


def run_spectrum(cfg):
    labels = cfg.level_labels()
    table = scan(labels, cfg.grid_points(), threads=cfg.threads)
    write_rows(cfg.out, SPECTRUM_COLUMNS, list(table.rows()), cfg.format, cfg.meta())
    if cfg.plot:
        series = [(str(lab), table.r0_grid, table.energies[:, j]) for j, lab in enumerate(labels)]
        _write_plot(cfg, series, "r0", "E", "relative energy vs hard-core range")
    return 0


def run_crossings(cfg):
    labels = cfg.level_labels()
    rows = []
    table = None
    if len(labels) >= 2:
        table = scan(labels, cfg.grid_points(), threads=cfg.threads)
        for ev in detect_crossings(table):
            rows.append((ev.label_a.l, ev.label_a.order, ev.label_b.l, ev.label_b.order, ev.r0_star, ev.energy_star))
    write_rows(cfg.out, CROSSING_COLUMNS, rows, cfg.format, cfg.meta())
    if cfg.plot and table is not None:
        series = [(str(lab), table.r0_grid, table.energies[:, j]) for j, lab in enumerate(labels)]
        _write_plot(cfg, series, "r0", "E", "levels scanned for crossings")
    return 0


def run_observables(cfg):
    labels = cfg.level_labels()
    units = [(float(r0), lab) for r0 in cfg.grid_points() for lab in labels]

    def work(unit):
        r0, lab = unit
        try:
            state = solve_state(lab, r0)
            prof = build_profile(state)
            es = energy_split(prof)
            f_rho = fisher_density(prof).value
            f_r0 = fisher_parameter(lab, r0, step=cfg.step).value
        except HardcoreError as exc:
            raise HardcoreError(f"{_context(lab, r0)}: {exc}") from exc
        return (r0, lab.l, lab.order, state.m, state.energy, es.kinetic, es.potential, f_rho, f_r0)

    rows = _pool_map(work, units, cfg.threads)
    write_rows(cfg.out, OBSERVABLE_COLUMNS, rows, cfg.format, cfg.meta())
    if cfg.plot:
        series = []
        for lab in labels:
            sel = [r for r in rows if (r[1], r[2]) == (lab.l, lab.order)]
            xs = [r[0] for r in sel]
            series.append((f"{lab} kinetic", xs, [r[5] for r in sel]))
            series.append((f"{lab} potential", xs, [r[6] for r in sel]))
        _write_plot(cfg, series, "r0", "energy", "kinetic and potential energy")
    return 0


def run_qfi(cfg):
    if cfg.level_rank is None:
        raise ConfigError("qfi needs --level-rank N")
    labels = cfg.level_labels()
    if not 1 <= cfg.level_rank <= len(labels):
        raise ConfigError(f"--level-rank must lie in 1..{len(labels)} for the selected labels")
    kw = {} if cfg.step is None else {"step": cfg.step}
    pts = ordered_level_qfi(cfg.level_rank, cfg.grid_points(), labels, threads=cfg.threads, **kw)
    rows = [(p.r0, cfg.level_rank, p.label.l, p.label.order, p.energy, p.value) for p in pts]
    write_rows(cfg.out, QFI_COLUMNS, rows, cfg.format, cfg.meta())
    if cfg.plot:
        # Break the polyline where the level identity changes.
        xs, ys = [], []
        for i, p in enumerate(pts):
            if i and p.label != pts[i - 1].label:
                xs.append(p.r0)
                ys.append(float("nan"))
            xs.append(p.r0)
            ys.append(p.value)
        _write_plot(cfg, [(f"rank {cfg.level_rank}", xs, ys)], "r0", "F_r0", "parameter Fisher information")
    return 0


def run_wavefunction(cfg):
    if cfg.l is None or cfg.order is None or not cfg.r0:
        raise ConfigError("wavefunction needs --l, --order and --r0")
    if len(cfg.r0) != 1:
        raise ConfigError("wavefunction takes a single --r0 value")
    if cfg.samples < 2:
        raise ConfigError("--samples must be >= 2")
    label, r0 = QuantumLabel(cfg.l, cfg.order), cfg.r0[0]
    try:
        prof = build_profile(solve_state(label, r0), GridConfig(n_samples=cfg.samples))
    except HardcoreError as exc:
        raise HardcoreError(f"{_context(label, r0)}: {exc}") from exc
    rows = list(zip(prof.r_grid.tolist(), prof.R_values.tolist(), prof.rho_values.tolist()))
    write_rows(cfg.out, WAVEFUNCTION_COLUMNS, rows, cfg.format, cfg.meta())
    if cfg.plot:
        _write_plot(cfg, [(str(label), prof.r_grid, prof.R_values)], "r", "R(r)", f"radial function {label}")
    return 0


def run_validate(cfg):
    ls = [cfg.l] if cfg.l is not None else list(range(cfg.l_max + 1))
    r0s = cfg.r0 if cfg.r0 else [0.5, 1.0, 2.0, 4.0]
    n = cfg.orders
    units = [(l, float(r0)) for l in ls for r0 in r0s]

    def work(unit):
        l, r0 = unit
        grid = cfg.grid if cfg.grid != "auto" else ("log" if r0 < 0.1 else "uniform")
        try:
            hyper = solve_m_values(l, r0, n)
            fd = fd_eigenvalues(l, r0, OracleConfig(n_eigen=n, grid=grid, tol=cfg.tol))
        except HardcoreError as exc:
            raise HardcoreError(f"(l={l}, r0={r0:.12g}): {exc}") from exc
        out = []
        for o in range(n):
            e_h = l + 1 + 2 * hyper[o]
            out.append((l, r0, o + 1, e_h, fd[o].energy, abs(e_h - fd[o].energy)))
        return out

    rows = [row for chunk in _pool_map(work, units, cfg.threads) for row in chunk]
    write_rows(cfg.out, VALIDATE_COLUMNS, rows, cfg.format, cfg.meta())
    if cfg.plot:
        series = [
            (f"l={l}", [r[1] for r in rows if r[0] == l and r[2] == 1], [r[5] for r in rows if r[0] == l and r[2] == 1])
            for l in ls
        ]
        _write_plot(cfg, series, "r0", "|E_hyper - E_fd|", "oracle agreement, order 1")
    worst = max(rows, key=lambda r: r[5])
    if worst[5] >= cfg.tol:
        print(
            f"validation failed at (l={worst[0]}, order={worst[2]}, r0={worst[1]:.12g}): "
            f"|E_hyper - E_fd| = {worst[5]:.3g} >= {cfg.tol:g}",
            file=sys.stderr,
        )
        return EXIT_COMPUTE
    return 0


COMMANDS = {
    "spectrum": (run_spectrum, {}),
    "crossings": (run_crossings, {}),
    "observables": (run_observables, {"l_max": 4, "orders": 2, "r0_min": 1.0, "r0_max": 4.0, "r0_steps": 13}),
    "qfi": (run_qfi, {"l_max": 4, "orders": 2, "r0_min": 1.0, "r0_max": 4.0, "r0_steps": 13}),
    "wavefunction": (run_wavefunction, {}),
    "validate": (run_validate, {"l_max": 6, "orders": 3}),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hardcore2d",
        description="Two hard-core bosons in a 2D harmonic trap: spectrum, crossings, observables.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, (_, defaults) in COMMANDS.items():
        base = RunConfig(name, **defaults)
        p = sub.add_parser(name)
        p.add_argument("--l-max", type=int, default=base.l_max)
        p.add_argument("--orders", type=int, default=base.orders, help="number of m-orders per l")
        p.add_argument("--r0-min", type=float, default=base.r0_min)
        p.add_argument("--r0-max", type=float, default=base.r0_max)
        p.add_argument("--r0-steps", type=int, default=base.r0_steps)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default="-", help="output file ('-' for stdout)")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--plot", action="store_true", help="also write an SVG next to --out")
        p.add_argument("--labels", type=_parse_labels, default=[], help="explicit levels, e.g. 0:2,4:1")
        p.add_argument("--l", type=int, default=None)
        p.add_argument("--order", type=int, default=None)
        p.add_argument("--r0", type=float, nargs="+", default=None)
        p.add_argument("--level-rank", type=int, default=None)
        p.add_argument("--samples", type=int, default=4000)
        p.add_argument("--step", type=float, default=None, help="finite-difference step in r0")
        p.add_argument("--tol", type=float, default=1e-4, help="oracle agreement tolerance")
        p.add_argument("--grid", choices=("auto", "uniform", "log"), default="auto", help="oracle grid")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    values = {k: v for k, v in vars(args).items() if k != "subcommand"}
    cfg = RunConfig(subcommand=args.subcommand, **values)
    try:
        cfg.validate()
        return COMMANDS[cfg.subcommand][0](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HardcoreError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
