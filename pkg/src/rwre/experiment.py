"""Monte Carlo studies: replicated trajectories, pointwise summaries, losses.

A study is a pure function of its configuration.  Every replication derives
its own generator seed from (master_seed, replication index) through the
SplitMix64 mix, so results do not depend on execution order or worker count.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .densities import EnvDensity, density_from_spec
from .errors import ConfigError, DataGenerationError, DegenerateDataError, ParameterError
from .estimator import estimate_density
from .selection import select_order
from .simulate import (
    DEFAULT_MAX_STEPS,
    counts_to_branch,
    run_walk_to_hit,
    simulate_bpire,
)

CHOSEN_SENTINEL = -1

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15


def derive_seed(master_seed, index):
    """SplitMix64 output number (index + 1) of the stream seeded at master_seed.

    z = master + (index+1) * 0x9E3779B97F4A7C15, then the standard finalizer
    (xor-shift 30, * 0xBF58476D1CE4E5B9, xor-shift 27, * 0x94D049BB133111EB,
    xor-shift 31), all modulo 2^64.
    """
    if index < 0:
        raise ParameterError(f"replication index must be >= 0, got {index}")
    z = (int(master_seed) + (index + 1) * _SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass
class ExperimentConfig:
    """Inputs of one Monte Carlo study."""

    density: EnvDensity
    n: int
    replications: int
    m_grid: list
    data_mode: str = "bpire"
    gl: bool = False
    master_seed: int = 0
    eval_points: int = 512
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        if not isinstance(self.density, EnvDensity):
            raise ConfigError("density must be an environment density")
        if self.n < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}")
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications}")
        self.m_grid = [int(m) for m in self.m_grid]
        if not self.m_grid or any(m < 1 for m in self.m_grid):
            raise ConfigError("M_grid must be a nonempty list of orders >= 1")
        if sorted(set(self.m_grid)) != self.m_grid:
            raise ConfigError("M_grid must be strictly increasing")
        if self.data_mode not in ("bpire", "walk"):
            raise ConfigError(f"data_mode must be 'bpire' or 'walk', got {self.data_mode!r}")
        if self.eval_points < 2:
            raise ConfigError(f"eval_points must be >= 2, got {self.eval_points}")
        if self.data_mode == "walk" and self.max_steps < self.n:
            raise ConfigError("max_steps is below the minimum possible hitting time")

    _FIELDS = {
        "density",
        "n",
        "replications",
        "M_grid",
        "data_mode",
        "gl",
        "master_seed",
        "eval_points",
        "max_steps",
    }

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict):
            raise ConfigError("experiment config must be a JSON object")
        unknown = set(doc) - cls._FIELDS
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        missing = {"density", "n", "replications", "M_grid"} - set(doc)
        if missing:
            raise ConfigError(f"missing config fields: {sorted(missing)}")
        return cls(
            density=density_from_spec(doc["density"]),
            n=int(doc["n"]),
            replications=int(doc["replications"]),
            m_grid=list(doc["M_grid"]),
            data_mode=doc.get("data_mode", "bpire"),
            gl=bool(doc.get("gl", False)),
            master_seed=int(doc.get("master_seed", 0)),
            eval_points=int(doc.get("eval_points", 512)),
            max_steps=int(doc.get("max_steps", DEFAULT_MAX_STEPS)),
        )

    @classmethod
    def from_json(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(doc)

    def eval_grid(self):
        """Midpoints of eval_points equal cells of [0,1]."""
        e = np.arange(self.eval_points)
        return (e + 0.5) / self.eval_points


@dataclass
class SummaryRow:
    """One (order, evaluation point) aggregate across replications."""

    density_id: str
    n: int
    order: int
    x: float
    true_f: float
    median: float
    q25: float
    q75: float
    hinge_lo: float
    hinge_hi: float
    chosen_order: int | None = None

    def __post_init__(self):
        ok = (
            self.hinge_lo <= self.q25 <= self.median <= self.q75 <= self.hinge_hi
        )
        if not ok:
            raise ParameterError(
                f"summary ordering violated at x={self.x}: "
                f"{self.hinge_lo}, {self.q25}, {self.median}, {self.q75}, {self.hinge_hi}"
            )


@dataclass
class LossRow:
    replication: int
    order: int
    sup_error: float


@dataclass
class ExperimentResult:
    summary: list
    losses: list
    chosen_orders: list = field(default_factory=list)
    truncated: int = 0


def _replicate(cfg, index):
    """One replication: generate a trajectory, estimate on every grid order."""
    rng = np.random.default_rng(derive_seed(cfg.master_seed, index))
    if cfg.data_mode == "bpire":
        seq = simulate_bpire(cfg.density, cfg.n, rng)
    else:
        counts = run_walk_to_hit(cfg.density, cfg.n, cfg.max_steps, rng)
        if counts.truncated:
            return {"index": index, "truncated": True}
        seq = counts_to_branch(counts)
    out = {"index": index, "truncated": False, "coeffs": {}}
    for m in cfg.m_grid:
        out["coeffs"][m] = estimate_density(seq, m).coeffs
    if cfg.gl:
        try:
            out["chosen"] = select_order(seq, cfg.m_grid).chosen
        except DegenerateDataError:
            # No candidate order has qualifying visits, so the data cannot
            # rank the grid; fall back to the coarsest order, which carries
            # the smallest width bound a priori.
            out["chosen"] = min(cfg.m_grid)
    return out


def _replicate_star(args):
    return _replicate(*args)


def _quartiles(values):
    """Median and quartiles with linear (type 7) interpolation."""
    q25, med, q75 = np.quantile(values, [0.25, 0.5, 0.75])
    return float(q25), float(med), float(q75)


def _hinges(values, q25, q75):
    """Most extreme data within 1.5 IQR of the quartiles, clamped to the box."""
    iqr = q75 - q25
    inside_lo = values[values >= q25 - 1.5 * iqr]
    inside_hi = values[values <= q75 + 1.5 * iqr]
    hinge_lo = float(inside_lo.min()) if inside_lo.size else q25
    hinge_hi = float(inside_hi.max()) if inside_hi.size else q75
    return min(hinge_lo, q25), max(hinge_hi, q75)


def run_experiment(cfg, threads=1):
    """Run all replications and aggregate pointwise summaries and sup losses.

    The output is a pure function of cfg; threads only caps parallelism.
    """
    if threads < 1:
        raise ParameterError(f"threads must be >= 1, got {threads}")
    tasks = [(cfg, r) for r in range(cfg.replications)]
    if threads == 1 or cfg.replications == 1:
        results = [_replicate(cfg, r) for r in range(cfg.replications)]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_replicate_star, tasks))
    results.sort(key=lambda r: r["index"])

    kept = [r for r in results if not r["truncated"]]
    truncated = len(results) - len(kept)
    if not kept:
        raise DataGenerationError(
            f"all {cfg.replications} replications were truncated before hitting n"
        )

    grid_x = cfg.eval_grid()
    true_f = np.asarray(cfg.density.pdf(grid_x), dtype=float)
    label = cfg.density.label

    def cell_values(coeff_matrix, order):
        idx = np.minimum(np.floor(grid_x * order), order).astype(int)
        return coeff_matrix[:, idx]

    summary = []
    losses = []
    chosen_orders = [r["chosen"] for r in kept] if cfg.gl else []

    for m in cfg.m_grid:
        coeff_matrix = np.stack([r["coeffs"][m] for r in kept])
        vals = cell_values(coeff_matrix, m)
        sup_err = np.max(np.abs(vals - true_f[None, :]), axis=1)
        for r, err in zip(kept, sup_err):
            losses.append(LossRow(replication=r["index"], order=m, sup_error=float(err)))
        for col, x in enumerate(grid_x):
            q25, med, q75 = _quartiles(vals[:, col])
            h_lo, h_hi = _hinges(vals[:, col], q25, q75)
            summary.append(
                SummaryRow(
                    density_id=label,
                    n=cfg.n,
                    order=m,
                    x=float(x),
                    true_f=float(true_f[col]),
                    median=med,
                    q25=q25,
                    q75=q75,
                    hinge_lo=h_lo,
                    hinge_hi=h_hi,
                )
            )

    if cfg.gl:
        chosen_label = chosen_median(chosen_orders)
        coeff_matrix_rows = []
        for r in kept:
            coeffs = r["coeffs"][r["chosen"]]
            order = r["chosen"]
            idx = np.minimum(np.floor(grid_x * order), order).astype(int)
            coeff_matrix_rows.append(coeffs[idx])
        vals = np.stack(coeff_matrix_rows)
        sup_err = np.max(np.abs(vals - true_f[None, :]), axis=1)
        for r, err in zip(kept, sup_err):
            losses.append(
                LossRow(replication=r["index"], order=CHOSEN_SENTINEL, sup_error=float(err))
            )
        for col, x in enumerate(grid_x):
            q25, med, q75 = _quartiles(vals[:, col])
            h_lo, h_hi = _hinges(vals[:, col], q25, q75)
            summary.append(
                SummaryRow(
                    density_id=label,
                    n=cfg.n,
                    order=CHOSEN_SENTINEL,
                    x=float(x),
                    true_f=float(true_f[col]),
                    median=med,
                    q25=q25,
                    q75=q75,
                    hinge_lo=h_lo,
                    hinge_hi=h_hi,
                    chosen_order=chosen_label,
                )
            )

    return ExperimentResult(
        summary=summary,
        losses=losses,
        chosen_orders=chosen_orders,
        truncated=truncated,
    )


def chosen_median(orders):
    """Lower median of the selected orders: deterministic, always a grid member."""
    if not orders:
        raise ParameterError("no selections to summarize")
    ordered = sorted(orders)
    return ordered[(len(ordered) - 1) // 2]


def loss_summary(losses):
    """Per-order median and IQR of the sup losses (type 7 quantiles).

    Returns {order: (median, iqr)} with the adaptive rows keyed by -1.
    """
    by_order = {}
    for row in losses:
        by_order.setdefault(row.order, []).append(row.sup_error)
    out = {}
    for order in sorted(by_order):
        vals = np.asarray(by_order[order])
        q25, med, q75 = _quartiles(vals)
        out[order] = (med, q75 - q25)
    return out


# ----- wire formats -----

SUMMARY_HEADER = [
    "density_id",
    "n",
    "M",
    "x",
    "true_f",
    "median",
    "q25",
    "q75",
    "hinge_lo",
    "hinge_hi",
]

LOSS_HEADER = ["replication", "M", "sup_error"]


def write_summary_csv(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for r in rows:
        rec = [
            r.density_id,
            r.n,
            r.order,
            repr(float(r.x)),
            repr(float(r.true_f)),
            repr(float(r.median)),
            repr(float(r.q25)),
            repr(float(r.q75)),
            repr(float(r.hinge_lo)),
            repr(float(r.hinge_hi)),
        ]
        if r.order == CHOSEN_SENTINEL:
            rec.append(r.chosen_order)
        w.writerow(rec)


def write_loss_csv(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(LOSS_HEADER)
    for r in rows:
        w.writerow([r.replication, r.order, repr(float(r.sup_error))])
