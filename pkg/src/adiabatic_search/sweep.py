"""(x_min, T) sweeps, CSV output and the canned failure-demonstration presets."""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path

from .analysis import (
    bound_report,
    classical_minimize,
    deviation_bound,
    gap_profile,
    success_chain,
    success_probability,
)
from .config import ExperimentConfig, from_mapping
from .errors import AdiabaticSearchError, ConfigError, PhaseError
from .evolve import StepControl, propagate, propagate_reference
from .hamiltonian import (
    InitialHamiltonian,
    Potential,
    Schedule,
    build_hi,
    delta_potential,
    poly_potential,
    shift_potential,
)
from .states import norm, phase_align, tail_mass

log = logging.getLogger(__name__)

STATUS_OK = "ok"


@dataclass(frozen=True)
class SweepRow:
    x_min: int
    T: float
    success_probability: float
    deviation: float
    bound: float
    hp_gi_norm: float
    min_gap: float
    norm_drift: float
    classical_x_star: int
    classical_value: float
    tail_mass_final: float
    status: str = STATUS_OK

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK


COLUMNS = [f.name for f in fields(SweepRow)]
_INT_COLUMNS = {"x_min", "classical_x_star"}


@dataclass(frozen=True)
class RowDetail:
    """Extra per-row quantities used by the demo report; not written to CSV."""

    overlap: float
    aligned_deviation: float
    noop_distance: float
    chain_holds: bool


def _potentials(cfg: ExperimentConfig):
    """Yield (x_min, potential) pairs; polynomial sweeps use the global argmin as x_min."""
    if cfg.potential == "delta":
        for x in cfg.x_min:
            yield x, shift_potential(delta_potential(x, cfg.dim), cfg.shift)
    else:
        p = shift_potential(poly_potential(cfg.coefficients, cfg.dim), cfg.shift)
        x_star, _ = classical_minimize(p, cfg.dim)
        yield x_star, p


def build_initial(cfg: ExperimentConfig) -> InitialHamiltonian:
    return build_hi(cfg.hi_kind, cfg.hi_params, cfg.dim, cfg.seed)


def compute_row(cfg: ExperimentConfig, hi: InitialHamiltonian, x_min: int, p: Potential, T: float):
    """Run full and reference evolutions for one (x_min, T) cell.

    Failures inside propagation produce a row with status ``error: ...``
    instead of raising.
    """
    x_star, value = classical_minimize(p, cfg.dim)
    sch = Schedule(hi, p, T)
    ctl = StepControl(cfg.dt, cfg.stride, cfg.tolerance)
    nan = float("nan")
    try:
        full = propagate(sch, hi.ground_state, ctl)
        ref = propagate_reference(sch.reference(), ctl)
    except AdiabaticSearchError as exc:
        log.warning("row x_min=%s T=%s aborted: %s", x_min, T, exc)
        static = deviation_bound(p, hi, T)
        row = SweepRow(
            x_min, float(T), nan, nan, static.bound, static.hp_gi_norm,
            nan, nan, x_star, value, nan,
            status=f"error: {type(exc).__name__}: {exc}".replace("\n", " "),
        )
        return row, None

    rep = bound_report(full, ref, p, slack=cfg.slack)
    gaps = gap_profile(sch, cfg.gap_samples)
    drift = max(full.norm_drift, ref.norm_drift)

    problems = []
    if not rep.satisfied:
        problems.append("bound_violated")
    if not (full.valid and ref.valid):
        problems.append("norm_drift")
    status = STATUS_OK if not problems else "fail: " + ",".join(problems)

    row = SweepRow(
        x_min=x_min,
        T=float(T),
        success_probability=success_probability(full.final, x_min),
        deviation=rep.deviation,
        bound=rep.bound,
        hp_gi_norm=rep.hp_gi_norm,
        min_gap=gaps.min_gap,
        norm_drift=drift,
        classical_x_star=x_star,
        classical_value=value,
        tail_mass_final=tail_mass(full.final, cfg.edge_cutoff),
        status=status,
    )
    g_i = hi.ground_state
    try:
        noop = norm(phase_align(full.final, g_i) - g_i)
    except PhaseError:
        noop = math.inf
    detail = RowDetail(
        overlap=abs(g_i.amplitudes[x_min]),
        aligned_deviation=rep.aligned_deviation,
        noop_distance=noop,
        chain_holds=success_chain(full, ref, x_min, p).holds(),
    )
    return row, detail


def _task(args):
    cfg, hi, x_min, p, T = args
    return compute_row(cfg, hi, x_min, p, T)


def run_sweep_detailed(cfg: ExperimentConfig, workers: int | None = None):
    hi = build_initial(cfg)
    tasks = [(cfg, hi, x, p, T) for x, p in _potentials(cfg) for T in cfg.T]
    workers = cfg.workers if workers is None else workers
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]
    results.sort(key=lambda rd: (rd[0].x_min, rd[0].T))
    return results


def run_sweep(cfg: ExperimentConfig, out=None, workers: int | None = None) -> list[SweepRow]:
    """Compute every (x_min, T) row, sorted by (x_min, T); write CSV to ``out`` or ``cfg.out``."""
    rows = [row for row, _ in run_sweep_detailed(cfg, workers)]
    out = out if out is not None else cfg.out
    if out is not None:
        write_csv(rows, out)
    return rows


def _fmt(name, value) -> str:
    if name == "status":
        return value
    if name in _INT_COLUMNS:
        return str(int(value))
    return format(float(value), ".17g")


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_fmt(name, val) for name, val in zip(COLUMNS, astuple(row))])
    return buf.getvalue()


def write_csv(rows, path) -> None:
    Path(path).write_text(rows_to_csv(rows))


def read_csv(path) -> list[SweepRow]:
    return parse_csv(Path(path).read_text())


def parse_csv(text: str) -> list[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        vals = {}
        for name in COLUMNS:
            raw = rec[name]
            if name == "status":
                vals[name] = raw
            elif name in _INT_COLUMNS:
                vals[name] = int(raw)
            else:
                vals[name] = float(raw)
        rows.append(SweepRow(**vals))
    return rows


PRESETS = {
    "tsirelson-s3": dict(
        dim=512, hi_kind="hopping", kappa=1.0, potential="delta",
        x_min=[8, 64, 192, 320, 448], T=[50.0], dt=0.05, stride=100,
    ),
    "diagonal-noop": dict(
        dim=64, hi_kind="diagonal", potential="delta",
        x_min=[1, 16, 48], T=[10.0], dt=0.01, stride=100,
    ),
    "coherent-s3": dict(
        dim=128, hi_kind="coherent-like", alpha=1.0, potential="delta",
        x_min=[0, 2, 8, 32, 96], T=[20.0], dt=0.02, stride=100,
    ),
}


def preset_config(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available presets: {', '.join(sorted(PRESETS))}")
    return from_mapping(dict(PRESETS[name]))


def format_report(name: str, cfg: ExperimentConfig, results) -> str:
    lines = [
        f"preset {name}: dim={cfg.dim}, H_I={cfg.hi_kind.value} {cfg.hi_params or ''}".rstrip(),
        f"{'x_min':>6} {'T':>6} {'|<x|g_I>|':>11} {'bound':>11} {'deviation':>11} "
        f"{'P(success)':>11} {'|g(T)-g_I|*':>11} {'classical':>12}  status",
    ]
    for row, detail in results:
        overlap = detail.overlap if detail else float("nan")
        noop = detail.noop_distance if detail else float("nan")
        lines.append(
            f"{row.x_min:>6d} {row.T:>6g} {overlap:>11.3e} {row.bound:>11.3e} {row.deviation:>11.3e} "
            f"{row.success_probability:>11.3e} {noop:>11.3e} "
            f"{f'({row.classical_x_star}, {row.classical_value:g})':>12}  {row.status}"
        )
    held = all(row.ok for row, _ in results)
    classical = all(
        row.classical_x_star == row.x_min and row.classical_value == -1.0 for row, _ in results
    ) if cfg.potential == "delta" and cfg.shift == 0 else None
    lines.append("* distance from g_I after removing the global phase")
    lines.append(f"deviation <= bound on every row: {'yes' if held else 'NO'}")
    if classical is not None:
        lines.append(f"classical scan found (x_min, -1) on every row: {'yes' if classical else 'NO'}")
    return "\n".join(lines)


def run_failure_demo(preset: str, out=None, workers: int = 1):
    """Run a preset; returns (report text, rows, exit status)."""
    cfg = preset_config(preset)
    results = run_sweep_detailed(cfg, workers)
    rows = [row for row, _ in results]
    if out is not None:
        write_csv(rows, out)
    status = 0 if all(row.ok for row in rows) else 1
    return format_report(preset, cfg, results), rows, status
