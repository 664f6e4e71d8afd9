"""Experiment configuration: a flat YAML mapping of scalars and lists.

Example::

    dim: 64
    hi_kind: hopping
    kappa: 1.0
    potential: delta
    x_min: [10, 40]
    T: [5, 20]
    dt: 0.05
    stride: 10
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import ConfigError
from .hamiltonian import HiKind

POTENTIAL_KINDS = ("delta", "polynomial")
HI_PARAM_KEYS = ("kappa", "alpha", "scale")

_KNOWN_KEYS = {
    "dim", "hi_kind", "seed", "potential", "x_min", "coefficients", "shift",
    "T", "dt", "stride", "tolerance", "out", "slack", "tail_cutoff",
    "gap_samples", "workers", *HI_PARAM_KEYS,
}


@dataclass(frozen=True)
class ExperimentConfig:
    dim: int
    hi_kind: HiKind
    hi_params: dict
    seed: int
    potential: str
    x_min: tuple
    coefficients: tuple
    shift: float
    T: tuple
    dt: float
    stride: int = 1
    tolerance: float = 1e-9
    out: str | None = None
    slack: float = 1e-6
    tail_cutoff: int | None = None
    gap_samples: int = 33
    workers: int = 1

    @property
    def edge_cutoff(self) -> int:
        """Basis index from which weight counts as truncation tail (default: last state only)."""
        return self.dim - 1 if self.tail_cutoff is None else self.tail_cutoff


def _as_list(value):
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def from_mapping(doc: dict) -> ExperimentConfig:
    """Validate a parsed mapping; every problem is reported, keyed by field name."""
    if not isinstance(doc, dict):
        raise ConfigError(f"config must be a key-value mapping, got {type(doc).__name__}")
    problems = []

    for key in sorted(set(doc) - _KNOWN_KEYS):
        problems.append(f"{key}: unknown key")

    dim = doc.get("dim")
    if not _is_int(dim) or dim < 2:
        problems.append(f"dim: must be an integer >= 2, got {dim!r}")
        dim = None

    hi_kind = doc.get("hi_kind", "hopping")
    try:
        hi_kind = HiKind(hi_kind)
    except ValueError:
        problems.append(f"hi_kind: unknown kind {hi_kind!r}, expected one of {[k.value for k in HiKind]}")
        hi_kind = None

    hi_params = {}
    for key in HI_PARAM_KEYS:
        if key in doc:
            if not _is_number(doc[key]):
                problems.append(f"{key}: must be a number, got {doc[key]!r}")
            else:
                hi_params[key] = float(doc[key])
    if hi_kind is HiKind.HOPPING and hi_params.get("kappa", 1.0) <= 0:
        problems.append(f"kappa: must be > 0, got {hi_params['kappa']}")
    if hi_kind is HiKind.RANDOM and hi_params.get("scale", 1.0) <= 0:
        problems.append(f"scale: must be > 0, got {hi_params['scale']}")

    seed = doc.get("seed", 0)
    if not _is_int(seed) or not 0 <= seed < 2**64:
        problems.append(f"seed: must be an integer in [0, 2**64), got {seed!r}")

    potential = doc.get("potential", "delta")
    if potential not in POTENTIAL_KINDS:
        problems.append(f"potential: must be one of {POTENTIAL_KINDS}, got {potential!r}")

    x_min = _as_list(doc.get("x_min", []))
    coefficients = _as_list(doc.get("coefficients", []))
    if potential == "delta":
        if not x_min:
            problems.append("x_min: delta potential needs at least one x_min")
        for x in x_min:
            if not _is_int(x) or x < 0:
                problems.append(f"x_min: entries must be nonnegative integers, got {x!r}")
            elif dim is not None and x >= dim:
                problems.append(f"x_min: {x} must be < dim ({dim})")
    elif potential == "polynomial":
        if not coefficients:
            problems.append("coefficients: polynomial potential needs at least one coefficient")
        if any(not _is_number(c) for c in coefficients):
            problems.append(f"coefficients: entries must be numbers, got {coefficients!r}")

    shift = doc.get("shift", 0.0)
    if not _is_number(shift):
        problems.append(f"shift: must be a number, got {shift!r}")

    T = _as_list(doc.get("T", []))
    if not T:
        problems.append("T: at least one total time is required")
    for t in T:
        if not _is_number(t) or not 0 < t < float("inf"):
            problems.append(f"T: entries must be positive finite numbers, got {t!r}")
    good_T = [t for t in T if _is_number(t) and t > 0]

    dt = doc.get("dt")
    if not _is_number(dt) or dt <= 0:
        problems.append(f"dt: must be a positive number, got {dt!r}")
    elif good_T and dt > min(good_T) / 10 * (1 + 1e-12):
        problems.append(f"dt: {dt} exceeds min(T)/10 = {min(good_T) / 10}")

    stride = doc.get("stride", 1)
    if not _is_int(stride) or stride < 1:
        problems.append(f"stride: must be an integer >= 1, got {stride!r}")

    for key, default in (("tolerance", 1e-9), ("slack", 1e-6)):
        val = doc.get(key, default)
        if not _is_number(val) or val <= 0:
            problems.append(f"{key}: must be a positive number, got {val!r}")

    tail_cutoff = doc.get("tail_cutoff")
    if tail_cutoff is not None and (not _is_int(tail_cutoff) or tail_cutoff < 0 or (dim and tail_cutoff > dim)):
        problems.append(f"tail_cutoff: must be an integer in [0, dim], got {tail_cutoff!r}")

    gap_samples = doc.get("gap_samples", 33)
    if not _is_int(gap_samples) or gap_samples < 2:
        problems.append(f"gap_samples: must be an integer >= 2, got {gap_samples!r}")

    workers = doc.get("workers", 1)
    if not _is_int(workers) or workers < 1:
        problems.append(f"workers: must be an integer >= 1, got {workers!r}")

    out = doc.get("out")
    if out is not None and not isinstance(out, str):
        problems.append(f"out: must be a path string, got {out!r}")

    if problems:
        raise ConfigError(problems)

    return ExperimentConfig(
        dim=dim,
        hi_kind=hi_kind,
        hi_params=hi_params,
        seed=seed,
        potential=potential,
        x_min=tuple(x_min),
        coefficients=tuple(float(c) for c in coefficients),
        shift=float(shift),
        T=tuple(float(t) for t in T),
        dt=float(dt),
        stride=stride,
        tolerance=float(doc.get("tolerance", 1e-9)),
        out=out,
        slack=float(doc.get("slack", 1e-6)),
        tail_cutoff=tail_cutoff,
        gap_samples=gap_samples,
        workers=workers,
    )


def parse_config(text: str) -> ExperimentConfig:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    if doc is None:
        raise ConfigError("config is empty")
    return from_mapping(doc)


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())
