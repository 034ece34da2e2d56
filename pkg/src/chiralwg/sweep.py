"""Deterministic parameter sweeps over rectangular grids.

Cells are independent pure computations; the engine may evaluate them on any
number of worker threads and merges results by cell index, so the assembled
grids are bit-identical regardless of worker count or evaluation order.
Singular parameter points become per-cell statuses, never aborts.
"""

from __future__ import annotations

import datetime
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import SingularSystem, ValidationError
from .metrics import compute_metrics
from .model import (
    ArrayGeometry,
    CouplingMatrix,
    CouplingParams,
    DriveScheme,
    build_coupling_matrix,
    build_drive_vector,
    build_geometry,
    central_site,
    make_asymmetric_scheme,
    make_defect_scheme,
    make_uniform_scheme,
)
from .solver import WEAK_EXCITATION_LIMIT, solve_steady_state

AXIS_NAMES = ("D", "xi", "theta1", "theta2", "gamma_ng", "N")
OUTPUTS = (
    "populations",
    "ipr",
    "iipr",
    "riel",
    "p_m",
    "p_interface",
    "p_edge",
    "raw_excitation",
    "condition_estimate",
)
SCHEME_FAMILIES = ("uniform", "asymmetric", "defect")
FIXED_KEYS = (
    "N",
    "D",
    "xi",
    "theta1",
    "theta2",
    "gamma_ng",
    "gamma",
    "rabi_amp",
    "detuning",
    "defect_sites",
)
STATUS_OK = "ok"
STATUS_SINGULAR = "singular"
STATUS_WEAK = "weak_excitation_violated"
DEFAULT_CELL_CAP = 1_000_000

# matrix-shaping parameters; axes outside this set share one factorization
_MATRIX_PARAMS = {"D", "xi", "gamma_ng", "N"}


@dataclass(frozen=True)
class SweepAxis:
    """One linear grid axis.

    include_endpoints defaults to False for xi (half-step open sampling, so
    default grids never land on the singular points xi in {0, pi} at D = 0)
    and True for every other parameter.
    """

    name: str
    start: float
    stop: float
    count: int
    include_endpoints: bool | None = None

    def resolved_include(self) -> bool:
        if self.include_endpoints is None:
            return self.name != "xi"
        return self.include_endpoints

    def values(self) -> np.ndarray:
        if self.count < 1:
            raise ValidationError(f"axis {self.name}: count must be >= 1, got {self.count}")
        if self.stop < self.start:
            raise ValidationError(f"axis {self.name}: stop < start")
        if self.count == 1:
            v = self.start if self.resolved_include() else 0.5 * (self.start + self.stop)
            return np.array([v])
        if self.resolved_include():
            return np.linspace(self.start, self.stop, self.count)
        step = (self.stop - self.start) / self.count
        return self.start + step * (np.arange(self.count) + 0.5)


@dataclass(frozen=True)
class SweepSpec:
    scheme_family: str
    fixed: dict
    axis1: SweepAxis
    axis2: SweepAxis
    outputs: tuple[str, ...]
    cell_cap: int = DEFAULT_CELL_CAP

    def validate(self) -> None:
        if self.scheme_family not in SCHEME_FAMILIES:
            raise ValidationError(
                f"scheme_family must be one of {SCHEME_FAMILIES}, got {self.scheme_family!r}"
            )
        names = (self.axis1.name, self.axis2.name)
        for name in names:
            if name not in AXIS_NAMES:
                raise ValidationError(f"invalid axis name {name!r}; allowed: {AXIS_NAMES}")
        if names[0] == names[1]:
            raise ValidationError(f"axis names must be distinct, both are {names[0]!r}")
        if self.scheme_family == "uniform" and "theta2" in names:
            raise ValidationError("uniform scheme has a single angle; theta2 axis is invalid")
        if not self.outputs:
            raise ValidationError("outputs must not be empty")
        for out in self.outputs:
            if out not in OUTPUTS:
                raise ValidationError(f"unknown output {out!r}; allowed: {OUTPUTS}")
        if len(set(self.outputs)) != len(self.outputs):
            raise ValidationError("outputs contains duplicates")
        for key in self.fixed:
            if key not in FIXED_KEYS:
                raise ValidationError(f"unknown fixed parameter {key!r}; allowed: {FIXED_KEYS}")
        cells = self.axis1.count * self.axis2.count
        if cells > self.cell_cap:
            raise ValidationError(f"grid has {cells} cells, exceeding cap {self.cell_cap}")
        for required in ("N", "xi", "theta1"):
            if required not in names and required not in self.fixed:
                raise ValidationError(f"parameter {required!r} is neither fixed nor an axis")
        if self.scheme_family != "uniform" and "theta2" not in names and "theta2" not in self.fixed:
            raise ValidationError("parameter 'theta2' is neither fixed nor an axis")
        if "N" in names:
            if "populations" in self.outputs:
                raise ValidationError("populations output is incompatible with an N axis")
            axis = self.axis1 if self.axis1.name == "N" else self.axis2
            for v in axis.values():
                if abs(v - round(v)) > 1e-6 or round(v) < 1:
                    raise ValidationError(f"N axis must sample positive integers, got {v}")
        if "riel" in self.outputs:
            if "N" in names:
                axis = self.axis1 if self.axis1.name == "N" else self.axis2
                n_min = int(round(axis.values().min()))
            else:
                n_min = int(self.fixed["N"])
            if n_min < 4:
                raise ValidationError("riel output requires N >= 4 (disjoint interface/edge sets)")

    def resolved_fixed(self) -> dict:
        out = {
            "D": 0.0,
            "gamma": 1.0,
            "gamma_ng": 0.0,
            "rabi_amp": 0.01,
            "detuning": 0.0,
            "defect_sites": None,
        }
        out.update(self.fixed)
        return out


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    axis1_values: np.ndarray
    axis2_values: np.ndarray
    status: np.ndarray  # (c1, c2) strings
    metrics: dict[str, np.ndarray] = field(default_factory=dict)  # each (c1, c2)
    populations: np.ndarray | None = None  # (c1, c2, N) when requested
    provenance: dict = field(default_factory=dict)

    def status_counts(self) -> dict[str, int]:
        values, counts = np.unique(self.status, return_counts=True)
        return dict(zip(values.tolist(), counts.tolist()))


@dataclass(frozen=True)
class Section:
    """1D slice of a sweep grid."""

    axis_name: str
    coords: np.ndarray
    status: np.ndarray
    metrics: dict[str, np.ndarray]
    fixed_axis: str | None = None
    fixed_value: float | None = None


def _scheme_for(family: str, geom: ArrayGeometry, params: dict) -> DriveScheme:
    if family == "uniform":
        return make_uniform_scheme(geom, params["theta1"], params["rabi_amp"])
    if family == "asymmetric":
        return make_asymmetric_scheme(geom, params["theta1"], params["theta2"], params["rabi_amp"])
    sites = params.get("defect_sites")
    return make_defect_scheme(
        geom, params["theta1"], params["theta2"], params["rabi_amp"], defect_sites=sites
    )


def _nan_metrics(outputs: tuple[str, ...], condition: float) -> dict[str, float]:
    record = {name: float("nan") for name in outputs if name != "populations"}
    if "condition_estimate" in record:
        record["condition_estimate"] = condition
    return record


def _evaluate_cell(
    spec: SweepSpec,
    params: dict,
    shared_matrix: CouplingMatrix | None,
):
    n = int(round(params["N"]))
    geom = build_geometry(n, params["xi"])
    if shared_matrix is not None:
        matrix = shared_matrix
    else:
        cpl = CouplingParams(
            gamma_total=params["gamma"],
            directionality=params["D"],
            gamma_ng=params["gamma_ng"],
            detunings=params["detuning"],
        )
        matrix = build_coupling_matrix(geom, cpl)
    scheme = _scheme_for(spec.scheme_family, geom, params)
    drive = build_drive_vector(geom, scheme)
    try:
        state = solve_steady_state(matrix, drive)
    except SingularSystem:
        return STATUS_SINGULAR, _nan_metrics(spec.outputs, matrix.condition_estimate), None

    record: dict[str, float] = {}
    wanted = set(spec.outputs)
    if wanted & {"ipr", "iipr", "riel", "p_interface", "p_edge"}:
        mset = compute_metrics(state.populations, scheme)
        for name in ("ipr", "iipr", "riel", "p_interface", "p_edge"):
            if name in wanted:
                record[name] = getattr(mset, name)
    if "p_m" in wanted:
        record["p_m"] = float(state.populations[central_site(n) - 1])
    if "raw_excitation" in wanted:
        record["raw_excitation"] = state.raw_excitation
    if "condition_estimate" in wanted:
        record["condition_estimate"] = matrix.condition_estimate
    populations = state.populations if "populations" in wanted else None
    status = STATUS_OK if state.weak_excitation_ok else STATUS_WEAK
    return status, record, populations


def run_sweep(spec: SweepSpec, threads: int = 0) -> SweepResult:
    """Evaluate the grid; every cell carries metrics or a typed failure status."""
    spec.validate()
    fixed = spec.resolved_fixed()
    v1 = spec.axis1.values()
    v2 = spec.axis2.values()
    c1, c2 = len(v1), len(v2)
    names = (spec.axis1.name, spec.axis2.name)

    shared_matrix = None
    if not (_MATRIX_PARAMS & set(names)):
        geom = build_geometry(int(round(fixed["N"])), fixed["xi"])
        cpl = CouplingParams(
            gamma_total=fixed["gamma"],
            directionality=fixed["D"],
            gamma_ng=fixed["gamma_ng"],
            detunings=fixed["detuning"],
        )
        shared_matrix = build_coupling_matrix(geom, cpl)

    def eval_row(i: int):
        row = []
        for j in range(c2):
            params = dict(fixed)
            params[names[0]] = float(v1[i])
            params[names[1]] = float(v2[j])
            row.append(_evaluate_cell(spec, params, shared_matrix))
        return row

    workers = threads if threads > 0 else (os.cpu_count() or 1)
    if workers == 1 or c1 == 1:
        rows = [eval_row(i) for i in range(c1)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(eval_row, range(c1)))

    status = np.empty((c1, c2), dtype="U32")
    metric_names = [name for name in spec.outputs if name != "populations"]
    metrics = {name: np.full((c1, c2), np.nan) for name in metric_names}
    populations = None
    if "populations" in spec.outputs:
        n_fixed = int(round(fixed["N"]))
        populations = np.full((c1, c2, n_fixed), np.nan)
    for i, row in enumerate(rows):
        for j, (cell_status, record, pops) in enumerate(row):
            status[i, j] = cell_status
            for name in metric_names:
                metrics[name][i, j] = record.get(name, np.nan)
            if populations is not None and pops is not None:
                populations[i, j, :] = pops
    provenance = {
        "engine": "chiralwg",
        "version": __version__,
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    return SweepResult(
        spec=spec,
        axis1_values=v1,
        axis2_values=v2,
        status=status,
        metrics=metrics,
        populations=populations,
        provenance=provenance,
    )


def _locate(values: np.ndarray, target: float, axis_name: str) -> int:
    idx = int(np.argmin(np.abs(values - target)))
    if len(values) > 1:
        half_step = 0.5 * abs(values[1] - values[0])
    else:
        half_step = 1e-12 * max(1.0, abs(values[0]))
    if abs(values[idx] - target) > half_step:
        raise ValidationError(
            f"no {axis_name} grid line within half a step of {target!r} "
            f"(nearest is {values[idx]!r})"
        )
    return idx


def cross_section(result: SweepResult, axis: str, fixed_value: float) -> Section:
    """Fix one axis at the grid line nearest fixed_value, return the other axis' series."""
    names = (result.spec.axis1.name, result.spec.axis2.name)
    if axis not in names:
        raise ValidationError(f"axis {axis!r} not in sweep axes {names}")
    if axis == names[0]:
        idx = _locate(result.axis1_values, fixed_value, axis)
        coords = result.axis2_values
        status = result.status[idx, :]
        metrics = {k: v[idx, :] for k, v in result.metrics.items()}
        other = names[1]
        fixed_at = float(result.axis1_values[idx])
    else:
        idx = _locate(result.axis2_values, fixed_value, axis)
        coords = result.axis1_values
        status = result.status[:, idx]
        metrics = {k: v[:, idx] for k, v in result.metrics.items()}
        other = names[0]
        fixed_at = float(result.axis2_values[idx])
    return Section(
        axis_name=other,
        coords=coords,
        status=status,
        metrics=metrics,
        fixed_axis=axis,
        fixed_value=fixed_at,
    )


def diagonal_section(result: SweepResult) -> Section:
    """Cells (i, i) of a square grid, e.g. the theta1 = theta2 profile."""
    if len(result.axis1_values) != len(result.axis2_values):
        raise ValidationError("diagonal section requires axes of equal length")
    k = len(result.axis1_values)
    idx = np.arange(k)
    return Section(
        axis_name=f"{result.spec.axis1.name}={result.spec.axis2.name}",
        coords=result.axis1_values,
        status=result.status[idx, idx],
        metrics={name: grid[idx, idx] for name, grid in result.metrics.items()},
    )
