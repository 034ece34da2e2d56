"""Strict JSON run configuration.

Unknown keys are rejected everywhere (naming the offending path), numeric
fields are radians / units of gamma, and to_dict() emits a canonical form
that re-parses to an equal RunConfig.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError
from .model import (
    ArrayGeometry,
    CouplingParams,
    DriveScheme,
    build_geometry,
    make_asymmetric_scheme,
    make_custom_scheme,
    make_defect_scheme,
    make_uniform_scheme,
)
from .sweep import SweepAxis, SweepSpec, DEFAULT_CELL_CAP

SCHEMA_VERSION = 1


def _section(raw: dict, path: str, allowed: set[str], required: set[str]) -> None:
    if not isinstance(raw, dict):
        raise ValidationError(f"{path}: expected an object")
    unknown = set(raw) - allowed
    if unknown:
        raise ValidationError(f"{path}: unknown key(s) {sorted(unknown)}")
    missing = required - set(raw)
    if missing:
        raise ValidationError(f"{path}: missing required key(s) {sorted(missing)}")


def _number(raw: dict, path: str, key: str, default=None):
    if key not in raw:
        return default
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{path}.{key}: expected a number, got {value!r}")
    return float(value)


def _integer(raw: dict, path: str, key: str, default=None):
    if key not in raw:
        return default
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{path}.{key}: expected an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class GeometryConfig:
    n_atoms: int
    xi: float

    @classmethod
    def from_dict(cls, raw: dict, path: str = "geometry") -> "GeometryConfig":
        _section(raw, path, {"n_atoms", "xi"}, {"n_atoms", "xi"})
        return cls(n_atoms=_integer(raw, path, "n_atoms"), xi=_number(raw, path, "xi"))

    def to_dict(self) -> dict:
        return {"n_atoms": self.n_atoms, "xi": self.xi}


@dataclass(frozen=True)
class CouplingConfig:
    gamma: float = 1.0
    directionality: float = 0.0
    gamma_ng: float = 0.0
    detunings: float | tuple[float, ...] = 0.0

    @classmethod
    def from_dict(cls, raw: dict, path: str = "couplings") -> "CouplingConfig":
        _section(raw, path, {"gamma", "directionality", "gamma_ng", "detunings"}, set())
        detunings = raw.get("detunings", 0.0)
        if isinstance(detunings, list):
            detunings = tuple(float(x) for x in detunings)
        elif isinstance(detunings, bool) or not isinstance(detunings, (int, float)):
            raise ValidationError(f"{path}.detunings: expected number or list of numbers")
        else:
            detunings = float(detunings)
        return cls(
            gamma=_number(raw, path, "gamma", 1.0),
            directionality=_number(raw, path, "directionality", 0.0),
            gamma_ng=_number(raw, path, "gamma_ng", 0.0),
            detunings=detunings,
        )

    def to_dict(self) -> dict:
        detunings = list(self.detunings) if isinstance(self.detunings, tuple) else self.detunings
        return {
            "gamma": self.gamma,
            "directionality": self.directionality,
            "gamma_ng": self.gamma_ng,
            "detunings": detunings,
        }


@dataclass(frozen=True)
class SchemeConfig:
    kind: str
    theta: float | None = None
    theta1: float | None = None
    theta2: float | None = None
    rabi_amp: float = 0.01
    defect_sites: tuple[int, ...] | None = None
    rabi: tuple[float, ...] | None = None
    phases: tuple[float, ...] | None = None
    angles: tuple[float, ...] | None = None

    @classmethod
    def from_dict(cls, raw: dict, path: str = "scheme") -> "SchemeConfig":
        allowed = {
            "kind",
            "theta",
            "theta1",
            "theta2",
            "rabi_amp",
            "defect_sites",
            "rabi",
            "phases",
            "angles",
        }
        _section(raw, path, allowed, {"kind"})
        kind = raw["kind"]
        if kind not in ("uniform", "asymmetric", "defect", "custom"):
            raise ValidationError(f"{path}.kind: unknown scheme kind {kind!r}")
        if kind == "uniform" and "theta" not in raw:
            raise ValidationError(f"{path}: uniform scheme requires 'theta'")
        if kind in ("asymmetric", "defect"):
            for key in ("theta1", "theta2"):
                if key not in raw:
                    raise ValidationError(f"{path}: {kind} scheme requires {key!r}")
        if kind == "custom":
            for key in ("rabi", "phases", "angles"):
                if key not in raw or not isinstance(raw[key], list):
                    raise ValidationError(f"{path}: custom scheme requires list {key!r}")

        def vec(key):
            return tuple(float(x) for x in raw[key]) if key in raw else None

        defect_sites = None
        if "defect_sites" in raw:
            if not isinstance(raw["defect_sites"], list):
                raise ValidationError(f"{path}.defect_sites: expected a list of integers")
            defect_sites = tuple(int(x) for x in raw["defect_sites"])
        return cls(
            kind=kind,
            theta=_number(raw, path, "theta"),
            theta1=_number(raw, path, "theta1"),
            theta2=_number(raw, path, "theta2"),
            rabi_amp=_number(raw, path, "rabi_amp", 0.01),
            defect_sites=defect_sites,
            rabi=vec("rabi"),
            phases=vec("phases"),
            angles=vec("angles"),
        )

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "rabi_amp": self.rabi_amp}
        if self.theta is not None:
            out["theta"] = self.theta
        if self.theta1 is not None:
            out["theta1"] = self.theta1
        if self.theta2 is not None:
            out["theta2"] = self.theta2
        if self.defect_sites is not None:
            out["defect_sites"] = list(self.defect_sites)
        for key in ("rabi", "phases", "angles"):
            value = getattr(self, key)
            if value is not None:
                out[key] = list(value)
        return out


@dataclass(frozen=True)
class DynamicsConfig:
    t_end: float = 200.0
    dt: float = 0.01
    snapshot_stride: int = 100

    @classmethod
    def from_dict(cls, raw: dict, path: str = "dynamics") -> "DynamicsConfig":
        _section(raw, path, {"t_end", "dt", "snapshot_stride"}, set())
        return cls(
            t_end=_number(raw, path, "t_end", 200.0),
            dt=_number(raw, path, "dt", 0.01),
            snapshot_stride=_integer(raw, path, "snapshot_stride", 100),
        )

    def to_dict(self) -> dict:
        return {"t_end": self.t_end, "dt": self.dt, "snapshot_stride": self.snapshot_stride}


@dataclass(frozen=True)
class SweepConfig:
    axis1: SweepAxis
    axis2: SweepAxis
    outputs: tuple[str, ...]
    cell_cap: int = DEFAULT_CELL_CAP

    @staticmethod
    def _axis(raw: dict, path: str) -> SweepAxis:
        _section(
            raw,
            path,
            {"name", "start", "stop", "count", "include_endpoints"},
            {"name", "start", "stop", "count"},
        )
        include = raw.get("include_endpoints")
        if include is not None and not isinstance(include, bool):
            raise ValidationError(f"{path}.include_endpoints: expected a boolean")
        return SweepAxis(
            name=str(raw["name"]),
            start=_number(raw, path, "start"),
            stop=_number(raw, path, "stop"),
            count=_integer(raw, path, "count"),
            include_endpoints=include,
        )

    @classmethod
    def from_dict(cls, raw: dict, path: str = "sweep") -> "SweepConfig":
        _section(raw, path, {"axis1", "axis2", "outputs", "cell_cap"}, {"axis1", "axis2", "outputs"})
        if not isinstance(raw["outputs"], list):
            raise ValidationError(f"{path}.outputs: expected a list")
        return cls(
            axis1=cls._axis(raw["axis1"], f"{path}.axis1"),
            axis2=cls._axis(raw["axis2"], f"{path}.axis2"),
            outputs=tuple(str(x) for x in raw["outputs"]),
            cell_cap=_integer(raw, path, "cell_cap", DEFAULT_CELL_CAP),
        )

    def to_dict(self) -> dict:
        def axis_dict(axis: SweepAxis) -> dict:
            out = {"name": axis.name, "start": axis.start, "stop": axis.stop, "count": axis.count}
            if axis.include_endpoints is not None:
                out["include_endpoints"] = axis.include_endpoints
            return out

        return {
            "axis1": axis_dict(self.axis1),
            "axis2": axis_dict(self.axis2),
            "outputs": list(self.outputs),
            "cell_cap": self.cell_cap,
        }


@dataclass(frozen=True)
class AnalyticConfig:
    n_atoms: tuple[int, ...]
    xi_count: int = 512
    branch_k: int = 0
    riel_xi: float | None = None

    @classmethod
    def from_dict(cls, raw: dict, path: str = "analytic") -> "AnalyticConfig":
        _section(raw, path, {"n_atoms", "xi_count", "branch_k", "riel_xi"}, {"n_atoms"})
        n_atoms = raw["n_atoms"]
        if isinstance(n_atoms, int) and not isinstance(n_atoms, bool):
            n_atoms = (n_atoms,)
        elif isinstance(n_atoms, list):
            n_atoms = tuple(int(x) for x in n_atoms)
        else:
            raise ValidationError(f"{path}.n_atoms: expected integer or list of integers")
        return cls(
            n_atoms=n_atoms,
            xi_count=_integer(raw, path, "xi_count", 512),
            branch_k=_integer(raw, path, "branch_k", 0),
            riel_xi=_number(raw, path, "riel_xi"),
        )

    def to_dict(self) -> dict:
        out: dict = {
            "n_atoms": list(self.n_atoms),
            "xi_count": self.xi_count,
            "branch_k": self.branch_k,
        }
        if self.riel_xi is not None:
            out["riel_xi"] = self.riel_xi
        return out


@dataclass(frozen=True)
class RunConfig:
    geometry: GeometryConfig
    couplings: CouplingConfig = field(default_factory=CouplingConfig)
    scheme: SchemeConfig | None = None
    dynamics: DynamicsConfig = field(default_factory=DynamicsConfig)
    sweep: SweepConfig | None = None
    analytic: AnalyticConfig | None = None
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        allowed = {"schema_version", "geometry", "couplings", "scheme", "dynamics", "sweep", "analytic"}
        _section(raw, "config", allowed, {"schema_version", "geometry"})
        version = raw["schema_version"]
        if version != SCHEMA_VERSION:
            raise ValidationError(
                f"config.schema_version: expected {SCHEMA_VERSION}, got {version!r}"
            )
        return cls(
            schema_version=version,
            geometry=GeometryConfig.from_dict(raw["geometry"]),
            couplings=CouplingConfig.from_dict(raw.get("couplings", {})),
            scheme=SchemeConfig.from_dict(raw["scheme"]) if "scheme" in raw else None,
            dynamics=DynamicsConfig.from_dict(raw.get("dynamics", {})),
            sweep=SweepConfig.from_dict(raw["sweep"]) if "sweep" in raw else None,
            analytic=AnalyticConfig.from_dict(raw["analytic"]) if "analytic" in raw else None,
        )

    def to_dict(self) -> dict:
        out: dict = {
            "schema_version": self.schema_version,
            "geometry": self.geometry.to_dict(),
            "couplings": self.couplings.to_dict(),
            "dynamics": self.dynamics.to_dict(),
        }
        if self.scheme is not None:
            out["scheme"] = self.scheme.to_dict()
        if self.sweep is not None:
            out["sweep"] = self.sweep.to_dict()
        if self.analytic is not None:
            out["analytic"] = self.analytic.to_dict()
        return out


def load_config(path: str | Path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ValidationError(f"config {path}: top level must be an object")
    return RunConfig.from_dict(raw)


def build_problem(cfg: RunConfig) -> tuple[ArrayGeometry, CouplingParams, DriveScheme]:
    """Instantiate the domain objects described by a config."""
    geom = build_geometry(cfg.geometry.n_atoms, cfg.geometry.xi)
    couplings = CouplingParams(
        gamma_total=cfg.couplings.gamma,
        directionality=cfg.couplings.directionality,
        gamma_ng=cfg.couplings.gamma_ng,
        detunings=cfg.couplings.detunings,
    )
    sc = cfg.scheme
    if sc is None:
        raise ValidationError("config has no scheme section")
    if sc.kind == "uniform":
        scheme = make_uniform_scheme(geom, sc.theta, sc.rabi_amp)
    elif sc.kind == "asymmetric":
        scheme = make_asymmetric_scheme(geom, sc.theta1, sc.theta2, sc.rabi_amp)
    elif sc.kind == "defect":
        scheme = make_defect_scheme(geom, sc.theta1, sc.theta2, sc.rabi_amp, sc.defect_sites)
    else:
        scheme = make_custom_scheme(sc.rabi, sc.phases, sc.angles, sc.defect_sites or ())
    return geom, couplings, scheme


def sweep_spec_from_config(cfg: RunConfig) -> SweepSpec:
    """Fixed parameters come from the geometry/couplings/scheme sections; axes override."""
    if cfg.sweep is None:
        raise ValidationError("config has no sweep section")
    if cfg.scheme is None:
        raise ValidationError("sweep config requires a scheme section")
    if cfg.scheme.kind == "custom":
        raise ValidationError("custom schemes are not sweepable")
    if isinstance(cfg.couplings.detunings, tuple):
        raise ValidationError("sweeps support scalar detuning only")
    fixed: dict = {
        "N": cfg.geometry.n_atoms,
        "xi": cfg.geometry.xi,
        "D": cfg.couplings.directionality,
        "gamma": cfg.couplings.gamma,
        "gamma_ng": cfg.couplings.gamma_ng,
        "detuning": cfg.couplings.detunings,
        "rabi_amp": cfg.scheme.rabi_amp,
    }
    if cfg.scheme.kind == "uniform":
        fixed["theta1"] = cfg.scheme.theta
    else:
        fixed["theta1"] = cfg.scheme.theta1
        fixed["theta2"] = cfg.scheme.theta2
    if cfg.scheme.kind == "defect" and cfg.scheme.defect_sites is not None:
        fixed["defect_sites"] = cfg.scheme.defect_sites
    axis_names = {cfg.sweep.axis1.name, cfg.sweep.axis2.name}
    for name in axis_names:
        fixed.pop(name, None)
    return SweepSpec(
        scheme_family=cfg.scheme.kind,
        fixed=fixed,
        axis1=cfg.sweep.axis1,
        axis2=cfg.sweep.axis2,
        outputs=cfg.sweep.outputs,
        cell_cap=cfg.sweep.cell_cap,
    )
