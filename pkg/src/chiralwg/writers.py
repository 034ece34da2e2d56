"""CSV and JSON emission helpers.

Floats are serialized with 17 significant digits so re-reading reproduces
them bit-exactly.  CSV bodies contain no timestamps; provenance lives in the
JSON sidecars.
"""

from __future__ import annotations

import datetime
import json
from pathlib import Path

from . import __version__
from .solver import SteadyState
from .sweep import SweepResult


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def provenance() -> dict:
    return {
        "engine": "chiralwg",
        "version": __version__,
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def populations_csv_text(state: SteadyState) -> str:
    lines = ["site_index,population,re_amplitude,im_amplitude"]
    for j, (p, a) in enumerate(zip(state.populations, state.amplitudes), start=1):
        lines.append(f"{j},{fmt(p)},{fmt(a.real)},{fmt(a.imag)}")
    return "\n".join(lines) + "\n"


def sweep_csv_text(result: SweepResult) -> str:
    spec = result.spec
    metric_names = [name for name in spec.outputs if name != "populations"]
    header = [spec.axis1.name, spec.axis2.name, "status"] + metric_names
    if result.populations is not None:
        n = result.populations.shape[2]
        header += [f"pop_{j}" for j in range(1, n + 1)]
    lines = [",".join(header)]
    for i, a in enumerate(result.axis1_values):
        for j, b in enumerate(result.axis2_values):
            row = [fmt(a), fmt(b), str(result.status[i, j])]
            row += [fmt(result.metrics[name][i, j]) for name in metric_names]
            if result.populations is not None:
                row += [fmt(x) for x in result.populations[i, j, :]]
            lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def table_csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = [str(c) if isinstance(c, (int, str)) else fmt(c) for c in row]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
