"""Executable acceptance harness.

Every registered check binds one quantitative claim about the engine
(closed-form limits, reference populations, symmetries, oracle equivalence,
determinism) to a pass/fail status with an auditable tolerance.  Checks are
deterministic; repeated runs give identical statuses.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from .analytics import analytic_defect_amplitudes, analytic_pm, analytic_xi_max, diagonal_angles, predict_riel_minima
from .dynamics import integrate
from .errors import NearFieldWarning, SingularSystem
from .metrics import compute_riel
from .model import (
    CouplingParams,
    build_coupling_matrix,
    build_drive_vector,
    build_geometry,
    central_site,
    make_asymmetric_scheme,
    make_custom_scheme,
    make_defect_scheme,
    make_uniform_scheme,
)
from .solver import solve_steady_state
from .sweep import SweepAxis, SweepSpec, run_sweep
from .writers import sweep_csv_text

PI = math.pi


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    description: str
    expected: str
    observed: str
    tolerance: str
    status: str  # "pass" | "fail"
    runtime_s: float


@dataclass(frozen=True)
class CheckOutcome:
    expected: str
    observed: str
    tolerance: str
    passed: bool


def _scheme(family, geom, theta1, theta2=None, rabi_amp=0.01, defect_sites=None):
    if family == "uniform":
        return make_uniform_scheme(geom, theta1, rabi_amp)
    if family == "asymmetric":
        return make_asymmetric_scheme(geom, theta1, theta2, rabi_amp)
    return make_defect_scheme(geom, theta1, theta2, rabi_amp, defect_sites)


def _populations(
    n,
    xi,
    family="defect",
    theta1=0.5 * PI,
    theta2=None,
    directionality=0.0,
    gamma_ng=0.0,
    rabi_amp=0.01,
    defect_sites=None,
):
    if theta2 is None:
        theta2 = theta1
    geom = build_geometry(n, xi)
    cpl = CouplingParams(directionality=directionality, gamma_ng=gamma_ng)
    matrix = build_coupling_matrix(geom, cpl)
    scheme = _scheme(family, geom, theta1, theta2, rabi_amp, defect_sites)
    state = solve_steady_state(matrix, build_drive_vector(geom, scheme))
    return state.populations


def _check_eq16_equivalence():
    worst = 0.0
    for n in (5, 7, 9, 51):
        for frac in (0.05, 0.1, 0.3, 0.7):
            xi = frac * PI
            numeric = _populations(n, xi, family="defect", theta1=0.5 * PI)
            amps = analytic_defect_amplitudes(n, xi)
            weights = np.abs(amps) ** 2
            worst = max(worst, float(np.abs(numeric - weights / weights.sum()).max()))
    return CheckOutcome("0", f"{worst:.3e}", "1e-08", worst <= 1e-8)


def _check_saturation():
    xi = 1e-4
    worst = 0.0
    for n in (10, 100, 1000):
        m = central_site(n)
        numeric = _populations(n, xi, family="defect", theta1=0.5 * PI)
        worst = max(worst, abs(numeric[m - 1] - 2.0 / 3.0))
        worst = max(worst, abs(numeric[m - 2] - 1.0 / 6.0), abs(numeric[m] - 1.0 / 6.0))
        worst = max(worst, abs(analytic_pm(n, xi) - 2.0 / 3.0))
    return CheckOutcome("P_m -> 2/3, P_m+-1 -> 1/6", f"max gap {worst:.3e}", "1e-03", worst <= 1e-3)


def _numeric_pm_n5(xi):
    pops = _populations(5, xi, family="defect", theta1=0.5 * PI)
    return pops[2]


def _check_small_n_overshoot():
    grid = np.linspace(0.02 * PI, 0.98 * PI, 300)
    values = [_numeric_pm_n5(x) for x in grid]
    k = int(np.argmax(values))
    res = minimize_scalar(
        lambda x: -_numeric_pm_n5(x),
        bounds=(grid[max(0, k - 1)], grid[min(len(grid) - 1, k + 1)]),
        method="bounded",
        options={"xatol": 1e-10},
    )
    xi_star = float(res.x)
    pops = _populations(5, xi_star, family="defect", theta1=0.5 * PI)
    pm, edge, other = pops[2], pops[0], pops[1]
    ok = (
        abs(pm - 0.723) <= 0.005
        and abs(edge - 0.092) <= 0.005
        and abs(pops[4] - 0.092) <= 0.005
        and abs(other - 0.044) <= 0.005
        and abs(pops[3] - 0.044) <= 0.005
    )
    return CheckOutcome(
        "max P_m 0.723, edges 0.092, others 0.044",
        f"P_m {pm:.4f} at xi {xi_star:.5f}, edges {edge:.4f}, others {other:.4f}",
        "0.005 each",
        ok,
    )


def _check_xi_max_formula():
    worst = 0.0
    for n in (5, 20, 100):
        grid = np.linspace(0.01 * PI, 0.99 * PI, 2000)
        values = [analytic_pm(n, x) for x in grid]
        k = int(np.argmax(values))
        res = minimize_scalar(
            lambda x: -analytic_pm(n, x),
            bounds=(grid[max(0, k - 1)], grid[min(len(grid) - 1, k + 1)]),
            method="bounded",
            options={"xatol": 1e-9},
        )
        worst = max(worst, abs(float(res.x) - analytic_xi_max(n)))
    return CheckOutcome("brute-force argmax = closed form", f"max |dxi| {worst:.3e}", "1e-06", worst <= 1e-6)


def _check_defect_peak():
    n, xi = 100, 0.1 * PI
    m = central_site(n)
    geom = build_geometry(n, xi)
    matrix = build_coupling_matrix(geom, CouplingParams())
    thetas = np.arange(201) * 0.005 * PI
    series = []
    for theta in thetas:
        scheme = make_defect_scheme(geom, theta, theta)
        state = solve_steady_state(matrix, build_drive_vector(geom, scheme))
        series.append(state.populations[m - 1])
    series = np.asarray(series)
    k86 = 172  # 0.86*pi on the 0.005*pi grid
    value = float(series[k86])
    k_star = int(np.argmax(series))
    # the continuous peak sits at 0.85503*pi, i.e. the paper's 0.86*pi is a
    # two-digit rounding; accept the argmax within one grid step
    ok = (
        abs(value - 0.67) <= 0.01
        and abs(thetas[k_star] - 0.86 * PI) <= 0.005 * PI + 1e-12
        and float(series[k_star]) - value <= 1e-3
    )
    return CheckOutcome(
        "P_m(0.86*pi) = 0.67, grid argmax at 0.86*pi (one-step rounding)",
        f"P_m {value:.5f}, argmax theta {thetas[k_star]/PI:.3f}*pi, max gap {float(series[k_star])-value:.2e}",
        "0.01 on value; argmax within 0.005*pi; gap <= 1e-3",
        ok,
    )


def _check_asym_interface():
    n, xi = 100, 0.1 * PI
    m = central_site(n)
    results = []
    for (t1, t2), expected in (((0.9 * PI, 0.1 * PI), 0.998), ((0.75 * PI, 0.25 * PI), 0.968)):
        pops = _populations(n, xi, family="asymmetric", theta1=t1, theta2=t2)
        results.append((float(pops[m - 1] + pops[m]), expected))
    ok = all(abs(obs - exp) <= 0.005 for obs, exp in results)
    observed = ", ".join(f"{obs:.4f} (exp {exp})" for obs, exp in results)
    return CheckOutcome("interface pair holds 0.998 / 0.968", observed, "0.005 each", ok)


def _check_bi_edge():
    pops = _populations(50, 0.05 * PI, family="uniform", theta1=0.5 * PI)
    interior = pops[1:-1]
    ok = (
        abs(pops[0] - 0.314) <= 0.005
        and abs(pops[-1] - 0.314) <= 0.005
        and np.all(np.abs(interior - 0.0078) <= 0.001)
    )
    return CheckOutcome(
        "edges 0.314, interior 0.0078",
        f"edges {pops[0]:.4f}/{pops[-1]:.4f}, interior {interior.min():.5f}..{interior.max():.5f}",
        "0.005 edges, 0.001 interior",
        ok,
    )


def _check_riel_minima():
    n, xi = 100, 0.1 * PI
    geom = build_geometry(n, xi)
    matrix = build_coupling_matrix(geom, CouplingParams())
    predictions = [diagonal_angles(d)[0] for d in predict_riel_minima(n, xi)]
    predicted_cos = sorted(math.cos(t1) for t1 in predictions)
    cos_grid = np.linspace(-1.0, 1.0, 201)
    series = []
    for c in cos_grid:
        scheme = make_asymmetric_scheme(geom, math.acos(c), math.acos(-c))
        state = solve_steady_state(matrix, build_drive_vector(geom, scheme))
        series.append(compute_riel(state.populations, scheme))
    series = np.asarray(series)
    minima = [
        cos_grid[i]
        for i in range(1, len(series) - 1)
        if series[i] < series[i - 1] and series[i] < series[i + 1]
    ]
    gaps = [min(abs(c - m) for m in minima) if minima else math.inf for c in predicted_cos]
    worst = max(gaps)
    return CheckOutcome(
        f"scan minima near cos(theta1) in {[round(c, 2) for c in predicted_cos]}",
        f"worst prediction-to-minimum gap {worst:.3f}",
        "0.02 in cos(theta)",
        worst <= 0.02,
    )


def _check_excluded_singular():
    failures = []
    for n in (2, 50):
        for xi in (1e-14, PI):
            geom = build_geometry(n, xi)
            matrix = build_coupling_matrix(geom, CouplingParams())
            scheme = make_uniform_scheme(geom, 0.5 * PI)
            try:
                solve_steady_state(matrix, build_drive_vector(geom, scheme))
                failures.append((n, xi))
            except SingularSystem:
                pass
    return CheckOutcome(
        "SingularSystem at (N in {2,50}) x (xi in {1e-14, pi})",
        "all raised" if not failures else f"no raise at {failures}",
        "exact",
        not failures,
    )


def _sample_oracle_config(rng):
    """One random configuration whose slowest mode decays fast enough for t=200."""
    while True:
        n = int(rng.integers(2, 9))
        directionality = float(rng.uniform(-1.0, 1.0))
        xi = float(rng.uniform(0.1 * PI, 1.9 * PI))
        if abs(directionality) < 0.2 and abs(xi - PI) <= 0.1 * PI:
            continue
        geom = build_geometry(n, xi)
        matrix = build_coupling_matrix(geom, CouplingParams(directionality=directionality))
        if np.linalg.eigvals(matrix.entries).real.max() > -0.1:
            continue
        family = ("uniform", "asymmetric", "defect")[int(rng.integers(0, 3))]
        theta1 = float(rng.uniform(0.0, PI))
        theta2 = float(rng.uniform(0.0, PI))
        defect_sites = (int(rng.integers(1, n + 1)),) if family == "defect" else None
        scheme = _scheme(family, geom, theta1, theta2, defect_sites=defect_sites)
        return geom, matrix, scheme


def _check_oracle_equivalence():
    rng = np.random.default_rng(20250810)
    worst = 0.0
    for _ in range(50):
        geom, matrix, scheme = _sample_oracle_config(rng)
        drive = build_drive_vector(geom, scheme)
        state = solve_steady_state(matrix, drive)
        record = integrate(matrix, drive, t_end=200.0, dt=0.01)
        weights = np.abs(record.final_amplitudes) ** 2
        pops_ode = weights / weights.sum()
        worst = max(worst, float(np.abs(pops_ode - state.populations).max()))
    return CheckOutcome("ODE vs LU populations agree", f"max gap {worst:.3e}", "1e-06", worst <= 1e-6)


def _check_symmetries():
    n = 30
    mirror_worst = 0.0
    for directionality in (-1.0, -0.5, 0.0, 0.5, 1.0):
        for tf in (0.15, 0.35, 0.5, 0.7, 0.9):
            for xf in (0.3, 0.7, 1.2):
                xi, theta = xf * PI, tf * PI
                a = _populations(n, xi, family="uniform", theta1=theta, directionality=directionality)
                b = _populations(n, xi, family="uniform", theta1=PI - theta, directionality=-directionality)
                mirror_worst = max(mirror_worst, float(np.abs(a - b[::-1]).max()))
    defect_worst = 0.0
    for tf in (0.3, 0.86):
        for xf in (0.1, 0.4):
            pops = _populations(21, xf * PI, family="defect", theta1=tf * PI)
            defect_worst = max(defect_worst, float(np.abs(pops - pops[::-1]).max()))
    geom = build_geometry(n, 0.3 * PI)
    matrix = build_coupling_matrix(geom, CouplingParams())
    base_scheme = make_asymmetric_scheme(geom, 0.3 * PI, 0.8 * PI)
    base = solve_steady_state(matrix, build_drive_vector(geom, base_scheme)).populations
    scaled_scheme = make_asymmetric_scheme(geom, 0.3 * PI, 0.8 * PI, rabi_amp=0.01 * 137.0)
    scaled = solve_steady_state(matrix, build_drive_vector(geom, scaled_scheme)).populations
    shifted_scheme = make_custom_scheme(
        base_scheme.rabi, base_scheme.phases + 0.7, base_scheme.angles
    )
    shifted = solve_steady_state(matrix, build_drive_vector(geom, shifted_scheme)).populations
    invariance_worst = max(
        float(np.abs(scaled - base).max()), float(np.abs(shifted - base).max())
    )
    ok = mirror_worst <= 1e-10 and defect_worst <= 1e-10 and invariance_worst <= 1e-12
    return CheckOutcome(
        "mirror 1e-10; defect mirror 1e-10; scale/phase 1e-12",
        f"mirror {mirror_worst:.2e}, defect {defect_worst:.2e}, invariance {invariance_worst:.2e}",
        "per part",
        ok,
    )


def _check_gamma_ng_robustness():
    n, xi = 100, 0.1 * PI
    pops = _populations(n, xi, family="defect", theta1=0.86 * PI, gamma_ng=0.5)
    argmax = int(np.argmax(pops)) + 1
    m = central_site(n)
    return CheckOutcome(
        f"site {m} is argmax at gamma_ng = 0.5",
        f"argmax site {argmax}, P_m {pops[m-1]:.4f}",
        "exact",
        argmax == m,
    )


def _check_multi_defect():
    theta = 0.86 * PI
    xi = 0.1 * PI
    pops20 = _populations(20, xi, family="defect", theta1=theta, defect_sites=(10, 11))
    core = float(pops20[8] + pops20[9] + pops20[10] + pops20[11])
    ok = core >= 0.90
    details = [f"N=20 sites 9-12 hold {core:.4f}"]
    for sites in ((9, 25), (5, 12, 18, 25)):
        pops = _populations(30, xi, family="defect", theta1=theta, defect_sites=sites)
        neighbour = set()
        for d in sites:
            for nb in (d - 1, d + 1):
                if 1 <= nb <= 30 and nb not in sites:
                    neighbour.add(nb)
        far_driven = [j for j in range(1, 31) if j not in sites and j not in neighbour]
        far_max = max(pops[j - 1] for j in far_driven)
        dominated = all(pops[d - 1] > far_max for d in sites)
        ok = ok and dominated
        details.append(f"N=30 defects {sites}: defect min {min(pops[d-1] for d in sites):.4f} vs far max {far_max:.2e}")
    return CheckOutcome(
        ">= 0.90 on the 4-site core; defects dominate far driven sites",
        "; ".join(details),
        "structural",
        ok,
    )


def _check_sweep_determinism():
    spec = SweepSpec(
        scheme_family="asymmetric",
        fixed={"N": 100, "xi": 0.1 * PI, "D": 0.0},
        axis1=SweepAxis("theta1", 0.0, PI, 200),
        axis2=SweepAxis("theta2", 0.0, PI, 200),
        outputs=("riel", "p_m"),
    )
    start = time.perf_counter()
    first = run_sweep(spec, threads=4)
    elapsed = time.perf_counter() - start
    second = run_sweep(spec, threads=4)
    identical = sweep_csv_text(first) == sweep_csv_text(second)
    ok = identical and elapsed < 120.0
    return CheckOutcome(
        "bit-identical CSV, first run < 120 s on 4 workers",
        f"identical={identical}, first run {elapsed:.1f} s",
        "120 s",
        ok,
    )


CHECKS: tuple[tuple[str, str, object], ...] = (
    ("eq16-equivalence", "closed-form defect amplitudes match the dense solve elementwise", _check_eq16_equivalence),
    ("sat-2-3", "undriven-atom population saturates to 2/3 (neighbours 1/6) as xi -> 0", _check_saturation),
    ("small-n-overshoot", "N=5 peak population overshoots the saturation value", _check_small_n_overshoot),
    ("xi-max-formula", "closed-form optimal xi matches brute-force maximization", _check_xi_max_formula),
    ("defect-peak-0p86pi", "defect-scheme peak population at theta = 0.86*pi", _check_defect_peak),
    ("asym-interface-998", "asymmetric driving concentrates 0.998 / 0.968 at the interface", _check_asym_interface),
    ("bi-edge-0314", "uniform normal incidence gives the bi-edge reference state", _check_bi_edge),
    ("riel-minima-n-over-5", "diagonal RIEL minima appear at the predicted cosine bands", _check_riel_minima),
    ("excluded-singular", "excluded parameter points raise SingularSystem", _check_excluded_singular),
    ("ode-vs-lu-N8", "time integration converges to the linear-solve steady state", _check_oracle_equivalence),
    ("symmetry-suite", "mirror, drive-scale, and global-phase invariances", _check_symmetries),
    ("gamma-ng-robustness", "single-site localization survives gamma_ng = 0.5", _check_gamma_ng_robustness),
    ("multi-defect-control", "multi-defect schemes pin population at the defect sites", _check_multi_defect),
    ("sweep-determinism", "200x200 sweep is deterministic and fast on 4 workers", _check_sweep_determinism),
)


def run_all(filter: str | None = None) -> list[CheckReport]:
    """Run every registered check (or those whose id contains the filter substring)."""
    reports = []
    with warnings.catch_warnings():
        # the suite deliberately probes the near-field regime
        warnings.simplefilter("ignore", NearFieldWarning)
        for check_id, description, fn in CHECKS:
            if filter and filter not in check_id:
                continue
            start = time.perf_counter()
            try:
                outcome = fn()
            except Exception as exc:  # a crashed check is a failed check
                outcome = CheckOutcome("no exception", f"{type(exc).__name__}: {exc}", "-", False)
            runtime = time.perf_counter() - start
            reports.append(
                CheckReport(
                    check_id=check_id,
                    description=description,
                    expected=outcome.expected,
                    observed=outcome.observed,
                    tolerance=outcome.tolerance,
                    status="pass" if outcome.passed else "fail",
                    runtime_s=round(runtime, 3),
                )
            )
    return reports


def write_report(reports: list[CheckReport], path: str | Path) -> None:
    import json

    payload = {"checks": [asdict(r) for r in reports], "all_passed": all(r.status == "pass" for r in reports)}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def summarize(reports: list[CheckReport]) -> str:
    lines = []
    for r in reports:
        lines.append(f"{r.status.upper():4s} {r.check_id:22s} ({r.runtime_s:7.3f} s)  {r.observed}")
    n_pass = sum(1 for r in reports if r.status == "pass")
    lines.append(f"{n_pass}/{len(reports)} checks passed")
    return "\n".join(lines)
