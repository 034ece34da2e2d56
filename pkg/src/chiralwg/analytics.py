"""Closed-form results for the reciprocal defect-driven array.

Valid for normal incidence on both chains (theta1 = theta2 = pi/2),
reciprocal coupling (D = 0), no non-guided decay, and a single interior
defect at m = ceil(N/2).  In units of the drive amplitude Omega the
steady-state amplitudes are

    p_j = -Omega * (i + tan(xi/2))          j = 1 or N
          -Omega * 2 csc(xi)                j = m
          -Omega * (csc(xi) - 2 cot(xi))    j = m -/+ 1
          -Omega * 2 tan(xi/2)              otherwise

which yields the undriven-atom population

    P_m(N, xi) = 2 csc^2(xi) / (1 - 4 cot(xi) tan(xi/2) + 3 csc^2(xi)
                                + (2N - 9) tan^2(xi/2)),

saturating at 2/3 (neighbours at 1/6) as xi -> 0 or 2*pi, and maximized at

    xi_max = 2*k*pi + 2 * atan(1 / sqrt(4N - 13)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import central_site

POLE_EPS = 1e-9


def _check_defect_domain(n_atoms: int, xi: float) -> float:
    if n_atoms < 5:
        raise DomainError(f"closed forms require n_atoms >= 5, got {n_atoms}")
    xi = float(xi)
    if abs(math.sin(xi)) <= POLE_EPS:
        raise DomainError(f"xi = {xi!r} is at or too close to a trigonometric pole")
    return xi


def analytic_defect_amplitudes(n_atoms: int, xi: float, rabi_amp: float = 1.0) -> np.ndarray:
    """Exact steady-state amplitudes for the central-defect configuration."""
    xi = _check_defect_domain(n_atoms, xi)
    m = central_site(n_atoms)
    t = math.tan(xi / 2.0)
    csc = 1.0 / math.sin(xi)
    cot = 1.0 / math.tan(xi)
    p = np.full(n_atoms, -rabi_amp * 2.0 * t, dtype=complex)
    p[0] = p[-1] = -rabi_amp * (1j + t)
    p[m - 1] = -rabi_amp * 2.0 * csc
    p[m - 2] = p[m] = -rabi_amp * (-2.0 * cot + csc)
    return p


def analytic_pm(n_atoms: int, xi: float) -> float:
    """Closed-form normalized population of the undriven atom."""
    xi = _check_defect_domain(n_atoms, xi)
    t = math.tan(xi / 2.0)
    csc2 = 1.0 / math.sin(xi) ** 2
    cot = 1.0 / math.tan(xi)
    denom = 1.0 - 4.0 * cot * t + 3.0 * csc2 + (2.0 * n_atoms - 9.0) * t * t
    return 2.0 * csc2 / denom


def analytic_xi_max(n_atoms: int, branch_k: int = 0) -> float:
    """Interparticle phase maximizing the undriven-atom population, branch k."""
    disc = 4 * n_atoms - 13
    if disc <= 0:
        raise DomainError(f"xi_max requires 4*N - 13 > 0, got N = {n_atoms}")
    return 2.0 * branch_k * math.pi + 2.0 * math.atan(1.0 / math.sqrt(disc))


@dataclass(frozen=True)
class AnalyticDefectSolution:
    """Amplitudes, undriven-atom population, and optimal xi for one (N, xi)."""

    amplitudes: np.ndarray
    pm: float
    xi_max: float


def analytic_defect_solution(
    n_atoms: int, xi: float, rabi_amp: float = 1.0, branch_k: int = 0
) -> AnalyticDefectSolution:
    return AnalyticDefectSolution(
        amplitudes=analytic_defect_amplitudes(n_atoms, xi, rabi_amp),
        pm=analytic_pm(n_atoms, xi),
        xi_max=analytic_xi_max(n_atoms, branch_k),
    )


def predict_riel_minima(n_atoms: int, xi: float) -> list[float]:
    """Predicted cos(theta1) - cos(theta2) values of the RIEL local minima.

    The band condition is cos(theta1) - cos(theta2) = 2*n*pi / (m*xi) for
    integer n with |n| <= m*xi/pi - 1 and m = ceil(N/2); n = 0 (the
    equal-angle trench) is always predicted.  Values are restricted to the
    feasible range [-2, 2] and returned sorted.
    """
    xi = float(xi)
    if not 0.0 < xi < math.pi:
        raise DomainError(f"xi must lie strictly inside (0, pi), got {xi!r}")
    m = central_site(n_atoms)
    span = m * xi / math.pi
    # snap so exact integer spans (e.g. m*xi = 5*pi) keep their endpoint n
    n_max = math.floor(span - 1.0 + 1e-9)
    values = {0.0}
    for n in range(1, n_max + 1):
        v = 2.0 * n * math.pi / (m * xi)
        if abs(v) <= 2.0:
            values.add(v)
            values.add(-v)
    return sorted(values)


def diagonal_angles(difference: float) -> tuple[float, float]:
    """Map a cosine difference to the angle pair on the scan diagonal.

    On the diagonal cos(theta1) = -cos(theta2), a difference d corresponds to
    cos(theta1) = d/2.
    """
    if abs(difference) > 2.0:
        raise DomainError(f"cosine difference must lie in [-2, 2], got {difference!r}")
    c = difference / 2.0
    return math.acos(c), math.acos(-c)
