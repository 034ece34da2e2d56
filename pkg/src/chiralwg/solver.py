"""Steady-state linear solve and population normalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from .errors import SingularSystem, ValidationError, ZeroExcitation
from .model import CouplingMatrix

CONDITION_LIMIT = 1e12
WEAK_EXCITATION_LIMIT = 0.1


@dataclass(frozen=True)
class SteadyState:
    """Steady-state amplitudes p_j and normalized populations P_j.

    raw_excitation = sum |p_j|^2 at the supplied drive amplitudes;
    weak_excitation_ok flags whether it respects the weak-drive assumption
    (advisory: populations themselves are drive-scale-free).
    """

    amplitudes: np.ndarray
    populations: np.ndarray
    raw_excitation: float
    condition_estimate: float
    weak_excitation_ok: bool
    residual_norm: float


def solve_steady_state(
    matrix: CouplingMatrix,
    drive: np.ndarray,
    condition_limit: float = CONDITION_LIMIT,
    weak_excitation_limit: float = WEAK_EXCITATION_LIMIT,
) -> SteadyState:
    """Solve M p = i*drive using the matrix's LU factors.

    Raises SingularSystem when the condition estimate exceeds condition_limit
    or the factorization failed, which happens exactly at the excluded
    parameter points (e.g. reciprocal coupling with xi in {0, pi} and no
    non-guided decay).
    """
    drive = np.asarray(drive, dtype=complex)
    n = matrix.n_atoms
    if drive.shape != (n,):
        raise ValidationError(f"drive has shape {drive.shape}, expected ({n},)")
    if not np.isfinite(matrix.condition_estimate) or matrix.condition_estimate > condition_limit:
        raise SingularSystem(
            f"coupling matrix is singular to working precision "
            f"(condition estimate {matrix.condition_estimate:.3e} > {condition_limit:.0e}); "
            "the weak-drive steady state does not exist at this parameter point"
        )
    rhs = 1j * drive
    amplitudes, info = lapack.zgetrs(matrix.lu, matrix.piv, rhs)
    if info != 0:
        raise SingularSystem(f"LU back-substitution failed (info={info})")
    residual = float(np.linalg.norm(matrix.entries @ amplitudes - rhs))
    weights = np.abs(amplitudes) ** 2
    raw = float(weights.sum())
    populations = weights / raw if raw > 0.0 else np.zeros(n)
    return SteadyState(
        amplitudes=amplitudes,
        populations=populations,
        raw_excitation=raw,
        condition_estimate=matrix.condition_estimate,
        weak_excitation_ok=raw <= weak_excitation_limit,
        residual_norm=residual,
    )


def normalized_populations(amplitudes) -> np.ndarray:
    """Populations |p_j|^2 / sum |p_l|^2; raises ZeroExcitation on all-zero input."""
    if isinstance(amplitudes, SteadyState):
        amplitudes = amplitudes.amplitudes
    weights = np.abs(np.asarray(amplitudes, dtype=complex)) ** 2
    total = weights.sum()
    if total == 0.0:
        raise ZeroExcitation("all amplitudes vanish; populations are undefined")
    return weights / total
