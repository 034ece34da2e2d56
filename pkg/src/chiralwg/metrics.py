"""Localization diagnostics: IPR, interfaced IPR, and interface-edge contrast.

All metrics operate on normalized population vectors.  The excess population
of site j is dP_j = (P_j - 1/N) when P_j > 1/N and 0 otherwise (strict
inequality).  Then

    IPR  = sum_j dP_j^2 / (sum_j dP_j)^2          -> 1 single-site, 1/N uniform
    IIPR = sum_{j in interface} dP_j^2 / (sum_j dP_j)^2
    RIEL = (P_interface - P_edge) / sum_j P_j      in [-1, 1]

with P_edge = P_1 + P_N.  Site indices are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import OverlappingSets, ValidationError
from .model import DriveScheme, central_site

UNIFORM_EPS = 1e-14


@dataclass(frozen=True)
class MetricSet:
    ipr: float
    iipr: float
    riel: float  # NaN when interface and edge sets overlap (N < 4)
    p_interface: float
    p_edge: float
    p_defect: float
    interface_indices: tuple[int, ...]


def excess_population(populations: np.ndarray) -> np.ndarray:
    p = np.asarray(populations, dtype=float)
    return np.maximum(p - 1.0 / p.shape[0], 0.0)


def compute_ipr(populations: np.ndarray) -> float:
    """Inverse participation ratio of the excess-population vector.

    Exactly uniform input is the degenerate 0/0 case and returns the
    delocalized limit 1/N by convention.
    """
    dp = excess_population(populations)
    total = dp.sum()
    if total < UNIFORM_EPS:
        return 1.0 / dp.shape[0]
    return float((dp**2).sum() / total**2)


def _check_indices(indices: tuple[int, ...], n: int) -> tuple[int, ...]:
    indices = tuple(int(i) for i in indices)
    if not indices:
        raise ValidationError("interface index set must not be empty")
    if len(set(indices)) != len(indices):
        raise ValidationError(f"interface indices contain duplicates: {indices}")
    for i in indices:
        if not 1 <= i <= n:
            raise ValidationError(f"interface index {i} outside [1, {n}]")
    return indices


def compute_iipr(populations: np.ndarray, interface_indices: Iterable[int]) -> float:
    """IPR numerator restricted to the interface sites (same denominator)."""
    dp = excess_population(populations)
    n = dp.shape[0]
    indices = _check_indices(tuple(interface_indices), n)
    total = dp.sum()
    if total < UNIFORM_EPS:
        return len(indices) / n**2
    sel = np.array(indices) - 1
    return float((dp[sel] ** 2).sum() / total**2)


def interface_sites(scheme: DriveScheme) -> tuple[int, ...]:
    """Interface site set implied by a drive scheme.

    Asymmetric: the two atoms across the chain boundary, {m, m+1}.  Defect
    schemes: every defect site plus its driven nearest neighbours.  Uniform
    and custom schemes have no natural interface and default to {m, m+1}.
    """
    n = scheme.n_atoms
    if scheme.defect_sites:
        defects = set(scheme.defect_sites)
        sites = set(defects)
        for d in defects:
            for nb in (d - 1, d + 1):
                if 1 <= nb <= n and nb not in defects:
                    sites.add(nb)
        return tuple(sorted(sites))
    m = central_site(n)
    return (m, m + 1) if m + 1 <= n else (m,)


def compute_riel(populations: np.ndarray, scheme: DriveScheme) -> float:
    """Interface-edge localization contrast in [-1, 1].

    Raises OverlappingSets when the interface set touches the edge atoms
    (arrays too small to separate the two regions).
    """
    p = np.asarray(populations, dtype=float)
    interface = interface_sites(scheme)
    return _riel_from_sets(p, interface)


def _riel_from_sets(p: np.ndarray, interface: tuple[int, ...]) -> float:
    n = p.shape[0]
    edges = (1, n)
    overlap = set(interface) & set(edges)
    if overlap:
        raise OverlappingSets(
            f"interface sites {sorted(interface)} intersect edge sites {edges} at {sorted(overlap)}"
        )
    sel = np.array(interface) - 1
    p_interface = float(p[sel].sum())
    p_edge = float(p[0] + p[-1])
    return (p_interface - p_edge) / float(p.sum())


def compute_metrics(populations: np.ndarray, scheme: DriveScheme) -> MetricSet:
    """All localization diagnostics for one steady state."""
    p = np.asarray(populations, dtype=float)
    n = p.shape[0]
    interface = interface_sites(scheme)
    sel = np.array(interface) - 1
    p_interface = float(p[sel].sum())
    p_edge = float(p[0] + p[-1])
    if scheme.defect_sites:
        p_defect = float(sum(p[d - 1] for d in scheme.defect_sites))
    else:
        p_defect = 0.0
    try:
        riel = _riel_from_sets(p, interface)
    except OverlappingSets:
        riel = float("nan")
    return MetricSet(
        ipr=compute_ipr(p),
        iipr=compute_iipr(p, interface),
        riel=riel,
        p_interface=p_interface,
        p_edge=p_edge,
        p_defect=p_defect,
        interface_indices=interface,
    )
