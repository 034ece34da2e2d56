"""Physical configuration types and assembly of the coupling matrix and drive vector.

Conventions used throughout the package:

* Rates are expressed in units of the total guided decay rate gamma
  (gamma_left + gamma_right = gamma, default 1.0).
* Atom sites are 1-based in every public interface; atom 1 sits at the
  coordinate origin and k*x_j = (j-1)*xi.
* Angles are radians. theta is the incidence angle of the driving field at a
  given atom; normal incidence theta = pi/2 carries no travelling phase.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import lapack

from .errors import NearFieldWarning, ValidationError

# Below this interparticle phase the guided-mode-only description starts to
# miss near-field dipole corrections; computations proceed with a warning.
NEAR_FIELD_XI = 0.1 * math.pi

SCHEME_TAGS = ("uniform", "asymmetric", "defect", "custom")


def central_site(n_atoms: int) -> int:
    """1-based index of the central atom, ceil(N/2)."""
    return (n_atoms + 1) // 2


def _read_only(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ArrayGeometry:
    """Homogeneous 1D array of n_atoms emitters with interparticle phase xi = k*d."""

    n_atoms: int
    xi: float
    positions: np.ndarray = field(init=False, repr=False)  # k*x_j, length N

    def __post_init__(self):
        if not isinstance(self.n_atoms, (int, np.integer)) or self.n_atoms < 1:
            raise ValidationError(f"n_atoms must be a positive integer, got {self.n_atoms!r}")
        xi = float(self.xi)
        if not (0.0 < xi < 2.0 * math.pi):
            raise ValidationError(f"xi must lie strictly inside (0, 2*pi), got {self.xi!r}")
        if xi < NEAR_FIELD_XI:
            # static message so repeated builds (e.g. sweep cells) deduplicate
            warnings.warn(
                "xi below 0.1*pi: near-field corrections are not modelled, "
                "results may lose physical validity",
                NearFieldWarning,
                stacklevel=2,
            )
        object.__setattr__(self, "n_atoms", int(self.n_atoms))
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "positions", _read_only(np.arange(self.n_atoms) * xi))


def build_geometry(n_atoms: int, xi: float) -> ArrayGeometry:
    """Validated array geometry with k*x_j = (j-1)*xi."""
    return ArrayGeometry(n_atoms=n_atoms, xi=xi)


@dataclass(frozen=True)
class CouplingParams:
    """Waveguide coupling rates and detunings.

    directionality D = (gamma_right - gamma_left) / gamma_total; D = 0 is
    reciprocal, |D| = 1 unidirectional.  detunings may be a scalar
    (broadcast to every atom) or a length-N vector.
    """

    gamma_total: float = 1.0
    directionality: float = 0.0
    gamma_ng: float = 0.0
    detunings: float | Sequence[float] | np.ndarray = 0.0

    def __post_init__(self):
        if not self.gamma_total > 0.0:
            raise ValidationError(f"gamma_total must be positive, got {self.gamma_total!r}")
        if not -1.0 <= self.directionality <= 1.0:
            raise ValidationError(
                f"directionality must lie in [-1, 1], got {self.directionality!r}"
            )
        if self.gamma_ng < 0.0:
            raise ValidationError(f"gamma_ng must be non-negative, got {self.gamma_ng!r}")
        if isinstance(self.detunings, (Sequence, np.ndarray)):
            object.__setattr__(
                self, "detunings", _read_only(np.asarray(self.detunings, dtype=float))
            )

    @property
    def gamma_left(self) -> float:
        return self.gamma_total * (1.0 - self.directionality) / 2.0

    @property
    def gamma_right(self) -> float:
        return self.gamma_total * (1.0 + self.directionality) / 2.0

    def detunings_for(self, n_atoms: int) -> np.ndarray:
        """Per-atom detuning vector, broadcasting a scalar."""
        if isinstance(self.detunings, np.ndarray):
            if self.detunings.shape != (n_atoms,):
                raise ValidationError(
                    f"detunings has length {self.detunings.shape}, expected ({n_atoms},)"
                )
            return self.detunings
        return np.full(n_atoms, float(self.detunings))


def _check_angle(theta: float, name: str) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= math.pi:
        raise ValidationError(f"{name} must lie in [0, pi], got {theta!r}")
    return theta


@dataclass(frozen=True)
class DriveScheme:
    """Per-atom drive amplitudes Omega_j, phases phi_j, and incidence angles theta_j.

    The drive vector element is Omega_j * exp(i*(phi_j + k*x_j*cos(theta_j))).
    defect_sites lists undriven atoms (1-based); their amplitude is exactly 0.
    """

    rabi: np.ndarray
    phases: np.ndarray
    angles: np.ndarray
    scheme_tag: str = "custom"
    defect_sites: tuple[int, ...] = ()

    def __post_init__(self):
        rabi = np.asarray(self.rabi, dtype=float)
        phases = np.asarray(self.phases, dtype=float)
        angles = np.asarray(self.angles, dtype=float)
        n = rabi.shape[0] if rabi.ndim == 1 else -1
        for name, vec in (("rabi", rabi), ("phases", phases), ("angles", angles)):
            if vec.ndim != 1 or vec.shape[0] != n:
                raise ValidationError(f"{name} must be a length-N vector matching rabi")
        if self.scheme_tag not in SCHEME_TAGS:
            raise ValidationError(f"scheme_tag must be one of {SCHEME_TAGS}, got {self.scheme_tag!r}")
        if np.any(rabi < 0.0):
            raise ValidationError("rabi amplitudes must be non-negative")
        if np.any((angles < 0.0) | (angles > math.pi)):
            raise ValidationError("angles must lie in [0, pi]")
        sites = tuple(sorted(int(s) for s in self.defect_sites))
        if len(set(sites)) != len(sites):
            raise ValidationError(f"defect_sites contains duplicates: {sites}")
        for s in sites:
            if not 1 <= s <= n:
                raise ValidationError(f"defect site {s} outside [1, {n}]")
            if rabi[s - 1] != 0.0:
                raise ValidationError(f"rabi must vanish at defect site {s}")
        object.__setattr__(self, "rabi", _read_only(rabi))
        object.__setattr__(self, "phases", _read_only(phases))
        object.__setattr__(self, "angles", _read_only(angles))
        object.__setattr__(self, "defect_sites", sites)

    @property
    def n_atoms(self) -> int:
        return self.rabi.shape[0]


def make_uniform_scheme(geom: ArrayGeometry, theta: float, rabi_amp: float = 0.01) -> DriveScheme:
    """Every atom driven at the same angle; phases referenced to atom 1."""
    theta = _check_angle(theta, "theta")
    n = geom.n_atoms
    return DriveScheme(
        rabi=np.full(n, float(rabi_amp)),
        phases=np.zeros(n),
        angles=np.full(n, theta),
        scheme_tag="uniform",
    )


def make_asymmetric_scheme(
    geom: ArrayGeometry, theta1: float, theta2: float, rabi_amp: float = 0.01
) -> DriveScheme:
    """Two half-chains driven at theta1 (sites 1..m) and theta2 (sites m+1..N).

    m = ceil(N/2).  Phases are referenced to atom 1 at the origin, so
    phi_j = 0 for every atom.
    """
    theta1 = _check_angle(theta1, "theta1")
    theta2 = _check_angle(theta2, "theta2")
    n = geom.n_atoms
    m = central_site(n)
    angles = np.where(np.arange(1, n + 1) <= m, theta1, theta2)
    return DriveScheme(
        rabi=np.full(n, float(rabi_amp)),
        phases=np.zeros(n),
        angles=angles,
        scheme_tag="asymmetric",
    )


def _driven_segments(n: int, defect_sites: tuple[int, ...]) -> list[list[int]]:
    defects = set(defect_sites)
    segments: list[list[int]] = []
    current: list[int] = []
    for j in range(1, n + 1):
        if j in defects:
            if current:
                segments.append(current)
                current = []
        else:
            current.append(j)
    if current:
        segments.append(current)
    return segments


def make_defect_scheme(
    geom: ArrayGeometry,
    theta1: float,
    theta2: float,
    rabi_amp: float = 0.01,
    defect_sites: Iterable[int] | None = None,
) -> DriveScheme:
    """Remove the drive from selected atoms; remaining chains face each other.

    With a single defect at m the left chain (j < m) is driven at theta1 and
    the right chain (j > m) at pi - theta2, so for theta1 = theta2 the
    travelling-phase profile is symmetric about the undriven atom.  Each
    driven segment's phase is anchored to vanish at its reference atom: the
    leftmost segment at its rightmost atom, every other segment at its
    leftmost atom.  defect_sites defaults to the central atom.
    """
    theta1 = _check_angle(theta1, "theta1")
    theta2 = _check_angle(theta2, "theta2")
    n = geom.n_atoms
    if defect_sites is None:
        defect_sites = (central_site(n),)
    sites = tuple(sorted(int(s) for s in defect_sites))
    if not sites:
        raise ValidationError("defect scheme requires at least one defect site")
    for s in sites:
        if not 1 <= s <= n:
            raise ValidationError(f"defect site {s} outside [1, {n}]")

    rabi = np.full(n, float(rabi_amp))
    phases = np.zeros(n)
    angles = np.full(n, 0.5 * math.pi)
    for s in sites:
        rabi[s - 1] = 0.0
    for seg_index, segment in enumerate(_driven_segments(n, sites)):
        if seg_index == 0:
            theta_seg = theta1
            anchor = segment[-1]
        else:
            theta_seg = math.pi - theta2
            anchor = segment[0]
        for j in segment:
            angles[j - 1] = theta_seg
            phases[j - 1] = -geom.positions[anchor - 1] * math.cos(theta_seg)
    return DriveScheme(
        rabi=rabi, phases=phases, angles=angles, scheme_tag="defect", defect_sites=sites
    )


def make_custom_scheme(
    rabi: Sequence[float],
    phases: Sequence[float],
    angles: Sequence[float],
    defect_sites: Iterable[int] = (),
) -> DriveScheme:
    """Fully explicit scheme, e.g. for symmetry experiments."""
    return DriveScheme(
        rabi=np.asarray(rabi, dtype=float),
        phases=np.asarray(phases, dtype=float),
        angles=np.asarray(angles, dtype=float),
        scheme_tag="custom",
        defect_sites=tuple(defect_sites),
    )


@dataclass(frozen=True)
class CouplingMatrix:
    """Dense non-Hermitian coupling matrix with its LU factorization.

    entries[j, l] = -gamma_left  * exp(i*k*|x_j - x_l|)   for j < l,
                    -gamma_right * exp(i*k*|x_j - x_l|)   for j > l,
                    i*delta_j - (gamma_left + gamma_right + gamma_ng)/2 on the
    diagonal.  condition_estimate is the 1-norm condition number estimated on
    the factorization (inf when the factorization hit an exact zero pivot).
    """

    entries: np.ndarray
    condition_estimate: float
    lu: np.ndarray = field(repr=False)
    piv: np.ndarray = field(repr=False)

    @property
    def n_atoms(self) -> int:
        return self.entries.shape[0]


def build_coupling_matrix(geom: ArrayGeometry, cpl: CouplingParams) -> CouplingMatrix:
    """Assemble the coupling matrix and factorize it once."""
    n = geom.n_atoms
    delta = cpl.detunings_for(n)
    pos = geom.positions
    phase = np.exp(1j * np.abs(pos[:, None] - pos[None, :]))
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    entries = np.where(upper, -cpl.gamma_left * phase, -cpl.gamma_right * phase)
    np.fill_diagonal(
        entries, 1j * delta - (cpl.gamma_left + cpl.gamma_right + cpl.gamma_ng) / 2.0
    )

    anorm = float(np.abs(entries).sum(axis=0).max())
    lu, piv, info = lapack.zgetrf(entries)
    if info > 0:
        cond = math.inf
    else:
        rcond, _ = lapack.zgecon(lu, anorm, norm="1")
        cond = math.inf if rcond == 0.0 else 1.0 / float(rcond)
    return CouplingMatrix(
        entries=_read_only(entries), condition_estimate=cond, lu=lu, piv=piv
    )


def build_drive_vector(geom: ArrayGeometry, scheme: DriveScheme) -> np.ndarray:
    """Complex source vector Omega_j * exp(i*(phi_j + k*x_j*cos(theta_j)))."""
    if scheme.n_atoms != geom.n_atoms:
        raise ValidationError(
            f"scheme has {scheme.n_atoms} atoms, geometry has {geom.n_atoms}"
        )
    total_phase = scheme.phases + geom.positions * np.cos(scheme.angles)
    return scheme.rabi * np.exp(1j * total_phase)
