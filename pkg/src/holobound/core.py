"""Pure states, Hermitian observables and the spectral bookkeeping around them.

Units are such that hbar = 1, so energies and angular frequencies coincide.
The Pauli operators follow the convention

    sigma_x = |0><1| + |1><0|
    sigma_y = i(|0><1| - |1><0|)
    sigma_z = |1><1| - |0><0|

so |0> sits at the south pole of the Bloch sphere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, NonHermitianError

TOL_NORM = 1e-12
TOL_HERMITIAN = 1e-10
TOL_DEGENERATE = 1e-9
TOL_OCC = 1e-10
TOL_EQ = 1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def _amplitudes(psi) -> np.ndarray:
    # raw arrays are validated and normalized like any other state
    if isinstance(psi, StateVector):
        return psi.amplitudes
    return StateVector(psi).amplitudes


def _matrix(obs) -> np.ndarray:
    if isinstance(obs, HermitianObservable):
        return obs.matrix
    return np.asarray(obs, dtype=complex)


@dataclass(frozen=True)
class StateVector:
    """Unit vector in a finite-dimensional Hilbert space.

    The amplitudes are renormalized on construction. A zero vector or a
    one-dimensional space is rejected.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 2:
            raise DimensionError(f"state dimension must be >= 2, got {amps.size}")
        norm = np.linalg.norm(amps)
        if not np.isfinite(norm) or norm == 0.0:
            raise ValueError("cannot normalize a zero or non-finite vector")
        amps = amps / norm
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def overlap(self, other) -> complex:
        """Return <self|other>."""
        return complex(np.vdot(self.amplitudes, _amplitudes(other)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True)
class Projector:
    """Rank-one orthogonal projector |psi><psi| representing a pure state."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"projector must be square, got shape {m.shape}")
        if not (
            np.allclose(m, m.conj().T, atol=1e-10, rtol=0)
            and np.allclose(m @ m, m, atol=1e-10, rtol=0)
            and abs(np.trace(m) - 1) < 1e-10
        ):
            raise ValueError("matrix is not a rank-one orthogonal projector")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_state(cls, psi) -> "Projector":
        amps = _amplitudes(psi)
        return cls(np.outer(amps, amps.conj()))


@dataclass(frozen=True)
class HermitianObservable:
    """Hermitian matrix together with its eigendecomposition.

    Eigenvalues are ascending and eigenvectors are stored as the columns of
    ``eigenvectors``. Build instances with :func:`spectral_decompose`.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def levels(self, tol_degenerate: float = TOL_DEGENERATE) -> list[np.ndarray]:
        """Group eigenvalue indices into (near-)degenerate clusters."""
        return _group_levels(self.eigenvalues, tol_degenerate)

    def exp_i(self, t: float) -> np.ndarray:
        """Return the unitary exp(-i t H)."""
        v = self.eigenvectors
        return (v * np.exp(-1j * self.eigenvalues * t)) @ v.conj().T


def spectral_decompose(obs, tol: float = TOL_HERMITIAN) -> HermitianObservable:
    """Diagonalize a Hermitian matrix.

    Raises:
        NonHermitianError: if any entry of ``obs - obs^dagger`` exceeds ``tol``
            in magnitude. The largest asymmetry is attached to the exception.
    """
    if isinstance(obs, HermitianObservable):
        return obs
    m = np.array(obs, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    asym = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if asym > tol:
        raise NonHermitianError(asym)
    m = 0.5 * (m + m.conj().T)
    evals, evecs = np.linalg.eigh(m)
    for a in (m, evals, evecs):
        a.setflags(write=False)
    return HermitianObservable(m, evals, evecs)


def _group_levels(evals: np.ndarray, tol: float) -> list[np.ndarray]:
    # evals ascending; a gap larger than tol starts a new level
    breaks = np.nonzero(np.diff(evals) > tol)[0] + 1
    return np.split(np.arange(evals.size), breaks)


def _check_dims(h: HermitianObservable, amps: np.ndarray):
    if h.dim != amps.size:
        raise DimensionError(f"observable has dim {h.dim} but state has dim {amps.size}")


def expectation(obs, psi) -> float:
    """<psi|H|psi> for a normalized state."""
    m = _matrix(obs)
    amps = _amplitudes(psi)
    if m.shape[0] != amps.size:
        raise DimensionError(f"observable has dim {m.shape[0]} but state has dim {amps.size}")
    return float(np.real(np.vdot(amps, m @ amps)))


def variance(obs, psi) -> float:
    """||(H - <H>) psi||^2, which avoids the cancellation in <H^2> - <H>^2."""
    m = _matrix(obs)
    amps = _amplitudes(psi)
    if m.shape[0] != amps.size:
        raise DimensionError(f"observable has dim {m.shape[0]} but state has dim {amps.size}")
    h_psi = m @ amps
    mean = np.real(np.vdot(amps, h_psi))
    return float(np.linalg.norm(h_psi - mean * amps) ** 2)


def uncertainty(obs, psi) -> float:
    return float(np.sqrt(variance(obs, psi)))


@dataclass(frozen=True)
class OccupationProfile:
    """Occupied energy levels of a state relative to a Hamiltonian.

    ``eps_bar`` is the largest occupied level strictly below the expected
    energy and ``eps_underbar`` the smallest one strictly above it; either is
    ``None`` when no such level exists.
    """

    levels: tuple[tuple[float, float], ...]
    expected_energy: float
    eps_bar: Optional[float]
    eps_underbar: Optional[float]
    eps_min: float
    eps_max: float

    @property
    def n_occupied(self) -> int:
        return len(self.levels)

    @property
    def is_stationary(self) -> bool:
        return self.eps_bar is None or self.eps_underbar is None

    @property
    def energies(self) -> np.ndarray:
        return np.array([e for e, _ in self.levels])

    @property
    def occupations(self) -> np.ndarray:
        return np.array([p for _, p in self.levels])

    def gap_below(self) -> Optional[float]:
        """<H - eps_bar>, or None if eps_bar is missing."""
        return None if self.eps_bar is None else self.expected_energy - self.eps_bar

    def gap_above(self) -> Optional[float]:
        """<eps_underbar - H>, or None if eps_underbar is missing."""
        return None if self.eps_underbar is None else self.eps_underbar - self.expected_energy

    def bhatia_davies(self) -> float:
        """<H - eps_min><eps_max - H>, an upper bound on the energy variance."""
        e = self.expected_energy
        return max((e - self.eps_min) * (self.eps_max - e), 0.0)


def occupation_profile(
    H,
    psi,
    tol_occ: float = TOL_OCC,
    tol_eq: float = TOL_EQ,
    tol_degenerate: float = TOL_DEGENERATE,
) -> OccupationProfile:
    h = spectral_decompose(H)
    amps = _amplitudes(psi)
    _check_dims(h, amps)
    weights = np.abs(h.eigenvectors.conj().T @ amps) ** 2
    levels = []
    for idx in h.levels(tol_degenerate):
        occ = float(weights[idx].sum())
        if occ > tol_occ:
            levels.append((float(h.eigenvalues[idx].mean()), occ))
    energy = expectation(h.matrix, amps)
    below = [e for e, _ in levels if e < energy - tol_eq]
    above = [e for e, _ in levels if e > energy + tol_eq]
    return OccupationProfile(
        levels=tuple(levels),
        expected_energy=energy,
        eps_bar=max(below) if below else None,
        eps_underbar=min(above) if above else None,
        eps_min=levels[0][0],
        eps_max=levels[-1][0],
    )


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    @property
    def polar_angle(self) -> float:
        return float(np.arccos(np.clip(self.z / self.norm, -1.0, 1.0)))


@dataclass(frozen=True)
class RabiVector(BlochVector):
    pass


def _pauli_traces(m: np.ndarray) -> tuple[float, float, float]:
    return tuple(float(np.real(np.trace(m @ s))) for s in PAULIS)


def bloch_vector(psi) -> BlochVector:
    """(tr(rho sx), tr(rho sy), tr(rho sz)) of a qubit state."""
    amps = _amplitudes(psi)
    if amps.size != 2:
        raise DimensionError(f"Bloch vectors need a qubit, got dim {amps.size}")
    return BlochVector(*_pauli_traces(np.outer(amps, amps.conj())))


def bloch_vectors(states: np.ndarray) -> np.ndarray:
    """Vectorized Bloch map for an (N, 2) array of qubit states."""
    states = np.asarray(states)
    if states.ndim != 2 or states.shape[1] != 2:
        raise DimensionError(f"expected an (N, 2) array of qubit states, got {states.shape}")
    a, b = states[:, 0], states[:, 1]
    cross = a.conj() * b
    return np.stack(
        [2 * cross.real, -2 * cross.imag, np.abs(b) ** 2 - np.abs(a) ** 2], axis=1
    )


def rabi_vector(H) -> RabiVector:
    """(tr(H sx), tr(H sy), tr(H sz)) of a qubit Hamiltonian."""
    m = _matrix(H)
    if m.shape != (2, 2):
        raise DimensionError(f"Rabi vectors need a qubit Hamiltonian, got shape {m.shape}")
    return RabiVector(*_pauli_traces(m))


def qubit_state(polar: float, azimuth: float = 0.0) -> StateVector:
    """Pure qubit state whose Bloch vector has the given spherical angles."""
    return StateVector([np.sin(polar / 2), np.cos(polar / 2) * np.exp(-1j * azimuth)])


def qubit_hamiltonian(rabi: Sequence[float], trace: float = 0.0) -> np.ndarray:
    """Qubit Hamiltonian (trace*I + rabi . sigma)/2 with the given Rabi vector."""
    m = trace * np.eye(2, dtype=complex)
    for r, s in zip(rabi, PAULIS):
        m = m + r * s
    return m / 2


def instantaneous_profiles(
    eigenvalues: np.ndarray,
    eigenvectors: np.ndarray,
    states: np.ndarray,
    tol_occ: float = TOL_OCC,
    tol_eq: float = TOL_EQ,
    tol_degenerate: float = TOL_DEGENERATE,
) -> dict[str, np.ndarray]:
    """Vectorized occupation analysis along a trajectory.

    Args:
        eigenvalues: (N, d) ascending eigenvalues of H_t at each sample.
        eigenvectors: (N, d, d) matching eigenvectors (columns).
        states: (N, d) state vectors.

    Returns:
        Arrays of length N keyed by ``energy``, ``variance``, ``eps_min``,
        ``eps_max``, ``eps_bar`` and ``eps_underbar``. Missing levels are NaN.
    """
    weights = np.abs(np.einsum("nji,nj->ni", eigenvectors.conj(), states)) ** 2
    energy = np.sum(weights * eigenvalues, axis=1)
    var = np.sum(weights * (eigenvalues - energy[:, None]) ** 2, axis=1)
    new_level = np.diff(eigenvalues, axis=1) > tol_degenerate
    gid = np.concatenate(
        [np.zeros((eigenvalues.shape[0], 1), dtype=int), np.cumsum(new_level, axis=1)], axis=1
    )
    same = gid[:, :, None] == gid[:, None, :]
    level_occ = np.einsum("nij,nj->ni", same, weights)
    occupied = level_occ > tol_occ
    inf = np.inf
    ev = eigenvalues
    eps_min = np.min(np.where(occupied, ev, inf), axis=1)
    eps_max = np.max(np.where(occupied, ev, -inf), axis=1)
    below = occupied & (ev < energy[:, None] - tol_eq)
    above = occupied & (ev > energy[:, None] + tol_eq)
    eps_bar = np.max(np.where(below, ev, -inf), axis=1)
    eps_under = np.min(np.where(above, ev, inf), axis=1)
    eps_bar[~np.isfinite(eps_bar)] = np.nan
    eps_under[~np.isfinite(eps_under)] = np.nan
    return {
        "energy": energy,
        "variance": var,
        "eps_min": eps_min,
        "eps_max": eps_max,
        "eps_bar": eps_bar,
        "eps_underbar": eps_under,
    }
