"""Trajectories of pure states under time-independent and driven Hamiltonians."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .core import (
    HermitianObservable,
    StateVector,
    _amplitudes,
    occupation_profile,
    spectral_decompose,
)
from .errors import DimensionError, GridError

TOL_CLOSURE = 1e-8
TOL_CLOSURE_INTEGRATED = 1e-5
MIN_STEP_FIDELITY = 0.5


class Schedule:
    """A Hamiltonian as a function of time."""

    dim: int

    def hamiltonian(self, t: float) -> np.ndarray:
        return self.hamiltonians(np.array([t]))[0]

    def hamiltonians(self, times: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def spectra(self, times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues (N, d) and eigenvectors (N, d, d) of H_t on a grid."""
        return np.linalg.eigh(self.hamiltonians(times))

    @property
    def is_constant(self) -> bool:
        return False


@dataclass(frozen=True)
class Constant(Schedule):
    H: HermitianObservable

    def __post_init__(self):
        object.__setattr__(self, "H", spectral_decompose(self.H))

    @property
    def dim(self) -> int:
        return self.H.dim

    @property
    def is_constant(self) -> bool:
        return True

    def hamiltonians(self, times):
        n = np.size(times)
        return np.broadcast_to(self.H.matrix, (n, self.dim, self.dim))

    def spectra(self, times):
        n = np.size(times)
        return (
            np.broadcast_to(self.H.eigenvalues, (n, self.dim)),
            np.broadcast_to(self.H.eigenvectors, (n, self.dim, self.dim)),
        )


@dataclass(frozen=True)
class RotatingFrame(Schedule):
    """H_t = exp(-iAt) H exp(iAt)."""

    A: HermitianObservable
    H: HermitianObservable

    def __post_init__(self):
        object.__setattr__(self, "A", spectral_decompose(self.A))
        object.__setattr__(self, "H", spectral_decompose(self.H))
        if self.A.dim != self.H.dim:
            raise DimensionError(f"A has dim {self.A.dim} but H has dim {self.H.dim}")

    @property
    def dim(self) -> int:
        return self.H.dim

    def _frames(self, times):
        w, a = self.A.eigenvectors, self.A.eigenvalues
        phases = np.exp(-1j * np.outer(times, a))
        return np.einsum("ij,nj,kj->nik", w, phases, w.conj())

    def hamiltonians(self, times):
        u = self._frames(np.asarray(times, dtype=float))
        return u @ self.H.matrix @ np.swapaxes(u.conj(), 1, 2)

    def spectra(self, times):
        # the spectrum is rigid: rotate the eigenvectors of H
        u = self._frames(np.asarray(times, dtype=float))
        n = np.size(times)
        return np.broadcast_to(self.H.eigenvalues, (n, self.dim)), u @ self.H.eigenvectors


@dataclass(frozen=True)
class Sampled(Schedule):
    """Piecewise-linear interpolation of Hamiltonian samples.

    Outside the sampled window the first or last sample is held constant.
    """

    times: np.ndarray
    matrices: np.ndarray

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        mats = np.array([spectral_decompose(m).matrix for m in self.matrices])
        if times.ndim != 1 or len(times) != len(mats) or len(times) == 0:
            raise GridError("need one Hamiltonian sample per sample time")
        if np.any(np.diff(times) <= 0):
            raise GridError("sample times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "matrices", mats)

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def hamiltonians(self, times):
        times = np.clip(np.asarray(times, dtype=float), self.times[0], self.times[-1])
        if len(self.times) == 1:
            return np.broadcast_to(self.matrices[0], (times.size, self.dim, self.dim))
        k = np.clip(np.searchsorted(self.times, times, side="right") - 1, 0, len(self.times) - 2)
        frac = (times - self.times[k]) / (self.times[k + 1] - self.times[k])
        return (1 - frac)[:, None, None] * self.matrices[k] + frac[:, None, None] * self.matrices[k + 1]


HamiltonianSchedule = Union[Constant, RotatingFrame, Sampled]


@dataclass(frozen=True)
class Trajectory:
    """Sampled lift of a state curve: ``states[k]`` is the vector at ``times[k]``."""

    times: np.ndarray
    states: np.ndarray
    schedule: Optional[Schedule] = field(default=None, compare=False)

    def __post_init__(self):
        times = np.array(self.times, dtype=float).reshape(-1)
        states = np.array(self.states, dtype=complex)
        if states.ndim != 2 or states.shape[0] != times.size:
            raise GridError(f"{times.size} times but states of shape {states.shape}")
        if times.size == 0:
            raise GridError("empty trajectory")
        if np.any(np.diff(times) <= 0):
            raise GridError("times must be strictly increasing")
        norms = np.linalg.norm(states, axis=1)
        if np.any(np.abs(norms - 1) > 1e-10):
            raise ValueError(f"states are not unit vectors (worst norm {norms[np.argmax(np.abs(norms - 1))]})")
        if self.schedule is not None and self.schedule.dim != states.shape[1]:
            raise DimensionError("schedule and states have different dimensions")
        for a in (times, states):
            a.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return self.times.size

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def tau(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def initial(self) -> StateVector:
        return StateVector(self.states[0])

    @property
    def final(self) -> StateVector:
        return StateVector(self.states[-1])

    def step_overlaps(self) -> np.ndarray:
        """<psi_k|psi_{k+1}> for every segment."""
        return np.einsum("ij,ij->i", self.states[:-1].conj(), self.states[1:])

    def step_fidelities(self) -> np.ndarray:
        return np.abs(self.step_overlaps()) ** 2

    def check_resolved(self, min_fidelity: float = MIN_STEP_FIDELITY):
        fids = self.step_fidelities()
        if fids.size and fids.min() <= min_fidelity:
            k = int(np.argmin(fids))
            raise GridError(
                f"grid too coarse: fidelity {fids[k]:.3f} between t={self.times[k]:.6g} "
                f"and t={self.times[k + 1]:.6g}"
            )

    def with_states(self, states: np.ndarray) -> "Trajectory":
        return Trajectory(self.times, states, self.schedule)


def uniform_grid(tau: float, steps: int) -> np.ndarray:
    return np.linspace(0.0, tau, int(steps) + 1)


def spectral_width(sched: Schedule, times=None) -> float:
    """Largest eigenvalue spread of H_t, sampled at ``times`` (default t=0)."""
    if isinstance(sched, Sampled):
        times = sched.times
    elif times is None or sched.is_constant or isinstance(sched, RotatingFrame):
        times = np.zeros(1)
    evals, _ = sched.spectra(np.asarray(times, dtype=float))
    return float(np.max(evals[:, -1] - evals[:, 0]))


def resolved_steps(sched: Schedule, tau: float, steps_per_cycle: int = 4000) -> int:
    """Even step count giving ``steps_per_cycle`` steps per cycle of the
    fastest Bohr frequency, and never fewer than ``steps_per_cycle``."""
    cycles = spectral_width(sched) * tau / (2 * np.pi)
    steps = max(int(steps_per_cycle), int(np.ceil(steps_per_cycle * cycles)))
    return steps + steps % 2


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float).reshape(-1)
    if grid.size == 0 or grid[0] != 0.0:
        raise GridError("time grid must start at 0")
    if not np.all(np.isfinite(grid)):
        raise GridError("time grid contains non-finite values")
    if np.any(np.diff(grid) <= 0):
        raise GridError("time grid must be strictly increasing")
    return grid


def evolve_constant(H, psi0, t: float) -> StateVector:
    """Apply exp(-iHt) to ``psi0`` using the eigendecomposition of H."""
    h = spectral_decompose(H)
    amps = _amplitudes(psi0)
    if h.dim != amps.size:
        raise DimensionError(f"H has dim {h.dim} but state has dim {amps.size}")
    if not np.isfinite(t):
        raise ValueError("evolution time must be finite")
    return StateVector(h.exp_i(t) @ amps)


def _evolve_exact(h: HermitianObservable, amps: np.ndarray, grid: np.ndarray) -> np.ndarray:
    coeffs = h.eigenvectors.conj().T @ amps
    phases = np.exp(-1j * np.outer(grid, h.eigenvalues))
    return (phases * coeffs) @ h.eigenvectors.T


def _evolve_midpoint(sched: Schedule, amps: np.ndarray, grid: np.ndarray) -> np.ndarray:
    dt = np.diff(grid)
    evals, evecs = sched.spectra(0.5 * (grid[:-1] + grid[1:]))
    props = np.einsum("nij,nj,nkj->nik", evecs, np.exp(-1j * evals * dt[:, None]), evecs.conj())
    states = np.empty((grid.size, amps.size), dtype=complex)
    states[0] = amps
    psi = amps
    for k, u in enumerate(props):
        nxt = u @ psi
        nxt /= np.linalg.norm(nxt)
        if abs(np.vdot(psi, nxt)) ** 2 <= MIN_STEP_FIDELITY:
            raise GridError(f"grid too coarse at step {k} (t={grid[k]:.6g})")
        states[k + 1] = psi = nxt
    return states


def evolve_schedule(sched: Schedule, psi0, grid, method: str = "auto") -> Trajectory:
    """Propagate ``psi0`` over ``grid`` under a Hamiltonian schedule.

    Constant schedules are evolved exactly through the spectral decomposition.
    Time-dependent schedules use the exponential midpoint rule
    ``U_k = exp(-i H((t_k + t_{k+1})/2) dt_k)``, which is unitary per step and
    second order in the step size. ``method="midpoint"`` forces the
    integrator for constant schedules too.

    Raises:
        GridError: if the grid does not start at 0, is not increasing, or is
            too coarse to resolve the motion (consecutive fidelity <= 0.5).
    """
    grid = _check_grid(grid)
    amps = _amplitudes(psi0)
    if sched.dim != amps.size:
        raise DimensionError(f"schedule has dim {sched.dim} but state has dim {amps.size}")
    if method not in ("auto", "exact", "midpoint"):
        raise ValueError(f"unknown method {method!r}")
    if method == "exact" and not sched.is_constant:
        raise ValueError("exact evolution is only available for constant schedules")
    if grid.size == 1:
        states = amps[None, :]
    elif sched.is_constant and method != "midpoint":
        states = _evolve_exact(sched.H, amps, grid)
    else:
        states = _evolve_midpoint(sched, amps, grid)
    traj = Trajectory(grid, states, sched)
    traj.check_resolved()
    return traj


def closure_defect(traj: Trajectory) -> float:
    """1 - |<psi_0|psi_tau>|^2."""
    ov = np.vdot(traj.states[0], traj.states[-1])
    return float(min(max(1.0 - abs(ov) ** 2, 0.0), 1.0))


class _Stationary:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "STATIONARY"


STATIONARY = _Stationary()


def find_period(H, psi0, t_max: float, tol: float = TOL_CLOSURE):
    """Smallest t in (0, t_max] at which the state returns to itself.

    Returns the period as a float, ``None`` if no recurrence with closure
    defect below ``tol`` is found, or :data:`STATIONARY` if ``psi0`` occupies
    a single energy level.

    The search scans the closure defect at 20 samples per cycle of the
    fastest occupied Bohr frequency, then bisects the sign change of its
    derivative inside every local minimum of the scan.
    """
    if not t_max > 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    profile = occupation_profile(H, psi0)
    if profile.n_occupied == 1:
        return STATIONARY
    energies = profile.energies - profile.expected_energy
    weights = profile.occupations

    def overlap(t):
        return np.exp(-1j * np.multiply.outer(t, energies)) @ weights

    def slope(t):
        # d/dt of 1 - |f|^2
        ph = np.exp(-1j * energies * t)
        f = ph @ weights
        df = (-1j * energies * ph) @ weights
        return -2.0 * np.real(np.conj(f) * df)

    omega_max = energies[-1] - energies[0]
    dt = 2 * np.pi / omega_max / 20
    n = int(np.ceil(t_max / dt)) + 2
    ts = np.arange(n + 1) * dt
    defect = 1.0 - np.abs(overlap(ts)) ** 2
    for i in range(1, n):
        if not (defect[i] <= defect[i - 1] and defect[i] <= defect[i + 1]):
            continue
        lo, hi = ts[i - 1], ts[i + 1]
        if slope(lo) >= 0 or slope(hi) <= 0:
            t = ts[i]
        else:
            while hi - lo > 1e-10 * hi:
                mid = 0.5 * (lo + hi)
                if slope(mid) < 0:
                    lo = mid
                else:
                    hi = mid
            t = 0.5 * (lo + hi)
        if t > t_max * (1 + 1e-12):
            break
        if 1.0 - abs(overlap(t)) ** 2 < tol:
            return float(t)
    return None
