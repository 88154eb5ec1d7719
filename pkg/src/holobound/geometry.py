"""Geometric phase and Fubini-Study length of sampled state curves.

The connection is evaluated segment by segment from overlaps of consecutive
states, ``-arg<psi_k|psi_{k+1}>``, which is invariant under pointwise phase
changes of the lift up to a boundary term that cancels against the endpoint
overlap. Phases are reported as their representative in ``[0, 2*pi)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import bloch_vectors
from .errors import GridError, OpenCurveError
from .evolution import (
    MIN_STEP_FIDELITY,
    TOL_CLOSURE,
    TOL_CLOSURE_INTEGRATED,
    Trajectory,
    closure_defect,
)

TWO_PI = 2 * np.pi
# phases this close below 2*pi are reported as 0
TOL_WRAP = 1e-9


def reduce_phase(x: float, tol_wrap: float = TOL_WRAP) -> float:
    """Representative of ``x`` mod 2*pi in [0, 2*pi)."""
    r = float(np.mod(x, TWO_PI))
    if r >= TWO_PI - tol_wrap:
        r = 0.0
    return r


def phase_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle."""
    d = np.mod(a - b, TWO_PI)
    return float(min(d, TWO_PI - d))


def default_closure_tol(traj: Trajectory) -> float:
    """Closure tolerance matching how the trajectory was produced."""
    if traj.schedule is not None and not traj.schedule.is_constant:
        return TOL_CLOSURE_INTEGRATED
    return TOL_CLOSURE


@dataclass(frozen=True)
class PhaseResult:
    theta: float
    connection_integral: float
    endpoint_arg: float
    closure_defect: float


def _segment_args(traj: Trajectory) -> np.ndarray:
    if len(traj) < 2:
        raise GridError("need at least two samples")
    ov = traj.step_overlaps()
    fid = np.abs(ov) ** 2
    if fid.min() <= MIN_STEP_FIDELITY:
        raise GridError(f"consecutive fidelity {fid.min():.3f} too small to follow the phase")
    return np.angle(ov)


def connection_integral(traj: Trajectory, extrapolate: bool = False) -> float:
    """Integral of i<psi|dpsi/dt> along the sampled lift.

    The segment sum is second order in the step size. With
    ``extrapolate=True`` it is combined with the sum over every other sample,
    ``(4 S_h - S_2h) / 3``, which cancels the leading error term; this needs an
    even number of segments.
    """
    total = -np.sum(_segment_args(traj))
    if not extrapolate:
        return float(total)
    if (len(traj) - 1) % 2:
        raise GridError("extrapolation needs an even number of segments")
    coarse = -np.sum(_segment_args(Trajectory(traj.times[::2], traj.states[::2])))
    return float((4 * total - coarse) / 3)


def aa_phase(
    traj: Trajectory, tol_closure: float | None = None, extrapolate: bool = False
) -> PhaseResult:
    """Aharonov-Anandan phase of a closed trajectory.

    Raises:
        OpenCurveError: if the closure defect exceeds ``tol_closure``
            (default: 1e-8 for exact trajectories, 1e-5 for integrated ones).
    """
    if tol_closure is None:
        tol_closure = default_closure_tol(traj)
    defect = closure_defect(traj)
    if defect >= tol_closure:
        raise OpenCurveError(defect, tol_closure)
    if len(traj) == 1:
        return PhaseResult(0.0, 0.0, 0.0, defect)
    conn = connection_integral(traj, extrapolate)
    end = float(np.angle(np.vdot(traj.states[0], traj.states[-1])))
    return PhaseResult(reduce_phase(end + conn), conn, end, defect)


def horizontalize(traj: Trajectory) -> Trajectory:
    """Rephase every sample so the lift becomes horizontal.

    After the correction each overlap ``<psi'_k|psi'_{k+1}>`` is real and
    positive, and ``arg<psi'_0|psi'_tau>`` is the geometric phase.
    """
    args = _segment_args(traj)
    cumulative = np.concatenate([[0.0], -np.cumsum(args)])
    return traj.with_states(traj.states * np.exp(1j * cumulative)[:, None])


def _uncertainties(traj: Trajectory) -> np.ndarray:
    h = traj.schedule.hamiltonians(traj.times)
    hpsi = np.einsum("nij,nj->ni", h, traj.states)
    mean = np.real(np.einsum("ni,ni->n", traj.states.conj(), hpsi))
    # norm of the component of H psi orthogonal to psi
    return np.linalg.norm(hpsi - mean[:, None] * traj.states, axis=1)


def energy_uncertainties(traj: Trajectory) -> np.ndarray:
    """Delta H_t at every sample; needs a schedule."""
    if traj.schedule is None:
        raise ValueError("trajectory has no Hamiltonian schedule attached")
    return _uncertainties(traj)


def segment_distances(traj: Trajectory) -> np.ndarray:
    """Fubini-Study distance arccos|<psi_k|psi_{k+1}>| of every segment."""
    a, b = traj.states[:-1], traj.states[1:]
    ov = np.einsum("ij,ij->i", a.conj(), b)
    perp = np.linalg.norm(b - ov[:, None] * a, axis=1)
    # atan2 form stays accurate for nearly parallel states
    return np.arctan2(perp, np.abs(ov))


def fs_length(traj: Trajectory, method: str = "auto") -> float:
    """Fubini-Study length of the curve.

    ``method="quadrature"`` integrates the energy uncertainty with the
    trapezoid rule (needs a schedule); ``method="geodesic"`` sums the
    distances between consecutive samples. ``"auto"`` prefers quadrature.
    """
    if len(traj) < 2:
        raise GridError("need at least two samples")
    if method == "auto":
        method = "quadrature" if traj.schedule is not None else "geodesic"
    if method == "quadrature":
        return float(np.trapezoid(energy_uncertainties(traj), traj.times))
    if method == "geodesic":
        return float(np.sum(segment_distances(traj)))
    raise ValueError(f"unknown method {method!r}")


def fs_speeds(traj: Trajectory) -> np.ndarray:
    """Finite-difference Fubini-Study speed at the segment midpoints."""
    return segment_distances(traj) / np.diff(traj.times)


def length_lower_bound_value(theta: float) -> float:
    return float(np.sqrt(max(theta * (TWO_PI - theta), 0.0)))


def oriented_solid_angle(points: np.ndarray) -> float:
    """Signed area enclosed by a closed polygon on the unit sphere.

    The polygon is closed implicitly from the last point back to the first.
    The area lies to the left of the direction of traversal and is returned
    modulo 4*pi in [0, 4*pi).
    """
    p = np.asarray(points, dtype=float)
    p = p / np.linalg.norm(p, axis=1, keepdims=True)
    candidates = np.vstack([np.eye(3), -np.eye(3)])
    # apex as far from the curve as possible keeps each triangle well conditioned
    apex = candidates[np.argmin(np.max(candidates @ p.T, axis=1))]
    a, b = p, np.roll(p, -1, axis=0)
    num = np.einsum("j,ij->i", apex, np.cross(a, b))
    den = 1.0 + a @ apex + b @ apex + np.einsum("ij,ij->i", a, b)
    total = 2.0 * np.sum(np.arctan2(num, den))
    return float(np.mod(total, 4 * np.pi))


def bloch_solid_angle_phase(traj: Trajectory) -> float:
    """Geometric phase of a closed qubit loop from its Bloch-sphere area."""
    omega = oriented_solid_angle(bloch_vectors(traj.states))
    return reduce_phase(TWO_PI - omega / 2)
