"""Lower bounds on the time needed to generate a geometric phase.

Three estimates are evaluated for a closed evolution of duration ``tau``
carrying the phase ``theta``:

* the Margolus-Levitin type bound
  ``max(theta/<H - eps_bar>, (2pi - theta)/<eps_underbar - H>)``, valid for
  time-independent Hamiltonians;
* the Mandelstam-Tamm type bound ``sqrt(theta(2pi - theta)) / <<dH>>``;
* the Bhatia-Davies type bound, which replaces ``<<dH>>`` by the time average
  of ``sqrt(<H - eps_min><eps_max - H>)``.

``<<.>>`` denotes a time average over ``[0, tau]``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .core import OccupationProfile, instantaneous_profiles, occupation_profile
from .errors import StationaryStateError
from .evolution import Trajectory
from .geometry import aa_phase, energy_uncertainties, fs_length, length_lower_bound_value

TWO_PI = 2 * math.pi
TOL_BOUND = 1e-6


def _check_theta(theta: float):
    if not 0.0 <= theta < TWO_PI:
        raise ValueError(f"theta must lie in [0, 2*pi), got {theta}")


def ml_bound(profile: OccupationProfile, theta: float) -> tuple[float, tuple[float, float]]:
    """Margolus-Levitin type bound and its two quotients.

    A stationary profile (no occupied level on one side of the mean energy)
    gives a bound of 0.
    """
    _check_theta(theta)
    if profile.is_stationary:
        return 0.0, (0.0, 0.0)
    below = theta / profile.gap_below() if theta > 0 else 0.0
    above = (TWO_PI - theta) / profile.gap_above()
    return max(below, above), (below, above)


def _time_average(values: np.ndarray, times: np.ndarray) -> float:
    if times.size < 2:
        raise ValueError("time averages need at least two samples")
    return float(np.trapezoid(values, times) / (times[-1] - times[0]))


def _profiles(traj: Trajectory) -> dict[str, np.ndarray]:
    if traj.schedule is None:
        raise ValueError("trajectory has no Hamiltonian schedule attached")
    evals, evecs = traj.schedule.spectra(traj.times)
    return instantaneous_profiles(evals, evecs, traj.states)


def ml_time_averaged(traj: Trajectory, theta: float) -> float:
    """ML-type expression with time-averaged denominators.

    This is a diagnostic, not a bound: for time-dependent Hamiltonians it can
    exceed the evolution time.
    """
    _check_theta(theta)
    prof = _profiles(traj)
    if np.any(np.isnan(prof["eps_bar"])) or np.any(np.isnan(prof["eps_underbar"])):
        raise StationaryStateError("instantaneous state is stationary somewhere on the trajectory")
    below = _time_average(prof["energy"] - prof["eps_bar"], traj.times)
    above = _time_average(prof["eps_underbar"] - prof["energy"], traj.times)
    return max(theta / below, (TWO_PI - theta) / above)


def length_lower_bound(theta: float) -> float:
    """Shortest Fubini-Study length of a closed curve with phase ``theta``."""
    _check_theta(theta)
    return length_lower_bound_value(theta)


def mt_bound(theta: float, avg_uncertainty: float) -> float:
    """Mandelstam-Tamm type bound ``sqrt(theta(2pi - theta)) / <<dH>>``."""
    _check_theta(theta)
    if theta == 0:
        return 0.0
    if not avg_uncertainty > 0:
        raise StationaryStateError("a stationary curve cannot carry a nonzero geometric phase")
    return length_lower_bound_value(theta) / avg_uncertainty


def bd_average(traj: Trajectory) -> float:
    """Time average of sqrt(<H_t - eps_min;t><eps_max;t - H_t>)."""
    prof = _profiles(traj)
    if np.any(prof["eps_max"] - prof["eps_min"] <= 0):
        raise StationaryStateError("instantaneous state is stationary somewhere on the trajectory")
    bd = np.sqrt(np.maximum((prof["energy"] - prof["eps_min"]) * (prof["eps_max"] - prof["energy"]), 0.0))
    return _time_average(bd, traj.times)


def bd_bound(traj: Trajectory, theta: float) -> float:
    """Bhatia-Davies type bound; never larger than the MT-type bound."""
    _check_theta(theta)
    if theta == 0:
        return 0.0
    return length_lower_bound_value(theta) / bd_average(traj)


@dataclass(frozen=True)
class BoundReport:
    """All quantities entering the three time bounds for one closed evolution.

    ``ml_bound`` is only a bound for constant Hamiltonians; for driven
    schedules it is NaN and ``ml_time_averaged`` carries the averaged
    expression with ``ml_is_bound = False``.
    """

    theta: float
    tau: float
    fs_length: float
    avg_uncertainty: float
    ml_bound: float
    ml_quotients: tuple[float, float]
    mt_bound: float
    bd_bound: float
    closure_defect: float
    ml_time_averaged: Optional[float] = None
    ml_is_bound: bool = True
    saturation_ratios: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def full_report(
    traj: Trajectory, tol_closure: float | None = None, extrapolate: bool = True
) -> BoundReport:
    """Geometric phase, length and every bound for a closed trajectory.

    The phase uses the extrapolated connection sum by default (see
    :func:`holobound.geometry.connection_integral`), so the grid must have an
    even number of segments unless ``extrapolate=False``.

    Raises:
        OpenCurveError: if the trajectory does not close.
    """
    phase = aa_phase(traj, tol_closure, extrapolate=extrapolate)
    theta, tau = phase.theta, traj.tau
    if not tau > 0:
        raise ValueError("trajectory has zero duration")
    length = fs_length(traj, "quadrature")
    avg_dh = _time_average(energy_uncertainties(traj), traj.times)
    sched = traj.schedule
    if sched.is_constant:
        ml, quotients = ml_bound(occupation_profile(sched.H, traj.states[0]), theta)
        ml_avg = ml
        ml_is_bound = True
    else:
        ml, quotients = math.nan, (math.nan, math.nan)
        try:
            ml_avg = ml_time_averaged(traj, theta)
        except StationaryStateError:
            ml_avg = 0.0
        ml_is_bound = False
    mt = mt_bound(theta, avg_dh)
    bd = bd_bound(traj, theta)

    ratios = {"ml": ml / tau, "mt": mt / tau, "bd": bd / tau}
    if not ml_is_bound:
        ratios["ml_time_averaged"] = ml_avg / tau
    return BoundReport(
        theta=theta,
        tau=tau,
        fs_length=length,
        avg_uncertainty=avg_dh,
        ml_bound=ml,
        ml_quotients=quotients,
        mt_bound=mt,
        bd_bound=bd,
        closure_defect=phase.closure_defect,
        ml_time_averaged=ml_avg,
        ml_is_bound=ml_is_bound,
        saturation_ratios=ratios,
    )
