"""Named property suites: each returns a list of checks with worst residuals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import TOL_BOUND, full_report, length_lower_bound
from .core import occupation_profile
from .evolution import Trajectory, evolve_schedule, resolved_steps, uniform_grid
from .geometry import TWO_PI, aa_phase, fs_length, phase_distance
from .scenarios import (
    CounterexampleScenario,
    QubitScenario,
    build_counterexample,
    build_qubit,
    random_periodic,
    search_qutrit_witnesses,
)

QUBIT_PHIS = tuple(round(0.2 * k, 10) for k in range(1, 16))
QUBIT_OMEGAS = (0.5, 1.0, 2.0)
COUNTEREXAMPLE_CHIS = (0.2, 0.5, 0.8, 1.2, 1.5)


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tol)


def _even(steps: int) -> int:
    return int(steps) + int(steps) % 2


def qubit_tightness(steps: int = 4000) -> list[Check]:
    theta_err = ml_err = mt_err = bd_err = gap = len_err = 0.0
    for omega in QUBIT_OMEGAS:
        for phi in QUBIT_PHIS:
            sched, psi, tau, theta_pred = build_qubit(QubitScenario(phi, omega))
            traj = evolve_schedule(sched, psi, uniform_grid(tau, _even(steps)), method="midpoint")
            rep = full_report(traj)
            theta_err = max(theta_err, phase_distance(rep.theta, theta_pred))
            ml_err = max(ml_err, *(abs(q / tau - 1) for q in rep.ml_quotients))
            mt_err = max(mt_err, abs(rep.mt_bound / tau - 1))
            bd_err = max(bd_err, abs(rep.bd_bound / tau - 1))
            gap = max(gap, abs(rep.mt_bound - rep.bd_bound))
            len_err = max(len_err, abs(rep.fs_length - math.pi * math.sin(phi)))
    return [
        Check("theta = pi(1 + cos phi)", theta_err, 1e-6),
        Check("ML quotients / tau = 1", ml_err, 1e-5),
        Check("MT bound / tau = 1", mt_err, 1e-5),
        Check("BD bound / tau = 1", bd_err, 1e-5),
        Check("|MT - BD|", gap, 1e-8),
        Check("FS length = pi sin phi", len_err, 1e-5),
    ]


def qutrit_identities(steps: int = 4000) -> list[Check]:
    found = search_qutrit_witnesses()
    wanted = [f"{b}/{c}" for b in ("below", "above") for c in ("none", "first", "second", "both")]
    wanted += ["equal/n1=n2+1", "equal/n1>n2+1"]
    checks = []
    for key in wanted:
        an = found.get(key)
        if an is None:
            checks.append(Check(f"witness {key}", math.inf, 1e-8))
            continue
        n0, n1, n2 = an.n
        ordered = n0 > n1 > n2
        checks.append(Check(f"witness {key}", an.residual if ordered else math.inf, 1e-8))
    return checks


def counterexample(steps: int = 4000, E: float = 1.0) -> list[Check]:
    theta_err = avg_err = excess = mt_excess = bd_excess = 0.0
    overshoot = math.inf
    for chi in COUNTEREXAMPLE_CHIS:
        sched, psi, tau = build_counterexample(CounterexampleScenario(E, chi))
        traj = evolve_schedule(sched, psi, uniform_grid(tau, resolved_steps(sched, tau, steps)))
        rep = full_report(traj)
        theta_err = max(theta_err, phase_distance(rep.theta, math.pi))
        avg_err = max(avg_err, abs(rep.ml_time_averaged - math.pi / E))
        overshoot = min(overshoot, rep.ml_time_averaged - tau)
        mt_excess = max(mt_excess, rep.mt_bound - tau)
        bd_excess = max(bd_excess, rep.bd_bound - tau)
    return [
        Check("theta = pi", theta_err, 1e-5),
        Check("averaged ML expression = pi/E", avg_err, 1e-5),
        # residual is negative exactly when the averaged expression overshoots tau
        Check("averaged ML expression exceeds tau", -overshoot, 0.0),
        Check("MT bound <= tau", max(mt_excess, 0.0), TOL_BOUND),
        Check("BD bound <= tau", max(bd_excess, 0.0), TOL_BOUND),
    ]


def random_trajectory(dim: int, seed: int, steps: int) -> Trajectory:
    sched, psi, tau = random_periodic(dim, seed)
    return evolve_schedule(sched, psi, uniform_grid(tau, _even(steps)))


def random_periodic_suite(steps: int = 4000, count: int = 50, seed: int = 0) -> list[Check]:
    closure = length = bound = ident = 0.0
    for i in range(count):
        dim = 2 + i % 5
        traj = random_trajectory(dim, seed + i, steps)
        rep = full_report(traj)
        closure = max(closure, rep.closure_defect)
        length = max(length, length_lower_bound(rep.theta) - rep.fs_length)
        bound = max(bound, max(rep.ml_bound, rep.mt_bound, rep.bd_bound) - rep.tau)
        prof = occupation_profile(traj.schedule.H, traj.states[0])
        for eps in prof.energies:
            ident = max(ident, phase_distance(rep.tau * (prof.expected_energy - eps), rep.theta))
    return [
        Check("closure defect at tau", closure, 1e-8),
        Check("L(theta) - FS length", max(length, 0.0), 1e-6),
        Check("max bound - tau", max(bound, 0.0), TOL_BOUND),
        Check("theta = tau<H - eps> mod 2pi", ident, 1e-6),
    ]


def smooth_gauge(times: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random smooth phase function on the grid."""
    span = times[-1] - times[0]
    u = (times - times[0]) / span
    alpha = rng.normal() * u * 3
    for j in range(1, 4):
        alpha = alpha + rng.normal() * np.sin(2 * np.pi * j * u + rng.uniform(0, TWO_PI))
    return alpha


def monotone_grid(tau: float, steps: int, rng: np.random.Generator) -> np.ndarray:
    """Random smooth monotone reparameterization of a uniform grid."""
    u = np.linspace(0.0, 1.0, steps + 1)
    a, b = rng.uniform(-0.3, 0.3, size=2)
    g = u + a * np.sin(2 * np.pi * u) / (2 * np.pi) + b * np.sin(4 * np.pi * u) / (4 * np.pi)
    return tau * g


def invariance(steps: int = 4000, n_gauge: int = 50, n_reparam: int = 20, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    steps = _even(steps)
    sched, psi, tau, _ = build_qubit(QubitScenario(math.pi / 3, 1.0))
    base = evolve_schedule(sched, psi, uniform_grid(tau, steps))
    theta0 = aa_phase(base, extrapolate=True).theta
    length0 = fs_length(base, "geodesic")
    gauge_theta = gauge_len = 0.0
    for _ in range(n_gauge):
        phases = np.exp(1j * smooth_gauge(base.times, rng))
        traj = base.with_states(base.states * phases[:, None])
        gauge_theta = max(gauge_theta, phase_distance(aa_phase(traj, extrapolate=True).theta, theta0))
        gauge_len = max(gauge_len, abs(fs_length(traj, "geodesic") - length0))
    re_theta = re_len = 0.0
    for _ in range(n_reparam):
        traj = evolve_schedule(sched, psi, monotone_grid(tau, steps, rng))
        re_theta = max(re_theta, phase_distance(aa_phase(traj, extrapolate=True).theta, theta0))
        re_len = max(re_len, abs(fs_length(traj, "geodesic") - length0))
    return [
        Check("theta under gauge transforms", gauge_theta, 1e-6),
        Check("FS length under gauge transforms", gauge_len, 1e-6),
        Check("theta under reparameterization", re_theta, 1e-6),
        Check("FS length under reparameterization", re_len, 1e-6),
    ]


SUITES: dict[str, Callable[..., list[Check]]] = {
    "qubit-tightness": qubit_tightness,
    "qutrit-identities": qutrit_identities,
    "counterexample": counterexample,
    "random-periodic": random_periodic_suite,
    "invariance": invariance,
}


def run_suite(name: str, steps: int = 4000, seed: int = 0) -> list[Check]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if name in ("random-periodic", "invariance"):
        return SUITES[name](steps=steps, seed=seed)
    return SUITES[name](steps=steps)
