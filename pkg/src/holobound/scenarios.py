"""Ready-made cyclic evolutions: qubit precession, commensurate qutrits, a
rotating-frame qubit whose averaged ML-type expression overshoots the
evolution time, and seeded random periodic systems."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from functools import reduce
from typing import Iterator, Optional, Sequence

import numpy as np
from scipy.stats import unitary_group

from .bounds import ml_bound
from .core import (
    SIGMA_X,
    SIGMA_Z,
    StateVector,
    occupation_profile,
    qubit_hamiltonian,
    qubit_state,
)
from .errors import PhysicsError, StationaryStateError
from .evolution import Constant, RotatingFrame, Trajectory, evolve_schedule, uniform_grid
from .geometry import TWO_PI, aa_phase, reduce_phase


@dataclass(frozen=True)
class QubitScenario:
    phi: float
    omega: float = 1.0
    trace_h: float = 0.0


def build_qubit(s: QubitScenario):
    """Precession about +z with Rabi length ``omega`` from polar angle ``phi``.

    Returns ``(schedule, psi0, tau, theta_predicted)`` with ``tau = 2pi/omega``
    and ``theta_predicted = pi(1 + cos phi)``.

    Raises:
        StationaryStateError: for ``phi`` at (or beyond) the poles.
    """
    if not s.omega > 0:
        raise ValueError(f"omega must be positive, got {s.omega}")
    if not 0 < s.phi < math.pi:
        raise StationaryStateError(f"stationary: phi={s.phi} is not strictly between the poles")
    sched = Constant(qubit_hamiltonian((0.0, 0.0, s.omega), s.trace_h))
    theta = reduce_phase(math.pi * (1 + math.cos(s.phi)))
    return sched, qubit_state(s.phi), TWO_PI / s.omega, theta


@dataclass(frozen=True)
class QutritScenario:
    """Diagonal qutrit with eigenvalues ``omega * levels``.

    ``occupations`` are the populations of the three levels and ``phases``
    the relative phases of levels 1 and 2 with respect to level 0.
    """

    levels: tuple[int, int, int] = (0, 1, 2)
    occupations: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    phases: tuple[float, float] = (0.0, 0.0)
    omega: float = 1.0


def _integer_levels(levels: Sequence) -> tuple[int, ...]:
    out = []
    for x in levels:
        if float(x) != int(round(float(x))):
            raise ValueError(f"levels must be integers (commensurate spectrum), got {levels}")
        out.append(int(round(float(x))))
    return tuple(out)


def build_qutrit(s: QutritScenario):
    """Returns ``(schedule, psi0, tau)`` with ``tau = 2pi/(omega*g)``, ``g`` the
    gcd of the level differences."""
    levels = _integer_levels(s.levels)
    if len(levels) != 3 or not levels[0] < levels[1] < levels[2]:
        raise ValueError(f"need three strictly increasing levels, got {levels}")
    if len(s.occupations) != 3 or min(s.occupations) <= 0:
        raise ValueError(f"all three levels must be occupied, got {s.occupations}")
    if not s.omega > 0:
        raise ValueError("omega must be positive")
    p = np.asarray(s.occupations, dtype=float)
    p = p / p.sum()
    amps = np.sqrt(p) * np.exp(1j * np.array([0.0, *s.phases]))
    g = reduce(math.gcd, (levels[1] - levels[0], levels[2] - levels[1]))
    sched = Constant(np.diag(np.array(levels, dtype=float) * s.omega).astype(complex))
    return sched, StateVector(amps), TWO_PI / (s.omega * g)


@dataclass(frozen=True)
class QutritAnalysis:
    theta: float
    tau: float
    expected_energy: float
    eigenvalues: tuple[float, float, float]
    n: tuple[int, int, int]
    branch: str  # "below", "above" or "equal": position of <H> relative to eps1
    quotients: tuple[float, float]  # ML quotients evaluated directly
    identities: tuple[float, float]  # right-hand sides written in terms of n_j
    residual: float  # worst mismatch between the two
    equals_tau: tuple[bool, bool]
    scenario: Optional[QutritScenario] = None

    @property
    def case(self) -> str:
        first, second = self.equals_tau
        return {(False, False): "none", (True, False): "first", (False, True): "second", (True, True): "both"}[
            (first, second)
        ]

    @property
    def saturating(self) -> bool:
        return any(self.equals_tau)


def analyze_qutrit(
    traj: Trajectory, tol_int: float = 1e-6, tol_equal: float = 1e-8, extrapolate: bool = True
) -> QutritAnalysis:
    """Recover the winding integers of a closed qutrit evolution and check the
    quotient identities that express the ML quotients through them.

    The phase is extracted with the extrapolated connection sum by default,
    since the identities are compared at the 1e-8 level.
    """
    sched = traj.schedule
    if sched is None or not sched.is_constant:
        raise ValueError("analysis needs a constant-Hamiltonian trajectory")
    prof = occupation_profile(sched.H, traj.states[0])
    if prof.n_occupied != 3:
        raise ValueError(f"expected three occupied levels, found {prof.n_occupied}")
    theta, tau = aa_phase(traj, extrapolate=extrapolate).theta, traj.tau
    e = prof.energies
    mean = prof.expected_energy
    raw = (tau * (mean - e) - theta) / TWO_PI
    n = np.rint(raw)
    resid = float(np.max(np.abs(raw - n)))
    if resid > tol_int:
        raise PhysicsError(f"winding numbers are not integers (residual {resid:.2e}); is the curve closed?")
    n0, n1, n2 = (int(x) for x in n)
    if not n0 > n1 > n2:
        raise PhysicsError(f"winding numbers {n0, n1, n2} are not strictly decreasing")

    _, quotients = ml_bound(prof, theta)
    if prof.eps_bar is None:
        raise StationaryStateError()
    if prof.eps_bar == e[0] and prof.eps_underbar == e[1]:
        branch = "below"
        ids = (
            tau * (mean - e[0] - TWO_PI * n0 / tau) / (mean - e[0]),
            tau * (TWO_PI * (n1 + 1) / tau + e[1] - mean) / (e[1] - mean),
        )
    elif prof.eps_bar == e[1] and prof.eps_underbar == e[2]:
        branch = "above"
        ids = (
            tau * (mean - e[1] - TWO_PI * n1 / tau) / (mean - e[1]),
            tau * (TWO_PI * (n2 + 1) / tau + e[2] - mean) / (e[2] - mean),
        )
    else:
        branch = "equal"
        ids = (0.0, tau / (n1 - n2))
    residual = max(abs(q - i) / tau for q, i in zip(quotients, ids))
    eq = tuple(abs(q / tau - 1) < tol_equal for q in quotients)
    return QutritAnalysis(
        theta=theta,
        tau=tau,
        expected_energy=mean,
        eigenvalues=tuple(float(x) for x in e),
        n=(n0, n1, n2),
        branch=branch,
        quotients=tuple(quotients),
        identities=ids,
        residual=residual,
        equals_tau=eq,
    )


def qutrit_trajectory(s: QutritScenario, steps_per_cycle: int = 2000) -> Trajectory:
    """Exact trajectory over one period, resolving the fastest Bohr frequency."""
    sched, psi, tau = build_qutrit(s)
    levels = _integer_levels(s.levels)
    cycles = (levels[2] - levels[0]) * s.omega * tau / TWO_PI
    steps = 2 * max(100, int(math.ceil(cycles * steps_per_cycle / 2)))
    return evolve_schedule(sched, psi, uniform_grid(tau, steps))


def _simplex(resolution: float) -> Iterator[tuple[float, float, float]]:
    n = int(round(1 / resolution))
    for i in range(1, n):
        for j in range(1, n - i):
            yield (i / n, j / n, (n - i - j) / n)


def search_qutrit_witnesses(max_level: int = 6, resolution: float = 0.05) -> dict[str, QutritAnalysis]:
    """Grid search for qutrits exhibiting every ML saturation pattern.

    Keys are ``"<branch>/<case>"`` for branch in {below, above} and case in
    {none, first, second, both}, plus ``"equal/n1=n2+1"`` and
    ``"equal/n1>n2+1"`` for states with <H> on the middle level.
    """
    wanted = {f"{b}/{c}" for b in ("below", "above") for c in ("none", "first", "second", "both")}
    wanted |= {"equal/n1=n2+1", "equal/n1>n2+1"}
    found: dict[str, QutritAnalysis] = {}
    for levels in itertools.combinations(range(max_level + 1), 3):
        if levels[0] != 0:
            break
        for occ in _simplex(resolution):
            s = QutritScenario(levels=levels, occupations=occ)
            an = analyze_qutrit(qutrit_trajectory(s))
            if an.branch == "equal":
                key = "equal/n1=n2+1" if an.n[1] == an.n[2] + 1 else "equal/n1>n2+1"
            else:
                key = f"{an.branch}/{an.case}"
            if key not in found:
                found[key] = replace(an, scenario=s)
            if wanted <= found.keys():
                return found
    return found


@dataclass(frozen=True)
class CounterexampleScenario:
    E: float = 1.0
    chi: float = math.pi / 3

    @property
    def mu(self) -> float:
        return self.E / (1 - math.cos(self.chi))


def build_counterexample(s: CounterexampleScenario):
    """Qubit driven by ``H_t = exp(-iAt) H exp(iAt)``.

    ``A = mu sin(chi) sz`` and ``H = mu (sin(chi) sz - cos(chi) sx)`` with
    ``mu = E/(1 - cos chi)``; the initial state is the +1 eigenvector of sx.
    Returns ``(schedule, psi0, tau)`` with ``tau = pi/(E cot(chi/2))``.
    """
    if not s.E > 0:
        raise ValueError(f"E must be positive, got {s.E}")
    if not 0 < s.chi < math.pi / 2:
        raise ValueError(f"chi must lie in (0, pi/2), got {s.chi}")
    mu = s.mu
    a = mu * math.sin(s.chi) * SIGMA_Z
    h = mu * (math.sin(s.chi) * SIGMA_Z - math.cos(s.chi) * SIGMA_X)
    tau = math.pi / (s.E / math.tan(s.chi / 2))
    return RotatingFrame(a, h), StateVector([1, 1]), tau


def _gcd_of_differences(levels: Sequence[int]) -> int:
    levels = sorted(set(levels))
    return reduce(math.gcd, (b - a for a, b in zip(levels, levels[1:])), 0)


def random_periodic(dim: int, seed: int, base_omega: float = 1.0, max_level: int = 3):
    """Seeded periodic system: integer spectrum in a Haar-random eigenbasis.

    Eigenvalues are integers in ``[-max_level, max_level]`` (times
    ``base_omega``), so levels may be degenerate. The state is a random
    vector occupying at least two distinct levels. Returns
    ``(schedule, psi0, tau)``.
    """
    if not 2 <= dim <= 8:
        raise ValueError(f"dim must be in [2, 8], got {dim}")
    rng = np.random.default_rng(seed)
    levels = rng.integers(-max_level, max_level + 1, size=dim)
    while len(set(levels.tolist())) < 2:
        levels = rng.integers(-max_level, max_level + 1, size=dim)
    u = unitary_group.rvs(dim, random_state=rng)
    h = (u * (levels * base_omega)) @ u.conj().T
    h = 0.5 * (h + h.conj().T)
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi = StateVector(psi)
    # occupied integer levels, read off in the known eigenbasis
    weights = np.abs(u.conj().T @ psi.amplitudes) ** 2
    occupied = sorted({int(l) for l, w in zip(levels, weights) if w > 1e-10})
    if len(occupied) < 2:
        raise PhysicsError("random state occupies a single level")
    tau = TWO_PI / (base_omega * _gcd_of_differences(occupied))
    return Constant(h), psi, tau
