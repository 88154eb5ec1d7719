import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holobound.bounds import TOL_BOUND, full_report, length_lower_bound
from holobound.errors import StationaryStateError
from holobound.evolution import closure_defect, evolve_schedule, resolved_steps, uniform_grid
from holobound.geometry import TWO_PI, aa_phase, phase_distance
from holobound.scenarios import (
    CounterexampleScenario,
    QubitScenario,
    QutritScenario,
    analyze_qutrit,
    build_counterexample,
    build_qubit,
    build_qutrit,
    qutrit_trajectory,
    random_periodic,
    search_qutrit_witnesses,
)

WITNESS_KEYS = [f"{b}/{c}" for b in ("below", "above") for c in ("none", "first", "second", "both")]
WITNESS_KEYS += ["equal/n1=n2+1", "equal/n1>n2+1"]


@pytest.fixture(scope="module")
def witnesses():
    return search_qutrit_witnesses()


class TestQubit:
    def test_equator(self):
        _, _, tau, theta = build_qubit(QubitScenario(math.pi / 2, 1.0))
        assert tau == pytest.approx(TWO_PI) and theta == pytest.approx(math.pi)

    def test_near_south_pole(self):
        _, _, _, theta = build_qubit(QubitScenario(math.pi - 1e-3))
        assert 0 < theta < 1e-5

    def test_sixty_degrees_fast(self):
        _, _, tau, theta = build_qubit(QubitScenario(math.pi / 3, 2.0))
        assert tau == pytest.approx(math.pi) and theta == pytest.approx(1.5 * math.pi)

    @pytest.mark.parametrize("phi", [0.0, math.pi])
    def test_poles_are_stationary(self, phi):
        with pytest.raises(StationaryStateError):
            build_qubit(QubitScenario(phi))

    def test_family_saturates_every_bound(self):
        for phi in np.linspace(0.05, math.pi - 0.05, 50):
            sched, psi, tau, theta = build_qubit(QubitScenario(phi, 1.3, trace_h=0.4))
            rep = full_report(evolve_schedule(sched, psi, uniform_grid(tau, 400)))
            assert phase_distance(rep.theta, theta) < 1e-6
            for key in ("ml", "mt", "bd"):
                assert rep.saturation_ratios[key] == pytest.approx(1.0, abs=1e-6)


class TestQutrit:
    @pytest.mark.parametrize("levels, omega, tau", [((0, 1, 2), 1.0, TWO_PI), ((0, 2, 4), 1.0, math.pi), ((0, 2, 4), 2.0, math.pi / 2)])
    def test_period_from_gcd(self, levels, omega, tau):
        assert build_qutrit(QutritScenario(levels, omega=omega))[2] == pytest.approx(tau)

    def test_unoccupied_level_rejected(self):
        with pytest.raises(ValueError):
            build_qutrit(QutritScenario(occupations=(1, 0, 0)))

    def test_incommensurate_levels_rejected(self):
        with pytest.raises(ValueError):
            build_qutrit(QutritScenario(levels=(0, 1, 1.5)))

    def test_closes_at_tau(self):
        traj = qutrit_trajectory(QutritScenario((0, 3, 5), (0.2, 0.5, 0.3), (0.3, 2.0)), 200)
        assert closure_defect(traj) < 1e-10

    def test_mean_on_middle_level(self):
        traj = qutrit_trajectory(QutritScenario((0, 1, 2), (0.3, 0.4, 0.3)), 200)
        an = analyze_qutrit(traj)
        assert an.branch == "equal"
        assert an.theta == 0.0
        assert an.quotients[0] == 0.0
        assert an.quotients[1] == pytest.approx(TWO_PI / (2 - 1), rel=1e-10)

    @given(
        st.tuples(st.integers(1, 4), st.integers(1, 4)),
        st.tuples(st.floats(0.05, 1), st.floats(0.05, 1), st.floats(0.05, 1)),
        st.tuples(st.floats(0, TWO_PI), st.floats(0, TWO_PI)),
    )
    @settings(max_examples=20)
    def test_identities_hold(self, gaps, occ, phases):
        levels = (0, gaps[0], gaps[0] + gaps[1])
        an = analyze_qutrit(qutrit_trajectory(QutritScenario(levels, occ, phases)))
        n0, n1, n2 = an.n
        assert n0 > n1 > n2
        assert an.residual < 1e-8


class TestWitnesses:
    def test_every_case_is_found(self, witnesses):
        assert set(WITNESS_KEYS) <= witnesses.keys()

    @pytest.mark.parametrize("key", WITNESS_KEYS)
    def test_witness_is_consistent(self, witnesses, key):
        an = witnesses[key]
        assert an.residual < 1e-8
        assert an.n[0] > an.n[1] > an.n[2]
        # re-evaluating the stored scenario reproduces the classification
        again = analyze_qutrit(qutrit_trajectory(an.scenario))
        assert again.n == an.n and again.equals_tau == an.equals_tau

    def test_saturation_flags(self, witnesses):
        assert witnesses["below/both"].saturating
        assert not witnesses["above/none"].saturating
        assert witnesses["below/none"].case == "none"

    def test_equal_branch_realizations(self, witnesses):
        a, b = witnesses["equal/n1=n2+1"], witnesses["equal/n1>n2+1"]
        assert a.n[1] == a.n[2] + 1
        assert b.n[1] > b.n[2] + 1
        for an in (a, b):
            assert an.quotients[0] == 0.0
            assert an.quotients[1] == pytest.approx(an.tau / (an.n[1] - an.n[2]), rel=1e-10)


class TestCounterexample:
    def test_sixty_degrees(self):
        s = CounterexampleScenario(1.0, math.pi / 3)
        sched, _, tau = build_counterexample(s)
        assert tau == pytest.approx(math.pi / math.sqrt(3), rel=1e-12)
        assert s.mu == pytest.approx(2.0)
        evals, _ = sched.spectra(np.linspace(0, tau, 7))
        np.testing.assert_allclose(evals, np.tile([-2.0, 2.0], (7, 1)), atol=1e-12)

    def test_tau_approaches_pi_over_e(self):
        _, _, tau = build_counterexample(CounterexampleScenario(1.0, math.pi / 2 - 1e-6))
        assert tau < math.pi
        assert tau == pytest.approx(math.pi, abs=1e-5)

    @pytest.mark.parametrize("E, chi", [(0.0, 1.0), (1.0, 0.0), (1.0, math.pi / 2)])
    def test_invalid_parameters(self, E, chi):
        with pytest.raises(ValueError):
            build_counterexample(CounterexampleScenario(E, chi))

    @given(st.floats(0.3, 3.0), st.floats(0.15, math.pi / 2 - 0.05))
    @settings(max_examples=20)
    def test_phase_is_pi(self, E, chi):
        sched, psi, tau = build_counterexample(CounterexampleScenario(E, chi))
        traj = evolve_schedule(sched, psi, uniform_grid(tau, resolved_steps(sched, tau, 2000)))
        assert aa_phase(traj, extrapolate=True).theta == pytest.approx(math.pi, abs=1e-5)


class TestRandomPeriodic:
    def test_deterministic(self):
        a, b = random_periodic(4, 11), random_periodic(4, 11)
        np.testing.assert_array_equal(a[0].H.matrix, b[0].H.matrix)
        np.testing.assert_array_equal(a[1].amplitudes, b[1].amplitudes)
        assert a[2] == b[2]

    def test_dim_four_seed_seven_closes(self):
        sched, psi, tau = random_periodic(4, 7)
        assert closure_defect(evolve_schedule(sched, psi, uniform_grid(tau, 1000))) < 1e-8

    @pytest.mark.parametrize("seed", range(5))
    def test_qubit_bounds(self, seed):
        sched, psi, tau = random_periodic(2, seed)
        rep = full_report(evolve_schedule(sched, psi, uniform_grid(tau, 2000)))
        assert max(rep.ml_bound, rep.mt_bound, rep.bd_bound) <= tau + TOL_BOUND

    @pytest.mark.parametrize("dim", [1, 9])
    def test_dim_range(self, dim):
        with pytest.raises(ValueError):
            random_periodic(dim, 0)

    @given(st.integers(2, 6), st.integers(0, 10**6))
    def test_report_invariants(self, dim, seed):
        sched, psi, tau = random_periodic(dim, seed)
        rep = full_report(evolve_schedule(sched, psi, uniform_grid(tau, 2000)))
        assert rep.closure_defect < 1e-8
        assert max(rep.ml_bound, rep.mt_bound, rep.bd_bound) <= tau + TOL_BOUND
        assert rep.bd_bound <= rep.mt_bound + 1e-9
        assert rep.fs_length >= length_lower_bound(rep.theta) - 1e-6
