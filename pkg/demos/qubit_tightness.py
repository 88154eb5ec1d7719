# %% [markdown]
# Qubit precession: every bound is tight
#
# A qubit precessing about +z at Rabi frequency omega returns to itself after
# tau = 2pi/omega. We sweep the polar angle of the initial state and compare
# the three time bounds with the actual evolution time.

# %%
import math

import numpy as np

from holobound import QubitScenario, build_qubit, evolve_schedule, full_report, uniform_grid
from holobound.geometry import bloch_solid_angle_phase

omega = 1.0
phis = np.linspace(0.1, math.pi - 0.1, 12)

# %%
# theta follows pi(1 + cos phi): half the solid angle of the cap, taken from 2pi
print(f"{'phi':>6} {'theta':>9} {'predicted':>9} {'from area':>9} {'length':>8} {'ml/tau':>8} {'mt/tau':>8} {'bd/tau':>8}")
for phi in phis:
    sched, psi, tau, theta_pred = build_qubit(QubitScenario(phi, omega))
    traj = evolve_schedule(sched, psi, uniform_grid(tau, 2000))
    rep = full_report(traj)
    r = rep.saturation_ratios
    print(
        f"{phi:6.3f} {rep.theta:9.6f} {theta_pred:9.6f} {bloch_solid_angle_phase(traj):9.6f} "
        f"{rep.fs_length:8.5f} {r['ml']:8.5f} {r['mt']:8.5f} {r['bd']:8.5f}"
    )

# %%
# The curve length is pi sin phi, which is exactly the shortest length any
# closed curve carrying the same phase can have.
phi = math.pi / 3
sched, psi, tau, theta = build_qubit(QubitScenario(phi, omega))
rep = full_report(evolve_schedule(sched, psi, uniform_grid(tau, 2000)))
print(f"\nphi = pi/3: length {rep.fs_length:.6f}, sqrt(theta(2pi - theta)) = {math.sqrt(theta * (2 * math.pi - theta)):.6f}")
