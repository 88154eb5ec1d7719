# %% [markdown]
# Driven qubit: averaging the ML denominators does not give a bound
#
# H_t = exp(-iAt) H exp(iAt) has a rigid spectrum {-mu, mu}, and the state
# initially aligned with sx comes back at tau = pi/(E cot(chi/2)) with
# geometric phase pi. Replacing <H - eps_bar> by its time average in the
# ML-type expression gives pi/E, which is longer than tau. The MT and BD type
# bounds stay below tau.

# %%
import math

import numpy as np

from holobound import CounterexampleScenario, build_counterexample, evolve_schedule, full_report
from holobound.evolution import resolved_steps, uniform_grid

E = 1.0

# %%
print(f"{'chi':>5} {'mu':>7} {'tau':>8} {'theta':>9} {'averaged ML':>11} {'mt':>9} {'bd':>9}")
for chi in np.linspace(0.2, 1.5, 8):
    s = CounterexampleScenario(E, chi)
    sched, psi, tau = build_counterexample(s)
    traj = evolve_schedule(sched, psi, uniform_grid(tau, resolved_steps(sched, tau, 4000)))
    rep = full_report(traj)
    print(f"{chi:5.2f} {s.mu:7.3f} {tau:8.5f} {rep.theta:9.6f} {rep.ml_time_averaged:11.6f} {rep.mt_bound:9.6f} {rep.bd_bound:9.6f}")

# %%
# As chi -> pi/2 the evolution time approaches pi/E from below, so the
# averaged expression always overshoots.
print(f"\npi/E = {math.pi / E:.6f}")
