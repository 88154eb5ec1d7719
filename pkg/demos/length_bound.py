# %% [markdown]
# The length bound on random periodic systems
#
# Any closed curve with geometric phase theta has Fubini-Study length at
# least sqrt(theta(2pi - theta)). Dividing by the time-averaged energy
# uncertainty turns that into a lower bound on the evolution time. Here we
# check both on random Hamiltonians with integer spectra.

# %%
import numpy as np

from holobound import evolve_schedule, full_report, length_lower_bound, random_periodic, uniform_grid

rows = []
for seed in range(40):
    dim = 2 + seed % 5
    sched, psi, tau = random_periodic(dim, seed)
    rep = full_report(evolve_schedule(sched, psi, uniform_grid(tau, 2000)))
    rows.append((dim, rep.theta, rep.fs_length, length_lower_bound(rep.theta), rep.mt_bound / tau, rep.bd_bound / tau))

rows = np.array(rows)

# %%
print(f"{'dim':>3} {'theta':>8} {'length':>8} {'L(theta)':>8} {'mt/tau':>7} {'bd/tau':>7}")
for dim, theta, length, lb, mt, bd in rows[:12]:
    print(f"{int(dim):3d} {theta:8.4f} {length:8.4f} {lb:8.4f} {mt:7.4f} {bd:7.4f}")

# %%
slack = rows[:, 2] - rows[:, 3]
print(f"\nsmallest length - L(theta): {slack.min():.3e}")
print(f"largest mt/tau: {rows[:, 4].max():.6f}, largest bd/tau: {rows[:, 5].max():.6f}")
# qubits saturate both bounds; higher dimensions generally do not
print(f"mean bd/tau for dim 2: {rows[rows[:, 0] == 2, 5].mean():.4f}, dim 6: {rows[rows[:, 0] == 6, 5].mean():.4f}")
