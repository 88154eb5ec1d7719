# %% [markdown]
# Qutrits: when is the ML-type bound attained?
#
# For a qutrit with commensurate levels the phase is fixed by integers n_j
# with theta = tau<H - eps_j> - 2pi n_j. The two ML quotients can then be
# written through the n_j, and whether each equals tau depends on the
# occupations. A small grid search turns up an example of every pattern.

# %%
from holobound.scenarios import search_qutrit_witnesses

found = search_qutrit_witnesses(max_level=6, resolution=0.05)

# %%
print(f"{'case':<16} {'levels':<10} {'occupations':<20} {'n':<14} {'q1/tau':>8} {'q2/tau':>8} {'residual':>9}")
for key in sorted(found):
    an = found[key]
    s = an.scenario
    occ = "(" + ", ".join(f"{p:.2f}" for p in s.occupations) + ")"
    q1, q2 = (q / an.tau for q in an.quotients)
    print(f"{key:<16} {str(s.levels):<10} {occ:<20} {str(an.n):<14} {q1:8.4f} {q2:8.4f} {an.residual:9.1e}")

# %%
# With <H> sitting on the middle level the phase vanishes, the first quotient
# is zero and the second reduces to tau/(n1 - n2).
for key in ("equal/n1=n2+1", "equal/n1>n2+1"):
    an = found[key]
    print(f"{key}: theta = {an.theta}, second quotient = {an.quotients[1]:.6f}, tau/(n1-n2) = {an.tau / (an.n[1] - an.n[2]):.6f}")
