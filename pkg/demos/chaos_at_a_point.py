# %% [markdown]
# # Sensitivity from a nearby periodic orbit
# If x sits near a periodic point p and a transitive orbit passes near x, one of
# them separates from x by more than delta/8 at a multiple of the period.

# %%
from fractions import Fraction as Q

from pointdyn.chaos_entropy import devaney_point_verdict, probe_balls, sensitivity_constant_from_periodic
from pointdyn.systems import DoublingCircle, FullShift, SymSeq

# %%
shift = FullShift(2)
x = SymSeq.from_window(-2, (1, 0, 1, 1, 0))
v = sensitivity_constant_from_periodic(shift, x, SymSeq.constant(1))
print(v.outcome.value)
for key in ("delta", "eta", "p", "n", "k", "j", "time", "side", "distance"):
    print(f"  {key:9s} {v.witness[key]}")

# %%
circle = DoublingCircle()
v = sensitivity_constant_from_periodic(circle, Q(1, 5), Q(0))
print("circle at 1/5:", v.outcome.value, "eta =", v.witness["eta"], "side =", v.witness["side"])

# %% [markdown]
# The combined check: transitive, dense periodic and sensitive at the point.

# %%
probes = probe_balls(circle, 6, Q(1, 16), seed=3)
v = devaney_point_verdict(circle, Q(1, 3), [Q(1, 4), Q(1, 16)], probes, seed=3)
print("circle, all three at 1/3:", v.outcome.value)
