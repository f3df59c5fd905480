# %% [markdown]
# # Pointwise properties on a few standard systems
# Expansivity, shadowing, specification and mixing checked at single points.
# Run with `python3 demos/pointwise_tour.py`.

# %%
from fractions import Fraction as Q

from pointdyn.expansivity import pointwise_expansivity_verdict
from pointdyn.shadowing_spec import (
    mixing_point_verdict,
    shadowable_point_verdict,
    specification_point_verdict,
)
from pointdyn.systems import Ball, DoublingRay, FullShift, IdentityInterval, SquaringMap, SymSeq


def show(label, v):
    print(f"{label:45s} {v.outcome.value}")


# %% [markdown]
# The full shift is expansive everywhere; the identity is expansive nowhere.

# %%
shift = FullShift(2)
_, v = pointwise_expansivity_verdict(shift, SymSeq.constant(0))
show("full shift, expansivity at 0^Z", v)
_, v = pointwise_expansivity_verdict(IdentityInterval(), Q(1, 2))
show("identity, expansivity at 1/2", v)

# %% [markdown]
# Doubling on the half-line: shadowable at every point, yet a point above 0
# cannot be mixing, since small balls run off to infinity.

# %%
ray = DoublingRay()
for x in (Q(0), Q(1, 2), Q(1)):
    show(f"doubling ray, shadowable at {x}", shadowable_point_verdict(ray, x, Q(1, 10)))
show("doubling ray, specification at 0", specification_point_verdict(ray, Q(0), Q(1, 10)))
probes = [Ball(Q(1, 4), Q(1, 16))]
show("doubling ray, mixing at 1/2", mixing_point_verdict(ray, Q(1, 2), [Q(1, 8)], probes))

# %% [markdown]
# Squaring on [0, 1]: the repelling end 1 is shadowable but has no specification.
# The failure carries a feasible-set trail that collapses to the empty set.

# %%
sq = SquaringMap()
show("squaring, shadowable at 1", shadowable_point_verdict(sq, Q(1), Q(1, 10)))
v = specification_point_verdict(sq, Q(1), Q(1, 10))
show("squaring, specification at 1", v)
print("  feasible set empty at time", v.witness["certificate"]["empty_at"])
