"""Local saturations, local orbits, and reach sets on the Z/4 self-action.

Points and group elements are bitmasks throughout; sets print as {0,1}.
Run: python3 demos/01_local_orbits.py
"""

from orbitpieces.bits import to_list
from orbitpieces.gspace import named_instance, orbit
from orbitpieces.saturation import (
    group_coset_partition,
    local_orbit,
    orbit_partition,
    reach_common,
    reach_sets,
    saturate,
)


def show(label, mask):
    print(f"{label:28s} {{{','.join(map(str, to_list(mask)))}}}")


inst = named_instance("z4self")
print(f"instance {inst.name}: Z/4 acting on itself, mode {inst.mode}")
print("basisU members:", [to_list(u) for u in inst.basisU.members])
print("basisV members:", [to_list(v) for v in inst.basisV.members])
print()

u = inst.basisU[0]   # the window {0,1}
v = inst.basisV[0]   # one step of rotation either way
show("window U", u)
show("neighbourhood V", v)

# Saturating {0} inside U: apply V-steps but discard anything leaving U.
# The +1 rotation takes 0 to 1 (stays), 1 to 2 (leaves), so we stop at {0,1}.
show("saturate({0})", saturate(inst, 1, u, v))

# The local orbit of a point is the saturation of the singleton; the global
# orbit ignores the window entirely.
show("local orbit of 0", local_orbit(inst, 0, u, v))
show("global orbit of 0", orbit(inst, 0))

# Reach sets live on the group side: elements reachable from the identity by
# V-steps whose partial images of x stay in U.  Depth 0 is just the identity.
show("reach(x=0) elements", reach_sets(inst, 0, u, v))
show("reach(x=0) depth 0", reach_sets(inst, 0, u, v, 0))
show("reach common to U", reach_common(inst, u, u, v))

# The local orbit partition of U and the coset partition of the reach sets
# tell the same story from the two sides of the action.
print()
print("orbit partition of U:", [to_list(b) for b in orbit_partition(inst, u, v)])
print("coset partition at 0:", [to_list(b) for b in group_coset_partition(inst, 0, u, v)])
