"""Refined piece topologies, the open-map check, and relative re-analysis.

The refined family of a point collects the basic windows together with all
pieces of its orbit below a level; generating a topology from it asks how
finely the analysis separates orbit points.
Run: python3 demos/04_refined_topology.py
"""

from orbitpieces.bits import to_list
from orbitpieces.gspace import named_instance
from orbitpieces.scott import STABLE, analyze, piece
from orbitpieces.topology import (
    open_map_check,
    refined_family,
    refined_space,
    relative_pieces,
)

for name in ("z4self", "z4coarse"):
    inst = named_instance(name)
    table = analyze(inst)
    ground, topo = refined_space(table, 0, 3)
    ok, witness = open_map_check(table, 0, 3)
    print(f"{name}: ground {to_list(ground)}, {len(topo.opens)} open sets, "
          f"evaluation map open: {ok}"
          + ("" if ok else f" (first stuck point {witness})"))

# z4self refines down to the discrete topology; z4coarse cannot separate
# anything and stays indiscrete, so the open-map check fails at point 0.
print()

# Relative re-analysis: restrict z4pairs to the refined subspace of 0 at
# level 3, distinguishing D = the level-2 piece of 0 in the (X, V0) cell.
inst = named_instance("z4pairs")
table = analyze(inst)
rel = relative_pieces(table, x=0, alpha=3, gamma=2, x2=0, u_idx=4, v_idx=0)
print(f"subspace ground {to_list(rel.ground)}, distinguished D {to_list(rel.d_parent)}")
print(f"sub family size {len(rel.sub_instance.basisU)}, "
      f"sub stabilization {rel.sub_table.stabilization}")
print("refined family:", [to_list(s) for s in refined_family(table, 0, 3)])

# The point of the construction: pieces of the parent from level alpha on
# coincide with pieces of the subspace from level 1 on (shifted by alpha-1).
for y in to_list(rel.d_parent):
    ys = rel.to_sub_point(y)
    parent = piece(table, y, 4, 0, STABLE)
    sub = rel.to_parent(piece(rel.sub_table, ys, rel.d_index, 0, STABLE))
    print(f"y={y}: parent stable {to_list(parent)} == sub stable {to_list(sub)}:",
          parent == sub)
