"""Canonical piece partitions, stabilization, and generalized ranks.

The engine refines every cell (U, V) level by level: level 1 groups points
of U by which windows their local orbit meets; each next level groups them
by which previous-level blocks the orbit meets, across all cells at once.
Run: python3 demos/03_pieces_and_ranks.py
"""

from orbitpieces.bits import to_list
from orbitpieces.gspace import named_instance
from orbitpieces.scott import (
    STABLE,
    analyze,
    pattern_partition,
    piece,
    scott_rank,
    stable_partition,
)

# z4pairs is the interesting exploratory example: the windows {0,1},{2,3},
# {1,2},{0,3} cannot tell 0 from 2 at level 1, but the V-member {0,2} splits
# the top cell one level later.
inst = named_instance("z4pairs")
table = analyze(inst)
print(f"instance {inst.name}: stabilization level {table.stabilization}")

top_u = len(inst.basisU) - 1
for level in (1, 2):
    blocks = table.blocks(top_u, 0, level)
    print(f"cell (X, V0) level {level}:", [to_list(m) for _, m in blocks])

print("ranks:", [scott_rank(table, x) for x in range(inst.size)])
print("stable partition:", [to_list(b) for b in stable_partition(table)])
print()

# The level-1 partition of the top cell is exactly the partition by
# "which sets G.U_n does x belong to" — computable without the engine.
print("pattern partition:", [to_list(b) for b in pattern_partition(inst)])
top = [m for _, m in table.blocks(top_u, len(inst.basisV) - 1, 1)]
print("matches level 1:", top == pattern_partition(inst))
print()

# In strict mode (families are genuine bases) everything collapses at level
# one and the pieces are the local orbits themselves.
strict = named_instance("swapfix")
st_table = analyze(strict)
print(f"instance {strict.name}: mode {strict.mode}, "
      f"stabilization {st_table.stabilization}")
print("stable partition:", [to_list(b) for b in stable_partition(st_table)])
print("ranks:", [scott_rank(st_table, x) for x in range(strict.size)])

# Piece lookups accept any level: 0 means the window itself, STABLE the
# fixed point.
print()
print("piece(0, U0, V0, 0):    ", to_list(piece(table, 0, 0, 0, 0)))
print("piece(0, X, V0, STABLE):", to_list(piece(table, 0, top_u, 0, STABLE)))
