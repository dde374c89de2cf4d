from __future__ import annotations

from hypothesis import given, settings, strategies as st

from orbitpieces.bits import bits, is_subset, to_list
from orbitpieces.gspace import make_random, named_instance
from orbitpieces.saturation import (
    group_coset_partition,
    is_locally_invariant,
    local_orbit,
    orbit_partition,
    reach_common,
    reach_sets,
    saturate,
    saturate_by_parts,
)

seeds = st.integers(min_value=0, max_value=500)
masks = st.integers(min_value=0, max_value=(1 << 12) - 1)


def bfs_saturate(inst, a: int, u: int, v: int) -> int:
    """Independent oracle: point-level BFS along steps y -> w.y staying in U."""
    frontier = [x for x in bits(a & u)]
    seen = set(frontier)
    while frontier:
        nxt = []
        for y in frontier:
            for w in bits(v):
                z = inst.act[w][y]
                if u >> z & 1 and z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    out = 0
    for y in seen:
        out |= 1 << y
    return out


def bfs_reach(inst, x: int, u: int, v: int, depth=None) -> int:
    """Independent oracle: products of V-elements whose partial action stays in U."""
    if not u >> x & 1:
        return 0
    cur = {0}
    n = 0
    while depth is None or n < depth:
        nxt = set(cur)
        for g in cur:
            gx = inst.act[g][x]
            for w in bits(v):
                if u >> inst.act[w][gx] & 1:
                    nxt.add(inst.group.mul[w][g])
        if nxt == cur:
            break
        cur = nxt
        n += 1
    out = 0
    for g in cur:
        out |= 1 << g
    return out


def test_z4self_frozen_values():
    inst = named_instance("z4self")
    u, v = inst.basisU[0], inst.basisV[0]
    assert saturate(inst, 0b0001, u, v) == 0b0011
    assert local_orbit(inst, 0, u, v) == 0b0011
    assert reach_sets(inst, 0, u, v) == 0b0011
    assert reach_sets(inst, 1, u, v) == 0b1001  # {e, +3}
    assert local_orbit(inst, 1, u, v) == 0b0011


def test_reach_conventions():
    inst = named_instance("z4self")
    u, v = inst.basisU[0], inst.basisV[0]
    assert reach_sets(inst, 0, u, v, 0) == 1       # {identity} for x in U
    assert reach_sets(inst, 2, u, v, 0) == 0       # empty for x outside U
    assert reach_sets(inst, 2, u, v, None) == 0
    assert reach_common(inst, 0, u, v) == inst.group.full  # empty A
    # stages are increasing in the depth
    prev = 0
    for d in range(6):
        cur = reach_sets(inst, 0, u, v, d)
        assert is_subset(prev, cur)
        prev = cur


def test_empty_set_conventions():
    inst = named_instance("z4pairs")
    u, v = inst.basisU[0], inst.basisV[0]
    assert saturate(inst, 0, u, v) == 0
    assert saturate(inst, inst.full_points & ~u, u, v) == 0 or (
        saturate(inst, inst.full_points & ~u, u, v)
        == saturate(inst, (inst.full_points & ~u) & u, u, v)
    )
    assert local_orbit(inst, to_list(inst.full_points & ~u)[0], u, v) == 0


@settings(max_examples=60, deadline=None)
@given(seeds, masks, st.data())
def test_saturate_matches_bfs_oracle(seed, a, data):
    inst = make_random(seed)
    n = data.draw(st.integers(min_value=0, max_value=len(inst.basisU) - 1))
    m = data.draw(st.integers(min_value=0, max_value=len(inst.basisV) - 1))
    u, v = inst.basisU[n], inst.basisV[m]
    a &= inst.full_points
    expected = bfs_saturate(inst, a, u, v)
    assert saturate(inst, a, u, v) == expected
    assert saturate_by_parts(inst, a, u, v) == expected


@settings(max_examples=60, deadline=None)
@given(seeds, st.data())
def test_reach_matches_bfs_oracle(seed, data):
    inst = make_random(seed)
    n = data.draw(st.integers(min_value=0, max_value=len(inst.basisU) - 1))
    m = data.draw(st.integers(min_value=0, max_value=len(inst.basisV) - 1))
    x = data.draw(st.integers(min_value=0, max_value=inst.size - 1))
    u, v = inst.basisU[n], inst.basisV[m]
    for depth in (0, 1, 2, None):
        assert reach_sets(inst, x, u, v, depth) == bfs_reach(inst, x, u, v, depth)


@settings(max_examples=40, deadline=None)
@given(seeds, masks, st.data())
def test_local_invariance_agrees_with_saturation(seed, a, data):
    inst = make_random(seed)
    n = data.draw(st.integers(min_value=0, max_value=len(inst.basisU) - 1))
    m = data.draw(st.integers(min_value=0, max_value=len(inst.basisV) - 1))
    u, v = inst.basisU[n], inst.basisV[m]
    a &= inst.full_points
    inv = is_locally_invariant(inst, a, u, v)
    assert inv == (saturate(inst, a, u, v) == a & u)
    # saturations are always invariant
    assert is_locally_invariant(inst, saturate(inst, a, u, v), u, v)


@settings(max_examples=40, deadline=None)
@given(seeds, st.data())
def test_orbit_partition_properties(seed, data):
    inst = make_random(seed)
    n = data.draw(st.integers(min_value=0, max_value=len(inst.basisU) - 1))
    m = data.draw(st.integers(min_value=0, max_value=len(inst.basisV) - 1))
    u, v = inst.basisU[n], inst.basisV[m]
    parts = orbit_partition(inst, u, v)
    union = 0
    prev_low = -1
    for p in parts:
        assert p and not p & union
        union |= p
        low = (p & -p).bit_length() - 1
        assert low > prev_low  # ordered by least point
        prev_low = low
        x = low
        assert local_orbit(inst, x, u, v) == p
    assert union == u


@settings(max_examples=40, deadline=None)
@given(seeds, st.data())
def test_coset_partition_structure(seed, data):
    inst = make_random(seed)
    n = data.draw(st.integers(min_value=0, max_value=len(inst.basisU) - 1))
    m = data.draw(st.integers(min_value=0, max_value=len(inst.basisV) - 1))
    x = data.draw(st.integers(min_value=0, max_value=inst.size - 1))
    u, v = inst.basisU[n], inst.basisV[m]
    blocks = group_coset_partition(inst, x, u, v)
    domain = 0
    for h in range(inst.group.order):
        if u >> inst.act[h][x] & 1:
            domain |= 1 << h
    union = 0
    for blk in blocks:
        assert blk and not blk & union
        union |= blk
        # each block is reach(hx) translated by its least element h
        h = (blk & -blk).bit_length() - 1
        hx = inst.act[h][x]
        expect = 0
        for s in bits(reach_sets(inst, hx, u, v)):
            expect |= 1 << inst.group.mul[s][h]
        assert blk == expect
    assert union == domain


def test_coset_partition_frozen():
    inst = named_instance("z4self")
    u, v = inst.basisU[0], inst.basisV[0]
    assert group_coset_partition(inst, 0, u, v) == [0b0011]
    assert group_coset_partition(inst, 2, u, v) == [0b1100]


def test_is_locally_invariant_rejects_mixed_sets():
    inst = named_instance("z4self")
    u, v = inst.basisU[0], inst.basisV[0]
    # {0} is half of the local orbit {0,1}
    assert not is_locally_invariant(inst, 0b0001, u, v)
    assert is_locally_invariant(inst, 0b0011, u, v)
    assert is_locally_invariant(inst, 0, u, v)


def test_saturate_union_decomposition_frozen():
    inst = named_instance("z4pairs")
    u, v = inst.basisU[4], inst.basisV[0]  # top U with the {0,2}-neighbourhood
    total = saturate(inst, inst.full_points, u, v)
    pointwise = 0
    for x in range(4):
        pointwise |= local_orbit(inst, x, u, v)
    assert total == pointwise == 0b1111


def test_orbit_partition_stays_inside_u():
    inst = named_instance("z4self")
    u, v = inst.basisU[0], inst.basisV[0]
    parts = orbit_partition(inst, u, v)
    assert all(is_subset(p, u) for p in parts)
