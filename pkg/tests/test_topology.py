from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from orbitpieces.bits import is_subset, to_list
from orbitpieces.gspace import make_random, named_instance, orbit
from orbitpieces.scott import STABLE, analyze, piece
from orbitpieces.topology import (
    FiniteTopology,
    generate_topology,
    minimal_neighborhood,
    open_map_check,
    refined_family,
    refined_space,
    relative_pieces,
)

seeds = st.integers(min_value=0, max_value=200)


def test_generate_topology_small():
    ground = 0b1111
    topo = generate_topology(ground, [0b0011, 0b0110])
    # minimal neighbourhoods: N(0)={0,1}, N(1)={1}, N(2)={1,2}, N(3)=ground
    assert topo.opens == frozenset(
        {0, 0b0010, 0b0011, 0b0110, 0b0111, 0b1111}
    )
    assert topo.is_open(0b0010)
    assert not topo.is_open(0b0001)
    assert not topo.is_open(0b0100)
    topo.validate()


def test_generate_topology_relativizes_subbasis():
    topo = generate_topology(0b0011, [0b0110])
    # the subbasis member is cut down to the ground first
    assert sorted(topo.opens) == [0, 0b0010, 0b0011]
    topo.validate()


def test_minimal_neighborhood_defaults_to_ground():
    assert minimal_neighborhood(0b0111, [0b0011], 2) == 0b0111
    assert minimal_neighborhood(0b0111, [0b0011], 0) == 0b0011


def test_validate_rejects_non_topology():
    broken = FiniteTopology(0b0111, frozenset({0, 0b0111, 0b0001, 0b0010}))
    with pytest.raises(RuntimeError):
        broken.validate()  # missing the union {0,1}


def test_refined_family_frozen_z4pairs():
    inst = named_instance("z4pairs")
    t = analyze(inst)
    fam = refined_family(t, 0, 3)
    assert [to_list(s) for s in fam] == [
        [0, 1], [2, 3], [1, 2], [0, 3], [0, 1, 2, 3],
        [0], [1], [2], [3],
        [0, 2], [1, 3],
    ]
    # the level argument is capped at the stabilization, so deeper requests
    # (or the STABLE sentinel) add nothing new
    assert refined_family(t, 0, 9) == fam
    assert refined_family(t, 0, STABLE) == fam
    with pytest.raises(ValueError, match="level"):
        refined_family(t, 0, 0)


def test_refined_family_level_one_is_just_the_u_family():
    inst = named_instance("z4pairs")
    t = analyze(inst)
    assert refined_family(t, 0, 1) == list(inst.basisU.members)


def test_refined_space_and_openmap_z4self():
    inst = named_instance("z4self")
    t = analyze(inst)
    ground, topo = refined_space(t, 0, 3)
    assert ground == 0b1111
    assert len(topo.opens) == 16  # discrete: level-1 pieces are singletons
    ok, witness = open_map_check(t, 0, 3)
    assert ok and witness is None


def test_refined_space_z4coarse_is_indiscrete():
    inst = named_instance("z4coarse")
    t = analyze(inst)
    ground, topo = refined_space(t, 0, 3)
    assert ground == 0b1111
    assert topo.opens == frozenset({0, 0b1111})
    ok, witness = open_map_check(t, 0, 3)
    assert not ok and witness == 0


def test_relative_pieces_z4pairs():
    inst = named_instance("z4pairs")
    t = analyze(inst)
    rel = relative_pieces(t, 0, 3, 2, 0, 4, 0)
    assert rel.ground == 0b1111
    assert rel.d_parent == 0b0101  # even rotation class B_2(0, {0,1}-cell)
    assert rel.d_index == 8
    assert rel.to_parent(rel.sub_instance.basisU[rel.d_index]) == 0b0101
    # the level-offset identity the re-analysis is for: pieces of the parent
    # from level alpha on match pieces of the subspace from level 1 on
    for y in to_list(rel.d_parent):
        ys = rel.to_sub_point(y)
        assert rel.to_parent(1 << ys) == 1 << y
        for beta in (0, 1, 2):
            lhs = piece(t, y, 4, 0, 3 + beta)
            rhs = rel.to_parent(piece(rel.sub_table, ys, rel.d_index, 0, beta + 1))
            assert lhs == rhs
        assert piece(t, y, 4, 0, STABLE) == rel.to_parent(
            piece(rel.sub_table, ys, rel.d_index, 0, STABLE)
        )


def test_relative_pieces_distinguished_full():
    # with gamma = 1 the distinguished set is the whole ground, which lives
    # at the appended full member of the sub family
    inst = named_instance("z4pairs")
    t = analyze(inst)
    rel = relative_pieces(t, 0, 3, 1, 0, 4, 0)
    assert rel.d_parent == rel.ground == 0b1111
    assert rel.d_index == len(rel.sub_instance.basisU) - 1
    assert [to_list(rel.to_parent(u)) for u in rel.sub_instance.basisU.members] == [
        [0, 1], [2, 3], [1, 2], [0, 3],
        [0], [1], [2], [3],
        [0, 2], [1, 3],
        [0, 1, 2, 3],
    ]


def test_relative_pieces_validation():
    inst = named_instance("z4pairs")
    t = analyze(inst)
    with pytest.raises(ValueError, match="gamma"):
        relative_pieces(t, 0, 2, 2, 0, 4, 0)
    with pytest.raises(ValueError, match="gamma"):
        relative_pieces(t, 0, 2, 0, 0, 4, 0)
    with pytest.raises(ValueError, match="x2"):
        relative_pieces(t, 0, 3, 1, 2, 0, 0)  # 2 is not in U_0 = {0,1}


def test_sub_family_is_the_relativized_refined_family():
    inst = named_instance("z4pairs")
    t = analyze(inst)
    rel = relative_pieces(t, 0, 3, 2, 0, 4, 0)
    expected = []
    seen = set()
    for s in refined_family(t, 0, 3):
        trace = s & rel.ground
        if trace == 0 or trace == rel.ground or trace in seen:
            continue
        seen.add(trace)
        expected.append(trace)
    got = [rel.to_parent(u) for u in rel.sub_instance.basisU.members[:-1]]
    assert got == expected
    assert rel.to_parent(rel.sub_instance.basisU.members[-1]) == rel.ground


@settings(max_examples=25, deadline=None)
@given(seeds, st.data())
def test_minimal_neighborhoods_generate_the_topology(seed, data):
    inst = make_random(seed)
    t = analyze(inst)
    x = data.draw(st.integers(min_value=0, max_value=inst.size - 1))
    alpha = data.draw(st.integers(min_value=1, max_value=t.stabilization + 1))
    ground, topo = refined_space(t, x, alpha)
    fam = refined_family(t, x, alpha)
    for s in topo.opens:
        assert is_subset(s, ground)
        # every open is the union of the minimal neighbourhoods of its points
        rebuilt = 0
        for y in to_list(s):
            n = minimal_neighborhood(ground, fam, y)
            assert is_subset(n, s)
            rebuilt |= n
        assert rebuilt == s
    topo.validate()


@settings(max_examples=25, deadline=None)
@given(seeds, st.data())
def test_open_map_matches_minimal_neighborhood_singletons(seed, data):
    inst = make_random(seed)
    t = analyze(inst)
    x = data.draw(st.integers(min_value=0, max_value=inst.size - 1))
    alpha = data.draw(st.integers(min_value=1, max_value=t.stabilization + 2))
    ok, witness = open_map_check(t, x, alpha)
    fam = refined_family(t, x, alpha)
    orb = orbit(inst, x)
    failing = [
        y for y in to_list(orb) if minimal_neighborhood(orb, fam, y) != 1 << y
    ]
    if ok:
        assert witness is None and not failing
    else:
        assert witness == failing[0]
