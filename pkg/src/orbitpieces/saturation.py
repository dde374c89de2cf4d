"""Local saturations, local orbits, reach sets, and local invariance.

The central recursion: V⁰_U A = A∩U, V^[n+1]_U A = V(V^[n]_U A) ∩ U, and the
local saturation V_U A is the union of the stages — computed here as a
monotone fixpoint, which terminates within |U| rounds.

Reach sets ⟨V⟩ˣ_U collect the group elements expressible as products of
V-steps all of whose partial applications keep x inside U; the local orbit is
exactly the reach set applied to x.  For x ∉ U every reach set is empty, at
every depth, including depth 0.
"""

from __future__ import annotations

import weakref

from .bits import bits
from .gspace import ActionInstance, translate_set


def act_image(inst: ActionInstance, a: int, v: int) -> int:
    """The set V·A = {g·x : g ∈ V, x ∈ A}."""
    m = 0
    for g in bits(v):
        m |= translate_set(inst, a, g)
    return m


def saturate(inst: ActionInstance, a: int, u: int, v: int) -> int:
    """The local V_U-saturation of A: least fixpoint of S ↦ (V·S ∪ S) ∩ U from A∩U."""
    cur = a & u
    while True:
        nxt = (cur | act_image(inst, cur, v)) & u
        if nxt == cur:
            return cur
        cur = nxt


def local_orbit(inst: ActionInstance, x: int, u: int, v: int) -> int:
    """The local V_U-orbit of a point; empty exactly when x ∉ U."""
    return saturate(inst, 1 << x, u, v)


def reach_sets(inst: ActionInstance, x: int, u: int, v: int, depth: int | None = None) -> int:
    """⟨V⟩ˣ_U at the given depth (None = the full, stabilized union).

    Stage 0 is {identity} when x ∈ U; stage n+1 collects the products g·h
    with h in stage n, g ∈ V and (g·h)·x ∈ U.  The stages increase, so the
    full set is the fixpoint.
    """
    if not u >> x & 1:
        return 0
    mul = inst.group.mul
    act = inst.act
    cur = 1  # {identity}
    n = 0
    while depth is None or n < depth:
        nxt = cur
        for h in bits(cur):
            for g in bits(v):
                gh = mul[g][h]
                if u >> act[gh][x] & 1:
                    nxt |= 1 << gh
        if nxt == cur:
            return cur  # stages increase, so once fixed they stay fixed
        cur = nxt
        n += 1
    return cur


def reach_common(inst: ActionInstance, a: int, u: int, v: int) -> int:
    """⟨V⟩^A_U  =  the intersection of ⟨V⟩ᵗ_U over t ∈ A (full group if A = ∅)."""
    out = inst.group.full
    for t in bits(a):
        out &= reach_sets(inst, t, u, v)
        if not out:
            break
    return out


def is_locally_invariant(inst: ActionInstance, a: int, u: int, v: int) -> bool:
    """Whether V_U A = A∩U; the one-step criterion V(A∩U)∩U = A∩U must agree."""
    trace = a & u
    fix = saturate(inst, a, u, v) == trace
    one_step = act_image(inst, trace, v) & u == trace
    if fix != one_step:
        raise RuntimeError("local invariance criteria disagree (internal error)")
    return fix


def group_coset_partition(inst: ActionInstance, x: int, u: int, v: int) -> list[int]:
    """The blocks ⟨V⟩^{hx}_U · h over h with h·x ∈ U, in first-seen order.

    These partition {h ∈ G : h·x ∈ U}; the partition property itself is an
    oracle-checked consequence, not enforced here.
    """
    mul = inst.group.mul
    act = inst.act
    domain = 0
    for h in range(inst.group.order):
        if u >> act[h][x] & 1:
            domain |= 1 << h
    blocks: list[int] = []
    assigned = 0
    for h in bits(domain):
        if assigned >> h & 1:
            continue
        r = reach_sets(inst, act[h][x], u, v)
        block = 0
        for s in bits(r):
            block |= 1 << mul[s][h]
        blocks.append(block)
        assigned |= block
    return blocks


# ---------------------------------------------------------------------------
# per-instance caches
#
# The engine and the oracle suites evaluate local orbits and reach sets for
# the same cells over and over; instances are immutable, so results are
# memoized in weak per-instance tables.

_ORBIT_CACHE: "weakref.WeakKeyDictionary[ActionInstance, dict]" = weakref.WeakKeyDictionary()
_REACH_CACHE: "weakref.WeakKeyDictionary[ActionInstance, dict]" = weakref.WeakKeyDictionary()


def orbit_partition(inst: ActionInstance, u: int, v: int) -> tuple[int, ...]:
    """The distinct local V_U-orbits inside U, ordered by least point."""
    table = _ORBIT_CACHE.setdefault(inst, {})
    key = (u, v)
    got = table.get(key)
    if got is not None:
        return got
    parts = []
    rem = u
    while rem:
        x = (rem & -rem).bit_length() - 1
        part = local_orbit(inst, x, u, v)
        parts.append(part)
        rem &= ~part
    out = tuple(parts)
    table[key] = out
    return out


def cached_reach(inst: ActionInstance, x: int, u: int, v: int) -> int:
    """Memoized full reach set ⟨V⟩ˣ_U."""
    table = _REACH_CACHE.setdefault(inst, {})
    key = (x, u, v)
    got = table.get(key)
    if got is None:
        got = reach_sets(inst, x, u, v)
        table[key] = got
    return got


def saturate_by_parts(inst: ActionInstance, a: int, u: int, v: int) -> int:
    """Saturation as the union of the local orbits meeting A — the structural
    shortcut used by the piece engine (the fixpoint route is the definition;
    the oracle suite checks they agree)."""
    out = 0
    if a & u:
        for part in orbit_partition(inst, u, v):
            if part & a:
                out |= part
    return out
