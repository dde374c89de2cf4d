"""Vaught transforms, classical and localized, in exact finite-discrete form.

The Baire-category clauses collapse over a finite discrete group: a subset of
a nonempty H is nonmeager in H iff it is nonempty, and comeager in H iff it is
all of H.  That single translation step turns the transforms into exact set
operations:

    delta(A, H) = {x : some g in H moves x into A}
    star(A, H)  = {x : every g in H moves x into A}

The localized stage transforms relativize these to U along V, padding the
star side with X∖U so that exits from U never count against a point:

    stage 1:   A^{Δ_U(V,1)} = delta(A∩U, V) ∩ U
               A^{*_U(V,1)} = star((A∩U) ∪ (X∖U), V) ∩ U
    stage n+1: apply delta/star (with the same padding) to stage n.

Limits: the delta stages increase and the star stages decrease, so both
stabilize within |U| rounds.
"""

from __future__ import annotations

from .bits import bits
from .gspace import ActionInstance, translate_set


def delta(inst: ActionInstance, a: int, h: int) -> int:
    """{x : ∃g ∈ H, g·x ∈ A}.  H must be nonempty."""
    if h == 0:
        raise ValueError("transform over empty set")
    inv = inst.group.inv
    out = 0
    for g in bits(h):
        out |= translate_set(inst, a, inv[g])
    return out


def star(inst: ActionInstance, a: int, h: int) -> int:
    """{x : ∀g ∈ H, g·x ∈ A}.  H must be nonempty."""
    if h == 0:
        raise ValueError("transform over empty set")
    inv = inst.group.inv
    out = inst.full_points
    for g in bits(h):
        out &= translate_set(inst, a, inv[g])
    return out


def _check_neighborhood(v: int) -> None:
    # identity membership is what makes the stage sequences monotone, and
    # with it the limit loops terminating
    if not v & 1:
        raise ValueError("V must contain the identity")


def local_delta_n(inst: ActionInstance, a: int, u: int, v: int, n: int) -> int:
    """The stage transform A^{Δ_U(V,n)}, n ≥ 1."""
    if n < 1:
        raise ValueError("stage must be >= 1")
    _check_neighborhood(v)
    cur = delta(inst, a & u, v) & u
    for _ in range(n - 1):
        cur = delta(inst, cur, v) & u
    return cur


def local_star_n(inst: ActionInstance, a: int, u: int, v: int, n: int) -> int:
    """The stage transform A^{*_U(V,n)}, n ≥ 1 (with X∖U padding)."""
    if n < 1:
        raise ValueError("stage must be >= 1")
    _check_neighborhood(v)
    pad = inst.full_points & ~u
    cur = star(inst, (a & u) | pad, v) & u
    for _ in range(n - 1):
        cur = star(inst, cur | pad, v) & u
    return cur


def local_delta(inst: ActionInstance, a: int, u: int, v: int) -> int:
    """The limit transform A^{Δ_U V} = union of the increasing delta stages."""
    cur = local_delta_n(inst, a, u, v, 1)
    while True:
        nxt = delta(inst, cur, v) & u
        if nxt == cur:
            return cur
        cur = nxt


def local_star(inst: ActionInstance, a: int, u: int, v: int) -> int:
    """The limit transform A^{*_U V} = intersection of the decreasing star stages."""
    pad = inst.full_points & ~u
    cur = local_star_n(inst, a, u, v, 1)
    while True:
        nxt = star(inst, cur | pad, v) & u
        if nxt == cur:
            return cur
        cur = nxt
