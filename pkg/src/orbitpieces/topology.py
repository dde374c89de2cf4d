"""Finite topologies, refined piece-generated families, and relative re-analysis.

A finite topology is stored as the explicit family of open sets.  Generation
from a subbasis goes through minimal neighbourhoods: N(y) is the intersection
of all subbasis members containing y (the ground set if there are none), and
the opens are exactly the unions of minimal neighbourhoods.

The refined family of a point x at level α collects the basic opens together
with every piece B_β(x', U, V) for 1 ≤ β < α and x' in the orbit of x; the
refined space is the top-cell piece of x carrying the topology this family
generates.  Relative re-analysis re-runs the piece engine on that subspace
with the relativized family enumeration taken verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bits import bits, to_list, universe
from .gspace import (
    ActionInstance,
    instance_from_families,
    orbit,
    translate_set,
)
from .scott import PieceTable, analyze, piece


@dataclass(frozen=True)
class FiniteTopology:
    ground: int
    opens: frozenset[int]

    def is_open(self, s: int) -> bool:
        return s in self.opens

    def validate(self) -> None:
        """Exhaustive closure check — quadratic in |opens|, for desk-scale use."""
        if 0 not in self.opens or self.ground not in self.opens:
            raise RuntimeError("topology misses the empty set or the ground set")
        for a in self.opens:
            if a & ~self.ground:
                raise RuntimeError("open set escapes the ground set")
            for b in self.opens:
                if (a | b) not in self.opens or (a & b) not in self.opens:
                    raise RuntimeError("topology is not closed under union/intersection")


def minimal_neighborhood(ground: int, family, y: int) -> int:
    """The smallest set containing y generable from the family, inside ground."""
    out = ground
    for s in family:
        if s >> y & 1:
            out &= s
    return out


def generate_topology(ground: int, subbasis) -> FiniteTopology:
    """The topology on ``ground`` generated by the (relativized) subbasis."""
    rel = [s & ground for s in subbasis]
    minimal: list[int] = []
    seen: set[int] = set()
    for y in bits(ground):
        n = minimal_neighborhood(ground, rel, y)
        if n not in seen:
            seen.add(n)
            minimal.append(n)
    opens = {0, ground}
    for n in minimal:
        opens |= {o | n for o in opens}
    return FiniteTopology(ground, frozenset(opens))


def refined_family(table: PieceTable, x: int, alpha) -> list[int]:
    """ℬˣ_{<α}: the basic opens plus all pieces of orbit points below level α.

    Deterministic first-seen order: U-members first, then levels β = 1, 2, …
    (capped at stabilization), cells in (n, m) order, orbit points ascending.
    """
    inst = table.instance
    if isinstance(alpha, int):
        if alpha < 1:
            raise ValueError("refined families need level >= 1")
        top_beta = min(alpha - 1, table.stabilization)
    else:
        top_beta = table.stabilization
    orb = orbit(inst, x)
    out: list[int] = []
    seen: set[int] = set()
    for u in inst.basisU.members:
        if u not in seen:
            seen.add(u)
            out.append(u)
    for beta in range(1, top_beta + 1):
        data = table.levels[beta - 1]
        for ci, (n, m) in enumerate(table.cells):
            u = inst.basisU[n]
            pts = orb & u
            for y in bits(pts):
                for _, mask in data[ci]:
                    if mask >> y & 1:
                        if mask not in seen:
                            seen.add(mask)
                            out.append(mask)
                        break
    return out


def refined_space(table: PieceTable, x: int, alpha) -> tuple[int, FiniteTopology]:
    """The top-cell piece of x with the topology its refined family generates."""
    inst = table.instance
    u_idx = len(inst.basisU) - 1
    v_idx = len(inst.basisV) - 1
    ground = piece(table, x, u_idx, v_idx, alpha)
    for g in range(inst.group.order):
        if translate_set(inst, ground, g) != ground:
            raise RuntimeError("top-cell piece is not G-invariant (internal error)")
    return ground, generate_topology(ground, refined_family(table, x, alpha))


def open_map_check(table: PieceTable, x: int, alpha) -> tuple[bool, int | None]:
    """Whether g ↦ g·x is open onto the orbit in the refined relative topology.

    Over a discrete group this says every orbit singleton is relatively open;
    the first point whose minimal relative neighbourhood exceeds itself is
    returned as the witness.
    """
    inst = table.instance
    fam = refined_family(table, x, alpha)
    orb = orbit(inst, x)
    for y in bits(orb):
        if minimal_neighborhood(orb, fam, y) != 1 << y:
            return False, y
    return True, None


# ---------------------------------------------------------------------------
# relative re-analysis


@dataclass(frozen=True, eq=False)
class RelativeAnalysis:
    """A re-analyzed subspace, with translations back to parent coordinates."""

    parent: ActionInstance
    sub_instance: ActionInstance
    sub_table: PieceTable
    parent_points: tuple[int, ...]  # sub index -> parent point
    ground: int                     # the top-cell piece of x, parent coordinates
    d_parent: int                   # the distinguished member D, parent coordinates
    d_index: int                    # U-index of D in the sub family
    v_index: int                    # V-index (shared family) used to build D

    def to_parent(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.parent_points[i]
        return out

    def to_sub_point(self, x: int) -> int:
        return self.parent_points.index(x)


def relative_pieces(
    table: PieceTable,
    x: int,
    alpha: int,
    gamma: int,
    x2: int,
    u_idx: int,
    v_idx: int,
    workers: int = 1,
) -> RelativeAnalysis:
    """Re-run the engine on the refined subspace of x at level α.

    The subspace ground is the top-cell piece B_α(x, X, G); its U-family is
    the relativized refined-family enumeration taken verbatim (empty traces
    dropped), which contains the distinguished set D = ground ∩
    B_γ(x2, U, V).  The V-family is unchanged.  Requires 1 ≤ γ < α and x2 in
    the orbit of x inside U.
    """
    inst = table.instance
    if not (isinstance(alpha, int) and isinstance(gamma, int) and 1 <= gamma < alpha):
        raise ValueError("need levels 1 <= gamma < alpha")
    u = inst.basisU[u_idx]
    if not (u >> x2 & 1) or not (orbit(inst, x) >> x2 & 1):
        raise ValueError("x2 must lie in the orbit of x and in U")
    top_u = len(inst.basisU) - 1
    top_v = len(inst.basisV) - 1
    ground = piece(table, x, top_u, top_v, alpha)
    d_parent = ground & piece(table, x2, u_idx, v_idx, gamma)

    pts = tuple(to_list(ground))
    pmap = {p: i for i, p in enumerate(pts)}
    size = len(pts)
    full_sub = universe(size)

    def to_sub(mask: int) -> int:
        out = 0
        for p in bits(mask & ground):
            out |= 1 << pmap[p]
        return out

    members_sub: list[int] = []
    seen: set[int] = set()
    for s in refined_family(table, x, alpha):
        rel = to_sub(s)
        if rel == 0 or rel == full_sub or rel in seen:
            continue
        seen.add(rel)
        members_sub.append(rel)
    members_sub.append(full_sub)

    act_sub = [
        [pmap[inst.act[g][p]] for p in pts] for g in range(inst.group.order)
    ]
    sub = instance_from_families(
        inst.group,
        size,
        act_sub,
        members_sub,
        inst.basisV.members,
        inst.mode,
        name=f"{inst.name or 'instance'}/refined",
        require_translation_closed=(inst.mode == "strict"),
    )
    sub_table = analyze(sub, workers=workers)
    d_sub = to_sub(d_parent)
    try:
        d_index = sub.basisU.index(d_sub)
    except KeyError:
        raise ValueError(
            "distinguished set D is empty or missing from the relative family"
        ) from None
    return RelativeAnalysis(
        inst, sub, sub_table, pts, ground, d_parent, d_index, v_idx
    )
