"""The level-by-level piece engine: signatures, canonical partitions, ranks.

For every cell (U_n, V_m) and level α the points of U_n are partitioned into
α-pieces.  Level 0 treats U_n itself as the single 0-piece.  The level-1
signature of x records which U_l the local orbit of x meets; the successor
signature records which level-α pieces of which cells the local orbit meets,
as canonical triples.  Pieces are the classes of signature equality, so they
are unions of local orbits, and the per-cell orbit partition is computed once
and labelled level after level.

Partitions refine downward and the successor table is a function of the
current table, so the first level whose partitions equal the next level's is
a genuine fixpoint; that level is the stabilization L.  Piece ids are content
hashes of the canonical signature encoding, hence stable across runs, worker
counts, and instances.
"""

from __future__ import annotations

import hashlib
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .bits import bits, is_subset
from .gspace import ActionInstance, orbit, translate_set
from .algebra import conjugate
from .saturation import cached_reach, orbit_partition, reach_common

WORKER_ENV_VAR = "ORBITPIECES_MAX_WORKERS"


class _StableLevel:
    """Sentinel for 'any level at or beyond stabilization'; greater than every int."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "STABLE"

    def __gt__(self, other):
        return not isinstance(other, _StableLevel)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _StableLevel)


STABLE = _StableLevel()


@dataclass(frozen=True)
class Signature:
    """Canonical level invariant: U-indices at level 1, (pid, n, m) triples above."""

    level: int
    entries: frozenset

    def canonical(self) -> tuple:
        if self.level == 1:
            return tuple(sorted(self.entries))
        return tuple(sorted(self.entries, key=lambda t: (t[1], t[2], t[0])))


_SIG_LOCK = threading.Lock()
_SIG_IDS: dict[str, str] = {}
_SIG_PAYLOADS: dict[str, str] = {}


def _intern_signature(payload: str) -> str:
    got = _SIG_IDS.get(payload)
    if got is not None:
        return got
    pid = hashlib.blake2b(payload.encode(), digest_size=8).hexdigest()
    with _SIG_LOCK:
        known = _SIG_PAYLOADS.get(pid)
        if known is None:
            _SIG_PAYLOADS[pid] = payload
            _SIG_IDS[payload] = pid
        elif known != payload:
            raise RuntimeError(f"piece-id hash collision on {pid}")
        else:
            _SIG_IDS[payload] = pid
    return pid


def _encode_level1(indices: tuple[int, ...]) -> str:
    return "1|" + ",".join(map(str, indices))


def _encode_successor(triples) -> str:
    return "s|" + ";".join(f"{n},{m},{pid}" for (n, m, pid) in triples)


class PieceTable:
    """All piece partitions of one instance, per cell and level, plus lookups."""

    def __init__(self, instance, cells, cell_orbits, levels, signatures, stabilization):
        self.instance = instance
        self.cells = cells
        self.cell_orbits = cell_orbits
        self.levels = levels
        self.signatures = signatures
        self.stabilization = stabilization
        self._caches: dict = {}

    def cell_index(self, u_idx: int, v_idx: int) -> int:
        return u_idx * len(self.instance.basisV) + v_idx

    def resolve_level(self, level) -> int:
        """Clamp a requested level (int or STABLE) to a stored table index ≥ 1."""
        if isinstance(level, _StableLevel):
            return self.stabilization
        if not isinstance(level, int) or level < 0:
            raise ValueError(f"bad level {level!r}")
        return min(level, self.stabilization)

    def blocks(self, u_idx: int, v_idx: int, level) -> list[tuple[str, int]]:
        """The (pieceId, mask) blocks of one cell at one level ≥ 1."""
        lvl = self.resolve_level(level)
        if lvl == 0:
            raise ValueError("blocks are defined for levels >= 1")
        return self.levels[lvl - 1][self.cell_index(u_idx, v_idx)]


def _effective_workers(workers: int) -> int:
    cap = os.environ.get(WORKER_ENV_VAR)
    if cap is not None:
        workers = min(workers, max(1, int(cap)))
    return max(1, workers)


def _map_cells(func, n_cells: int, workers: int) -> list:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, range(n_cells)))
    return [func(ci) for ci in range(n_cells)]


def _group_blocks(labelled) -> list[tuple[str, int]]:
    """Merge (pid, mask) pairs by pid, order blocks by least point."""
    merged: dict[str, int] = {}
    for pid, mask in labelled:
        merged[pid] = merged.get(pid, 0) | mask
    out = list(merged.items())
    out.sort(key=lambda pm: pm[1] & -pm[1])
    return out


def successor_level(inst: ActionInstance, cells, cell_orbits, prev_level, workers: int = 1):
    """One refinement step: label every cell's orbits against the previous level.

    Returns (level_data, new_signatures).  Exposed separately so the oracle
    suites and the stabilization-bound check can re-run single steps.
    """
    new_sigs: dict[str, Signature] = {}

    def one_cell(ci: int):
        labelled = []
        for part in cell_orbits[ci]:
            triples = []
            for cj, (n2, m2) in enumerate(cells):
                for pid, mask in prev_level[cj]:
                    if part & mask:
                        triples.append((n2, m2, pid))
            triples.sort()
            pid = _intern_signature(_encode_successor(triples))
            if pid not in new_sigs:
                new_sigs[pid] = Signature(
                    0, frozenset((p, n2, m2) for (n2, m2, p) in triples)
                )
            labelled.append((pid, part))
        return _group_blocks(labelled)

    data = _map_cells(one_cell, len(cells), workers)
    return data, new_sigs


def _same_partitions(a, b) -> bool:
    for ca, cb in zip(a, b):
        if [m for _, m in ca] != [m for _, m in cb]:
            return False
    return True


def analyze(inst: ActionInstance, workers: int = 1) -> PieceTable:
    """Run the refinement to its fixpoint and return the full piece table."""
    workers = _effective_workers(workers)
    membersU = inst.basisU.members
    membersV = inst.basisV.members
    cells = tuple((n, m) for n in range(len(membersU)) for m in range(len(membersV)))
    cell_orbits = tuple(
        orbit_partition(inst, membersU[n], membersV[m]) for (n, m) in cells
    )
    signatures: dict[str, Signature] = {}

    def level1_cell(ci: int):
        labelled = []
        for part in cell_orbits[ci]:
            indices = tuple(l for l, ul in enumerate(membersU) if part & ul)
            pid = _intern_signature(_encode_level1(indices))
            if pid not in signatures:
                signatures[pid] = Signature(1, frozenset(indices))
            labelled.append((pid, part))
        return _group_blocks(labelled)

    levels = [_map_cells(level1_cell, len(cells), workers)]
    while True:
        data, new_sigs = successor_level(inst, cells, cell_orbits, levels[-1], workers)
        if _same_partitions(data, levels[-1]):
            break
        for pid, sig in new_sigs.items():
            signatures.setdefault(pid, Signature(len(levels) + 1, sig.entries))
        levels.append(data)
    stabilization = len(levels)
    table = PieceTable(inst, cells, cell_orbits, levels, signatures, stabilization)
    return table


# ---------------------------------------------------------------------------
# lookups


def piece(table: PieceTable, x: int, u_idx: int, v_idx: int, level) -> int:
    """The level-α piece of x at cell (U_n, V_m); level 0 returns U_n itself."""
    inst = table.instance
    u = inst.basisU[u_idx]
    if not u >> x & 1:
        raise ValueError(f"point {x} is not in U_{u_idx}")
    if isinstance(level, int) and level == 0:
        return u
    lvl = table.resolve_level(level)
    for _, mask in table.levels[lvl - 1][table.cell_index(u_idx, v_idx)]:
        if mask >> x & 1:
            return mask
    raise RuntimeError("piece table does not cover the cell (internal error)")


def signature(table: PieceTable, x: int, u_idx: int, v_idx: int, level) -> Signature:
    """The canonical signature whose equality class is the piece of x."""
    lvl = table.resolve_level(level)
    if lvl < 1:
        raise ValueError("signatures are defined for levels >= 1")
    inst = table.instance
    u = inst.basisU[u_idx]
    if not u >> x & 1:
        raise ValueError(f"point {x} is not in U_{u_idx}")
    for pid, mask in table.levels[lvl - 1][table.cell_index(u_idx, v_idx)]:
        if mask >> x & 1:
            return table.signatures[pid]
    raise RuntimeError("piece table does not cover the cell (internal error)")


def scott_rank(table: PieceTable, x: int) -> int:
    """The least level γ ≥ 1 at which orbit-internal piece distinctions are final.

    For every cell and every pair of orbit points inside its U: equal γ-pieces
    must already imply equal stable pieces.
    """
    inst = table.instance
    orb = orbit(inst, x)
    stable = table.levels[table.stabilization - 1]
    for gamma in range(1, table.stabilization + 1):
        data = table.levels[gamma - 1]
        ok = True
        for ci in range(len(table.cells)):
            stable_blocks = stable[ci]
            for _, mask in data[ci]:
                trace = mask & orb
                if not trace:
                    continue
                low = trace & -trace
                for _, smask in stable_blocks:
                    if smask & low:
                        if trace & ~smask:
                            ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return gamma
    return table.stabilization


def stable_partition(table: PieceTable) -> list[int]:
    """The stable pieces of the top cell (X, G): a partition of all of X."""
    u_idx = len(table.instance.basisU) - 1
    v_idx = len(table.instance.basisV) - 1
    return [mask for _, mask in table.blocks(u_idx, v_idx, STABLE)]


def pattern_partition(inst: ActionInstance) -> list[int]:
    """Canonical partition computed independently of the piece engine.

    Points are grouped by the pattern {n : orbit(x) meets U_n} — equivalently
    by membership in the saturations G·U_n.  Used as the cross-check for the
    level-1 (X, G) pieces.
    """
    membersU = inst.basisU.members
    blocks: dict[frozenset, int] = {}
    for x in range(inst.size):
        gx = orbit(inst, x)
        pat = frozenset(n for n, un in enumerate(membersU) if gx & un)
        blocks[pat] = blocks.get(pat, 0) | 1 << x
    out = list(blocks.values())
    out.sort(key=lambda m: m & -m)
    return out


# ---------------------------------------------------------------------------
# the successor-piece decomposition (differential oracle target)


def _decomp_tables(table: PieceTable):
    """Lazy per-table translate/conjugate index maps and U-subset lists."""
    cache = table._caches.get("decomp")
    if cache is not None:
        return cache
    inst = table.instance
    membersU = inst.basisU.members
    membersV = inst.basisV.members
    order = inst.group.order
    t_u = [
        [inst.basisU.index(translate_set(inst, u, g)) for g in range(order)]
        for u in membersU
    ]
    c_v = [
        [inst.basisV.index(conjugate(v, g, inst.group)) for g in range(order)]
        for v in membersV
    ]
    subsets = [
        [i for i, ui in enumerate(membersU) if is_subset(ui, un)]
        for un in membersU
    ]
    cache = (t_u, c_v, subsets, {})
    table._caches["decomp"] = cache
    return cache


def piece_from_decomposition(table: PieceTable, x: int, u_idx: int, v_idx: int, level) -> int:
    """Evaluate the successor piece via the translated-subcell decomposition.

    This is the right-hand side of the structural successor identity: over all
    cells (n, m), intersect (a) the union of level-α pieces at translated
    subcells (hU_i, V_m^h) hit by the local orbit of x — skipping pairs (n, m)
    that admit no candidate (U_i, h, g) at all — and (b) the complement of U_n
    joined with the union of level-α pieces at (n, m) hit by the local orbit.
    The result is the candidate for the level-(α+1) piece of x at (U, V),
    compared against the engine's table by the differential suite.
    """
    inst = table.instance
    membersU = inst.basisU.members
    membersV = inst.basisV.members
    u = membersU[u_idx]
    v = membersV[v_idx]
    if not u >> x & 1:
        raise ValueError(f"point {x} is not in U_{u_idx}")
    lvl = table.resolve_level(level)
    if lvl < 1:
        raise ValueError("the decomposition needs level >= 1")
    data = table.levels[lvl - 1]
    t_u, c_v, subsets, common_reach = _decomp_tables(table)

    reach = cached_reach(inst, x, u, v)
    orb = 0
    for g in bits(reach):
        orb |= 1 << inst.act[g][x]

    hits: dict[int, int] = {}

    def blocks_hit(ci: int) -> int:
        got = hits.get(ci)
        if got is None:
            got = 0
            for _, mask in data[ci]:
                if mask & orb:
                    got |= mask
            hits[ci] = got
        return got

    n_v = len(membersV)
    full = inst.full_points
    result = full
    for n, un in enumerate(membersU):
        candidates: set[tuple[int, int]] = set()  # (U-index of hU_i, h)
        for i in subsets[n]:
            key = (u_idx, v_idx, i)
            ru = common_reach.get(key)
            if ru is None:
                ru = reach_common(inst, membersU[i], u, v)
                common_reach[key] = ru
            row = t_u[i]
            for h in bits(ru):
                j = row[h]
                if membersU[j] & orb:
                    candidates.add((j, h))
        for m in range(n_v):
            second = (full & ~un) | blocks_hit(n * n_v + m)
            result &= second
            if candidates:
                first = 0
                for j, h in candidates:
                    first |= blocks_hit(j * n_v + c_v[m][h])
                result &= first
    return result
