"""Minimum feedback vertex set via a maximum induced forest dynamic program.

The solver walks an irredundant k-expression bottom-up.  A table maps label
states to weighted-partition cells; the state records, for every label class,
how the candidate forest intersects it:

* ``ABSENT``    - no forest vertex in the class;
* ``ONE``       - exactly one forest vertex;
* ``MANY_WAIT`` - at least two, and exactly one future add touching the class
  (with a populated partner class) is still expected: all its vertices will
  gain one common neighbor, so they count as a single connectivity node;
* ``MANY_DONE`` - at least two, and no future add with a populated partner may
  touch the class again (a second one would close a 4-cycle through the two
  shared neighbors).

A cell's partitions live on the labels in state ONE/MANY_WAIT plus a virtual
anchor element 0.  Blocks describe which of those connectivity nodes are
already linked; an entry survives to the root only if everything ends up in
one tree hanging off the anchor, which makes the kept forest plus one anchor
edge per component a single tree, i.e. the forest is genuinely acyclic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product

from .cwexpr import (AddEdges, CwExpression, Introduce, NotIrredundantError,
                     Relabel, check_irredundant, evaluate, iter_postorder,
                     validate)
from .partitions import Partition
from .stats import SolveStats
from .wpsets import MAX, WPSet, ac_reduce, acjoin, proj

ABSENT, ONE, MANY_WAIT, MANY_DONE = 0, 1, 2, 3
ANCHOR_BIT = 1

State = tuple[int, ...]
Table = dict[State, WPSet]

# For one label, the states a union node may assign given the two child
# states.  Exactly 15 child/parent combinations exist per label.
UNION_STATE_OPTIONS: dict[tuple[int, int], tuple[int, ...]] = {}
for _a in (ABSENT, ONE, MANY_WAIT, MANY_DONE):
    for _b in (ABSENT, ONE, MANY_WAIT, MANY_DONE):
        if _a == ABSENT:
            opts: tuple[int, ...] = (_b,)
        elif _b == ABSENT:
            opts = (_a,)
        elif _a == ONE and _b == ONE:
            opts = (MANY_WAIT, MANY_DONE)
        elif MANY_WAIT in (_a, _b) and MANY_DONE in (_a, _b):
            opts = ()  # one side still expects the add the other side forbids
        elif MANY_WAIT in (_a, _b):
            opts = (MANY_WAIT,)
        else:
            opts = (MANY_DONE,)
        UNION_STATE_OPTIONS[(_a, _b)] = opts
del _a, _b, opts


class FvsError(ValueError):
    pass


@dataclass
class FvsResult:
    forest_weight: int
    fvs_weight: int
    witness: tuple[str, ...] | None  # vertices to delete
    forest_witness: tuple[str, ...] | None
    stats: SolveStats


def state_ground(state: State) -> int:
    mask = ANCHOR_BIT
    for lbl, val in enumerate(state, start=1):
        if val == ONE or val == MANY_WAIT:
            mask |= 1 << lbl
    return mask


def _edge_cell(i: int, j: int, with_witness: bool) -> WPSet:
    mask = (1 << i) | (1 << j)
    cell = WPSet(mask, MAX)
    cell.add(Partition(mask, (mask,)), 0, frozenset() if with_witness else None)
    return cell


def _contrib(acc: dict[State, list[WPSet]], key: State, cell: WPSet) -> None:
    if cell.entries:
        acc.setdefault(key, []).append(cell)


def _finalize(acc: dict[State, list[WPSet]], k: int, use_reduce: bool,
              stats: SolveStats) -> Table:
    out: Table = {}
    bound = (k + 1) << k
    for key, cells in acc.items():
        if len(cells) == 1:
            merged = cells[0]
        else:
            merged = cells[0].copy()
            for extra in cells[1:]:
                merged.update(extra)
        if use_reduce and len(merged) > 1:
            merged = ac_reduce(merged)
            stats.reduce_calls += 1
        if merged.entries:
            if use_reduce:
                assert len(merged) <= bound
            out[key] = merged
            stats.observe_cell(len(merged))
    return out


def fvs_leaf(k: int, name: str, weight: int, with_witness: bool = False) -> Table:
    wit0 = frozenset() if with_witness else None
    wit1 = frozenset({name}) if with_witness else None
    untouched = WPSet(ANCHOR_BIT, MAX)
    untouched.add(Partition(ANCHOR_BIT, (ANCHOR_BIT,)), 0, wit0)
    lone = WPSet(ANCHOR_BIT | 2, MAX)
    # The single vertex either already hangs off the anchor or does not.
    lone.add(Partition(ANCHOR_BIT | 2, (ANCHOR_BIT | 2,)), weight, wit1)
    lone.add(Partition(ANCHOR_BIT | 2, (ANCHOR_BIT, 2)), weight, wit1)
    zero = (ABSENT,) * k
    one = (ONE,) + (ABSENT,) * (k - 1)
    return {zero: untouched, one: lone}


def fvs_add(table: Table, i: int, j: int, k: int, use_reduce: bool,
            stats: SolveStats, with_witness: bool = False) -> Table:
    """Add all edges between classes i and j (none may exist beforehand)."""
    out: Table = {}
    ii, jj = i - 1, j - 1
    edge = _edge_cell(i, j, with_witness)
    for state, cell in table.items():
        a, b = state[ii], state[jj]
        if a == ABSENT or b == ABSENT:
            out[state] = cell  # no forest vertex on one side: nothing changes
            continue
        # Classes that still wait for their allowed add get it consumed here;
        # every other populated/populated combination closes a cycle.
        if a == ONE and b == ONE:
            target = state
            drop = 0
        elif a == MANY_WAIT and b == ONE:
            target = state[:ii] + (MANY_DONE,) + state[ii + 1:]
            drop = 1 << i
        elif a == ONE and b == MANY_WAIT:
            target = state[:jj] + (MANY_DONE,) + state[jj + 1:]
            drop = 1 << j
        else:
            continue
        merged = acjoin(cell, edge)
        if drop:
            merged = proj(merged, drop)
        if merged.entries:
            if use_reduce:
                # single-cell transforms cannot outgrow their reduced source
                assert len(merged) <= (k + 1) << k
            out[target] = merged
            stats.observe_cell(len(merged))
    return out


def fvs_ren(table: Table, i: int, j: int, k: int, use_reduce: bool,
            stats: SolveStats, with_witness: bool = False) -> Table:
    """Relabel class i to j; table keys keep length k with slot i pinned ABSENT."""
    acc: dict[State, list[WPSet]] = {}
    ii, jj = i - 1, j - 1
    edge = _edge_cell(i, j, with_witness)
    for state, cell in table.items():
        a, b = state[ii], state[jj]
        if a == ABSENT:
            _contrib(acc, state, cell)
            continue
        if b == ABSENT:
            target = list(state)
            target[ii], target[jj] = ABSENT, a
            if a == MANY_DONE:
                moved = cell
            else:
                # Rename element i to j inside every partition.
                moved = proj(acjoin(cell, edge), 1 << i)
            _contrib(acc, tuple(target), moved)
            continue
        if a in (ONE, MANY_DONE) and b in (ONE, MANY_DONE):
            # Both classes populated and finished: the merged class is
            # finished too; its members must already be connected onward.
            target = list(state)
            target[ii], target[jj] = ABSENT, MANY_DONE
            drop = (1 << i if a == ONE else 0) | (1 << j if b == ONE else 0)
            _contrib(acc, tuple(target), proj(cell, drop))
        if a in (ONE, MANY_WAIT) and b in (ONE, MANY_WAIT):
            # Both still expecting their shared future add: merge the two
            # connectivity nodes, rejecting pairs already linked (that add
            # would close a cycle).
            target = list(state)
            target[ii], target[jj] = ABSENT, MANY_WAIT
            _contrib(acc, tuple(target), proj(acjoin(cell, edge), 1 << i))
    return _finalize(acc, k, use_reduce, stats)


def fvs_union(table_a: Table, table_b: Table, k: int, use_reduce: bool,
              stats: SolveStats, with_witness: bool = False) -> Table:
    acc: dict[State, list[WPSet]] = {}
    proj_cache: dict[tuple[int, int], WPSet] = {}

    def projected(cell: WPSet, drop: int) -> WPSet:
        if not drop:
            return cell
        key = (id(cell), drop)
        got = proj_cache.get(key)
        if got is None:
            got = proj_cache[key] = proj(cell, drop)
        return got

    for sa, ca in table_a.items():
        for sb, cb in table_b.items():
            options = [UNION_STATE_OPTIONS[(sa[l], sb[l])] for l in range(k)]
            if any(not o for o in options):
                continue
            for target in product(*options):
                # Classes finished at the parent lose their ONE-side element
                # before the join: their connectivity is resolved per side.
                drop_a = drop_b = 0
                for l in range(k):
                    if target[l] == MANY_DONE:
                        if sa[l] == ONE:
                            drop_a |= 2 << l
                        if sb[l] == ONE:
                            drop_b |= 2 << l
                pa = projected(ca, drop_a)
                pb = projected(cb, drop_b)
                if pa.entries and pb.entries:
                    _contrib(acc, target, acjoin(pa, pb))
    return _finalize(acc, k, use_reduce, stats)


def solve_fvs(expr: CwExpression, with_witness: bool = False,
              use_reduce: bool = True) -> FvsResult:
    started = time.perf_counter()
    validate(expr)
    if check_irredundant(expr):
        raise NotIrredundantError(
            "feedback vertex set requires an irredundant expression")
    stats = SolveStats()
    k = expr.k
    tables: dict[int, Table] = {}
    for node in iter_postorder(expr.root):
        if isinstance(node, Introduce):
            table = fvs_leaf(k, node.name, node.weight, with_witness)
            stats.observe_node("introduce")
        elif isinstance(node, AddEdges):
            table = fvs_add(tables.pop(id(node.child)), node.i, node.j, k,
                            use_reduce, stats, with_witness)
            stats.observe_node("add")
        elif isinstance(node, Relabel):
            table = fvs_ren(tables.pop(id(node.child)), node.i, node.j, k,
                            use_reduce, stats, with_witness)
            stats.observe_node("relabel")
        else:
            table = fvs_union(tables.pop(id(node.left)), tables.pop(id(node.right)),
                              k, use_reduce, stats, with_witness)
            stats.observe_node("union")
        tables[id(node)] = table

    root_table = tables[id(expr.root)]
    best_w = -1
    best_wit: frozenset | None = None
    for state, cell in root_table.items():
        if MANY_WAIT in state:
            continue  # a promised add never arrived
        ground = state_ground(state)
        entry = cell.entries.get(Partition(ground, (ground,)))
        if entry is not None and entry[0] > best_w:
            best_w, best_wit = entry
    graph = evaluate(expr)
    total = graph.total_weight()
    assert best_w >= 0  # the empty forest is always available
    forest = best_w
    witness = None
    forest_witness = None
    if with_witness and best_wit is not None:
        forest_witness = tuple(sorted(best_wit))
        witness = tuple(sorted(set(graph.weights) - best_wit))
    stats.elapsed_ms = (time.perf_counter() - started) * 1000.0
    return FvsResult(forest_weight=forest, fvs_weight=total - forest,
                     witness=witness, forest_witness=forest_witness, stats=stats)
