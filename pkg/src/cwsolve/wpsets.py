"""Sets of weighted partitions and the operators the solvers are built from.

A :class:`WPSet` maps partitions of one ground set to the best weight seen so
far (per its optimization direction), optionally together with a witness
vertex set.  Insertion keeps the set normalized: one entry per partition,
optimal weight, ties resolved toward the lexicographically smallest witness.

``reduce`` and ``ac_reduce`` are the table-pruning workhorses.  Both encode
each partition as a row of the cut matrix over GF(2) (columns indexed by the
two-sided cuts of the ground set that fix the minimum element's side) and keep
an optimum-weight row basis; a basis row set answers every completion query
exactly like the full set does.  ``ac_reduce`` additionally groups rows by
``|V| - #blocks`` so that the surviving entries also preserve optima under the
acyclicity constraint; its output can be larger by that factor.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .partitions import Partition, as_mask, merge_blocks

MAX = "max"
MIN = "min"

Witness = frozenset
Entry = tuple[int, "Witness | None"]

NEG_INF = float("-inf")
POS_INF = float("inf")


def _witness_key(w: Witness) -> tuple:
    return tuple(sorted(w))


def combine_witness(a: Witness | None, b: Witness | None) -> Witness | None:
    if a is None:
        return b
    if b is None:
        return a
    return a | b


class WPSet:
    """A normalized set of weighted partitions over one ground set."""

    __slots__ = ("ground", "direction", "entries")

    def __init__(self, ground: int | Iterable[int], direction: str = MAX):
        if direction not in (MAX, MIN):
            raise ValueError(f"unknown direction {direction!r}")
        self.ground = as_mask(ground)
        self.direction = direction
        self.entries: dict[Partition, Entry] = {}

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple], ground: int | Iterable[int],
                   direction: str = MAX) -> WPSet:
        """Build a set from (partition, weight[, witness]) tuples, normalizing."""
        out = cls(ground, direction)
        for pair in pairs:
            out.add(*pair)
        return out

    def add(self, p: Partition, weight: int, witness: Witness | None = None) -> None:
        cur = self.entries.get(p)
        if cur is None:
            self.entries[p] = (weight, witness)
            return
        cw, cwit = cur
        if (weight > cw) if self.direction == MAX else (weight < cw):
            self.entries[p] = (weight, witness)
        elif weight == cw and witness is not None:
            if cwit is None or _witness_key(witness) < _witness_key(cwit):
                self.entries[p] = (weight, witness)

    def update(self, other: WPSet) -> None:
        if other.ground != self.ground or other.direction != self.direction:
            raise ValueError("can only merge sets over one ground set and direction")
        for p, (w, wit) in other.entries.items():
            self.add(p, w, wit)

    def copy(self) -> WPSet:
        out = WPSet(self.ground, self.direction)
        out.entries = dict(self.entries)
        return out

    def items(self) -> Iterator[tuple[Partition, Entry]]:
        return iter(self.entries.items())

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, p: Partition) -> bool:
        return p in self.entries

    def __repr__(self) -> str:
        body = ", ".join(f"({p!r}, {w})" for p, (w, _) in self.entries.items())
        return f"WPSet[{self.direction}]{{{body}}}"


def rmc(pairs: Iterable[tuple] | WPSet, ground: int | Iterable[int] | None = None,
        direction: str | None = None) -> WPSet:
    """Normalize to one optimal entry per partition.

    Accepts either raw (partition, weight[, witness]) tuples plus an explicit
    ground set and direction, or an existing set (returned as a copy, since
    sets stay normalized by construction).
    """
    if isinstance(pairs, WPSet):
        return pairs.copy()
    if ground is None or direction is None:
        raise ValueError("raw entries need an explicit ground set and direction")
    return WPSet.from_pairs(pairs, ground, direction)


def proj(a: WPSet, drop: int | Iterable[int]) -> WPSet:
    """Drop the given elements; entries owning a block inside them vanish."""
    dmask = as_mask(drop)
    if dmask & ~a.ground:
        raise ValueError("proj: elements outside the ground set")
    if not dmask:
        return a.copy()
    keep = ~dmask
    out = WPSet(a.ground & keep, a.direction)
    for p, (w, wit) in a.entries.items():
        blocks = []
        dead = False
        for b in p.blocks:
            b2 = b & keep
            if not b2:
                dead = True
                break
            blocks.append(b2)
        if dead:
            continue
        blocks.sort()
        out.add(Partition(out.ground, tuple(blocks)), w, wit)
    return out


def _shifted(base: WPSet, weight: int, witness, ground: int) -> WPSet:
    out = WPSet(ground, base.direction)
    if weight == 0 and witness is None:
        out.entries = dict(base.entries)
        return out
    for p, (w, wit) in base.entries.items():
        out.entries[p] = (w + weight, combine_witness(wit, witness))
    return out


def _join(a: WPSet, b: WPSet, check_acyclic: bool) -> WPSet:
    if a.direction != b.direction:
        raise ValueError("joined sets must share the optimization direction")
    ground = a.ground | b.ground
    if not a.entries or not b.entries:
        return WPSet(ground, a.direction)
    # A single entry over the empty ground set only shifts weights; this also
    # holds under the acyclicity check (extending by fresh singletons never
    # closes a cycle).
    if a.ground == 0 and len(a.entries) == 1:
        (w1, x1), = a.entries.values()
        return _shifted(b, w1, x1, ground)
    if b.ground == 0 and len(b.entries) == 1:
        (w2, x2), = b.entries.values()
        return _shifted(a, w2, x2, ground)
    out = WPSet(ground, a.direction)
    n = ground.bit_count()
    ext_a = (b.ground & ~a.ground).bit_count()
    ext_b = (a.ground & ~b.ground).bit_count()
    for p, (w1, x1) in a.entries.items():
        np_ext = len(p.blocks) + ext_a
        for q, (w2, x2) in b.entries.items():
            blocks = merge_blocks(p.blocks, q.blocks)
            if check_acyclic and n + len(blocks) != np_ext + len(q.blocks) + ext_b:
                continue
            out.add(Partition(ground, blocks), w1 + w2, combine_witness(x1, x2))
    return out


def join_sets(a: WPSet, b: WPSet) -> WPSet:
    """All pairwise joins with summed weights, over the united ground set."""
    return _join(a, b, check_acyclic=False)


def acjoin(a: WPSet, b: WPSet) -> WPSet:
    """Like :func:`join_sets` but keeps only cycle-free combinations."""
    return _join(a, b, check_acyclic=True)


def query_opt(a: WPSet, q: Partition, mode: str = "plain") -> int | float:
    """Best weight of an entry that q completes into a single connected block.

    ``mode="acyclic"`` additionally demands the completion closes no cycle.
    Empty qualifying set yields -inf (max) or +inf (min).
    """
    if mode not in ("plain", "acyclic"):
        raise ValueError(f"unknown query mode {mode!r}")
    if q.ground != a.ground:
        raise ValueError("query partition must share the ground set")
    is_max = a.direction == MAX
    best = NEG_INF if is_max else POS_INF
    n = a.ground.bit_count()
    nq = len(q.blocks)
    for p, (w, _) in a.entries.items():
        joined = merge_blocks(p.blocks, q.blocks)
        if len(joined) != 1:
            continue
        if mode == "acyclic" and n + 1 - (len(p.blocks) + nq) != 0:
            continue
        if (w > best) if is_max else (w < best):
            best = w
    return best


def cut_row(p: Partition) -> int:
    """GF(2) row of p over all cuts of the ground set pinning the minimum element.

    Bit c (a subset of the non-minimum elements, read as a compressed index) is
    set iff every block of p lies entirely on one side of the cut.  The number
    of set bits is always 2^(#blocks - 1).
    """
    ground = p.ground
    if not ground:
        return 1
    pivot = ground & -ground
    rest = ground ^ pivot
    pos = {}
    i = 0
    m = rest
    while m:
        low = m & -m
        pos[low] = i
        i += 1
        m ^= low
    indices = [0]
    for blk in p.blocks:
        if blk & pivot:
            continue
        comp = 0
        bm = blk
        while bm:
            low = bm & -bm
            comp |= 1 << pos[low]
            bm ^= low
        indices += [idx | comp for idx in indices]
    row = 0
    for idx in indices:
        row |= 1 << idx
    return row


def max_weight_basis(rows: list[int], weights: list[int], direction: str = MAX) -> list[int]:
    """Indices of an optimum-weight basis of the GF(2) row space.

    Greedy in optimal-weight-first order (stable on input order for ties) with
    incremental elimination; optimal by the matroid exchange property.
    """
    order = sorted(range(len(rows)), key=weights.__getitem__, reverse=direction == MAX)
    pivots: list[tuple[int, int]] = []  # (pivot bit, row), kept sorted by bit desc
    chosen = []
    for idx in order:
        v = rows[idx]
        for pb, pr in pivots:
            if (v >> pb) & 1:
                v ^= pr
        if v:
            bit = v.bit_length() - 1
            lo = 0
            while lo < len(pivots) and pivots[lo][0] > bit:
                lo += 1
            pivots.insert(lo, (bit, v))
            chosen.append(idx)
    return chosen


def reduce(a: WPSet) -> WPSet:
    """Representative subset of at most 2^(|V|-1) entries.

    Every completion query (``query_opt`` in plain mode, for any partition q)
    answers identically on the output and the input.
    """
    n = a.ground.bit_count()
    if n == 0 or len(a.entries) <= 1:
        # The empty ground set admits a single partition, so normalization
        # already leaves at most one (optimal) entry.
        return a.copy()
    items = list(a.entries.items())
    rows = [cut_row(p) for p, _ in items]
    weights = [w for _, (w, _) in items]
    keep = set(max_weight_basis(rows, weights, a.direction))
    out = WPSet(a.ground, a.direction)
    for i, (p, entry) in enumerate(items):
        if i in keep:
            out.entries[p] = entry
    assert len(out.entries) <= 1 << (n - 1)
    return out


def ac_reduce(a: WPSet) -> WPSet:
    """Acyclicity-preserving representative subset, at most |V| * 2^(|V|-1) entries.

    Entries are grouped by ``|V| - #blocks`` before taking per-group bases:
    within one group, any entry that joins with q into a single block does so
    with the same acyclicity status, so a plain basis suffices per group.
    Maximization only.
    """
    if a.direction != MAX:
        raise ValueError("ac_reduce is defined for maximization sets only")
    n = a.ground.bit_count()
    if n == 0 or len(a.entries) <= 1:
        return a.copy()
    items = list(a.entries.items())
    groups: dict[int, list[int]] = {}
    for i, (p, _) in enumerate(items):
        groups.setdefault(n - len(p.blocks), []).append(i)
    keep = set()
    for key in sorted(groups):
        idxs = groups[key]
        rows = [cut_row(items[i][0]) for i in idxs]
        weights = [items[i][1][0] for i in idxs]
        for local in max_weight_basis(rows, weights, MAX):
            keep.add(idxs[local])
    out = WPSet(a.ground, MAX)
    for i, (p, entry) in enumerate(items):
        if i in keep:
            out.entries[p] = entry
    assert len(out.entries) <= n << (n - 1)
    return out
