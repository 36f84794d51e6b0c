"""Run statistics carried by every solver result."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field


@dataclass
class SolveStats:
    dp_nodes: int = 0
    reduce_calls: int = 0
    max_cell_entries: int = 0
    elapsed_ms: float = 0.0
    node_kinds: Counter = field(default_factory=Counter)

    def observe_node(self, kind: str) -> None:
        self.dp_nodes += 1
        self.node_kinds[kind] += 1

    def observe_cell(self, size: int) -> None:
        if size > self.max_cell_entries:
            self.max_cell_entries = size

    def as_dict(self) -> dict:
        return {
            "dp_nodes": self.dp_nodes,
            "max_cell_entries": self.max_cell_entries,
            "reduce_calls": self.reduce_calls,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
