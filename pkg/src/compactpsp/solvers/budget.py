from __future__ import annotations

import time
from dataclasses import dataclass

from ..errors import ArgumentError, BudgetError


@dataclass(frozen=True)
class SolveBudget:
    """Per-call resource caps; solvers raise ``BudgetError`` when one is hit."""

    max_universe_for_dp: int = 25
    max_subsets_enumerated: int = 50_000_000
    time_limit: float | None = None
    max_vector_picks: int = 8
    max_pattern_vertices: int = 8
    max_host_vertices: int = 12

    def __post_init__(self):
        for name in (
            "max_universe_for_dp",
            "max_subsets_enumerated",
            "max_vector_picks",
            "max_pattern_vertices",
            "max_host_vertices",
        ):
            if getattr(self, name) <= 0:
                raise ArgumentError(f"{name} must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ArgumentError("time_limit must be positive")


class Stopwatch:
    """Counts search nodes and enforces node and wall-clock caps."""

    __slots__ = ("budget", "nodes", "start")

    def __init__(self, budget: SolveBudget):
        self.budget = budget
        self.nodes = 0
        self.start = time.perf_counter()

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_subsets_enumerated:
            raise BudgetError("node budget exhausted", self.stats())
        if self.budget.time_limit is not None and not self.nodes & 1023:
            if time.perf_counter() - self.start > self.budget.time_limit:
                raise BudgetError("time limit exceeded", self.stats())

    def stats(self) -> dict:
        return {"nodes": self.nodes, "elapsed_s": round(time.perf_counter() - self.start, 6)}
