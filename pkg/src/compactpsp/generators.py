"""Pattern library, seeded instance generators and the DP-vs-BnB benchmark."""

from __future__ import annotations

import csv
import io as _io
import math
import time
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable

import numpy as np

from .core import Graph, PspInstance, SetFamily
from .errors import ArgumentError
from .solvers import SolveBudget, solve_set_packing_bnb, solve_set_packing_dp

PATTERNS: dict[str, Graph] = {
    "edge": Graph(2, ((1, 2),)),
    "p3": Graph(3, ((1, 2), (2, 3))),
    "k3": Graph(3, ((1, 2), (1, 3), (2, 3))),
    "c4": Graph(4, ((1, 2), (2, 3), (3, 4), (1, 4))),
    "paw": Graph(4, ((1, 2), (1, 3), (2, 3), (3, 4))),
}


def pattern_by_name(name: str) -> Graph:
    """A library pattern, or a graph JSON file when ``name`` is a path."""
    if name in PATTERNS:
        return PATTERNS[name]
    path = Path(name)
    if path.suffix == ".json" and path.exists():
        from .io import graph_from_json, read_json

        return graph_from_json(read_json(path))
    raise ArgumentError(f"unknown pattern {name!r}; choose from {sorted(PATTERNS)} or a .json file")


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(1, n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(1, n + 1), 2)))


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi ``G(n, p)`` on ``1..n``."""
    pairs = list(combinations(range(1, n + 1), 2))
    keep = rng.random(len(pairs)) < p
    return Graph(n, tuple(e for e, k in zip(pairs, keep) if k))


def random_pairs(
    count: int,
    n_values: Iterable[int],
    pattern_names: Iterable[str],
    seed: int,
    p: float = 0.5,
) -> list[tuple[Graph, str]]:
    """``count`` (host, pattern name) pairs cycling through sizes and patterns."""
    rng = np.random.default_rng(seed)
    sizes = list(n_values)
    names = list(pattern_names)
    out = []
    for t in range(count):
        n = sizes[t % len(sizes)]
        name = names[(t // len(sizes)) % len(names)]
        out.append((random_graph(n, p, rng), name))
    return out


def generate_random_psp(
    universe_size: int,
    set_count: int,
    density: float,
    seed: int,
    r: int = 1,
) -> PspInstance:
    """Each element joins each set independently with probability ``density``."""
    if not 0.0 < density < 1.0:
        raise ArgumentError(f"density must lie in (0, 1), got {density}")
    if universe_size < 0 or set_count < 0:
        raise ArgumentError("sizes must be non-negative")
    rng = np.random.default_rng(seed)
    member = rng.random((set_count, universe_size)) < density
    weights = 1 << np.arange(universe_size, dtype=np.uint64) if universe_size else None
    masks = []
    for row in member:
        masks.append(int((row * weights).sum()) if universe_size else 0)
    return PspInstance(SetFamily.from_masks(universe_size, masks), r)


# ---------------------------------------------------------------- benchmark

CSV_HEADER = ("universe", "sets", "r", "dp_ms", "bnb_ms", "agree")


@dataclass(frozen=True)
class BenchConfig:
    universes: tuple[int, ...] = (10, 12, 14, 16)
    set_counts: tuple[int, ...] = (64, 256, 1024)
    r: int = 3
    density: float = 0.2
    seed: int = 20240607
    repeats: int = 1


@dataclass(frozen=True)
class BenchRow:
    universe: int
    sets: int
    r: int
    dp_ms: float
    bnb_ms: float
    agree: bool

    def as_csv(self) -> tuple:
        return (
            self.universe,
            self.sets,
            self.r,
            f"{self.dp_ms:.3f}",
            f"{self.bnb_ms:.3f}",
            int(self.agree),
        )


def _timed(fn, repeats: int):
    best, result = math.inf, None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, (time.perf_counter() - t0) * 1000.0)
    return best, result


def bench_dichotomy(config: BenchConfig = BenchConfig(), budget: SolveBudget | None = None):
    """Time the mask DP and branch-and-bound on the same random families."""
    budget = budget or SolveBudget()
    rows = []
    for t, (u, s) in enumerate((u, s) for u in config.universes for s in config.set_counts):
        inst = generate_random_psp(u, s, config.density, config.seed + t, config.r)
        dp_ms, (best, _) = _timed(lambda: solve_set_packing_dp(inst, budget), config.repeats)
        bnb_ms, (found, _) = _timed(lambda: solve_set_packing_bnb(inst, budget), config.repeats)
        rows.append(BenchRow(u, s, config.r, dp_ms, bnb_ms, (best >= config.r) == found))
    return rows


def rows_to_csv(rows: Iterable[BenchRow]) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv())
    return buf.getvalue()


def dp_doubling_slopes(rows: Iterable[BenchRow]) -> dict[int, float]:
    """Per set count, least-squares slope of ``log2(dp_ms)`` against universe size.

    A value near 1 means DP time doubles with each extra element.
    """
    by_sets: dict[int, list[tuple[int, float]]] = {}
    for row in rows:
        if row.dp_ms > 0:
            by_sets.setdefault(row.sets, []).append((row.universe, math.log2(row.dp_ms)))
    out = {}
    for s, pts in sorted(by_sets.items()):
        if len({u for u, _ in pts}) < 2:
            continue
        x = np.array([u for u, _ in pts], dtype=float)
        y = np.array([v for _, v in pts])
        out[s] = float(np.polyfit(x, y, 1)[0])
    return out
