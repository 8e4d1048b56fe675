"""Seeded random instances.

Modes:

``uniform-box``
    Points scattered uniformly over the ``cols x rows`` rectangle; ``cells``
    draws of the per-cell count set the total number of points.
``connected-cells``
    Exactly ``cells`` non-empty cells grown one at a time from a random
    start, each new cell touching the set by a side or a corner.
``clustered``
    Exactly ``cells`` distinct cells picked anywhere in the grid, points in
    each bunched around a random spot.

Coordinates are multiples of 1e-6, so files stay short and round-trip
exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GenerationError
from .geometry import Instance, build_instance

MODES = ("uniform-box", "connected-cells", "clustered")
_Q = 10**6
_NEIGHBOURS = [(di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1) if (di, dj) != (0, 0)]


@dataclass(frozen=True)
class GenParams:
    mode: str = "connected-cells"
    rows: int = 4
    cols: int = 4
    cells: int = 6
    ppc: tuple[int, int] = (1, 3)
    seed: int = 0

    def validate(self) -> None:
        if self.mode not in MODES:
            raise GenerationError(f"unknown mode {self.mode!r}; choose from {MODES}")
        if self.rows < 1 or self.cols < 1:
            raise GenerationError("grid extent must be at least 1x1")
        lo, hi = self.ppc
        if lo < 1 or hi < lo:
            raise GenerationError(f"bad points-per-cell range {lo}..{hi}")
        if self.cells < 1:
            raise GenerationError("need at least one cell")
        if self.mode != "uniform-box" and self.cells > self.rows * self.cols:
            raise GenerationError(f"{self.cells} cells do not fit a {self.rows}x{self.cols} grid")


def _coord(cell: int, frac_q: int) -> float:
    return (cell * _Q + int(frac_q)) / _Q


def _fill_cell(rng: np.random.Generator, i: int, j: int, count: int, spread: float | None) -> list[tuple[float, float]]:
    if spread is None:
        u = rng.integers(0, _Q, size=(count, 2))
    else:
        centre = rng.random(2)
        raw = centre + rng.normal(0.0, spread, size=(count, 2))
        u = np.clip(np.floor(raw * _Q), 0, _Q - 1).astype(np.int64)
    return [(_coord(i, a), _coord(j, b)) for a, b in u]


def _grow_connected(rng: np.random.Generator, p: GenParams) -> list[tuple[int, int]]:
    start = (int(rng.integers(p.cols)), int(rng.integers(p.rows)))
    chosen = [start]
    taken = {start}
    while len(chosen) < p.cells:
        frontier = sorted(
            {
                (i + di, j + dj)
                for i, j in chosen
                for di, dj in _NEIGHBOURS
                if 0 <= i + di < p.cols and 0 <= j + dj < p.rows and (i + di, j + dj) not in taken
            }
        )
        nxt = frontier[int(rng.integers(len(frontier)))]
        chosen.append(nxt)
        taken.add(nxt)
    return chosen


def generate_instance(p: GenParams) -> Instance:
    """Build the instance described by `p`; identical params give identical output."""
    p.validate()
    rng = np.random.default_rng(p.seed)
    lo, hi = p.ppc
    points: list[tuple[float, float]] = []
    if p.mode == "uniform-box":
        n = int(rng.integers(lo, hi + 1, size=p.cells).sum())
        xs = rng.integers(0, p.cols * _Q, size=n)
        ys = rng.integers(0, p.rows * _Q, size=n)
        points = [(int(x) / _Q, int(y) / _Q) for x, y in zip(xs, ys)]
    elif p.mode == "connected-cells":
        for i, j in _grow_connected(rng, p):
            points += _fill_cell(rng, i, j, int(rng.integers(lo, hi + 1)), None)
    else:
        flat = rng.choice(p.rows * p.cols, size=p.cells, replace=False)
        for f in flat:
            j, i = divmod(int(f), p.cols)
            points += _fill_cell(rng, i, j, int(rng.integers(lo, hi + 1)), 0.15)
    return build_instance(points)


def cells_connected(inst: Instance) -> bool:
    """True iff the non-empty cells form one component under 8-adjacency."""
    cells = set(inst.cell_order)
    start = inst.cell_order[0]
    seen = {start}
    stack = [start]
    while stack:
        i, j = stack.pop()
        for di, dj in _NEIGHBOURS:
            nb = (i + di, j + dj)
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)
