"""Points, unit grid cells and the distance primitives shared by all solvers.

A point belongs to the half-open cell ``[i, i+1) x [j, j+1)`` with
``i = floor(x)`` and ``j = floor(y)``. Non-empty cells are the clusters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import EmptyInstanceError, InvalidArgumentError, InvalidPointError

MAX_COORD = 1e9


class Point(NamedTuple):
    x: float
    y: float


class CellId(NamedTuple):
    i: int
    j: int


def _check_point(p) -> Point:
    try:
        x, y = float(p[0]), float(p[1])
    except (TypeError, ValueError, IndexError) as exc:
        raise InvalidPointError(f"not a 2-d point: {p!r}") from exc
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidPointError(f"non-finite coordinate in {p!r}")
    if abs(x) > MAX_COORD or abs(y) > MAX_COORD:
        raise InvalidPointError(f"coordinate magnitude above {MAX_COORD:g}: {p!r}")
    return Point(x, y)


def cell_of(p) -> CellId:
    """Return the grid cell containing `p` under the half-open rule."""
    x, y = _check_point(p)
    return CellId(math.floor(x), math.floor(y))


def euclid(p, q) -> float:
    # np.hypot here and in pairwise_distances, so both agree bit for bit;
    # hypot also avoids the underflow of squaring tiny differences
    return float(np.hypot(p[0] - q[0], p[1] - q[1]))


def pairwise_distances(xy: np.ndarray, other: np.ndarray | None = None) -> np.ndarray:
    """Euclidean distance matrix between the rows of `xy` and `other`."""
    other = xy if other is None else other
    dx = xy[:, 0][:, None] - other[:, 0][None, :]
    dy = xy[:, 1][:, None] - other[:, 1][None, :]
    return np.hypot(dx, dy)


@dataclass(frozen=True, eq=False)
class Instance:
    """An immutable point set grouped into its non-empty cells.

    Attributes:
        points: The input points, in input order.
        cells: Map from cell to the ascending indices of its points.
        cell_order: Non-empty cells sorted lexicographically by ``(i, j)``.
    """

    points: tuple[Point, ...]
    cells: Mapping[CellId, tuple[int, ...]]
    cell_order: tuple[CellId, ...]

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def k(self) -> int:
        """Number of non-empty cells."""
        return len(self.cell_order)

    @property
    def N(self) -> int:
        """Number of edges in every feasible tree."""
        return len(self.cell_order) - 1

    @cached_property
    def cell_index(self) -> dict[CellId, int]:
        return {c: pos for pos, c in enumerate(self.cell_order)}

    @cached_property
    def point_cell(self) -> tuple[int, ...]:
        """Position in `cell_order` of each point's cell."""
        out = [0] * len(self.points)
        for pos, c in enumerate(self.cell_order):
            for idx in self.cells[c]:
                out[idx] = pos
        return tuple(out)

    @cached_property
    def xy(self) -> np.ndarray:
        arr = np.array(self.points, dtype=np.float64).reshape(-1, 2)
        arr.flags.writeable = False
        return arr

    @cached_property
    def packed_order(self) -> np.ndarray:
        """Point indices grouped by cell in `cell_order` (the kernel layout)."""
        arr = np.array([i for c in self.cell_order for i in self.cells[c]], dtype=np.intp)
        arr.flags.writeable = False
        return arr

    @cached_property
    def offsets(self) -> np.ndarray:
        """Cell boundaries in `packed_order`; cell ``c`` is ``[offsets[c], offsets[c+1])``."""
        sizes = [len(self.cells[c]) for c in self.cell_order]
        arr = np.concatenate([[0], np.cumsum(sizes)]).astype(np.intp)
        arr.flags.writeable = False
        return arr

    @cached_property
    def packed_distances(self) -> np.ndarray:
        """Full distance matrix in `packed_order`. Quadratic memory; oracle use only."""
        d = pairwise_distances(self.xy[self.packed_order])
        d.flags.writeable = False
        return d

    @property
    def cell_sizes(self) -> list[int]:
        return [len(self.cells[c]) for c in self.cell_order]

    def selection_count(self) -> int:
        """Number of ways to pick one point per cell (exact Python integer)."""
        return math.prod(self.cell_sizes)

    def cell_points(self, pos: int) -> tuple[int, ...]:
        return self.cells[self.cell_order[pos]]

    def same_points(self, other: "Instance") -> bool:
        return self.points == other.points


def build_instance(points: Iterable) -> Instance:
    """Group `points` by cell.

    Raises:
        EmptyInstanceError: if there are no points.
        InvalidPointError: if a coordinate is non-finite or out of range.
    """
    pts = tuple(_check_point(p) for p in points)
    if not pts:
        raise EmptyInstanceError("instance has no points")
    groups: dict[CellId, list[int]] = {}
    for idx, p in enumerate(pts):
        groups.setdefault(CellId(math.floor(p.x), math.floor(p.y)), []).append(idx)
    order = tuple(sorted(groups))
    cells = {c: tuple(groups[c]) for c in order}
    return Instance(points=pts, cells=cells, cell_order=order)


def _resolve_cell(inst: Instance, c) -> int:
    if isinstance(c, (int, np.integer)) and not isinstance(c, bool):
        if not 0 <= c < inst.k:
            raise InvalidArgumentError(f"cell position {c} out of range")
        return int(c)
    cid = CellId(*c)
    try:
        return inst.cell_index[cid]
    except KeyError:
        raise InvalidArgumentError(f"cell {tuple(cid)} is empty or unknown") from None


def min_cell_edge(inst: Instance, a, b) -> tuple[float, tuple[int, int]]:
    """Shortest edge between two distinct non-empty cells.

    `a` and `b` are CellIds or positions in `inst.cell_order`. Returns the
    weight and the achieving ``(p, q)`` with ``p`` in `a`; exact ties go to
    the lowest ``(p, q)``.
    """
    pa, pb = _resolve_cell(inst, a), _resolve_cell(inst, b)
    if pa == pb:
        raise InvalidArgumentError("min_cell_edge needs two different cells")
    ia = inst.cell_points(pa)
    ib = inst.cell_points(pb)
    d = pairwise_distances(inst.xy[list(ia)], inst.xy[list(ib)])
    flat = int(np.argmin(d))
    r, c = divmod(flat, len(ib))
    return float(d[r, c]), (ia[r], ib[c])


def cell_distance_table(inst: Instance) -> tuple[np.ndarray, np.ndarray]:
    """All pairwise `min_cell_edge` results.

    Returns ``(w, pairs)`` where ``w[a, b]`` is the cell distance and
    ``pairs[a, b]`` the achieving point indices (first in cell ``a``).
    """
    k = inst.k
    w = np.zeros((k, k))
    pairs = np.zeros((k, k, 2), dtype=np.intp)
    order = inst.packed_order
    off = inst.offsets
    xy = inst.xy
    for a in range(k):
        ia = order[off[a]:off[a + 1]]
        rest = order[off[a + 1]:]
        if rest.size == 0:
            continue
        block = pairwise_distances(xy[ia], xy[rest])
        base = off[a + 1]
        for b in range(a + 1, k):
            sub = block[:, off[b] - base:off[b + 1] - base]
            r, c = divmod(int(np.argmin(sub)), sub.shape[1])
            p, q = int(ia[r]), int(order[off[b] + c])
            w[a, b] = w[b, a] = sub[r, c]
            pairs[a, b] = (p, q)
            pairs[b, a] = (q, p)
    return w, pairs
