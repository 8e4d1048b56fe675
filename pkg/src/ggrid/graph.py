"""Small graph toolkit used by the solvers.

Complete graphs are never materialized: `mst` takes a weight callback, and
trees/multigraphs are plain edge lists over nodes ``0..k-1``.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, Sequence

from .errors import (
    CapExceededError,
    EmptyGraphError,
    InvalidArgumentError,
    InvalidTreeError,
    NotEulerianError,
)

DEFAULT_ENUMERATION_CAP = 8


@dataclass(frozen=True)
class WeightedEdge:
    u: int
    v: int
    w: float = 0.0

    def __post_init__(self):
        if self.u == self.v:
            raise InvalidArgumentError(f"self-loop at node {self.u}")
        if not self.w >= 0:
            raise InvalidArgumentError(f"negative or NaN weight {self.w}")

    @property
    def key(self) -> tuple[int, int]:
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


@dataclass(frozen=True)
class TreeGraph:
    """Spanning tree on nodes ``0..k-1``. Validated on construction."""

    k: int
    edges: tuple[WeightedEdge, ...]

    def __post_init__(self):
        if self.k < 1:
            raise EmptyGraphError("tree needs at least one node")
        if len(self.edges) != self.k - 1:
            raise InvalidTreeError(f"{len(self.edges)} edges for {self.k} nodes")
        ds = _DisjointSet(self.k)
        for e in self.edges:
            if not (0 <= e.u < self.k and 0 <= e.v < self.k):
                raise InvalidTreeError(f"edge {e.key} leaves node range")
            if not ds.union(e.u, e.v):
                raise InvalidTreeError(f"edge {e.key} closes a cycle")

    @classmethod
    def from_pairs(cls, k: int, pairs, weights=None) -> "TreeGraph":
        if weights is None:
            return cls(k, tuple(WeightedEdge(u, v) for u, v in pairs))
        return cls(k, tuple(WeightedEdge(u, v, w) for (u, v), w in zip(pairs, weights)))

    @property
    def weight(self) -> float:
        return sum(e.w for e in self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.k)]
        for e in self.edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        return tuple(tuple(sorted(a)) for a in adj)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def edge_keys(self) -> frozenset[tuple[int, int]]:
        return frozenset(e.key for e in self.edges)

    def rooted(self, root: int = 0) -> tuple[list[int], list[int]]:
        """BFS order from `root` and the parent of every node (-1 at the root)."""
        parent = [-1] * self.k
        order = [root]
        seen = [False] * self.k
        seen[root] = True
        for v in order:
            for w in self.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    order.append(w)
        return order, parent


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph; parallel edges allowed, self-loops not."""

    k: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise InvalidArgumentError(f"self-loop at node {u}")
            if not (0 <= u < self.k and 0 <= v < self.k):
                raise InvalidArgumentError(f"edge {(u, v)} leaves node range")

    def degrees(self) -> list[int]:
        deg = [0] * self.k
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_eulerian(self) -> bool:
        try:
            self._check_eulerian()
        except NotEulerianError:
            return False
        return True

    def _check_eulerian(self) -> None:
        deg = self.degrees()
        odd = [v for v, d in enumerate(deg) if d % 2]
        if odd:
            raise NotEulerianError(f"odd-degree nodes {odd}")
        ds = _DisjointSet(self.k)
        for u, v in self.edges:
            ds.union(u, v)
        roots = {ds.find(v) for v, d in enumerate(deg) if d}
        if len(roots) > 1:
            raise NotEulerianError("edge set is disconnected")


def doubled(tree: TreeGraph) -> Multigraph:
    pairs = tuple(e.key for e in tree.edges)
    return Multigraph(tree.k, pairs + pairs)


def mst(k: int, weight_oracle: Callable[[int, int], float]) -> TreeGraph:
    """Prim's algorithm on the complete graph over ``k`` nodes.

    Among equal-weight candidates the lexicographically smaller ``(u, v)``
    (with ``u < v``) wins, so the result is reproducible.
    """
    if k < 1:
        raise EmptyGraphError("mst of an empty graph")
    in_tree = [False] * k
    in_tree[0] = True
    best_w = [0.0] * k
    best_key: list[tuple[int, int]] = [(0, 0)] * k
    for v in range(1, k):
        best_w[v] = weight_oracle(0, v)
        best_key[v] = (0, v)
    edges = []
    for _ in range(k - 1):
        pick = -1
        for v in range(k):
            if in_tree[v]:
                continue
            if pick < 0 or best_w[v] < best_w[pick] or (
                best_w[v] == best_w[pick] and best_key[v] < best_key[pick]
            ):
                pick = v
        u, v = best_key[pick]
        edges.append(WeightedEdge(u, v, best_w[pick]))
        in_tree[pick] = True
        for v in range(k):
            if in_tree[v]:
                continue
            w = weight_oracle(pick, v)
            key = (pick, v) if pick < v else (v, pick)
            if w < best_w[v] or (w == best_w[v] and key < best_key[v]):
                best_w[v] = w
                best_key[v] = key
    return TreeGraph(k, tuple(edges))


def euler_tour(g: Multigraph, start: int) -> list[int]:
    """Closed walk from `start` using every edge once (Hierholzer).

    Neighbours are tried in ascending order, parallel edges in listing order.

    Raises:
        NotEulerianError: odd degrees, a disconnected edge set, or a start
            node that touches no edge while edges exist.
    """
    g._check_eulerian()
    if not g.edges:
        return [start]
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.k)]
    for eid, (u, v) in enumerate(g.edges):
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    if not adj[start]:
        raise NotEulerianError(f"start node {start} has no edges")
    for a in adj:
        a.sort()
    used = [False] * len(g.edges)
    ptr = [0] * g.k
    stack = [start]
    walk = []
    while stack:
        v = stack[-1]
        a = adj[v]
        while ptr[v] < len(a) and used[a[ptr[v]][1]]:
            ptr[v] += 1
        if ptr[v] == len(a):
            walk.append(stack.pop())
        else:
            w, eid = a[ptr[v]]
            used[eid] = True
            stack.append(w)
    walk.reverse()
    return walk


def shortcut(walk: Sequence[int]) -> list[int]:
    """Keep the first visit of every node along a closed walk."""
    seen = set()
    out = []
    for v in walk:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def prufer_decode(seq: Sequence[int], k: int) -> list[tuple[int, int]]:
    """Edges of the labelled tree encoded by `seq`, in leaf-elimination order.

    Each ``(leaf, attach)`` pair removes ``leaf``; the last pair joins the
    two surviving nodes (smaller first).
    """
    degree = [1] * k
    for s in seq:
        degree[s] += 1
    edges = []
    for s in seq:
        leaf = degree.index(1)
        edges.append((leaf, s))
        degree[leaf] -= 1
        degree[s] -= 1
    u = degree.index(1)
    v = degree.index(1, u + 1)
    edges.append((u, v))
    return edges


def prufer_encode(tree: TreeGraph) -> tuple[int, ...]:
    adj = [set(a) for a in tree.adjacency]
    seq = []
    for _ in range(tree.k - 2):
        leaf = min(v for v in range(tree.k) if len(adj[v]) == 1)
        (nb,) = adj[leaf]
        seq.append(nb)
        adj[nb].discard(leaf)
        adj[leaf].clear()
    return tuple(seq)


def prufer_sequences(k: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(k), repeat=k - 2)


def prufer_trees(k: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[TreeGraph]:
    """Every labelled spanning tree on ``k`` nodes, once, in Prüfer order.

    Raises:
        CapExceededError: if ``k > cap``.
    """
    if k < 2:
        raise InvalidArgumentError("tree enumeration needs k >= 2")
    if k > cap:
        raise CapExceededError(f"k={k} exceeds the enumeration cap {cap}")
    for seq in prufer_sequences(k):
        yield TreeGraph.from_pairs(k, prufer_decode(seq, k))


def degree_identity_check(t: TreeGraph) -> bool:
    """True iff #leaves == 2 + sum over degree i >= 2 of |V_i| * (i - 2)."""
    hist = Counter(t.degrees())
    return hist.get(1, 0) == 2 + sum(cnt * (d - 2) for d, cnt in hist.items() if d >= 2)
