"""Neighbour automaton: which integer translates of the attractor meet it, and cell graphs.

The attractor meets its translate by an integer ``offset`` iff there is an
infinite walk ``offset -> n * offset + b - a -> ...`` (``a``, ``b`` digits) that never leaves
``{-1, 0, 1}^2``.  The surviving offsets are therefore the greatest fixed point
of "has a successor that also survives".
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from . import _kernels
from .grid import Cell, DigitSet, approximation, check_cap, is_kept

UNIT_OFFSETS = tuple((dx, dy) for dy in (-1, 0, 1) for dx in (-1, 0, 1))
SIDE_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _differences(d: DigitSet) -> set[tuple[int, int]]:
    return {(bx - ax, by - ay) for ax, ay in d.cells for bx, by in d.cells}


def surviving_offsets(d: DigitSet, start=None) -> frozenset[tuple[int, int]]:
    """Offsets in ``{-1,0,1}^2`` whose translate of the attractor meets the attractor.

    ``start`` may be any superset of the answer inside ``{-1,0,1}^2``; the
    deletion converges to the same set from every such start.
    """
    diffs = _differences(d)
    alive = set(UNIT_OFFSETS if start is None else start)
    changed = True
    while changed:
        changed = False
        for dx, dy in sorted(alive):
            if not any((d.n * dx + ex, d.n * dy + ey) in alive for ex, ey in diffs):
                alive.discard((dx, dy))
                changed = True
    return frozenset(alive)


@lru_cache(maxsize=1024)
def _survivors(d: DigitSet) -> frozenset:
    return surviving_offsets(d)


def pieces_intersect(d: DigitSet, u, v, k: int) -> bool:
    """Whether the attractor pieces in level-``k`` cells ``u`` and ``v`` meet."""
    for c in (u, v):
        if not is_kept(d, c, k):
            raise ValueError(f"cell {tuple(c)} is not kept at level {k}")
    delta = (v[0] - u[0], v[1] - u[1])
    return max(abs(delta[0]), abs(delta[1])) <= 1 and delta in _survivors(d)


def hata_edges(d: DigitSet) -> list[tuple[Cell, Cell]]:
    """Pairs of distinct digits whose translated copies of the attractor meet."""
    surv = _survivors(d)
    out = []
    for i, a in enumerate(d.cells):
        for b in d.cells[i + 1:]:
            if (b.x - a.x, b.y - a.y) in surv:
                out.append((a, b))
    return out


def hata_spanning_tree(d: DigitSet) -> list[tuple[Cell, Cell]] | None:
    """A BFS spanning tree of the digit graph, or None when it is disconnected."""
    adj = {c: [] for c in d.cells}
    for a, b in hata_edges(d):
        adj[a].append(b)
        adj[b].append(a)
    root = d.cells[0]
    seen = {root}
    tree = []
    frontier = [root]
    while frontier:
        nxt = []
        for a in frontier:
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    tree.append((a, b))
                    nxt.append(b)
        frontier = nxt
    return tree if len(seen) == d.m else None


def hata_connected(d: DigitSet) -> bool:
    """F is connected iff the digit graph of meeting copies is connected."""
    return hata_spanning_tree(d) is not None


def approx_connected(d: DigitSet, k: int) -> bool:
    """Connectivity of the union of closed kept level-``k`` squares (8-adjacency)."""
    _, count = _kernels.label_components(approximation(d, k).kept, _kernels.EIGHT)
    return count == 1


@dataclass(frozen=True, eq=False)
class CellGraph:
    """Kept level-``k`` cells with exact contact edges and full-side edges.

    An exact edge joins ``a`` and ``a + off`` when ``off`` is a surviving offset.
    A full-edge edge joins kept cells sharing a whole side, regardless of the attractor.
    """

    d: DigitSet
    k: int
    kept: np.ndarray
    offsets: frozenset

    def vertices(self) -> list[Cell]:
        return approximation(self.d, self.k).cells()

    def _edge_list(self, offsets) -> list[tuple[Cell, Cell]]:
        kept = self.kept
        h, w = kept.shape
        out = []
        for dx, dy in sorted(offsets):
            if (dy, dx) <= (0, 0):
                continue
            ys, xs = np.nonzero(kept)
            tx, ty = xs + dx, ys + dy
            ok = (tx >= 0) & (tx < w) & (ty >= 0) & (ty < h)
            ok[ok] &= kept[ty[ok], tx[ok]]
            out.extend((Cell(int(a), int(b)), Cell(int(c), int(e))) for a, b, c, e in zip(xs[ok], ys[ok], tx[ok], ty[ok]))
        return sorted(out, key=lambda e: ((e[0].y, e[0].x), (e[1].y, e[1].x)))

    @cached_property
    def edges(self) -> list[tuple[Cell, Cell]]:
        return self._edge_list(self.offsets - {(0, 0)})

    @cached_property
    def full_edges(self) -> list[tuple[Cell, Cell]]:
        return self._edge_list(SIDE_OFFSETS)

    def components(self, kind: str = "exact", removed: np.ndarray | None = None) -> int:
        """Number of components, optionally after deleting the cells in ``removed``."""
        mask = self.kept if removed is None else self.kept & ~removed
        offs = SIDE_OFFSETS if kind == "full" else tuple(self.offsets)
        return _kernels.label_components(mask, offs)[1]

    def cycle_rank(self, kind: str = "exact") -> int:
        """``E - V + C``: zero iff the graph is a forest."""
        edges = len(self.full_edges if kind == "full" else self.edges)
        return edges - int(self.kept.sum()) + self.components(kind)


def exact_cell_graph(d: DigitSet, k: int) -> CellGraph:
    check_cap(d.n, k)
    return CellGraph(d, k, approximation(d, k).kept, _survivors(d))
