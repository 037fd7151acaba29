"""Digit sets, label matrices, level-k approximations and cylinders.

Coordinates are ``(x, y)`` with ``x`` growing rightward and ``y`` upward, so a
digit is literally its translation vector.  Bitmaps are numpy arrays indexed
``[y, x]`` (row 0 is the bottom row).  The label matrix text format is the only
place where the top-row-first convention appears.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

DEFAULT_MAX_CELLS = 2**26


class CellCapExceeded(RuntimeError):
    """A requested grid would exceed the configured cell cap."""


def max_cells() -> int:
    """Cell cap, overridable through ``FRACSQ_MAX_CELLS``."""
    raw = os.environ.get("FRACSQ_MAX_CELLS")
    return int(raw) if raw else DEFAULT_MAX_CELLS


def check_cap(n: int, k: int) -> None:
    cells = n ** (2 * k)
    if cells > max_cells():
        raise CellCapExceeded(
            f"level {k} at n={n} needs {cells} cells (cap {max_cells()}; "
            "raise FRACSQ_MAX_CELLS to allow it)"
        )


class Cell(NamedTuple):
    x: int
    y: int


def _yx(c):
    return (c[1], c[0])


@dataclass(frozen=True)
class DigitSet:
    """A proper nonempty subset of ``{0..n-1}^2``, kept sorted by ``(y, x)``."""

    n: int
    cells: tuple[Cell, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        cells = tuple(sorted({Cell(int(x), int(y)) for x, y in self.cells}, key=_yx))
        if len(cells) != len(self.cells):
            raise ValueError("duplicate cells in digit set")
        for x, y in cells:
            if not (0 <= x < self.n and 0 <= y < self.n):
                raise ValueError(f"cell {(x, y)} outside the {self.n}x{self.n} grid")
        if not 1 <= len(cells) <= self.n * self.n - 1:
            raise ValueError(f"digit set must have 1..{self.n ** 2 - 1} cells, got {len(cells)}")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def of(cls, n: int, cells: Iterable[Sequence[int]]) -> "DigitSet":
        return cls(n, tuple(Cell(int(c[0]), int(c[1])) for c in cells))

    @property
    def m(self) -> int:
        return len(self.cells)

    def __contains__(self, cell) -> bool:
        return Cell(*cell) in self._cellset

    @cached_property
    def _cellset(self) -> frozenset:
        return frozenset(self.cells)

    def mask(self) -> np.ndarray:
        """``n x n`` boolean indicator indexed ``[y, x]``."""
        out = np.zeros((self.n, self.n), dtype=bool)
        for x, y in self.cells:
            out[y, x] = True
        return out

    def array(self) -> np.ndarray:
        return np.array(self.cells, dtype=np.int64).reshape(-1, 2)

    def label_matrix(self) -> tuple[str, ...]:
        return to_label_matrix(self)

    def transpose(self) -> "DigitSet":
        return DigitSet.of(self.n, ((y, x) for x, y in self.cells))

    def __str__(self) -> str:
        return ",".join(self.label_matrix())


def parse_label_matrix(rows) -> DigitSet:
    """Build a digit set from label-matrix rows (top row first).

    ``rows`` is a sequence of '0'/'1' strings or a single string with rows
    separated by commas, semicolons, slashes or newlines.  Entry ``(i, j)``
    (1-based, row ``i`` from the top) is 1 iff ``(j-1, n-i)`` is a digit.
    """
    if isinstance(rows, str):
        rows = [r for r in re.split(r"[,;/\s]+", rows.strip()) if r]
    rows = [r.strip() for r in rows]
    n = len(rows)
    if n < 2:
        raise ValueError("label matrix needs at least 2 rows")
    for r in rows:
        if len(r) != n:
            raise ValueError(f"label matrix is not square: row {r!r} has length {len(r)}, expected {n}")
        if set(r) - {"0", "1"}:
            raise ValueError(f"label matrix row {r!r} has characters other than 0/1")
    cells = [(j, n - 1 - i) for i, r in enumerate(rows) for j, ch in enumerate(r) if ch == "1"]
    if not cells:
        raise ValueError("label matrix is all zeros")
    if len(cells) == n * n:
        raise ValueError("label matrix is all ones; the digit set must be a proper subset")
    return DigitSet.of(n, cells)


def to_label_matrix(d: DigitSet) -> tuple[str, ...]:
    mask = d.mask()
    return tuple("".join("1" if mask[y, x] else "0" for x in range(d.n)) for y in reversed(range(d.n)))


@dataclass(frozen=True, eq=False)
class Approximation:
    """Level-``k`` bitmap of kept cells on the ``n^k x n^k`` grid."""

    n: int
    k: int
    kept: np.ndarray

    @property
    def size(self) -> int:
        return self.n**self.k

    @property
    def popcount(self) -> int:
        return int(self.kept.sum())

    def cells(self) -> list[Cell]:
        ys, xs = np.nonzero(self.kept)
        return [Cell(int(x), int(y)) for y, x in zip(ys, xs)]

    def __contains__(self, cell) -> bool:
        x, y = cell
        return 0 <= x < self.size and 0 <= y < self.size and bool(self.kept[y, x])


@lru_cache(maxsize=64)
def _kept(d: DigitSet, k: int) -> np.ndarray:
    if k == 0:
        out = np.ones((1, 1), dtype=bool)
    else:
        out = np.kron(_kept(d, k - 1), d.mask()).astype(bool)
    out.flags.writeable = False
    return out


def approximation(d: DigitSet, k: int) -> Approximation:
    """The level-``k`` approximation: kept cells are the digit set expanded ``k`` times, ``digits + n * previous``."""
    if k < 0:
        raise ValueError(f"level must be >= 0, got {k}")
    check_cap(d.n, k)
    return Approximation(d.n, k, _kept(d, k))


def is_kept(d: DigitSet, cell, k: int) -> bool:
    """Whether a level-``k`` cell is kept, by reading its base-``n`` digits."""
    x, y = cell
    size = d.n**k
    if not (0 <= x < size and 0 <= y < size):
        return False
    for _ in range(k):
        if (x % d.n, y % d.n) not in d:
            return False
        x //= d.n
        y //= d.n
    return True


def resolve_order(d: DigitSet, order=None) -> tuple[Cell, ...]:
    """Digit order: symbol ``i`` (1-based) names ``order[i-1]``; default ``(y, x)``-sorted."""
    if order is None:
        return d.cells
    order = tuple(Cell(int(c[0]), int(c[1])) for c in order)
    if sorted(order, key=_yx) != list(d.cells):
        raise ValueError("digit order must be a permutation of the digit set")
    return order


def parse_order(text: str) -> tuple[Cell, ...]:
    """Parse ``"x,y;x,y;..."`` into a cell sequence."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if part:
            x, y = part.split(",")
            out.append(Cell(int(x), int(y)))
    return tuple(out)


def prefix_offset(d: DigitSet, prefix: Sequence[int], order=None) -> Cell:
    """Level-``len(prefix)`` cell addressed by a word over ``1..m``."""
    order = resolve_order(d, order)
    x = y = 0
    for s in prefix:
        if not 1 <= s <= d.m:
            raise ValueError(f"symbol {s} outside 1..{d.m}")
        cx, cy = order[s - 1]
        x, y = d.n * x + cx, d.n * y + cy
    return Cell(x, y)


def parse_word(word) -> tuple[int, ...]:
    """Accept ``"25"``, ``"2 5"``, ``"2,5"`` or an int sequence."""
    if isinstance(word, str):
        word = word.strip()
        if not word:
            return ()
        if any(sep in word for sep in " ,."):
            return tuple(int(t) for t in re.split(r"[ ,.]+", word) if t)
        return tuple(int(ch) for ch in word)
    return tuple(int(s) for s in word)


def cylinder_mask(d: DigitSet, prefix, k: int, order=None) -> np.ndarray:
    prefix = parse_word(prefix)
    if k < len(prefix):
        raise ValueError(f"level {k} is shallower than the prefix length {len(prefix)}")
    check_cap(d.n, k)
    base = prefix_offset(d, prefix, order)
    depth = k - len(prefix)
    sub = _kept(d, depth)
    span = d.n**depth
    out = np.zeros((d.n**k, d.n**k), dtype=bool)
    out[base.y * span:(base.y + 1) * span, base.x * span:(base.x + 1) * span] = sub
    return out


def cylinder_cells(d: DigitSet, prefix, k: int, order=None) -> frozenset[Cell]:
    """Kept level-``k`` cells inside the square addressed by ``prefix``."""
    ys, xs = np.nonzero(cylinder_mask(d, prefix, k, order))
    return frozenset(Cell(int(x), int(y)) for y, x in zip(ys, xs))


class Corners(NamedTuple):
    bottom_left: bool
    bottom_right: bool
    top_left: bool
    top_right: bool


def corner_membership(d: DigitSet) -> Corners:
    """Corner ``c`` of the unit square lies in the attractor iff the corner cell is a digit."""
    t = d.n - 1
    return Corners((0, 0) in d, (t, 0) in d, (0, t) in d, (t, t) in d)
