"""Canonical forms of digit sets under rigid motions of the grid.

Two first approximations are congruent as planar sets iff their cell sets
agree up to a symmetry of the square followed by a translation.  The canonical
key is the lexicographically least translated dihedral image.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

from .grid import Cell, DigitSet

# name -> (x, y, t) -> image, with t = n - 1
D4 = (
    ("identity", lambda x, y, t: (x, y)),
    ("rot90", lambda x, y, t: (t - y, x)),
    ("rot180", lambda x, y, t: (t - x, t - y)),
    ("rot270", lambda x, y, t: (y, t - x)),
    ("mirror-x", lambda x, y, t: (t - x, y)),
    ("mirror-y", lambda x, y, t: (x, t - y)),
    ("transpose", lambda x, y, t: (y, x)),
    ("anti-transpose", lambda x, y, t: (t - y, t - x)),
)


def d4_images(d: DigitSet) -> list[DigitSet]:
    """The eight images of a digit set under the symmetry group of the square, in ``D4`` order."""
    t = d.n - 1
    return [DigitSet.of(d.n, (g(x, y, t) for x, y in d.cells)) for _, g in D4]


@dataclass(frozen=True, order=True)
class CanonicalKey:
    n: int
    cells: tuple[Cell, ...]

    def digitset(self) -> DigitSet:
        return DigitSet(self.n, self.cells)

    @property
    def hex(self) -> str:
        return bytes([self.n] + [v for c in self.cells for v in (c.y, c.x)]).hex()

    @classmethod
    def from_hex(cls, text: str) -> "CanonicalKey":
        raw = bytes.fromhex(text)
        n = raw[0]
        cells = tuple(Cell(raw[i + 1], raw[i]) for i in range(1, len(raw), 2))
        return cls(n, cells)

    def __str__(self) -> str:
        return self.hex


def _anchored(n: int, cells) -> tuple[Cell, ...]:
    mx = min(x for x, _ in cells)
    my = min(y for _, y in cells)
    return tuple(sorted((Cell(x - mx, y - my) for x, y in cells), key=lambda c: (c.y, c.x)))


@lru_cache(maxsize=65536)
def canonical_form(d: DigitSet) -> CanonicalKey:
    t = d.n - 1
    best = min(
        tuple((c.y, c.x) for c in _anchored(d.n, [g(x, y, t) for x, y in d.cells]))
        for _, g in D4
    )
    return CanonicalKey(d.n, tuple(Cell(x, y) for y, x in best))


def congruent(a: DigitSet, b: DigitSet) -> bool:
    return a.n == b.n and canonical_form(a) == canonical_form(b)


def _all_digitsets(n: int, m: int):
    if not 1 <= m <= n * n - 1:
        raise ValueError(f"m must lie in 1..{n * n - 1}, got {m}")
    grid = [(x, y) for y in range(n) for x in range(n)]
    for cells in combinations(grid, m):
        yield DigitSet.of(n, cells)


def class_sizes(n: int, m: int) -> dict[CanonicalKey, int]:
    """Number of digit sets in each congruence class."""
    return dict(sorted(Counter(canonical_form(d) for d in _all_digitsets(n, m)).items()))


def enumerate_classes(n: int, m: int) -> list[DigitSet]:
    """One representative (the canonical key's own cell set) per congruence class."""
    return [key.digitset() for key in class_sizes(n, m)]


def _cycles(n: int, g) -> list[int]:
    t = n - 1
    seen = set()
    lengths = []
    for y in range(n):
        for x in range(n):
            if (x, y) in seen:
                continue
            length = 0
            c = (x, y)
            while c not in seen:
                seen.add(c)
                c = g(c[0], c[1], t)
                length += 1
            lengths.append(length)
    return lengths


def burnside_count_dihedral(n: int, m: int) -> int:
    """Orbits of m-subsets of the grid under the eight symmetries (no translations)."""
    total = 0
    for _, g in D4:
        # coefficient of t^m in prod(1 + t^len) over the cycles of g
        poly = [1] + [0] * (n * n)
        for length in _cycles(n, g):
            for i in range(n * n, length - 1, -1):
                poly[i] += poly[i - length]
        total += poly[m]
    assert total % len(D4) == 0
    return total // len(D4)


def total_digitsets(n: int, m: int) -> int:
    return comb(n * n, m)
