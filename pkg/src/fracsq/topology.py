"""Tree/cycle structure, cylinder deletion, codings and branch degrees.

Cycle evidence is an *enclosing* cycle: a cycle of the exact cell graph that
separates some empty cell from the outside of the unit square.  Pieces that
merely share one grid vertex (three or four cells around a corner) form graph
cycles too, but enclose nothing and are ignored.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .automaton import _survivors, exact_cell_graph, hata_connected
from .catalogue import SALTIRE, SALTIRE_ORDER, TEE, TEE_ORDER
from .grid import Cell, DigitSet, approximation, check_cap, cylinder_mask, parse_word, resolve_order


def full_edge_tree(d: DigitSet, k: int) -> bool:
    """Kept level-``k`` cells joined along whole sides form a tree."""
    g = exact_cell_graph(d, k)
    return g.components("full") == 1 and g.cycle_rank("full") == 0


def _refined_blocked(d: DigitSet, k: int) -> np.ndarray:
    """Points of the doubled lattice covered by kept cells and exact contacts.

    Cell ``(x, y)`` has its centre at ``(2x+1, 2y+1)``; side midpoints and
    grid vertices sit at the mixed and even coordinates.
    """
    kept = approximation(d, k).kept
    surv = _survivors(d)
    size = kept.shape[0]
    blocked = np.zeros((2 * size + 1, 2 * size + 1), dtype=bool)
    blocked[1::2, 1::2] = kept
    if (1, 0) in surv:
        blocked[1::2, 2:-1:2] = kept[:, :-1] & kept[:, 1:]
    if (0, 1) in surv:
        blocked[2:-1:2, 1::2] = kept[:-1, :] & kept[1:, :]
    if (1, 1) in surv:
        blocked[2:-1:2, 2:-1:2] |= kept[:-1, :-1] & kept[1:, 1:]
    if (-1, 1) in surv:
        blocked[2:-1:2, 2:-1:2] |= kept[:-1, 1:] & kept[1:, :-1]
    return blocked


def enclosed_cells(d: DigitSet, k: int) -> np.ndarray:
    """Empty level-``k`` cells cut off from the outside by exact contacts."""
    check_cap(d.n, k)
    free = ~_refined_blocked(d, k)
    side = free.shape[0]
    frame = np.zeros_like(free)
    frame[0, :] = frame[-1, :] = frame[:, 0] = frame[:, -1] = True
    dist = _kernels.bfs_distances(free, np.flatnonzero(frame & free), _kernels.FOUR)
    kept = approximation(d, k).kept
    return (dist[1:side:2, 1:side:2] < 0) & ~kept


def first_cycle_level(d: DigitSet, kmax: int = 5) -> int | None:
    """Least level with an enclosing cycle in the exact cell graph, or None."""
    for k in range(1, kmax + 1):
        if enclosed_cells(d, k).any():
            return k
    return None


def enclosing_ring(d: DigitSet, k: int) -> list[Cell]:
    """Kept cells touching (8-adjacency) the first enclosed empty region, row-major."""
    holes = enclosed_cells(d, k)
    if not holes.any():
        return []
    labels, _ = _kernels.label_components(holes, _kernels.EIGHT)
    region = labels == 0
    grown = region.copy()
    size = region.shape[0]
    for dx, dy in _kernels.EIGHT:
        shifted = np.zeros_like(region)
        shifted[max(0, dy):size + min(0, dy), max(0, dx):size + min(0, dx)] = region[
            max(0, -dy):size - max(0, dy), max(0, -dx):size - max(0, dx)
        ]
        grown |= shifted
    ring = grown & approximation(d, k).kept
    ys, xs = np.nonzero(ring)
    return [Cell(int(x), int(y)) for y, x in zip(ys, xs)]


def delete_cylinder_components(d: DigitSet, prefix, k: int, order=None) -> int:
    """Components of the exact level-``k`` cell graph after removing a cylinder."""
    prefix = parse_word(prefix)
    if k < len(prefix) + 1:
        raise ValueError(f"level {k} must exceed the prefix length {len(prefix)}")
    g = exact_cell_graph(d, k)
    return g.components("exact", cylinder_mask(d, prefix, k, order))


@dataclass(frozen=True)
class Coding:
    """Eventually periodic word ``preperiod period period ...`` over ``1..m``."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        if any(s < 1 for s in self.preperiod + self.period):
            raise ValueError("symbols are 1-based")

    @classmethod
    def parse(cls, text: str) -> "Coding":
        """``"4(2)"`` is 4 followed by 2 repeated forever."""
        text = text.strip()
        if "(" not in text or not text.endswith(")"):
            raise ValueError(f"coding {text!r} must look like 'pre(period)'")
        pre, per = text[:-1].split("(", 1)
        return cls(parse_word(pre), parse_word(per))

    def normalized(self) -> "Coding":
        per = self.period
        for p in range(1, len(per) + 1):
            if len(per) % p == 0 and per[:p] * (len(per) // p) == per:
                per = per[:p]
                break
        pre = self.preperiod
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        return Coding(pre, per)

    def symbols(self) -> set[int]:
        return set(self.preperiod) | set(self.period)

    def eventually(self, symbols) -> bool:
        return set(self.period) <= set(symbols)

    def __str__(self) -> str:
        return "".join(map(str, self.preperiod)) + "(" + "".join(map(str, self.period)) + ")"


def coding_point(d: DigitSet, c: Coding, order=None) -> tuple[Fraction, Fraction]:
    """Exact coordinates of the point with coding ``c``."""
    order = resolve_order(d, order)
    _check_symbols(d, c)
    n = d.n
    x = y = Fraction(0)
    scale = Fraction(1)
    for s in c.preperiod:
        scale /= n
        x += scale * order[s - 1][0]
        y += scale * order[s - 1][1]
    px = py = Fraction(0)
    inner = Fraction(1)
    for s in c.period:
        inner /= n
        px += inner * order[s - 1][0]
        py += inner * order[s - 1][1]
    q = 1 - inner
    return x + scale * px / q, y + scale * py / q


def _check_symbols(d: DigitSet, c: Coding):
    bad = [s for s in c.symbols() if s > d.m]
    if bad:
        raise ValueError(f"symbols {sorted(bad)} outside 1..{d.m}")


def codings(d: DigitSet, c: Coding, order=None) -> list[Coding]:
    """All codings of the point represented by ``c``, normalized and sorted.

    States are the rescaled residues ``r -> n r - d`` kept inside the unit
    square (finitely many for an eventually periodic point); residues with no
    infinite continuation are pruned.  Raises ValueError when the point has
    infinitely many codings.
    """
    order = resolve_order(d, order)
    px, py = coding_point(d, c, order)
    den = int(np.lcm(px.denominator, py.denominator))
    start = (int(px * den), int(py * den))
    n = d.n
    succ: dict[tuple[int, int], list[tuple[int, tuple[int, int]]]] = {}
    stack = [start]
    while stack:
        s = stack.pop()
        if s in succ:
            continue
        out = []
        for sym, (dx, dy) in enumerate(order, start=1):
            t = (n * s[0] - dx * den, n * s[1] - dy * den)
            if 0 <= t[0] <= den and 0 <= t[1] <= den:
                out.append((sym, t))
        succ[s] = out
        stack.extend(t for _, t in out)
    alive = set(succ)
    changed = True
    while changed:
        changed = False
        for s in list(alive):
            if not any(t in alive for _, t in succ[s]):
                alive.discard(s)
                changed = True
    if start not in alive:
        raise ValueError(f"coding {c} does not name a point of the attractor")  # pragma: no cover
    edges = {s: [(sym, t) for sym, t in succ[s] if t in alive] for s in alive}
    _check_finite(start, edges)

    found = []

    def walk(state, path_states, path_syms):
        if state in path_states:
            i = path_states.index(state)
            found.append(Coding(tuple(path_syms[:i]), tuple(path_syms[i:])).normalized())
            return
        for sym, t in edges[state]:
            walk(t, path_states + [state], path_syms + [sym])

    walk(start, [], [])
    return sorted(set(found), key=lambda x: (x.preperiod, x.period))


def _check_finite(start, edges):
    # infinitely many infinite paths iff a reachable cycle has a vertex with an exit
    index, low, on, st, comp = {}, {}, set(), [], {}
    counter = [0]

    def strong(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        st.append(v)
        on.add(v)
        for _, w in edges[v]:
            if w not in index:
                strong(w)
                low[v] = min(low[v], low[w])
            elif w in on:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            members = []
            while True:
                w = st.pop()
                on.discard(w)
                members.append(w)
                if w == v:
                    break
            for w in members:
                comp[w] = members

    strong(start)
    for v, members in comp.items():
        cyclic = len(members) > 1 or any(t == v for _, t in edges[v])
        if cyclic and len(edges[v]) > 1:
            raise ValueError("point has infinitely many codings")


def coding_multiplicity(d: DigitSet, c: Coding, order=None) -> int:
    return len(codings(d, c, order))


def branch_degree_tee(c: Coding) -> int:
    """Branch degree of a point of the T-shaped connected square (digit order 1..5 =
    bottom-left, bottom-middle, bottom-right, centre, top)."""
    if max(c.symbols()) > 5:
        raise ValueError("tee codings use symbols 1..5")
    codes = codings(TEE, c, TEE_ORDER)
    if len(codes) > 1:
        return 4 if any(x.eventually({2}) for x in codes) else 2
    (only,) = codes
    if not set(only.period) & {2, 4}:
        return 1
    return 3 if only.eventually({2}) else 2


def branch_degree_saltire(c: Coding) -> int:
    """Branch degree of a point of the X-shaped connected square (1..4 corners, 5 centre)."""
    if max(c.symbols()) > 5:
        raise ValueError("saltire codings use symbols 1..5")
    codes = codings(SALTIRE, c, SALTIRE_ORDER)
    if len(codes) > 1:
        return 2
    return 4 if 5 in codes[0].period else 1


@dataclass
class Fingerprint:
    connected: bool
    full_edge_tree_upto: int
    first_cycle_level: int | None
    branch_samples: dict[str, list[int]]
    order: tuple[Cell, ...]
    kmax: int
    tree_levels: list[bool] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "connected": self.connected,
            "full_edge_tree_upto": self.full_edge_tree_upto,
            "first_cycle_level": self.first_cycle_level,
            "branch_samples": dict(self.branch_samples),
            "digit_order": [list(c) for c in self.order],
            "kmax": self.kmax,
            "evidence": "tree-certified" if self.full_edge_tree_upto == self.kmax and self.first_cycle_level is None
            else "cycle-evidence" if self.first_cycle_level is not None else "none",
        }


def fingerprint(d: DigitSet, kmax: int = 4, order=None, samples=None, depth: int = 3) -> Fingerprint:
    """Connectivity, full-edge tree sweep, first enclosing cycle and deletion samples.

    ``samples`` defaults to every single symbol; each prefix ``p`` is repeated
    ``j = 1..depth`` times and deleted at level ``j|p| + 1`` (capped at ``kmax``).
    """
    order = resolve_order(d, order)
    tree_levels = [full_edge_tree(d, k) for k in range(1, kmax + 1)]
    upto = 0
    for ok in tree_levels:
        if not ok:
            break
        upto += 1
    if samples is None:
        samples = [str(s) for s in range(1, d.m + 1)]
    branch = {}
    for p in samples:
        word = parse_word(p)
        counts = []
        for j in range(1, depth + 1):
            k = j * len(word) + 1
            if k > kmax:
                break
            counts.append(delete_cylinder_components(d, word * j, k, order))
        branch["".join(map(str, word))] = counts
    return Fingerprint(
        connected=hata_connected(d),
        full_edge_tree_upto=upto,
        first_cycle_level=first_cycle_level(d, kmax),
        branch_samples=branch,
        order=order,
        kmax=kmax,
        tree_levels=tree_levels,
    )
