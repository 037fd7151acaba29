"""Complement-path and line-segment certificates, and the type classifier.

A path certificate is a chain of empty level-``k`` cells, consecutive cells
sharing a full side (corner contacts are never used: a curve through a shared
corner could meet the attractor).  Searches are semi-decisions up to ``kmax``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .automaton import hata_connected, hata_spanning_tree
from .grid import Cell, DigitSet, approximation

DEFAULT_KMAX = 6
# neighbour order used when walking back along BFS distances
_STEP = ((0, -1), (-1, 0), (1, 0), (0, 1))


@dataclass(frozen=True)
class PathCertificate:
    kind: str  # vertical | horizontal | lambda
    level: int
    chain: tuple[Cell, ...]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "level": self.level, "chain": [list(c) for c in self.chain]}

    @classmethod
    def from_dict(cls, data: dict) -> "PathCertificate":
        return cls(data["kind"], int(data["level"]), tuple(Cell(*c) for c in data["chain"]))


@dataclass(frozen=True)
class LineCertificate:
    kind: str  # column | row | main-diagonal | anti-diagonal | boundary-line
    orientation: str  # vertical | horizontal | diagonal
    index: int | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "orientation": self.orientation, "index": self.index}

    @classmethod
    def from_dict(cls, data: dict) -> "LineCertificate":
        return cls(data["kind"], data["orientation"], data["index"])


def _free(d: DigitSet, k: int) -> np.ndarray:
    return ~approximation(d, k).kept


def _walk_back(dist: np.ndarray, end) -> tuple[Cell, ...]:
    x, y = end
    h, w = dist.shape
    chain = [Cell(x, y)]
    while dist[y, x] > 0:
        for dx, dy in _STEP:
            nx, ny = x + dx, y + dy
            if 0 <= nx < w and 0 <= ny < h and dist[ny, nx] == dist[y, x] - 1:
                x, y = nx, ny
                break
        chain.append(Cell(x, y))
    return tuple(reversed(chain))


def _crossing(d: DigitSet, kind: str, k: int) -> PathCertificate | None:
    free = _free(d, k)
    if kind == "horizontal":
        free = free.T  # work in transposed coordinates
    size = free.shape[0]
    dist = _kernels.bfs_distances(free, np.arange(size), _kernels.FOUR)
    top = dist[size - 1]
    reached = np.nonzero(top >= 0)[0]
    if len(reached) == 0:
        return None
    # shortest chain; ties broken by the leftmost end cell
    end_x = int(reached[np.argmin(top[reached])])
    chain = _walk_back(dist, (end_x, size - 1))
    if kind == "horizontal":
        chain = tuple(Cell(c.y, c.x) for c in chain)
    return PathCertificate(kind, k, chain)


def complement_path(d: DigitSet, kind: str, kmax: int = DEFAULT_KMAX) -> PathCertificate | None:
    """Least-level chain of empty cells from bottom to top (``vertical``) or
    left to right (``horizontal``); None means none up to ``kmax``."""
    if kind not in ("vertical", "horizontal"):
        raise ValueError(f"unknown path kind {kind!r}")
    for k in range(1, kmax + 1):
        cert = _crossing(d, kind, k)
        if cert is not None:
            return cert
    return None


def cross_path(d: DigitSet, kmax: int = DEFAULT_KMAX):
    """A vertical and a horizontal certificate at the common level, or None."""
    v = complement_path(d, "vertical", kmax)
    if v is None:
        return None
    h = complement_path(d, "horizontal", kmax)
    if h is None:
        return None
    level = max(v.level, h.level)
    return _crossing(d, "vertical", level), _crossing(d, "horizontal", level)


def _corner_cells(size: int) -> list[Cell]:
    t = size - 1
    return [Cell(0, 0), Cell(t, 0), Cell(0, t), Cell(t, t)]


def _lambda_at(d: DigitSet, k: int) -> PathCertificate | None:
    free = _free(d, k)
    size = free.shape[0]
    labels, _ = _kernels.label_components(free, _kernels.FOUR)
    corners = [c for c in _corner_cells(size) if free[c.y, c.x]]
    for hub in corners:
        group = [c for c in corners if labels[c.y, c.x] == labels[hub.y, hub.x]]
        if len(group) < 3:
            continue
        dist = _kernels.bfs_distances(free, [hub.y * size + hub.x], _kernels.FOUR)
        chain: list[Cell] = []
        for target in group[1:]:
            for c in _walk_back(dist, target):
                if c not in chain:
                    chain.append(c)
        return PathCertificate("lambda", k, tuple(chain))
    return None


def lambda_path(d: DigitSet, kmax: int = DEFAULT_KMAX) -> PathCertificate | None:
    """Connected empty chain reaching at least three corner cells, least level first."""
    for k in range(1, kmax + 1):
        cert = _lambda_at(d, k)
        if cert is not None:
            return cert
    return None


def validate_path(d: DigitSet, cert: PathCertificate) -> bool:
    """Re-check a path certificate against the digit set from scratch."""
    if not cert.chain:
        return False
    size = d.n**cert.level
    kept = approximation(d, cert.level).kept
    for c in cert.chain:
        if not (0 <= c.x < size and 0 <= c.y < size) or kept[c.y, c.x]:
            return False
    if cert.kind in ("vertical", "horizontal"):
        for a, b in zip(cert.chain, cert.chain[1:]):
            if abs(a.x - b.x) + abs(a.y - b.y) != 1:
                return False
        first, last = cert.chain[0], cert.chain[-1]
        if cert.kind == "vertical":
            return first.y == 0 and last.y == size - 1
        return first.x == 0 and last.x == size - 1
    if cert.kind == "lambda":
        cells = set(cert.chain)
        seen = {cert.chain[0]}
        stack = [cert.chain[0]]
        while stack:
            x, y = stack.pop()
            for dx, dy in _STEP:
                c = Cell(x + dx, y + dy)
                if c in cells and c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen == cells and sum(c in cells for c in _corner_cells(size)) >= 3
    return False


def boundary_line_cover(d: DigitSet, orientation: str = "vertical") -> dict[str, bool]:
    """Whether a full unit grid edge shared by two copies of the attractor lies in it.

    States are the nonempty subsets of ``{L, R}`` (for horizontal edges, L is
    the copy below and R the copy above).  Sub-edge ``j`` stays available from
    the left iff ``(n-1, j)`` is a digit, from the right iff ``(0, j)`` is.  A
    state is covered iff no descent reaches the empty state.
    """
    if orientation == "horizontal":
        d = d.transpose()
    elif orientation != "vertical":
        raise ValueError(f"unknown orientation {orientation!r}")
    n = d.n

    def step(state):
        for j in range(n):
            yield frozenset(
                s for s in state
                if (s == "L" and (n - 1, j) in d) or (s == "R" and (0, j) in d)
            )

    out = {}
    for name in ("L", "R", "LR"):
        start = frozenset(name)
        seen = {start}
        stack = [start]
        while stack:
            for nxt in step(stack.pop()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        out[name] = frozenset() not in seen
    return out


def _covered_grid_lines(d: DigitSet, orientation: str) -> list[int]:
    dd = d.transpose() if orientation == "horizontal" else d
    cover = boundary_line_cover(d, orientation)
    out = []
    for c in range(1, d.n):
        ok = True
        for j in range(d.n):
            state = ("L" if (c - 1, j) in dd else "") + ("R" if (c, j) in dd else "")
            if not state or not cover[state]:
                ok = False
                break
        if ok:
            out.append(c)
    return out


def full_lines(d: DigitSet) -> list[LineCertificate]:
    """Full columns, rows and diagonals of the digit set, plus covered interior grid lines."""
    n = d.n
    out = []
    for c in range(n):
        if all((c, j) in d for j in range(n)):
            out.append(LineCertificate("column", "vertical", c))
    for r in range(n):
        if all((i, r) in d for i in range(n)):
            out.append(LineCertificate("row", "horizontal", r))
    if all((i, i) in d for i in range(n)):
        out.append(LineCertificate("main-diagonal", "diagonal"))
    if all((i, n - 1 - i) in d for i in range(n)):
        out.append(LineCertificate("anti-diagonal", "diagonal"))
    for orientation in ("vertical", "horizontal"):
        for c in _covered_grid_lines(d, orientation):
            out.append(LineCertificate("boundary-line", orientation, c))
    return out


@dataclass
class Classification:
    """Type label with the certificates that justify it."""

    label: str  # I | II | III-vertical | III-horizontal | III-presumed | UNKNOWN
    kmax: int
    vpath: PathCertificate | None = None
    hpath: PathCertificate | None = None
    lam: PathCertificate | None = None
    lines: list[LineCertificate] = field(default_factory=list)
    hata_tree: list | None = None

    @property
    def type(self) -> str:
        return self.label.split("-")[0]

    @property
    def certified(self) -> bool:
        return self.label not in ("III-presumed", "UNKNOWN")

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "kmax": self.kmax,
            "vpath": self.vpath.to_dict() if self.vpath else None,
            "hpath": self.hpath.to_dict() if self.hpath else None,
            "lambda": self.lam.to_dict() if self.lam else None,
            "lines": [ln.to_dict() for ln in self.lines],
            "hata_tree": [[list(a), list(b)] for a, b in self.hata_tree] if self.hata_tree is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Classification":
        def cert(x):
            return PathCertificate.from_dict(x) if x else None

        tree = data.get("hata_tree")
        return cls(
            label=data["label"],
            kmax=int(data["kmax"]),
            vpath=cert(data.get("vpath")),
            hpath=cert(data.get("hpath")),
            lam=cert(data.get("lambda")),
            lines=[LineCertificate.from_dict(x) for x in data.get("lines", [])],
            hata_tree=[(Cell(*a), Cell(*b)) for a, b in tree] if tree is not None else None,
        )


def classify_type(d: DigitSet, kmax: int = DEFAULT_KMAX) -> Classification:
    """Label the attractor as I, II, III (certified or presumed) or UNKNOWN up to ``kmax``.

    Connected with at least two digits gives II.  Otherwise an axis-parallel
    complement path gives I when the attractor has no segment in that direction and III
    (components confined to parallel lines) when it has one.  A lambda path
    gives I.  Remaining sets with a full line are labelled III-presumed.
    """
    lines = full_lines(d)
    vlines = [ln for ln in lines if ln.orientation == "vertical"]
    hlines = [ln for ln in lines if ln.orientation == "horizontal"]
    if d.m >= 2:
        tree = hata_spanning_tree(d)
        if tree is not None:
            return Classification("II", kmax, lines=lines, hata_tree=tree)
    v = complement_path(d, "vertical", kmax)
    h = complement_path(d, "horizontal", kmax)
    lam = lambda_path(d, kmax)
    rec = Classification("UNKNOWN", kmax, vpath=v, hpath=h, lam=lam, lines=lines)
    if v is not None:
        rec.label = "III-vertical" if vlines else "I"
    elif h is not None:
        rec.label = "III-horizontal" if hlines else "I"
    elif lam is not None:
        rec.label = "I"
    elif lines:
        rec.label = "III-presumed"
    return rec


def validate_classification(d: DigitSet, rec: Classification) -> bool:
    """Re-derive the label's justification from the stored certificates."""
    for cert in (rec.vpath, rec.hpath, rec.lam):
        if cert is not None and not validate_path(d, cert):
            return False
    if rec.lines != full_lines(d):
        return False
    vlines = any(ln.orientation == "vertical" for ln in rec.lines)
    hlines = any(ln.orientation == "horizontal" for ln in rec.lines)
    if rec.label == "II":
        return d.m >= 2 and hata_connected(d) and _is_spanning_tree(d, rec.hata_tree)
    if rec.label == "I":
        if rec.lines:
            return False
        return rec.vpath is not None or rec.hpath is not None or rec.lam is not None
    if rec.label == "III-vertical":
        return rec.vpath is not None and vlines
    if rec.label == "III-horizontal":
        return rec.hpath is not None and hlines
    if rec.label == "III-presumed":
        return bool(rec.lines) and not hata_connected(d)
    return rec.label == "UNKNOWN"


def _is_spanning_tree(d: DigitSet, tree) -> bool:
    from .automaton import hata_edges

    if tree is None or len(tree) != d.m - 1:
        return False
    allowed = {frozenset(e) for e in hata_edges(d)}
    parent = {c: c for c in d.cells}

    def find(c):
        while parent[c] != c:
            c = parent[c]
        return c

    for a, b in tree:
        if frozenset((a, b)) not in allowed:
            return False
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def construct_td_digitset(n: int) -> DigitSet:
    """Digit set with ``n^2 - n - floor(n/2)`` digits whose attractor is totally disconnected.

    The removed cells are the anti-diagonal plus the first ``ceil(n/2)`` cells
    of the main diagonal; they form a lambda-shaped empty region at level 2.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    removed = {(i, i) for i in range((n + 1) // 2)} | {(j, n - 1 - j) for j in range(n)}
    cells = [(x, y) for y in range(n) for x in range(n) if (x, y) not in removed]
    return DigitSet.of(n, cells)
