"""Affine Lipschitz-equivalence witnesses and the equivalence partition.

A witness ``x -> a x + v`` maps one attractor onto another exactly when
``{a d + (n - 1) v : d in source} = target`` as sets, because the image is
then the attractor of the target digits.  Any invertible ``a`` makes the map
bi-Lipschitz.  All arithmetic is exact (``fractions.Fraction``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm

import numpy as np

from .congruence import CanonicalKey, canonical_form, enumerate_classes
from .grid import DigitSet
from .paths import DEFAULT_KMAX, Classification, classify_type, validate_classification

Matrix = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
Vector = tuple[Fraction, Fraction]


class SingularWitnessError(ValueError):
    """The linear part of a proposed witness is not invertible."""


def as_matrix(rows) -> Matrix:
    (a, b), (c, d) = rows
    return ((Fraction(a), Fraction(b)), (Fraction(c), Fraction(d)))


def as_vector(v) -> Vector:
    return (Fraction(v[0]), Fraction(v[1]))


def det(a: Matrix) -> Fraction:
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def apply(a: Matrix, p) -> Vector:
    return (a[0][0] * p[0] + a[0][1] * p[1], a[1][0] * p[0] + a[1][1] * p[1])


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


def inverse(a: Matrix) -> Matrix:
    dt = det(a)
    if dt == 0:
        raise SingularWitnessError("matrix is singular")
    return ((a[1][1] / dt, -a[0][1] / dt), (-a[1][0] / dt, a[0][0] / dt))


def frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def image_digits(a: Matrix, v: Vector, d: DigitSet) -> list[Vector]:
    """``A d + (n - 1) v`` for every digit, in digit order."""
    s = d.n - 1
    return [(p[0] + s * v[0], p[1] + s * v[1]) for p in (apply(a, c) for c in d.cells)]


def verify_witness(a, v, d: DigitSet, dp: DigitSet) -> bool:
    """Exact check that ``x -> A x + v`` maps the source attractor onto the target one.

    Raises ``SingularWitnessError`` for a singular ``A``; returns False when
    the digit sets do not correspond.
    """
    a, v = as_matrix(a), as_vector(v)
    if d.n != dp.n:
        raise ValueError("digit sets live on different grids")
    if det(a) == 0:
        raise SingularWitnessError(f"witness matrix {a} is singular")
    img = image_digits(a, v, d)
    return len(set(img)) == len(img) and set(img) == {(Fraction(x), Fraction(y)) for x, y in dp.cells}


@dataclass(frozen=True)
class AffineWitness:
    a: Matrix
    v: Vector
    source: DigitSet
    target: DigitSet

    @property
    def source_key(self) -> CanonicalKey:
        return canonical_form(self.source)

    @property
    def target_key(self) -> CanonicalKey:
        return canonical_form(self.target)

    def verify(self) -> bool:
        return verify_witness(self.a, self.v, self.source, self.target)

    def to_dict(self) -> dict:
        return {
            "A": [[frac_str(x) for x in row] for row in self.a],
            "v": [frac_str(x) for x in self.v],
            "source": list(self.source.label_matrix()),
            "target": list(self.target.label_matrix()),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AffineWitness":
        from .grid import parse_label_matrix

        return cls(
            as_matrix([[Fraction(x) for x in row] for row in data["A"]]),
            as_vector([Fraction(x) for x in data["v"]]),
            parse_label_matrix(data["source"]),
            parse_label_matrix(data["target"]),
        )


def candidate_values(numerators: int = 2, denominators=(1, 2)) -> list[Fraction]:
    """Entries ``p/q`` with ``|p| <= numerators``, ``q`` in ``denominators``, simplest first."""
    vals = {Fraction(p, q) for p in range(-numerators, numerators + 1) for q in denominators}
    return sorted(vals, key=lambda f: (f.denominator, abs(f.numerator), f < 0))


def search_witness(d: DigitSet, dp: DigitSet, numerators: int = 2, denominators=(1, 2)):
    """First verified witness source -> target over the candidate matrices, or None.

    The translation is never searched: equal digit sets have equal centroids,
    which forces ``(n - 1) v = mean(target) - a mean(source)``.
    """
    if d.n != dp.n or d.m != dp.m:
        return None
    vals = candidate_values(numerators, denominators)
    scale = lcm(*(v.denominator for v in vals))
    ivals = np.array([int(v * scale) for v in vals], dtype=np.int64)
    idx = np.array(list(product(range(len(vals)), repeat=4)), dtype=np.int64)
    mats = ivals[idx].reshape(-1, 2, 2)  # scale * A, lexicographic candidate order
    mats = mats[mats[:, 0, 0] * mats[:, 1, 1] != mats[:, 0, 1] * mats[:, 1, 0]]

    m = d.m
    src = d.array()
    dst = dp.array()
    # compare m * scale * (A d + (n-1) v) with m * scale * d'
    pts = np.einsum("cij,pj->cpi", mats, src)  # scale * A d
    shift = scale * dst.sum(axis=0)[None, :] - pts.sum(axis=1)
    img = m * pts + shift[:, None, :]
    target = m * scale * dst
    big = int(np.abs(img).max(initial=0)) + int(np.abs(target).max(initial=0)) + 1
    img_keys = np.sort(img[..., 0] * (2 * big + 1) + img[..., 1], axis=1)
    tgt_keys = np.sort(target[:, 0] * (2 * big + 1) + target[:, 1])
    hits = np.nonzero((img_keys == tgt_keys[None, :]).all(axis=1))[0]
    for h in hits:
        a = tuple(tuple(Fraction(int(x), scale) for x in row) for row in mats[h])
        sv = shift[h]
        v = (Fraction(int(sv[0]), m * scale * (d.n - 1)), Fraction(int(sv[1]), m * scale * (d.n - 1)))
        if verify_witness(a, v, d, dp):
            return AffineWitness(a, v, d, dp)
    return None


def compose_witness(w1: AffineWitness, w2: AffineWitness) -> AffineWitness:
    """``w2 ∘ w1``: maps the source of ``w1`` onto the target of ``w2``."""
    if w1.target != w2.source:
        raise ValueError("witness endpoints do not match")
    a = matmul(w2.a, w1.a)
    av = apply(w2.a, w1.v)
    v = (av[0] + w2.v[0], av[1] + w2.v[1])
    return AffineWitness(a, v, w1.source, w2.target)


def invert_witness(w: AffineWitness) -> AffineWitness:
    ai = inverse(w.a)
    p = apply(ai, w.v)
    return AffineWitness(ai, (-p[0], -p[1]), w.target, w.source)


@dataclass
class Merge:
    a: CanonicalKey
    b: CanonicalKey
    kind: str  # td | witness
    witness: AffineWitness | None = None

    def to_dict(self) -> dict:
        out = {"a": self.a.hex, "b": self.b.hex, "kind": self.kind}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out


@dataclass
class EquivalencePartition:
    """Upper bound on Lipschitz classes: merges are proofs, separations are not."""

    n: int
    m: int
    classes: list[list[CanonicalKey]]
    merges: list[Merge] = field(default_factory=list)
    types: dict[CanonicalKey, Classification] = field(default_factory=dict)

    def class_of(self, key: CanonicalKey) -> int:
        for i, cls in enumerate(self.classes):
            if key in cls:
                return i
        raise KeyError(key)

    def verify(self) -> bool:
        """Every merge re-verifies and the merges generate the stated classes."""
        reps = {k: k.digitset() for cls in self.classes for k in cls}
        uf = _UnionFind(reps)
        for mg in self.merges:
            if mg.kind == "td":
                for key in (mg.a, mg.b):
                    rec = self.types[key]
                    if rec.label != "I" or not validate_classification(reps[key], rec):
                        return False
            elif mg.kind == "witness":
                w = mg.witness
                if w is None or not w.verify():
                    return False
                if {w.source_key, w.target_key} != {mg.a, mg.b}:
                    return False
            else:
                return False
            uf.union(mg.a, mg.b)
        return sorted(map(sorted, uf.groups())) == sorted(map(sorted, self.classes))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self) -> list[list]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def equivalence_classes(
    n: int,
    m: int,
    kmax: int = DEFAULT_KMAX,
    numerators: int = 2,
    denominators=(1, 2),
    reps: list[DigitSet] | None = None,
    types: dict | None = None,
) -> EquivalencePartition:
    """Merge totally disconnected classes, then every pair joined by a found witness."""
    if reps is None:
        reps = enumerate_classes(n, m)
    keys = sorted(canonical_form(d) for d in reps)
    by_key = {canonical_form(d): d for d in reps}
    if types is None:
        types = {}
    types = {k: types[k] if k in types else classify_type(by_key[k], kmax) for k in keys}

    uf = _UnionFind(keys)
    merges = []
    td = [k for k in keys if types[k].label == "I"]
    for k in td[1:]:
        uf.union(td[0], k)
        merges.append(Merge(td[0], k, "td"))
    for i, ka in enumerate(keys):
        for kb in keys[i + 1:]:
            if uf.find(ka) == uf.find(kb):
                continue
            w = search_witness(by_key[ka], by_key[kb], numerators, denominators)
            if w is None:
                back = search_witness(by_key[kb], by_key[ka], numerators, denominators)
                w = invert_witness(back) if back is not None else None
            if w is not None:
                uf.union(ka, kb)
                merges.append(Merge(ka, kb, "witness", w))
    classes = sorted(sorted(g) for g in uf.groups())
    return EquivalencePartition(n, m, classes, merges, types)
