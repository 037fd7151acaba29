"""Batch scans, self-checking records, report formats and figure rendering."""
from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .congruence import CanonicalKey, canonical_form, enumerate_classes
from .grid import DigitSet, approximation, check_cap
from .paths import DEFAULT_KMAX, Classification, classify_type, validate_classification
from .topology import fingerprint
from .witness import AffineWitness, EquivalencePartition, equivalence_classes

TYPE_ORDER = ("I", "II", "III", "UNKNOWN")
CSV_COLUMNS = (
    "canonical_key", "m", "type", "connected", "vpath_level", "hpath_level",
    "lambda_level", "lines", "equiv_class",
)


class InvariantViolation(RuntimeError):
    """A stored certificate or merge failed to re-verify."""


@dataclass
class ScanOptions:
    kmax: int = DEFAULT_KMAX
    numerators: int = 2
    denominators: tuple[int, ...] = (1, 2)
    jobs: int = 1
    fingerprint: bool = False
    fingerprint_kmax: int = 3


def _level(cert):
    return cert.level if cert is not None else None


def _line_str(ln) -> str:
    return ln.kind if ln.index is None else f"{ln.kind}:{ln.index}"


@dataclass
class ClassificationRecord:
    n: int
    m: int
    key: CanonicalKey
    classification: Classification
    connected: bool
    equiv_class: int | None = None
    witness: dict | None = None
    fingerprint: dict | None = None

    @property
    def digitset(self) -> DigitSet:
        return self.key.digitset()

    @property
    def type(self) -> str:
        return self.classification.type

    def to_dict(self) -> dict:
        c = self.classification
        certs = c.to_dict()
        certs.update(
            vpath_level=_level(c.vpath),
            hpath_level=_level(c.hpath),
            lambda_level=_level(c.lam),
        )
        return {
            "n": self.n,
            "m": self.m,
            "canonical_key": self.key.hex,
            "matrix": list(self.digitset.label_matrix()),
            "type": c.type,
            "label": c.label,
            "connected": self.connected,
            "certificates": certs,
            "fingerprint": self.fingerprint,
            "equiv_class": self.equiv_class,
            "witness": self.witness,
        }

    @classmethod
    def from_dict(cls, data: dict, check: bool = True) -> "ClassificationRecord":
        key = CanonicalKey.from_hex(data["canonical_key"])
        certs = {k: v for k, v in data["certificates"].items() if not k.endswith("_level")}
        rec = cls(
            n=int(data["n"]),
            m=int(data["m"]),
            key=key,
            classification=Classification.from_dict(certs),
            connected=bool(data["connected"]),
            equiv_class=data.get("equiv_class"),
            witness=data.get("witness"),
            fingerprint=data.get("fingerprint"),
        )
        if check and not rec.validate():
            raise InvariantViolation(f"record {key.hex} failed re-validation")
        return rec

    def validate(self) -> bool:
        d = self.digitset
        if canonical_form(d) != self.key or d.m != self.m:
            return False
        if not validate_classification(d, self.classification):
            return False
        w = self.witness
        if w is not None and w.get("kind") == "witness":
            wit = AffineWitness.from_dict(w)
            keys = {canonical_form(wit.source), canonical_form(wit.target)}
            if self.key not in keys or not wit.verify():
                return False
        return True


@dataclass
class ScanResult:
    n: int
    m: int
    records: list[ClassificationRecord]
    partition: EquivalencePartition
    options: ScanOptions = field(default_factory=ScanOptions)

    def by_type(self) -> dict[str, list[ClassificationRecord]]:
        out = {t: [] for t in TYPE_ORDER}
        for r in self.records:
            out[r.type].append(r)
        return out

    def summary(self) -> dict:
        groups = self.by_type()
        return {
            "n": self.n,
            "m": self.m,
            "classes": len(self.records),
            "types": {t: len(v) for t, v in groups.items()},
            "labels": dict(sorted(Counter(r.classification.label for r in self.records).items())),
            "connected": sum(r.connected for r in self.records),
            "equiv_classes": len(self.partition.classes),
            "partition": [[k.hex for k in cls] for cls in self.partition.classes],
            "merges": [mg.to_dict() for mg in self.partition.merges],
            "kmax": self.options.kmax,
        }

    def to_dict(self) -> dict:
        return {"summary": self.summary(), "records": [r.to_dict() for r in self.records]}


def _classify_one(args):
    d, kmax = args
    return classify_type(d, kmax)


def _provenance(partition: EquivalencePartition) -> dict[CanonicalKey, dict]:
    out = {}
    for mg in partition.merges:
        for key, other in ((mg.a, mg.b), (mg.b, mg.a)):
            if key in out:
                continue
            entry = {"kind": mg.kind, "via": other.hex}
            if mg.witness is not None:
                entry.update(mg.witness.to_dict())
            out[key] = entry
    return out


def run_scan(n: int, m: int, options: ScanOptions | None = None) -> ScanResult:
    """Classify every congruence class of (n, m) and build the equivalence partition."""
    from .automaton import hata_connected

    options = options or ScanOptions()
    reps = enumerate_classes(n, m)
    work = [(d, options.kmax) for d in reps]
    if options.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            found = list(pool.map(_classify_one, work))
    else:
        found = [_classify_one(w) for w in work]
    types = {canonical_form(d): c for d, c in zip(reps, found)}
    part = equivalence_classes(
        n, m, options.kmax, options.numerators, tuple(options.denominators), reps=reps, types=types
    )
    if not part.verify():
        raise InvariantViolation(f"equivalence partition for ({n},{m}) failed to re-verify")
    prov = _provenance(part)
    records = []
    for d in reps:
        key = canonical_form(d)
        fp = None
        if options.fingerprint:
            fp = fingerprint(d, kmax=options.fingerprint_kmax).to_dict()
        records.append(ClassificationRecord(
            n=n, m=m, key=key, classification=types[key], connected=hata_connected(d),
            equiv_class=part.class_of(key), witness=prov.get(key), fingerprint=fp,
        ))
    records.sort(key=lambda r: r.key)
    return ScanResult(n, m, records, part, options)


def scan_json(result: ScanResult) -> str:
    return json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n"


def load_scan_records(text: str) -> list[ClassificationRecord]:
    return [ClassificationRecord.from_dict(r) for r in json.loads(text)["records"]]


def _csv_row(r: ClassificationRecord) -> list:
    c = r.classification
    blank = lambda x: "" if x is None else x  # noqa: E731
    return [
        r.key.hex, r.m, c.type, int(r.connected), blank(_level(c.vpath)), blank(_level(c.hpath)),
        blank(_level(c.lam)), ";".join(_line_str(ln) for ln in c.lines), blank(r.equiv_class),
    ]


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(_csv_row(r))
    return buf.getvalue()


def scan_text(result: ScanResult) -> str:
    s = result.summary()
    lines = [f"({s['n']},{s['m']}): {s['classes']} congruence classes, {s['connected']} connected"]
    lines.append("types: " + ", ".join(f"{t}={c}" for t, c in s["types"].items()))
    lines.append(f"equivalence classes (upper bound): {s['equiv_classes']}")
    for r in result.records:
        c = r.classification
        lv = [f"{name}={_level(x)}" for name, x in (("v", c.vpath), ("h", c.hpath), ("lam", c.lam)) if x]
        lines.append(
            f"  {'/'.join(r.digitset.label_matrix())}  {c.label:<15} class={r.equiv_class} {' '.join(lv)}".rstrip()
        )
    return "\n".join(lines) + "\n"


def render(d: DigitSet, k: int, fmt: str = "pbm") -> bytes:
    """PBM (ASCII, top row first) or SVG (unit viewBox, one square per kept cell)."""
    check_cap(d.n, k)
    kept = approximation(d, k).kept
    size = kept.shape[0]
    if fmt == "pbm":
        rows = [" ".join("1" if b else "0" for b in kept[y]) for y in range(size - 1, -1, -1)]
        return ("P1\n%d %d\n" % (size, size) + "\n".join(rows) + "\n").encode("ascii")
    if fmt == "svg":
        parts = [
            '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1">',
            f'<g transform="matrix({1 / size!r} 0 0 {-1 / size!r} 0 1)" fill="black">',
        ]
        ys, xs = kept.nonzero()
        order = sorted(zip(ys.tolist(), xs.tolist()))
        parts.extend(f'<rect x="{x}" y="{y}" width="1" height="1"/>' for y, x in order)
        parts.append("</g>")
        parts.append("</svg>")
        return ("\n".join(parts) + "\n").encode("ascii")
    raise ValueError(f"unknown render format {fmt!r}")


def _write(path: Path, data: bytes) -> None:
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def atlas(n: int, m: int, k: int, out_dir, kmax: int = 4, fmt: str = "pbm") -> dict:
    """Render every congruence class at level ``k`` grouped by type; returns the index."""
    check_cap(n, k)
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {out}: {exc.strerror or exc}") from exc
    reps = sorted(enumerate_classes(n, m), key=canonical_form)
    groups: dict[str, list] = {t: [] for t in TYPE_ORDER}
    for d in reps:
        groups[classify_type(d, kmax).type].append(d)
    panels = []
    for t in TYPE_ORDER:
        for i, d in enumerate(groups[t], 1):
            name = f"n{n}m{m}_{t}_{i:02d}.{fmt}"
            _write(out / name, render(d, k, fmt))
            panels.append({
                "file": name,
                "group": t,
                "index": i,
                "canonical_key": canonical_form(d).hex,
                "matrix": list(d.label_matrix()),
            })
    index = {
        "n": n,
        "m": m,
        "k": k,
        "groups": {t: len(v) for t, v in groups.items() if v},
        "panels": panels,
    }
    _write(out / "index.json", (json.dumps(index, indent=2, sort_keys=True) + "\n").encode())
    return index


def record_for(d: DigitSet, kmax: int = DEFAULT_KMAX) -> ClassificationRecord:
    """Record for a single digit set; certificates refer to its canonical representative."""
    from .automaton import hata_connected

    key = canonical_form(d)
    rep = key.digitset()
    return ClassificationRecord(d.n, d.m, key, classify_type(rep, kmax), hata_connected(rep))
