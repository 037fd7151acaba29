import json
from pathlib import Path

import pytest

from fracsq.catalogue import SQUARES_3_5, TEE
from fracsq.grid import CellCapExceeded, parse_label_matrix
from fracsq.report import (
    CSV_COLUMNS,
    ClassificationRecord,
    InvariantViolation,
    ScanOptions,
    atlas,
    load_scan_records,
    record_for,
    records_csv,
    render,
    run_scan,
    scan_json,
    scan_text,
)

GOLDENS = Path(__file__).resolve().parent / "goldens"
GOLDEN_CASES = {
    "tee_k1": ("010,010,111", 1),
    "tee_k2": ("010,010,111", 2),
    "ell_k3": ("100,100,111", 3),
    "saltire_k3": ("101,010,101", 3),
    "sq1_k3": ("010,101,101", 3),
    "sq12_k2": ("101,000,111", 2),
    "td4_k2": ("0111,1011,1001,0110", 2),
}


@pytest.fixture(scope="module")
def scan35():
    return run_scan(3, 5, ScanOptions(kmax=4))


def test_scan_summary(scan35):
    s = scan35.summary()
    assert s["classes"] == 21
    assert s["types"] == {"I": 5, "II": 6, "III": 10, "UNKNOWN": 0}
    assert s["equiv_classes"] == 10
    groups = scan35.by_type()
    assert all(s["types"][t] == len(groups[t]) for t in groups)


@pytest.mark.parametrize("m,classes,connected", [(6, 16, 10), (7, 8, 8), (8, 3, 3)])
def test_scan_counts(m, classes, connected):
    s = run_scan(3, m, ScanOptions(kmax=4)).summary()
    assert s["classes"] == classes and s["connected"] == connected


def test_json_roundtrip_is_identical(scan35):
    text = scan_json(scan35)
    data = json.loads(text)
    recs = load_scan_records(text)
    assert [r.to_dict() for r in recs] == data["records"]
    rec = data["records"][0]
    assert {"type", "certificates", "equiv_class", "witness"} <= set(rec)
    assert "vpath_level" in rec["certificates"]


def test_witness_fields_are_rational_strings(scan35):
    ws = [r.witness for r in scan35.records if r.witness and r.witness["kind"] == "witness"]
    assert ws
    for w in ws:
        assert all(isinstance(x, str) for row in w["A"] for x in row)
        assert all(isinstance(x, str) for x in w["v"])


def test_scan_deterministic(scan35):
    again = run_scan(3, 5, ScanOptions(kmax=4, jobs=2))
    assert scan_json(again) == scan_json(scan35)


def test_tampered_record_rejected(scan35):
    data = json.loads(scan_json(scan35))["records"]
    rec = next(r for r in data if r["certificates"]["vpath"])
    rec["certificates"]["vpath"]["chain"] = rec["certificates"]["vpath"]["chain"][:-1]
    with pytest.raises(InvariantViolation):
        ClassificationRecord.from_dict(rec)
    wrec = next(r for r in json.loads(scan_json(scan35))["records"] if r["witness"] and r["witness"]["kind"] == "witness")
    wrec["witness"]["v"] = ["1/3", "0"]
    with pytest.raises(InvariantViolation):
        ClassificationRecord.from_dict(wrec)


def test_csv(scan35):
    text = records_csv(scan35.records)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 22


def test_text(scan35):
    out = scan_text(scan35)
    assert out.startswith("(3,5): 21 congruence classes")


def test_record_for_non_canonical_input():
    rec = record_for(SQUARES_3_5[12], 4)
    assert rec.validate() and rec.type == "III"


def test_render_pbm_tee():
    assert render(TEE, 1, "pbm") == b"P1\n3 3\n0 1 0\n0 1 0\n1 1 1\n"
    body = render(TEE, 2, "pbm").decode().split("\n", 2)[2]
    assert body.count("1") == 25


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_render_matches_golden(name):
    rows, k = GOLDEN_CASES[name]
    assert render(parse_label_matrix(rows), k, "pbm") == (GOLDENS / f"{name}.pbm").read_bytes()


def test_render_svg():
    svg = render(TEE, 2, "svg").decode()
    assert 'viewBox="0 0 1 1"' in svg
    assert svg.count("<rect") == 25
    assert render(TEE, 2, "svg") == render(TEE, 2, "svg")
    with pytest.raises(ValueError):
        render(TEE, 1, "png")


def test_render_cap(monkeypatch):
    monkeypatch.setenv("FRACSQ_MAX_CELLS", "100")
    with pytest.raises(CellCapExceeded):
        render(TEE, 3)


@pytest.mark.parametrize("m,groups", [(5, {"I": 5, "II": 6, "III": 10}), (6, {"II": 10, "III": 6}),
                                      (7, {"II": 8}), (8, {"II": 3}), (2, {"I": 5})])
def test_atlas_groups(tmp_path, m, groups):
    index = atlas(3, m, 2, tmp_path)
    assert index["groups"] == groups
    assert len(index["panels"]) == sum(groups.values())
    assert json.loads((tmp_path / "index.json").read_text()) == index
    for p in index["panels"]:
        assert (tmp_path / p["file"]).read_bytes().startswith(b"P1\n9 9\n")


def test_atlas_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        atlas(3, 8, 1, blocker / "sub")
