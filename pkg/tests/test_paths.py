import pytest

from fracsq.catalogue import ELL, EXPECTED_TYPES_3_5, SALTIRE, SQUARES_3_5, TEE
from fracsq.congruence import canonical_form
from fracsq.grid import DigitSet, parse_label_matrix
from fracsq.paths import (
    _crossing,
    Classification,
    LineCertificate,
    PathCertificate,
    boundary_line_cover,
    classify_type,
    complement_path,
    construct_td_digitset,
    cross_path,
    full_lines,
    lambda_path,
    validate_classification,
    validate_path,
)

M = SQUARES_3_5
CENTRE = DigitSet.of(3, [(1, 1)])


def test_m12_horizontal_through_middle_row():
    p = complement_path(M[12], "horizontal", 6)
    assert p.level == 1 and all(c.y == 1 for c in p.chain)
    assert validate_path(M[12], p)


def test_tee_has_no_vertical_path():
    assert complement_path(TEE, "vertical", 6) is None


def test_m1_vertical_path():
    p = complement_path(M[1], "vertical", 4)
    assert p is not None and p.level <= 4 and validate_path(M[1], p)


def test_cross_paths():
    v, h = cross_path(M[5], 4)
    assert v.level == h.level <= 4
    assert cross_path(M[10], 6) is None
    v, h = cross_path(CENTRE, 1)
    assert v.level == 1


def test_lambda_paths():
    assert lambda_path(construct_td_digitset(3)).level == 2
    assert lambda_path(SALTIRE) is None
    assert lambda_path(CENTRE).level == 1


def test_validate_path_rejects_tampering():
    p = complement_path(M[12], "horizontal", 6)
    assert not validate_path(M[12], PathCertificate("horizontal", 1, p.chain[:-1]))
    assert not validate_path(M[12], PathCertificate("vertical", 1, p.chain))
    blocked = PathCertificate("horizontal", 1, tuple(type(c)(c.x, 0) for c in p.chain))
    assert not validate_path(M[12], blocked)


def test_path_monotone_in_level(family_3_5):
    # a certificate found at level k refines to one at every deeper level
    for d in family_3_5:
        for kind in ("vertical", "horizontal"):
            p = complement_path(d, kind, 3)
            if p is None:
                continue
            for k in range(p.level, 5):
                q = _crossing(d, kind, k)
                assert q is not None and q.level == k and validate_path(d, q)


def test_cross_iff_both(family_3_5):
    for d in family_3_5:
        both = complement_path(d, "vertical", 3) is not None and complement_path(d, "horizontal", 3) is not None
        assert (cross_path(d, 3) is not None) == both


def test_lines():
    assert full_lines(ELL) == [
        LineCertificate("column", "vertical", 0),
        LineCertificate("row", "horizontal", 0),
    ]
    assert full_lines(M[20]) == [LineCertificate("column", "vertical", 1)]
    assert full_lines(M[19]) == [LineCertificate("main-diagonal", "diagonal")]


def test_boundary_cover():
    assert boundary_line_cover(ELL, "vertical")["L"] is False
    both = parse_label_matrix("101,101,101")
    assert boundary_line_cover(both, "vertical")["LR"] is True
    assert not any(boundary_line_cover(M[20], "vertical").values())
    with pytest.raises(ValueError):
        boundary_line_cover(ELL, "diagonal")


def test_boundary_cover_adds_nothing_beyond_full_columns(family_3_5):
    for d in family_3_5:
        cover = boundary_line_cover(d, "vertical")
        edge_full = any(all((c, j) in d for j in range(3)) for c in (0, 2))
        assert cover["LR"] == edge_full


@pytest.mark.parametrize("i,label", [(3, "I"), (8, "II"), (13, "III")])
def test_type_examples(i, label):
    assert classify_type(M[i], 4).type == label


def test_catalogue_types_depth4():
    for i in range(1, 22):
        rec = classify_type(M[i], 4)
        assert rec.type == EXPECTED_TYPES_3_5[i], i
        assert validate_classification(M[i], rec)


def test_classification_roundtrip():
    for i in (1, 6, 12, 19):
        rec = classify_type(M[i], 4)
        back = Classification.from_dict(rec.to_dict())
        assert back == rec and back.to_dict() == rec.to_dict()


def test_tampered_label_fails_validation():
    rec = classify_type(M[12], 4)
    rec.label = "I"
    assert not validate_classification(M[12], rec)


def test_construct_n3():
    d = construct_td_digitset(3)
    assert set(d.cells) == {(1, 0), (0, 1), (2, 1), (1, 2), (2, 2)}
    assert canonical_form(d) == canonical_form(M[5])


@pytest.mark.parametrize("n", range(2, 9))
def test_construct_general(n):
    d = construct_td_digitset(n)
    assert d.m == n * n - n - n // 2
    rec = classify_type(d, 2)
    assert rec.label == "I" and rec.lam is not None and rec.lam.level <= 2


def test_construct_n2_is_single_cell():
    d = construct_td_digitset(2)
    assert d.m == 1 and classify_type(d, 2).label == "I"
