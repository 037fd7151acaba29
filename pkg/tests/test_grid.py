import numpy as np
import pytest

from fracsq.catalogue import ELL, SALTIRE, SALTIRE_ORDER, TEE
from fracsq.grid import (
    Cell,
    CellCapExceeded,
    DigitSet,
    approximation,
    check_cap,
    corner_membership,
    cylinder_cells,
    parse_label_matrix,
    to_label_matrix,
)
from oracles import kept_by_expansion


def test_parse_tee_and_ell():
    assert set(parse_label_matrix(["010", "010", "111"]).cells) == {(0, 0), (1, 0), (2, 0), (1, 1), (1, 2)}
    assert set(parse_label_matrix("100,100,111").cells) == {(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)}


def test_parse_two_by_two():
    # entry (i, j) is the cell (j - 1, n - i)
    d = parse_label_matrix(["10", "01"])
    assert d.n == 2 and set(d.cells) == {(0, 1), (1, 0)}
    assert set(parse_label_matrix(["01", "10"]).cells) == {(0, 0), (1, 1)}


def test_cells_sorted_by_row_then_column():
    assert TEE.cells == (Cell(0, 0), Cell(1, 0), Cell(2, 0), Cell(1, 1), Cell(1, 2))


@pytest.mark.parametrize("rows", [["01", "011"], ["000", "000", "000"], ["11", "11"], ["012", "000", "111"]])
def test_parse_rejects(rows):
    with pytest.raises(ValueError):
        parse_label_matrix(rows)


def test_separators():
    assert parse_label_matrix("010\n010\n111") == parse_label_matrix("010;010;111") == TEE


def test_label_roundtrip(family_3_5):
    for d in family_3_5:
        rows = to_label_matrix(d)
        assert parse_label_matrix(rows) == d
        assert to_label_matrix(parse_label_matrix(rows)) == rows


def test_digitset_validation():
    with pytest.raises(ValueError):
        DigitSet.of(3, [(3, 0)])
    with pytest.raises(ValueError):
        DigitSet.of(2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    with pytest.raises(ValueError):
        DigitSet(3, (Cell(0, 0), Cell(0, 0)))


def test_tee_levels():
    a1 = approximation(TEE, 1)
    assert a1.popcount == 5 and set(a1.cells()) == set(TEE.cells)
    a2 = approximation(TEE, 2)
    assert a2.popcount == 25
    assert np.array_equal(a2.kept, kept_by_expansion(TEE.cells, 3, 2))


def test_approximation_matches_expansion(family_3_5):
    for d in family_3_5[::7]:
        assert np.array_equal(approximation(d, 3).kept, kept_by_expansion(d.cells, 3, 3))


def test_refinement_and_popcount(family_3_5):
    for d in family_3_5:
        prev = approximation(d, 1).kept
        for k in (2, 3):
            cur = approximation(d, k).kept
            assert cur.sum() == d.m ** k
            parent = cur.reshape(prev.shape[0], 3, prev.shape[1], 3).any(axis=(1, 3))
            assert not (parent & ~prev).any()
            prev = cur


def test_self_similar_blocks():
    a3 = approximation(ELL, 3).kept
    a2 = approximation(ELL, 2).kept
    for x, y in ELL.cells:
        assert np.array_equal(a3[9 * y:9 * y + 9, 9 * x:9 * x + 9], a2)


def test_cell_cap(monkeypatch):
    monkeypatch.setenv("FRACSQ_MAX_CELLS", "1000")
    check_cap(3, 3)
    with pytest.raises(CellCapExceeded):
        check_cap(3, 4)
    with pytest.raises(CellCapExceeded):
        approximation(TEE, 7)


def test_cylinders():
    assert cylinder_cells(TEE, "2", 2) == {(3, 0), (4, 0), (5, 0), (4, 1), (4, 2)}
    assert cylinder_cells(TEE, "", 1) == set(TEE.cells)
    c = cylinder_cells(SALTIRE, "55", 3, SALTIRE_ORDER)
    assert len(c) == 5 and all(12 <= x < 15 and 12 <= y < 15 for x, y in c)
    with pytest.raises(ValueError):
        cylinder_cells(TEE, "6", 2)


def test_corners():
    assert all(corner_membership(SALTIRE))
    c = corner_membership(TEE)
    assert c.bottom_left and c.bottom_right and not c.top_left and not c.top_right
    assert not any(corner_membership(DigitSet.of(3, [(1, 1)])))
