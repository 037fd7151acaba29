import numpy as np
import pytest

from fracsq.catalogue import ELL, SALTIRE, SQUARES_3_5, TEE
from fracsq.congruence import (
    CanonicalKey,
    burnside_count_dihedral,
    canonical_form,
    class_sizes,
    congruent,
    d4_images,
    enumerate_classes,
    total_digitsets,
)
from fracsq.grid import DigitSet
from fracsq.paths import construct_td_digitset
from oracles import count_congruence_classes, count_dihedral_orbits


def test_mirror_of_ell():
    images = dict(zip(("identity", "rot90", "rot180", "rot270", "mirror-x"), d4_images(ELL)))
    assert set(images["mirror-x"].cells) == {(2, 0), (1, 0), (0, 0), (2, 1), (2, 2)}
    assert images["identity"] == ELL


def test_saltire_fully_symmetric():
    assert all(img == SALTIRE for img in d4_images(SALTIRE))


def test_canonical_examples():
    assert canonical_form(ELL) == canonical_form(d4_images(ELL)[4])
    assert canonical_form(construct_td_digitset(3)) == canonical_form(SQUARES_3_5[5])
    key = canonical_form(TEE)
    assert canonical_form(key.digitset()) == key


def test_hex_roundtrip():
    for i in range(1, 22):
        key = canonical_form(SQUARES_3_5[i])
        assert CanonicalKey.from_hex(key.hex) == key


def test_catalogue_pairwise_distinct():
    keys = {canonical_form(SQUARES_3_5[i]) for i in range(1, 22)}
    assert len(keys) == 21
    assert keys == {canonical_form(d) for d in enumerate_classes(3, 5)}


def _translate(d, dx, dy):
    return DigitSet.of(d.n, ((x + dx, y + dy) for x, y in d.cells))


def test_invariance_under_symmetry_and_translation(family_3_5):
    for d in family_3_5:
        key = canonical_form(d)
        for img in d4_images(d):
            assert canonical_form(img) == key
            xs = [c.x for c in img.cells]
            ys = [c.y for c in img.cells]
            for dx in range(-min(xs), 3 - max(xs)):
                for dy in range(-min(ys), 3 - max(ys)):
                    assert canonical_form(_translate(img, dx, dy)) == key


def test_congruent_is_not_lipschitz():
    assert not congruent(SQUARES_3_5[7], SQUARES_3_5[8])
    assert congruent(ELL, d4_images(ELL)[6])


@pytest.mark.parametrize("m,expected", [(1, 1), (5, 21), (6, 16), (7, 8), (8, 3)])
def test_class_counts(m, expected):
    assert len(enumerate_classes(3, m)) == expected


@pytest.mark.parametrize("m", range(1, 9))
def test_class_counts_match_oracle(m):
    assert len(enumerate_classes(3, m)) == count_congruence_classes(3, m)
    assert burnside_count_dihedral(3, m) == count_dihedral_orbits(3, m)


def test_burnside_values():
    assert burnside_count_dihedral(3, 5) == 23
    assert burnside_count_dihedral(3, 8) == 3
    assert burnside_count_dihedral(3, 1) == 3


def test_class_sizes_sum():
    for m in range(1, 9):
        assert sum(class_sizes(3, m).values()) == total_digitsets(3, m)


def test_n4_matches_oracle():
    for m in (2, 3, 13, 14):
        assert len(enumerate_classes(4, m)) == count_congruence_classes(4, m)


def test_bad_m():
    with pytest.raises(ValueError):
        enumerate_classes(3, 9)


def test_representatives_are_keys():
    for d in enumerate_classes(3, 4):
        assert canonical_form(d).digitset() == d
        assert np.array(d.cells).min(axis=0).tolist() != [1, 1]
