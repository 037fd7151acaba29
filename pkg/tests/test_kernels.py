import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fracsq import _kernels

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")
masks = arrays(np.bool_, st.tuples(st.integers(1, 12), st.integers(1, 12)))
offset_sets = st.sampled_from([_kernels.FOUR, _kernels.EIGHT, ((1, 1), (-1, -1)), ((2, 0), (-2, 0), (0, 1), (0, -1))])


@needs_numba
@settings(max_examples=200, deadline=None)
@given(masks, offset_sets, st.data())
def test_backends_agree(mask, offsets, data):
    offs = _kernels._as_offsets(offsets)
    src = np.array(data.draw(st.lists(st.integers(0, mask.size - 1), max_size=4)), dtype=np.int64)
    mask = np.ascontiguousarray(mask)
    assert np.array_equal(
        _kernels.bfs_distances_numba(mask, src, offs), _kernels.bfs_distances_numpy(mask, src, offs)
    )
    la, ca = _kernels.label_components_numba(mask, offs)
    lb, cb = _kernels.label_components_numpy(mask, offs)
    assert ca == cb and np.array_equal(la, lb)


@settings(max_examples=100, deadline=None)
@given(masks)
def test_label_matches_scipy_ndimage(mask):
    from scipy import ndimage

    _, count = _kernels.label_components(mask, _kernels.FOUR)
    assert count == ndimage.label(mask)[1]
    _, count8 = _kernels.label_components(mask, _kernels.EIGHT)
    assert count8 == ndimage.label(mask, structure=np.ones((3, 3)))[1]


def test_bfs_line():
    mask = np.ones((1, 5), dtype=bool)
    dist = _kernels.bfs_distances(mask, [0], _kernels.FOUR)
    assert dist.tolist() == [[0, 1, 2, 3, 4]]
    mask[0, 2] = False
    dist = _kernels.bfs_distances(mask, [0], _kernels.FOUR)
    assert dist.tolist() == [[0, 1, -1, -1, -1]]


def test_env_flag_selects_fallback():
    env = dict(os.environ, FRACSQ_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", "import fracsq; print(fracsq.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_fallback_end_to_end():
    env = dict(os.environ, FRACSQ_NUMBA="0")
    code = (
        "from fracsq.catalogue import ELL, TEE;"
        "from fracsq.topology import first_cycle_level, full_edge_tree;"
        "from fracsq.paths import classify_type;"
        "assert first_cycle_level(ELL) == 2 and full_edge_tree(TEE, 4);"
        "print(classify_type(TEE, 4).label)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "II"
