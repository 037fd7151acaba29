"""Regenerate the PBM goldens from the slow digit-expansion oracle.

    python3 tests/goldens/make_goldens.py
"""
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

from oracles import pbm_by_hand  # noqa: E402

# name -> (label matrix, level)
GOLDENS = {
    "tee_k1": ("010,010,111", 1),
    "tee_k2": ("010,010,111", 2),
    "ell_k3": ("100,100,111", 3),
    "saltire_k3": ("101,010,101", 3),
    "sq1_k3": ("010,101,101", 3),
    "sq12_k2": ("101,000,111", 2),
    "td4_k2": ("0111,1011,1001,0110", 2),
}


def cells_of(rows):
    rows = rows.split(",")
    n = len(rows)
    return [(j, n - 1 - i) for i, r in enumerate(rows) for j, ch in enumerate(r) if ch == "1"], n


def main():
    for name, (rows, k) in GOLDENS.items():
        cells, n = cells_of(rows)
        (HERE / f"{name}.pbm").write_text(pbm_by_hand(cells, n, k))


if __name__ == "__main__":
    main()
