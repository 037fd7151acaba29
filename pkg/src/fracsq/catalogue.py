"""Reference label matrices for n = 3.

``SQUARES_3_5[i]`` (1-based, index 0 unused) are the 21 congruence classes of
five-digit squares in the customary numbering: 1-5 totally disconnected,
6-11 connected, 12-21 containing parallel segments.  ``NON_TD_3_4`` are the six
four-digit squares that are not totally disconnected, in the same style.
"""
from .grid import Cell, parse_label_matrix

_SQUARES_3_5 = [
    "010,101,101",
    "100,011,110",
    "110,001,101",
    "110,001,011",
    "110,101,010",
    "010,010,111",
    "100,100,111",
    "001,010,111",
    "101,010,101",
    "010,111,010",
    "011,010,110",
    "101,000,111",
    "000,101,111",
    "000,110,111",
    "110,000,111",
    "001,011,110",
    "010,001,111",
    "100,001,111",
    "001,110,110",
    "010,011,110",
    "101,010,110",
]

SQUARES_3_5 = [None] + [parse_label_matrix(r) for r in _SQUARES_3_5]

EXPECTED_TYPES_3_5 = {i: "I" for i in range(1, 6)}
EXPECTED_TYPES_3_5.update({i: "II" for i in range(6, 12)})
EXPECTED_TYPES_3_5.update({i: "III" for i in range(12, 22)})

# Lipschitz grouping of the 21 classes, as proved equivalent (an upper bound).
EXPECTED_GROUPS_3_5 = [
    (1, 2, 3, 4, 5), (6,), (7, 8), (9, 10, 11), (12, 13),
    (14, 15, 16), (17,), (18,), (19, 20), (21,),
]

NON_TD_3_4 = [None] + [
    parse_label_matrix(r)
    for r in ["100,000,111", "010,000,111", "000,100,111", "000,010,111", "001,011,100", "001,010,101"]
]

TEE = SQUARES_3_5[6]
ELL = SQUARES_3_5[7]
SALTIRE = SQUARES_3_5[9]

# Symbol roles: on the tee, 2 is the bottom-middle cell, 4 the centre and 5
# the top; on the saltire, 1-4 are the corners and 5 the centre.
TEE_ORDER = (Cell(0, 0), Cell(1, 0), Cell(2, 0), Cell(1, 1), Cell(1, 2))
SALTIRE_ORDER = (Cell(0, 0), Cell(2, 0), Cell(0, 2), Cell(2, 2), Cell(1, 1))
