"""Published boundary flux matrices for p = 2 and p = 3.

Each matrix is listed row by row over its offsets in increasing order,
with entries written as "num/den" or integers. Keys are (p, index) where
index 0 is the interior flux, positive indices the right boundary family
and negative indices the left one.
"""

from fractions import Fraction

_RAW: dict[tuple[int, int], tuple[int, list[str]]] = {
    # (p, index): (lowest offset, rows)
    (2, -2): (0, [
        "0 11/24 -1/12 0 0",
        "11/24 0 5/12 -5/12 1/8",
        "-1/12 5/12 0 0 0",
        "0 -5/12 0 0 0",
        "0 1/8 0 0 0",
    ]),
    (2, -1): (-1, [
        "0 0 -1/12 0 0",
        "0 0 2/3 -1/12 0",
        "-1/12 2/3 0 0 0",
        "0 -1/12 0 0 0",
        "0 0 0 0 0",
    ]),
    (2, 0): (-1, [
        "0 0 -1/12 0",
        "0 0 2/3 -1/12",
        "-1/12 2/3 0 0",
        "0 -1/12 0 0",
    ]),
    (2, 1): (-2, [
        "0 0 0 0 0",
        "0 0 0 -1/12 0",
        "0 0 0 2/3 -1/12",
        "0 -1/12 2/3 0 0",
        "0 0 -1/12 0 0",
    ]),
    (2, 2): (-3, [
        "0 0 0 1/8 0",
        "0 0 0 -5/12 0",
        "0 0 0 5/12 -1/12",
        "1/8 -5/12 5/12 0 11/24",
        "0 0 -1/12 11/24 0",
    ]),
    (3, -3): (0, [
        "0 137/360 -13/180 1/60 0 0 0",
        "137/360 0 161/120 -497/180 287/120 -31/30 13/72",
        "-13/180 161/120 0 7/36 -7/30 7/60 -1/45",
        "1/60 -497/180 7/36 0 0 0 0",
        "0 287/120 -7/30 0 0 0 0",
        "0 -31/30 7/60 0 0 0 0",
        "0 13/72 -1/45 0 0 0 0",
    ]),
    (3, -2): (-1, [
        "0 0 -13/180 1/60 0 0 0",
        "0 0 19/30 -3/20 1/60 0 0",
        "-13/180 19/30 0 7/36 -7/30 7/60 -1/45",
        "1/60 -3/20 7/36 0 0 0 0",
        "0 1/60 -7/30 0 0 0 0",
        "0 0 7/60 0 0 0 0",
        "0 0 -1/45 0 0 0 0",
    ]),
    (3, -1): (-2, [
        "0 0 0 1/60 0 0 0",
        "0 0 0 -3/20 1/60 0 0",
        "0 0 0 3/4 -3/20 1/60 0",
        "1/60 -3/20 3/4 0 0 0 0",
        "0 1/60 -3/20 0 0 0 0",
        "0 0 1/60 0 0 0 0",
        "0 0 0 0 0 0 0",
    ]),
    (3, 0): (-2, [
        "0 0 0 1/60 0 0",
        "0 0 0 -3/20 1/60 0",
        "0 0 0 3/4 -3/20 1/60",
        "1/60 -3/20 3/4 0 0 0",
        "0 1/60 -3/20 0 0 0",
        "0 0 1/60 0 0 0",
    ]),
    (3, 1): (-3, [
        "0 0 0 0 0 0 0",
        "0 0 0 0 1/60 0 0",
        "0 0 0 0 -3/20 1/60 0",
        "0 0 0 0 3/4 -3/20 1/60",
        "0 1/60 -3/20 3/4 0 0 0",
        "0 0 1/60 -3/20 0 0 0",
        "0 0 0 1/60 0 0 0",
    ]),
    (3, 2): (-4, [
        "0 0 0 0 -1/45 0 0",
        "0 0 0 0 7/60 0 0",
        "0 0 0 0 -7/30 1/60 0",
        "0 0 0 0 7/36 -3/20 1/60",
        "-1/45 7/60 -7/30 7/36 0 19/30 -13/180",
        "0 0 1/60 -3/20 19/30 0 0",
        "0 0 0 1/60 -13/180 0 0",
    ]),
    (3, 3): (-5, [
        "0 0 0 0 -1/45 13/72 0",
        "0 0 0 0 7/60 -31/30 0",
        "0 0 0 0 -7/30 287/120 0",
        "0 0 0 0 7/36 -497/180 1/60",
        "-1/45 7/60 -7/30 7/36 0 161/120 -13/180",
        "13/72 -31/30 287/120 -497/180 161/120 0 137/360",
        "0 0 0 1/60 -13/180 137/360 0",
    ]),
}


def published_matrix(p: int, index: int) -> tuple[int, tuple[tuple[Fraction, ...], ...]]:
    """Lowest offset and exact entries of a published matrix.

    Raises:
        KeyError: If no matrix was published for (p, index).
    """
    lowest, rows = _RAW[(p, index)]
    return lowest, tuple(tuple(Fraction(token) for token in row.split()) for row in rows)


def published_keys() -> list[tuple[int, int]]:
    """All (p, index) pairs with a published matrix."""
    return sorted(_RAW)
