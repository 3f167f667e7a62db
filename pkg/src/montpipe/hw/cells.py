"""Counter cells and the row-parallel compressor tree built from them.

Cells operate bitwise, so the same function serves a single column (bits as
0/1) and a whole row of columns at once (bits packed into Python ints).
"""

from __future__ import annotations

from itertools import combinations

from ..errors import InvariantError, ParameterError

_PAIRS = tuple(combinations(range(6), 2))
_QUADS = tuple(combinations(range(6), 4))


def compress_6to3(a0, a1, a2, a3, a4, a5):
    """(6,3) counter as three six-input functions, one LUT6 each.

    O0 is the parity of the inputs, O1 the parity of all pairwise products,
    O2 is set when any four inputs are all ones.
    """
    a = (a0, a1, a2, a3, a4, a5)
    o0 = a0 ^ a1 ^ a2 ^ a3 ^ a4 ^ a5
    o1 = 0
    for i, j in _PAIRS:
        o1 ^= a[i] & a[j]
    o2 = 0
    for i, j, m, n in _QUADS:
        o2 |= a[i] & a[j] & a[m] & a[n]
    return o0, o1, o2


def csa_3to2(x, y, z):
    s = x ^ y ^ z
    c = (x & y) | (y & z) | (x & z)
    return s, c


def compress_layer(rows: list[int]) -> list[int]:
    """One level of 6-to-3 counters applied to consecutive groups of rows."""
    out = []
    for g in range(0, len(rows), 6):
        group = rows[g:g + 6]
        if len(group) <= 2:
            out.extend(group)
            continue
        o0, o1, o2 = compress_6to3(*group, *([0] * (6 - len(group))))
        out.append(o0)
        out.append(o1 << 1)
        if len(group) >= 4:
            out.append(o2 << 2)
    return out


def layer_count(n: int, target: int = 3) -> int:
    """Levels needed to bring ``n`` rows down to ``target`` rows."""
    levels = 0
    while n > target:
        full, rest = divmod(n, 6)
        n = 3 * full + (3 if rest >= 4 else 2 if rest == 3 else rest)
        levels += 1
    return levels


def compress_terms(terms, target: int = 3, *, width: int | None = None,
                   modulo_bits: int | None = None) -> tuple[list[int], int]:
    """Reduce ``terms`` to at most ``target`` rows with an exact sum.

    ``width`` bounds every row; a wider row raises InvariantError.  With
    ``modulo_bits`` every row is truncated to that many bits after each level,
    which preserves the sum modulo 2**modulo_bits only.
    """
    if target not in (2, 3):
        raise ParameterError("target row count must be 2 or 3")
    rows = list(terms)
    if not rows:
        raise ParameterError("nothing to compress")
    mask = (1 << modulo_bits) - 1 if modulo_bits is not None else None
    levels = 0
    while len(rows) > target:
        rows = compress_layer(rows)
        if mask is not None:
            rows = [r & mask for r in rows]
        levels += 1
        if width is not None:
            for r in rows:
                if r >> width:
                    raise InvariantError(f"compressed row exceeds {width} bits")
    return rows, levels
