"""Precomputed window tables (iM, iM', merged) and their LUT INIT view."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from ..context import neg_inverse_mod_pow2
from ..errors import ParameterError

KINDS = ("iM", "iMprime", "merged")
MIN_WINDOW, MAX_WINDOW = 4, 6


@dataclass(frozen=True)
class EncodingTable:
    w: int
    kind: str
    entries: tuple[int, ...]
    modulus_bits: int | None = None  # entries are reduced mod 2**modulus_bits

    def lookup(self, i: int) -> int:
        return self.entries[i]


def build_encoding_table(base: int, w: int, kind: str = "iM", *,
                         modulus_bits: int | None = None, k: int | None = None) -> EncodingTable:
    """Table of 2**w entries for window values 0 .. 2**w - 1.

    iM:      entry[i] = i*base                      (base = M)
    iMprime: entry[i] = i*base mod 2**modulus_bits  (base = M')
    merged:  entry[i] = (i*M'_w mod 2**w) * base    (base = M, M'_w = -M^-1 mod 2**w)

    The merged kind folds the quotient lookup into the multiple-of-M lookup
    and is only built for k = w = 4.
    """
    if not MIN_WINDOW <= w <= MAX_WINDOW:
        raise ParameterError(f"window width must be in [{MIN_WINDOW}, {MAX_WINDOW}], got {w}")
    if kind not in KINDS:
        raise ParameterError(f"unknown table kind {kind!r}")
    n = 1 << w
    if kind == "iM":
        entries = tuple(i * base for i in range(n))
    elif kind == "iMprime":
        if modulus_bits is None:
            raise ParameterError("iMprime tables need modulus_bits")
        mask = (1 << modulus_bits) - 1
        entries = tuple((i * base) & mask for i in range(n))
    else:
        if not (k == w == 4):
            raise ParameterError("merged tables are only built for k = w = 4")
        if base % 2 == 0:
            raise ParameterError("merged tables need an odd modulus")
        mp = neg_inverse_mod_pow2(base, w)
        entries = tuple(((i * mp) % n) * base for i in range(n))
    return EncodingTable(w, kind, entries, modulus_bits if kind == "iMprime" else None)


@dataclass(frozen=True)
class LutInitMatrix:
    w: int
    rows: tuple[int, ...]  # rows[b] bit i == bit b of entry[i]

    def reconstruct(self) -> list[int]:
        return [sum(((row >> i) & 1) << b for b, row in enumerate(self.rows)) for i in range(1 << self.w)]

    def hex_rows(self) -> list[str]:
        """INIT words MSB first, index 0 in the least significant bit."""
        digits = (1 << self.w) // 4
        return [f"{row:0{digits}x}" for row in self.rows]


def lut_init_matrix(table: EncodingTable, out_bits: int | None = None) -> LutInitMatrix:
    if out_bits is None:
        out_bits = max(e.bit_length() for e in table.entries)
    rows = []
    for b in range(out_bits):
        row = 0
        for i, e in enumerate(table.entries):
            row |= ((e >> b) & 1) << i
        rows.append(row)
    return LutInitMatrix(table.w, tuple(rows))


class PartialProduct(NamedTuple):
    entry: int
    shift: int

    @property
    def value(self) -> int:
        return self.entry << self.shift


def encode_windows(value_terms, width_bits: int, table: EncodingTable) -> list[PartialProduct]:
    """Slice each term's low ``width_bits`` into w-bit windows and look them up.

    Produces len(value_terms) * ceil(width_bits / w) partial products.  For an
    iMprime table the entries at nonzero offsets are truncated to the table
    modulus, which leaves the sum unchanged mod 2**modulus_bits.
    """
    w = table.w
    wmask = (1 << w) - 1
    windows = -(-width_bits // w)
    limit = None if table.modulus_bits is None else (1 << table.modulus_bits) - 1
    pps = []
    for term in value_terms:
        term &= (1 << width_bits) - 1
        for j in range(windows):
            entry = table.entries[(term >> (j * w)) & wmask]
            if limit is not None:
                # keep only the bits that land below the modulus
                entry &= limit >> (j * w)
            pps.append(PartialProduct(entry, j * w))
    return pps
