"""Carry recovery for the redundant triple before a k-bit right shift.

When the low k bits of three terms sum to 0 mod 2^k, that sum is 0, 2^k
or 2^(k+1).  The carry into bit k is therefore 0, 1 or 2, and it is
recovered from the top two bits of each low window alone: C_l and C_m are
both unit-weight carries (carry = C_l + C_m), so they are reinjected as two
single-bit terms at weight 1 after the shift.
"""

from __future__ import annotations

from contextlib import contextmanager

from ..errors import InvariantError

PAPER_INIT_CL = 0xFFFFFFFFFFFFFFFE
PAPER_INIT_CM = 0xFFFEFE80FE808000

# LUT index of a forced C_m flip; only set through inject_carry_fault
_fault_index: int | None = None


def _cm_case(n_m: int, n_l: int) -> int:
    if n_m == 3:
        return 1
    if n_m == 2:
        return 1 if n_l >= 1 else 0
    if n_m == 1:
        return 1 if n_l == 3 else 0
    return 0


def lut_index(top: tuple[int, int, int], second: tuple[int, int, int]) -> int:
    """Pack (z0,z1,z2)[k-1] into bits 5..3 and (z0,z1,z2)[k-2] into bits 2..0."""
    return (top[0] << 5) | (top[1] << 4) | (top[2] << 3) | (second[0] << 2) | (second[1] << 1) | second[2]


def carry_logic(index: int) -> tuple[int, int]:
    """C_l and C_m for one 6-bit LUT input."""
    top = (index >> 3) & 7
    second = index & 7
    c_l = 1 if index else 0
    c_m = _cm_case(bin(top).count("1"), bin(second).count("1"))
    if _fault_index is not None and index == _fault_index:
        c_m ^= 1
    return c_l, c_m


def carry_bits(z0_low: int, z1_low: int, z2_low: int, k: int) -> tuple[int, int]:
    if k < 2:
        raise InvariantError("carry recovery needs k >= 2")
    mask = (1 << k) - 1
    if (z0_low + z1_low + z2_low) & mask:
        raise InvariantError("low window of the triple is not 0 mod 2^k")
    hi, lo = k - 1, k - 2
    idx = lut_index(
        ((z0_low >> hi) & 1, (z1_low >> hi) & 1, (z2_low >> hi) & 1),
        ((z0_low >> lo) & 1, (z1_low >> lo) & 1, (z2_low >> lo) & 1),
    )
    return carry_logic(idx)


def carry_lut_inits() -> tuple[int, int]:
    init_cl = init_cm = 0
    for idx in range(64):
        c_l, c_m = carry_logic(idx)
        init_cl |= c_l << idx
        init_cm |= c_m << idx
    return init_cl, init_cm


@contextmanager
def inject_carry_fault(index: int):
    """Flip C_m at one LUT index for the duration of the block (test hook)."""
    global _fault_index
    prev = _fault_index
    _fault_index = index
    try:
        yield
    finally:
        _fault_index = prev
