import pytest

from montpipe import InvariantError
from montpipe.hw import PAPER_INIT_CL, PAPER_INIT_CM, carry_bits, carry_lut_inits, inject_carry_fault
from montpipe.hw.carry import carry_logic, lut_index


def test_examples():
    assert carry_bits(0, 0, 0, 4) == (0, 0)
    assert carry_bits(0x8, 0x8, 0x0, 4) == (1, 0)
    assert carry_bits(0xC, 0xC, 0x8, 4) == (1, 1)


@pytest.mark.parametrize("k", range(2, 9))
def test_exhaustive_unary_carry(k):
    mod = 1 << k
    for z0 in range(mod):
        for z1 in range(mod):
            z2 = (-z0 - z1) % mod
            total = z0 + z1 + z2
            carry = total >> k
            assert carry <= 2
            c_l, c_m = carry_bits(z0, z1, z2, k)
            assert c_l + c_m == carry


def test_precondition_guard():
    with pytest.raises(InvariantError):
        carry_bits(1, 0, 0, 4)
    with pytest.raises(InvariantError):
        carry_bits(0, 0, 0, 1)


def test_init_words():
    init_cl, init_cm = carry_lut_inits()
    assert init_cl == PAPER_INIT_CL == 0xFFFFFFFFFFFFFFFE
    assert init_cm == PAPER_INIT_CM == 0xFFFEFE80FE808000
    assert init_cl & 1 == 0 and init_cm & 1 == 0


def test_case_table():
    # n_m = 2, n_l = 0 gives one carry; n_m = 3 always sets C_m
    assert carry_logic(lut_index((1, 1, 0), (0, 0, 0))) == (1, 0)
    assert carry_logic(lut_index((1, 1, 1), (0, 0, 0))) == (1, 1)
    assert carry_logic(lut_index((1, 0, 0), (1, 1, 1))) == (1, 1)
    assert carry_logic(lut_index((1, 0, 0), (1, 1, 0))) == (1, 0)


def test_fault_hook_is_scoped():
    idx = lut_index((1, 1, 0), (0, 0, 0))
    with inject_carry_fault(idx):
        assert carry_logic(idx) == (1, 1)
        assert carry_lut_inits()[1] != PAPER_INIT_CM
    assert carry_logic(idx) == (1, 0)
