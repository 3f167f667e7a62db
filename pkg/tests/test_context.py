import pytest
from hypothesis import given, strategies as st

from montpipe import ParameterError, from_digits, make_context, to_digits
from montpipe.context import inverse_mod_pow2


def brute_neg_inverse(M, bits):
    mod = 1 << bits
    return next(x for x in range(mod) if (M * x + 1) % mod == 0)


def test_small_context_fields():
    ctx = make_context(13, 2, 2)
    assert (ctx.d, ctx.r, ctx.N_M) == (2, 4, 4)
    assert ctx.M_prime_digit == brute_neg_inverse(13, 2) == 3
    assert ctx.M_prime_wide == brute_neg_inverse(13, 4) == 11
    assert ctx.M_prime_full == brute_neg_inverse(13, 4)


@pytest.mark.parametrize("M,k,t", [(12, 2, 2), (1, 2, 1), (-5, 2, 1), (13, 1, 1), (13, 2, 0), (13, 65, 1), (13, 64, 65)])
def test_rejected_parameters(M, k, t):
    with pytest.raises(ParameterError):
        make_context(M, k, t)


@given(st.integers(1, 2**300).map(lambda x: 2 * x + 1), st.integers(2, 20), st.integers(1, 8))
def test_inverse_relations(M, k, t):
    ctx = make_context(M, k, t)
    for prime, bits in ((ctx.M_prime_digit, k), (ctx.M_prime_wide, k * t), (ctx.M_prime_full, ctx.N_M)):
        assert (M * prime + 1) % (1 << bits) == 0
        assert 0 <= prime < 1 << bits
    assert ctx.d * k >= ctx.N_M > (ctx.d - 1) * k


def test_inverse_small_exhaustive():
    for bits in range(1, 9):
        for x in range(1, 1 << bits, 2):
            assert x * inverse_mod_pow2(x, bits) % (1 << bits) == 1


def test_to_digits_examples():
    ctx = make_context(0b100001, 2, 1)  # N_M = 6, d = 3
    assert ctx.d == 3
    digits = to_digits(0b110110, ctx)
    assert digits[:3] == [2, 1, 3]
    assert digits[3:] == [0, 0]
    assert to_digits(0, ctx) == [0] * 5
    with pytest.raises(ParameterError):
        to_digits(1 << (ctx.k * ctx.d), ctx)


@given(st.integers(3, 2**200).map(lambda x: x | 1), st.integers(2, 16), st.integers(1, 6), st.data())
def test_digit_round_trip(M, k, t, data):
    ctx = make_context(M, k, t)
    x = data.draw(st.integers(0, (1 << (k * ctx.d)) - 1))
    digits = to_digits(x, ctx)
    assert len(digits) == ctx.d + t + 1
    assert all(0 <= dig < ctx.r for dig in digits)
    assert from_digits(digits, k) == x
