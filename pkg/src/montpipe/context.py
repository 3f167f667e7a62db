"""Parameter bundle and digit helpers shared by every multiplier."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError

MAX_K = 64
MAX_KT = 4096


def inverse_mod_pow2(x: int, bits: int) -> int:
    """Inverse of odd ``x`` modulo ``2**bits`` by extended Euclid."""
    if bits < 1:
        raise ParameterError("modulus width must be positive")
    mod = 1 << bits
    old_r, r = x % mod, mod
    old_s, s = 1, 0
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
    if old_r != 1:
        raise ParameterError(f"{x} is not invertible modulo 2**{bits}")
    return old_s % mod


def neg_inverse_mod_pow2(x: int, bits: int) -> int:
    return (-inverse_mod_pow2(x, bits)) % (1 << bits)


@dataclass(frozen=True)
class MontgomeryContext:
    M: int
    N_M: int
    k: int
    t: int
    r: int
    d: int
    M_prime_digit: int  # -M^-1 mod 2^k
    M_prime_wide: int  # -M^-1 mod 2^(k*t)
    M_prime_full: int  # -M^-1 mod 2^N_M

    @property
    def mask_k(self) -> int:
        return self.r - 1

    @property
    def kt(self) -> int:
        return self.k * self.t

    @property
    def R(self) -> int:
        """Montgomery radix r^d."""
        return 1 << (self.k * self.d)


def make_context(M: int, k: int, t: int = 1) -> MontgomeryContext:
    if M < 3 or M % 2 == 0:
        raise ParameterError(f"modulus must be odd and >= 3, got {M}")
    if k < 2 or k > MAX_K:
        raise ParameterError(f"radix exponent k must be in [2, {MAX_K}], got {k}")
    if t < 1:
        raise ParameterError(f"stage count t must be >= 1, got {t}")
    if k * t > MAX_KT:
        raise ParameterError(f"k*t must not exceed {MAX_KT}, got {k * t}")
    n = M.bit_length()
    return MontgomeryContext(
        M=M,
        N_M=n,
        k=k,
        t=t,
        r=1 << k,
        d=-(-n // k),
        M_prime_digit=neg_inverse_mod_pow2(M, k),
        M_prime_wide=neg_inverse_mod_pow2(M, k * t),
        M_prime_full=neg_inverse_mod_pow2(M, n),
    )


def to_digits(x: int, ctx: MontgomeryContext) -> list[int]:
    """Little-endian base-2^k digits of ``x``, padded with t+1 zero digits."""
    if x < 0 or x >> (ctx.k * ctx.d):
        raise ParameterError(f"value does not fit in {ctx.d} digits of {ctx.k} bits")
    digits = [(x >> (ctx.k * i)) & ctx.mask_k for i in range(ctx.d)]
    return digits + [0] * (ctx.t + 1)


def from_digits(digits, k: int) -> int:
    return sum(dig << (k * i) for i, dig in enumerate(digits))
