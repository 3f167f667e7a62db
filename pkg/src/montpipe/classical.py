"""Classical radix-2^k Montgomery multiplication and plain-arithmetic oracles."""

from __future__ import annotations

from dataclasses import dataclass, field

from .context import MontgomeryContext, make_context, to_digits
from .errors import InvariantError, ParameterError


@dataclass(frozen=True)
class QuotientTrace:
    q: tuple[int, ...]
    k: int

    def weighted_sum(self) -> int:
        """Sum of q_j * 2^(k*j)."""
        return sum(qj << (self.k * j) for j, qj in enumerate(self.q))


@dataclass(frozen=True)
class MmmResult:
    output: int
    pre_reduction: int
    quotients: QuotientTrace
    # per-iteration Z values after the shift, kept for tracing
    history: tuple[int, ...] = field(default=(), repr=False, compare=False)


def modmul_oracle(A: int, B: int, M: int) -> int:
    if M < 1:
        raise ParameterError("modulus must be positive")
    return (A * B) % M


def montgomery_expected(ctx: MontgomeryContext, A: int, B: int) -> int:
    """A*B*r^-d mod M through a modular inverse, independent of any MMM loop."""
    return (A * B * pow(ctx.R, -1, ctx.M)) % ctx.M


def final_reduce(Z: int, M: int) -> int:
    if Z >= 2 * M:
        raise InvariantError(f"pre-reduction value {Z:#x} is not below 2M")
    return Z - M if Z >= M else Z


def _check_operands(ctx: MontgomeryContext, A: int, B: int) -> None:
    if not (0 <= A < ctx.M and 0 <= B < ctx.M):
        raise ParameterError("operands must satisfy 0 <= A, B < M")


def classical_mmm(ctx: MontgomeryContext, A: int, B: int) -> MmmResult:
    _check_operands(ctx, A, B)
    digits = to_digits(A, ctx)
    mask = ctx.mask_k
    Z = 0
    qs = []
    history = []
    for i in range(ctx.d):
        Z += digits[i] * B
        q = ((Z & mask) * ctx.M_prime_digit) & mask
        Z += q * ctx.M
        if Z & mask:
            raise InvariantError("low digit not cleared before shift", i)
        Z >>= ctx.k
        qs.append(q)
        history.append(Z)
    return MmmResult(
        output=final_reduce(Z, ctx.M),
        pre_reduction=Z,
        quotients=QuotientTrace(tuple(qs), ctx.k),
        history=tuple(history),
    )


def mont_encode(ctx: MontgomeryContext, A: int) -> int:
    _check_operands(ctx, A, 0)
    return modmul_oracle(A, ctx.R, ctx.M)


def mont_decode(ctx: MontgomeryContext, A_hat: int) -> int:
    return classical_mmm(ctx, A_hat, 1).output


def mont_mul_corrected(ctx: MontgomeryContext, A: int, B: int) -> int:
    """A*B mod M as MMM(MMM(A, B), R^2 mod M)."""
    z = classical_mmm(ctx, A, B).output
    r2 = modmul_oracle(ctx.R, ctx.R, ctx.M)
    return classical_mmm(ctx, z, r2).output


def theorem1_constant(ctx: MontgomeryContext, A: int, B: int) -> int:
    """A*B*M' mod 2^N_M with M' = -M^-1 mod 2^N_M.

    Every radix produces a quotient sequence whose weighted sum reduces to
    this value modulo 2^N_M.
    """
    _check_operands(ctx, A, B)
    return (A * B * ctx.M_prime_full) % (1 << ctx.N_M)


def check_quotient_consistency(M: int, A: int, B: int, k1: int, k2: int) -> bool:
    c1 = make_context(M, k1)
    c2 = make_context(M, k2)
    mod = (1 << c1.N_M) - 1
    s1 = classical_mmm(c1, A, B).quotients.weighted_sum() & mod
    s2 = classical_mmm(c2, A, B).quotients.weighted_sum() & mod
    return s1 == s2 == theorem1_constant(c1, A, B)
