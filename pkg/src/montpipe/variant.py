"""Different-radix Montgomery multiplication with a t-iteration quotient pipeline.

The partial product a_i*B enters t digit positions early (shifted by k*t),
so the quotient digit consumed at iteration i can be derived from the
accumulator as it stood t iterations before, Z_(i-t).  The digit is the
most significant k-bit digit of the radix-2^(k*t) quotient of that
accumulator:

    q_hat(Z) = ((Z mod 2^(kt)) * M' mod 2^(kt)) >> k(t-1),  M' = -M^-1 mod 2^(kt)

and the loop runs d+t iterations; the first t consume zero quotients.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .classical import MmmResult, QuotientTrace, _check_operands, final_reduce
from .context import MontgomeryContext, to_digits
from .errors import InvariantError


@dataclass(frozen=True)
class DrmmmStep:
    i: int
    z: int  # Z_(i), after the shift
    q_hat: int  # quotient digit consumed in this iteration
    a: int


@dataclass(frozen=True)
class DrmmmTrace:
    steps: tuple[DrmmmStep, ...]

    @property
    def iterations(self) -> int:
        return len(self.steps)

    def consumed_quotients(self) -> list[int]:
        return [s.q_hat for s in self.steps]


def q_hat(ctx: MontgomeryContext, Z_prev: int) -> int:
    mask = (1 << ctx.kt) - 1
    return (((Z_prev & mask) * ctx.M_prime_wide) & mask) >> (ctx.k * (ctx.t - 1))


def iteration_count(ctx: MontgomeryContext) -> int:
    return ctx.d + ctx.t


def drmmm_mul(ctx: MontgomeryContext, A: int, B: int,
              *, M_prime_wide: int | None = None) -> tuple[MmmResult, DrmmmTrace]:
    """Run the pipelined-quotient recurrence.

    ``M_prime_wide`` overrides the context constant; it exists so tests can
    corrupt the inverse and watch the shift check fire.
    """
    _check_operands(ctx, A, B)
    if M_prime_wide is not None:
        ctx = replace(ctx, M_prime_wide=M_prime_wide)
    digits = to_digits(A, ctx)
    k, t = ctx.k, ctx.t
    mask = ctx.mask_k
    B_shifted = B << ctx.kt
    # zs[j + 1] holds Z_(j); zs[0] is Z_(-1) = 0
    zs = [0]
    steps = []
    launched = []
    for i in range(iteration_count(ctx)):
        src = i - t
        q = q_hat(ctx, zs[src + 1]) if src >= -1 else 0
        a = digits[i] if i < ctx.d else 0
        acc = zs[-1] + a * B_shifted + q * ctx.M
        if acc & mask:
            raise InvariantError("low digit not zero before shift", i)
        z = acc >> k
        zs.append(z)
        steps.append(DrmmmStep(i, z, q, a))
        if i >= t:
            launched.append(q)
    Z = zs[-1]
    result = MmmResult(
        output=final_reduce(Z, ctx.M),
        pre_reduction=Z,
        quotients=QuotientTrace(tuple(launched), k),
        history=tuple(zs[1:]),
    )
    return result, DrmmmTrace(tuple(steps))
