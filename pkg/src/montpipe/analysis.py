"""Dependence-degree and abstract latency formulas, in exact rationals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .classical import classical_mmm
from .context import MontgomeryContext, to_digits
from .errors import ParameterError


@dataclass(frozen=True)
class DependenceDegree:
    value: Fraction
    i: int
    # bit-length ratio from actual operands, when they are supplied
    general: Fraction | None = None


def dependence_degree(i: int, ctx: MontgomeryContext, operands: tuple[int, int] | None = None) -> DependenceDegree:
    """Cross-iteration dependence degree of iteration ``i``.

    ``value`` is the equal-width closed form i/(i+1).  With ``operands=(A, B)``
    the general ratio |(sum_{j<i} q_j r^j) M| / |(sum_{j<=i} a_j r^j) B| is
    evaluated on the real quotient sequence; it is None when the denominator
    has zero width.
    """
    if not 0 <= i <= ctx.d - 1:
        raise ParameterError(f"iteration index must be in [0, {ctx.d - 1}], got {i}")
    general = None
    if operands is not None:
        A, B = operands
        q = classical_mmm(ctx, A, B).quotients.q
        digits = to_digits(A, ctx)
        num = sum(q[j] << (ctx.k * j) for j in range(i)) * ctx.M
        den = sum(digits[j] << (ctx.k * j) for j in range(i + 1)) * B
        if den:
            general = Fraction(num.bit_length(), den.bit_length())
    return DependenceDegree(Fraction(i, i + 1), i, general)


def dependence_bound(N_M: int, k: int) -> Fraction:
    if k < 1 or N_M < 1:
        raise ParameterError("N_M and k must be positive")
    d = -(-N_M // k)
    return 1 - Fraction(1, d)


@dataclass(frozen=True)
class LatencyParams:
    T_m: Fraction = Fraction(0)
    T_a: Fraction = Fraction(0)
    T_red: Fraction = Fraction(0)
    T_u: Fraction = Fraction(0)
    T_q: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("T_m", "T_a", "T_red", "T_u", "T_q"):
            v = Fraction(getattr(self, name))
            if v < 0:
                raise ParameterError(f"{name} must be non-negative")
            object.__setattr__(self, name, v)


def serial_iteration_delay(p: LatencyParams) -> Fraction:
    return 3 * p.T_m + 2 * p.T_a


def proposed_iteration_delay(p: LatencyParams) -> Fraction:
    return p.T_m + 2 * p.T_a


def latency_serial(p: LatencyParams, d: int) -> Fraction:
    if d < 1:
        raise ParameterError("d must be >= 1")
    return d * serial_iteration_delay(p) + p.T_red


def latency_proposed(p: LatencyParams, d: int, t: int) -> Fraction:
    if d < 1 or t < 1:
        raise ParameterError("d and t must be >= 1")
    return (d + t + 1) * proposed_iteration_delay(p) + p.T_red


def latency_gain(p: LatencyParams, d: int, t: int) -> Fraction:
    """2d*T_m - (t+1)(T_m + 2T_a); no range check so the expression can be probed."""
    return 2 * d * p.T_m - (t + 1) * (p.T_m + 2 * p.T_a)


def estimate_t_max(p: LatencyParams) -> int:
    """Smallest t >= 1 with T_q <= (t-1)*T_u."""
    if p.T_u == 0:
        raise ParameterError("T_u must be positive")
    return math.ceil(p.T_q / p.T_u) + 1
