"""Bit-level golden model of the redundant-triple multiplier datapath."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..classical import MmmResult, QuotientTrace, _check_operands, final_reduce
from ..context import MontgomeryContext, to_digits
from ..errors import InvariantError, ParameterError
from .carry import carry_bits
from .cells import compress_layer, compress_terms
from .encoding import EncodingTable, build_encoding_table, encode_windows
from .pipeline import (ADD, ADD_LOW, COMPRESS, ENCODE_M, ENCODE_MERGED, ENCODE_MPRIME,
                       HwConfig, LevelReport, default_schedule, level_budget_report,
                       validate_schedule)


@dataclass(frozen=True)
class RedundantResidue:
    """Accumulator held as three full-width terms plus two pending unit carries."""

    z0: int
    z1: int
    z2: int
    c_l: int = 0
    c_m: int = 0

    def value(self) -> int:
        return self.z0 + self.z1 + self.z2 + self.c_l + self.c_m

    @property
    def terms(self) -> tuple[int, int, int]:
        return self.z0, self.z1, self.z2


@dataclass(frozen=True)
class Payload:
    """Contents of one quotient-pipeline register."""

    kind: str  # residue | terms | qhat | pps
    data: tuple[int, ...]
    q_hat: int | None = None


@dataclass(frozen=True)
class HwPlan:
    """Everything fixed for one (M, k, t, config): tables, schedule, widths."""

    ctx: MontgomeryContext
    config: HwConfig
    schedule: tuple[tuple[str, ...], ...]
    width: int
    im_table: EncodingTable | None
    mprime_table: EncodingTable | None
    merged_table: EncodingTable | None
    carry_row: tuple[int, int, int]  # c * M' mod 2^(kt) for c = 0, 1, 2


@dataclass(frozen=True)
class HwState:
    residue: RedundantResidue
    registers: tuple[Payload, ...]  # stages 1 .. t-1
    i: int = 0


@dataclass(frozen=True)
class HwStepRecord:
    i: int
    residue: RedundantResidue
    q_hat: int
    carry: tuple[int, int]
    tree_levels: int
    low_window_zero: bool = True


@dataclass
class CycleReport:
    iterations: int
    epilogue_cycles: int
    total_cycles: int
    epilogue_fitted: bool
    levels: LevelReport | None = None
    notes: list[str] = field(default_factory=list)


def make_plan(ctx: MontgomeryContext, config: HwConfig | None = None) -> HwPlan:
    config = config or HwConfig()
    if config.merged and not (ctx.k == config.w == 4 and ctx.t == 1):
        raise ParameterError("the merged lookup needs k = w = 4 and t = 1")
    schedule = config.schedule or default_schedule(ctx, config)
    validate_schedule(schedule, ctx, config)
    kt_mask = (1 << ctx.kt) - 1
    return HwPlan(
        ctx=ctx,
        config=config,
        schedule=tuple(tuple(s) for s in schedule),
        width=ctx.kt + ctx.N_M + ctx.k + config.guard_bits,
        im_table=None if config.merged else build_encoding_table(ctx.M, config.w, "iM"),
        mprime_table=None if config.merged else build_encoding_table(
            ctx.M_prime_wide, config.w_prime, "iMprime", modulus_bits=ctx.kt),
        merged_table=build_encoding_table(ctx.M, 4, "merged", k=4) if config.merged else None,
        carry_row=tuple((c * ctx.M_prime_wide) & kt_mask for c in range(3)),
    )


def _apply_item(item: str, p: Payload, plan: HwPlan) -> Payload:
    ctx = plan.ctx
    kt = ctx.kt
    if item == ENCODE_MPRIME:
        z0, z1, z2, c_l, c_m = p.data
        pps = encode_windows((z0, z1, z2), kt, plan.mprime_table)
        mask = (1 << kt) - 1
        rows = [pp.value & mask for pp in pps] + [plan.carry_row[c_l + c_m]]
        return Payload("terms", tuple(rows))
    if item == COMPRESS:
        rows = list(p.data)
        if len(rows) > 2:
            mask = (1 << kt) - 1
            rows = [r & mask for r in compress_layer(rows)]
        return Payload("terms", tuple(rows))
    if item == ADD:
        q = (sum(p.data) & ((1 << kt) - 1)) >> (ctx.k * (ctx.t - 1))
        return Payload("qhat", (q,), q)
    if item == ENCODE_M:
        q = p.q_hat
        pps = encode_windows((q,), ctx.k, plan.im_table)
        return Payload("pps", tuple(pp.value for pp in pps), q)
    if item == ADD_LOW:
        z0, z1, z2, c_l, c_m = p.data
        low = (z0 + z1 + z2 + c_l + c_m) & ctx.mask_k
        return Payload("low", (low,))
    if item == ENCODE_MERGED:
        low = p.data[0]
        q = (low * ctx.M_prime_digit) & ctx.mask_k
        return Payload("pps", (plan.merged_table.lookup(low),), q)
    raise ParameterError(f"unknown work item {item!r}")


def _run_stage(j: int, p: Payload, plan: HwPlan) -> Payload:
    for item in plan.schedule[j]:
        p = _apply_item(item, p, plan)
    return p


def _residue_payload(res: RedundantResidue, kt: int) -> Payload:
    mask = (1 << kt) - 1
    return Payload("residue", (res.z0 & mask, res.z1 & mask, res.z2 & mask, res.c_l, res.c_m))


def initial_state(plan: HwPlan) -> HwState:
    """All-zero residue; each register holds what a zero residue would have produced."""
    res = RedundantResidue(0, 0, 0)
    regs = []
    p = _residue_payload(res, plan.ctx.kt)
    for j in range(plan.ctx.t - 1):
        p = _run_stage(j, p, plan)
        regs.append(p)
    return HwState(res, tuple(regs), 0)


def gen_temp_pps(a_i: int, B: int, ctx: MontgomeryContext) -> list[int]:
    """k array-multiplier rows: bit j of a_i gates B, all shifted up by k*t."""
    if not 0 <= a_i < ctx.r:
        raise ParameterError("digit does not fit in k bits")
    return [(B << (ctx.kt + j)) if (a_i >> j) & 1 else 0 for j in range(ctx.k)]


def hw_step(state: HwState, plan: HwPlan, B: int, a_i: int) -> tuple[HwState, HwStepRecord]:
    """One clock: advance the pipeline, compress, recover carries, shift."""
    ctx = plan.ctx
    t, k = ctx.t, ctx.k
    i = state.i
    fresh = _residue_payload(state.residue, ctx.kt)
    # every stage reads the register contents from the previous clock
    prev = (fresh,) + state.registers
    emitted = _run_stage(t - 1, prev[t - 1], plan)
    new_regs = tuple(_run_stage(j, prev[j], plan) for j in range(t - 1))

    rows = list(state.residue.terms) + [state.residue.c_l, state.residue.c_m]
    rows += gen_temp_pps(a_i, B, ctx)
    rows += list(emitted.data)
    try:
        out, levels = compress_terms(rows, 3, width=plan.width)
    except InvariantError as exc:
        raise InvariantError(str(exc), i) from None
    out += [0] * (3 - len(out))
    mask = ctx.mask_k
    try:
        c_l, c_m = carry_bits(out[0] & mask, out[1] & mask, out[2] & mask, k)
    except InvariantError as exc:
        raise InvariantError(str(exc), i) from None
    res = RedundantResidue(out[0] >> k, out[1] >> k, out[2] >> k, c_l, c_m)
    for z in res.terms:
        if z >> plan.width:
            raise InvariantError(f"residue term exceeds {plan.width} bits", i)
    record = HwStepRecord(i, res, emitted.q_hat, (c_l, c_m), levels)
    return HwState(res, new_regs, i + 1), record


def hw_run(ctx: MontgomeryContext, A: int, B: int, config: HwConfig | None = None,
           *, plan: HwPlan | None = None) -> tuple[MmmResult, CycleReport, list[HwStepRecord]]:
    _check_operands(ctx, A, B)
    plan = plan or make_plan(ctx, config)
    config = plan.config
    digits = to_digits(A, ctx)
    state = initial_state(plan)
    trace = []
    for i in range(ctx.d + ctx.t):
        a = digits[i] if i < ctx.d else 0
        state, rec = hw_step(state, plan, B, a)
        trace.append(rec)
    # epilogue: carry-propagate sum of the triple, then one conditional subtract
    Z = state.residue.value()
    try:
        out = final_reduce(Z, ctx.M)
    except InvariantError as exc:
        raise InvariantError(str(exc), len(trace)) from None
    result = MmmResult(
        output=out,
        pre_reduction=Z,
        quotients=QuotientTrace(tuple(r.q_hat for r in trace[ctx.t:]), ctx.k),
        history=tuple(r.residue.value() for r in trace),
    )
    return result, cycle_report(ctx, config, plan.schedule), trace


def cycle_report(ctx: MontgomeryContext, config: HwConfig | None = None,
                 schedule=None) -> CycleReport:
    config = config or HwConfig()
    if schedule is not None and config.schedule is None:
        config = replace(config, schedule=tuple(schedule))
    iterations = ctx.d + ctx.t
    report = CycleReport(
        iterations=iterations,
        epilogue_cycles=config.epilogue_cycles,
        total_cycles=iterations + config.epilogue_cycles,
        epilogue_fitted=config.epilogue_fitted,
        levels=level_budget_report(ctx, config),
    )
    if config.epilogue_fitted:
        report.notes.append(
            f"epilogue of {config.epilogue_cycles} cycles is fitted, not derived")
    return report
