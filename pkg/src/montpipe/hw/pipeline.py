"""Quotient pipeline: work items, stage schedules and the logic-level model.

Levels are counted in LUT delays.  The update path is one front-end level
(array partial products, the carry LUTs and the final-stage iM lookup run
side by side) followed by the 6-to-3 tree.  A wide carry-propagate adder is
counted as a whole cycle; its real delay depends on the carry chain and is
not modeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..context import MontgomeryContext
from ..errors import ParameterError
from .cells import layer_count

ENCODE_MPRIME = "encode_mprime"
COMPRESS = "compress"
ADD = "add"
ENCODE_M = "encode_m"
# single-stage quotient path when the iM and iM' lookups are merged
ADD_LOW = "add_low"
ENCODE_MERGED = "encode_merged"

PP_GEN_LEVELS = 1
CARRY_LEVELS = 1
GUARD_BITS = 3
DEFAULT_EPILOGUE = 6  # fitted to the published 74-cycle total for N_M=1024, k=16, t=4


@dataclass(frozen=True)
class HwConfig:
    w: int = 6
    w_prime: int = 6
    schedule: tuple[tuple[str, ...], ...] | None = None
    guard_bits: int = GUARD_BITS
    epilogue_cycles: int = DEFAULT_EPILOGUE
    epilogue_fitted: bool = True
    merged: bool = False

    def __post_init__(self):
        for name in ("w", "w_prime"):
            v = getattr(self, name)
            if not 4 <= v <= 6:
                raise ParameterError(f"{name} must be in [4, 6], got {v}")
        if self.guard_bits < 0 or self.epilogue_cycles < 0:
            raise ParameterError("guard_bits and epilogue_cycles must be non-negative")


def mprime_term_count(ctx: MontgomeryContext, w_prime: int) -> int:
    """Rows entering the quotient compressor.

    Three residue terms give 3*ceil(kt/w') window products; the pending carry
    pair adds one more row, (C_l + C_m) * M' mod 2^(kt).
    """
    return 3 * math.ceil(ctx.kt / w_prime) + 1


def qm_term_count(ctx: MontgomeryContext, config: HwConfig) -> int:
    return 1 if config.merged else math.ceil(ctx.k / config.w)


def update_term_count(ctx: MontgomeryContext, config: HwConfig) -> int:
    # residue triple, two carry bits, k array rows, q_hat*M rows
    return 3 + 2 + ctx.k + qm_term_count(ctx, config)


def work_items(ctx: MontgomeryContext, config: HwConfig) -> list[str]:
    if config.merged:
        return [ADD_LOW, ENCODE_MERGED]
    n = mprime_term_count(ctx, config.w_prime)
    return [ENCODE_MPRIME] + [COMPRESS] * layer_count(n, 2) + [ADD, ENCODE_M]


def iteration_budget(ctx: MontgomeryContext, config: HwConfig) -> int:
    return PP_GEN_LEVELS + layer_count(update_term_count(ctx, config), 3)


def item_levels(item: str, budget: int) -> int:
    return budget if item in (ADD, ADD_LOW) else 1


def default_schedule(ctx: MontgomeryContext, config: HwConfig) -> tuple[tuple[str, ...], ...]:
    """Greedy packing: the last stage holds the iM lookup, earlier stages fill up to the budget."""
    items = work_items(ctx, config)
    t = ctx.t
    if t == 1:
        return (tuple(items),)
    budget = iteration_budget(ctx, config)
    body, final = items[:-1], items[-1:]
    stages: list[list[str]] = [[] for _ in range(t - 1)]
    cur = 0
    used = CARRY_LEVELS
    for item in body:
        cost = item_levels(item, budget)
        while used + cost > budget and cur < t - 2:
            cur += 1
            used = 0
        stages[cur].append(item)
        used += cost
    return tuple(tuple(s) for s in stages) + (tuple(final),)


def validate_schedule(schedule, ctx: MontgomeryContext, config: HwConfig) -> None:
    if len(schedule) != ctx.t:
        raise ParameterError(f"schedule has {len(schedule)} stages, expected t={ctx.t}")
    flat = [item for stage in schedule for item in stage]
    if flat != work_items(ctx, config):
        raise ParameterError("schedule does not cover the quotient work items in order")
    if not schedule[-1] or schedule[-1][-1] != flat[-1]:
        raise ParameterError("the last stage must end with the iM lookup")


@dataclass
class LevelReport:
    pp_gen: int
    tree: int
    carry: int
    stages: list[int]
    iteration_budget: int
    iteration_levels: int
    update_terms: int
    stage1_terms: int
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def update_levels(self) -> int:
        """Array partial products plus the residue tree, without quotient interference."""
        return self.pp_gen + self.tree

    @property
    def ok(self) -> bool:
        return not self.violations


def level_budget_report(ctx: MontgomeryContext, config: HwConfig | None = None) -> LevelReport:
    config = config or HwConfig()
    schedule = config.schedule or default_schedule(ctx, config)
    validate_schedule(schedule, ctx, config)
    budget = iteration_budget(ctx, config)
    n_update = update_term_count(ctx, config)
    tree = layer_count(n_update, 3)
    stages = [sum(item_levels(item, budget) for item in stage) for stage in schedule]
    t = ctx.t
    final = stages[-1] + (CARRY_LEVELS if t == 1 else 0)
    front = max(PP_GEN_LEVELS, CARRY_LEVELS, final)
    report = LevelReport(
        pp_gen=PP_GEN_LEVELS,
        tree=tree,
        carry=CARRY_LEVELS,
        stages=stages,
        iteration_budget=budget,
        iteration_levels=front + tree,
        update_terms=n_update,
        stage1_terms=0 if config.merged else mprime_term_count(ctx, config.w_prime),
    )
    for j, lv in enumerate(stages[:-1], start=1):
        limit = budget - (CARRY_LEVELS if j == 1 else 0)
        if lv > limit:
            report.violations.append(f"stage {j} needs {lv} levels, {limit} available")
    if front > PP_GEN_LEVELS:
        report.violations.append(
            f"final stage adds {front - PP_GEN_LEVELS} levels to the update path")
    report.iteration_levels = max([report.iteration_levels] + [
        lv + (CARRY_LEVELS if j == 0 else 0) for j, lv in enumerate(stages[:-1])])
    if not config.merged:
        n = report.stage1_terms
        report.notes.append(
            f"quotient compressor input: {n} rows = 3*ceil({ctx.kt}/{config.w_prime}) window products + 1 carry row")
    report.notes.append("full adder counted as one cycle; carry-chain delay not modeled")
    return report


def quotient_path_levels(ctx: MontgomeryContext, config: HwConfig | None = None) -> int:
    """Total levels of the quotient computation that precede the final lookup (carry LUT included)."""
    config = config or HwConfig()
    budget = iteration_budget(ctx, config)
    items = work_items(ctx, config)[:-1]
    return CARRY_LEVELS + sum(item_levels(item, budget) for item in items)
