"""Differential sweep: classical, pipelined-quotient and hardware model in lockstep."""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .classical import check_quotient_consistency, classical_mmm, montgomery_expected
from .context import make_context
from .errors import MontError, ParameterError
from .hw import HwConfig, hw_run
from .variant import drmmm_mul

RADICES = (2, 4, 8, 16)


@dataclass(frozen=True)
class Case:
    index: int
    M: int
    A: int
    B: int
    k: int
    t: int
    expected: int | None = None


@dataclass(frozen=True)
class Outcome:
    index: int
    ok: bool
    detail: str


def random_modulus(rng: random.Random, bits: int) -> int:
    """Odd modulus with exactly ``bits`` bits."""
    if bits < 2:
        raise ParameterError("modulus width must be at least 2 bits")
    return rng.getrandbits(bits) | 1 | (1 << (bits - 1))


def draw_case(seed: int, index: int, widths, ks, ts) -> Case:
    rng = random.Random(f"{seed}:{index}")
    bits = rng.choice(widths)
    M = random_modulus(rng, bits)
    return Case(index, M, rng.randrange(M), rng.randrange(M), rng.choice(ks), rng.choice(ts))


def run_case(case: Case, config: HwConfig | None = None, radix_pool=RADICES) -> Outcome:
    tag = f"N={case.M.bit_length()} k={case.k} t={case.t}"
    try:
        ctx = make_context(case.M, case.k, case.t)
        want = montgomery_expected(ctx, case.A, case.B)
        if case.expected is not None and case.expected != want:
            return Outcome(case.index, False, f"{tag}: vector expects {case.expected:x}, oracle gives {want:x}")
        ref = classical_mmm(ctx, case.A, case.B)
        var, _ = drmmm_mul(ctx, case.A, case.B)
        hw, _, _ = hw_run(ctx, case.A, case.B, config)
        if not ref.output == var.output == hw.output == want:
            return Outcome(case.index, False, f"{tag}: output mismatch")
        if hw.history != var.history:
            return Outcome(case.index, False, f"{tag}: hardware state diverged from recurrence")
        if var.quotients.q != ref.quotients.q:
            return Outcome(case.index, False, f"{tag}: quotient digits differ")
        rng = random.Random(f"radix:{case.index}:{case.M}")
        k1, k2 = rng.sample(list(radix_pool), 2)
        if not check_quotient_consistency(case.M, case.A, case.B, k1, k2):
            return Outcome(case.index, False, f"{tag}: quotient sums differ for k={k1},{k2}")
    except MontError as exc:
        return Outcome(case.index, False, f"{tag}: {type(exc).__name__}: {exc}")
    return Outcome(case.index, True, tag)


def _run_packed(args):
    return run_case(*args)


def run_cases(cases, config: HwConfig | None = None, jobs: int = 1) -> list[Outcome]:
    cases = list(cases)
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_packed, [(c, config) for c in cases], chunksize=16))
    else:
        outcomes = [run_case(c, config) for c in cases]
    return sorted(outcomes, key=lambda o: o.index)


def sweep(trials: int, widths, ks, ts, seed: int, config: HwConfig | None = None,
          jobs: int = 1) -> list[Outcome]:
    cases = [draw_case(seed, i, widths, ks, ts) for i in range(trials)]
    return run_cases(cases, config, jobs)


def read_vectors(path) -> list[Case]:
    cases = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                exp = rec.get("expected")
                cases.append(Case(
                    index=len(cases),
                    M=_parse_hex(rec["M"]),
                    A=_parse_hex(rec["A"]),
                    B=_parse_hex(rec["B"]),
                    k=int(rec["k"]),
                    t=int(rec["t"]),
                    expected=None if exp is None else _parse_hex(exp),
                ))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParameterError(f"{path}:{lineno}: bad vector record ({exc})") from None
    return cases


def write_vectors(path, cases) -> None:
    with open(path, "w") as fh:
        for c in cases:
            ctx = make_context(c.M, c.k, c.t)
            rec = {"M": f"{c.M:x}", "A": f"{c.A:x}", "B": f"{c.B:x}", "k": c.k, "t": c.t,
                   "expected": f"{montgomery_expected(ctx, c.A, c.B):x}"}
            fh.write(json.dumps(rec) + "\n")


def _parse_hex(s: str) -> int:
    if not isinstance(s, str) or not s or s != s.lower() or s.startswith("0x"):
        raise ValueError(f"expected lowercase unprefixed hex, got {s!r}")
    return int(s, 16)
