"""Command-line front end: mul, verify, tables, analyze, trace."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .analysis import (LatencyParams, dependence_bound, estimate_t_max, latency_gain,
                       latency_proposed, latency_serial)
from .classical import classical_mmm, mont_mul_corrected
from .context import make_context
from .errors import InvariantError, MontError, ParameterError
from .hw import (HwConfig, build_encoding_table, carry_lut_inits, cycle_report, hw_run,
                 level_budget_report, lut_init_matrix, quotient_path_levels)
from .variant import drmmm_mul
from . import verify as _verify

MODES = ("classical", "drmmm", "hw")


class CliError(Exception):
    def __init__(self, code: str, message: str, status: int = 2):
        super().__init__(message)
        self.code = code
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("E_USAGE", message)


def hex_int(s: str) -> int:
    s = s.strip()
    if not s or s.lower().startswith("0x"):
        raise argparse.ArgumentTypeError(f"expected unprefixed hex, got {s!r}")
    try:
        return int(s, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid hex {s!r}") from None


def int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def _hw_config(args) -> HwConfig:
    kw = {"w": args.w, "w_prime": args.w_prime}
    if getattr(args, "epilogue", None) is not None:
        kw.update(epilogue_cycles=args.epilogue, epilogue_fitted=False)
    return HwConfig(**kw)


def _emit(args, text_lines, payload):
    if args.json:
        print(json.dumps(payload))
    else:
        for line in text_lines:
            print(line)


def _run_mode(ctx, A, B, mode, config):
    if mode == "classical":
        return classical_mmm(ctx, A, B), None, None
    if mode == "drmmm":
        res, trace = drmmm_mul(ctx, A, B)
        return res, None, trace
    return hw_run(ctx, A, B, config)


def cmd_mul(args) -> int:
    ctx = make_context(args.M, args.k, args.t)
    res, _, _ = _run_mode(ctx, args.A, args.B, args.mode, _hw_config(args))
    lines = [f"{res.output:x}"]
    payload = {"mode": args.mode, "output": f"{res.output:x}"}
    if args.corrected:
        corr = mont_mul_corrected(ctx, args.A, args.B)
        lines.append(f"{corr:x}")
        payload["corrected"] = f"{corr:x}"
    _emit(args, lines, payload)
    return 0


def cmd_verify(args) -> int:
    config = _hw_config(args)
    if args.vectors:
        cases = _verify.read_vectors(args.vectors)
    else:
        cases = [_verify.draw_case(args.seed, i, args.widths, args.k, args.t) for i in range(args.trials)]
    if args.write_vectors:
        _verify.write_vectors(args.write_vectors, cases)
    outcomes = _verify.run_cases(cases, config, args.jobs)
    failed = [o for o in outcomes if not o.ok]
    lines = []
    for o in outcomes:
        if not o.ok or args.verbose:
            lines.append(f"trial {o.index}: {'pass' if o.ok else 'FAIL'} {o.detail}")
    lines.append(f"passed {len(outcomes) - len(failed)}/{len(outcomes)}")
    payload = {
        "trials": len(outcomes),
        "passed": len(outcomes) - len(failed),
        "failed": [{"trial": o.index, "detail": o.detail} for o in failed],
        "seed": args.seed,
    }
    _emit(args, lines, payload)
    return 1 if failed else 0


def cmd_tables(args) -> int:
    if args.carry_inits:
        cl, cm = carry_lut_inits()
        _emit(args, [f"{cl:016x}", f"{cm:016x}"], {"C_l": f"{cl:016x}", "C_m": f"{cm:016x}"})
        return 0
    if args.M is None:
        raise CliError("E_USAGE", "-M is required unless --carry-inits is given")
    if args.kind == "iMprime":
        ctx = make_context(args.M, args.k, args.t)
        table = build_encoding_table(ctx.M_prime_wide, args.w, "iMprime", modulus_bits=ctx.kt)
    else:
        make_context(args.M, args.k, args.t)
        table = build_encoding_table(args.M, args.w, args.kind, k=args.k)
    if args.format == "hex":
        rows = [f"{e:x}" for e in table.entries]
        key = "entries"
    else:
        rows = lut_init_matrix(table).hex_rows()
        key = "init"
    _emit(args, rows, {"kind": table.kind, "w": table.w, key: rows})
    return 0


def _frac(x: Fraction) -> str:
    return str(x)


def cmd_analyze(args) -> int:
    n, k, t = args.N_M, args.k, args.t
    if n < 2 or k < 1 or t < 1:
        raise CliError("E_PARAM", "N_M must be >= 2, k and t >= 1")
    d = -(-n // k)
    p = LatencyParams(T_m=args.T_m, T_a=args.T_a, T_red=args.T_red)
    out = {
        "N_M": n, "k": k, "t": t, "d": d,
        "iterations_classical": d,
        "iterations_drmmm": d + t,
        "T_serial": _frac(latency_serial(p, d)),
        "T_proposed": _frac(latency_proposed(p, d, t)),
        "gain": _frac(latency_gain(p, d, t)),
        "eta_bound": _frac(dependence_bound(n, k)),
    }
    lines = [f"{key}: {val}" for key, val in out.items()]
    try:
        # level and cycle model need a concrete context; any odd modulus of width N_M will do
        ctx = make_context((1 << (n - 1)) | 1, k, t)
    except ParameterError as exc:
        out["level_model"] = None
        lines.append(f"level model: unavailable ({exc})")
    else:
        config = _hw_config(args)
        rep = cycle_report(ctx, config)
        lv = rep.levels
        tq = quotient_path_levels(ctx, config)
        tmax = estimate_t_max(LatencyParams(T_u=lv.update_levels, T_q=tq))
        fitted = " (fitted)" if rep.epilogue_fitted else ""
        out.update({
            "update_levels": lv.update_levels,
            "stage_levels": lv.stages,
            "level_violations": lv.violations,
            "quotient_levels": tq,
            "t_max": tmax,
            "cycles": {"iterations": rep.iterations, "epilogue": rep.epilogue_cycles,
                       "total": rep.total_cycles, "epilogue_fitted": rep.epilogue_fitted},
        })
        lines += [
            f"update_levels: {lv.update_levels}",
            f"stage_levels: {' '.join(map(str, lv.stages))}",
            f"quotient_levels: {tq}",
            f"t_max: {tmax}",
            f"cycles: {rep.iterations} iterations + {rep.epilogue_cycles} epilogue{fitted} = {rep.total_cycles}",
        ]
        lines += [f"violation: {v}" for v in lv.violations]
        lines += [f"note: {note}" for note in lv.notes + rep.notes]
    _emit(args, lines, out)
    return 0


def trace_document(ctx, A, B, mode, config) -> dict:
    doc = {"header": {"M": f"{ctx.M:x}", "k": ctx.k, "t": ctx.t, "w": config.w,
                      "w_prime": config.w_prime, "mode": mode}}
    its = []
    if mode == "classical":
        res = classical_mmm(ctx, A, B)
        for i, (z, q) in enumerate(zip(res.history, res.quotients.q)):
            its.append({"i": i, "z_terms": [f"{z:x}"], "q_hat": f"{q:x}", "carry": None,
                        "assertions_passed": True})
        cycles, levels = ctx.d, None
    elif mode == "drmmm":
        res, trace = drmmm_mul(ctx, A, B)
        for s in trace.steps:
            its.append({"i": s.i, "z_terms": [f"{s.z:x}"], "q_hat": f"{s.q_hat:x}", "carry": None,
                        "assertions_passed": True})
        cycles, levels = trace.iterations, None
    else:
        res, rep, trace = hw_run(ctx, A, B, config)
        for r in trace:
            its.append({"i": r.i, "z_terms": [f"{z:x}" for z in r.residue.terms],
                        "q_hat": f"{r.q_hat:x}", "carry": list(r.carry),
                        "assertions_passed": r.low_window_zero})
        lv = rep.levels
        cycles = {"iterations": rep.iterations, "epilogue": rep.epilogue_cycles,
                  "total": rep.total_cycles, "epilogue_fitted": rep.epilogue_fitted}
        levels = {"pp_gen": lv.pp_gen, "tree": lv.tree, "carry": lv.carry, "stages": lv.stages,
                  "update": lv.update_levels, "iteration": lv.iteration_levels,
                  "violations": lv.violations}
    doc["iterations"] = its
    doc["summary"] = {"output": f"{res.output:x}", "pre_reduction": f"{res.pre_reduction:x}",
                      "cycles": cycles, "levels": levels}
    return doc


def cmd_trace(args) -> int:
    ctx = make_context(args.M, args.k, args.t)
    doc = trace_document(ctx, args.A, args.B, args.mode, _hw_config(args))
    text = json.dumps(doc, indent=1) + "\n"
    try:
        with open(args.out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError("E_IO", f"cannot write {args.out}: {exc.strerror}", 3) from None
    _emit(args, [f"wrote {len(doc['iterations'])} iterations to {args.out}"],
          {"path": args.out, "iterations": len(doc["iterations"])})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="montpipe", description=__doc__)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def operands(p, need_ab=True):
        p.add_argument("-M", type=hex_int, required=True, help="modulus (hex)")
        if need_ab:
            p.add_argument("-A", type=hex_int, required=True)
            p.add_argument("-B", type=hex_int, required=True)
        p.add_argument("-k", type=int, default=4)
        p.add_argument("-t", type=int, default=2)

    def windows(p):
        p.add_argument("-w", type=int, default=6, help="iM window width")
        p.add_argument("--w-prime", type=int, default=6, help="iM' window width")

    p = sub.add_parser("mul", help="one Montgomery multiplication")
    operands(p)
    windows(p)
    p.add_argument("--mode", choices=MODES, default="hw")
    p.add_argument("--corrected", action="store_true", help="also print A*B mod M")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("verify", help="differential sweep")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--widths", type=int_list, default=[256])
    p.add_argument("-k", type=int_list, default=[4, 16])
    p.add_argument("-t", type=int_list, default=[2, 4])
    p.add_argument("--vectors", help="JSON-lines vector file to check instead of random draws")
    p.add_argument("--write-vectors", help="dump the checked cases as a vector file")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    windows(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tables", help="encoding tables and LUT INIT words")
    p.add_argument("-M", type=hex_int)
    p.add_argument("-w", type=int, default=4)
    p.add_argument("-k", type=int, default=4)
    p.add_argument("-t", type=int, default=1)
    p.add_argument("--kind", choices=("iM", "iMprime", "merged"), default="iM")
    p.add_argument("--format", choices=("hex", "init"), default="hex")
    p.add_argument("--carry-inits", action="store_true")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("analyze", help="latency formulas and cycle model")
    p.add_argument("--N-M", dest="N_M", type=int, default=1024)
    p.add_argument("-k", type=int, default=16)
    p.add_argument("-t", type=int, default=4)
    p.add_argument("--T-m", dest="T_m", type=Fraction, default=Fraction(1))
    p.add_argument("--T-a", dest="T_a", type=Fraction, default=Fraction(1))
    p.add_argument("--T-red", dest="T_red", type=Fraction, default=Fraction(0))
    p.add_argument("--epilogue", type=int, help="epilogue cycles (default: fitted value)")
    windows(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("trace", help="write a per-iteration JSON trace")
    operands(p)
    windows(p)
    p.add_argument("--mode", choices=MODES, default="hw")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_trace)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "trials", 0) < 0:
            raise CliError("E_USAGE", "--trials must be non-negative")
        return args.func(args)
    except CliError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return exc.status
    except ParameterError as exc:
        print(f"E_PARAM: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"E_INVARIANT: {exc}", file=sys.stderr)
        return 4
    except MontError as exc:
        print(f"E_INTERNAL: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
