#!/usr/bin/env python3
"""
cantorsums 命令行入口

Every subcommand produces one ``Report`` envelope. Exit status is 0 when the
report passes, 1 on a verified failure or counterexample and 2 on usage
errors (the offending flag is named on stderr).
"""

import argparse
import sys
from typing import Callable, Dict, List, Optional, TextIO

from pydantic import ValidationError

from cantorsums import __version__
from cantorsums.cantor import (
    PrefixSpec,
    check_prefix_condition,
    construct_B,
    fs_prefix,
    recover_generators,
    superincreasing,
    verify_construction,
    verify_converse,
)
from cantorsums.config import settings
from cantorsums.digit_stream import DigitStream, digits_value
from cantorsums.exceptions import CantorSumsError, InvalidParameter
from cantorsums.generator import build_table, floor_power_oracle, verify_lemma_2_2
from cantorsums.intset import (
    IntSetBitmap,
    density,
    fs_bitmap,
    gap_index_correspondence,
    gaps,
    piecewise_shift_invariant,
    ruler_sequence,
    scaled_sumset,
    sumset,
)
from cantorsums.log import logger, set_level
from cantorsums.progressions import bounded_gap_set, lemma23_extract, longest_ap
from cantorsums.schemas import Command, OutputFormat, Report, RunConfig
from cantorsums.storage import save_bitmap, write_report
from cantorsums.theorems import (
    density_report,
    sweep_witnesses,
    thm21_pipeline,
    verify_thm24,
    verify_y_membership,
    witness_decompose,
)
from cantorsums.utils import parse_int_list, stopwatch
from cantorsums.vdw import default_table, verify_vdw_small

# 报告中最多列出的成员数
MEMBER_LIMIT = 10_000


def _require(value, flag: str):
    if value is None:
        raise InvalidParameter(f"{flag} is required for this command", flag=flag)
    return value


def _stream(config: RunConfig) -> DigitStream:
    if config.alpha is not None:
        return DigitStream.rational(config.alpha, config.p)
    return DigitStream.seeded(config.seed, config.p)


def _set_summary(S: IntSetBitmap) -> Dict:
    summary = {"N": S.bound, "size": len(S), "density": float(density(S))}
    if len(S) <= MEMBER_LIMIT:
        summary["members"] = S.members().tolist()
    return summary


def _maybe_save(S: IntSetBitmap, config: RunConfig):
    if config.bitmap:
        save_bitmap(S, config.bitmap)


def cmd_expand(config: RunConfig) -> Report:
    stream = _stream(config)
    n = _require(config.n, "--n")
    digits = stream.digits(n)
    return Report(
        theorem="expand",
        params={**stream.describe(), "n": n},
        passed=True,
        details={
            "digits": digits,
            "prefix_value": str(digits_value(digits, stream.p)),
            "text": ",".join(map(str, digits)),
        },
    )


def cmd_generate(config: RunConfig) -> Report:
    stream = _stream(config)
    n = _require(config.n, "--n")
    materialize = True if config.materialize is None else config.materialize
    table = build_table(stream, n, materialize=materialize)
    check = verify_lemma_2_2(table)
    counterexample = None if check.passed else {"lemma": check.first_failure}

    # 有理 α 时与 ⌊pⁿα⌋ 逐项比对
    oracle_mismatch = None
    if table.materialized and not stream.is_random:
        for k, x in enumerate(table.terms):
            if x != floor_power_oracle(stream.alpha, stream.p, k):
                oracle_mismatch = k
                break
    if oracle_mismatch is not None:
        counterexample = {"oracle": oracle_mismatch}
    return Report(
        theorem="lemma2.2",
        params={**stream.describe(), "n": n, "materialized": materialize},
        passed=check.passed and oracle_mismatch is None,
        counterexample=counterexample,
        details=table.to_report(),
    )


def cmd_fs(config: RunConfig) -> Report:
    B = _require(config.set, "--set")
    N = _require(config.N, "--N")
    S = fs_bitmap(B, N)
    _maybe_save(S, config)
    return Report(theorem="fs", params={"set": B, "N": N}, passed=True, details=_set_summary(S))


def cmd_sumset(config: RunConfig) -> Report:
    A_members = _require(config.set, "--set")
    N = _require(config.N, "--N")
    A = IntSetBitmap.from_members(A_members, N)
    if config.t is not None:
        S = scaled_sumset(A, config.t, N)
    else:
        B = IntSetBitmap.from_members(config.set2 if config.set2 is not None else A_members, N)
        S = sumset(A, B, N)
    _maybe_save(S, config)
    return Report(
        theorem="sumset",
        params={"set": A_members, "set2": config.set2, "t": config.t, "N": N},
        passed=True,
        details=_set_summary(S),
    )


def cmd_gaps(config: RunConfig) -> Report:
    B = _require(config.set, "--set")
    N = _require(config.N, "--N")
    found = gaps(fs_bitmap(B, N))
    return Report(
        theorem="gaps",
        params={"set": B, "N": N},
        passed=True,
        details={
            "count": len(found),
            "gaps": [[g.left, g.right] for g in found],
            "lengths": [g.length for g in found],
        },
    )


def cmd_density(config: RunConfig) -> Report:
    return density_report(_stream(config), _require(config.N, "--N"), config.t)


def cmd_ruler(config: RunConfig) -> Report:
    if config.level is not None:
        passed = gap_index_correspondence(config.level)
        return Report(
            theorem="ruler-correspondence",
            params={"level": config.level},
            passed=passed,
            counterexample=None if passed else config.level,
        )
    n = _require(config.n, "--n")
    sequence = ruler_sequence(n)
    return Report(
        theorem="ruler",
        params={"n": n},
        passed=True,
        details={"sequence": sequence, "text": ",".join(map(str, sequence))},
    )


def cmd_verify_thm24(config: RunConfig) -> Report:
    return verify_thm24(
        _stream(config),
        _require(config.n, "--n"),
        N=config.N,
        samples=config.samples,
        seed=config.seed or 0,
        jobs=config.jobs,
    )


def _deep_enough(stream: DigitStream, x: int):
    """Smallest table with s_n ≥ x."""
    n = max(1, x.bit_length())
    table = build_table(stream, n)
    while table.s(n) < x:
        n += 1
        table = build_table(stream, n)
    return table


def cmd_witness(config: RunConfig) -> Report:
    stream = _stream(config)
    if config.x is not None:
        table = build_table(stream, config.n) if config.n is not None else _deep_enough(stream, config.x)
        witness = witness_decompose(config.x, table)
        C = fs_bitmap(table.terms_up_to(config.x), config.x)
        passed = witness.u in C and witness.v in C
        return Report(
            theorem="witness",
            params={**stream.describe(), "n": table.n, "x": config.x},
            passed=passed,
            counterexample=None if passed else config.x,
            witnesses_sampled=1,
            details=witness.model_dump(mode="json"),
        )

    # 不给 --x 时扫描 [0, min(sₙ, N)]
    n = _require(config.n, "--n")
    table = build_table(stream, n)
    top = table.s(n) if config.N is None else min(config.N, table.s(n))
    C = fs_bitmap(table.terms_up_to(table.s(n)), table.s(n))
    bad = sweep_witnesses(table, range(top + 1), C, jobs=config.jobs)
    return Report(
        theorem="witness-sweep",
        params={**stream.describe(), "n": n, "range": [0, top]},
        passed=bad is None,
        counterexample=bad,
        witnesses_sampled=top + 1,
    )


def cmd_thm21(config: RunConfig) -> Report:
    stream = _stream(config)
    n = _require(config.n, "--n")
    report = thm21_pipeline(stream, n, materialize=config.materialize)
    if config.N is None:
        return report
    membership = verify_y_membership(build_table(stream, n), n, config.N)
    return report.model_copy(
        update={
            "passed": report.passed and membership.passed,
            "counterexample": report.counterexample or membership.counterexample,
            "witnesses_sampled": membership.witnesses_sampled,
            "params": {**report.params, "N": config.N},
            "details": {**report.details, "membership": membership.details["rows"]},
        }
    )


def cmd_lemma23(config: RunConfig) -> Report:
    K = _require(config.K, "--K")
    if config.set is not None:
        Z = config.set
        params = {"set": Z, "K": K}
    else:
        m = _require(config.m, "--m")
        seed = _require(config.seed, "--seed")
        Z = bounded_gap_set(seed, m, K)
        params = {"seed": seed, "m": m, "K": K}
    ap = lemma23_extract(Z, K, include_literature=config.include_literature)
    lookup = default_table().inverse_vdw(K, max(1, len(Z) // K), config.include_literature)
    longest = longest_ap(Z)
    passed = ap.length >= lookup.length and longest.length >= ap.length
    return Report(
        theorem="lemma23",
        params={**params, "include_literature": config.include_literature},
        passed=passed,
        counterexample=None if passed else ap.model_dump(mode="json"),
        details={
            "ap": ap.model_dump(mode="json"),
            "guaranteed": lookup.model_dump(mode="json"),
            "longest": longest.model_dump(mode="json"),
        },
    )


def cmd_vdw(config: RunConfig) -> Report:
    s = _require(config.s, "--s")
    k = _require(config.k, "--k")
    certificate = verify_vdw_small(s, k)
    table = default_table()
    entry = table.entry(s, k)
    details = {
        "W": certificate.W,
        "verified": certificate.verified,
        "witness_coloring": certificate.witness_coloring,
        "nodes_explored": certificate.nodes_explored,
    }
    passed = True
    if entry is not None:
        details["table"] = {"W": entry.W, "provenance": entry.provenance.value}
        passed = entry.W == certificate.W
    if config.N is not None:
        details["inverse"] = table.inverse_vdw(s, config.N, config.include_literature).model_dump()
    return Report(
        theorem="vdw",
        params={"s": s, "k": k},
        passed=passed,
        counterexample=None if passed else details.get("table"),
        details=details,
    )


def cmd_prop1_construct(config: RunConfig) -> Report:
    if config.family is None:
        # 只检查前缀条件
        n = _require(config.n, "--n")
        passed = check_prefix_condition(n)
        return Report(theorem="prefix-condition", params={"n": n}, passed=passed)
    spec = PrefixSpec(config.family, _require(config.k, "--k"), config.r)
    B = construct_B(spec)
    prefix = fs_prefix(B, spec)
    expected = spec.prefix()
    shift = verify_construction(spec)
    passed = prefix == expected and shift.passed
    details = {
        "B": B.to_list(),
        "repaired": B.repaired,
        "prefix": prefix,
        "expected": expected,
        "tail_shift_invariant": shift.model_dump(mode="json"),
    }
    if config.n is not None:
        details["tail"] = B.tail(config.n).to_list()
    return Report(
        theorem="prop1-construct",
        params={"family": spec.family.value, "k": spec.k, "r": spec.r},
        passed=passed,
        counterexample=None if prefix == expected else sorted(set(prefix) ^ set(expected))[0],
        details=details,
    )


def cmd_prop1_recover(config: RunConfig) -> Report:
    members = _require(config.set, "--set")
    N = config.N if config.N is not None else max(members)
    A = IntSetBitmap.from_members(members, N)
    recovery = recover_generators(A)
    return Report(
        theorem="prop1-recover",
        params={"set": members, "N": N},
        passed=recovery.valid,
        counterexample=recovery.first_mismatch,
        details={
            **recovery.model_dump(),
            "superincreasing_violation": superincreasing(recovery.generators),
        },
    )


def cmd_shift_invariant(config: RunConfig) -> Report:
    B = _require(config.set, "--set")
    N = _require(config.N, "--N")
    violation = superincreasing(B)
    if violation is None:
        result = verify_converse(B, N)
    else:
        result = piecewise_shift_invariant(fs_bitmap(B, N))
    return Report(
        theorem="shift-invariant",
        params={"set": B, "N": N},
        passed=result.passed,
        counterexample=result.first_violation.model_dump() if result.first_violation else None,
        details={**result.model_dump(), "superincreasing_violation": violation},
    )


COMMANDS: Dict[Command, Callable[[RunConfig], Report]] = {
    Command.EXPAND: cmd_expand,
    Command.GENERATE: cmd_generate,
    Command.FS: cmd_fs,
    Command.SUMSET: cmd_sumset,
    Command.GAPS: cmd_gaps,
    Command.DENSITY: cmd_density,
    Command.RULER: cmd_ruler,
    Command.VERIFY_THM24: cmd_verify_thm24,
    Command.WITNESS: cmd_witness,
    Command.THM21: cmd_thm21,
    Command.LEMMA23: cmd_lemma23,
    Command.VDW: cmd_vdw,
    Command.PROP1_CONSTRUCT: cmd_prop1_construct,
    Command.PROP1_RECOVER: cmd_prop1_recover,
    Command.SHIFT_INVARIANT: cmd_shift_invariant,
}


COMMAND_HELP: Dict[Command, str] = {
    Command.EXPAND: "base-p digits of alpha",
    Command.GENERATE: "terms floor(p^n alpha), partial sums and Delta check",
    Command.FS: "subset sums FS(B) on [0, N]",
    Command.SUMSET: "A + B or A + t*A on [0, N]",
    Command.GAPS: "gaps of FS(B)",
    Command.DENSITY: "densities of C and C + t*C at three scales",
    Command.RULER: "ruler sequence or the Cantor gap-index correspondence",
    Command.VERIFY_THM24: "C_2 + C_2 covers [0, s_n]",
    Command.WITNESS: "explicit x = u + v with u, v in C_2",
    Command.THM21: "APs in C + (p-1)C through the y-sequence",
    Command.LEMMA23: "AP extraction from a bounded-gap set",
    Command.VDW: "certify W(s, k) by exhaustive search",
    Command.PROP1_CONSTRUCT: "generator set realising a prefix family",
    Command.PROP1_RECOVER: "recover generators from a subset-sum set",
    Command.SHIFT_INVARIANT: "piecewise shift invariance of FS(B)",
}

def run(config: RunConfig) -> Report:
    """Dispatch one command and stamp timing (or strip it for --no-timing)."""
    with stopwatch() as watch:
        report = COMMANDS[config.command](config)
    timing = None if config.no_timing else (report.timing_ms if report.timing_ms is not None else watch.elapsed_ms)
    return report.model_copy(update={"timing_ms": timing})


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="radix p >= 2")
    source = common.add_argument_group("digit source")
    source.add_argument("--alpha", help='rational alpha in (1, 2), e.g. "5/3"')
    source.add_argument("--seed", type=int, help="seed of the random digit stream / bounded-gap set")
    for flag, text in (
        ("--n", "depth / number of terms"),
        ("--N", "bitmap bound"),
        ("--t", "scale t of C + t*C"),
        ("--s", "number of colors"),
        ("--k", "progression length / prefix parameter k"),
        ("--K", "gap bound"),
        ("--m", "size of a random bounded-gap set"),
        ("--x", "integer to decompose"),
        ("--r", "P4 parameter r"),
        ("--level", "discrete Cantor level"),
    ):
        common.add_argument(flag, type=int, help=text)
    common.add_argument("--family", choices=["P1", "P2", "P3", "P4"], help="prefix family")
    common.add_argument("--set", help="comma separated integers")
    common.add_argument("--set2", help="second comma separated set (sumset)")
    common.add_argument("--samples", type=int, default=0, help="sampled witnesses to validate")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], help="report format")
    common.add_argument("--output", help="write the report to this path instead of stdout")
    common.add_argument("--bitmap", help="also write the resulting bitmap (CSLB) to this path")
    common.add_argument("--jobs", type=int, default=settings.JOBS, help="worker processes for sweeps")
    common.add_argument("--no-timing", action="store_true", help="omit timing for byte-stable output")
    common.add_argument(
        "--include-literature",
        action="store_true",
        help="let uncertified van der Waerden values drive targets",
    )
    common.add_argument(
        "--materialize",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="expand the big-integer terms (default depends on the command)",
    )
    common.add_argument("--log-level", help="override LOG_LEVEL")

    parser = argparse.ArgumentParser(
        prog="cantorsums",
        description="Constructions and verifiers for sumsets of Cantor-type integer sequences",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in Command:
        subparsers.add_parser(command.value, parents=[common], help=COMMAND_HELP[command])
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    command = Command(args.command)
    fmt = args.format or (OutputFormat.TEXT.value if command is Command.RULER else OutputFormat.JSON.value)
    return RunConfig(
        command=command,
        p=args.p,
        alpha=args.alpha,
        seed=args.seed,
        n=args.n,
        N=args.N,
        t=args.t,
        s=args.s,
        k=args.k,
        K=args.K,
        m=args.m,
        x=args.x,
        family=args.family,
        r=args.r,
        level=args.level,
        set=parse_int_list(args.set, "--set") if args.set is not None else None,
        set2=parse_int_list(args.set2, "--set2") if args.set2 is not None else None,
        samples=args.samples,
        format=fmt,
        output=args.output,
        jobs=args.jobs,
        no_timing=args.no_timing,
        include_literature=args.include_literature,
        materialize=args.materialize,
        bitmap=args.bitmap,
    )


def _usage_error(message: str, flag: Optional[str], stderr: TextIO) -> int:
    prefix = f"{flag}: " if flag else ""
    stderr.write(f"cantorsums: error: {prefix}{message}\n")
    return 2


def main(argv: Optional[List[str]] = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_level(args.log_level)

    try:
        config = _config_from_args(args)
    except CantorSumsError as e:
        return _usage_error(str(e), e.flag, stderr)
    except ValidationError as e:
        first = e.errors()[0]
        location = first.get("loc") or ()
        flag = f"--{location[0]}" if location else None
        return _usage_error(first.get("msg", str(e)), flag, stderr)

    try:
        report = run(config)
    except CantorSumsError as e:
        logger.debug(f"{config.command.value} rejected: {e}")
        return _usage_error(str(e), e.flag, stderr)

    write_report(report, config.format, config.output, stdout)
    return 0 if report.passed else 1
