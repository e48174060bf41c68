"""Command-line surface and the append-only run-record store.

Commands: compute (exhaustive search vs. table), check (decide one
coloring), verify-patterns (the construction gate), oracle (egz / egz3 /
coset), atlas (render the tables), adjudicate (settle the coprime wide-case
conflict and record the verdict).

Exit codes: 0 ok / assertion holds, 1 finding or counterexample, 2 budget
exceeded, 64 usage error.

The store is newline-delimited JSON, one record per line, schema-versioned
and append-only; ZSDIAM_CACHE overrides the default path.  A compute run
whose (s, r, mode, tool version, symmetry-rule version) matches a stored
exact record reuses it instead of searching again.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterator, Optional, Sequence

from . import __version__
from .core import (
    Coloring,
    ColoringParseError,
    InfinityMono,
    MonoColor,
    ProblemSpec,
    format_coloring,
    parse_coloring,
    parse_mode,
)
from .formulas import atlas, atlas_csv, atlas_markdown, closed_form, coprime_wide_claim
from .patterns import builtin_patterns, expand_dual_row, verify_builtin
from .search import SearchLimits, compute_f
from .solver import has_solution
from .zerosum import (
    DEFAULT_ORACLE_BUDGET,
    BudgetExceededError,
    Reading,
    coset_egz_oracle,
    egz_oracle,
    three_color_egz_oracle,
)

SCHEMA_VERSION = 1
SYMMETRY_RULE_VERSION = 1
DEFAULT_STORE = "zsdiam_cache.jsonl"

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_BUDGET = 2
EXIT_USAGE = 64


# ---------------------------------------------------------------------------
# Store
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunRecord:
    command: str
    payload: dict[str, Any]
    s: Optional[int] = None
    r: Optional[int] = None
    mode: Optional[str] = None
    counterexample: Optional[str] = None
    nodes: Optional[int] = None
    elapsed: Optional[float] = None
    schema: int = SCHEMA_VERSION
    tool_version: str = __version__
    symmetry_rule_version: int = SYMMETRY_RULE_VERSION
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @staticmethod
    def from_json(line: str) -> "RunRecord":
        data = json.loads(line)
        return RunRecord(**data)


def store_path(override: str | None = None) -> Path:
    return Path(override or os.environ.get("ZSDIAM_CACHE", DEFAULT_STORE))


def append_record(path: Path, record: RunRecord) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        _lock(fh)
        try:
            fh.write(record.to_json() + "\n")
        finally:
            _unlock(fh)


def _lock(fh) -> None:
    try:
        import fcntl

        fcntl.flock(fh, fcntl.LOCK_EX)
    except (ImportError, OSError):
        pass  # single-writer advisory lock; absent on non-POSIX


def _unlock(fh) -> None:
    try:
        import fcntl

        fcntl.flock(fh, fcntl.LOCK_UN)
    except (ImportError, OSError):
        pass


def iter_records(path: Path) -> Iterator[RunRecord]:
    if not path.exists():
        return
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield RunRecord.from_json(line)


def find_cached_exact(path: Path, s: int, r: int, mode: str) -> Optional[RunRecord]:
    """Latest stored exact compute result for the same problem, tool version
    and symmetry rule."""
    hit: Optional[RunRecord] = None
    for rec in iter_records(path):
        if (
            rec.command == "compute"
            and rec.s == s
            and rec.r == r
            and rec.mode == mode
            and rec.tool_version == __version__
            and rec.symmetry_rule_version == SYMMETRY_RULE_VERSION
            and rec.payload.get("status") == "exact"
        ):
            hit = rec
    return hit


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_range(text: str) -> list[int]:
    """'3..9' or '4' -> list of ints."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _spec_from_args(args) -> ProblemSpec:
    return ProblemSpec(args.s, args.r, parse_mode(args.mode))


def _limits_from_args(args) -> SearchLimits:
    return SearchLimits(
        max_n=args.max_n,
        node_budget=args.node_budget,
        wall_budget=args.wall_budget,
        workers=args.workers,
    )


def _kind_text(kind) -> str:
    if isinstance(kind, MonoColor):
        return f"mono({kind.symbol})"
    if isinstance(kind, InfinityMono):
        return "inf-mono"
    return "zero-sum"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_compute(args) -> int:
    spec = _spec_from_args(args)
    limits = _limits_from_args(args)
    path = store_path(args.store)
    formula = closed_form(spec)

    if not args.no_cache:
        cached = find_cached_exact(path, spec.s, spec.r, spec.mode_name())
        if cached is not None:
            value = cached.payload["value"]
            print(f"f = {value} ({_formula_tag(formula, value)}) [cached]")
            if cached.counterexample is not None:
                print(f"counterexample: {cached.counterexample}")
            return EXIT_OK if _formula_agrees(formula, value) else EXIT_FINDING

    progress = None
    if args.progress:
        t0 = time.monotonic()

        def progress(nodes: int, depth: int, deepest: int) -> None:
            rate = nodes / max(time.monotonic() - t0, 1e-9)
            print(
                f"  ... nodes={nodes} depth={depth} deepest-alive={deepest} "
                f"({rate:,.0f} nodes/s)",
                file=sys.stderr,
            )

    result = compute_f(spec, limits, progress=progress)
    cex_text = (
        format_coloring(result.counterexample, spec)
        if result.counterexample is not None
        else None
    )
    record = RunRecord(
        command="compute",
        payload={
            "status": result.status,
            "value": result.value,
            "deepest_alive": result.deepest_alive,
            "bound": result.bound,
            "formula_value": formula.value,
            "formula_case": formula.case_label,
        },
        s=spec.s,
        r=spec.r,
        mode=spec.mode_name(),
        counterexample=cex_text,
        nodes=result.nodes,
        elapsed=result.elapsed,
    )
    append_record(path, record)

    if result.status == "exact":
        print(f"f = {result.value} ({_formula_tag(formula, result.value)})")
        if cex_text is not None:
            print(f"counterexample (length {result.deepest_alive}): {cex_text}")
        print(f"nodes={result.nodes} elapsed={result.elapsed:.2f}s")
        return EXIT_OK if _formula_agrees(formula, result.value) else EXIT_FINDING
    label = "lower bound only" if result.status == "lower_bound" else "budget exceeded"
    print(f"{label}: certified f >= {result.bound}")
    if cex_text is not None:
        print(f"alive coloring (length {result.deepest_alive}): {cex_text}")
    print(f"nodes={result.nodes} elapsed={result.elapsed:.2f}s")
    return EXIT_BUDGET


def _formula_tag(formula, value) -> str:
    if not formula.applicable:
        return "formula N/A"
    verdict = "MATCH" if formula.value == value else "MISMATCH"
    return f"formula {formula.value}: {verdict}"


def _formula_agrees(formula, value) -> bool:
    return not formula.applicable or formula.value == value


def cmd_check(args) -> int:
    spec = _spec_from_args(args)
    try:
        coloring = parse_coloring(args.coloring, spec)
    except ColoringParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    witness = has_solution(spec, coloring)
    if witness is None:
        print("alive")
        return EXIT_FINDING
    print(
        f"solution: S1={list(witness.s1)} ({_kind_text(witness.kind1)}), "
        f"S2={list(witness.s2)} ({_kind_text(witness.kind2)})"
    )
    return EXIT_OK


def cmd_verify_patterns(args) -> int:
    s_values = _parse_range(args.s_range)
    r_values = _parse_range(args.r_range)
    names = set(args.names.split(",")) if args.names else None
    rows = []
    findings = 0
    incompatible = 0
    for builtin in builtin_patterns():
        if names is not None and builtin.name not in names:
            continue
        for s, r in builtin.admissible(s_values, r_values):
            rep = verify_builtin(builtin, s, r)
            rows.append(rep)
            if rep.status == "finding":
                findings += 1
            elif rep.status == "incompatible":
                incompatible += 1
            marker = {"ok": "OK", "incompatible": "INCOMPATIBLE", "finding": "FINDING"}[
                rep.status
            ]
            detail = ""
            if rep.status == "ok":
                detail = f"length {rep.actual_length}, alive"
            elif rep.status == "incompatible":
                detail = f"rows conflict at position {rep.incompatible.position}"
            else:
                parts = []
                if rep.length_ok is False:
                    parts.append(
                        f"length {rep.actual_length} != expected {rep.expected_length}"
                    )
                if rep.alive is False:
                    parts.append("has a solution")
                detail = "; ".join(parts)
            print(f"{marker:12s} {rep.name:16s} s={s} r={r}  {detail}")
    print(
        f"total: {len(rows)} rows, {findings} findings, "
        f"{incompatible} incompatible"
    )
    append_record(
        store_path(args.store),
        RunRecord(
            command="verify-patterns",
            payload={
                "rows": len(rows),
                "findings": findings,
                "incompatible": incompatible,
                "s_range": s_values,
                "r_range": r_values,
            },
        ),
    )
    return EXIT_FINDING if findings else EXIT_OK


def cmd_oracle(args) -> int:
    try:
        if args.oracle == "egz":
            report = egz_oracle(args.m, args.len, budget=args.budget)
            label = f"egz(m={args.m}, len={args.len})"
        elif args.oracle == "egz3":
            report = three_color_egz_oracle(args.m, budget=args.budget)
            label = f"egz3(m={args.m})"
        else:
            k = args.k if args.k is not None else args.h
            if k is None:
                print("error: coset oracle needs --k or --h", file=sys.stderr)
                return EXIT_USAGE
            report = coset_egz_oracle(args.m, k, Reading(args.reading), budget=args.budget)
            label = f"coset(m={args.m}, k={k}, reading={args.reading})"
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET

    if report.holds:
        print(f"{label}: holds ({report.checked} sequences checked)")
    else:
        cex = ",".join(str(v) for v in report.counterexample)
        print(f"{label}: counterexample {cex}")
    extra: dict[str, Any] = {}
    if hasattr(report, "two_valued_failure") and report.two_valued_failure:
        extra["two_valued_failure"] = list(report.two_valued_failure)
        print(
            "  two-valued failing sequence (hypothesis necessary): "
            + ",".join(str(v) for v in report.two_valued_failure)
        )
    if hasattr(report, "tight") and report.tight:
        extra["tight_failure"] = list(report.tight_failure)
        print(
            "  tight: one element fewer admits the failure "
            + ",".join(str(v) for v in report.tight_failure)
        )
    append_record(
        store_path(args.store),
        RunRecord(
            command=f"oracle-{args.oracle}",
            payload={
                "holds": report.holds,
                "checked": report.checked,
                **extra,
            },
            counterexample=(
                ",".join(str(v) for v in report.counterexample)
                if report.counterexample
                else None
            ),
        ),
    )
    return EXIT_OK if report.holds else EXIT_FINDING


def cmd_atlas(args) -> int:
    modes = [parse_mode(m) for m in args.mode.split(",")]
    rows = atlas(_parse_range(args.s_range), _parse_range(args.r_range), modes)
    if args.format == "md":
        print(atlas_markdown(rows), end="")
    else:
        print(atlas_csv(rows), end="")
    return EXIT_OK


def cmd_adjudicate(args) -> int:
    """Settle the coprime wide-case conflict on the smallest decidable
    instance: both claims computed, the wide-case construction expanded and
    re-checked for aliveness, verdict recorded."""
    instance = None
    for s in range(3, 20):
        for r in range(2 * s, 3 * s + 2):
            from math import gcd

            if gcd(r, s) == 1 and r > 2 * s - 1:
                instance = (s, r)
                break
        if instance:
            break
    assert instance is not None
    s, r = instance
    spec = ProblemSpec(s, r, parse_mode("z"))
    narrow = coprime_wide_claim(spec)
    wide = closed_form(spec)
    builtin = next(b for b in builtin_patterns() if b.name == "z-wide")
    coloring = expand_dual_row(builtin, s, r)
    assert isinstance(coloring, Coloring)
    witness = has_solution(spec, coloring)
    alive = witness is None
    n = len(coloring)
    if alive and n >= narrow.value:
        verdict = (
            f"at (s={s}, r={r}) with gcd 1: the wide-case construction of "
            f"length {n} is alive, so f >= {n + 1}; the coprime claim "
            f"{narrow.value} (= 6s-4) is refuted and the wide-case value "
            f"{wide.value} (= 2s+2r-2) stands"
        )
        refuted = "coprime-6s-4"
    elif alive:
        verdict = (
            f"at (s={s}, r={r}): alive construction of length {n} only shows "
            f"f >= {n + 1}; instance does not separate the claims"
        )
        refuted = None
    else:
        verdict = (
            f"at (s={s}, r={r}): the wide-case construction has a solution; "
            f"no separation obtained at this instance"
        )
        refuted = None
    print(f"conflict: coprime claim {narrow.value} vs wide case {wide.value}")
    print(f"verdict: {verdict}")
    append_record(
        store_path(args.store),
        RunRecord(
            command="adjudicate",
            payload={
                "s": s,
                "r": r,
                "coprime_claim": narrow.value,
                "wide_case": wide.value,
                "construction_length": n,
                "alive": alive,
                "refuted": refuted,
                "verdict": verdict,
            },
            s=s,
            r=r,
            mode="z",
            counterexample=format_coloring(coloring, spec) if alive else None,
        ),
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="zsdiam",
        description=(
            "Exact computation and verification for the extremal two-set "
            "nondecreasing-diameter coloring numbers f(s, r, mode)."
        ),
    )
    common = _Parser(add_help=False)
    common.add_argument(
        "--store",
        default=None,
        help=f"run-record store path (default {DEFAULT_STORE}, env ZSDIAM_CACHE)",
    )
    common.add_argument(
        "--seed", type=int, default=0, help="seed for randomized subcommands"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spec(p) -> None:
        p.add_argument("--s", type=int, required=True)
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--mode", required=True, help="2 | 3 | k:<n> | z | zinf")

    p = sub.add_parser(
        "compute", parents=[common], help="compute f(s, r, mode) by pruned search"
    )
    add_spec(p)
    p.add_argument("--max-n", type=int, default=64)
    p.add_argument("--node-budget", type=int, default=50_000_000)
    p.add_argument("--wall-budget", type=float, default=3600.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser(
        "check", parents=[common], help="decide one coloring (exit 1 when alive)"
    )
    add_spec(p)
    p.add_argument("--coloring", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser(
        "verify-patterns",
        parents=[common],
        help="expand and check every builtin construction",
    )
    p.add_argument("--s-range", default="2..8")
    p.add_argument("--r-range", default="2..8")
    p.add_argument("--names", default=None, help="comma-separated builtin names")
    p.set_defaults(func=cmd_verify_patterns)

    p = sub.add_parser("oracle", help="run the zero-sum enumeration oracles")
    o = p.add_subparsers(dest="oracle", required=True)
    pe = o.add_parser("egz", parents=[common])
    pe.add_argument("--m", type=int, required=True)
    pe.add_argument("--len", type=int, required=True)
    pe.add_argument("--budget", type=int, default=DEFAULT_ORACLE_BUDGET)
    pe.set_defaults(func=cmd_oracle)
    p3 = o.add_parser("egz3", parents=[common])
    p3.add_argument("--m", type=int, required=True)
    p3.add_argument("--budget", type=int, default=DEFAULT_ORACLE_BUDGET)
    p3.set_defaults(func=cmd_oracle)
    pc = o.add_parser("coset", parents=[common])
    pc.add_argument("--m", type=int, required=True)
    pc.add_argument("--k", type=int, default=None)
    pc.add_argument("--h", type=int, default=None, help="alias of --k")
    pc.add_argument(
        "--reading", choices=["stated", "as-used"], default="stated"
    )
    pc.add_argument("--budget", type=int, default=DEFAULT_ORACLE_BUDGET)
    pc.set_defaults(func=cmd_oracle)

    p = sub.add_parser("atlas", parents=[common], help="render the closed-form tables")
    p.add_argument("--s", dest="s_range", required=True, help="e.g. 3..5")
    p.add_argument("--r", dest="r_range", required=True, help="e.g. 3..9")
    p.add_argument("--mode", required=True, help="comma-separated modes")
    p.add_argument("--format", choices=["md", "csv"], default="md")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser(
        "adjudicate",
        parents=[common],
        help="settle the coprime wide-case conflict and record the verdict",
    )
    p.set_defaults(func=cmd_adjudicate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, ColoringParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
