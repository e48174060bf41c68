"""Closed-form piecewise tables for the four extremal functions.

Each mode has a guarded case table; points outside every guard come back
with applicable=False and a reason rather than an extrapolated number.
The equal-sizes diagonal (f(m,m,2) = f(m,m,Z) = 5m-3 and
f(m,m,3) = f(m,m,inf+Z) = 9m-7) is honored for every m >= 2 even where a
table's header asks for larger s.

The integer-coloring mid case (s < r <= 2s-2) is established only when
gcd(r, s) > 1; the coprime sub-case is reported as not applicable.  A
separate claim of 6s-4 for coprime sizes with r >= 2s-2 conflicts with the
wide case's 2s+2r-2 once r > 2s-1; it is exposed as its own annotated entry
(coprime_wide_claim) and adjudicated by the search, never folded into
closed_form.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

from .core import Finite, Mode, ProblemSpec, Residues, mode_text


@dataclass(frozen=True)
class FormulaResult:
    value: Optional[int]
    case_label: str
    applicable: bool
    reason: Optional[str] = None


def _ok(value: int, label: str) -> FormulaResult:
    return FormulaResult(value, label, True)


def _na(label: str, reason: str) -> FormulaResult:
    return FormulaResult(None, label, False, reason)


def _k2(s: int, r: int) -> FormulaResult:
    if s == r:
        return _ok(5 * s - 3, "s = r")
    if r <= 2 * s - 2:
        return _ok(4 * s + r - 3, "s < r <= 2s-2")
    return _ok(2 * s + 2 * r - 2, "r > 2s-2")


def _k3(s: int, r: int) -> FormulaResult:
    if r > 3 * s - 3:
        return _ok(3 * s + 3 * r - 4, "r > 3s-3")
    if s == r:
        return _ok(9 * s - 7, "s = r")
    if s < 3:
        return _na(
            "2 = s < r <= 3",
            "three-color table is established for r >= s >= 3 except the "
            "wide case r > 3s-3 and the diagonal s = r",
        )
    threshold = (5 * s - 1) // 3 - 1
    if r <= threshold:
        return _ok(9 * s - 7, "r <= floor((5s-1)/3) - 1")
    if r <= 2 * s - 2:
        return _ok(4 * s + 3 * r - 4, "floor((5s-1)/3) - 1 < r <= 2s-2")
    return _ok(6 * s + 2 * r - 6, "2s-2 < r <= 3s-3")


def _z(s: int, r: int) -> FormulaResult:
    if s == r:
        return _ok(5 * s - 3, "s = r")
    if r > 2 * s - 2:
        return _ok(2 * s + 2 * r - 2, "r > 2s-2")
    g = gcd(r, s)
    h = s // g
    if g == 1:
        return _na(
            "s < r <= 2s-2, gcd(r,s) = 1",
            "mid case is established only for gcd(r,s) > 1; the coprime "
            "sub-case is open here (see coprime_wide_claim for the "
            "conflicting 6s-4 assertion at r >= 2s-2)",
        )
    return _ok(4 * s + max(r, s + h - 1) - 3, "s < r <= 2s-2, gcd(r,s) > 1")


def _zinf(s: int, r: int) -> FormulaResult:
    h = s // gcd(r, s)
    if r > 3 * s - 3:
        return _ok(3 * s + 3 * r - 4, "r > 3s-3")
    if s == r:
        return _ok(9 * s - 7 + h - 1, "s = r")
    if s < 3:
        return _na(
            "2 = s < r <= 3",
            "infinity table is established for r >= s >= 3 except the wide "
            "case r > 3s-3 and the diagonal s = r",
        )
    threshold = (5 * s - 1) // 3 - 1
    if r <= threshold:
        return _ok(9 * s - 7 + h - 1, "r <= floor((5s-1)/3) - 1")
    return _ok(
        3 * s + 2 * r - 3 + min(3 * s - 3, s + r - 1 + h - 1),
        "floor((5s-1)/3) - 1 < r <= 3s-3",
    )


def closed_form(spec: ProblemSpec) -> FormulaResult:
    """Table value for the given sizes and mode, with its case label."""
    s, r = spec.s, spec.r
    if not r >= s >= 2:
        raise ValueError(f"need r >= s >= 2, got s={s}, r={r}")
    mode = spec.mode
    if isinstance(mode, Finite):
        if mode.k == 2:
            return _k2(s, r)
        if mode.k == 3:
            return _k3(s, r)
        return _na(f"k = {mode.k}", "no table for finite palettes beyond 3 colors")
    if isinstance(mode, Residues):
        return _z(s, r)
    return _zinf(s, r)


def coprime_wide_claim(spec: ProblemSpec) -> FormulaResult:
    """The separate 6s-4 assertion for coprime sizes with r >= 2s-2.

    Kept out of closed_form: for r > 2s-1 it contradicts the wide-case
    2s+2r-2, which the search adjudicates (see the adjudicate command).
    """
    if not isinstance(spec.mode, Residues):
        return _na("integer mode only", "claim concerns integer colorings")
    s, r = spec.s, spec.r
    if s >= 3 and gcd(r, s) == 1 and r >= 2 * s - 2:
        label = "coprime, r >= 2s-2"
        if r > 2 * s - 1:
            label += " (conflicts with r > 2s-2 wide case)"
        return _ok(6 * s - 4, label)
    return _na(
        "coprime, r >= 2s-2",
        "claim requires s >= 3, gcd(r,s) = 1 and r >= 2s-2",
    )


# ---------------------------------------------------------------------------
# Atlas rendering
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtlasRow:
    s: int
    r: int
    mode: str
    value: Optional[int]
    case_label: str


def atlas(
    s_values: Iterable[int], r_values: Iterable[int], modes: Sequence[Mode]
) -> list[AtlasRow]:
    """One row per (s, r, mode), ordered by s, then r, then the given mode
    order.  Points with r < s or s < 2 are emitted as not-applicable rows."""
    s_list = sorted(set(s_values))
    r_list = sorted(set(r_values))
    if not s_list or not r_list or not modes:
        raise ValueError("atlas ranges must be nonempty")
    rows: list[AtlasRow] = []
    for s in s_list:
        for r in r_list:
            for mode in modes:
                name = mode_text(mode)
                if r < s or s < 2:
                    rows.append(AtlasRow(s, r, name, None, "requires r >= s >= 2"))
                    continue
                fr = closed_form(ProblemSpec(s, r, mode))
                rows.append(AtlasRow(s, r, name, fr.value, fr.case_label))
    return rows


def atlas_markdown(rows: Sequence[AtlasRow]) -> str:
    lines = ["| s | r | mode | value | case |", "|---:|---:|:---|---:|:---|"]
    for row in rows:
        value = "N/A" if row.value is None else str(row.value)
        lines.append(f"| {row.s} | {row.r} | {row.mode} | {value} | {row.case_label} |")
    return "\n".join(lines) + "\n"


def atlas_csv(rows: Sequence[AtlasRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["s", "r", "mode", "value", "case"])
    for row in rows:
        value = "N/A" if row.value is None else row.value
        writer.writerow([row.s, row.r, row.mode, value, row.case_label])
    return buf.getvalue()
