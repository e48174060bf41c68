"""Combinatorial engines: modular subset-sum DP, diameter-extremal valid-set
finders, and brute-force oracles for the zero-sum pigeonhole facts the rest
of the tool leans on.

The subset-sum DP is the workhorse: states are (number of chosen elements,
sum mod modulus), stored as one bitmask of sums per count, with required
"anchor" indices pre-committed.  The diameter finders iterate anchor pairs
(min, max) and ask the DP about the inner elements; the oracles enumerate
value multisets (zero-sum existence is order-invariant) and report
counterexamples in nondecreasing order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Iterable, Sequence, Union

from .core import INF_CODE, Coloring, Finite, ProblemSpec, Residues

DEFAULT_ORACLE_BUDGET = 2_000_000  # candidate sequences per oracle run


class BudgetExceededError(RuntimeError):
    """An enumeration or search would exceed its configured budget."""

    def __init__(self, message: str, budget: int, required: int | None = None):
        super().__init__(message)
        self.budget = budget
        self.required = required


# ---------------------------------------------------------------------------
# Validity kinds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mono:
    """Set is monochromatic (any symbol)."""


@dataclass(frozen=True)
class ZeroSumMod:
    """Set consists of integer-valued positions whose values sum to 0 mod m."""

    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")


@dataclass(frozen=True)
class InfinityMonoOrZeroSum:
    """Set is either INF-monochromatic or zero-sum mod m."""

    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")


ValidityKind = Union[Mono, ZeroSumMod, InfinityMonoOrZeroSum]


def kinds_for(spec: ProblemSpec) -> tuple[ValidityKind, ValidityKind]:
    """Validity kinds of the first (size s) and second (size r) set."""
    if isinstance(spec.mode, Finite):
        return Mono(), Mono()
    if isinstance(spec.mode, Residues):
        return ZeroSumMod(spec.s), ZeroSumMod(spec.r)
    return InfinityMonoOrZeroSum(spec.s), InfinityMonoOrZeroSum(spec.r)


@dataclass(frozen=True)
class DiamResult:
    diameter: int
    positions: tuple[int, ...]


# ---------------------------------------------------------------------------
# Zero-sum subset DP
# ---------------------------------------------------------------------------


def _rotate(mask: int, shift: int, modulus: int, full: int) -> int:
    """Shift every set sum-bit by `shift` (already reduced mod modulus)."""
    if shift == 0:
        return mask
    return ((mask << shift) | (mask >> (modulus - shift))) & full


def exists_zero_sum_subset(
    values: Sequence[int],
    m: int,
    modulus: int,
    anchors: Iterable[int] = (),
) -> bool:
    """Is there an m-element index subset, containing all 1-based `anchors`,
    whose value-sum is 0 mod modulus?

    DP over (count <= m, sum mod modulus); agrees with exhaustive subset
    enumeration (property-tested).  An empty sequence with m > 0 is False.
    """
    values = list(values)
    n = len(values)
    anchor_set = frozenset(anchors)
    if modulus < 1:
        raise ValueError(f"modulus must be >= 1, got {modulus}")
    for a in anchor_set:
        if not 1 <= a <= n:
            raise ValueError(f"anchor {a} outside 1..{n}")
    if len(anchor_set) > m:
        raise ValueError(f"{len(anchor_set)} anchors exceed subset size {m}")
    if m > n:
        return False

    need = m - len(anchor_set)
    committed = sum(values[a - 1] for a in anchor_set) % modulus
    target = (-committed) % modulus
    full = (1 << modulus) - 1
    masks = [0] * (need + 1)
    masks[0] = 1
    if masks[need] >> target & 1:
        return True
    top = 0
    for idx, v in enumerate(values, start=1):
        if idx in anchor_set:
            continue
        shift = v % modulus
        hi = min(top, need - 1)
        for c in range(hi, -1, -1):
            if masks[c]:
                masks[c + 1] |= _rotate(masks[c], shift, modulus, full)
        top = min(top + 1, need)
        if masks[need] >> target & 1:
            return True
    return False


# ---------------------------------------------------------------------------
# Diameter-extremal valid sets
# ---------------------------------------------------------------------------


def _occurrences(codes: list[int], lo: int, hi: int) -> dict[int, list[int]]:
    occ: dict[int, list[int]] = {}
    for pos in range(lo, hi + 1):
        occ.setdefault(codes[pos - 1], []).append(pos)
    return occ


def _mono_min(
    codes: list[int], m: int, max_pos: int, only_code: int | None
) -> tuple[int, tuple[int, ...]] | None:
    best: tuple[int, tuple[int, ...]] | None = None
    for code, occ in _occurrences(codes, 1, max_pos).items():
        if only_code is not None and code != only_code:
            continue
        for t in range(len(occ) - m + 1):
            window = tuple(occ[t : t + m])
            cand = (window[-1] - window[0], window)
            if best is None or cand < best:
                best = cand
    return best


def _mono_max(
    codes: list[int], m: int, min_pos: int, only_code: int | None
) -> tuple[int, tuple[int, ...]] | None:
    # (-diameter, positions) ordering gives max diameter with lex-least ties.
    best: tuple[int, tuple[int, ...]] | None = None
    n = len(codes)
    for code, occ in _occurrences(codes, min_pos, n).items():
        if only_code is not None and code != only_code:
            continue
        if len(occ) < m:
            continue
        positions = tuple(occ[: m - 1] + [occ[-1]])
        cand = (-(occ[-1] - occ[0]), positions)
        if best is None or cand < best:
            best = cand
    if best is None:
        return None
    return (-best[0], best[1])


def _window_feasible(codes: list[int], i: int, j: int, m: int, modulus: int) -> bool:
    """Can an m-set with min i, max j (both integer-valued) be zero-sum?"""
    inner = [v for v in codes[i : j - 1] if v >= 0]
    seq = [codes[i - 1]] + inner + [codes[j - 1]]
    if len(seq) < m:
        return False
    return exists_zero_sum_subset(seq, m, modulus, anchors=(1, len(seq)))


def _extract_lex_least(
    codes: list[int], i: int, j: int, m: int, modulus: int
) -> tuple[int, ...]:
    """Lexicographically least zero-sum m-set anchored at (i, j); the window
    must already be feasible."""
    inner_pos = [p for p in range(i + 1, j) if codes[p - 1] >= 0]
    need = m - 2
    target = (-(codes[i - 1] + codes[j - 1])) % modulus
    full = (1 << modulus) - 1
    k = len(inner_pos)
    # reach[t][c]: sums achievable with exactly c elements of inner_pos[t:]
    reach = [[0] * (need + 1) for _ in range(k + 1)]
    reach[k][0] = 1
    for t in range(k - 1, -1, -1):
        v = codes[inner_pos[t] - 1] % modulus
        nxt = reach[t + 1]
        row = reach[t]
        row[0] = nxt[0]
        for c in range(1, need + 1):
            row[c] = nxt[c] | _rotate(nxt[c - 1], v, modulus, full)
    chosen: list[int] = []
    acc = 0
    left = need
    for t in range(k):
        if left == 0:
            break
        v = codes[inner_pos[t] - 1] % modulus
        want = (target - acc - v) % modulus
        if reach[t + 1][left - 1] >> want & 1:
            chosen.append(inner_pos[t])
            acc = (acc + v) % modulus
            left -= 1
    assert left == 0, "extraction called on infeasible window"
    return tuple([i] + chosen + [j])


def _zero_sum_min(
    codes: list[int], m: int, modulus: int, max_pos: int
) -> tuple[int, tuple[int, ...]] | None:
    if m == 1:
        for q in range(1, max_pos + 1):
            v = codes[q - 1]
            if v >= 0 and v % modulus == 0:
                return (0, (q,))
        return None
    for d in range(m - 1, max_pos):
        for i in range(1, max_pos - d + 1):
            j = i + d
            if codes[i - 1] < 0 or codes[j - 1] < 0:
                continue
            if _window_feasible(codes, i, j, m, modulus):
                return (d, _extract_lex_least(codes, i, j, m, modulus))
    return None


def _zero_sum_max(
    codes: list[int], m: int, modulus: int, min_pos: int
) -> tuple[int, tuple[int, ...]] | None:
    n = len(codes)
    if m == 1:
        for q in range(min_pos, n + 1):
            v = codes[q - 1]
            if v >= 0 and v % modulus == 0:
                return (0, (q,))
        return None
    for d in range(n - min_pos, m - 2, -1):
        for i in range(min_pos, n - d + 1):
            j = i + d
            if codes[i - 1] < 0 or codes[j - 1] < 0:
                continue
            if _window_feasible(codes, i, j, m, modulus):
                return (d, _extract_lex_least(codes, i, j, m, modulus))
    return None


def _best_of(
    cands: list[tuple[int, tuple[int, ...]] | None], maximize: bool
) -> DiamResult | None:
    live = [c for c in cands if c is not None]
    if not live:
        return None
    if maximize:
        best = min(live, key=lambda c: (-c[0], c[1]))
    else:
        best = min(live)
    return DiamResult(best[0], best[1])


def min_diam_valid(
    coloring: Coloring, m: int, kind: ValidityKind, max_pos: int
) -> DiamResult | None:
    """A minimum-diameter m-element set S with max(S) <= max_pos satisfying
    `kind`; ties broken by lexicographically least position sequence."""
    n = len(coloring)
    if not 1 <= max_pos <= n:
        raise ValueError(f"max_pos {max_pos} outside 1..{n}")
    if m < 1:
        raise ValueError("set size must be >= 1")
    codes = coloring.codes()
    cands: list[tuple[int, tuple[int, ...]] | None] = []
    if isinstance(kind, Mono):
        cands.append(_mono_min(codes, m, max_pos, None))
    elif isinstance(kind, ZeroSumMod):
        cands.append(_zero_sum_min(codes, m, kind.modulus, max_pos))
    else:
        cands.append(_mono_min(codes, m, max_pos, INF_CODE))
        cands.append(_zero_sum_min(codes, m, kind.modulus, max_pos))
    return _best_of(cands, maximize=False)


def max_diam_valid(
    coloring: Coloring, m: int, kind: ValidityKind, min_pos: int
) -> DiamResult | None:
    """A maximum-diameter m-element set S with min(S) >= min_pos satisfying
    `kind`; ties broken by lexicographically least position sequence."""
    n = len(coloring)
    if not 1 <= min_pos <= n:
        raise ValueError(f"min_pos {min_pos} outside 1..{n}")
    if m < 1:
        raise ValueError("set size must be >= 1")
    codes = coloring.codes()
    cands: list[tuple[int, tuple[int, ...]] | None] = []
    if isinstance(kind, Mono):
        cands.append(_mono_max(codes, m, min_pos, None))
    elif isinstance(kind, ZeroSumMod):
        cands.append(_zero_sum_max(codes, m, kind.modulus, min_pos))
    else:
        cands.append(_mono_max(codes, m, min_pos, INF_CODE))
        cands.append(_zero_sum_max(codes, m, kind.modulus, min_pos))
    return _best_of(cands, maximize=True)


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EgzReport:
    holds: bool
    counterexample: tuple[int, ...] | None
    checked: int


@dataclass(frozen=True)
class ThreeColorReport:
    holds: bool
    counterexample: tuple[int, ...] | None
    # a 2-valued sequence of the same length with no zero-sum m-subset,
    # demonstrating the >=3-distinct-values hypothesis cannot be dropped
    two_valued_failure: tuple[int, ...] | None
    checked: int


class Reading(str, Enum):
    STATED = "stated"
    AS_USED = "as-used"


@dataclass(frozen=True)
class CosetReport:
    reading: Reading
    holds: bool
    counterexample: tuple[int, ...] | None
    tight: bool  # a failing sequence exists when the length drops by one
    tight_failure: tuple[int, ...] | None
    checked: int


def _guard_budget(count: int, budget: int, what: str) -> None:
    if count > budget:
        raise BudgetExceededError(
            f"{what}: {count} sequences exceed budget {budget}", budget, count
        )


def egz_oracle(
    m: int, length: int, budget: int = DEFAULT_ORACLE_BUDGET
) -> EgzReport:
    """Does every length-`length` sequence over Z_m contain an m-subset with
    zero sum mod m?  Lexicographically least counterexample otherwise.

    Enumerates multisets (nondecreasing sequences): zero-sum existence is
    order-invariant.
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if length < m:
        raise ValueError(f"length {length} must be >= m = {m}")
    count = comb(length + m - 1, m - 1)
    _guard_budget(count, budget, f"egz(m={m}, length={length})")
    checked = 0
    for seq in itertools.combinations_with_replacement(range(m), length):
        checked += 1
        if not exists_zero_sum_subset(seq, m, m):
            return EgzReport(False, seq, checked)
    return EgzReport(True, None, checked)


def three_color_egz_oracle(
    m: int, budget: int = DEFAULT_ORACLE_BUDGET
) -> ThreeColorReport:
    """Does every length-(2m-2) sequence over Z_m using >= 3 distinct values
    contain an m-subset with zero sum mod m?  Also exhibits a failing
    2-valued sequence when one exists."""
    if m < 3:
        raise ValueError(f"m must be >= 3, got {m}")
    length = 2 * m - 2
    count = comb(length + m - 1, m - 1)
    _guard_budget(count, budget, f"three-color egz(m={m})")
    two_valued_failure: tuple[int, ...] | None = None
    checked = 0
    for seq in itertools.combinations_with_replacement(range(m), length):
        checked += 1
        distinct = len(set(seq))
        has = exists_zero_sum_subset(seq, m, m)
        if distinct >= 3:
            if not has:
                return ThreeColorReport(False, seq, two_valued_failure, checked)
        elif not has and two_valued_failure is None:
            two_valued_failure = seq
    return ThreeColorReport(True, None, two_valued_failure, checked)


def _coset_values(m: int, h: int) -> list[list[int]]:
    """The cosets of the order-h subgroup of Z_m, each sorted ascending."""
    step = m // h
    return [[a + t * step for t in range(h)] for a in range(step)]


def coset_egz_oracle(
    m: int,
    k: int,
    reading: Reading | str = Reading.STATED,
    budget: int = DEFAULT_ORACLE_BUDGET,
) -> CosetReport:
    """The refined pigeonhole claim for divisor k of m, in two readings.

    STATED: every length-(m+k-1) sequence over Z_m has m elements whose sum
    is 0 mod k.  AS_USED: every length-(m+k-1) sequence drawn from a single
    coset of the order-k subgroup of Z_m has m elements whose sum is 0 mod m
    (here k plays the role usually written h).  Both searches also probe
    tightness: a failing sequence one element shorter.
    """
    reading = Reading(reading)
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if k < 1 or m % k != 0:
        raise ValueError(f"k must divide m, got m={m}, k={k}")

    def scan(length: int) -> tuple[tuple[int, ...] | None, int]:
        """First failing sequence of the given length, or None."""
        checked = 0
        if reading is Reading.STATED:
            pools = [list(range(m))]
            modulus = k
        else:
            pools = _coset_values(m, k)
            modulus = m
        total = sum(comb(length + len(p) - 1, len(p) - 1) for p in pools)
        _guard_budget(total, budget, f"coset egz(m={m}, k={k}, len={length})")
        for pool in pools:
            for seq in itertools.combinations_with_replacement(pool, length):
                checked += 1
                if length < m or not exists_zero_sum_subset(seq, m, modulus):
                    return seq, checked
        return None, checked

    fail, checked_main = scan(m + k - 1)
    tight_failure, checked_tight = (
        scan(m + k - 2) if m + k - 2 >= 0 else (None, 0)
    )
    return CosetReport(
        reading=reading,
        holds=fail is None,
        counterexample=fail,
        tight=tight_failure is not None,
        tight_failure=tight_failure,
        checked=checked_main + checked_tight,
    )
