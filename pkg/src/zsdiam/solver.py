"""Solution detection: batch decision with witness extraction, and the
incremental push/pop engine the exhaustive search drives.

Both rest on the same split-point idea.  Let A[p] be the minimum diameter of
a valid first set contained in [1, p] and B[p] the maximum diameter of a
valid second set contained in [p, n].  A solution exists iff some p has
A[p] <= B[p+1]: the first set ends at or before p, the second starts after,
and only the extremal diameters matter.  A is nonincreasing and B[.]
(as a suffix maximum) nonincreasing in its argument, so both profiles are
cheap to maintain.

The batch decider computes full profiles with one anchored subset-sum DP
sweep per position.  The incremental SolverState instead extends A by one
entry per push and tests only the genuinely new opportunities: second sets
whose maximum is the pushed position.  The two are implemented separately
and cross-checked in the tests (along with a brute-force enumeration
oracle); the search trusts the incremental engine but re-certifies its
output with the batch one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import (
    INF,
    INF_CODE,
    Coloring,
    Finite,
    InfinityMono,
    InfinityResidues,
    MonoColor,
    ProblemSpec,
    Symbol,
    Witness,
    WitnessKind,
    ZeroSum,
    symbol_code,
)
from .zerosum import kinds_for, max_diam_valid, min_diam_valid


# ---------------------------------------------------------------------------
# Batch profiles
# ---------------------------------------------------------------------------


def _closest_zero_sum_anchor(
    codes: list[int], i: int, size: int, modulus: int
) -> int | None:
    """Min diameter of a zero-sum `size`-set with max exactly i, or None.

    Walks candidate minima q = i-1 .. 1; the DP mask accumulates the
    integer-valued positions strictly between q and i.
    """
    vi = codes[i - 1] % modulus
    need = size - 2
    full = (1 << modulus) - 1
    masks = [0] * (need + 1)
    masks[0] = 1
    top = 0
    for j in range(i - 1, 0, -1):
        v = codes[j - 1]
        if v < 0:
            continue
        v %= modulus
        if masks[need] >> ((-vi - v) % modulus) & 1:
            return i - j
        hi = min(top, need - 1)
        for c in range(hi, -1, -1):
            if masks[c]:
                masks[c + 1] |= _rot(masks[c], v, modulus, full)
        top = min(top + 1, need)
    return None


def _farthest_zero_sum_anchor(
    codes: list[int], q: int, size: int, modulus: int
) -> int | None:
    """Max diameter of a zero-sum `size`-set with min exactly q, or None."""
    n = len(codes)
    vq = codes[q - 1] % modulus
    need = size - 2
    full = (1 << modulus) - 1
    masks = [0] * (need + 1)
    masks[0] = 1
    top = 0
    best: int | None = None
    for j in range(q + 1, n + 1):
        v = codes[j - 1]
        if v < 0:
            continue
        v %= modulus
        if masks[need] >> ((-vq - v) % modulus) & 1:
            best = j - q
        hi = min(top, need - 1)
        for c in range(hi, -1, -1):
            if masks[c]:
                masks[c + 1] |= _rot(masks[c], v, modulus, full)
        top = min(top + 1, need)
    return best


def _rot(mask: int, shift: int, modulus: int, full: int) -> int:
    if shift == 0:
        return mask
    return ((mask << shift) | (mask >> (modulus - shift))) & full


def _min_none(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return a if a <= b else b


def _first_set_profile(spec: ProblemSpec, codes: list[int]) -> list[Optional[int]]:
    """A[p] for p in 0..n: min diameter of a valid size-s set within [1, p]."""
    n = len(codes)
    s = spec.s
    finite = isinstance(spec.mode, Finite)
    inf_mode = isinstance(spec.mode, InfinityResidues)
    A: list[Optional[int]] = [None] * (n + 1)
    occ: dict[int, list[int]] = {}
    best: int | None = None
    for i in range(1, n + 1):
        c = codes[i - 1]
        lst = occ.setdefault(c, [])
        lst.append(i)
        d: int | None = None
        if finite:
            if len(lst) >= s:
                d = i - lst[-s]
        else:
            if c == INF_CODE:
                if inf_mode and len(lst) >= s:
                    d = i - lst[-s]
            else:
                d = _closest_zero_sum_anchor(codes, i, s, spec.s)
        best = _min_none(best, d)
        A[i] = best
    return A


def _second_set_profile(spec: ProblemSpec, codes: list[int]) -> list[Optional[int]]:
    """B[p] for p in 1..n+1: max diameter of a valid size-r set within [p, n]
    (B[n+1] is None)."""
    n = len(codes)
    r = spec.r
    finite = isinstance(spec.mode, Finite)
    inf_mode = isinstance(spec.mode, InfinityResidues)
    d2: list[Optional[int]] = [None] * (n + 2)
    occ: dict[int, list[int]] = {}
    for i in range(1, n + 1):
        occ.setdefault(codes[i - 1], []).append(i)
    for code, lst in occ.items():
        if code == INF_CODE and not inf_mode:
            continue
        if finite or code == INF_CODE:
            for idx in range(len(lst) - r + 1):
                q = lst[idx]
                d2[q] = max(d2[q] or 0, lst[-1] - q)
    if not finite:
        for q in range(1, n + 1):
            if codes[q - 1] >= 0:
                d = _farthest_zero_sum_anchor(codes, q, r, spec.r)
                if d is not None:
                    d2[q] = max(d2[q] if d2[q] is not None else -1, d)
    B: list[Optional[int]] = [None] * (n + 2)
    run: int | None = None
    for p in range(n, 0, -1):
        if d2[p] is not None:
            run = d2[p] if run is None else max(run, d2[p])
        B[p] = run
    return B


def _witness_kind(spec: ProblemSpec, coloring: Coloring, positions: tuple[int, ...]) -> WitnessKind:
    first = coloring.at(positions[0])
    if isinstance(spec.mode, Finite):
        return MonoColor(first)
    if isinstance(spec.mode, InfinityResidues) and first is INF:
        return InfinityMono()
    return ZeroSum()


def has_solution(spec: ProblemSpec, coloring: Coloring) -> Witness | None:
    """Decide whether the coloring admits a solution; return a witness if so.

    The witness uses the smallest split point, with the diameter finders'
    lexicographic tie-break; it always passes validate_witness.
    """
    coloring.check_mode(spec)
    n = len(coloring)
    if n < spec.s + spec.r:
        return None
    codes = coloring.codes()
    A = _first_set_profile(spec, codes)
    B = _second_set_profile(spec, codes)
    kind1, kind2 = kinds_for(spec)
    for p in range(1, n):
        a, b = A[p], B[p + 1]
        if a is not None and b is not None and a <= b:
            res1 = min_diam_valid(coloring, spec.s, kind1, max_pos=p)
            res2 = max_diam_valid(coloring, spec.r, kind2, min_pos=p + 1)
            assert res1 is not None and res1.diameter == a, "profile/finder mismatch"
            assert res2 is not None and res2.diameter == b, "profile/finder mismatch"
            return Witness(
                res1.positions,
                res2.positions,
                _witness_kind(spec, coloring, res1.positions),
                _witness_kind(spec, coloring, res2.positions),
            )
    return None


# ---------------------------------------------------------------------------
# Incremental engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrefixProfile:
    """Read-only view of the incremental first-set profile: entry p is the
    minimum diameter of a valid size-s set with max <= p (None if none)."""

    entries: tuple[Optional[int], ...]


class PopOnEmptyError(IndexError):
    pass


class SolverState:
    """Single-owner mutable prefix with O(prefix) push and O(1) pop.

    push_symbol returns True as soon as the prefix contains a solution; the
    flag is sticky until the position that created it is popped.  Not
    thread-safe; give each search worker its own instance.
    """

    __slots__ = (
        "spec",
        "_codes",
        "_occ",
        "_profile",
        "_found_at",
        "_finite",
        "_inf_mode",
        "_s",
        "_r",
        "_full_r",
    )

    def __init__(self, spec: ProblemSpec) -> None:
        self.spec = spec
        self._codes: list[int] = []
        self._occ: dict[int, list[int]] = {}
        self._profile: list[Optional[int]] = [None]  # index p for p in 0..depth
        self._found_at: int | None = None
        self._finite = isinstance(spec.mode, Finite)
        self._inf_mode = isinstance(spec.mode, InfinityResidues)
        self._s = spec.s
        self._r = spec.r
        self._full_r = (1 << spec.r) - 1

    @property
    def depth(self) -> int:
        return len(self._codes)

    @property
    def solution_found(self) -> bool:
        return self._found_at is not None

    def profile(self) -> PrefixProfile:
        return PrefixProfile(tuple(self._profile))

    def codes(self) -> tuple[int, ...]:
        return tuple(self._codes)

    def coloring(self) -> Coloring:
        return Coloring(INF if c == INF_CODE else c for c in self._codes)

    def snapshot(self) -> tuple:
        """Hashable full-state view; push then pop restores it exactly."""
        return (tuple(self._codes), tuple(self._profile), self._found_at)

    # -- mutation ----------------------------------------------------------

    def push_symbol(self, sym: Symbol) -> bool:
        if not self.spec.symbol_ok(sym):
            raise ValueError(f"symbol {sym!r} invalid for mode {self.spec.mode_name()}")
        code = symbol_code(sym)
        codes = self._codes
        codes.append(code)
        i = len(codes)
        lst = self._occ.setdefault(code, [])
        lst.append(i)

        s = self._s
        d: int | None = None
        if self._finite:
            if len(lst) >= s:
                d = i - lst[-s]
        else:
            if code == INF_CODE:
                if len(lst) >= s:
                    d = i - lst[-s]
            else:
                d = _closest_zero_sum_anchor(codes, i, s, s)
        prev = self._profile[-1]
        self._profile.append(_min_none(prev, d))

        if self._found_at is None and i >= s + self._r and self._new_solution(i, code):
            self._found_at = i
        return self._found_at is not None

    def pop_symbol(self) -> None:
        if not self._codes:
            raise PopOnEmptyError("pop on empty solver state")
        i = len(self._codes)
        code = self._codes.pop()
        self._occ[code].pop()
        self._profile.pop()
        if self._found_at == i:
            self._found_at = None

    # -- solution scan for second sets ending at the new position ----------

    def _new_solution(self, i: int, code: int) -> bool:
        r = self._r
        profile = self._profile
        if self._finite or code == INF_CODE:
            # second set ending at i must be monochromatic in Delta(i)
            lst = self._occ[code]
            if len(lst) >= r:
                for idx in range(len(lst) - r + 1):
                    q = lst[idx]
                    a = profile[q - 1]
                    if a is not None and a <= i - q:
                        return True
            return False
        # integer-valued position: zero-sum second sets with max = i
        codes = self._codes
        modulus = r
        vi = code % modulus
        need = r - 2
        full = self._full_r
        masks = [0] * (need + 1)
        masks[0] = 1
        top = 0
        for j in range(i - 1, 0, -1):
            v = codes[j - 1]
            if v < 0:
                continue
            v %= modulus
            a = profile[j - 1]
            if (
                a is not None
                and a <= i - j
                and masks[need] >> ((-vi - v) % modulus) & 1
            ):
                return True
            hi = min(top, need - 1)
            for c in range(hi, -1, -1):
                if masks[c]:
                    masks[c + 1] |= _rot(masks[c], v, modulus, full)
            top = min(top + 1, need)
        return False
