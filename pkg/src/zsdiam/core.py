"""Domain vocabulary: problem specs, colorings, witnesses, selector utilities.

A problem instance asks, for set sizes r >= s >= 2 and a coloring mode,
whether a coloring of the positions 1..n admits a *solution*: two position
sets S1, S2 with |S1| = s, |S2| = r, S1 entirely before S2
(max(S1) < min(S2)), diam(S1) <= diam(S2), and each set "valid" for the
mode -- monochromatic for finite colorings, zero-sum (mod s for S1, mod r
for S2) for residue colorings, and either infinity-monochromatic or
zero-sum when the extra infinity color is allowed.

Everything in this module is an immutable value; positions are 1-indexed
throughout, and integer colorings are represented by residues mod
L = lcm(s, r) (two integers congruent mod L are indistinguishable to every
zero-sum condition we ever evaluate).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, Sequence, Union


class InfinityType:
    """Singleton for the extra color that is not an integer residue."""

    _instance: "InfinityType | None" = None

    def __new__(cls) -> "InfinityType":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):  # pickling must preserve the singleton
        return (InfinityType, ())


INF = InfinityType()

Symbol = Union[int, InfinityType]

# Internal integer encoding of symbols used by the solver hot path.
INF_CODE = -1


def symbol_code(sym: Symbol) -> int:
    return INF_CODE if sym is INF else sym


def code_symbol(code: int) -> Symbol:
    return INF if code == INF_CODE else code


# ---------------------------------------------------------------------------
# Coloring modes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Finite:
    """Colorings into a fixed palette {0, .., k-1}; sets qualify by being
    monochromatic."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"finite palette needs k >= 2, got {self.k}")


@dataclass(frozen=True)
class Residues:
    """Integer colorings, stored as residues mod lcm(s, r); sets qualify by
    being zero-sum (mod s for the first set, mod r for the second)."""


@dataclass(frozen=True)
class InfinityResidues:
    """Residue colorings plus the extra color INF; sets qualify by being
    INF-monochromatic or zero-sum."""


Mode = Union[Finite, Residues, InfinityResidues]


def mode_text(mode: Mode) -> str:
    """The CLI spelling of a mode: 2, 3, k:<n>, z, or zinf."""
    if isinstance(mode, Finite):
        return str(mode.k) if mode.k in (2, 3) else f"k:{mode.k}"
    if isinstance(mode, Residues):
        return "z"
    return "zinf"


def parse_mode(text: str) -> Mode:
    """Inverse of mode_text."""
    text = text.strip().lower()
    if text == "z":
        return Residues()
    if text == "zinf":
        return InfinityResidues()
    if text.startswith("k:"):
        return Finite(int(text[2:]))
    if text.isdigit():
        return Finite(int(text))
    raise ValueError(f"unknown mode {text!r} (expected 2, 3, k:<n>, z, or zinf)")


@dataclass(frozen=True)
class ProblemSpec:
    """Set sizes and mode, plus the derived constants everything else uses.

    g = gcd(r, s), h = s // g, L = lcm(s, r), delta = max(0, r - (2s - 2)).
    """

    s: int
    r: int
    mode: Mode

    def __post_init__(self) -> None:
        if not (self.r >= self.s >= 2):
            raise ValueError(f"need r >= s >= 2, got s={self.s}, r={self.r}")

    @property
    def g(self) -> int:
        return gcd(self.r, self.s)

    @property
    def h(self) -> int:
        return self.s // self.g

    @property
    def lcm(self) -> int:
        return self.s * self.r // self.g

    @property
    def delta(self) -> int:
        return max(0, self.r - (2 * self.s - 2))

    def alphabet(self) -> tuple[Symbol, ...]:
        """All symbols a coloring under this spec may use, in branching order
        (ascending values, INF last)."""
        if isinstance(self.mode, Finite):
            return tuple(range(self.mode.k))
        if isinstance(self.mode, Residues):
            return tuple(range(self.lcm))
        return tuple(range(self.lcm)) + (INF,)

    def symbol_ok(self, sym: Symbol) -> bool:
        if sym is INF:
            return isinstance(self.mode, InfinityResidues)
        if not isinstance(sym, int) or sym < 0:
            return False
        if isinstance(self.mode, Finite):
            return sym < self.mode.k
        return sym < self.lcm

    def mode_name(self) -> str:
        return mode_text(self.mode)


# ---------------------------------------------------------------------------
# Colorings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Coloring:
    """A finite sequence of symbols, logically indexed 1..n."""

    symbols: tuple[Symbol, ...]

    def __init__(self, symbols: Iterable[Symbol] = ()) -> None:
        object.__setattr__(self, "symbols", tuple(symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self.symbols)

    def at(self, pos: int) -> Symbol:
        """Symbol at 1-indexed position pos."""
        if not 1 <= pos <= len(self.symbols):
            raise IndexError(f"position {pos} outside 1..{len(self.symbols)}")
        return self.symbols[pos - 1]

    def codes(self) -> list[int]:
        """Internal integer encoding (INF -> -1), 0-indexed."""
        return [symbol_code(s) for s in self.symbols]

    def check_mode(self, spec: ProblemSpec) -> None:
        for i, sym in enumerate(self.symbols, start=1):
            if not spec.symbol_ok(sym):
                raise ValueError(
                    f"symbol {sym!r} at position {i} not allowed in mode "
                    f"{spec.mode_name()}"
                )


# ---------------------------------------------------------------------------
# Witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonoColor:
    """The set is constant with this symbol."""

    symbol: Symbol


@dataclass(frozen=True)
class ZeroSum:
    """The set's values sum to 0 modulo its size requirement."""


@dataclass(frozen=True)
class InfinityMono:
    """The set is constant with the INF color."""


WitnessKind = Union[MonoColor, ZeroSum, InfinityMono]


def diam(positions: Sequence[int]) -> int:
    """max - min of a nonempty position set; a singleton has diameter 0."""
    return max(positions) - min(positions)


@dataclass(frozen=True)
class Witness:
    """A concrete (S1, S2) pair offered as a solution, with the reason each
    set is claimed to qualify."""

    s1: tuple[int, ...]
    s2: tuple[int, ...]
    kind1: WitnessKind
    kind2: WitnessKind

    def __init__(
        self,
        s1: Iterable[int],
        s2: Iterable[int],
        kind1: WitnessKind,
        kind2: WitnessKind,
    ) -> None:
        object.__setattr__(self, "s1", tuple(sorted(set(s1))))
        object.__setattr__(self, "s2", tuple(sorted(set(s2))))
        object.__setattr__(self, "kind1", kind1)
        object.__setattr__(self, "kind2", kind2)


class InvalidWitnessError(ValueError):
    """A witness refers to positions outside the coloring (distinct from a
    witness that merely fails the conditions)."""


def _kind_holds(
    spec: ProblemSpec,
    coloring: Coloring,
    positions: tuple[int, ...],
    kind: WitnessKind,
    modulus: int,
) -> bool:
    syms = [coloring.at(p) for p in positions]
    if isinstance(kind, MonoColor):
        if not isinstance(spec.mode, Finite):
            return False
        return all(s == kind.symbol for s in syms)
    if isinstance(kind, InfinityMono):
        if not isinstance(spec.mode, InfinityResidues):
            return False
        return all(s is INF for s in syms)
    # ZeroSum
    if isinstance(spec.mode, Finite):
        return False
    if any(s is INF for s in syms):
        return False
    return sum(syms) % modulus == 0


def validate_witness(spec: ProblemSpec, coloring: Coloring, w: Witness) -> bool:
    """Check conditions (a)-(d) of the solution definition for the mode.

    Independent of how the witness was produced.  Raises
    InvalidWitnessError if any position lies outside 1..n; returns False
    (never raises) when the positions are in range but some condition
    fails.
    """
    n = len(coloring)
    for p in w.s1 + w.s2:
        if not 1 <= p <= n:
            raise InvalidWitnessError(f"position {p} outside 1..{n}")
    if len(w.s1) != spec.s or len(w.s2) != spec.r:
        return False
    if max(w.s1) >= min(w.s2):
        return False
    if diam(w.s1) > diam(w.s2):
        return False
    if not _kind_holds(spec, coloring, w.s1, w.kind1, spec.s):
        return False
    if not _kind_holds(spec, coloring, w.s2, w.kind2, spec.r):
        return False
    return True


# ---------------------------------------------------------------------------
# Occurrence selectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FirstRange:
    """The i-th through j-th occurrences counted from the front."""

    i: int
    j: int


@dataclass(frozen=True)
class LastRange:
    """The i-th through j-th occurrences counted from the back."""

    i: int
    j: int


Selector = Union[FirstRange, LastRange]


class NotEnoughOccurrences(ValueError):
    def __init__(self, have: int, need: int) -> None:
        self.have = have
        self.need = need
        super().__init__(f"need {need} occurrences, have {have}")


def occurrence_slice(
    coloring: Coloring,
    sym: Symbol,
    selector: Selector,
    within: tuple[int, int] | None = None,
) -> tuple[int, ...]:
    """Positions of the selected occurrences of sym inside the interval.

    FirstRange(i, j) selects occurrences i..j from the front, LastRange from
    the back; both return the positions in ascending order.
    """
    i, j = selector.i, selector.j
    if not 1 <= i <= j:
        raise ValueError(f"need 1 <= i <= j, got i={i}, j={j}")
    n = len(coloring)
    lo, hi = within if within is not None else (1, n)
    if within is not None and not (1 <= lo and hi <= n):
        raise ValueError(f"interval [{lo},{hi}] outside 1..{n}")
    occ = [p for p in range(lo, hi + 1) if coloring.at(p) == sym]
    if len(occ) < j:
        raise NotEnoughOccurrences(len(occ), j)
    if isinstance(selector, FirstRange):
        return tuple(occ[i - 1 : j])
    # LastRange: i-th-from-back down to j-th-from-back, reported ascending.
    t = len(occ)
    return tuple(occ[t - j : t - i + 1])


# ---------------------------------------------------------------------------
# Coloring text format
# ---------------------------------------------------------------------------


class ColoringParseError(ValueError):
    def __init__(self, message: str, offset: int) -> None:
        self.offset = offset
        super().__init__(f"parse error at offset {offset}: {message}")


def format_coloring(coloring: Coloring, spec: ProblemSpec) -> str:
    """Compact digit string for small finite palettes, comma tokens with
    "inf" otherwise.  Round-trips bit-exactly through parse_coloring."""
    if isinstance(spec.mode, Finite) and spec.mode.k <= 10:
        return "".join(str(s) for s in coloring)
    return ",".join("inf" if s is INF else str(s) for s in coloring)


def parse_coloring(text: str, spec: ProblemSpec) -> Coloring:
    """Inverse of format_coloring.  Accepts the compact digit form whenever
    every symbol is a single digit, and the comma form for any mode."""
    text = text.strip()
    if not text:
        return Coloring(())
    syms: list[Symbol] = []
    if "," in text:
        offset = 0
        for token in text.split(","):
            stripped = token.strip()
            pad = len(token) - len(token.lstrip())
            at = offset + pad
            if stripped == "inf":
                syms.append(INF)
            elif stripped.isdigit():
                syms.append(int(stripped))
            else:
                raise ColoringParseError(f"bad token {stripped!r}", at)
            if not spec.symbol_ok(syms[-1]):
                raise ColoringParseError(
                    f"symbol {stripped} not allowed in mode {spec.mode_name()}", at
                )
            offset += len(token) + 1
    else:
        for at, ch in enumerate(text):
            if not ch.isdigit():
                raise ColoringParseError(f"unexpected character {ch!r}", at)
            v = int(ch)
            if not spec.symbol_ok(v):
                raise ColoringParseError(
                    f"symbol {v} not allowed in mode {spec.mode_name()}", at
                )
            syms.append(v)
    return Coloring(syms)
