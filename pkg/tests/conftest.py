"""Shared brute-force oracles and generators.

Everything here enumerates directly from the solution definition, with no
shared code or ideas with the package's DP/sliding-window machinery, so
that agreement between the two is meaningful evidence.
"""

from __future__ import annotations

import random
from itertools import combinations

from zsdiam.core import (
    INF,
    Coloring,
    Finite,
    InfinityResidues,
    ProblemSpec,
    Residues,
)
from zsdiam.zerosum import Mono, ValidityKind, ZeroSumMod


def set_is_valid(coloring: Coloring, positions: tuple[int, ...], kind: ValidityKind) -> bool:
    """Direct check, straight from the definition."""
    syms = [coloring.at(p) for p in positions]
    if isinstance(kind, Mono):
        return len(set(map(repr, syms))) == 1
    if isinstance(kind, ZeroSumMod):
        if any(s is INF for s in syms):
            return False
        return sum(syms) % kind.modulus == 0
    # INF-mono or zero-sum
    if all(s is INF for s in syms):
        return True
    if any(s is INF for s in syms):
        return False
    return sum(syms) % kind.modulus == 0


def brute_min_diam(coloring: Coloring, m: int, kind: ValidityKind, max_pos: int):
    """(diameter, lexicographically least positions) or None, by enumeration."""
    best = None
    for positions in combinations(range(1, max_pos + 1), m):
        if set_is_valid(coloring, positions, kind):
            cand = (positions[-1] - positions[0], positions)
            if best is None or cand < best:
                best = cand
    return best


def brute_max_diam(coloring: Coloring, m: int, kind: ValidityKind, min_pos: int):
    n = len(coloring)
    best = None
    for positions in combinations(range(min_pos, n + 1), m):
        if set_is_valid(coloring, positions, kind):
            cand = (-(positions[-1] - positions[0]), positions)
            if best is None or cand < best:
                best = cand
    if best is None:
        return None
    return (-best[0], best[1])


def brute_has_solution(spec: ProblemSpec, coloring: Coloring) -> bool:
    """Enumerate every (S1, S2) pair; expensive, keep n small."""
    from zsdiam.zerosum import kinds_for

    kind1, kind2 = kinds_for(spec)
    n = len(coloring)
    for s1 in combinations(range(1, n + 1), spec.s):
        if not set_is_valid(coloring, s1, kind1):
            continue
        d1 = s1[-1] - s1[0]
        for s2 in combinations(range(s1[-1] + 1, n + 1), spec.r):
            if s2[-1] - s2[0] < d1:
                continue
            if set_is_valid(coloring, s2, kind2):
                return True
    return False


def random_coloring(rng: random.Random, spec: ProblemSpec, n: int) -> Coloring:
    alphabet = spec.alphabet()
    return Coloring(rng.choice(alphabet) for _ in range(n))


def all_modes(s: int, r: int) -> list[ProblemSpec]:
    return [
        ProblemSpec(s, r, Finite(2)),
        ProblemSpec(s, r, Finite(3)),
        ProblemSpec(s, r, Residues()),
        ProblemSpec(s, r, InfinityResidues()),
    ]
