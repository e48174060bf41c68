"""Randomized differential suites: the DP machinery against brute-force
enumeration, the incremental solver against the batch one, and aliveness
against the symmetry group used for search canonicalization.

Seeded (default 0) for reproducibility; ZSDIAM_TEST_SEED overrides.
"""

import os
import random
from math import gcd

from conftest import brute_max_diam, brute_min_diam, random_coloring
from zsdiam.core import Coloring, Finite, InfinityResidues, ProblemSpec, Residues
from zsdiam.solver import SolverState, has_solution
from zsdiam.zerosum import kinds_for, max_diam_valid, min_diam_valid

SEED = int(os.environ.get("ZSDIAM_TEST_SEED", "0"))

SPECS = [
    ProblemSpec(2, 2, Finite(2)),
    ProblemSpec(2, 3, Finite(2)),
    ProblemSpec(3, 4, Finite(2)),
    ProblemSpec(2, 2, Finite(3)),
    ProblemSpec(2, 3, Finite(3)),
    ProblemSpec(2, 2, Residues()),
    ProblemSpec(2, 3, Residues()),
    ProblemSpec(3, 4, Residues()),
    ProblemSpec(2, 2, InfinityResidues()),
    ProblemSpec(2, 3, InfinityResidues()),
    ProblemSpec(3, 4, InfinityResidues()),
]


def test_diameter_finders_match_brute_force_1000():
    rng = random.Random(SEED)
    discrepancies = 0
    for i in range(1000):
        spec = SPECS[i % len(SPECS)]
        kind1, kind2 = kinds_for(spec)
        n = rng.randint(1, 14)
        coloring = random_coloring(rng, spec, n)
        p = rng.randint(1, n)
        got_min = min_diam_valid(coloring, spec.s, kind1, max_pos=p)
        want_min = brute_min_diam(coloring, spec.s, kind1, p)
        got_max = max_diam_valid(coloring, spec.r, kind2, min_pos=p)
        want_max = brute_max_diam(coloring, spec.r, kind2, p)
        if (got_min is None) != (want_min is None) or (
            got_min is not None
            and (got_min.diameter, got_min.positions) != want_min
        ):
            discrepancies += 1
        if (got_max is None) != (want_max is None) or (
            got_max is not None
            and (got_max.diameter, got_max.positions) != want_max
        ):
            discrepancies += 1
    assert discrepancies == 0


def test_incremental_matches_batch_1000_schedules():
    rng = random.Random(SEED + 1)
    for i in range(1000):
        spec = SPECS[i % len(SPECS)]
        alphabet = spec.alphabet()
        state = SolverState(spec)
        stack: list = []
        for _ in range(rng.randint(8, 24)):
            if stack and rng.random() < 0.3:
                state.pop_symbol()
                stack.pop()
                continue
            sym = rng.choice(alphabet)
            stack.append(sym)
            flag = state.push_symbol(sym)
            batch = has_solution(spec, Coloring(stack)) is not None
            assert flag == batch, (spec, stack)


def test_color_permutation_invariance_500():
    rng = random.Random(SEED + 2)
    spec = ProblemSpec(2, 3, Finite(3))
    for _ in range(500):
        coloring = random_coloring(rng, spec, rng.randint(0, 12))
        perm = list(range(3))
        rng.shuffle(perm)
        permuted = Coloring(perm[v] for v in coloring)
        assert (has_solution(spec, permuted) is None) == (
            has_solution(spec, coloring) is None
        )


def test_residue_translation_invariance_500():
    rng = random.Random(SEED + 3)
    spec = ProblemSpec(2, 3, Residues())
    L = spec.lcm
    for _ in range(500):
        coloring = random_coloring(rng, spec, rng.randint(0, 12))
        shift = rng.randrange(L)
        shifted = Coloring((v + shift) % L for v in coloring)
        assert (has_solution(spec, shifted) is None) == (
            has_solution(spec, coloring) is None
        )


def test_unit_multiplication_invariance_500():
    rng = random.Random(SEED + 4)
    spec = ProblemSpec(2, 3, Residues())
    L = spec.lcm
    units = [u for u in range(1, L) if gcd(u, L) == 1]
    for _ in range(500):
        coloring = random_coloring(rng, spec, rng.randint(0, 12))
        u = rng.choice(units)
        scaled = Coloring((v * u) % L for v in coloring)
        assert (has_solution(spec, scaled) is None) == (
            has_solution(spec, coloring) is None
        )
