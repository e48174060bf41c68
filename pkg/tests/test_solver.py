import random

import pytest

from conftest import brute_has_solution, random_coloring
from zsdiam.core import (
    INF,
    Coloring,
    Finite,
    InfinityResidues,
    ProblemSpec,
    Residues,
    parse_coloring,
    validate_witness,
)
from zsdiam.solver import PopOnEmptyError, SolverState, has_solution


class TestHasSolution:
    def test_extremal_expansion_is_alive(self):
        spec = ProblemSpec(3, 4, Finite(2))
        coloring = parse_coloring("011001111000", spec)
        assert has_solution(spec, coloring) is None

    def test_constant_coloring(self):
        spec = ProblemSpec(2, 2, Finite(2))
        w = has_solution(spec, parse_coloring("0000000", spec))
        assert w is not None
        assert validate_witness(spec, parse_coloring("0000000", spec), w)

    def test_residue_witness(self):
        spec = ProblemSpec(2, 2, Residues())
        w = has_solution(spec, Coloring([1, 1, 0, 1, 1]))
        assert w is not None
        assert (w.s1, w.s2) == ((1, 2), (4, 5))

    def test_infinity_mono_witness_kinds(self):
        from zsdiam.core import InfinityMono

        spec = ProblemSpec(2, 2, InfinityResidues())
        w = has_solution(spec, Coloring([INF, INF, INF, INF]))
        assert w is not None
        assert isinstance(w.kind1, InfinityMono) and isinstance(w.kind2, InfinityMono)
        assert validate_witness(spec, Coloring([INF, INF, INF, INF]), w)

    def test_short_colorings_have_no_solution(self):
        spec = ProblemSpec(2, 3, Finite(2))
        assert has_solution(spec, Coloring([0, 0, 0, 0])) is None
        assert has_solution(spec, Coloring([])) is None

    def test_mode_mismatch_raises(self):
        spec = ProblemSpec(2, 2, Finite(2))
        with pytest.raises(ValueError):
            has_solution(spec, Coloring([0, 2, 0, 0]))

    def test_witness_always_validates(self):
        rng = random.Random(10)
        for spec in (
            ProblemSpec(2, 2, Finite(2)),
            ProblemSpec(2, 3, Finite(3)),
            ProblemSpec(2, 3, Residues()),
            ProblemSpec(2, 2, InfinityResidues()),
        ):
            for _ in range(60):
                c = random_coloring(rng, spec, rng.randint(0, 12))
                w = has_solution(spec, c)
                if w is not None:
                    assert validate_witness(spec, c, w)

    def test_agrees_with_brute_force(self):
        rng = random.Random(11)
        for spec in (
            ProblemSpec(2, 2, Finite(2)),
            ProblemSpec(2, 3, Finite(3)),
            ProblemSpec(2, 2, Residues()),
            ProblemSpec(3, 3, Residues()),
            ProblemSpec(2, 2, InfinityResidues()),
        ):
            for _ in range(40):
                c = random_coloring(rng, spec, rng.randint(0, 9))
                assert (has_solution(spec, c) is not None) == brute_has_solution(
                    spec, c
                ), (spec, list(c))

    def test_solution_survives_extension(self):
        rng = random.Random(12)
        spec = ProblemSpec(2, 2, Finite(2))
        for _ in range(50):
            c = random_coloring(rng, spec, rng.randint(4, 10))
            if has_solution(spec, c) is not None:
                extended = Coloring(list(c) + [rng.choice(spec.alphabet())])
                assert has_solution(spec, extended) is not None

    def test_no_solution_restricts_to_prefixes(self):
        rng = random.Random(13)
        spec = ProblemSpec(2, 2, Residues())
        for _ in range(50):
            c = random_coloring(rng, spec, rng.randint(0, 10))
            if has_solution(spec, c) is None:
                for k in range(len(c)):
                    assert has_solution(spec, Coloring(list(c)[:k])) is None


class TestSolverState:
    def test_push_on_alive_prefix(self):
        spec = ProblemSpec(3, 4, Finite(2))
        state = SolverState(spec)
        for v in [0, 1, 1, 0, 0]:
            assert state.push_symbol(v) is False
        assert state.push_symbol(1) is False
        # cross-check against the batch decider
        assert has_solution(spec, parse_coloring("011001", spec)) is None

    def test_empty_prefix_never_has_solution(self):
        state = SolverState(ProblemSpec(2, 2, Finite(2)))
        assert state.push_symbol(0) is False

    def test_sticky_solution_flag(self):
        spec = ProblemSpec(2, 2, Finite(2))
        state = SolverState(spec)
        for v in [0, 0, 0, 0, 0, 0]:
            state.push_symbol(v)
        assert state.solution_found
        assert state.push_symbol(0) is True

    def test_push_pop_round_trip(self):
        spec = ProblemSpec(2, 2, InfinityResidues())
        state = SolverState(spec)
        for v in [0, INF, 1]:
            state.push_symbol(v)
        snap = state.snapshot()
        state.push_symbol(INF)
        state.pop_symbol()
        assert state.snapshot() == snap

    def test_pop_empty_raises(self):
        state = SolverState(ProblemSpec(2, 2, Finite(2)))
        with pytest.raises(PopOnEmptyError):
            state.pop_symbol()

    def test_symbol_validated(self):
        state = SolverState(ProblemSpec(2, 2, Finite(2)))
        with pytest.raises(ValueError):
            state.push_symbol(INF)

    def test_incremental_matches_batch_on_random_schedules(self):
        rng = random.Random(14)
        for spec in (
            ProblemSpec(2, 2, Finite(2)),
            ProblemSpec(2, 3, Residues()),
            ProblemSpec(2, 2, InfinityResidues()),
        ):
            alphabet = spec.alphabet()
            for _ in range(40):
                state = SolverState(spec)
                stack: list = []
                for _ in range(30):
                    if stack and rng.random() < 0.35:
                        state.pop_symbol()
                        stack.pop()
                    else:
                        sym = rng.choice(alphabet)
                        stack.append(sym)
                        flag = state.push_symbol(sym)
                        batch = has_solution(spec, Coloring(stack)) is not None
                        assert flag == batch, (spec, stack)

    def test_profile_matches_min_diam(self):
        from zsdiam.zerosum import kinds_for, min_diam_valid

        rng = random.Random(15)
        spec = ProblemSpec(3, 3, Residues())
        kind1, _ = kinds_for(spec)
        state = SolverState(spec)
        c = random_coloring(rng, spec, 12)
        for sym in c:
            state.push_symbol(sym)
        profile = state.profile().entries
        for p in range(1, 13):
            res = min_diam_valid(c, spec.s, kind1, max_pos=p)
            assert profile[p] == (None if res is None else res.diameter)
