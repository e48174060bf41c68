"""Exact computation of the extremal function by pruned exhaustive search.

A coloring is *alive* if it has no solution; aliveness is closed under
taking prefixes, and a solution survives any extension.  So a depth-first
walk over canonical colorings that abandons a branch the moment the
incremental solver reports a solution visits exactly the alive prefixes,
and the answer is one more than the deepest alive depth reached once the
canonical space is exhausted.

Symmetry breaking keeps one representative per equivalence class: finite
palettes are quotiented by color permutations (colors must appear in
first-use order), residue alphabets by translation (the first integer
symbol is pinned to residue 0), which leaves the INF color untouched.  Both
constraints are prefix-closed, so the canonical tree is walkable.

Multi-worker runs split the canonical tree at a fixed shallow depth into
independent subtree tasks and merge by maximum alive depth, in task order,
so results do not depend on the worker count.  Node budgets are split
evenly across subtree tasks in that mode.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Callable, Optional

from .core import (
    INF,
    INF_CODE,
    Coloring,
    Finite,
    ProblemSpec,
    Residues,
    Symbol,
    code_symbol,
    symbol_code,
)
from .solver import SolverState, has_solution
from .zerosum import BudgetExceededError

SPLIT_DEPTH = 4  # canonical tree is split here for parallel runs

_WALL_CHECK_MASK = 0x3FF  # consult the clock every 1024 pushes


@dataclass(frozen=True)
class SearchLimits:
    max_n: int = 64
    node_budget: int = 50_000_000
    wall_budget: float = 3600.0
    workers: int = 1

    def __post_init__(self) -> None:
        if min(self.max_n, self.node_budget, self.workers) < 1 or self.wall_budget <= 0:
            raise ValueError("all search limits must be positive")


@dataclass(frozen=True)
class ExtremalResult:
    """Outcome of a search.

    status is "exact" (value holds and a full canonical exhaustion proved
    it), "lower_bound" (an alive coloring of length max_n was found, so the
    true value is at least max_n + 1), or "budget_exceeded" (node or wall
    budget ran out; deepest_alive still certifies value > deepest_alive).
    The counterexample is an alive coloring of length deepest_alive.
    """

    status: str
    value: Optional[int]
    deepest_alive: int
    counterexample: Optional[Coloring]
    nodes: int
    elapsed: float

    @property
    def bound(self) -> int:
        """Certified lower bound: the extremal value is >= this."""
        return self.deepest_alive + 1


# ---------------------------------------------------------------------------
# Canonical branching rule
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalRule:
    """Describes (and implements) the symmetry-breaking branching constraint."""

    kind: str
    description: str
    spec: ProblemSpec

    def initial_state(self) -> int:
        return 0

    def allowed_codes(self, state: int) -> tuple[int, ...]:
        mode = self.spec.mode
        if isinstance(mode, Finite):
            return tuple(range(min(state + 1, mode.k)))
        if isinstance(mode, Residues):
            return (0,) if state == 0 else tuple(range(self.spec.lcm))
        if state == 0:
            return (0, INF_CODE)
        return tuple(range(self.spec.lcm)) + (INF_CODE,)

    def advance(self, state: int, code: int) -> int:
        if isinstance(self.spec.mode, Finite):
            return max(state, code + 1)
        return state or (0 if code == INF_CODE else 1)

    def satisfied_by(self, coloring: Coloring) -> bool:
        state = self.initial_state()
        for sym in coloring:
            code = symbol_code(sym)
            if code not in self.allowed_codes(state):
                return False
            state = self.advance(state, code)
        return True

    def canonicalize(self, coloring: Coloring) -> Coloring:
        """Map a coloring to an equivalent one satisfying the constraint."""
        mode = self.spec.mode
        if isinstance(mode, Finite):
            relabel: dict[Symbol, int] = {}
            out = []
            for sym in coloring:
                if sym not in relabel:
                    relabel[sym] = len(relabel)
                out.append(relabel[sym])
            return Coloring(out)
        L = self.spec.lcm
        shift = 0
        for sym in coloring:
            if sym is not INF:
                shift = sym
                break
        return Coloring(
            sym if sym is INF else (sym - shift) % L for sym in coloring
        )


def canonical_first_symbol_rule(spec: ProblemSpec) -> CanonicalRule:
    """The branching constraint compute_f searches under.

    Sound: every coloring is equivalent, under color permutation (finite
    palettes) or residue translation (integer alphabets), to exactly the
    colorings the constraint admits, and equivalence preserves aliveness.
    """
    if isinstance(spec.mode, Finite):
        return CanonicalRule(
            kind="color-first-use",
            description=(
                "colors appear in first-use order: the first occurrence of "
                "color c+1 comes after the first occurrence of color c"
            ),
            spec=spec,
        )
    return CanonicalRule(
        kind="first-residue-zero",
        description="the first integer-valued symbol is pinned to residue 0",
        spec=spec,
    )


# ---------------------------------------------------------------------------
# Depth-first search core
# ---------------------------------------------------------------------------


class _Budget:
    __slots__ = ("node_cap", "deadline", "nodes", "exhausted")

    def __init__(self, node_cap: int, wall_budget: float) -> None:
        self.node_cap = node_cap
        self.deadline = time.monotonic() + wall_budget
        self.nodes = 0
        self.exhausted = False

    def spend(self) -> bool:
        """Account one push; True while within budget."""
        self.nodes += 1
        if self.nodes > self.node_cap:
            self.exhausted = True
            return False
        if (self.nodes & _WALL_CHECK_MASK) == 0 and time.monotonic() > self.deadline:
            self.exhausted = True
            return False
        return True


@dataclass
class _DfsOutcome:
    deepest: int
    example: tuple[int, ...]  # codes of an alive coloring at `deepest`
    nodes: int
    exhausted_budget: bool
    capped: bool  # an alive coloring of length max_n was found


def _run_dfs(
    spec: ProblemSpec,
    prefix: tuple[int, ...],
    max_n: int,
    node_cap: int,
    wall_budget: float,
    progress: Callable[[int, int, int], None] | None = None,
) -> _DfsOutcome:
    """Explore alive canonical colorings extending `prefix` (assumed alive
    and canonical) up to length max_n."""
    rule = canonical_first_symbol_rule(spec)
    state = SolverState(spec)
    rs = rule.initial_state()
    for code in prefix:
        found = state.push_symbol(code_symbol(code))
        assert not found, "search prefix must be alive"
        rs = rule.advance(rs, code)

    budget = _Budget(node_cap, wall_budget)
    deepest = len(prefix)
    example = prefix
    capped = deepest >= max_n

    def explore(depth: int, rstate: int) -> bool:
        """Returns True to abort the walk (cap reached or budget out)."""
        nonlocal deepest, example, capped
        if depth > deepest:
            deepest = depth
            example = state.codes()
            if depth >= max_n:
                capped = True
                return True
        for code in rule.allowed_codes(rstate):
            if not budget.spend():
                return True
            if progress is not None and (budget.nodes & 0xFFFF) == 0:
                progress(budget.nodes, depth, deepest)
            if state.push_symbol(code_symbol(code)):
                state.pop_symbol()
                continue
            stop = explore(depth + 1, rule.advance(rstate, code))
            state.pop_symbol()
            if stop:
                return True
        return False

    if not capped:
        explore(len(prefix), rs)
    return _DfsOutcome(
        deepest=deepest,
        example=example,
        nodes=budget.nodes,
        exhausted_budget=budget.exhausted,
        capped=capped,
    )


def _collect_prefixes(
    spec: ProblemSpec, depth: int, node_cap: int, wall_budget: float
) -> tuple[list[tuple[int, ...]], _DfsOutcome]:
    """All alive canonical prefixes of exactly `depth`, in DFS order."""
    rule = canonical_first_symbol_rule(spec)
    state = SolverState(spec)
    budget = _Budget(node_cap, wall_budget)
    prefixes: list[tuple[int, ...]] = []
    deepest = 0
    example: tuple[int, ...] = ()

    def walk(d: int, rstate: int) -> bool:
        nonlocal deepest, example
        if d > deepest:
            deepest = d
            example = state.codes()
        if d == depth:
            prefixes.append(state.codes())
            return False
        for code in rule.allowed_codes(rstate):
            if not budget.spend():
                return True
            if state.push_symbol(code_symbol(code)):
                state.pop_symbol()
                continue
            stop = walk(d + 1, rule.advance(rstate, code))
            state.pop_symbol()
            if stop:
                return True
        return False

    walk(0, rule.initial_state())
    out = _DfsOutcome(deepest, example, budget.nodes, budget.exhausted, False)
    return prefixes, out


def _subtree_task(args: tuple) -> _DfsOutcome:
    spec, prefix, max_n, node_cap, wall_budget = args
    return _run_dfs(spec, prefix, max_n, node_cap, wall_budget)


def _search(
    spec: ProblemSpec,
    limits: SearchLimits,
    max_n: int,
    progress: Callable[[int, int, int], None] | None,
) -> _DfsOutcome:
    if limits.workers <= 1:
        return _run_dfs(
            spec, (), max_n, limits.node_budget, limits.wall_budget, progress
        )

    split = min(SPLIT_DEPTH, max_n)
    prefixes, head = _collect_prefixes(
        spec, split, limits.node_budget, limits.wall_budget
    )
    if head.exhausted_budget or not prefixes:
        return head
    per_task = max(1, (limits.node_budget - head.nodes) // len(prefixes))
    tasks = [(spec, p, max_n, per_task, limits.wall_budget) for p in prefixes]
    with Pool(limits.workers) as pool:
        results = pool.map(_subtree_task, tasks)
    deepest, example = head.deepest, head.example
    nodes = head.nodes
    exhausted = False
    capped = False
    cap_example: tuple[int, ...] | None = None
    for res in results:
        nodes += res.nodes
        exhausted = exhausted or res.exhausted_budget
        if res.deepest > deepest:
            deepest, example = res.deepest, res.example
        if res.capped and cap_example is None:
            capped, cap_example = True, res.example
    if capped and cap_example is not None:
        example = cap_example
        deepest = len(cap_example)
    return _DfsOutcome(deepest, example, nodes, exhausted and not capped, capped)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def compute_f(
    spec: ProblemSpec,
    limits: SearchLimits = SearchLimits(),
    progress: Callable[[int, int, int], None] | None = None,
) -> ExtremalResult:
    """Smallest n such that every coloring of [1, n] has a solution.

    Exact when the canonical space was exhausted below max_n within budget;
    otherwise a certified lower bound (alive coloring re-checked with the
    batch solver) with status "lower_bound" or "budget_exceeded".
    """
    t0 = time.monotonic()
    out = _search(spec, limits, limits.max_n, progress)
    elapsed = time.monotonic() - t0
    cex = Coloring(code_symbol(c) for c in out.example)
    if has_solution(spec, cex) is not None:
        raise AssertionError(
            "internal error: search emitted a non-alive counterexample"
        )
    if out.capped:
        status, value = "lower_bound", None
    elif out.exhausted_budget:
        status, value = "budget_exceeded", None
    else:
        status, value = "exact", out.deepest + 1
    return ExtremalResult(
        status=status,
        value=value,
        deepest_alive=out.deepest,
        counterexample=cex,
        nodes=out.nodes,
        elapsed=elapsed,
    )


def find_counterexample(
    spec: ProblemSpec, n: int, limits: SearchLimits = SearchLimits()
) -> Coloring | None:
    """An alive coloring of length n, or None if exhaustive search proves
    none exists.  Raises BudgetExceededError when the search is cut short
    (outcome indeterminate)."""
    if n < 0:
        raise ValueError(f"length must be >= 0, got {n}")
    if n == 0:
        return Coloring(())
    out = _run_dfs(spec, (), n, limits.node_budget, limits.wall_budget)
    if out.capped:
        cex = Coloring(code_symbol(c) for c in out.example)
        if has_solution(spec, cex) is not None:
            raise AssertionError(
                "internal error: search emitted a non-alive counterexample"
            )
        return cex
    if out.exhausted_budget:
        raise BudgetExceededError(
            f"search budget exhausted before settling length {n}",
            limits.node_budget,
        )
    return None
