"""zsdiam: exact computation and verification for extremal two-set
nondecreasing-diameter coloring numbers."""

__version__ = "0.1.0"

from .core import (
    INF,
    Coloring,
    ColoringParseError,
    Finite,
    InfinityMono,
    InfinityResidues,
    InvalidWitnessError,
    Mode,
    MonoColor,
    NotEnoughOccurrences,
    ProblemSpec,
    Residues,
    Symbol,
    Witness,
    ZeroSum,
    diam,
    format_coloring,
    mode_text,
    parse_coloring,
    parse_mode,
    validate_witness,
)
from .formulas import FormulaResult, atlas, closed_form, coprime_wide_claim
from .patterns import (
    BuiltinPattern,
    Incompatible,
    PatternExpr,
    builtin_patterns,
    expand,
    expand_dual_row,
    parse_pattern,
    verify_builtin,
)
from .search import (
    CanonicalRule,
    ExtremalResult,
    SearchLimits,
    canonical_first_symbol_rule,
    compute_f,
    find_counterexample,
)
from .solver import SolverState, has_solution
from .zerosum import (
    BudgetExceededError,
    CosetReport,
    DiamResult,
    EgzReport,
    InfinityMonoOrZeroSum,
    Mono,
    Reading,
    ThreeColorReport,
    ValidityKind,
    ZeroSumMod,
    coset_egz_oracle,
    egz_oracle,
    exists_zero_sum_subset,
    kinds_for,
    max_diam_valid,
    min_diam_valid,
    three_color_egz_oracle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
