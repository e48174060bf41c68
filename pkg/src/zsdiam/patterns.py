"""Exponent-string coloring notation: parser, expander, and the builtin
library of extremal constructions.

A pattern is a sequence of runs sym^{expr}: "01^{s-1}0^{s-1}1^{2s-2}0^{r-1}"
expands, under a binding of s and r, to a coloring whose run lengths are
the evaluated exponents.  Exponent expressions are integer arithmetic over
the variables s, r, g = gcd(r,s), h = s/g, d = max(0, r-(2s-2)) with +, -,
*, min and max.

Two text forms exist.  In the compact form every symbol is a single
character (a digit, or the word "inf" / the character "∞" for the extra
color), so "10^{s-1}" is the symbol 1 followed by a run of 0s -- never the
number ten.  Colors of two or more digits must use the comma-separated
form, where each item is NUMBER or inf with an optional exponent.

Integer-mode constructions carry two residue rows, one read mod s and one
read mod r; expansion solves the two congruences per position (values are
reconstructed mod lcm(s, r)) and reports the first incompatible position
as a structured Incompatible result instead of guessing a repair.

The builtin library lives in data/builtin_patterns.txt (shipped with the
package); each record names a construction, the lower-bound claim it
certifies, its mode, an applicability guard, the expected expansion length,
and its row(s).  verify_builtin re-derives everything: it expands, checks
the length, and runs the solver to confirm the expansion has no solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from math import gcd
from typing import Mapping, Optional, Sequence, Union

from .core import (
    INF,
    Coloring,
    Finite,
    InfinityResidues,
    Mode,
    ProblemSpec,
    Residues,
    Symbol,
    Witness,
)
from .solver import has_solution

VARIABLES = ("s", "r", "g", "h", "d")


class PatternParseError(ValueError):
    def __init__(self, message: str, offset: int) -> None:
        self.offset = offset
        super().__init__(f"syntax error at offset {offset}: {message}")


class NegativeExponentError(ValueError):
    def __init__(self, expr: str, value: int) -> None:
        self.expr = expr
        self.value = value
        super().__init__(f"exponent {expr} evaluates to {value} < 0")


# ---------------------------------------------------------------------------
# Exponent expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # + - *
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class MinMax:
    fn: str  # min | max
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, BinOp, MinMax]


def bindings_for(s: int, r: int) -> dict[str, int]:
    g = gcd(r, s)
    return {"s": s, "r": r, "g": g, "h": s // g, "d": max(0, r - (2 * s - 2))}


def eval_expr(expr: Expr, bindings: Mapping[str, int]) -> int:
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return bindings[expr.name]
    if isinstance(expr, MinMax):
        a = eval_expr(expr.left, bindings)
        b = eval_expr(expr.right, bindings)
        return min(a, b) if expr.fn == "min" else max(a, b)
    a = eval_expr(expr.left, bindings)
    b = eval_expr(expr.right, bindings)
    if expr.op == "+":
        return a + b
    if expr.op == "-":
        return a - b
    return a * b


def expr_text(expr: Expr) -> str:
    """Pretty-print; parse(expr_text(e)) reproduces e exactly."""
    return _expr_text(expr, 0, False)


def _expr_text(expr: Expr, parent_prec: int, right_side: bool) -> str:
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, MinMax):
        return f"{expr.fn}({_expr_text(expr.left, 0, False)}, {_expr_text(expr.right, 0, False)})"
    prec = 1 if expr.op in "+-" else 2
    text = (
        f"{_expr_text(expr.left, prec, False)} {expr.op} "
        f"{_expr_text(expr.right, prec, True)}"
    )
    if prec < parent_prec or (prec == parent_prec and right_side):
        return f"({text})"
    return text


# -- tokenizer/parser over a substring, reporting absolute offsets ----------


@dataclass(frozen=True)
class _Token:
    kind: str  # int name op lparen rparen comma
    text: str
    offset: int


def _tokenize_expr(text: str, base: int) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], base + i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < len(text) and text[j].isalpha():
                j += 1
            tokens.append(_Token("name", text[i:j], base + i))
            i = j
            continue
        if ch in "+-*":
            tokens.append(_Token("op", ch, base + i))
        elif ch == "(":
            tokens.append(_Token("lparen", ch, base + i))
        elif ch == ")":
            tokens.append(_Token("rparen", ch, base + i))
        elif ch == ",":
            tokens.append(_Token("comma", ch, base + i))
        else:
            raise PatternParseError(f"unexpected character {ch!r}", base + i)
        i += 1
    return tokens


class _ExprParser:
    """Recursive descent: expr := term (('+'|'-') term)*; term := factor
    ('*' factor)*; factor := INT [VAR|'('expr')'] | VAR | min/max(e, e) |
    '(' expr ')'.  A number directly before a variable or parenthesis
    multiplies it (the customary 2s-2 shorthand)."""

    def __init__(self, tokens: list[_Token], end_offset: int) -> None:
        self.tokens = tokens
        self.pos = 0
        self.end_offset = end_offset

    def _error_offset(self) -> int:
        if self.pos > 0:
            return self.tokens[self.pos - 1].offset
        return self.end_offset

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise PatternParseError("unexpected end of expression", self._error_offset())
        self.pos += 1
        return tok

    def parse(self) -> Expr:
        expr = self.expr()
        tok = self.peek()
        if tok is not None:
            raise PatternParseError(f"unexpected {tok.text!r}", tok.offset)
        return expr

    def expr(self) -> Expr:
        node = self.term()
        while (tok := self.peek()) is not None and tok.kind == "op" and tok.text in "+-":
            self.take()
            node = BinOp(tok.text, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while (tok := self.peek()) is not None and tok.kind == "op" and tok.text == "*":
            self.take()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self) -> Expr:
        tok = self.take()
        if tok.kind == "int":
            node: Expr = Const(int(tok.text))
            nxt = self.peek()
            if nxt is not None and (
                (nxt.kind == "name" and nxt.text in VARIABLES) or nxt.kind == "lparen"
            ):
                return BinOp("*", node, self.factor())
            return node
        if tok.kind == "name":
            if tok.text in ("min", "max"):
                self._expect("lparen")
                left = self.expr()
                self._expect("comma")
                right = self.expr()
                self._expect("rparen")
                return MinMax(tok.text, left, right)
            if tok.text in VARIABLES:
                return Var(tok.text)
            raise PatternParseError(f"unknown variable {tok.text!r}", tok.offset)
        if tok.kind == "lparen":
            node = self.expr()
            self._expect("rparen")
            return node
        raise PatternParseError(f"unexpected {tok.text!r}", tok.offset)

    def _expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            want = {"lparen": "'('", "rparen": "')'", "comma": "','"}[kind]
            at = tok.offset if tok is not None else self._error_offset()
            raise PatternParseError(f"expected {want}", at)
        return self.take()


def parse_expr(text: str, base: int = 0) -> Expr:
    """Parse an exponent expression; offsets in errors are absolute
    (relative to base)."""
    tokens = _tokenize_expr(text, base)
    end = tokens[-1].offset if tokens else base
    return _ExprParser(tokens, end).parse()


# ---------------------------------------------------------------------------
# Guards: chained comparisons joined by 'and'
# ---------------------------------------------------------------------------

_RELS = ("<=", ">=", "==", "!=", "<", ">", "=")


@dataclass(frozen=True)
class GuardExpr:
    """Conjunction of comparison chains, e.g. "3 <= s <= r and g > 1"."""

    chains: tuple[tuple[Expr, tuple[tuple[str, Expr], ...]], ...]
    text: str

    def holds(self, s: int, r: int) -> bool:
        env = bindings_for(s, r)
        for first, rest in self.chains:
            value = eval_expr(first, env)
            for rel, rhs_expr in rest:
                rhs = eval_expr(rhs_expr, env)
                if not _rel_ok(value, rel, rhs):
                    return False
                value = rhs
        return True


def _rel_ok(a: int, rel: str, b: int) -> bool:
    if rel == "<=":
        return a <= b
    if rel == "<":
        return a < b
    if rel == ">=":
        return a >= b
    if rel == ">":
        return a > b
    if rel == "!=":
        return a != b
    return a == b  # '=' and '=='


def parse_guard(text: str) -> GuardExpr:
    chains = []
    for part in text.split(" and "):
        part = part.strip()
        pieces: list[str] = []
        rels: list[str] = []
        rest = part
        while True:
            found = None
            for rel in _RELS:
                idx = rest.find(rel)
                if idx != -1 and (found is None or idx < found[1]):
                    found = (rel, idx)
            if found is None:
                pieces.append(rest)
                break
            rel, idx = found
            pieces.append(rest[:idx])
            rels.append(rel)
            rest = rest[idx + len(rel) :]
        if not rels:
            raise PatternParseError(f"guard clause {part!r} has no comparison", 0)
        exprs = [parse_expr(p) for p in pieces]
        chains.append((exprs[0], tuple(zip(rels, exprs[1:]))))
    return GuardExpr(tuple(chains), text)


# ---------------------------------------------------------------------------
# Patterns
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Run:
    symbol: Symbol
    exponent: Expr


@dataclass(frozen=True)
class PatternExpr:
    runs: tuple[Run, ...]

    def text(self) -> str:
        """Pretty-print; round-trips through parse_pattern.  Multi-digit
        colors force the comma-separated form."""
        items = []
        for run in self.runs:
            sym = "inf" if run.symbol is INF else str(run.symbol)
            if run.exponent == Const(1):
                items.append(sym)
            else:
                items.append(f"{sym}^{{{expr_text(run.exponent)}}}")
        multi = any(isinstance(r.symbol, int) and r.symbol >= 10 for r in self.runs)
        return (",".join(items)) if multi else "".join(items)


def _top_level_commas(text: str) -> list[int]:
    """Offsets of commas outside braces/parens."""
    depth = 0
    out = []
    for i, ch in enumerate(text):
        if ch in "{(":
            depth += 1
        elif ch in "})":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(i)
    return out


def _parse_exponent(text: str, pos: int) -> tuple[Expr, int]:
    """Parse '^{expr}' starting at pos (which points at '^')."""
    if pos + 1 >= len(text) or text[pos + 1] != "{":
        raise PatternParseError("expected '{' after '^'", pos)
    depth = 0
    j = pos + 1
    while j < len(text):
        if text[j] == "{":
            depth += 1
        elif text[j] == "}":
            depth -= 1
            if depth == 0:
                break
        j += 1
    inner = text[pos + 2 : j] if j < len(text) else text[pos + 2 :]
    expr = parse_expr(inner, base=pos + 2)
    if j >= len(text):
        raise PatternParseError("unclosed '{'", pos + 1)
    return expr, j + 1


def _parse_symbol_compact(text: str, pos: int) -> tuple[Symbol, int]:
    ch = text[pos]
    if ch == "∞":
        return INF, pos + 1
    if text.startswith("inf", pos):
        return INF, pos + 3
    if ch.isdigit():
        return int(ch), pos + 1
    raise PatternParseError(f"expected a symbol, found {ch!r}", pos)


def parse_pattern(text: str) -> PatternExpr:
    """Parse pattern text into runs.

    Compact form: one character per symbol (digits, ∞/inf), optional
    ^{expr} exponents, whitespace ignored.  If any top-level comma is
    present, the comma-separated form is used instead: items are NUMBER or
    inf with optional exponents, so multi-digit colors are unambiguous.
    """
    runs: list[Run] = []
    commas = _top_level_commas(text)
    if commas:
        bounds = [-1] + commas + [len(text)]
        for k in range(len(bounds) - 1):
            start, end = bounds[k] + 1, bounds[k + 1]
            item = text[start:end]
            pos = start + (len(item) - len(item.lstrip()))
            item_stripped = item.strip()
            if not item_stripped:
                raise PatternParseError("empty item", pos)
            sym: Symbol
            if item_stripped.startswith(("inf", "∞")):
                sym = INF
                pos += 3 if item_stripped.startswith("inf") else 1
            else:
                j = pos
                while j < end and text[j].isdigit():
                    j += 1
                if j == pos:
                    raise PatternParseError(
                        f"expected a symbol, found {text[pos]!r}", pos
                    )
                sym = int(text[pos:j])
                pos = j
            exponent: Expr = Const(1)
            while pos < end and text[pos].isspace():
                pos += 1
            if pos < end and text[pos] == "^":
                exponent, pos = _parse_exponent(text, pos)
            while pos < end and text[pos].isspace():
                pos += 1
            if pos < end:
                raise PatternParseError(f"unexpected {text[pos]!r}", pos)
            runs.append(Run(sym, exponent))
    else:
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            sym, pos = _parse_symbol_compact(text, pos)
            exponent = Const(1)
            if pos < len(text) and text[pos] == "^":
                exponent, pos = _parse_exponent(text, pos)
            runs.append(Run(sym, exponent))
    if not runs:
        raise PatternParseError("empty pattern", 0)
    return PatternExpr(tuple(runs))


def expand(pattern: PatternExpr, s: int, r: int) -> Coloring:
    """Concatenate the runs under the binding; derived variables g, h, d
    come from s and r.  Zero-length runs are legal; negative ones are not."""
    env = bindings_for(s, r)
    out: list[Symbol] = []
    for run in pattern.runs:
        count = eval_expr(run.exponent, env)
        if count < 0:
            raise NegativeExponentError(expr_text(run.exponent), count)
        out.extend([run.symbol] * count)
    return Coloring(out)


# ---------------------------------------------------------------------------
# Dual-row expansion (integer modes)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Incompatible:
    """The two residue rows conflict at this position: no value is congruent
    to res_s mod s and res_r mod r (or exactly one row is INF there)."""

    position: int
    res_s: Symbol
    res_r: Symbol


def _crt(a: int, m: int, b: int, n: int) -> Optional[int]:
    """Least x >= 0 with x = a mod m and x = b mod n, or None."""
    g = gcd(m, n)
    if (a - b) % g:
        return None
    lcm = m // g * n
    t = ((b - a) // g * pow(m // g, -1, n // g)) % (n // g)
    return (a + m * t) % lcm


# ---------------------------------------------------------------------------
# Builtin library
# ---------------------------------------------------------------------------

_MODES: dict[str, Mode] = {
    "k2": Finite(2),
    "k3": Finite(3),
    "z": Residues(),
    "zinf": InfinityResidues(),
}


@dataclass(frozen=True)
class BuiltinPattern:
    """A cataloged extremal construction.

    claim is the lower-bound statement the expansion certifies when alive;
    expected_length must equal the claim's bound under every admissible
    binding.  row_s and row_r are the same object for single-row entries.
    """

    name: str
    claim: str
    mode_key: str
    guard: GuardExpr
    expected_length: Expr
    row_s: PatternExpr
    row_r: PatternExpr

    @property
    def mode(self) -> Mode:
        return _MODES[self.mode_key]

    @property
    def dual_row(self) -> bool:
        return self.row_s != self.row_r

    def guard_ok(self, s: int, r: int) -> bool:
        return r >= s >= 2 and self.guard.holds(s, r)

    def admissible(self, s_values: Sequence[int], r_values: Sequence[int]):
        for s in s_values:
            for r in r_values:
                if self.guard_ok(s, r):
                    yield s, r


def expand_dual_row(
    builtin: BuiltinPattern, s: int, r: int
) -> Union[Coloring, Incompatible]:
    """Expand a builtin at the binding, solving row_s = value mod s,
    row_r = value mod r per position for integer modes.

    Returns the first Incompatible position when the congruences conflict;
    a finite-palette builtin expands its single row as-is.
    """
    if builtin.mode_key in ("k2", "k3"):
        return expand(builtin.row_s, s, r)
    a = list(expand(builtin.row_s, s, r))
    b = list(expand(builtin.row_r, s, r))
    if len(a) != len(b):
        raise ValueError(
            f"{builtin.name}: rows expand to different lengths "
            f"{len(a)} vs {len(b)} at s={s}, r={r}"
        )
    out: list[Symbol] = []
    for pos, (x, y) in enumerate(zip(a, b), start=1):
        if x is INF and y is INF:
            out.append(INF)
            continue
        if x is INF or y is INF:
            return Incompatible(pos, x, y)
        v = _crt(x % s, s, y % r, r)
        if v is None:
            return Incompatible(pos, x, y)
        out.append(v)
    return Coloring(out)


@dataclass(frozen=True)
class BuiltinReport:
    name: str
    s: int
    r: int
    status: str  # ok | incompatible | finding
    expected_length: int
    actual_length: Optional[int]
    length_ok: Optional[bool]
    alive: Optional[bool]
    incompatible: Optional[Incompatible]
    witness: Optional[Witness]
    coloring: Optional[Coloring]


def verify_builtin(builtin: BuiltinPattern, s: int, r: int) -> BuiltinReport:
    """Expand the builtin at (s, r), check its length against the claimed
    bound, and confirm the expansion is alive (solver finds no solution)."""
    if not builtin.guard_ok(s, r):
        raise ValueError(f"{builtin.name}: guard not satisfied at s={s}, r={r}")
    expected = eval_expr(builtin.expected_length, bindings_for(s, r))
    expanded = expand_dual_row(builtin, s, r)
    if isinstance(expanded, Incompatible):
        return BuiltinReport(
            builtin.name, s, r, "incompatible", expected, None, None, None,
            expanded, None, None,
        )
    spec = ProblemSpec(s, r, builtin.mode)
    expanded.check_mode(spec)
    length_ok = len(expanded) == expected
    witness = has_solution(spec, expanded)
    alive = witness is None
    status = "ok" if (length_ok and alive) else "finding"
    return BuiltinReport(
        builtin.name, s, r, status, expected, len(expanded), length_ok,
        alive, None, witness, expanded,
    )


def parse_builtin_record(line: str) -> BuiltinPattern:
    """One library record: name ; claim ; mode ; guard ; length ; row_s [; row_r]."""
    fields = [f.strip() for f in line.split(";")]
    if len(fields) not in (6, 7):
        raise ValueError(f"expected 6 or 7 fields, got {len(fields)}: {line!r}")
    name, claim, mode_key, guard_text, length_text, row_s_text = fields[:6]
    if mode_key not in _MODES:
        raise ValueError(f"unknown mode {mode_key!r} in record {name!r}")
    row_s = parse_pattern(row_s_text)
    row_r = parse_pattern(fields[6]) if len(fields) == 7 else row_s
    return BuiltinPattern(
        name=name,
        claim=claim,
        mode_key=mode_key,
        guard=parse_guard(guard_text),
        expected_length=parse_expr(length_text),
        row_s=row_s,
        row_r=row_r,
    )


def load_builtin_library(text: str) -> tuple[BuiltinPattern, ...]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_builtin_record(line))
    return tuple(out)


@lru_cache(maxsize=1)
def builtin_patterns() -> tuple[BuiltinPattern, ...]:
    """The shipped construction catalog."""
    text = (
        resources.files("zsdiam").joinpath("data/builtin_patterns.txt").read_text("utf-8")
    )
    return load_builtin_library(text)


def load_pattern_file(text: str) -> list[PatternExpr]:
    """Plain pattern files: one pattern per line, '#' comments."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_pattern(line))
    return out
