"""Propositional formulas, satisfiability and entailment.

Formulas are immutable trees over named atoms.  Satisfiability goes through a
definitional CNF transformation followed by a small backtracking search with
unit propagation; branching order is fixed (ascending variable id) so that
every run of the same query produces the same trace and the same witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import VocabularyError

# ---------------------------------------------------------------------------
# Formula AST
# ---------------------------------------------------------------------------

_KINDS = {"atom", "true", "false", "not", "and", "or", "imp", "iff"}


@dataclass(frozen=True)
class Formula:
    """One node of a propositional formula tree.

    ``kind`` is one of ``atom true false not and or imp iff``; atoms carry a
    ``name``, connectives carry children in ``args``.  Structural equality and
    hashing come from the dataclass machinery and are used for deduplication.
    """

    kind: str
    name: str | None = None
    args: tuple["Formula", ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown formula kind {self.kind!r}")
        if self.kind == "atom" and not self.name:
            raise ValueError("atom requires a non-empty name")

    def __repr__(self) -> str:  # keep debugging output compact
        from .surface import render_formula

        return f"Formula({render_formula(self)!r})"


TRUE = Formula("true")
FALSE = Formula("false")


def atom(name: str) -> Formula:
    return Formula("atom", name=name)


def neg(f: Formula) -> Formula:
    """Negation with double-negation and constant collapsing."""
    if f.kind == "not":
        return f.args[0]
    if f.kind == "true":
        return FALSE
    if f.kind == "false":
        return TRUE
    return Formula("not", args=(f,))


def conj(*fs: Formula) -> Formula:
    """Left-folded conjunction; empty conjunction is ``true``."""
    if not fs:
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = Formula("and", args=(out, f))
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = Formula("or", args=(out, f))
    return out


def imp(a: Formula, b: Formula) -> Formula:
    return Formula("imp", args=(a, b))


def iff(a: Formula, b: Formula) -> Formula:
    return Formula("iff", args=(a, b))


def formula_atoms(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g.kind == "atom":
            out.add(g.name)  # type: ignore[arg-type]
        else:
            stack.extend(g.args)
    return frozenset(out)


Assignment = Mapping[str, bool]


def evaluate(f: Formula, assignment: Assignment) -> bool:
    """Standard truth-functional semantics; the assignment must cover f."""
    if f.kind == "atom":
        try:
            return bool(assignment[f.name])  # type: ignore[index]
        except KeyError:
            raise VocabularyError(f"atom {f.name!r} missing from assignment") from None
    if f.kind == "true":
        return True
    if f.kind == "false":
        return False
    if f.kind == "not":
        return not evaluate(f.args[0], assignment)
    a = evaluate(f.args[0], assignment)
    if f.kind == "and":
        return a and evaluate(f.args[1], assignment)
    if f.kind == "or":
        return a or evaluate(f.args[1], assignment)
    if f.kind == "imp":
        return (not a) or evaluate(f.args[1], assignment)
    # iff
    return a == evaluate(f.args[1], assignment)


def all_assignments(vocab: Sequence[str]) -> Iterator[dict[str, bool]]:
    """All 2^n assignments over ``vocab``, in a fixed bitmask order."""
    names = list(vocab)
    for bits in range(1 << len(names)):
        yield {name: bool(bits >> i & 1) for i, name in enumerate(names)}


def constant_fold(f: Formula) -> Formula:
    """Propagate ``true``/``false`` so the result is constant-free or constant."""
    if f.kind in ("atom", "true", "false"):
        return f
    if f.kind == "not":
        return neg(constant_fold(f.args[0]))
    a = constant_fold(f.args[0])
    b = constant_fold(f.args[1])
    if f.kind == "and":
        if a.kind == "false" or b.kind == "false":
            return FALSE
        if a.kind == "true":
            return b
        if b.kind == "true":
            return a
        return Formula("and", args=(a, b))
    if f.kind == "or":
        if a.kind == "true" or b.kind == "true":
            return TRUE
        if a.kind == "false":
            return b
        if b.kind == "false":
            return a
        return Formula("or", args=(a, b))
    if f.kind == "imp":
        if a.kind == "false" or b.kind == "true":
            return TRUE
        if a.kind == "true":
            return b
        if b.kind == "false":
            return neg(a)
        return Formula("imp", args=(a, b))
    # iff
    if a.kind == "true":
        return b
    if b.kind == "true":
        return a
    if a.kind == "false":
        return neg(b)
    if b.kind == "false":
        return neg(a)
    return Formula("iff", args=(a, b))


# ---------------------------------------------------------------------------
# Definitional CNF
# ---------------------------------------------------------------------------


@dataclass
class Cnf:
    """Clause set equisatisfiable with its source formulas.

    Clauses are lists of non-zero integers (sign = polarity).  ``atom_vars``
    maps original atom names to variable ids; auxiliary definition variables
    are described in ``var_origin``.  The transformation uses full
    biconditional definitions, so models of the clause set restricted to the
    original atoms are exactly the models of the source conjunction.
    """

    clauses: list[list[int]] = field(default_factory=list)
    atom_vars: dict[str, int] = field(default_factory=dict)
    var_origin: dict[int, str] = field(default_factory=dict)
    n_vars: int = 0


class _CnfBuilder:
    def __init__(self, vocab: Iterable[str]):
        self.cnf = Cnf()
        self._defs: dict[Formula, int] = {}
        for name in sorted(vocab):
            self._new_var(name)
            self.cnf.atom_vars[name] = self.cnf.n_vars

    def _new_var(self, origin: str) -> int:
        self.cnf.n_vars += 1
        self.cnf.var_origin[self.cnf.n_vars] = origin
        return self.cnf.n_vars

    def _lit(self, f: Formula) -> int:
        if f.kind == "atom":
            return self.cnf.atom_vars[f.name]  # type: ignore[index]
        if f.kind == "not":
            return -self._lit(f.args[0])
        if f in self._defs:
            return self._defs[f]
        args = [self._lit(g) for g in f.args]
        v = self._new_var(f"aux:{f.kind}")
        self._defs[f] = v
        add = self.cnf.clauses.append
        if f.kind == "and":
            a, b = args
            add([-v, a])
            add([-v, b])
            add([v, -a, -b])
        elif f.kind == "or":
            a, b = args
            add([-v, a, b])
            add([v, -a])
            add([v, -b])
        elif f.kind == "imp":
            a, b = args
            add([-v, -a, b])
            add([v, a])
            add([v, -b])
        elif f.kind == "iff":
            a, b = args
            add([-v, -a, b])
            add([-v, a, -b])
            add([v, a, b])
            add([v, -a, -b])
        else:  # pragma: no cover - constants are folded away before this point
            raise ValueError(f"cannot define {f.kind}")
        return v

    def assert_formula(self, f: Formula) -> None:
        f = constant_fold(f)
        if f.kind == "true":
            return
        if f.kind == "false":
            self.cnf.clauses.append([])
            return
        self.cnf.clauses.append([self._lit(f)])


def to_cnf(f: Formula) -> Cnf:
    """Definitional CNF of a single formula, asserted at the root."""
    return to_cnf_many([f])


def to_cnf_many(fs: Sequence[Formula]) -> Cnf:
    vocab: set[str] = set()
    for f in fs:
        vocab |= formula_atoms(f)
    builder = _CnfBuilder(vocab)
    for f in fs:
        builder.assert_formula(f)
    return builder.cnf


# ---------------------------------------------------------------------------
# Decision procedure
# ---------------------------------------------------------------------------


def _reduce(clauses: list[list[int]], lit: int) -> list[list[int]] | None:
    """Assume ``lit``; drop satisfied clauses, shrink the rest.  None = conflict."""
    out: list[list[int]] = []
    for clause in clauses:
        if lit in clause:
            continue
        if -lit in clause:
            shrunk = [l for l in clause if l != -lit]
            if not shrunk:
                return None
            out.append(shrunk)
        else:
            out.append(clause)
    return out


def _dpll(clauses: list[list[int]], assign: dict[int, bool]) -> dict[int, bool] | None:
    while True:
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is None:
            break
        assign[abs(unit)] = unit > 0
        reduced = _reduce(clauses, unit)
        if reduced is None:
            return None
        clauses = reduced
    if not clauses:
        return assign
    var = min(abs(l) for c in clauses for l in c)
    for value in (False, True):
        lit = var if value else -var
        reduced = _reduce(clauses, lit)
        if reduced is None:
            continue
        branch = dict(assign)
        branch[var] = value
        result = _dpll(reduced, branch)
        if result is not None:
            return result
    return None


def solve_cnf(cnf: Cnf) -> dict[int, bool] | None:
    if any(len(c) == 0 for c in cnf.clauses):
        return None
    return _dpll([list(c) for c in cnf.clauses], {})


def satisfiable(fs: Sequence[Formula]) -> tuple[bool, dict[str, bool] | None]:
    """Decide whether the conjunction of ``fs`` has a model.

    On success the witness is a total assignment over the atoms of ``fs``
    (default ``False`` for atoms not forced by the search, never reporting
    auxiliary CNF variables) and is re-checked against every input.
    """
    vocab = sorted(set().union(*[formula_atoms(f) for f in fs]) if fs else set())
    cnf = to_cnf_many(list(fs))
    model = solve_cnf(cnf)
    if model is None:
        return False, None
    witness = {name: model.get(var, False) for name, var in cnf.atom_vars.items()}
    for name in vocab:
        witness.setdefault(name, False)
    for f in fs:
        if not evaluate(f, witness):  # pragma: no cover - internal consistency guard
            raise AssertionError("witness failed to satisfy an input formula")
    return True, witness


def entails(premises: Sequence[Formula], goal: Formula) -> bool:
    """True iff every model of the premises satisfies ``goal``."""
    return not satisfiable(list(premises) + [neg(goal)])[0]
