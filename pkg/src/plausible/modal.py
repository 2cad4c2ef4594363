"""Modal sentence model: atoms, clausal form, negation by duality, dualization.

Four atom shapes exist: necessity and possibility over a formula, and the two
conditional shapes — defaults ("B holds by default given A", error bound eps)
and likelihoods ("B is at least likely given A", floor e, iterable order n).
Both conditionals hold vacuously when their antecedent has probability zero;
their exact complements therefore carry an explicit possibility guard, which
``negate_modal`` attaches and the purely syntactic ``dualize`` ignores.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .errors import BoundRangeError, MixedKindError
from .propcore import Formula, TRUE, conj, formula_atoms, neg

# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScaledEpsilon:
    """A bound of the form coeff * eps for a shared formal parameter eps.

    Used for runs where every conditional carries the same symbolic error;
    sums stay symbolic and comparisons happen only once a value is substituted.
    """

    coeff: Fraction = Fraction(1)

    def __add__(self, other: "ScaledEpsilon") -> "ScaledEpsilon":
        if not isinstance(other, ScaledEpsilon):
            return NotImplemented
        return ScaledEpsilon(self.coeff + other.coeff)

    def __mul__(self, factor: int) -> "ScaledEpsilon":
        return ScaledEpsilon(self.coeff * factor)

    __rmul__ = __mul__

    def at(self, eps: Fraction) -> Fraction:
        """Substitute a concrete value for eps."""
        return self.coeff * eps

    def __str__(self) -> str:
        return f"{self.coeff}*eps"


#: A conditional bound: exact rational, shared symbolic epsilon, or None for
#: the qualitative mode where subscripts are dropped altogether.
BoundValue = Union[Fraction, ScaledEpsilon, None]


def _check_bound(value: BoundValue, what: str) -> None:
    if isinstance(value, Fraction) and not 0 <= value <= 1:
        raise BoundRangeError(f"{what} {value} outside [0, 1]")


# ---------------------------------------------------------------------------
# Modal atoms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Necessity:
    body: Formula


@dataclass(frozen=True)
class Possibility:
    body: Formula


@dataclass(frozen=True)
class Default:
    antecedent: Formula
    consequent: Formula
    eps: BoundValue = None

    def __post_init__(self) -> None:
        _check_bound(self.eps, "default error bound")

    def material(self) -> Formula:
        return Formula("imp", args=(self.antecedent, self.consequent))


@dataclass(frozen=True)
class Likelihood:
    antecedent: Formula
    consequent: Formula
    floor: BoundValue = None
    order: int = 1

    def __post_init__(self) -> None:
        _check_bound(self.floor, "likelihood floor")
        if self.order < 1:
            raise ValueError("likelihood order must be a positive integer")

    def material(self) -> Formula:
        return Formula("imp", args=(self.antecedent, self.consequent))


ModalAtom = Union[Necessity, Possibility, Default, Likelihood]

#: A flat conjunction of modal atoms (possibly of mixed conditional kind).
ModalConjunction = tuple[ModalAtom, ...]


def atom_formulas(m: ModalAtom) -> tuple[Formula, ...]:
    if isinstance(m, (Necessity, Possibility)):
        return (m.body,)
    return (m.antecedent, m.consequent)


def conjunction_atoms(atoms: Iterable[ModalAtom]) -> frozenset[str]:
    out: set[str] = set()
    for m in atoms:
        for f in atom_formulas(m):
            out |= formula_atoms(f)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Sentences: boolean combinations of modal atoms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SNot:
    body: "Sentence"


@dataclass(frozen=True)
class SAnd:
    left: "Sentence"
    right: "Sentence"


@dataclass(frozen=True)
class SOr:
    left: "Sentence"
    right: "Sentence"


@dataclass(frozen=True)
class SImp:
    left: "Sentence"
    right: "Sentence"


Sentence = Union[Necessity, Possibility, Default, Likelihood, SNot, SAnd, SOr, SImp]


def is_modal_atom(s: Sentence) -> bool:
    return isinstance(s, (Necessity, Possibility, Default, Likelihood))


def sentence_atoms(s: Sentence) -> frozenset[str]:
    if is_modal_atom(s):
        return conjunction_atoms([s])  # type: ignore[list-item]
    if isinstance(s, SNot):
        return sentence_atoms(s.body)
    return sentence_atoms(s.left) | sentence_atoms(s.right)


def sentence_modal_atoms(s: Sentence) -> tuple[ModalAtom, ...]:
    if is_modal_atom(s):
        return (s,)  # type: ignore[return-value]
    if isinstance(s, SNot):
        return sentence_modal_atoms(s.body)
    return sentence_modal_atoms(s.left) + sentence_modal_atoms(s.right)


def conjoin_sentence(parts: Sequence[Sentence]) -> Sentence:
    if not parts:
        return Necessity(TRUE)
    out = parts[0]
    for p in parts[1:]:
        out = SAnd(out, p)
    return out


# ---------------------------------------------------------------------------
# Negation (exact, with possibility guards)
# ---------------------------------------------------------------------------


def negate_modal(m: ModalAtom) -> ModalConjunction:
    """Exact semantic complement of a modal atom under the vacuous convention.

    Negating a conditional yields two atoms: the possibility guard excluding
    the vacuous case, plus the dual conditional on the negated consequent.
    """
    if isinstance(m, Necessity):
        return (Possibility(neg(m.body)),)
    if isinstance(m, Possibility):
        return (Necessity(neg(m.body)),)
    if isinstance(m, Default):
        return (
            Possibility(m.antecedent),
            Likelihood(m.antecedent, neg(m.consequent), m.eps),
        )
    return (
        Possibility(m.antecedent),
        Default(m.antecedent, neg(m.consequent), m.floor),
    )


# ---------------------------------------------------------------------------
# DNF case splitting
# ---------------------------------------------------------------------------


def _cross(lefts: list[ModalConjunction], rights: list[ModalConjunction]) -> list[ModalConjunction]:
    out = []
    for a in lefts:
        for b in rights:
            merged = list(a)
            for m in b:
                if m not in merged:
                    merged.append(m)
            out.append(tuple(merged))
    return out


def dnf_split(s: Sentence) -> list[ModalConjunction]:
    """Disjunctive normal form over modal atoms.

    Negated atoms are expanded through ``negate_modal``, so a distribution
    satisfies ``s`` exactly when it satisfies one of the returned conjunctions.
    """

    def pos(t: Sentence) -> list[ModalConjunction]:
        if is_modal_atom(t):
            return [(t,)]  # type: ignore[list-item]
        if isinstance(t, SNot):
            return negd(t.body)
        if isinstance(t, SAnd):
            return _cross(pos(t.left), pos(t.right))
        if isinstance(t, SOr):
            return pos(t.left) + pos(t.right)
        return negd(t.left) + pos(t.right)  # SImp

    def negd(t: Sentence) -> list[ModalConjunction]:
        if is_modal_atom(t):
            return [negate_modal(t)]  # type: ignore[arg-type]
        if isinstance(t, SNot):
            return pos(t.body)
        if isinstance(t, SAnd):
            return negd(t.left) + negd(t.right)
        if isinstance(t, SOr):
            return _cross(negd(t.left), negd(t.right))
        return _cross(pos(t.left), negd(t.right))  # SImp

    seen: list[ModalConjunction] = []
    for d in pos(s):
        if d not in seen:
            seen.append(d)
    return seen


# ---------------------------------------------------------------------------
# Clausal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClausalKb:
    """Normal form: one necessity, a possibility list, homogeneous conditionals.

    Conditional indices are dense and 1-based (position ``i-1`` in the tuple);
    mixing defaults with likelihoods is rejected at construction.
    """

    necessity: Formula
    possibilities: tuple[Formula, ...]
    conditionals: tuple[Default, ...] | tuple[Likelihood, ...]

    @property
    def kind(self) -> str:
        if not self.conditionals:
            return "none"
        return "default" if isinstance(self.conditionals[0], Default) else "likelihood"

    def atoms(self) -> ModalConjunction:
        out: list[ModalAtom] = []
        if self.necessity != TRUE:
            out.append(Necessity(self.necessity))
        out.extend(Possibility(v) for v in self.possibilities)
        out.extend(self.conditionals)
        return tuple(out)


def to_clausal(atoms: Iterable[ModalAtom]) -> ClausalKb:
    necessities: list[Formula] = []
    possibilities: list[Formula] = []
    conditionals: list[Default | Likelihood] = []
    for m in atoms:
        if isinstance(m, Necessity):
            necessities.append(m.body)
        elif isinstance(m, Possibility):
            possibilities.append(m.body)
        else:
            conditionals.append(m)
    kinds = {type(c) for c in conditionals}
    if len(kinds) > 1:
        raise MixedKindError("clausal form requires all-defaults or all-likelihoods")
    return ClausalKb(
        necessity=conj(*necessities) if necessities else TRUE,
        possibilities=tuple(possibilities),
        conditionals=tuple(conditionals),  # type: ignore[arg-type]
    )


# ---------------------------------------------------------------------------
# Bound validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    ok: bool
    violations: tuple[tuple[int, str], ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def validate_bounds(kb: ClausalKb) -> BoundReport:
    """Check the bound preconditions of the decision procedures.

    Defaults need eps < min(1/n, 1/2) and likelihoods need e < 1/n, where n is
    the number of conditionals.  Qualitative (None) and symbolic bounds pass:
    they stand for arbitrarily small errors.
    """
    n = len(kb.conditionals)
    violations: list[tuple[int, str]] = []
    for i, c in enumerate(kb.conditionals, start=1):
        if isinstance(c, Default):
            if isinstance(c.eps, Fraction):
                limit = min(Fraction(1, n), Fraction(1, 2))
                if not c.eps < limit:
                    violations.append((i, f"default error {c.eps} not below {limit}"))
        else:
            if isinstance(c.floor, Fraction):
                limit = Fraction(1, n)
                if not c.floor < limit:
                    violations.append((i, f"likelihood floor {c.floor} not below {limit}"))
    return BoundReport(ok=not violations, violations=tuple(violations))


# ---------------------------------------------------------------------------
# Dualization
# ---------------------------------------------------------------------------


def uncurry(s: Sentence) -> Sentence:
    """Flatten ``P -> (Q -> R)`` into ``(P and Q) -> R``, recursively."""
    if isinstance(s, SImp) and isinstance(s.right, SImp):
        return uncurry(SImp(SAnd(s.left, s.right.left), s.right.right))
    return s


def _pure_negate(m: ModalAtom) -> ModalAtom:
    # Purely syntactic duality: the possibility guard on conditional negation
    # is dropped, subscripts are preserved.
    if isinstance(m, Necessity):
        return Possibility(neg(m.body))
    if isinstance(m, Possibility):
        return Necessity(neg(m.body))
    if isinstance(m, Default):
        return Likelihood(m.antecedent, neg(m.consequent), m.eps)
    return Default(m.antecedent, neg(m.consequent), m.floor)


def _map_atom_formulas(s: Sentence, fn: Callable[[Formula], Formula]) -> Sentence:
    if isinstance(s, Necessity):
        return Necessity(fn(s.body))
    if isinstance(s, Possibility):
        return Possibility(fn(s.body))
    if isinstance(s, Default):
        return Default(fn(s.antecedent), fn(s.consequent), s.eps)
    if isinstance(s, Likelihood):
        return Likelihood(fn(s.antecedent), fn(s.consequent), s.floor, s.order)
    if isinstance(s, SNot):
        return SNot(_map_atom_formulas(s.body, fn))
    cls = type(s)
    return cls(_map_atom_formulas(s.left, fn), _map_atom_formulas(s.right, fn))  # type: ignore[call-arg]


def _polarity_flip(s: Sentence) -> Sentence:
    """Rename every atom that occurs only as a bare negated literal to its
    positive form.  This is schema-level renaming: it keeps theoremhood while
    producing the conventional positive presentation of dual sentences."""
    positive: set[str] = set()
    negated: set[str] = set()

    def scan(f: Formula) -> None:
        if f.kind == "atom":
            positive.add(f.name)  # type: ignore[arg-type]
        elif f.kind == "not" and f.args[0].kind == "atom":
            negated.add(f.args[0].name)  # type: ignore[arg-type]
        else:
            for g in f.args:
                scan(g)

    def scan_sentence(t: Sentence) -> None:
        if is_modal_atom(t):
            for f in atom_formulas(t):  # type: ignore[arg-type]
                scan(f)
        elif isinstance(t, SNot):
            scan_sentence(t.body)
        else:
            scan_sentence(t.left)
            scan_sentence(t.right)

    scan_sentence(s)
    flip = negated - positive
    if not flip:
        return s

    def rewrite(f: Formula) -> Formula:
        if f.kind == "not" and f.args[0].kind == "atom" and f.args[0].name in flip:
            return f.args[0]
        if f.kind in ("atom", "true", "false"):
            return f
        return Formula(f.kind, name=f.name, args=tuple(rewrite(g) for g in f.args))

    return _map_atom_formulas(s, rewrite)


def dualize(s: Sentence) -> Sentence:
    """Contrapositive of an implication with every atom swapped for its dual.

    Defaults become likelihoods and vice versa, necessity and possibility are
    exchanged, subscripts are preserved, double negations are simplified and
    atoms that end up occurring only negated are renamed to positive form.
    The possibility guard of exact negation is deliberately omitted, so for
    conditional atoms the dual is faithful only where antecedents have
    positive probability.
    """
    s = uncurry(s)
    if not isinstance(s, SImp):
        raise ValueError("dualize expects an implication between modal sentences")

    def pos(t: Sentence) -> Sentence:
        if is_modal_atom(t):
            return t
        if isinstance(t, SNot):
            return negf(t.body)
        cls = type(t)
        return cls(pos(t.left), pos(t.right))  # type: ignore[call-arg]

    def negf(t: Sentence) -> Sentence:
        if is_modal_atom(t):
            return _pure_negate(t)  # type: ignore[arg-type]
        if isinstance(t, SNot):
            return pos(t.body)
        if isinstance(t, SAnd):
            return SOr(negf(t.left), negf(t.right))
        if isinstance(t, SOr):
            return SAnd(negf(t.left), negf(t.right))
        return SAnd(pos(t.left), negf(t.right))  # SImp

    return _polarity_flip(SImp(negf(s.right), negf(s.left)))
