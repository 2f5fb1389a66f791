"""Skolem signatures and the analysis of Skolem terms inside formulas."""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from src.models.proof import Context
from src.models.syntax import (
    FORMULA_TYPES,
    Absurd,
    And,
    App,
    Atom,
    Exists,
    Forall,
    Formula,
    Implies,
    Or,
    Term,
    Var,
    alpha_equal,
    apply_subst,
    free_vars,
    quantify,
    render_term,
    strip_foralls,
    symbols_of,
    term_size,
    term_vars,
    terms_in,
)


@dataclass(frozen=True)
class SkolemSignature:
    """The data ``(f, A, x1..xn, y)`` fixed for one Skolemization."""

    symbol: str
    matrix: Formula
    xbar: tuple[str, ...]
    y: str

    def __post_init__(self) -> None:
        if self.symbol in symbols_of(self.matrix):
            raise ValueError(f"Skolem symbol {self.symbol} occurs in the matrix")
        if len(set(self.xbar)) != len(self.xbar):
            raise ValueError(f"Universal variables must be distinct: {self.xbar}")
        if self.y in self.xbar:
            raise ValueError(f"Existential variable {self.y} repeats a universal variable")
        stray = free_vars(self.matrix) - set(self.xbar) - {self.y}
        if stray:
            raise ValueError(f"Matrix has free variables outside x̄, y: {sorted(stray)}")

    @property
    def arity(self) -> int:
        return len(self.xbar)

    def skolem_term(self) -> App:
        """``f(x1, ..., xn)``."""
        return App(self.symbol, tuple(Var(x) for x in self.xbar))

    def skolemized_matrix(self) -> Formula:
        """``(f(x̄)/y)A``."""
        return apply_subst({self.y: self.skolem_term()}, self.matrix)

    def skolem_axiom(self) -> Formula:
        """``∀x̄ (f(x̄)/y)A``, the hypothesis removed by deskolemization."""
        return quantify(Forall, self.xbar, self.skolemized_matrix())

    def existential(self) -> Formula:
        """``∀x̄ ∃y A``."""
        return quantify(Forall, self.xbar, Exists(self.y, self.matrix))

    def total_instance(self, terms: tuple[Term, ...]) -> Formula:
        """``(ū/x̄, f(ū)/y)A``."""
        if len(terms) != self.arity:
            raise ValueError(f"Expected {self.arity} terms, got {len(terms)}")
        subst: dict[str, Term] = dict(zip(self.xbar, terms, strict=True))
        subst[self.y] = App(self.symbol, tuple(terms))
        return apply_subst(subst, self.matrix)

    def partial_instance(self, prefix: tuple[Term, ...]) -> Formula:
        """``(t1/x1, ..., ti/xi) ∀x(i+1)..∀xn (f(x̄)/y)A`` for ``i < n``."""
        index = len(prefix)
        if index >= self.arity:
            raise ValueError(f"Partial instance needs fewer than {self.arity} terms")
        generic = quantify(Forall, self.xbar[index:], self.skolemized_matrix())
        return apply_subst(dict(zip(self.xbar[:index], prefix, strict=True)), generic)


@dataclass(frozen=True)
class PartialInstance:
    index: int
    prefix: tuple[Term, ...]


@dataclass(frozen=True)
class TotalInstance:
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class AllFrozen:
    pass


@dataclass(frozen=True)
class HasUnfrozen:
    pass


InstanceClass = PartialInstance | TotalInstance | AllFrozen | HasUnfrozen


@dataclass(frozen=True)
class FrozenReport:
    """Per-occurrence frozen status of a term inside a formula."""

    term: Term
    occurrences: tuple[bool, ...]

    @property
    def frozen(self) -> bool:
        return all(self.occurrences)


def _formulas(source: Formula | Context | Iterable[Formula]) -> tuple[Formula, ...]:
    if isinstance(source, FORMULA_TYPES):
        return (source,)
    if isinstance(source, Context):
        return source.formulas()
    formulas = tuple(source)
    for item in formulas:
        if not isinstance(item, FORMULA_TYPES):
            raise TypeError(f"Not a formula: {item!r}")
    return formulas


def f_term_order(term: Term) -> tuple[int, str]:
    """Largest first, ties broken by printed form."""
    return (-term_size(term), render_term(term))


def f_terms_of(source: Formula | Context | Iterable[Formula], symbol: str) -> list[App]:
    """Distinct subterms headed by ``symbol``, superterms before their subterms."""
    found: set[App] = set()
    for formula in _formulas(source):
        for term, _bound in terms_in(formula):
            if isinstance(term, App) and term.symbol == symbol:
                found.add(term)
    return sorted(found, key=f_term_order)


def is_frozen(term: Term, formula: Formula) -> FrozenReport:
    """Report, for each occurrence of ``term`` in ``formula``, whether it is frozen."""
    variables = term_vars(term)
    occurrences = tuple(
        not (variables & bound) for sub, bound in terms_in(formula) if sub == term
    )
    return FrozenReport(term=term, occurrences=occurrences)


def all_frozen(source: Formula | Context | Iterable[Formula], symbol: str) -> bool:
    """Whether every occurrence of every ``symbol``-term is frozen."""
    for formula in _formulas(source):
        for term, bound in terms_in(formula):
            if isinstance(term, App) and term.symbol == symbol and term_vars(term) & bound:
                return False
    return True


def classify(formula: Formula, sig: SkolemSignature) -> InstanceClass:
    """Classify ``formula`` with respect to the Skolem signature."""
    pattern = sig.skolemized_matrix()
    pattern_vars = frozenset(sig.xbar)
    for index in range(sig.arity):
        split = strip_foralls(formula, sig.arity - index)
        if split is None:
            continue
        _binders, body = split
        assignment = match_formula(pattern, body, pattern_vars)
        if assignment is None:
            continue
        prefix = tuple(assignment.get(x, Var(x)) for x in sig.xbar[:index])
        if alpha_equal(sig.partial_instance(prefix), formula):
            return PartialInstance(index=index, prefix=prefix)

    assignment = match_formula(pattern, formula, pattern_vars)
    if assignment is not None:
        terms = tuple(assignment.get(x, Var(x)) for x in sig.xbar)
        if alpha_equal(sig.total_instance(terms), formula):
            return TotalInstance(terms=terms)

    return AllFrozen() if all_frozen(formula, sig.symbol) else HasUnfrozen()


def is_live_partial(formula: Formula, sig: SkolemSignature) -> bool:
    """A partial instance that actually carries a Skolem term with a bound argument."""
    return isinstance(classify(formula, sig), PartialInstance) and not all_frozen(
        formula, sig.symbol
    )


def match_formula(
    pattern: Formula, target: Formula, pattern_vars: frozenset[str]
) -> dict[str, Term] | None:
    """Find terms for the free ``pattern_vars`` making ``pattern`` alpha-equal to ``target``.

    Candidates are returned without the final alpha check; callers confirm by
    rebuilding the instance.
    """
    assignment: dict[str, Term] = {}
    if _match_formula(pattern, target, pattern_vars, {}, frozenset(), assignment):
        return assignment
    return None


def _match_formula(
    pattern: Formula,
    target: Formula,
    pattern_vars: frozenset[str],
    binders: Mapping[str, str],
    target_bound: frozenset[str],
    assignment: dict[str, Term],
) -> bool:
    match pattern:
        case Atom(predicate, args):
            return (
                isinstance(target, Atom)
                and target.predicate == predicate
                and len(target.args) == len(args)
                and all(
                    _match_term(p, t, pattern_vars, binders, target_bound, assignment)
                    for p, t in zip(args, target.args, strict=True)
                )
            )
        case Absurd():
            return isinstance(target, Absurd)
        case Implies(left, right) | And(left, right) | Or(left, right):
            return (
                type(target) is type(pattern)
                and _match_formula(
                    left, target.left, pattern_vars, binders, target_bound, assignment
                )
                and _match_formula(
                    right, target.right, pattern_vars, binders, target_bound, assignment
                )
            )
        case Forall(var, body) | Exists(var, body):
            if type(target) is not type(pattern):
                return False
            return _match_formula(
                body,
                target.body,
                pattern_vars,
                {**binders, var: target.var},
                target_bound | {target.var},
                assignment,
            )
    return False


def _match_term(
    pattern: Term,
    target: Term,
    pattern_vars: frozenset[str],
    binders: Mapping[str, str],
    target_bound: frozenset[str],
    assignment: dict[str, Term],
) -> bool:
    match pattern:
        case Var(name) if name in binders:
            return target == Var(binders[name])
        case Var(name) if name in pattern_vars:
            if term_vars(target) & target_bound:
                return False
            if name in assignment:
                return assignment[name] == target
            assignment[name] = target
            return True
        case Var(name):
            return target == pattern and name not in target_bound
        case App(symbol, args):
            return (
                isinstance(target, App)
                and target.symbol == symbol
                and len(target.args) == len(args)
                and all(
                    _match_term(p, t, pattern_vars, binders, target_bound, assignment)
                    for p, t in zip(args, target.args, strict=True)
                )
            )
    return False
