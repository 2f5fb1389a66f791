"""First-order terms and formulas.

Binders are named. Every comparison of formulas that matters for logic goes
through alpha-equivalence, and every renaming picks its name with
``fresh_var`` so results are reproducible.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import Any

# Names of the form z<digits> are handed out by fresh_var
FRESH_PREFIX = "z"


@dataclass(frozen=True)
class Var:
    """A variable."""

    name: str


@dataclass(frozen=True)
class App:
    """A function symbol applied to arguments; constants have no arguments."""

    symbol: str
    args: tuple["Term", ...] = ()


Term = Var | App


@dataclass(frozen=True)
class Atom:
    """An atomic formula ``P(t1, ..., tn)``."""

    predicate: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Absurd:
    """Absurdity; negation is encoded as ``C => Absurd``."""


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Atom | Absurd | Implies | And | Or | Forall | Exists
Quantifier = Forall | Exists

TERM_TYPES = (Var, App)
FORMULA_TYPES = (Atom, Absurd, Implies, And, Or, Forall, Exists)


def fresh_var(avoid: Iterable[str]) -> str:
    """Return the first name ``z0, z1, ...`` not in ``avoid``."""
    taken = set(avoid)
    index = 0
    while f"{FRESH_PREFIX}{index}" in taken:
        index += 1
    return f"{FRESH_PREFIX}{index}"


def is_reserved_name(name: str) -> bool:
    """Whether ``name`` belongs to the fresh-variable scheme."""
    return name.startswith(FRESH_PREFIX) and name[len(FRESH_PREFIX) :].isdigit()


def term_vars(term: Term) -> frozenset[str]:
    """Variables occurring in a term."""
    match term:
        case Var(name):
            return frozenset({name})
        case App(_, args):
            return frozenset().union(*(term_vars(arg) for arg in args))
    raise TypeError(f"Not a term: {term!r}")


def term_size(term: Term) -> int:
    """Node count of a term."""
    match term:
        case Var():
            return 1
        case App(_, args):
            return 1 + sum(term_size(arg) for arg in args)
    raise TypeError(f"Not a term: {term!r}")


def subterms(term: Term) -> Iterable[Term]:
    """Every subterm of ``term``, the term itself first."""
    yield term
    if isinstance(term, App):
        for arg in term.args:
            yield from subterms(arg)


def free_vars(x: Term | Formula) -> frozenset[str]:
    """Free variables of a term or formula."""
    match x:
        case Var() | App():
            return term_vars(x)
        case Atom(_, args):
            return frozenset().union(*(term_vars(arg) for arg in args))
        case Absurd():
            return frozenset()
        case Implies(left, right) | And(left, right) | Or(left, right):
            return free_vars(left) | free_vars(right)
        case Forall(var, body) | Exists(var, body):
            return free_vars(body) - {var}
    raise TypeError(f"Not a term or formula: {x!r}")


def all_names(x: Term | Formula) -> frozenset[str]:
    """Every variable name of a term or formula, binders included."""
    match x:
        case Var() | App():
            return term_vars(x)
        case Atom(_, args):
            return frozenset().union(*(term_vars(arg) for arg in args))
        case Absurd():
            return frozenset()
        case Implies(left, right) | And(left, right) | Or(left, right):
            return all_names(left) | all_names(right)
        case Forall(var, body) | Exists(var, body):
            return all_names(body) | {var}
    raise TypeError(f"Not a term or formula: {x!r}")


def symbols_of(x: Term | Formula) -> frozenset[str]:
    """Function symbols (constants included) of a term or formula."""
    match x:
        case Var():
            return frozenset()
        case App(symbol, args):
            return frozenset({symbol}).union(*(symbols_of(arg) for arg in args))
        case Atom(_, args):
            return frozenset().union(*(symbols_of(arg) for arg in args))
        case Absurd():
            return frozenset()
        case Implies(left, right) | And(left, right) | Or(left, right):
            return symbols_of(left) | symbols_of(right)
        case Forall(_, body) | Exists(_, body):
            return symbols_of(body)
    raise TypeError(f"Not a term or formula: {x!r}")


def predicates_of(formula: Formula) -> frozenset[str]:
    """Predicate symbols of a formula."""
    match formula:
        case Atom(predicate, _):
            return frozenset({predicate})
        case Absurd():
            return frozenset()
        case Implies(left, right) | And(left, right) | Or(left, right):
            return predicates_of(left) | predicates_of(right)
        case Forall(_, body) | Exists(_, body):
            return predicates_of(body)
    raise TypeError(f"Not a formula: {formula!r}")


def apply_subst(subst: Mapping[str, Term], x: Any) -> Any:
    """Apply a simultaneous, capture-avoiding substitution to a term or formula."""
    if not subst:
        return x
    match x:
        case Var(name):
            return subst.get(name, x)
        case App(symbol, args):
            return App(symbol, tuple(apply_subst(subst, arg) for arg in args))
        case Atom(predicate, args):
            return Atom(predicate, tuple(apply_subst(subst, arg) for arg in args))
        case Absurd():
            return x
        case Implies(left, right):
            return Implies(apply_subst(subst, left), apply_subst(subst, right))
        case And(left, right):
            return And(apply_subst(subst, left), apply_subst(subst, right))
        case Or(left, right):
            return Or(apply_subst(subst, left), apply_subst(subst, right))
        case Forall() | Exists():
            return _subst_under_binder(subst, x)
    raise TypeError(f"Not a term or formula: {x!r}")


def _subst_under_binder(subst: Mapping[str, Term], quantified: Quantifier) -> Quantifier:
    body_free = free_vars(quantified.body)
    active = {
        name: term
        for name, term in subst.items()
        if name != quantified.var and name in body_free
    }
    if not active:
        return quantified
    incoming = frozenset().union(*(term_vars(term) for term in active.values()))
    var, body = quantified.var, quantified.body
    if var in incoming:
        renamed = fresh_var(incoming | all_names(body) | set(active))
        body = apply_subst({var: Var(renamed)}, body)
        var = renamed
    return type(quantified)(var, apply_subst(active, body))


def instantiate(quantified: Quantifier, term: Term) -> Formula:
    """Body of a quantified formula with ``term`` for the bound variable."""
    return apply_subst({quantified.var: term}, quantified.body)


def quantify(kind: type[Forall] | type[Exists], names: Iterable[str], body: Formula) -> Formula:
    """Wrap ``body`` in quantifiers over ``names``, outermost first."""
    result = body
    for name in reversed(tuple(names)):
        result = kind(name, result)
    return result


def strip_foralls(formula: Formula, count: int) -> tuple[tuple[str, ...], Formula] | None:
    """Split off exactly ``count`` leading universal quantifiers, or None."""
    binders: list[str] = []
    current = formula
    for _ in range(count):
        if not isinstance(current, Forall):
            return None
        binders.append(current.var)
        current = current.body
    return tuple(binders), current


def alpha_key(x: Term | Formula, env: Mapping[str, int] | None = None, depth: int = 0) -> Any:
    """Hashable key equal for two values exactly when they are alpha-equivalent.

    Bound variables are replaced by the level of their binder.
    """
    env = env or {}
    match x:
        case Var(name):
            return ("bound", env[name]) if name in env else ("free", name)
        case App(symbol, args):
            return ("app", symbol, tuple(alpha_key(arg, env, depth) for arg in args))
        case Atom(predicate, args):
            return ("atom", predicate, tuple(alpha_key(arg, env, depth) for arg in args))
        case Absurd():
            return ("absurd",)
        case Implies(left, right):
            return ("imp", alpha_key(left, env, depth), alpha_key(right, env, depth))
        case And(left, right):
            return ("and", alpha_key(left, env, depth), alpha_key(right, env, depth))
        case Or(left, right):
            return ("or", alpha_key(left, env, depth), alpha_key(right, env, depth))
        case Forall(var, body):
            return ("forall", alpha_key(body, {**env, var: depth}, depth + 1))
        case Exists(var, body):
            return ("exists", alpha_key(body, {**env, var: depth}, depth + 1))
    raise TypeError(f"Not a term or formula: {x!r}")


def alpha_equal(a: Term | Formula, b: Term | Formula) -> bool:
    """Alpha-equivalence of terms or formulas."""
    return alpha_key(a) == alpha_key(b)


def replace_subterm(x: Any, target: Term, replacement: Var) -> Any:
    """Replace occurrences of ``target`` by the variable ``replacement``.

    Occurrences under a binder of one of the variables of ``target`` are not
    occurrences of the same term and are left alone. A binder named like
    ``replacement`` is renamed first so the new variable stays free.
    """
    match x:
        case Var():
            return replacement if x == target else x
        case App(symbol, args):
            if x == target:
                return replacement
            return App(symbol, tuple(replace_subterm(arg, target, replacement) for arg in args))
        case Atom(predicate, args):
            return Atom(
                predicate, tuple(replace_subterm(arg, target, replacement) for arg in args)
            )
        case Absurd():
            return x
        case Implies(left, right):
            return Implies(
                replace_subterm(left, target, replacement),
                replace_subterm(right, target, replacement),
            )
        case And(left, right):
            return And(
                replace_subterm(left, target, replacement),
                replace_subterm(right, target, replacement),
            )
        case Or(left, right):
            return Or(
                replace_subterm(left, target, replacement),
                replace_subterm(right, target, replacement),
            )
        case Forall(var, body) | Exists(var, body):
            if var in term_vars(target):
                return x
            if var == replacement.name:
                renamed = fresh_var(all_names(body) | term_vars(target) | {replacement.name})
                body = apply_subst({var: Var(renamed)}, body)
                var = renamed
            return type(x)(var, replace_subterm(body, target, replacement))
    raise TypeError(f"Not a term or formula: {x!r}")


def terms_in(formula: Formula) -> Iterable[tuple[Term, frozenset[str]]]:
    """Every term position of a formula with the variables bound around it."""

    def walk(current: Formula, bound: frozenset[str]) -> Iterable[tuple[Term, frozenset[str]]]:
        match current:
            case Atom(_, args):
                for arg in args:
                    for sub in subterms(arg):
                        yield sub, bound
            case Absurd():
                return
            case Implies(left, right) | And(left, right) | Or(left, right):
                yield from walk(left, bound)
                yield from walk(right, bound)
            case Forall(var, body) | Exists(var, body):
                yield from walk(body, bound | {var})

    return walk(formula, frozenset())


def render_term(term: Term) -> str:
    """Canonical prefix text of a term."""
    match term:
        case Var(name):
            return name
        case App(symbol, ()):
            return symbol
        case App(symbol, args):
            return f"({symbol} {' '.join(render_term(arg) for arg in args)})"
    raise TypeError(f"Not a term: {term!r}")


def render_formula(formula: Formula) -> str:
    """Canonical prefix text of a formula."""
    match formula:
        case Atom(predicate, ()):
            return f"(atom {predicate})"
        case Atom(predicate, args):
            return f"(atom {predicate} {' '.join(render_term(arg) for arg in args)})"
        case Absurd():
            return "false"
        case Implies(left, right):
            return f"(imp {render_formula(left)} {render_formula(right)})"
        case And(left, right):
            return f"(and {render_formula(left)} {render_formula(right)})"
        case Or(left, right):
            return f"(or {render_formula(left)} {render_formula(right)})"
        case Forall(var, body):
            return f"(forall {var} {render_formula(body)})"
        case Exists(var, body):
            return f"(exists {var} {render_formula(body)})"
    raise TypeError(f"Not a formula: {formula!r}")
