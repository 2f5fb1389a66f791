"""Bounded proof search used to cross-check deskolemization results.

The search is a single-succedent intuitionistic sequent calculus in the style
of G3i. Invertible rules are applied eagerly and consume their principal
formula, ``⇒`` and ``∀`` on the left keep theirs, and a branch never revisits
a sequent it has already seen. Every hypothesis on a branch carries a natural
deduction proof of itself, so a closed search tree is already a kernel proof.

Only ``Provable`` is ever a definite answer. Running out of budget, or
failing to find a proof, gives ``Unknown``.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field, replace
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from src.config import config
from src.models.proof import (
    AbsurdElim,
    AndElimL,
    AndElimR,
    AndIntro,
    ExistsElim,
    ExistsIntro,
    ForallElim,
    ForallIntro,
    Hyp,
    ImpElim,
    ImpIntro,
    OrElim,
    OrIntroL,
    OrIntroR,
    Proof,
    Sequent,
)
from src.models.syntax import (
    Absurd,
    And,
    App,
    Exists,
    Forall,
    Formula,
    Implies,
    Or,
    Term,
    Var,
    alpha_equal,
    alpha_key,
    free_vars,
    fresh_var,
    instantiate,
    render_term,
    term_size,
    term_vars,
    terms_in,
)
from src.services.kernel import KernelError, check, labels_of, names_of

logger = logging.getLogger(__name__)

HypothesisEntry = tuple[Formula, Proof]


class SearchBudget(BaseModel):
    """Limits of one proof search."""

    model_config = ConfigDict(frozen=True)

    max_depth: int = Field(gt=0)
    max_terms: int = Field(gt=0)

    @classmethod
    def from_config(cls) -> "SearchBudget":
        return cls(max_depth=config.oracle_max_depth, max_terms=config.oracle_max_terms)


@dataclass(frozen=True)
class Provable:
    proof: Proof


@dataclass(frozen=True)
class Unknown:
    reason: str


SearchResult = Provable | Unknown


@dataclass(frozen=True)
class _Branch:
    """Names taken and sequents visited on the current search branch."""

    names: frozenset[str]
    labels: frozenset[str]
    eigenvariables: tuple[str, ...] = ()
    visited: frozenset[Any] = field(default_factory=frozenset)

    def fresh_var(self) -> str:
        return fresh_var(self.names)

    def fresh_label(self) -> str:
        index = 0
        while f"o{index}" in self.labels:
            index += 1
        return f"o{index}"

    def bind(self, name: str | None = None, label: str | None = None) -> "_Branch":
        names = self.names | {name} if name is not None else self.names
        labels = self.labels | {label} if label is not None else self.labels
        eigenvariables = self.eigenvariables + (name,) if name is not None else self.eigenvariables
        return replace(self, names=names, labels=labels, eigenvariables=eigenvariables)

    def absorb(self, proof: Proof) -> "_Branch":
        names, labels = self.names | names_of(proof), self.labels | labels_of(proof)
        return replace(self, names=names, labels=labels)

    def visit(self, state: Any) -> "_Branch":
        return replace(self, visited=self.visited | {state})


def _signature(formulas: Iterable[Formula]) -> tuple[list[App], dict[str, int]]:
    """Constants and function symbols (with arities) mentioned by ``formulas``."""
    constants: dict[str, App] = {}
    functions: dict[str, int] = {}
    for formula in formulas:
        for term, _ in terms_in(formula):
            if isinstance(term, App):
                if term.args:
                    functions.setdefault(term.symbol, len(term.args))
                else:
                    constants.setdefault(term.symbol, term)
    return [constants[name] for name in sorted(constants)], functions


def ground_terms(formulas: Iterable[Formula], max_terms: int) -> list[Term]:
    """Constants plus one layer of function applications over them.

    Terms are ordered by size and then by their text, and at most
    ``max_terms`` are kept.
    """
    constants, functions = _signature(formulas)
    terms: list[Term] = list(constants)
    for symbol in sorted(functions):
        terms.extend(App(symbol, args) for args in _tuples(tuple(constants), functions[symbol]))
    terms.sort(key=lambda term: (term_size(term), render_term(term)))
    return terms[:max_terms]


def _tuples(base: tuple[Term, ...], arity: int) -> Iterable[tuple[Term, ...]]:
    if arity == 0:
        yield ()
        return
    for head in base:
        for tail in _tuples(base, arity - 1):
            yield (head,) + tail


class _Search:
    """One bounded search for a fixed sequent."""

    def __init__(self, sequent: Sequent, budget: SearchBudget) -> None:
        formulas = sequent.context.formulas() + (sequent.conclusion,)
        self.ground = ground_terms(formulas, budget.max_terms)
        self.free = [Var(name) for name in sorted(set().union(*(free_vars(f) for f in formulas)))]
        names = sequent.names() | frozenset().union(*(term_vars(t) for t in self.ground))
        self.filler = fresh_var(names)
        self.root = _Branch(names=names | {self.filler}, labels=frozenset(sequent.context.labels()))
        self.failed: set[Any] = set()
        self.nodes = 0

    def universe(self, branch: _Branch) -> list[Term]:
        terms: list[Term] = [*self.ground, *self.free]
        terms.extend(Var(name) for name in branch.eigenvariables)
        return terms or [Var(self.filler)]

    def run(self, goal: Formula, context: list[HypothesisEntry], depth: int) -> Proof | None:
        return self._search(goal, context, depth, self.root)

    def _search(
        self, goal: Formula, context: list[HypothesisEntry], depth: int, branch: _Branch
    ) -> Proof | None:
        self.nodes += 1
        closed = _close(goal, context)
        if closed is not None:
            return closed
        if depth == 0:
            return None

        state = (
            alpha_key(goal),
            frozenset(alpha_key(formula) for formula, _ in context),
            branch.eigenvariables,
        )
        if state in branch.visited or (depth, state) in self.failed:
            return None
        branch = branch.visit(state)

        applied, proof = self._invertible(goal, context, depth, branch)
        if not applied:
            proof = self._choices(goal, context, depth, branch)
        if proof is None:
            self.failed.add((depth, state))
        return proof

    def _invertible(
        self, goal: Formula, context: list[HypothesisEntry], depth: int, branch: _Branch
    ) -> tuple[bool, Proof | None]:
        """Apply the first invertible rule that fits; the bool says whether one did."""
        for index, (formula, proof) in enumerate(context):
            rest = context[:index] + context[index + 1 :]
            match formula:
                case And(left, right):
                    extended = _extend(rest, (left, AndElimL(proof)), (right, AndElimR(proof)))
                    return True, self._search(goal, extended, depth - 1, branch)
                case Exists():
                    name, label = branch.fresh_var(), branch.fresh_label()
                    inner = self._search(
                        goal,
                        rest + [(instantiate(formula, Var(name)), Hyp(label))],
                        depth - 1,
                        branch.bind(name, label),
                    )
                    return True, None if inner is None else ExistsElim(proof, name, label, inner)

        match goal:
            case Implies(left, right):
                label = branch.fresh_label()
                body = self._search(
                    right, context + [(left, Hyp(label))], depth - 1, branch.bind(label=label)
                )
                return True, None if body is None else ImpIntro(label, left, body)
            case And(left, right):
                first = self._search(left, context, depth - 1, branch)
                if first is None:
                    return True, None
                second = self._search(right, context, depth - 1, branch)
                return True, None if second is None else AndIntro(first, second)
            case Forall():
                name = branch.fresh_var()
                body = self._search(
                    instantiate(goal, Var(name)), context, depth - 1, branch.bind(name)
                )
                return True, None if body is None else ForallIntro(name, body)

        for index, (formula, proof) in enumerate(context):
            if not isinstance(formula, Or):
                continue
            rest = context[:index] + context[index + 1 :]
            label = branch.fresh_label()
            inner = branch.bind(label=label)
            left = self._search(goal, rest + [(formula.left, Hyp(label))], depth - 1, inner)
            if left is None:
                return True, None
            right = self._search(goal, rest + [(formula.right, Hyp(label))], depth - 1, inner)
            return True, None if right is None else OrElim(proof, label, left, label, right)

        return False, None

    def _choices(
        self, goal: Formula, context: list[HypothesisEntry], depth: int, branch: _Branch
    ) -> Proof | None:
        match goal:
            case Or(left, right):
                found = self._search(left, context, depth - 1, branch)
                if found is not None:
                    return OrIntroL(right, found)
                found = self._search(right, context, depth - 1, branch)
                if found is not None:
                    return OrIntroR(left, found)
            case Exists():
                for term in self.universe(branch):
                    found = self._search(instantiate(goal, term), context, depth - 1, branch)
                    if found is not None:
                        return ExistsIntro(term, goal, found)

        for formula, proof in context:
            match formula:
                case Implies(left, right):
                    if _present(context, right):
                        continue
                    argument = self._search(left, context, depth - 1, branch)
                    if argument is None:
                        continue
                    found = self._search(
                        goal,
                        context + [(right, ImpElim(proof, argument))],
                        depth - 1,
                        branch.absorb(argument),
                    )
                    if found is not None:
                        return found
                case Forall():
                    for term in self.universe(branch):
                        instance = instantiate(formula, term)
                        if _present(context, instance):
                            continue
                        found = self._search(
                            goal, context + [(instance, ForallElim(term, proof))], depth - 1, branch
                        )
                        if found is not None:
                            return found
        return None


def _present(context: list[HypothesisEntry], formula: Formula) -> bool:
    return any(alpha_equal(candidate, formula) for candidate, _ in context)


def _extend(context: list[HypothesisEntry], *entries: HypothesisEntry) -> list[HypothesisEntry]:
    result = list(context)
    for formula, proof in entries:
        if not _present(result, formula):
            result.append((formula, proof))
    return result


def _close(goal: Formula, context: list[HypothesisEntry]) -> Proof | None:
    """Axiom or ``⊥`` on the left, if either closes the goal."""
    for formula, proof in context:
        if alpha_equal(formula, goal):
            return proof
    for formula, proof in context:
        if isinstance(formula, Absurd):
            return AbsurdElim(goal, proof)
    return None


class ProofSearch:
    """Iterative-deepening prover for small intuitionistic sequents."""

    def __init__(self, max_depth: int | None = None, max_terms: int | None = None) -> None:
        self.default_budget = SearchBudget(
            max_depth=max_depth if max_depth is not None else config.oracle_max_depth,
            max_terms=max_terms if max_terms is not None else config.oracle_max_terms,
        )

    def prove(self, sequent: Sequent, budget: SearchBudget | None = None) -> SearchResult:
        """Search for a proof of ``sequent`` within ``budget``.

        Returns:
            ``Provable`` with a proof that checks against ``sequent``, or
            ``Unknown`` when none was found.
        """
        budget = budget or self.default_budget
        search = _Search(sequent, budget)
        context: list[HypothesisEntry] = [
            (formula, Hyp(label)) for label, formula in sequent.context
        ]

        for depth in range(1, budget.max_depth + 1):
            found = search.run(sequent.conclusion, context, depth)
            if found is None:
                continue
            try:
                check(found, sequent)
            except KernelError as e:
                logger.warning(f"Search produced a proof that does not check: {e}")
                return Unknown(f"ill-formed search result: {e}")
            logger.info(f"Proof found at depth {depth} after {search.nodes} search nodes")
            return Provable(found)

        logger.debug(f"No proof within depth {budget.max_depth} ({search.nodes} search nodes)")
        return Unknown(f"no proof within depth {budget.max_depth}")


# Global proof search instance
proof_search = ProofSearch()


def prove(sequent: Sequent, budget: SearchBudget | None = None) -> SearchResult:
    return proof_search.prove(sequent, budget)
