"""Normalization of natural deduction proofs.

Detours (an introduction immediately eliminated) are contracted, and the
eliminations standing below an ``∨E``, ``∃E`` or ``⊥E`` are permuted upwards
into its minor premises. Redexes are contracted leftmost-outermost until none
remain.
"""

import logging
from dataclasses import dataclass
from typing import Literal

from pydantic import BaseModel

from src.config import config
from src.models.proof import (
    ELIMINATIONS,
    AbsurdElim,
    AndElimL,
    AndElimR,
    AndIntro,
    Context,
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
    Path,
    Proof,
    Sequent,
    node_at,
    premises,
    render_path,
    replace_at,
    walk,
    with_premises,
)
from src.models.skolem import PartialInstance, SkolemSignature, all_frozen, classify
from src.models.syntax import (
    Absurd,
    And,
    Exists,
    Forall,
    Formula,
    Implies,
    Or,
    Var,
    all_names,
    alpha_equal,
    fresh_var,
    instantiate,
    render_formula,
)
from src.services.kernel import (
    KernelError,
    annotate,
    discharged_labels,
    fresh_label,
    graft,
    infer,
    labels_of,
    names_of,
    rename_eigenvariables,
    rename_labels,
    replace_hyp,
    subst_proof,
)

logger = logging.getLogger(__name__)

RedexKind = Literal["detour", "permutative"]

# Placeholder label standing for the major premise while inspecting an elimination
_HOLE = "∘"


class NormalizationError(Exception):
    """Base exception for normalization errors."""

    code = "normalization-error"

    def __init__(self, message: str, path: Path = ()) -> None:
        super().__init__(message)
        self.message = message
        self.path = path


class StepBudgetExceeded(NormalizationError):
    """More contractions were needed than the step budget allows."""

    code = "step-budget-exceeded"


class InvalidRedexPath(NormalizationError):
    """The redex does not name a redex of the proof."""

    code = "invalid-redex-path"


class SubjectReductionFailure(NormalizationError):
    """A contraction changed the derived sequent."""

    code = "subject-reduction-failure"


@dataclass(frozen=True)
class Redex:
    path: Path
    kind: RedexKind
    connective: str

    def describe(self) -> str:
        return f"{self.kind}({self.connective}) at {render_path(self.path)}"


class FrozenPropagationReport(BaseModel):
    """Outcome of checking that Skolem terms stay frozen throughout a normal proof."""

    hypothesis_holds: bool
    ok: bool
    path: str | None = None
    formula: str | None = None


def _detour(node: Proof) -> str | None:
    match node:
        case ImpElim(ImpIntro(), _):
            return "imp"
        case AndElimL(AndIntro()) | AndElimR(AndIntro()):
            return "and"
        case OrElim(OrIntroL() | OrIntroR(), _, _, _, _):
            return "or"
        case ForallElim(_, ForallIntro()):
            return "forall"
        case ExistsElim(ExistsIntro(), _, _, _):
            return "exists"
    return None


def _permutation(node: Proof) -> str | None:
    if not isinstance(node, ELIMINATIONS):
        return None
    match premises(node)[0]:
        case OrElim():
            return "or-elim"
        case ExistsElim():
            return "exists-elim"
        case AbsurdElim():
            return "absurd-elim"
    return None


def redex_at(node: Proof, path: Path = ()) -> Redex | None:
    """The redex rooted at ``node``, if any."""
    connective = _detour(node)
    if connective is not None:
        return Redex(path=path, kind="detour", connective=connective)
    connective = _permutation(node)
    if connective is not None:
        return Redex(path=path, kind="permutative", connective=connective)
    return None


def find_redexes(proof: Proof) -> list[Redex]:
    """All redexes, leftmost-outermost first."""
    found = []
    for path, node in walk(proof):
        redex = redex_at(node, path)
        if redex is not None:
            found.append(redex)
    return found


def first_redex(proof: Proof) -> Redex | None:
    for path, node in walk(proof):
        redex = redex_at(node, path)
        if redex is not None:
            return redex
    return None


def is_normal(proof: Proof) -> bool:
    return first_redex(proof) is None


def _scope(proof: Proof, path: Path, context: Context) -> tuple[frozenset[str], frozenset[str]]:
    """Over-approximate the variable names and labels in scope at ``path``."""
    names = set(context.names())
    labels = set(context.labels())
    node = proof
    for index in path:
        match node:
            case ImpIntro(_, hypothesis, _):
                names |= all_names(hypothesis)
            case OrElim(major, _, _, _, _) | ExistsElim(major, _, _, _) if index > 0:
                names |= names_of(major)
        if isinstance(node, ForallIntro | ExistsElim):
            names.add(node.eigenvariable)
        labels.update(discharged_labels(node))
        node = premises(node)[index]
    return frozenset(names), frozenset(labels)


def _frame(elimination: Proof) -> tuple[Proof, ...]:
    """The premises of an elimination other than its major premise."""
    return premises(elimination)[1:]


def _isolate(
    elimination: Proof, labels: frozenset[str], names: frozenset[str], reserved: frozenset[str]
) -> Proof:
    """Prepare an elimination to be moved under new hypotheses.

    Discharge labels in ``labels`` and eigenvariables in ``names`` are renamed
    in the minor premises and on the elimination itself.
    """
    minors = [
        rename_eigenvariables(rename_labels(minor, labels), names, reserved)
        for minor in _frame(elimination)
    ]
    node = with_premises(elimination, [Hyp(_HOLE), *minors])
    taken = set(labels) | labels_of(node)
    match node:
        case OrElim(hole, left_label, left, right_label, right):
            if left_label in labels:
                new = fresh_label(left_label, taken)
                taken.add(new)
                left, left_label = replace_hyp(left, left_label, Hyp(new)), new
            if right_label in labels:
                new = fresh_label(right_label, taken)
                right, right_label = replace_hyp(right, right_label, Hyp(new)), new
            node = OrElim(hole, left_label, left, right_label, right)
        case ExistsElim(hole, eigenvariable, label, minor):
            if label in labels:
                new = fresh_label(label, taken)
                minor, label = replace_hyp(minor, label, Hyp(new)), new
            if eigenvariable in names:
                renamed = fresh_var(names | reserved | names_of(node))
                minor = subst_proof(minor, {eigenvariable: Var(renamed)}, reserved | names)
                eigenvariable = renamed
            node = ExistsElim(hole, eigenvariable, label, minor)
    return node


def _plug(elimination: Proof, major: Proof) -> Proof:
    return with_premises(elimination, [major, *_frame(elimination)])


class Normalizer:
    """Contracts redexes until a proof is normal."""

    def __init__(
        self, step_budget: int | None = None, check_every_step: bool | None = None
    ) -> None:
        """Initialize the normalizer.

        Args:
            step_budget: Maximum number of contractions. Defaults to config value.
            check_every_step: Re-check the derived sequent after every contraction.
                Defaults to config value.
        """
        self._step_budget = step_budget if step_budget is not None else config.normalize_step_budget
        self._check_every_step = (
            check_every_step if check_every_step is not None else config.check_every_step
        )

    def reduce_once(self, proof: Proof, redex: Redex, context: Context | None = None) -> Proof:
        """Contract ``redex`` in ``proof``.

        Raises:
            InvalidRedexPath: If the path leaves the proof or names no such redex.
        """
        context = context or Context()
        try:
            node = node_at(proof, redex.path)
        except IndexError as e:
            raise InvalidRedexPath(f"no node at {render_path(redex.path)}", redex.path) from e
        if redex_at(node, redex.path) != redex:
            raise InvalidRedexPath(f"no {redex.describe()}", redex.path)

        names, labels = _scope(proof, redex.path, context)
        reserved = names | names_of(proof)
        if redex.kind == "detour":
            contracted = self._contract_detour(node, names, labels)
        else:
            contracted = self._permute(node, redex.path, names, labels, reserved)
        logger.debug(f"Contracted {redex.describe()}")
        return replace_at(proof, redex.path, contracted)

    def _contract_detour(
        self, node: Proof, names: frozenset[str], labels: frozenset[str]
    ) -> Proof:
        match node:
            case ImpElim(ImpIntro(label, _, body), argument):
                return graft(body, label, argument, names, labels)
            case AndElimL(AndIntro(left, _)):
                return left
            case AndElimR(AndIntro(_, right)):
                return right
            case OrElim(OrIntroL(_, injected), left_label, left, _, _):
                return graft(left, left_label, injected, names, labels)
            case OrElim(OrIntroR(_, injected), _, _, right_label, right):
                return graft(right, right_label, injected, names, labels)
            case ForallElim(witness, ForallIntro(eigenvariable, body)):
                return subst_proof(body, {eigenvariable: witness}, names)
            case ExistsElim(ExistsIntro(witness, _, injected), eigenvariable, label, minor):
                instantiated = subst_proof(minor, {eigenvariable: witness}, names)
                return graft(instantiated, label, injected, names, labels)
        raise InvalidRedexPath("not a detour")

    def _permute(
        self,
        node: Proof,
        path: Path,
        names: frozenset[str],
        labels: frozenset[str],
        reserved: frozenset[str],
    ) -> Proof:
        match premises(node)[0]:
            case OrElim(major, left_label, left, right_label, right):
                moved = _isolate(
                    node, frozenset({left_label, right_label}), names_of(major), reserved
                )
                return OrElim(
                    major, left_label, _plug(moved, left), right_label, _plug(moved, right)
                )

            case ExistsElim(major, eigenvariable, label, minor):
                outer = names_of(with_premises(node, [Hyp(_HOLE), *_frame(node)]))
                if eigenvariable in outer:
                    renamed = fresh_var(reserved | outer)
                    minor = subst_proof(minor, {eigenvariable: Var(renamed)}, reserved | outer)
                    eigenvariable = renamed
                moved = _isolate(
                    node,
                    frozenset({label}),
                    names_of(major) | {eigenvariable},
                    reserved | {eigenvariable},
                )
                return ExistsElim(major, eigenvariable, label, _plug(moved, minor))

            case AbsurdElim(target, absurdity):
                return self._absorb(node, target, absurdity, path, names, labels, reserved)

        raise InvalidRedexPath("not a permutative redex", path)

    def _absorb(
        self,
        node: Proof,
        target: Formula,
        absurdity: Proof,
        path: Path,
        names: frozenset[str],
        labels: frozenset[str],
        reserved: frozenset[str],
    ) -> Proof:
        """Contract an elimination whose major premise is ``⊥E``.

        The new conclusion is read off ``target``; for ``∨E`` and ``∃E`` the
        ``⊥E`` moves into the left branch or the minor premise instead.
        """
        in_scope = names | names_of(absurdity)
        match node, target:
            case ImpElim(), Implies(_, right):
                return AbsurdElim(right, absurdity)
            case AndElimL(), And(left, _):
                return AbsurdElim(left, absurdity)
            case AndElimR(), And(_, right):
                return AbsurdElim(right, absurdity)
            case ForallElim(witness, _), Forall():
                return AbsurdElim(instantiate(target, witness), absurdity)
            case AbsurdElim(conclusion, _), Absurd():
                return AbsurdElim(conclusion, absurdity)
            case OrElim(_, left_label, left, _, _), Or(disjunct, _):
                left = rename_eigenvariables(left, in_scope, reserved)
                return graft(left, left_label, AbsurdElim(disjunct, absurdity), reserved, labels)
            case ExistsElim(_, eigenvariable, label, minor), Exists():
                name = fresh_var(reserved | names_of(node))
                minor = rename_eigenvariables(minor, in_scope, reserved | {name})
                minor = subst_proof(minor, {eigenvariable: Var(name)}, reserved | {name})
                instance = AbsurdElim(instantiate(target, Var(name)), absurdity)
                return graft(minor, label, instance, reserved | {name}, labels)
        raise InvalidRedexPath(
            f"⊥E concludes {render_formula(target)}, which does not fit the elimination", path
        )

    def normalize(
        self, proof: Proof, context: Context | None = None, budget: int | None = None
    ) -> Proof:
        """Contract leftmost-outermost redexes until the proof is normal.

        Raises:
            StepBudgetExceeded: If more than ``budget`` contractions are needed.
        """
        context = context or Context()
        limit = budget if budget is not None else self._step_budget
        expected = self._expected(proof, context) if self._check_every_step else None

        steps = 0
        while (redex := first_redex(proof)) is not None:
            if steps >= limit:
                raise StepBudgetExceeded(f"normalization needs more than {limit} steps", redex.path)
            proof = self.reduce_once(proof, redex, context)
            steps += 1
            if expected is not None:
                self._check_step(proof, context, expected, redex)

        logger.info(f"Normalized in {steps} steps")
        return proof

    def _expected(self, proof: Proof, context: Context) -> Formula | None:
        try:
            return infer(proof, context.as_env())
        except KernelError as e:
            logger.debug(f"Not checking each step, the proof does not check here: {e}")
            return None

    def _check_step(self, proof: Proof, context: Context, expected: Formula, redex: Redex) -> None:
        try:
            result = infer(proof, context.as_env())
        except KernelError as e:
            raise SubjectReductionFailure(f"after {redex.describe()}: {e}", e.path) from e
        if not alpha_equal(result, expected):
            raise SubjectReductionFailure(
                f"after {redex.describe()} the proof derives {render_formula(result)}",
                redex.path,
            )


def validate_frozen_propagation(
    proof: Proof, sequent: Sequent, sig: SkolemSignature
) -> FrozenPropagationReport:
    """Check that every formula of a normal proof is a partial instance or fully frozen.

    The property is only claimed when the end-sequent, apart from hypotheses
    that are partial instances such as the Skolem axiom itself, has all
    Skolem terms frozen. Otherwise the report says the hypothesis fails and
    ``ok`` is true.
    """
    outer = [
        formula
        for formula in sequent.context.formulas()
        if not isinstance(classify(formula, sig), PartialInstance)
    ]
    end = (*outer, sequent.conclusion)
    if not all_frozen(end, sig.symbol):
        return FrozenPropagationReport(hypothesis_holds=False, ok=True)

    for path, node, _env, conclusion in annotate(proof, sequent.context.as_env()):
        candidates = [conclusion]
        if isinstance(node, ImpIntro):
            candidates.append(node.hypothesis)
        for formula in candidates:
            if all_frozen(formula, sig.symbol):
                continue
            if isinstance(classify(formula, sig), PartialInstance):
                continue
            logger.warning(
                f"Unfrozen Skolem term at {render_path(path)}: {render_formula(formula)}"
            )
            return FrozenPropagationReport(
                hypothesis_holds=True,
                ok=False,
                path=render_path(path),
                formula=render_formula(formula),
            )
    return FrozenPropagationReport(hypothesis_holds=True, ok=True)


# Global normalizer instance
normalizer = Normalizer()


def reduce_once(proof: Proof, redex: Redex, context: Context | None = None) -> Proof:
    return normalizer.reduce_once(proof, redex, context)


def normalize(proof: Proof, context: Context | None = None, budget: int | None = None) -> Proof:
    return normalizer.normalize(proof, context, budget)
