"""Natural deduction checker and the structural proof transformations built on it."""

import logging
from collections.abc import Iterable, Iterator, Mapping

from src.models.proof import (
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
from src.models.syntax import (
    Absurd,
    And,
    Exists,
    Forall,
    Formula,
    Implies,
    Or,
    Term,
    Var,
    all_names,
    alpha_equal,
    apply_subst,
    free_vars,
    fresh_var,
    instantiate,
    render_formula,
    strip_foralls,
    symbols_of,
    term_vars,
)

logger = logging.getLogger(__name__)

Env = Mapping[str, Formula]


class KernelError(Exception):
    """Base exception for proof checking errors."""

    code = "kernel-error"

    def __init__(self, message: str, path: Path = ()) -> None:
        super().__init__(message)
        self.message = message
        self.path = path

    def __str__(self) -> str:
        return f"{render_path(self.path)}: {self.message}"


class RuleMismatch(KernelError):
    """Premises do not have the shape the rule requires."""

    code = "rule-mismatch"


class UnknownLabel(KernelError):
    """A hypothesis label is neither discharged above nor in the context."""

    code = "unknown-label"


class EigenvariableViolation(KernelError):
    """An eigenvariable occurs free where the rule forbids it."""

    code = "eigenvariable-violation"


class ConclusionMismatch(KernelError):
    """The proof derives a different formula than the sequent states."""

    code = "conclusion-mismatch"


class LabelClash(KernelError):
    """A label is introduced while another hypothesis with that label is in scope."""

    code = "label-clash"


class ShapeMismatch(KernelError):
    """A formula lacks the quantifier prefix an operation needs."""

    code = "shape-mismatch"


def _env_free(env: Env) -> frozenset[str]:
    return frozenset().union(*(free_vars(formula) for formula in env.values()))


def _mismatch(kind: type, formula: Formula, path: Path, what: str) -> RuleMismatch:
    return RuleMismatch(
        f"{what} must be {kind.__name__.lower()}, got {render_formula(formula)}", path
    )


def _discharge(env: Env, label: str, formula: Formula, path: Path) -> dict[str, Formula]:
    if label in env:
        raise LabelClash(f"label {label} is already in scope", path)
    return {**env, label: formula}


def infer(proof: Proof, env: Env, path: Path = ()) -> Formula:
    """Synthesize the conclusion of ``proof`` under the labeled hypotheses ``env``.

    Raises:
        KernelError: At the first incorrect node, in left-to-right pre-order.
    """
    match proof:
        case Hyp(label):
            if label not in env:
                raise UnknownLabel(f"no hypothesis labeled {label}", path)
            return env[label]

        case ImpIntro(label, hypothesis, body):
            inner = _discharge(env, label, hypothesis, path)
            return Implies(hypothesis, infer(body, inner, path + (0,)))

        case ImpElim(major, minor):
            implication = infer(major, env, path + (0,))
            if not isinstance(implication, Implies):
                raise _mismatch(Implies, implication, path, "major premise")
            argument = infer(minor, env, path + (1,))
            if not alpha_equal(implication.left, argument):
                raise RuleMismatch(
                    f"minor premise proves {render_formula(argument)}, "
                    f"expected {render_formula(implication.left)}",
                    path,
                )
            return implication.right

        case AndIntro(left, right):
            return And(infer(left, env, path + (0,)), infer(right, env, path + (1,)))

        case AndElimL(sub):
            conjunction = infer(sub, env, path + (0,))
            if not isinstance(conjunction, And):
                raise _mismatch(And, conjunction, path, "premise")
            return conjunction.left

        case AndElimR(sub):
            conjunction = infer(sub, env, path + (0,))
            if not isinstance(conjunction, And):
                raise _mismatch(And, conjunction, path, "premise")
            return conjunction.right

        case OrIntroL(other, sub):
            return Or(infer(sub, env, path + (0,)), other)

        case OrIntroR(other, sub):
            return Or(other, infer(sub, env, path + (0,)))

        case OrElim(major, left_label, left, right_label, right):
            disjunction = infer(major, env, path + (0,))
            if not isinstance(disjunction, Or):
                raise _mismatch(Or, disjunction, path, "major premise")
            left_env = _discharge(env, left_label, disjunction.left, path)
            right_env = _discharge(env, right_label, disjunction.right, path)
            left_result = infer(left, left_env, path + (1,))
            right_result = infer(right, right_env, path + (2,))
            if not alpha_equal(left_result, right_result):
                raise RuleMismatch(
                    f"branches prove {render_formula(left_result)} "
                    f"and {render_formula(right_result)}",
                    path,
                )
            return left_result

        case ForallIntro(eigenvariable, body):
            result = infer(body, env, path + (0,))
            if eigenvariable in _env_free(env):
                raise EigenvariableViolation(
                    f"{eigenvariable} is free in an open hypothesis", path
                )
            return Forall(eigenvariable, result)

        case ForallElim(witness, sub):
            universal = infer(sub, env, path + (0,))
            if not isinstance(universal, Forall):
                raise _mismatch(Forall, universal, path, "premise")
            return instantiate(universal, witness)

        case ExistsIntro(witness, target, sub):
            if not isinstance(target, Exists):
                raise _mismatch(Exists, target, path, "target")
            instance = infer(sub, env, path + (0,))
            expected = instantiate(target, witness)
            if not alpha_equal(instance, expected):
                raise RuleMismatch(
                    f"premise proves {render_formula(instance)}, "
                    f"expected {render_formula(expected)}",
                    path,
                )
            return target

        case ExistsElim(major, eigenvariable, label, minor):
            existential = infer(major, env, path + (0,))
            if not isinstance(existential, Exists):
                raise _mismatch(Exists, existential, path, "major premise")
            if eigenvariable in free_vars(existential):
                raise EigenvariableViolation(
                    f"{eigenvariable} is free in {render_formula(existential)}", path
                )
            if eigenvariable in _env_free(env):
                raise EigenvariableViolation(
                    f"{eigenvariable} is free in an open hypothesis", path
                )
            witness = instantiate(existential, Var(eigenvariable))
            result = infer(minor, _discharge(env, label, witness, path), path + (1,))
            if eigenvariable in free_vars(result):
                raise EigenvariableViolation(
                    f"{eigenvariable} is free in the conclusion {render_formula(result)}", path
                )
            return result

        case AbsurdElim(target, sub):
            premise = infer(sub, env, path + (0,))
            if not isinstance(premise, Absurd):
                raise _mismatch(Absurd, premise, path, "premise")
            return target

    raise TypeError(f"Not a proof: {proof!r}")


def check(proof: Proof, sequent: Sequent) -> Formula:
    """Check that ``proof`` derives ``sequent``; returns the derived conclusion."""
    result = infer(proof, sequent.context.as_env())
    if not alpha_equal(result, sequent.conclusion):
        raise ConclusionMismatch(
            f"proof derives {render_formula(result)}, "
            f"sequent states {render_formula(sequent.conclusion)}",
        )
    return result


def verify(proof: Proof, sequent: Sequent) -> KernelError | None:
    """Like ``check`` but returns the error instead of raising it."""
    try:
        check(proof, sequent)
    except KernelError as e:
        return e
    return None


def premise_envs(node: Proof, env: Env) -> tuple[dict[str, Formula], ...]:
    """Hypothesis environments of the immediate premises of ``node``."""
    base = dict(env)
    match node:
        case ImpIntro(label, hypothesis, _):
            return ({**base, label: hypothesis},)
        case OrElim(major, left_label, _, right_label, _):
            disjunction = infer(major, env)
            assert isinstance(disjunction, Or)
            return (
                base,
                {**base, left_label: disjunction.left},
                {**base, right_label: disjunction.right},
            )
        case ExistsElim(major, eigenvariable, label, _):
            existential = infer(major, env)
            assert isinstance(existential, Exists)
            return (base, {**base, label: instantiate(existential, Var(eigenvariable))})
    return tuple(base for _ in premises(node))


def env_at(proof: Proof, env: Env, path: Path) -> dict[str, Formula]:
    """Hypothesis environment in force at the node ``path``."""
    current: dict[str, Formula] = dict(env)
    node = proof
    for index in path:
        current = premise_envs(node, current)[index]
        node = premises(node)[index]
    return current


def annotate(
    proof: Proof, env: Env, path: Path = ()
) -> Iterator[tuple[Path, Proof, dict[str, Formula], Formula]]:
    """Pre-order ``(path, node, env, conclusion)`` for every node of a correct proof."""
    conclusion = infer(proof, env, path)
    yield path, proof, dict(env), conclusion
    for index, (sub, sub_env) in enumerate(
        zip(premises(proof), premise_envs(proof, env), strict=True)
    ):
        yield from annotate(sub, sub_env, path + (index,))


def _annotations(node: Proof) -> tuple[Formula, ...]:
    match node:
        case ImpIntro(_, hypothesis, _):
            return (hypothesis,)
        case OrIntroL(other, _) | OrIntroR(other, _):
            return (other,)
        case ExistsIntro(_, target, _) | AbsurdElim(target, _):
            return (target,)
    return ()


def _witnesses(node: Proof) -> tuple[Term, ...]:
    match node:
        case ForallElim(witness, _) | ExistsIntro(witness, _, _):
            return (witness,)
    return ()


def names_of(proof: Proof) -> frozenset[str]:
    """Every variable name written anywhere in the proof, eigenvariables included."""
    names: set[str] = set()
    for _path, node in walk(proof):
        for formula in _annotations(node):
            names |= all_names(formula)
        for witness in _witnesses(node):
            names |= term_vars(witness)
        if isinstance(node, ForallIntro | ExistsElim):
            names.add(node.eigenvariable)
    return frozenset(names)


def eigenvariables_of(proof: Proof) -> tuple[str, ...]:
    return tuple(
        node.eigenvariable
        for _path, node in walk(proof)
        if isinstance(node, ForallIntro | ExistsElim)
    )


def discharged_labels(node: Proof) -> tuple[str, ...]:
    match node:
        case ImpIntro(label, _, _) | ExistsElim(_, _, label, _):
            return (label,)
        case OrElim(_, left_label, _, right_label, _):
            return (left_label, right_label)
    return ()


def labels_of(proof: Proof) -> frozenset[str]:
    """Every hypothesis label used or discharged in the proof."""
    labels: set[str] = set()
    for _path, node in walk(proof):
        if isinstance(node, Hyp):
            labels.add(node.label)
        labels.update(discharged_labels(node))
    return frozenset(labels)


def open_labels(proof: Proof) -> frozenset[str]:
    """Labels used by ``proof`` that no node of ``proof`` discharges."""
    match proof:
        case Hyp(label):
            return frozenset({label})
        case ImpIntro(label, _, body):
            return open_labels(body) - {label}
        case OrElim(major, left_label, left, right_label, right):
            return (
                open_labels(major)
                | (open_labels(left) - {left_label})
                | (open_labels(right) - {right_label})
            )
        case ExistsElim(major, _, label, minor):
            return open_labels(major) | (open_labels(minor) - {label})
    return frozenset().union(*(open_labels(sub) for sub in premises(proof)))


def symbols_of_proof(proof: Proof) -> frozenset[str]:
    """Function symbols written in annotations and witnesses of the proof."""
    found: set[str] = set()
    for _path, node in walk(proof):
        for formula in _annotations(node):
            found |= symbols_of(formula)
        for witness in _witnesses(node):
            found |= symbols_of(witness)
    return frozenset(found)


def _subst_eigen(
    subst: Mapping[str, Term],
    eigenvariable: str,
    scope: Proof,
    context_names: frozenset[str],
    extra_names: frozenset[str] = frozenset(),
) -> tuple[str, Proof]:
    active = {name: term for name, term in subst.items() if name != eigenvariable}
    if not active:
        return eigenvariable, scope
    incoming = frozenset().union(*(term_vars(term) for term in active.values()))
    if eigenvariable in incoming:
        renamed = fresh_var(
            names_of(scope) | extra_names | context_names | incoming | set(active) | {eigenvariable}
        )
        scope = subst_proof(scope, {eigenvariable: Var(renamed)}, context_names)
        eigenvariable = renamed
    return eigenvariable, subst_proof(scope, active, context_names)


def subst_proof(
    proof: Proof, subst: Mapping[str, Term], avoid: Iterable[str] = frozenset()
) -> Proof:
    """Apply a term substitution to every formula and witness of ``proof``.

    Eigenvariables behave as binders over the premise they govern. An
    eigenvariable that would capture a variable of the substitution's range is
    renamed to a fresh name outside ``avoid``.
    """
    if not subst:
        return proof
    context_names = frozenset(avoid)
    match proof:
        case Hyp():
            return proof
        case ImpIntro(label, hypothesis, body):
            return ImpIntro(
                label, apply_subst(subst, hypothesis), subst_proof(body, subst, context_names)
            )
        case OrIntroL(other, sub):
            return OrIntroL(apply_subst(subst, other), subst_proof(sub, subst, context_names))
        case OrIntroR(other, sub):
            return OrIntroR(apply_subst(subst, other), subst_proof(sub, subst, context_names))
        case ForallIntro(eigenvariable, body):
            eigenvariable, body = _subst_eigen(subst, eigenvariable, body, context_names)
            return ForallIntro(eigenvariable, body)
        case ForallElim(witness, sub):
            return ForallElim(apply_subst(subst, witness), subst_proof(sub, subst, context_names))
        case ExistsIntro(witness, target, sub):
            return ExistsIntro(
                apply_subst(subst, witness),
                apply_subst(subst, target),
                subst_proof(sub, subst, context_names),
            )
        case ExistsElim(major, eigenvariable, label, minor):
            new_major = subst_proof(major, subst, context_names)
            eigenvariable, minor = _subst_eigen(
                subst, eigenvariable, minor, context_names, names_of(major)
            )
            return ExistsElim(new_major, eigenvariable, label, minor)
        case AbsurdElim(target, sub):
            return AbsurdElim(apply_subst(subst, target), subst_proof(sub, subst, context_names))
    return with_premises(proof, [subst_proof(sub, subst, context_names) for sub in premises(proof)])


def rename_eigenvariables(
    proof: Proof, avoid: Iterable[str], reserved: Iterable[str] = frozenset()
) -> Proof:
    """Rename every eigenvariable that belongs to ``avoid``.

    New names are pairwise distinct and avoid ``avoid``, ``reserved`` and every
    name of ``proof``. Eigenvariables outside ``avoid`` keep their names.
    """
    clashing = frozenset(avoid)
    if not clashing & frozenset(eigenvariables_of(proof)):
        return proof
    taken = set(clashing) | set(reserved) | names_of(proof)

    def rename(node: Proof) -> Proof:
        match node:
            case ForallIntro(eigenvariable, body):
                body = rename(body)
                if eigenvariable in clashing:
                    new = fresh_var(taken)
                    taken.add(new)
                    body = subst_proof(body, {eigenvariable: Var(new)}, taken)
                    eigenvariable = new
                return ForallIntro(eigenvariable, body)
            case ExistsElim(major, eigenvariable, label, minor):
                major, minor = rename(major), rename(minor)
                if eigenvariable in clashing:
                    new = fresh_var(taken)
                    taken.add(new)
                    minor = subst_proof(minor, {eigenvariable: Var(new)}, taken)
                    eigenvariable = new
                return ExistsElim(major, eigenvariable, label, minor)
        return with_premises(node, [rename(sub) for sub in premises(node)])

    return rename(proof)


def fresh_label(base: str, taken: Iterable[str]) -> str:
    """``base`` itself if unused, otherwise ``base-1``, ``base-2``, ..."""
    used = set(taken)
    if base not in used:
        return base
    index = 1
    while f"{base}-{index}" in used:
        index += 1
    return f"{base}-{index}"


def _relabel(proof: Proof, old: str, new: str) -> Proof:
    return replace_hyp(proof, old, Hyp(new))


def replace_hyp(proof: Proof, label: str, replacement: Proof) -> Proof:
    """Substitute ``replacement`` for every open use of the hypothesis ``label``."""
    match proof:
        case Hyp(name):
            return replacement if name == label else proof
        case ImpIntro(name, _, _) if name == label:
            return proof
        case OrElim(major, left_label, left, right_label, right):
            return OrElim(
                replace_hyp(major, label, replacement),
                left_label,
                left if left_label == label else replace_hyp(left, label, replacement),
                right_label,
                right if right_label == label else replace_hyp(right, label, replacement),
            )
        case ExistsElim(major, eigenvariable, name, minor):
            return ExistsElim(
                replace_hyp(major, label, replacement),
                eigenvariable,
                name,
                minor if name == label else replace_hyp(minor, label, replacement),
            )
    return with_premises(
        proof, [replace_hyp(sub, label, replacement) for sub in premises(proof)]
    )


def rename_labels(proof: Proof, avoid: Iterable[str]) -> Proof:
    """Rename every discharge label that belongs to ``avoid`` to a fresh label."""
    clashing = frozenset(avoid)
    taken = set(clashing) | labels_of(proof)

    def pick(label: str) -> str:
        new = fresh_label(label, taken)
        taken.add(new)
        return new

    def rename(node: Proof) -> Proof:
        match node:
            case ImpIntro(label, hypothesis, body):
                body = rename(body)
                if label in clashing:
                    new = pick(label)
                    body, label = _relabel(body, label, new), new
                return ImpIntro(label, hypothesis, body)
            case OrElim(major, left_label, left, right_label, right):
                major, left, right = rename(major), rename(left), rename(right)
                if left_label in clashing:
                    new = pick(left_label)
                    left, left_label = _relabel(left, left_label, new), new
                if right_label in clashing:
                    new = pick(right_label)
                    right, right_label = _relabel(right, right_label, new), new
                return OrElim(major, left_label, left, right_label, right)
            case ExistsElim(major, eigenvariable, label, minor):
                major, minor = rename(major), rename(minor)
                if label in clashing:
                    new = pick(label)
                    minor, label = _relabel(minor, label, new), new
                return ExistsElim(major, eigenvariable, label, minor)
        return with_premises(node, [rename(sub) for sub in premises(node)])

    return rename(proof)


def graft(
    target: Proof,
    label: str,
    replacement: Proof,
    avoid_vars: Iterable[str] = frozenset(),
    avoid_labels: Iterable[str] = frozenset(),
) -> Proof:
    """Plug ``replacement`` into every open use of the hypothesis ``label`` in ``target``.

    The replacement's eigenvariables and discharge labels are freshened against
    everything ``target`` mentions plus the given extras, so hypotheses in
    scope at the use sites cannot interfere with them.
    """
    fresh_vars = names_of(target) | frozenset(avoid_vars)
    prepared = rename_eigenvariables(replacement, fresh_vars, fresh_vars)
    prepared = rename_labels(prepared, labels_of(target) | frozenset(avoid_labels) | {label})
    return replace_hyp(target, label, prepared)


def weaken(proof: Proof, sequent: Sequent, label: str, formula: Formula) -> tuple[Proof, Sequent]:
    """Add the hypothesis ``label: formula`` to a derivation of ``sequent``.

    Raises:
        LabelClash: If ``label`` is already used by the context or the proof.
    """
    if label in sequent.context.labels() or label in labels_of(proof):
        raise LabelClash(f"label {label} is already used")
    incoming = free_vars(formula)
    weakened = rename_eigenvariables(proof, incoming, sequent.names() | all_names(formula))
    logger.debug(f"Weakened by {label}: {render_formula(formula)}")
    return weakened, Sequent(sequent.context.extend((label, formula)), sequent.conclusion)


def weaken_context(proof: Proof, sequent: Sequent, extra: Context) -> tuple[Proof, Sequent]:
    """Weaken by every hypothesis of ``extra`` in order."""
    for label, formula in extra:
        proof, sequent = weaken(proof, sequent, label, formula)
    return proof, sequent


def forall_elims(
    proof: Proof, sequent: Sequent, terms: Iterable[Term]
) -> tuple[Proof, Sequent]:
    """Instantiate the leading universal quantifiers of the conclusion with ``terms``.

    Raises:
        ShapeMismatch: If the conclusion has fewer leading quantifiers than terms.
    """
    witnesses = tuple(terms)
    if strip_foralls(sequent.conclusion, len(witnesses)) is None:
        raise ShapeMismatch(
            f"{render_formula(sequent.conclusion)} has fewer than "
            f"{len(witnesses)} leading universal quantifiers"
        )
    conclusion = sequent.conclusion
    for witness in witnesses:
        assert isinstance(conclusion, Forall)
        proof = ForallElim(witness, proof)
        conclusion = instantiate(conclusion, witness)
    return proof, Sequent(sequent.context, conclusion)


__all__ = [
    "ConclusionMismatch",
    "EigenvariableViolation",
    "KernelError",
    "annotate",
    "LabelClash",
    "RuleMismatch",
    "ShapeMismatch",
    "UnknownLabel",
    "check",
    "discharged_labels",
    "eigenvariables_of",
    "env_at",
    "forall_elims",
    "fresh_label",
    "graft",
    "infer",
    "labels_of",
    "names_of",
    "node_at",
    "open_labels",
    "premise_envs",
    "rename_eigenvariables",
    "rename_labels",
    "replace_at",
    "replace_hyp",
    "subst_proof",
    "symbols_of_proof",
    "verify",
    "weaken",
    "weaken_context",
]
