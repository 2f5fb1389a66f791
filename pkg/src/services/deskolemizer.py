"""Removal of Skolem hypotheses from natural deduction proofs.

Given a proof ``πA`` of ``Γ ⊢ ∀x̄∃yA`` and a proof of ``Γ, ∀x̄ (f(x̄)/y)A ⊢ B``
the deskolemizer builds a proof of ``Γ ⊢ B``. The general construction
accepts frozen Skolem terms in the end-sequent and proves ``Γ, Δ ⊢ B`` where
``Δ`` holds one total instance of the Skolem axiom per Skolem term.

The pieces are exposed separately:

- ``prune`` replaces a frozen Skolem term by a fresh variable everywhere in a proof.
- ``eliminate_hypothesis`` discharges one total instance with an ``∃E`` on ``πA``.
- ``assert_partial_positions`` checks that partial instances only feed ``∀E``.
- ``deskolemize_general`` and ``deskolemize`` run the whole induction.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass

from pydantic import BaseModel

from src.config import config
from src.models.proof import (
    AbsurdElim,
    Context,
    ExistsElim,
    ExistsIntro,
    ForallElim,
    ForallIntro,
    Hyp,
    ImpIntro,
    OrIntroL,
    OrIntroR,
    Path,
    Proof,
    Sequent,
    node_at,
    premises,
    render_path,
    walk,
    with_premises,
)
from src.models.skolem import (
    SkolemSignature,
    TotalInstance,
    all_frozen,
    classify,
    f_term_order,
    f_terms_of,
    is_live_partial,
)
from src.models.syntax import (
    App,
    Exists,
    Forall,
    Formula,
    Term,
    Var,
    all_names,
    alpha_equal,
    apply_subst,
    free_vars,
    fresh_var,
    render_formula,
    render_term,
    replace_subterm,
    subterms,
    symbols_of,
    term_vars,
    terms_in,
)
from src.services.kernel import (
    annotate,
    check,
    eigenvariables_of,
    forall_elims,
    fresh_label,
    graft,
    infer,
    labels_of,
    names_of,
    open_labels,
    premise_envs,
    rename_eigenvariables,
    rename_labels,
    replace_hyp,
    symbols_of_proof,
    weaken_context,
)
from src.services.normalizer import Normalizer, normalizer as default_normalizer

logger = logging.getLogger(__name__)


class DeskolemizationError(Exception):
    """Base exception for deskolemization errors."""

    code = "deskolemization-error"

    def __init__(self, message: str, path: Path = ()) -> None:
        super().__init__(message)
        self.message = message
        self.path = path


class NotFrozen(DeskolemizationError):
    """A Skolem term occurrence mentions a bound variable."""

    code = "not-frozen"


class VariableNotFresh(DeskolemizationError):
    """The replacement variable already occurs."""

    code = "variable-not-fresh"


class TermOccurs(DeskolemizationError):
    """The Skolem term to eliminate still occurs in the remaining sequent."""

    code = "term-occurs"


class FrozennessViolation(DeskolemizationError):
    """A formula that must have only frozen Skolem terms does not."""

    code = "frozenness-violation"


class PartialPositionViolation(DeskolemizationError):
    """A partial instance is used other than as the premise of a ``∀E``."""

    code = "partial-position-violation"


class ContextMismatch(DeskolemizationError):
    """The proof of the existential axiom does not fit the Skolemized proof."""

    code = "context-mismatch"


class SymbolOccurs(DeskolemizationError):
    """The Skolem symbol occurs where it must not."""

    code = "symbol-occurs"


class BadAxiomShape(DeskolemizationError):
    """The axiom is not a closed ``∀x̄∃yA`` with distinct universal variables."""

    code = "bad-axiom-shape"


class SymbolInUse(DeskolemizationError):
    """The chosen Skolem symbol already occurs in the theory."""

    code = "symbol-in-use"


class ArityMismatch(DeskolemizationError):
    """A Skolem term is applied to the wrong number of arguments."""

    code = "arity-mismatch"


class PartialPositionReport(BaseModel):
    """Result of checking where partial instances occur in a normal proof."""

    ok: bool
    path: str | None = None
    formula: str | None = None


@dataclass(frozen=True)
class DeltaEntry:
    """A total instance ``(ū/x̄, f(ū)/y)A`` standing for the Skolem term ``f(ū)``."""

    term: App
    ubar: tuple[Term, ...]
    formula: Formula
    label: str


@dataclass(frozen=True)
class TotalInstanceSet:
    """Total instances ordered superterms first."""

    entries: tuple[DeltaEntry, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def terms(self) -> tuple[App, ...]:
        return tuple(entry.term for entry in self.entries)

    def labels(self) -> tuple[str, ...]:
        return tuple(entry.label for entry in self.entries)

    def context(self) -> Context:
        return Context(tuple((entry.label, entry.formula) for entry in self.entries))


@dataclass(frozen=True)
class Deskolemization:
    """A proof of ``Γ′, Δ ⊢ B′`` together with ``Δ``."""

    proof: Proof
    sequent: Sequent
    delta: TotalInstanceSet


@dataclass(frozen=True)
class RoundTrip:
    """Every artifact of replaying a proof through a Skolemized theory and back."""

    theory: Context
    skolemized_theory: Context
    sig: SkolemSignature
    skolem_label: str
    skolemized_proof: Proof
    skolemized_sequent: Sequent
    proof: Proof
    sequent: Sequent


def delta_label(term: Term) -> str:
    """``sk-`` followed by the tokens of the printed term."""
    tokens = render_term(term).replace("(", " ").replace(")", " ").split()
    return "sk-" + "-".join(tokens)


def term_occurs(term: Term, formula: Formula) -> bool:
    return any(sub == term for sub, _bound in terms_in(formula))


def _term_occurs_in_proof(term: Term, proof: Proof) -> bool:
    for _path, node in walk(proof):
        match node:
            case ImpIntro(_, formula, _) | OrIntroL(formula, _) | OrIntroR(formula, _):
                if term_occurs(term, formula):
                    return True
            case AbsurdElim(formula, _):
                if term_occurs(term, formula):
                    return True
            case ExistsIntro(witness, formula, _):
                if term_occurs(term, formula) or _in_term(term, witness):
                    return True
            case ForallElim(witness, _):
                if _in_term(term, witness):
                    return True
    return False


def _in_term(term: Term, host: Term) -> bool:
    return any(sub == term for sub in subterms(host))


def _replace_in_proof(proof: Proof, term: Term, replacement: Var) -> Proof:
    """Apply the term replacement to every formula and witness of a proof."""
    subs = [_replace_in_proof(sub, term, replacement) for sub in premises(proof)]
    match proof:
        case ImpIntro(label, hypothesis, _):
            return ImpIntro(label, replace_subterm(hypothesis, term, replacement), subs[0])
        case OrIntroL(other, _):
            return OrIntroL(replace_subterm(other, term, replacement), subs[0])
        case OrIntroR(other, _):
            return OrIntroR(replace_subterm(other, term, replacement), subs[0])
        case ForallElim(witness, _):
            return ForallElim(replace_subterm(witness, term, replacement), subs[0])
        case ExistsIntro(witness, target, _):
            return ExistsIntro(
                replace_subterm(witness, term, replacement),
                replace_subterm(target, term, replacement),
                subs[0],
            )
        case AbsurdElim(target, _):
            return AbsurdElim(replace_subterm(target, term, replacement), subs[0])
    return with_premises(proof, subs)


def _first_unfrozen(proof: Proof, sequent: Sequent, symbol: str) -> tuple[Path, Formula] | None:
    for path, _node, _env, conclusion in annotate(proof, sequent.context.as_env()):
        if not all_frozen(conclusion, symbol):
            return path, conclusion
    return None


def _sequent_formulas(sequent: Sequent) -> tuple[Formula, ...]:
    return (*sequent.context.formulas(), sequent.conclusion)


class Deskolemizer:
    """Proof transformations that remove Skolem hypotheses."""

    def __init__(
        self, normalizer: Normalizer | None = None, check_every_step: bool | None = None
    ) -> None:
        """Initialize the deskolemizer.

        Args:
            normalizer: Normalizer for input proofs. Defaults to the shared instance.
            check_every_step: Re-check every intermediate proof. Defaults to config value.
        """
        self._normalizer = normalizer or default_normalizer
        self._check_every_step = (
            check_every_step if check_every_step is not None else config.check_every_step
        )

    def _checked(self, proof: Proof, sequent: Sequent) -> tuple[Proof, Sequent]:
        if self._check_every_step:
            check(proof, sequent)
        return proof, sequent

    def prune(self, proof: Proof, sequent: Sequent, term: App, z: str) -> tuple[Proof, Sequent]:
        """Replace the frozen Skolem term ``term`` by the variable ``z`` throughout.

        Raises:
            NotFrozen: If a Skolem term of the end-sequent or of the proof is not frozen.
            VariableNotFresh: If ``z`` already occurs in the sequent or the proof.
        """
        symbol = term.symbol
        if not all_frozen(_sequent_formulas(sequent), symbol):
            raise NotFrozen(f"the end-sequent has an unfrozen {symbol}-term")
        clashing = names_of(proof) - frozenset(eigenvariables_of(proof))
        if z in sequent.names() or z in clashing:
            raise VariableNotFresh(f"{z} already occurs")

        unfrozen = _first_unfrozen(proof, sequent, symbol)
        if unfrozen is not None:
            logger.debug(f"Normalizing before pruning {render_term(term)}")
            proof = self._normalizer.normalize(proof, sequent.context)
            unfrozen = _first_unfrozen(proof, sequent, symbol)
            if unfrozen is not None:
                path, formula = unfrozen
                raise NotFrozen(f"unfrozen {symbol}-term in {render_formula(formula)}", path)

        reserved = sequent.names() | {z}
        renamed = rename_eigenvariables(proof, term_vars(term) | {z}, reserved)
        replacement = Var(z)
        pruned = _replace_in_proof(renamed, term, replacement)
        context = Context(
            tuple(
                (label, replace_subterm(formula, term, replacement))
                for label, formula in sequent.context
            )
        )
        conclusion = replace_subterm(sequent.conclusion, term, replacement)
        logger.debug(f"Pruned {render_term(term)} to {z}")
        return self._checked(pruned, Sequent(context, conclusion))

    def eliminate_hypothesis(
        self,
        pi_a: Proof,
        pi_a_seq: Sequent,
        proof: Proof,
        sequent: Sequent,
        label: str,
        ubar: Iterable[Term],
        sig: SkolemSignature,
        avoid: Iterable[str] = frozenset(),
    ) -> tuple[Proof, Sequent]:
        """Discharge the total instance labeled ``label`` through an ``∃E`` on ``πA``.

        Raises:
            TermOccurs: If ``f(ū)`` occurs in the rest of the context or the conclusion.
            ContextMismatch: If ``πA`` needs hypotheses the sequent lacks.
        """
        terms = tuple(ubar)
        term = App(sig.symbol, terms)
        rest = sequent.context.without(label)
        for formula in _sequent_formulas(Sequent(rest, sequent.conclusion)):
            if term_occurs(term, formula):
                raise TermOccurs(f"{render_term(term)} occurs in {render_formula(formula)}")
        if not rest.includes(pi_a_seq.context):
            raise ContextMismatch("the existential axiom needs hypotheses outside the context")

        z = fresh_var(
            sequent.names()
            | names_of(proof)
            | names_of(pi_a)
            | pi_a_seq.names()
            | frozenset().union(*(term_vars(t) for t in terms))
            | frozenset(avoid)
        )
        pruned, _pruned_seq = self.prune(proof, sequent, term, z)

        lemma = rename_labels(pi_a, rest.labels())
        missing = Context(tuple(e for e in rest if e[0] not in pi_a_seq.context.labels()))
        lemma, lemma_seq = weaken_context(lemma, pi_a_seq, missing)
        major, _major_seq = forall_elims(lemma, lemma_seq, terms)
        result = ExistsElim(major, z, label, pruned)
        logger.debug(f"Eliminated {label} for {render_term(term)} with eigenvariable {z}")
        return self._checked(result, Sequent(rest, sequent.conclusion))

    def deskolemize_general(
        self,
        pi_a: Proof,
        pi_a_seq: Sequent,
        proof: Proof,
        sequent: Sequent,
        sig: SkolemSignature,
    ) -> Deskolemization:
        """Remove the Skolem hypothesis, keeping one total instance per Skolem term.

        Raises:
            FrozennessViolation: If ``Γ′`` or ``B′`` has an unfrozen Skolem term.
            PartialPositionViolation: If the normal proof uses a partial instance
                other than as the premise of a ``∀E``.
            ContextMismatch: If ``πA`` does not prove ``∀x̄∃yA`` from part of ``Γ′``.
        """
        run = _Run(self, sig)
        return run.execute(pi_a, pi_a_seq, proof, sequent)

    def deskolemize(
        self,
        pi_a: Proof,
        pi_a_seq: Sequent,
        proof: Proof,
        sequent: Sequent,
        sig: SkolemSignature,
    ) -> tuple[Proof, Sequent]:
        """Turn a proof of ``Γ, S ⊢ B`` into a proof of ``Γ ⊢ B`` free of the Skolem symbol.

        Raises:
            SymbolOccurs: If the Skolem symbol occurs in ``Γ`` or ``B``.
        """
        skolem_label = sequent.context.find(sig.skolem_axiom())
        rest = sequent.context.without(skolem_label) if skolem_label else sequent.context
        for formula in _sequent_formulas(Sequent(rest, sequent.conclusion)):
            if sig.symbol in symbols_of(formula):
                raise SymbolOccurs(f"{sig.symbol} occurs in {render_formula(formula)}")

        result = self.deskolemize_general(pi_a, pi_a_seq, proof, sequent, sig)
        if len(result.delta):
            raise SymbolOccurs(f"{len(result.delta)} total instances left over")
        if sig.symbol in symbols_of_proof(result.proof):
            raise SymbolOccurs(f"{sig.symbol} survives in the proof")
        return result.proof, result.sequent


class _Run:
    """State of one run of the general construction."""

    def __init__(self, owner: Deskolemizer, sig: SkolemSignature) -> None:
        self.owner = owner
        self.sig = sig
        self.pi_a: Proof = Hyp("")
        self.pi_a_seq = Sequent(Context(), sig.existential())
        self.skolem_label: str | None = None
        # Every variable name handed out or seen so far
        self.names: set[str] = set()
        self.labels: dict[App, str] = {}
        self.taken_labels: set[str] = set()
        self.eliminated = 0

    def execute(
        self, pi_a: Proof, pi_a_seq: Sequent, proof: Proof, sequent: Sequent
    ) -> Deskolemization:
        sig = self.sig
        self.skolem_label = sequent.context.find(sig.skolem_axiom())
        if self.skolem_label is None:
            logger.warning("The Skolem hypothesis is not in the context")
            outer = sequent.context
        else:
            outer = sequent.context.without(self.skolem_label)

        if not all_frozen((*outer.formulas(), sequent.conclusion), sig.symbol):
            raise FrozennessViolation(f"the end-sequent has an unfrozen {sig.symbol}-term")
        if not alpha_equal(pi_a_seq.conclusion, sig.existential()):
            raise ContextMismatch(
                f"the axiom proof concludes {render_formula(pi_a_seq.conclusion)}, "
                f"expected {render_formula(sig.existential())}"
            )
        if not outer.includes(pi_a_seq.context):
            raise ContextMismatch("the axiom proof uses hypotheses outside the context")

        check(pi_a, pi_a_seq)
        check(proof, sequent)

        proof = self.owner._normalizer.normalize(proof, sequent.context)
        report = assert_partial_positions(proof, sequent, sig)
        if not report.ok:
            raise PartialPositionViolation(
                f"partial instance {report.formula} at {report.path}"
            )

        self.names = set(
            names_of(proof) | sequent.names() | pi_a_seq.names() | all_names(sig.matrix)
        )
        self.names |= set(sig.xbar) | {sig.y}
        self.pi_a, self.pi_a_seq = self._prepare_axiom_proof(pi_a, pi_a_seq, proof, sequent)
        self.names |= names_of(self.pi_a)
        self.taken_labels = set(labels_of(proof) | labels_of(self.pi_a)) | set(
            sequent.context.labels()
        )

        result, terms = self._transform(proof, sequent.context.as_env(), ())
        delta = self._delta(terms)
        result = rename_eigenvariables(result, self._delta_vars(terms), self.names)
        final = Sequent(outer.extend(*delta.context()), sequent.conclusion)
        check(result, final)
        logger.info(
            f"Deskolemized {sig.symbol}: {self.eliminated} hypotheses eliminated, "
            f"{len(delta)} total instances kept"
        )
        return Deskolemization(proof=result, sequent=final, delta=delta)

    def _fresh(self) -> str:
        name = fresh_var(self.names)
        self.names.add(name)
        return name

    def _prepare_axiom_proof(
        self, pi_a: Proof, pi_a_seq: Sequent, proof: Proof, sequent: Sequent
    ) -> tuple[Proof, Sequent]:
        """Normalize ``πA``, prune Skolem terms foreign to its end-sequent, freshen its labels."""
        owner, symbol = self.owner, self.sig.symbol
        pi_a = owner._normalizer.normalize(pi_a, pi_a_seq.context)
        pi_a = rename_labels(pi_a, labels_of(proof) | frozenset(sequent.context.labels()))
        self.names |= names_of(pi_a)

        visible = set(f_terms_of(_sequent_formulas(pi_a_seq), symbol))
        inside = {
            term
            for _path, _node, _env, conclusion in annotate(pi_a, pi_a_seq.context.as_env())
            for term in f_terms_of(conclusion, symbol)
        }
        for _path, node in walk(pi_a):
            if isinstance(node, ForallElim | ExistsIntro):
                inside |= {
                    t for t in subterms(node.witness) if isinstance(t, App) and t.symbol == symbol
                }
        for term in sorted(inside - visible, key=f_term_order):
            pi_a, pi_a_seq = owner.prune(pi_a, pi_a_seq, term, self._fresh())
            self.names |= names_of(pi_a)
        return pi_a, pi_a_seq

    def _label(self, term: App) -> str:
        if term not in self.labels:
            label = fresh_label(delta_label(term), self.taken_labels)
            self.taken_labels.add(label)
            self.labels[term] = label
        return self.labels[term]

    def _entry(self, term: App) -> DeltaEntry:
        if len(term.args) != self.sig.arity:
            raise ArityMismatch(
                f"{render_term(term)} has {len(term.args)} arguments, expected {self.sig.arity}"
            )
        return DeltaEntry(
            term=term,
            ubar=term.args,
            formula=self.sig.total_instance(term.args),
            label=self._label(term),
        )

    def _delta(self, terms: Iterable[App]) -> TotalInstanceSet:
        return TotalInstanceSet(tuple(self._entry(t) for t in sorted(set(terms), key=f_term_order)))

    def _delta_vars(self, terms: Iterable[App]) -> frozenset[str]:
        return frozenset().union(*(term_vars(t) for t in terms))

    def _local(self, env: dict[str, Formula]) -> list[tuple[str, Formula]]:
        return [(label, formula) for label, formula in env.items() if label != self.skolem_label]

    def _skolem_terms(self, local: list[tuple[str, Formula]], conclusion: Formula) -> set[App]:
        formulas = [formula for _label, formula in local] + [conclusion]
        return set(f_terms_of(formulas, self.sig.symbol))

    def _transform(
        self, node: Proof, env: dict[str, Formula], path: Path
    ) -> tuple[Proof, set[App]]:
        """Rebuild ``node`` without the Skolem hypothesis.

        Returns the new proof and the Skolem terms of its local sequent; the
        proof uses at most the total instances of those terms.
        """
        sig = self.sig
        conclusion = infer(node, env, path)
        local = self._local(env)

        if isinstance(node, Hyp) and node.label == self.skolem_label:
            return self._skolem_leaf(env), self._skolem_terms(local, conclusion)

        subs = premises(node)
        sub_envs = premise_envs(node, env)
        sub_conclusions = [infer(sub, e) for sub, e in zip(subs, sub_envs, strict=True)]

        if any(is_live_partial(c, sig) for c in sub_conclusions):
            instance = classify(conclusion, sig)
            if not isinstance(node, ForallElim) or not isinstance(instance, TotalInstance):
                raise PartialPositionViolation(
                    f"a partial instance feeds {type(node).__name__} "
                    f"concluding {render_formula(conclusion)}",
                    path,
                )
            term = App(sig.symbol, instance.terms)
            return Hyp(self._label(term)), self._skolem_terms(local, conclusion)

        for index, (sub_env, sub_conclusion) in enumerate(
            zip(sub_envs, sub_conclusions, strict=True)
        ):
            discharged = [f for label, f in sub_env.items() if label not in env]
            for formula in (sub_conclusion, *discharged):
                if not all_frozen(formula, sig.symbol):
                    raise FrozennessViolation(
                        f"unfrozen {sig.symbol}-term in {render_formula(formula)}",
                        path + (index,),
                    )

        results = [
            self._transform(sub, sub_env, path + (index,))
            for index, (sub, sub_env) in enumerate(zip(subs, sub_envs, strict=True))
        ]
        combined: set[App] = set().union(*(terms for _proof, terms in results))
        lifted = [
            rename_eigenvariables(sub_proof, self._delta_vars(combined), self.names)
            for sub_proof, _terms in results
        ]
        for sub_proof in lifted:
            self.names |= names_of(sub_proof)
        rebuilt = self._neutralize(with_premises(node, lifted), sub_conclusions)

        wanted = self._skolem_terms(local, conclusion)
        remaining = set(combined)
        for term in sorted(combined - wanted, key=f_term_order):
            label = self._label(term)
            if label in open_labels(rebuilt) or _term_occurs_in_proof(term, rebuilt):
                current = Sequent(
                    Context(tuple(local)).extend(*self._delta(remaining).context()),
                    conclusion,
                )
                rebuilt, _seq = self.owner.eliminate_hypothesis(
                    self.pi_a, self.pi_a_seq, rebuilt, current, label, term.args, sig, self.names
                )
                self.names |= names_of(rebuilt)
                self.eliminated += 1
            remaining.discard(term)
        return rebuilt, wanted

    def _neutralize(self, node: Proof, sub_conclusions: list[Formula]) -> Proof:
        """Replace Skolem witnesses of vacuous quantifiers by the bound variable."""
        symbol = self.sig.symbol
        match node:
            case ForallElim(witness, sub) if symbol in symbols_of(witness):
                universal = sub_conclusions[0]
                if isinstance(universal, Forall) and universal.var not in free_vars(universal.body):
                    return ForallElim(Var(universal.var), sub)
            case ExistsIntro(witness, target, sub) if symbol in symbols_of(witness):
                if isinstance(target, Exists) and target.var not in free_vars(target.body):
                    return ExistsIntro(Var(target.var), target, sub)
        return node

    def _skolem_leaf(self, env: dict[str, Formula]) -> Proof:
        sig = self.sig
        if sig.y in free_vars(sig.matrix):
            return Hyp(self._label(sig.skolem_term()))

        # Vacuous existential: the Skolem axiom says no more than ∀x̄A
        local = Context(tuple(self._local(env)))
        scope_names = local.names()
        lemma = rename_eigenvariables(self.pi_a, scope_names, self.names)
        missing = Context(tuple(e for e in local if e[0] not in self.pi_a_seq.context.labels()))
        lemma = rename_labels(lemma, local.labels())
        lemma, lemma_seq = weaken_context(lemma, self.pi_a_seq, missing)
        fresh = tuple(self._fresh() for _ in sig.xbar)
        major, _seq = forall_elims(lemma, lemma_seq, tuple(Var(v) for v in fresh))
        witness, label = self._fresh(), fresh_label("sk-vacuous", self.taken_labels)
        self.taken_labels.add(label)
        result: Proof = ExistsElim(major, witness, label, Hyp(label))
        for name in reversed(fresh):
            result = ForallIntro(name, result)
        return result


def assert_partial_positions(
    proof: Proof, sequent: Sequent, sig: SkolemSignature
) -> PartialPositionReport:
    """Check that every partial instance in the proof is the premise of a ``∀E``."""
    for path, _node, _env, conclusion in annotate(proof, sequent.context.as_env()):
        if not is_live_partial(conclusion, sig):
            continue
        if path and isinstance(node_at(proof, path[:-1]), ForallElim):
            continue
        return PartialPositionReport(
            ok=False, path=render_path(path), formula=render_formula(conclusion)
        )
    return PartialPositionReport(ok=True)


def derive_existential(label: str, sig: SkolemSignature) -> Proof:
    """Canonical proof of ``∀x̄∃yA`` from the Skolem axiom labeled ``label``."""
    chain: Proof = Hyp(label)
    for x in sig.xbar:
        chain = ForallElim(Var(x), chain)
    result: Proof = ExistsIntro(sig.skolem_term(), Exists(sig.y, sig.matrix), chain)
    for x in reversed(sig.xbar):
        result = ForallIntro(x, result)
    return result


def skolemize_axiom(theory: Context, label: str, symbol: str) -> tuple[Context, SkolemSignature]:
    """Replace the axiom ``∀x̄∃yA`` labeled ``label`` by ``∀x̄ (f(x̄)/y)A``.

    Raises:
        BadAxiomShape: If the axiom is missing, open, or not of the form ``∀x̄∃yA``.
        SymbolInUse: If ``symbol`` already occurs in the theory.
    """
    axiom = theory.lookup(label)
    if axiom is None:
        raise BadAxiomShape(f"no axiom labeled {label}")
    for formula in theory.formulas():
        if symbol in symbols_of(formula):
            raise SymbolInUse(f"{symbol} occurs in {render_formula(formula)}")
    if free_vars(axiom):
        raise BadAxiomShape(f"axiom {label} has free variables {sorted(free_vars(axiom))}")

    xbar: list[str] = []
    current = axiom
    while isinstance(current, Forall):
        xbar.append(current.var)
        current = current.body
    if not isinstance(current, Exists):
        raise BadAxiomShape(f"axiom {label} is not of the form ∀x̄∃yA")
    if len(set(xbar)) != len(xbar):
        raise BadAxiomShape(f"axiom {label} repeats a universal variable")

    y, matrix = current.var, current.body
    if y in xbar:
        renamed = fresh_var(all_names(axiom))
        matrix = apply_subst({y: Var(renamed)}, matrix)
        y = renamed

    sig = SkolemSignature(symbol=symbol, matrix=matrix, xbar=tuple(xbar), y=y)
    entries = tuple(
        (name, sig.skolem_axiom() if name == label else formula) for name, formula in theory
    )
    logger.info(f"Skolemized axiom {label} with {symbol}/{sig.arity}")
    return Context(entries), sig


def conservativity_round_trip(
    theory: Context, axiom_label: str, symbol: str, proof: Proof, conclusion: Formula
) -> RoundTrip:
    """Replay a proof in the Skolemized theory and deskolemize it back.

    ``proof`` derives ``theory ⊢ conclusion``. Its uses of the axiom are
    replaced by derivations from the Skolem axiom, giving a proof in the
    Skolemized theory, which is then deskolemized with the original axiom as
    the proof of the existential.
    """
    if symbol in symbols_of(conclusion) or symbol in symbols_of_proof(proof):
        raise SymbolInUse(f"{symbol} occurs in the proof or its conclusion")
    check(proof, Sequent(theory, conclusion))
    skolemized_theory, sig = skolemize_axiom(theory, axiom_label, symbol)

    avoid_vars = theory.names() | names_of(proof)
    skolemized_proof = graft(
        proof, axiom_label, derive_existential(axiom_label, sig), avoid_vars, theory.labels()
    )
    skolemized_sequent = Sequent(skolemized_theory, conclusion)
    check(skolemized_proof, skolemized_sequent)

    skolem_label = fresh_label(
        f"{axiom_label}-sk", frozenset(theory.labels()) | labels_of(skolemized_proof)
    )
    relabeled = replace_hyp(skolemized_proof, axiom_label, Hyp(skolem_label))
    extended = Sequent(theory.extend((skolem_label, sig.skolem_axiom())), conclusion)
    axiom = theory.lookup(axiom_label)
    assert axiom is not None
    pi_a_seq = Sequent(Context.of((axiom_label, axiom)), axiom)

    result, sequent = deskolemizer.deskolemize(Hyp(axiom_label), pi_a_seq, relabeled, extended, sig)
    return RoundTrip(
        theory=theory,
        skolemized_theory=skolemized_theory,
        sig=sig,
        skolem_label=skolem_label,
        skolemized_proof=skolemized_proof,
        skolemized_sequent=skolemized_sequent,
        proof=result,
        sequent=sequent,
    )


# Global deskolemizer instance
deskolemizer = Deskolemizer()


def prune(proof: Proof, sequent: Sequent, term: App, z: str) -> tuple[Proof, Sequent]:
    return deskolemizer.prune(proof, sequent, term, z)


def eliminate_hypothesis(
    pi_a: Proof,
    pi_a_seq: Sequent,
    proof: Proof,
    sequent: Sequent,
    label: str,
    ubar: Iterable[Term],
    sig: SkolemSignature,
) -> tuple[Proof, Sequent]:
    return deskolemizer.eliminate_hypothesis(pi_a, pi_a_seq, proof, sequent, label, ubar, sig)


def deskolemize_general(
    pi_a: Proof, pi_a_seq: Sequent, proof: Proof, sequent: Sequent, sig: SkolemSignature
) -> Deskolemization:
    return deskolemizer.deskolemize_general(pi_a, pi_a_seq, proof, sequent, sig)


def deskolemize(
    pi_a: Proof, pi_a_seq: Sequent, proof: Proof, sequent: Sequent, sig: SkolemSignature
) -> tuple[Proof, Sequent]:
    return deskolemizer.deskolemize(pi_a, pi_a_seq, proof, sequent, sig)
