"""Unit tests for the proof checker and structural transformations."""

import pytest

from src.models.proof import (
    AbsurdElim,
    AndElimL,
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
    Sequent,
)
from src.models.syntax import Absurd, And, Exists, Forall, Implies, Or, Var
from src.services.kernel import (
    ConclusionMismatch,
    EigenvariableViolation,
    LabelClash,
    RuleMismatch,
    ShapeMismatch,
    UnknownLabel,
    check,
    forall_elims,
    graft,
    infer,
    open_labels,
    rename_eigenvariables,
    rename_labels,
    verify,
    weaken,
)
from tests.corpus import EXISTENTIAL, INSTANCES, P, Q, c, d, f, u, x, y


class TestCheck:
    """Test proof checking rule by rule."""

    def test_identity(self) -> None:
        """Test ⊢ Q(c) ⇒ Q(c)."""
        proof = ImpIntro("h", Q(c), Hyp("h"))
        assert check(proof, Sequent(Context(), Implies(Q(c), Q(c)))) == Implies(Q(c), Q(c))

    def test_conjunction_and_disjunction(self) -> None:
        """Test that ∧ commutes through ∨E."""
        context = Context.of(("h", Or(Q(c), Q(d))), ("k", Q(c)))
        goal = Or(Q(c), Q(d))
        proof = OrElim(
            Hyp("h"),
            "l",
            OrIntroL(Q(d), AndElimL(AndIntro(Hyp("l"), Hyp("k")))),
            "r",
            OrIntroL(Q(d), Hyp("k")),
        )
        assert check(proof, Sequent(context, goal)) == goal

    def test_conclusion_up_to_alpha(self) -> None:
        """Test that a renamed binder in the sequent still matches."""
        proof = ForallIntro("x", ImpIntro("h", Q(x), Hyp("h")))
        sequent = Sequent(Context(), Forall("w", Implies(Q(Var("w")), Q(Var("w")))))
        check(proof, sequent)

    def test_every_corpus_instance_checks(self) -> None:
        """Test that the hand-built instances are correct proofs."""
        for item in INSTANCES:
            check(item.proof, item.sequent)
            check(item.pi_a, item.axiom_sequent)

    def test_unknown_label(self) -> None:
        """Test a hypothesis that is nowhere in scope."""
        with pytest.raises(UnknownLabel):
            check(Hyp("nope"), Sequent(Context(), Q(c)))

    def test_wrong_minor_premise(self) -> None:
        """Test ⇒E with an argument of the wrong formula, and the error path."""
        context = Context.of(("h", Implies(Q(c), Q(d))), ("k", Q(d)))
        with pytest.raises(RuleMismatch) as excinfo:
            check(AndIntro(Hyp("k"), ImpElim(Hyp("h"), Hyp("k"))), Sequent(context, Q(d)))
        assert excinfo.value.path == (1,)

    def test_conclusion_mismatch(self) -> None:
        """Test a correct proof of a different formula."""
        with pytest.raises(ConclusionMismatch):
            check(Hyp("h"), Sequent(Context.of(("h", Q(c))), Q(d)))

    def test_forall_intro_eigenvariable(self) -> None:
        """Test that ∀I rejects an eigenvariable free in an open hypothesis."""
        with pytest.raises(EigenvariableViolation):
            check(ForallIntro("x", Hyp("h")), Sequent(Context.of(("h", Q(x))), Forall("x", Q(x))))

    def test_exists_elim_eigenvariable_in_conclusion(self) -> None:
        """Test that ∃E rejects an eigenvariable escaping into the conclusion."""
        context = Context.of(("he", Exists("x", Q(x))))
        with pytest.raises(EigenvariableViolation, match="conclusion"):
            check(ExistsElim(Hyp("he"), "u", "hu", Hyp("hu")), Sequent(context, Q(u)))

    def test_label_clash(self) -> None:
        """Test that discharging a label already in scope is rejected."""
        proof = ImpIntro("h", Q(c), Hyp("h"))
        with pytest.raises(LabelClash):
            check(proof, Sequent(Context.of(("h", Q(d))), Implies(Q(c), Q(c))))

    def test_absurd_elim(self) -> None:
        """Test ex falso."""
        context = Context.of(("n", Implies(Q(c), Absurd())), ("a", Q(c)))
        proof = AbsurdElim(Q(d), ImpElim(Hyp("n"), Hyp("a")))
        assert check(proof, Sequent(context, Q(d))) == Q(d)

    def test_exists_intro_wrong_witness(self) -> None:
        """Test ∃I whose premise is not the instance at the witness."""
        with pytest.raises(RuleMismatch):
            infer(ExistsIntro(d, Exists("y", P(c, y)), Hyp("h")), {"h": P(c, c)})

    def test_verify_returns_error(self) -> None:
        """Test that verify reports instead of raising."""
        assert verify(Hyp("h"), Sequent(Context.of(("h", Q(c))), Q(c))) is None
        assert isinstance(verify(Hyp("x"), Sequent(Context(), Q(c))), UnknownLabel)


class TestTransformations:
    """Test renaming, grafting, weakening and ∀E chains."""

    def test_rename_labels_only_discharged(self) -> None:
        """Test that open hypotheses keep their labels."""
        proof = ImpIntro("h", Q(c), AndIntro(Hyp("h"), Hyp("k")))
        renamed = rename_labels(proof, {"h", "k"})
        assert renamed == ImpIntro("h-1", Q(c), AndIntro(Hyp("h-1"), Hyp("k")))

    def test_rename_eigenvariables(self) -> None:
        """Test that clashing eigenvariables get fresh names throughout."""
        proof = ForallIntro("x", ImpIntro("h", Q(x), Hyp("h")))
        renamed = rename_eigenvariables(proof, {"x"})
        assert renamed == ForallIntro("z0", ImpIntro("h", Q(Var("z0")), Hyp("h")))

    def test_graft(self) -> None:
        """Test plugging a proof into the open uses of a hypothesis."""
        target = AndIntro(Hyp("h"), Hyp("h"))
        result = graft(target, "h", ForallElim(c, Hyp("all")))
        assert result == AndIntro(ForallElim(c, Hyp("all")), ForallElim(c, Hyp("all")))
        assert open_labels(result) == {"all"}

    def test_weaken(self) -> None:
        """Test adding an unused hypothesis."""
        sequent = Sequent(Context.of(("h", Q(c))), Q(c))
        proof, weakened = weaken(Hyp("h"), sequent, "k", Q(d))
        check(proof, weakened)
        assert weakened.context.labels() == ("h", "k")

    def test_weaken_renames_capturing_eigenvariable(self) -> None:
        """Test that a weakening hypothesis mentioning an eigenvariable forces a rename."""
        proof = ForallIntro("x", ImpIntro("h", Q(x), Hyp("h")))
        sequent = Sequent(Context(), Forall("x", Implies(Q(x), Q(x))))
        weakened_proof, weakened = weaken(proof, sequent, "k", Q(x))
        check(weakened_proof, weakened)

    def test_weaken_label_in_use(self) -> None:
        """Test that weakening with a used label raises."""
        with pytest.raises(LabelClash):
            weaken(Hyp("h"), Sequent(Context.of(("h", Q(c))), Q(c)), "h", Q(d))

    def test_forall_elims(self) -> None:
        """Test instantiating the existential axiom."""
        sequent = Sequent(Context.of(("ax", EXISTENTIAL)), EXISTENTIAL)
        proof, result = forall_elims(Hyp("ax"), sequent, (f(c),))
        assert result.conclusion == Exists("y", P(f(c), y))
        check(proof, result)

    def test_forall_elims_too_many(self) -> None:
        """Test that more terms than quantifiers raise."""
        sequent = Sequent(Context.of(("ax", EXISTENTIAL)), EXISTENTIAL)
        with pytest.raises(ShapeMismatch):
            forall_elims(Hyp("ax"), sequent, (c, d))


class TestFormulasInContext:
    """Test context helpers used by the checker."""

    def test_find_up_to_alpha(self) -> None:
        """Test that find compares hypotheses up to alpha-equivalence."""
        context = Context.of(("a", Q(c)), ("b", Forall("w", Q(Var("w")))))
        assert context.find(Forall("x", Q(x))) == "b"
        assert context.find(And(Q(c), Q(c))) is None

    def test_duplicate_labels(self) -> None:
        """Test that contexts reject repeated labels."""
        with pytest.raises(ValueError, match="Duplicate"):
            Context.of(("a", Q(c)), ("a", Q(d)))
