"""Unit tests for the deskolemizer."""

import pytest

from src.models.proof import (
    AndIntro,
    Context,
    ExistsElim,
    ExistsIntro,
    ForallElim,
    Hyp,
    Sequent,
)
from src.models.syntax import And, Exists, Forall, Var
from src.services.deskolemizer import (
    BadAxiomShape,
    ContextMismatch,
    Deskolemizer,
    FrozennessViolation,
    NotFrozen,
    SymbolInUse,
    SymbolOccurs,
    TermOccurs,
    VariableNotFresh,
    assert_partial_positions,
    delta_label,
    derive_existential,
    deskolemize,
    deskolemize_general,
    eliminate_hypothesis,
    prune,
    skolemize_axiom,
)
from src.services.kernel import check, symbols_of_proof
from src.services.normalizer import Normalizer
from tests.corpus import EXISTENTIAL, SIG_F, SKOLEM, Instance, P, Q, c, d, f, g, instance, x, y

GOAL = Exists("y", P(c, y))
AXIOM_SEQUENT = Sequent(Context.of(("ax", EXISTENTIAL)), EXISTENTIAL)
DELTA_SEQUENT = Sequent(Context.of(("ax", EXISTENTIAL), ("sk-f-c", P(c, f(c)))), GOAL)
DELTA_PROOF = ExistsIntro(f(c), GOAL, Hyp("sk-f-c"))


class TestDeltaLabel:
    """Test labels of total instances."""

    def test_labels(self) -> None:
        """Test that the printed term becomes a dash-separated label."""
        assert delta_label(f(c)) == "sk-f-c"
        assert delta_label(f(f(c))) == "sk-f-f-c"
        assert delta_label(g(c, d)) == "sk-g-c-d"


class TestPrune:
    """Test replacing a frozen Skolem term by a variable."""

    def test_prune_worked(self) -> None:
        """Test pruning f(c) from the witness and the context."""
        proof, sequent = prune(DELTA_PROOF, DELTA_SEQUENT, f(c), "z0")

        assert proof == ExistsIntro(Var("z0"), GOAL, Hyp("sk-f-c"))
        assert sequent.context.lookup("sk-f-c") == P(c, Var("z0"))
        assert sequent.conclusion == GOAL
        check(proof, sequent)

    def test_prune_variable_not_fresh(self) -> None:
        """Test that the new variable may not already occur."""
        with pytest.raises(VariableNotFresh):
            prune(DELTA_PROOF, DELTA_SEQUENT, f(c), "y")

    def test_prune_unfrozen_end_sequent(self) -> None:
        """Test that an end-sequent with an unfrozen Skolem term is rejected."""
        item = instance("worked")
        with pytest.raises(NotFrozen):
            prune(item.proof, item.sequent, f(c), "z0")


class TestEliminateHypothesis:
    """Test discharging one total instance."""

    def test_eliminate_worked(self) -> None:
        """Test the single elimination step of the worked example."""
        proof, sequent = eliminate_hypothesis(
            Hyp("ax"), AXIOM_SEQUENT, DELTA_PROOF, DELTA_SEQUENT, "sk-f-c", (c,), SIG_F
        )

        assert proof == ExistsElim(
            ForallElim(c, Hyp("ax")),
            "z0",
            "sk-f-c",
            ExistsIntro(Var("z0"), GOAL, Hyp("sk-f-c")),
        )
        assert sequent == Sequent(Context.of(("ax", EXISTENTIAL)), GOAL)
        check(proof, sequent)

    def test_eliminate_weakens_axiom_proof(self) -> None:
        """Test that the axiom proof is weakened by the remaining hypotheses."""
        context = DELTA_SEQUENT.context.extend(("a", Q(d)))
        proof, sequent = eliminate_hypothesis(
            Hyp("ax"),
            AXIOM_SEQUENT,
            DELTA_PROOF,
            Sequent(context, GOAL),
            "sk-f-c",
            (c,),
            SIG_F,
        )
        assert sequent.context.labels() == ("ax", "a")
        check(proof, sequent)

    def test_term_still_occurs(self) -> None:
        """Test that the term may not occur in the rest of the sequent."""
        sequent = Sequent(DELTA_SEQUENT.context, And(GOAL, P(c, f(c))))
        proof = AndIntro(DELTA_PROOF, Hyp("sk-f-c"))
        with pytest.raises(TermOccurs):
            eliminate_hypothesis(
                Hyp("ax"), AXIOM_SEQUENT, proof, sequent, "sk-f-c", (c,), SIG_F
            )

    def test_axiom_proof_needs_missing_hypothesis(self) -> None:
        """Test an axiom proof whose context is not part of the sequent."""
        pi_a_seq = Sequent(Context.of(("other", EXISTENTIAL)), EXISTENTIAL)
        with pytest.raises(ContextMismatch):
            eliminate_hypothesis(
                Hyp("other"), pi_a_seq, DELTA_PROOF, DELTA_SEQUENT, "sk-f-c", (c,), SIG_F
            )


class TestDeskolemize:
    """Test the full construction on small proofs."""

    def test_worked_example(self, worked: Instance) -> None:
        """Test the exact proof produced for the worked example."""
        proof, sequent = deskolemize(
            worked.pi_a, worked.axiom_sequent, worked.proof, worked.sequent, worked.sig
        )

        assert proof == ExistsElim(
            ForallElim(c, Hyp("ax")),
            "z0",
            "sk-f-c",
            ExistsIntro(Var("z0"), GOAL, Hyp("sk-f-c")),
        )
        assert sequent == Sequent(Context.of(("ax", EXISTENTIAL)), GOAL)

    def test_deterministic(self, worked: Instance) -> None:
        """Test that two runs give identical results."""
        args = (worked.pi_a, worked.axiom_sequent, worked.proof, worked.sequent, worked.sig)
        assert deskolemize(*args) == deskolemize(*args)

    def test_vacuous_existential(self) -> None:
        """Test a Skolem axiom whose existential variable does not occur."""
        item = instance("vacuous")
        proof, sequent = deskolemize(
            item.pi_a, item.axiom_sequent, item.proof, item.sequent, item.sig
        )
        check(proof, sequent)
        assert "f" not in symbols_of_proof(proof)

    def test_symbol_in_conclusion(self) -> None:
        """Test that deskolemize refuses an end-sequent mentioning f."""
        item = instance("general-frozen-conclusion")
        with pytest.raises(SymbolOccurs):
            deskolemize(item.pi_a, item.axiom_sequent, item.proof, item.sequent, item.sig)

    def test_unfrozen_end_sequent(self) -> None:
        """Test that an unfrozen Skolem term in the conclusion is rejected."""
        goal = Forall("x", P(x, f(x)))
        sequent = Sequent(Context.of(("ax", EXISTENTIAL), ("s", SKOLEM)), goal)
        with pytest.raises(FrozennessViolation):
            deskolemize_general(Hyp("ax"), AXIOM_SEQUENT, Hyp("s"), sequent, SIG_F)

    def test_wrong_axiom_conclusion(self, worked: Instance) -> None:
        """Test an axiom proof that proves something else."""
        pi_a_seq = Sequent(Context.of(("ax", EXISTENTIAL)), Exists("y", P(c, y)))
        with pytest.raises(ContextMismatch):
            deskolemize(worked.pi_a, pi_a_seq, worked.proof, worked.sequent, worked.sig)

    def test_general_keeps_total_instance(self) -> None:
        """Test that a frozen Skolem term of the conclusion is kept in Δ."""
        item = instance("general-frozen-conclusion")
        result = deskolemize_general(
            item.pi_a, item.axiom_sequent, item.proof, item.sequent, item.sig
        )
        assert result.delta.terms() == (f(c),)
        assert result.delta.labels() == ("sk-f-c",)
        assert result.sequent.context.lookup("sk-f-c") == P(c, f(c))
        assert result.sequent.context.lookup("s") is None
        check(result.proof, result.sequent)

    def test_custom_normalizer(self, worked: Instance) -> None:
        """Test a deskolemizer built with its own normalizer."""
        runner = Deskolemizer(normalizer=Normalizer(step_budget=10), check_every_step=True)
        item = instance("detour")
        proof, sequent = runner.deskolemize(
            item.pi_a, item.axiom_sequent, item.proof, item.sequent, item.sig
        )
        expected, _ = deskolemize(
            worked.pi_a, worked.axiom_sequent, worked.proof, worked.sequent, worked.sig
        )
        assert proof == expected
        check(proof, sequent)


class TestPartialPositions:
    """Test the partial-instance position check."""

    def test_forall_elim_premise_ok(self, worked: Instance) -> None:
        """Test that S feeding ∀E is allowed."""
        assert assert_partial_positions(worked.proof, worked.sequent, SIG_F).ok

    def test_partial_instance_in_conjunction(self) -> None:
        """Test that S as a conjunct is reported."""
        sequent = Sequent(Context.of(("s", SKOLEM), ("a", Q(c))), And(SKOLEM, Q(c)))
        report = assert_partial_positions(AndIntro(Hyp("s"), Hyp("a")), sequent, SIG_F)
        assert not report.ok
        assert report.path == "0"


class TestSkolemizeAxiom:
    """Test Skolemizing one axiom of a theory."""

    def test_skolemize(self) -> None:
        """Test that the axiom is replaced in place by S."""
        theory = Context.of(("hq", Q(c)), ("ax", EXISTENTIAL))
        skolemized, sig = skolemize_axiom(theory, "ax", "f")
        assert sig == SIG_F
        assert skolemized == Context.of(("hq", Q(c)), ("ax", SKOLEM))

    def test_existential_variable_renamed(self) -> None:
        """Test an axiom whose existential variable shadows a universal one."""
        theory = Context.of(("ax", Forall("x", Exists("x", P(x, x)))))
        _skolemized, sig = skolemize_axiom(theory, "ax", "f")
        assert sig.y not in sig.xbar
        assert sig.skolem_axiom() == Forall("x", P(f(x), f(x)))

    def test_not_an_existential_axiom(self) -> None:
        """Test that an axiom without ∃ after its ∀ prefix is rejected."""
        with pytest.raises(BadAxiomShape):
            skolemize_axiom(Context.of(("ax", Forall("x", Q(x)))), "ax", "f")

    def test_missing_axiom(self) -> None:
        """Test a label that is not in the theory."""
        with pytest.raises(BadAxiomShape):
            skolemize_axiom(Context.of(("hq", Q(c))), "ax", "f")

    def test_open_axiom(self) -> None:
        """Test that an axiom with free variables is rejected."""
        with pytest.raises(BadAxiomShape, match="free variables"):
            skolemize_axiom(Context.of(("ax", Exists("y", P(x, y)))), "ax", "f")

    def test_symbol_in_use(self) -> None:
        """Test that the new symbol must be fresh for the theory."""
        theory = Context.of(("hq", Q(c)), ("ax", EXISTENTIAL))
        with pytest.raises(SymbolInUse):
            skolemize_axiom(theory, "ax", "c")

    def test_derive_existential(self) -> None:
        """Test the canonical proof of ∀x̄∃yA from S."""
        proof = derive_existential("s", SIG_F)
        check(proof, Sequent(Context.of(("s", SKOLEM)), EXISTENTIAL))
        assert "f" in symbols_of_proof(proof)
