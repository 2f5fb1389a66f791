"""End-to-end checks over the hand-built instances and theories."""

import pytest

from src.cli.printer import render_sequent
from src.models.proof import Sequent
from src.models.syntax import fresh_var, render_term, symbols_of
from src.services.deskolemizer import (
    assert_partial_positions,
    conservativity_round_trip,
    deskolemize,
    deskolemize_general,
    prune,
)
from src.services.kernel import check, names_of, symbols_of_proof
from src.services.normalizer import normalize, validate_frozen_propagation
from src.services.oracle import Provable, SearchBudget, prove
from tests.corpus import INSTANCES, THEORIES, Instance, Theory

SPECIAL = [item for item in INSTANCES if not item.general]
GENERAL = [item for item in INSTANCES if item.general]


def _name(item: Instance | Theory) -> str:
    return item.name


class TestInstances:
    """Deskolemize every instance and check the result independently."""

    @pytest.mark.parametrize("item", SPECIAL, ids=_name)
    def test_deskolemized_proof_checks(self, item: Instance) -> None:
        """Test that the result proves the goal without the Skolem symbol."""
        check(item.proof, item.sequent)
        check(item.pi_a, item.axiom_sequent)

        args = (item.pi_a, item.axiom_sequent, item.proof, item.sequent, item.sig)
        proof, sequent = deskolemize(*args)

        check(proof, sequent)
        assert sequent.conclusion == item.goal
        assert item.sig.symbol not in symbols_of_proof(proof)
        for formula in sequent.context.formulas():
            assert item.sig.symbol not in symbols_of(formula)

    @pytest.mark.parametrize("item", SPECIAL, ids=_name)
    def test_deterministic(self, item: Instance) -> None:
        """Test that the same input gives the same proof twice."""
        args = (item.pi_a, item.axiom_sequent, item.proof, item.sequent, item.sig)
        assert deskolemize(*args) == deskolemize(*args)

    @pytest.mark.parametrize("item", GENERAL, ids=_name)
    def test_general_construction(self, item: Instance) -> None:
        """Test the total instances kept by the general construction."""
        result = deskolemize_general(
            item.pi_a, item.axiom_sequent, item.proof, item.sequent, item.sig
        )

        check(result.proof, result.sequent)
        assert result.delta.terms() == item.delta
        assert result.sequent.conclusion == item.goal

    @pytest.mark.parametrize("item", SPECIAL, ids=_name)
    def test_normal_form_keeps_terms_frozen(self, item: Instance) -> None:
        """Test that Skolem terms stay frozen in the normalized proof."""
        normal = normalize(item.proof, item.sequent.context)
        report = validate_frozen_propagation(normal, item.sequent, item.sig)
        assert report.hypothesis_holds
        assert report.ok
        assert assert_partial_positions(normal, item.sequent, item.sig).ok

    @pytest.mark.parametrize("item", INSTANCES, ids=_name)
    def test_normalize_idempotent(self, item: Instance) -> None:
        """Test that normalizing a normal proof leaves it unchanged."""
        normal = normalize(item.proof, item.sequent.context)
        assert normalize(normal, item.sequent.context) == normal

    @pytest.mark.parametrize("item", SPECIAL, ids=_name)
    def test_oracle_agrees(self, item: Instance) -> None:
        """Test that bounded search also proves the deskolemized sequent."""
        sequent = Sequent(item.gamma, item.goal)
        result = prove(sequent, SearchBudget(max_depth=7, max_terms=8))
        assert isinstance(result, Provable)
        check(result.proof, sequent)

    @pytest.mark.parametrize("item", GENERAL, ids=_name)
    def test_prune_matches_textual_replacement(self, item: Instance) -> None:
        """Test that pruning each kept total instance prints as a plain text replacement."""
        result = deskolemize_general(
            item.pi_a, item.axiom_sequent, item.proof, item.sequent, item.sig
        )
        for term in result.delta.terms():
            z = fresh_var(result.sequent.names() | names_of(result.proof))
            _proof, pruned = prune(result.proof, result.sequent, term, z)
            expected = render_sequent(result.sequent).replace(render_term(term), z)
            assert render_sequent(pruned) == expected


class TestRoundTrip:
    """Replay proofs through a Skolemized theory and deskolemize them back."""

    @pytest.mark.parametrize("theory", THEORIES, ids=_name)
    def test_round_trip(self, theory: Theory) -> None:
        """Test that the replayed proof comes back free of the new symbol."""
        trip = conservativity_round_trip(
            theory.theory, theory.axiom, "f", theory.proof, theory.conclusion
        )

        check(trip.skolemized_proof, trip.skolemized_sequent)
        assert "f" in symbols_of_proof(trip.skolemized_proof)
        assert "f" not in symbols_of_proof(trip.proof)
        check(trip.proof, Sequent(theory.theory, theory.conclusion))

    @pytest.mark.parametrize("theory", THEORIES, ids=_name)
    def test_oracle_agrees(self, theory: Theory) -> None:
        """Test that bounded search also proves every consequence."""
        sequent = Sequent(theory.theory, theory.conclusion)
        result = prove(sequent, SearchBudget(max_depth=7, max_terms=8))
        assert isinstance(result, Provable)
        check(result.proof, sequent)
