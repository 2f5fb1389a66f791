"""Unit tests for bounded proof search."""

from unittest.mock import patch

import pytest
from pydantic import ValidationError

from src.models.proof import Context, Sequent
from src.models.syntax import Absurd, And, Exists, Forall, Implies, Or
from src.services.kernel import KernelError, check
from src.services.oracle import (
    ProofSearch,
    Provable,
    SearchBudget,
    Unknown,
    ground_terms,
    prove,
)
from tests.corpus import EXISTENTIAL, P, Q, c, d, f, x, y


class TestSearchBudget:
    """Test search budget validation."""

    def test_positive_limits(self) -> None:
        """Test that a budget keeps its limits."""
        budget = SearchBudget(max_depth=3, max_terms=2)
        assert (budget.max_depth, budget.max_terms) == (3, 2)

    def test_zero_depth_rejected(self) -> None:
        """Test that a non-positive depth is invalid."""
        with pytest.raises(ValidationError):
            SearchBudget(max_depth=0, max_terms=2)

    def test_from_config(self) -> None:
        """Test that the default budget comes from configuration."""
        budget = SearchBudget.from_config()
        assert budget.max_depth > 0
        assert budget.max_terms > 0


class TestGroundTerms:
    """Test the Herbrand-style term universe."""

    def test_constants_then_applications(self) -> None:
        """Test ordering by size, then by text."""
        assert ground_terms([P(c, f(d))], 10) == [c, d, f(c), f(d)]

    def test_truncated(self) -> None:
        """Test that at most max_terms are kept."""
        assert ground_terms([P(c, f(d))], 3) == [c, d, f(c)]


class TestProve:
    """Test proof search on small sequents."""

    def test_identity(self) -> None:
        """Test ⊢ Q(c) ⇒ Q(c) at depth 3."""
        sequent = Sequent(Context(), Implies(Q(c), Q(c)))
        result = prove(sequent, SearchBudget(max_depth=3, max_terms=4))
        assert isinstance(result, Provable)
        check(result.proof, sequent)

    def test_existential_instance(self) -> None:
        """Test ∀x∃yP(x,y) ⊢ ∃yP(c,y) at depth 5."""
        sequent = Sequent(Context.of(("ax", EXISTENTIAL)), Exists("y", P(c, y)))
        result = prove(sequent, SearchBudget(max_depth=5, max_terms=4))
        assert isinstance(result, Provable)
        check(result.proof, sequent)

    def test_excluded_middle_unknown(self) -> None:
        """Test that P ∨ ¬P is not found."""
        sequent = Sequent(Context(), Or(Q(c), Implies(Q(c), Absurd())))
        result = prove(sequent, SearchBudget(max_depth=6, max_terms=4))
        assert isinstance(result, Unknown)

    def test_quantifier_swap(self) -> None:
        """Test ∃x∀yP(x,y) ⊢ ∀y∃xP(x,y)."""
        sequent = Sequent(
            Context.of(("h", Exists("x", Forall("y", P(x, y))))),
            Forall("y", Exists("x", P(x, y))),
        )
        result = prove(sequent, SearchBudget(max_depth=7, max_terms=4))
        assert isinstance(result, Provable)
        check(result.proof, sequent)

    def test_conjunction_and_absurdity(self) -> None:
        """Test that ⊥ on the left closes any goal."""
        sequent = Sequent(Context.of(("n", And(Absurd(), Q(c)))), Q(d))
        result = prove(sequent, SearchBudget(max_depth=3, max_terms=4))
        assert isinstance(result, Provable)
        check(result.proof, sequent)

    def test_depth_exhausted(self) -> None:
        """Test that a provable sequent needing more depth gives Unknown."""
        sequent = Sequent(
            Context.of(("ax", EXISTENTIAL), ("hq", Q(c))), Exists("y", And(Q(c), P(c, y)))
        )
        result = ProofSearch().prove(sequent, SearchBudget(max_depth=2, max_terms=4))
        assert result == Unknown("no proof within depth 2")

    def test_unchecked_result_is_unknown(self) -> None:
        """Test that a proof failing the checker is never reported as Provable."""
        sequent = Sequent(Context(), Implies(Q(c), Q(c)))

        with patch("src.services.oracle.check", side_effect=KernelError("broken")):
            result = ProofSearch(max_depth=3, max_terms=2).prove(sequent)

        assert isinstance(result, Unknown)
        assert "broken" in result.reason
