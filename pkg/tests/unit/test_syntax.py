"""Unit tests for terms and formulas."""

import random

import pytest

from src.models.syntax import (
    Absurd,
    And,
    App,
    Atom,
    Exists,
    Forall,
    Formula,
    Implies,
    Or,
    Var,
    alpha_equal,
    apply_subst,
    free_vars,
    fresh_var,
    instantiate,
    is_reserved_name,
    render_formula,
    render_term,
    replace_subterm,
    symbols_of,
    term_size,
)

c, d = App("c"), App("d")
x, y, z0 = Var("x"), Var("y"), Var("z0")


def f(arg):
    return App("f", (arg,))


def P(*args):
    return Atom("P", args)


class TestFreshNames:
    """Test the fresh-variable scheme."""

    def test_first_free_index(self) -> None:
        """Test that fresh_var picks the smallest unused z-name."""
        assert fresh_var([]) == "z0"
        assert fresh_var(["z0", "z1", "z3"]) == "z2"

    def test_reserved_names(self) -> None:
        """Test that only z followed by digits is reserved."""
        assert is_reserved_name("z0")
        assert is_reserved_name("z12")
        assert not is_reserved_name("z")
        assert not is_reserved_name("zeta")
        assert not is_reserved_name("x0")


class TestAlphaEquivalence:
    """Test alpha-equivalence of formulas."""

    def test_renamed_binder(self) -> None:
        """Test that bound variable names do not matter."""
        assert alpha_equal(Forall("x", P(x, c)), Forall("y", P(y, c)))

    def test_free_variables_matter(self) -> None:
        """Test that free variables are compared by name."""
        assert not alpha_equal(P(x), P(y))
        assert not alpha_equal(Forall("x", P(x, y)), Forall("y", P(y, y)))

    def test_connectives_distinguished(self) -> None:
        """Test that different connectives are never equal."""
        assert not alpha_equal(And(P(c), P(c)), Implies(P(c), P(c)))


class TestSubstitution:
    """Test capture-avoiding substitution."""

    def test_simple(self) -> None:
        """Test substitution of a free variable."""
        assert apply_subst({"x": c}, P(x, y)) == P(c, y)

    def test_bound_variable_untouched(self) -> None:
        """Test that a bound occurrence is not replaced."""
        formula = Forall("x", P(x, y))
        assert apply_subst({"x": c}, formula) == formula

    def test_capture_avoided(self) -> None:
        """Test that the binder is renamed when the incoming term mentions it."""
        result = apply_subst({"y": x}, Forall("x", P(x, y)))
        assert isinstance(result, Forall)
        assert result.var != "x"
        assert alpha_equal(result, Forall("w", P(Var("w"), x)))
        assert free_vars(result) == {"x"}

    def test_instantiate(self) -> None:
        """Test instantiating a quantifier with a term."""
        assert instantiate(Exists("y", P(c, y)), f(c)) == P(c, f(c))

    def test_simultaneous(self) -> None:
        """Test that both bindings apply at once and are not chained."""
        z = Var("z")
        formula = Atom("Q", (x, z))
        result = apply_subst({"x": App("g", (z,)), "z": c}, formula)
        assert result == Atom("Q", (App("g", (z,)), c))


class TestReplaceSubterm:
    """Test replacement of a term by a variable."""

    def test_replaces_every_occurrence(self) -> None:
        """Test that all free occurrences are replaced."""
        formula = And(P(f(c)), Exists("w", P(f(c), Var("w"))))
        assert replace_subterm(formula, f(c), z0) == And(P(z0), Exists("w", P(z0, Var("w"))))

    def test_bound_occurrence_kept(self) -> None:
        """Test that an occurrence under a binder of the term's variable is kept."""
        formula = Forall("x", P(x, f(x)))
        assert replace_subterm(formula, f(x), z0) == formula

    def test_binder_named_like_replacement_is_renamed(self) -> None:
        """Test that the replacement variable is not captured."""
        result = replace_subterm(Forall("z0", P(Var("z0"), f(c))), f(c), z0)
        assert isinstance(result, Forall)
        assert result.var != "z0"
        assert free_vars(result) == {"z0"}


def _frozen_formula(rng: random.Random, depth: int, scope: tuple[Var, ...]) -> Formula:
    """A formula whose f-terms mention no variables."""
    if depth == 0 or rng.random() < 0.3:
        terms = [*scope, Var("v"), c, d, f(c), f(d), f(f(c))]
        return P(rng.choice(terms), rng.choice(terms))
    match rng.randrange(4):
        case 0:
            return And(
                _frozen_formula(rng, depth - 1, scope), _frozen_formula(rng, depth - 1, scope)
            )
        case 1:
            return Or(
                _frozen_formula(rng, depth - 1, scope), _frozen_formula(rng, depth - 1, scope)
            )
        case 2:
            return Implies(
                _frozen_formula(rng, depth - 1, scope), _frozen_formula(rng, depth - 1, scope)
            )
    w = Var(f"w{depth}")
    return Exists(w.name, _frozen_formula(rng, depth - 1, (*scope, w)))


class TestReplaceCommutesWithInstantiation:
    """Test that replacing a frozen term commutes with instantiating a quantifier."""

    @pytest.mark.parametrize("seed", range(40))
    def test_random_formulas(self, seed: int) -> None:
        """Test σ((t/x)B) against (σt/x)σB for a random B and several witnesses t."""
        rng = random.Random(seed)
        quantified = Forall("x", _frozen_formula(rng, 4, (x,)))
        replaced = replace_subterm(quantified, f(c), z0)
        for witness in (c, d, f(c), f(f(c)), Var("v")):
            left = replace_subterm(instantiate(quantified, witness), f(c), z0)
            right = instantiate(replaced, replace_subterm(witness, f(c), z0))
            assert alpha_equal(left, right)


class TestRendering:
    """Test canonical text of terms and formulas."""

    def test_terms(self) -> None:
        """Test constants, variables and applications."""
        assert render_term(c) == "c"
        assert render_term(x) == "x"
        assert render_term(f(f(c))) == "(f (f c))"

    def test_formulas(self) -> None:
        """Test each connective."""
        formula = Forall("x", Implies(P(x), Exists("y", And(P(y), Absurd()))))
        assert render_formula(formula) == (
            "(forall x (imp (atom P x) (exists y (and (atom P y) false))))"
        )
        assert render_formula(Atom("Z")) == "(atom Z)"


class TestMeasures:
    """Test size and symbol helpers."""

    def test_term_size(self) -> None:
        """Test that size counts nodes."""
        assert term_size(c) == 1
        assert term_size(f(f(x))) == 3

    def test_symbols(self) -> None:
        """Test that constants count as function symbols."""
        assert symbols_of(Forall("x", P(x, f(c)))) == {"f", "c"}
