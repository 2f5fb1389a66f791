"""Canonical text for documents: one item per line, single spaces, no trailing blanks."""

from src.cli.document import (
    Document,
    FunctionDecl,
    Item,
    NamedFormula,
    NamedProof,
    NamedSequent,
    NamedSkolem,
    PredicateDecl,
)
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
from src.models.skolem import SkolemSignature
from src.models.syntax import render_formula, render_term


def render_proof(proof: Proof) -> str:
    match proof:
        case Hyp(label):
            return f"(hyp {label})"
        case ImpIntro(label, hypothesis, body):
            return f"(imp-i {label} {render_formula(hypothesis)} {render_proof(body)})"
        case ImpElim(major, minor):
            return f"(imp-e {render_proof(major)} {render_proof(minor)})"
        case AndIntro(left, right):
            return f"(and-i {render_proof(left)} {render_proof(right)})"
        case AndElimL(sub):
            return f"(and-el {render_proof(sub)})"
        case AndElimR(sub):
            return f"(and-er {render_proof(sub)})"
        case OrIntroL(other, sub):
            return f"(or-il {render_formula(other)} {render_proof(sub)})"
        case OrIntroR(other, sub):
            return f"(or-ir {render_formula(other)} {render_proof(sub)})"
        case OrElim(major, left_label, left, right_label, right):
            return (
                f"(or-e {render_proof(major)} {left_label} {render_proof(left)}"
                f" {right_label} {render_proof(right)})"
            )
        case ForallIntro(eigenvariable, body):
            return f"(forall-i {eigenvariable} {render_proof(body)})"
        case ForallElim(witness, sub):
            return f"(forall-e {render_term(witness)} {render_proof(sub)})"
        case ExistsIntro(witness, target, sub):
            return f"(exists-i {render_term(witness)} {render_formula(target)} {render_proof(sub)})"
        case ExistsElim(major, eigenvariable, label, minor):
            return f"(exists-e {render_proof(major)} {eigenvariable} {label} {render_proof(minor)})"
        case AbsurdElim(target, sub):
            return f"(false-e {render_formula(target)} {render_proof(sub)})"
    raise TypeError(f"Not a proof: {proof!r}")


def render_sequent(sequent: Sequent) -> str:
    hypotheses = " ".join(
        f"({label} {render_formula(formula)})" for label, formula in sequent.context
    )
    return f"(seq ({hypotheses}) {render_formula(sequent.conclusion)})"


def render_signature(name: str, sig: SkolemSignature) -> str:
    return (
        f"(skolem {name} {sig.symbol} ({' '.join(sig.xbar)}) {sig.y}"
        f" {render_formula(sig.matrix)})"
    )


def render_item(item: Item) -> str:
    match item:
        case FunctionDecl(name, arity) | PredicateDecl(name, arity):
            return f"({item.kind} {name} {arity})"
        case NamedFormula(name, formula):
            return f"(formula {name} {render_formula(formula)})"
        case NamedSequent(name, sequent):
            return f"(sequent {name} {render_sequent(sequent)})"
        case NamedProof(name, proof):
            return f"(proof {name} {render_proof(proof)})"
        case NamedSkolem(name, sig):
            return render_signature(name, sig)
    raise TypeError(f"Not a document item: {item!r}")


def render_document(document: Document) -> str:
    """Canonical text of ``document``; equal documents give identical text."""
    return "".join(f"{render_item(item)}\n" for item in document.items)
