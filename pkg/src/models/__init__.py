"""Data models and types."""

from src.models.proof import Context, Proof, Sequent
from src.models.skolem import (
    AllFrozen,
    HasUnfrozen,
    InstanceClass,
    PartialInstance,
    SkolemSignature,
    TotalInstance,
)
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
    Term,
    Var,
)

__all__ = [
    "Absurd",
    "AllFrozen",
    "And",
    "App",
    "Atom",
    "Context",
    "Exists",
    "Forall",
    "Formula",
    "HasUnfrozen",
    "Implies",
    "InstanceClass",
    "Or",
    "PartialInstance",
    "Proof",
    "Sequent",
    "SkolemSignature",
    "Term",
    "TotalInstance",
    "Var",
]
