"""Proof services: checking, normalization, deskolemization and bounded search."""

from src.services.deskolemizer import (
    DeskolemizationError,
    Deskolemizer,
    conservativity_round_trip,
    deskolemize,
    deskolemize_general,
    deskolemizer,
    skolemize_axiom,
)
from src.services.kernel import KernelError, check, infer, verify
from src.services.normalizer import NormalizationError, Normalizer, normalize, normalizer
from src.services.oracle import ProofSearch, Provable, SearchBudget, Unknown, proof_search, prove

__all__ = [
    "check",
    "conservativity_round_trip",
    "DeskolemizationError",
    "Deskolemizer",
    "deskolemize",
    "deskolemize_general",
    "deskolemizer",
    "infer",
    "KernelError",
    "NormalizationError",
    "Normalizer",
    "normalize",
    "normalizer",
    "ProofSearch",
    "Provable",
    "proof_search",
    "prove",
    "SearchBudget",
    "skolemize_axiom",
    "Unknown",
    "verify",
]
