"""Documents: named declarations, formulas, sequents, proofs and Skolem signatures."""

from dataclasses import dataclass, field
from typing import ClassVar

from src.models.proof import Proof, Sequent
from src.models.skolem import SkolemSignature
from src.models.syntax import Formula


class DocumentError(Exception):
    """Base exception for document reading and lookup errors."""

    code = "document-error"

    def __init__(self, message: str, line: int = 1, column: int = 1) -> None:
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column


class DocumentSyntaxError(DocumentError):
    """Text that is not a well-formed sequence of forms."""

    code = "syntax-error"


class MalformedForm(DocumentError):
    """A form with the wrong head or the wrong number of parts."""

    code = "malformed-form"


class ArityError(DocumentError):
    """A symbol used with a different number of arguments than declared."""

    code = "arity-error"


class UndeclaredSymbol(DocumentError):
    """A function or predicate symbol used before its declaration."""

    code = "undeclared-symbol"


class DuplicateName(DocumentError):
    """An item name, symbol or hypothesis label defined twice."""

    code = "duplicate-name"


class ReservedName(DocumentError):
    """A symbol declaration using the fresh-variable scheme ``z<digits>``."""

    code = "reserved-name"


class UnknownName(DocumentError):
    """A lookup of an item that the document does not define."""

    code = "unknown-name"


@dataclass(frozen=True)
class FunctionDecl:
    kind: ClassVar[str] = "fun"
    name: str
    arity: int


@dataclass(frozen=True)
class PredicateDecl:
    kind: ClassVar[str] = "pred"
    name: str
    arity: int


@dataclass(frozen=True)
class NamedFormula:
    kind: ClassVar[str] = "formula"
    name: str
    formula: Formula


@dataclass(frozen=True)
class NamedSequent:
    kind: ClassVar[str] = "sequent"
    name: str
    sequent: Sequent


@dataclass(frozen=True)
class NamedProof:
    kind: ClassVar[str] = "proof"
    name: str
    proof: Proof


@dataclass(frozen=True)
class NamedSkolem:
    kind: ClassVar[str] = "skolem"
    name: str
    sig: SkolemSignature


Item = FunctionDecl | PredicateDecl | NamedFormula | NamedSequent | NamedProof | NamedSkolem


@dataclass
class Document:
    """Items in source order. Source positions do not take part in equality."""

    items: list[Item] = field(default_factory=list)
    positions: dict[tuple[str, str], tuple[int, int]] = field(default_factory=dict, compare=False)

    def add(self, item: Item, line: int = 1, column: int = 1) -> None:
        """Append an item; names are unique per kind, symbols across ``fun`` and ``pred``."""
        kinds = ("fun", "pred") if item.kind in ("fun", "pred") else (item.kind,)
        if any((kind, item.name) in self.positions for kind in kinds):
            raise DuplicateName(f"{item.kind} {item.name} is already defined", line, column)
        self.items.append(item)
        self.positions[(item.kind, item.name)] = (line, column)

    def functions(self) -> dict[str, int]:
        return {item.name: item.arity for item in self.items if isinstance(item, FunctionDecl)}

    def predicates(self) -> dict[str, int]:
        return {item.name: item.arity for item in self.items if isinstance(item, PredicateDecl)}

    def declarations(self, exclude: frozenset[str] = frozenset()) -> list[Item]:
        """Symbol declarations in source order, minus the symbols in ``exclude``."""
        return [
            item
            for item in self.items
            if isinstance(item, FunctionDecl | PredicateDecl) and item.name not in exclude
        ]

    def position(self, kind: str, name: str) -> tuple[int, int]:
        return self.positions.get((kind, name), (1, 1))

    def _find(self, kind: str, name: str) -> Item:
        for item in self.items:
            if item.kind == kind and item.name == name:
                return item
        raise UnknownName(f"no {kind} named {name}")

    def formula(self, name: str) -> Formula:
        item = self._find("formula", name)
        assert isinstance(item, NamedFormula)
        return item.formula

    def sequent(self, name: str) -> Sequent:
        item = self._find("sequent", name)
        assert isinstance(item, NamedSequent)
        return item.sequent

    def proof(self, name: str) -> Proof:
        item = self._find("proof", name)
        assert isinstance(item, NamedProof)
        return item.proof

    def skolem(self, name: str) -> SkolemSignature:
        item = self._find("skolem", name)
        assert isinstance(item, NamedSkolem)
        return item.sig
