"""Reader for the parenthesized prefix document format.

Text is first turned into plain s-expressions by a lark LALR parser, then
each top-level form is elaborated into a document item. Symbols must be
declared before they are used; a bare identifier is a constant when it was
declared with ``(fun c 0)`` and a variable otherwise.
"""

import logging
import re
from dataclasses import dataclass

import lark
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from src.cli.document import (
    ArityError,
    Document,
    DocumentSyntaxError,
    DuplicateName,
    FunctionDecl,
    MalformedForm,
    NamedFormula,
    NamedProof,
    NamedSequent,
    NamedSkolem,
    PredicateDecl,
    ReservedName,
    UndeclaredSymbol,
)
from src.models.proof import (
    AbsurdElim,
    AndElimL,
    AndElimR,
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
    OrIntroR,
    Proof,
    Sequent,
)
from src.models.skolem import SkolemSignature
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
    is_reserved_name,
)

logger = logging.getLogger(__name__)

grammar = r"""
    start : item*

    ?item : group
          | SYMBOL
          | NUMBER

    group : LPAR item* RPAR

    LPAR : "("
    RPAR : ")"
    SYMBOL : /[A-Za-z][A-Za-z0-9_-]*/
    NUMBER : /[0-9]+/
    COMMENT : /;[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_parser = lark.Lark(grammar, start="start", parser="lalr", propagate_positions=True)

_IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")


def is_identifier(text: str) -> bool:
    return _IDENTIFIER.fullmatch(text) is not None


@dataclass(frozen=True)
class SAtom:
    text: str
    line: int
    column: int

    @property
    def is_number(self) -> bool:
        return self.text.isdigit()


@dataclass(frozen=True)
class SList:
    items: tuple["SExpr", ...]
    line: int
    column: int


SExpr = SAtom | SList


class SExprTransformer(lark.Transformer):
    def _atom(self, token: lark.Token) -> SAtom:
        return SAtom(str(token), token.line or 1, token.column or 1)

    def _item(self, child: object) -> SExpr:
        if isinstance(child, lark.Token):
            return self._atom(child)
        assert isinstance(child, SAtom | SList)
        return child

    @lark.v_args(meta=True)
    def group(self, meta: lark.tree.Meta, items: list) -> SList:
        children = [
            child
            for child in items
            if not (isinstance(child, lark.Token) and child.type in ("LPAR", "RPAR"))
        ]
        return SList(
            tuple(self._item(child) for child in children),
            getattr(meta, "line", 1),
            getattr(meta, "column", 1),
        )

    def start(self, items: list) -> list[SExpr]:
        return [self._item(child) for child in items]


_transformer = SExprTransformer()


def _end_position(text: str) -> tuple[int, int]:
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


def read_sexprs(text: str) -> list[SExpr]:
    """Parse ``text`` into top-level s-expressions.

    Raises:
        DocumentSyntaxError: With the line and column of the offending input.
    """
    try:
        tree = _parser.parse(text)
    except UnexpectedEOF as e:
        line, column = _end_position(text)
        raise DocumentSyntaxError("unexpected end of input", line, column) from e
    except UnexpectedToken as e:
        if e.token.type == "$END":
            line, column = _end_position(text)
            raise DocumentSyntaxError("unexpected end of input", line, column) from e
        raise DocumentSyntaxError(f"unexpected {str(e.token)!r}", e.line, e.column) from e
    except UnexpectedCharacters as e:
        raise DocumentSyntaxError(f"unexpected character {e.char!r}", e.line, e.column) from e
    except UnexpectedInput as e:
        raise DocumentSyntaxError(str(e).splitlines()[0], e.line, e.column) from e
    return _transformer.transform(tree)


def _head(form: SExpr) -> str | None:
    if isinstance(form, SList) and form.items and isinstance(form.items[0], SAtom):
        return form.items[0].text
    return None


class _Reader:
    """Elaborates s-expressions against the declarations seen so far."""

    def __init__(self, document: Document) -> None:
        self.document = document

    def _malformed(self, form: SExpr, what: str) -> MalformedForm:
        return MalformedForm(what, form.line, form.column)

    def _parts(self, form: SExpr, head: str, count: int) -> tuple[SExpr, ...]:
        if not isinstance(form, SList) or _head(form) != head or len(form.items) != count + 1:
            raise self._malformed(form, f"({head} ...) expects {count} arguments")
        return form.items[1:]

    def _identifier(self, form: SExpr, what: str) -> str:
        if not isinstance(form, SAtom) or form.is_number:
            raise self._malformed(form, f"expected {what}")
        return form.text

    def _number(self, form: SExpr) -> int:
        if not isinstance(form, SAtom) or not form.is_number:
            raise self._malformed(form, "expected an arity")
        return int(form.text)

    def _variable(self, form: SExpr) -> str:
        name = self._identifier(form, "a variable")
        if name in self.document.functions():
            raise self._malformed(form, f"{name} is a function symbol, not a variable")
        return name

    def term(self, form: SExpr) -> Term:
        functions = self.document.functions()
        if isinstance(form, SAtom):
            name = self._identifier(form, "a term")
            arity = functions.get(name)
            if arity is None:
                return Var(name)
            if arity != 0:
                raise ArityError(f"{name} expects {arity} arguments", form.line, form.column)
            return App(name)

        symbol = _head(form)
        if symbol is None:
            raise self._malformed(form, "expected a term")
        if symbol not in functions:
            raise UndeclaredSymbol(f"function {symbol} is not declared", form.line, form.column)
        if functions[symbol] == 0:
            raise ArityError(f"{symbol} is a constant", form.line, form.column)
        args = tuple(self.term(arg) for arg in form.items[1:])
        if len(args) != functions[symbol]:
            raise ArityError(
                f"{symbol} expects {functions[symbol]} arguments, got {len(args)}",
                form.line,
                form.column,
            )
        return App(symbol, args)

    def formula(self, form: SExpr) -> Formula:
        if isinstance(form, SAtom):
            if form.text == "false":
                return Absurd()
            raise self._malformed(form, f"expected a formula, got {form.text}")

        head = _head(form)
        match head:
            case "atom":
                if len(form.items) < 2:
                    raise self._malformed(form, "(atom P t...) needs a predicate")
                predicate = self._identifier(form.items[1], "a predicate")
                predicates = self.document.predicates()
                if predicate not in predicates:
                    raise UndeclaredSymbol(
                        f"predicate {predicate} is not declared", form.line, form.column
                    )
                args = tuple(self.term(arg) for arg in form.items[2:])
                if len(args) != predicates[predicate]:
                    raise ArityError(
                        f"{predicate} expects {predicates[predicate]} arguments, got {len(args)}",
                        form.line,
                        form.column,
                    )
                return Atom(predicate, args)
            case "imp" | "and" | "or":
                left, right = self._parts(form, head, 2)
                connective = {"imp": Implies, "and": And, "or": Or}[head]
                return connective(self.formula(left), self.formula(right))
            case "forall" | "exists":
                var, body = self._parts(form, head, 2)
                quantifier = Forall if head == "forall" else Exists
                return quantifier(self._variable(var), self.formula(body))
        raise self._malformed(form, f"unknown formula form {head}")

    def sequent(self, form: SExpr) -> Sequent:
        hypotheses, conclusion = self._parts(form, "seq", 2)
        if not isinstance(hypotheses, SList):
            raise self._malformed(hypotheses, "expected a list of hypotheses")
        entries: list[tuple[str, Formula]] = []
        for entry in hypotheses.items:
            if not isinstance(entry, SList) or len(entry.items) != 2:
                raise self._malformed(entry, "expected (label formula)")
            label = self._identifier(entry.items[0], "a label")
            if any(label == taken for taken, _ in entries):
                raise DuplicateName(f"label {label} is used twice", entry.line, entry.column)
            entries.append((label, self.formula(entry.items[1])))
        return Sequent(Context(tuple(entries)), self.formula(conclusion))

    def proof(self, form: SExpr) -> Proof:
        head = _head(form)
        match head:
            case "hyp":
                (label,) = self._parts(form, head, 1)
                return Hyp(self._identifier(label, "a label"))
            case "imp-i":
                label, hypothesis, body = self._parts(form, head, 3)
                return ImpIntro(
                    self._identifier(label, "a label"), self.formula(hypothesis), self.proof(body)
                )
            case "imp-e":
                major, minor = self._parts(form, head, 2)
                return ImpElim(self.proof(major), self.proof(minor))
            case "and-i":
                left, right = self._parts(form, head, 2)
                return AndIntro(self.proof(left), self.proof(right))
            case "and-el":
                (sub,) = self._parts(form, head, 1)
                return AndElimL(self.proof(sub))
            case "and-er":
                (sub,) = self._parts(form, head, 1)
                return AndElimR(self.proof(sub))
            case "or-il" | "or-ir":
                other, sub = self._parts(form, head, 2)
                intro = OrIntroL if head == "or-il" else OrIntroR
                return intro(self.formula(other), self.proof(sub))
            case "or-e":
                major, left_label, left, right_label, right = self._parts(form, head, 5)
                return OrElim(
                    self.proof(major),
                    self._identifier(left_label, "a label"),
                    self.proof(left),
                    self._identifier(right_label, "a label"),
                    self.proof(right),
                )
            case "forall-i":
                var, body = self._parts(form, head, 2)
                return ForallIntro(self._variable(var), self.proof(body))
            case "forall-e":
                witness, sub = self._parts(form, head, 2)
                return ForallElim(self.term(witness), self.proof(sub))
            case "exists-i":
                witness, target, sub = self._parts(form, head, 3)
                return ExistsIntro(self.term(witness), self.formula(target), self.proof(sub))
            case "exists-e":
                major, var, label, minor = self._parts(form, head, 4)
                return ExistsElim(
                    self.proof(major),
                    self._variable(var),
                    self._identifier(label, "a label"),
                    self.proof(minor),
                )
            case "false-e":
                target, sub = self._parts(form, head, 2)
                return AbsurdElim(self.formula(target), self.proof(sub))
        raise self._malformed(form, f"unknown proof rule {head}")

    def _symbol_name(self, form: SExpr) -> str:
        name = self._identifier(form, "a symbol name")
        if is_reserved_name(name):
            raise ReservedName(f"{name} is reserved for fresh variables", form.line, form.column)
        return name

    def item(self, form: SExpr) -> None:
        head = _head(form)
        line, column = form.line, form.column
        match head:
            case "fun" | "pred":
                name, arity = self._parts(form, head, 2)
                decl = FunctionDecl if head == "fun" else PredicateDecl
                self.document.add(decl(self._symbol_name(name), self._number(arity)), line, column)
            case "formula":
                name, body = self._parts(form, head, 2)
                item_name = self._identifier(name, "an item name")
                self.document.add(NamedFormula(item_name, self.formula(body)), line, column)
            case "sequent":
                name, body = self._parts(form, head, 2)
                item_name = self._identifier(name, "an item name")
                self.document.add(NamedSequent(item_name, self.sequent(body)), line, column)
            case "proof":
                name, body = self._parts(form, head, 2)
                item_name = self._identifier(name, "an item name")
                self.document.add(NamedProof(item_name, self.proof(body)), line, column)
            case "skolem":
                self.document.add(self._skolem(form), line, column)
            case _:
                raise self._malformed(form, f"unknown top-level form {head}")

    def _skolem(self, form: SExpr) -> NamedSkolem:
        name, symbol, xbar, y, matrix = self._parts(form, "skolem", 5)
        item_name = self._identifier(name, "an item name")
        function = self._identifier(symbol, "a function symbol")
        functions = self.document.functions()
        if function not in functions:
            raise UndeclaredSymbol(
                f"function {function} is not declared", symbol.line, symbol.column
            )
        if not isinstance(xbar, SList):
            raise self._malformed(xbar, "expected a list of variables")
        variables = tuple(self._variable(x) for x in xbar.items)
        if functions[function] != len(variables):
            raise ArityError(
                f"{function} expects {functions[function]} arguments, got {len(variables)}",
                xbar.line,
                xbar.column,
            )
        try:
            sig = SkolemSignature(
                symbol=function,
                matrix=self.formula(matrix),
                xbar=variables,
                y=self._variable(y),
            )
        except ValueError as e:
            raise self._malformed(form, str(e)) from e
        return NamedSkolem(item_name, sig)


def parse_document(text: str) -> Document:
    """Read a whole document.

    Raises:
        DocumentError: The first problem found, with its source position.
    """
    document = Document()
    reader = _Reader(document)
    for form in read_sexprs(text):
        reader.item(form)
    logger.debug(f"Parsed document with {len(document.items)} items")
    return document


def parse_formula(text: str, document: Document | None = None) -> Formula:
    """Read a single formula against the declarations of ``document``."""
    forms = read_sexprs(text)
    if len(forms) != 1:
        raise DocumentSyntaxError(f"expected one formula, got {len(forms)} forms")
    return _Reader(document or Document()).formula(forms[0])


def parse_proof(text: str, document: Document | None = None) -> Proof:
    """Read a single proof against the declarations of ``document``."""
    forms = read_sexprs(text)
    if len(forms) != 1:
        raise DocumentSyntaxError(f"expected one proof, got {len(forms)} forms")
    return _Reader(document or Document()).proof(forms[0])
