"""Command-line entry point."""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from src.cli.document import (
    Document,
    DocumentError,
    DocumentSyntaxError,
    FunctionDecl,
    Item,
    MalformedForm,
    NamedProof,
    NamedSequent,
    NamedSkolem,
    ReservedName,
)
from src.cli.parser import is_identifier, parse_document
from src.cli.printer import render_document, render_proof
from src.config import config
from src.models.proof import Context, Proof, Sequent, render_path
from src.models.skolem import (
    AllFrozen,
    HasUnfrozen,
    PartialInstance,
    SkolemSignature,
    TotalInstance,
    classify,
    f_terms_of,
    is_frozen,
)
from src.models.syntax import Term, is_reserved_name, render_term
from src.services.deskolemizer import (
    DeskolemizationError,
    SymbolInUse,
    deskolemize,
    deskolemize_general,
    skolemize_axiom,
)
from src.services.kernel import KernelError, check
from src.services.normalizer import NormalizationError, normalize
from src.services.oracle import Provable, SearchBudget, prove

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def setup_logging(level: str | None = None) -> None:
    """Configure logging for the application; stdout is reserved for documents."""
    logging.basicConfig(
        level=getattr(logging, (level or config.log_level).upper(), logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        before = data[: e.start]
        line = before.count(b"\n") + 1
        column = len(before[before.rfind(b"\n") + 1 :].decode("utf-8")) + 1
        raise DocumentSyntaxError(f"invalid UTF-8 byte 0x{data[e.start]:02x}", line, column) from e


class _Invocation:
    """One command run: the loaded document and the item diagnostics point at."""

    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args
        self.file: str = args.file
        self.anchor: tuple[int, int] = (1, 1)
        self._document: Document | None = None

    @property
    def document(self) -> Document:
        if self._document is None:
            self._document = parse_document(_decode(Path(self.file).read_bytes()))
        return self._document

    def proof(self, name: str) -> Proof:
        proof = self.document.proof(name)
        self.anchor = self.document.position("proof", name)
        return proof

    def sequent(self, name: str) -> Sequent:
        return self.document.sequent(name)

    def skolem(self, name: str) -> SkolemSignature:
        return self.document.skolem(name)

    def emit(self, items: Sequence[Item]) -> None:
        self.write(render_document(Document(list(items))))

    def write(self, text: str) -> None:
        output = self.args.output
        if output:
            Path(output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)

    def diagnose(self, line: int, column: int, code: str, message: str) -> None:
        print(f"{self.file}:{line}:{column}: {code}: {message}", file=sys.stderr)


def _replace_proof(items: Sequence[Item], name: str, proof: Proof) -> list[Item]:
    return [
        NamedProof(name, proof) if isinstance(item, NamedProof) and item.name == name else item
        for item in items
    ]


def cmd_check(invocation: _Invocation) -> int:
    proof = invocation.proof(invocation.args.proof)
    sequent = invocation.sequent(invocation.args.sequent)
    check(proof, sequent)
    logger.info(f"Proof {invocation.args.proof} checks against {invocation.args.sequent}")
    return EXIT_OK


def cmd_normalize(invocation: _Invocation) -> int:
    proof = invocation.proof(invocation.args.proof)
    sequent = invocation.sequent(invocation.args.seq) if invocation.args.seq else None
    context = sequent.context if sequent else Context()
    if sequent:
        check(proof, sequent)
    result = normalize(proof, context)
    if sequent:
        check(result, sequent)
    invocation.emit(_replace_proof(invocation.document.items, invocation.args.proof, result))
    return EXIT_OK


def cmd_deskolemize(invocation: _Invocation) -> int:
    args = invocation.args
    pi_a = invocation.document.proof(args.pia)
    proof = invocation.proof(args.proof)
    sig = invocation.skolem(args.sig)
    sequent = invocation.sequent(args.seq)
    if args.pia_seq:
        pi_a_seq = invocation.sequent(args.pia_seq)
    else:
        skolem_label = sequent.context.find(sig.skolem_axiom())
        outer = sequent.context.without(skolem_label) if skolem_label else sequent.context
        pi_a_seq = Sequent(outer, sig.existential())

    if args.general:
        result = deskolemize_general(pi_a, pi_a_seq, proof, sequent, sig)
        new_proof, new_sequent = result.proof, result.sequent
        declarations = invocation.document.declarations()
    else:
        new_proof, new_sequent = deskolemize(pi_a, pi_a_seq, proof, sequent, sig)
        declarations = invocation.document.declarations(exclude=frozenset({sig.symbol}))

    name = f"{args.proof}-deskolemized"
    invocation.emit([*declarations, NamedSequent(name, new_sequent), NamedProof(name, new_proof)])
    return EXIT_OK


def cmd_skolemize_axiom(invocation: _Invocation) -> int:
    args = invocation.args
    if not is_identifier(args.fun):
        raise MalformedForm(f"{args.fun!r} is not an identifier")
    if is_reserved_name(args.fun):
        raise ReservedName(f"{args.fun} is reserved for fresh variables")
    sequent = invocation.sequent(args.seq)
    document = invocation.document
    if args.fun in document.functions() or args.fun in document.predicates():
        raise SymbolInUse(f"{args.fun} is already declared")

    theory, sig = skolemize_axiom(sequent.context, args.axiom, args.fun)
    invocation.emit(
        [
            *document.declarations(),
            FunctionDecl(sig.symbol, sig.arity),
            NamedSkolem(f"{args.axiom}-skolem", sig),
            NamedSequent(f"{args.seq}-skolemized", Sequent(theory, sequent.conclusion)),
        ]
    )
    return EXIT_OK


def _terms(terms: Sequence[Term]) -> str:
    return f"({' '.join(render_term(term) for term in terms)})"


def cmd_analyze(invocation: _Invocation) -> int:
    args = invocation.args
    sig = invocation.skolem(args.sig)
    formula = invocation.document.formula(args.formula)

    lines: list[str] = []
    match classify(formula, sig):
        case PartialInstance(index, prefix):
            lines.append(f"(instance-class partial-instance {index} {_terms(prefix)})")
        case TotalInstance(terms):
            lines.append(f"(instance-class total-instance {_terms(terms)})")
        case AllFrozen():
            lines.append("(instance-class all-frozen)")
        case HasUnfrozen():
            lines.append("(instance-class has-unfrozen)")
    for term in f_terms_of(formula, sig.symbol):
        report = is_frozen(term, formula)
        marks = " ".join("yes" if frozen else "no" for frozen in report.occurrences)
        verdict = "yes" if report.frozen else "no"
        lines.append(f"(frozen {render_term(term)} {verdict} {marks})")

    if args.prove:
        budget = SearchBudget(max_depth=args.depth, max_terms=args.terms)
        result = prove(invocation.sequent(args.prove), budget)
        if isinstance(result, Provable):
            lines.append(f"(oracle {args.prove} provable)")
            lines.append(f"(proof {args.prove}-oracle {render_proof(result.proof)})")
        else:
            lines.append(f"(oracle {args.prove} unknown)")

    invocation.write("".join(f"{line}\n" for line in lines))
    return EXIT_OK


def _positive_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid count {raw!r}") from e
    if value <= 0:
        raise argparse.ArgumentTypeError(f"count must be positive, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deskolem",
        description="Check, normalize and deskolemize natural deduction proofs.",
    )
    parser.add_argument("--log-level", help="Override LOG_LEVEL for this run")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(
        name: str, handler: Callable[[_Invocation], int], summary: str
    ) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=summary)
        sub.add_argument("file", help="Document to read")
        sub.set_defaults(handler=handler, output=None)
        return sub

    sub = command("check", cmd_check, "Check a proof against a sequent")
    sub.add_argument("proof")
    sub.add_argument("sequent")

    sub = command("normalize", cmd_normalize, "Normalize a proof")
    sub.add_argument("proof")
    sub.add_argument("--seq", help="Sequent of the proof; enables the ⊥ permutation")
    sub.add_argument("-o", "--output", help="Write the result here instead of stdout")

    sub = command("deskolemize", cmd_deskolemize, "Remove a Skolem hypothesis from a proof")
    sub.add_argument("--pia", required=True, help="Proof of the existential axiom")
    sub.add_argument("--proof", required=True, help="Proof using the Skolem hypothesis")
    sub.add_argument("--sig", required=True, help="Skolem signature")
    sub.add_argument("--seq", required=True, help="Sequent of --proof")
    sub.add_argument("--pia-seq", help="Sequent of --pia; defaults to the context minus S")
    sub.add_argument("--general", action="store_true", help="Allow frozen Skolem terms")
    sub.add_argument("-o", "--output", help="Write the result here instead of stdout")

    sub = command("skolemize-axiom", cmd_skolemize_axiom, "Skolemize one axiom of a theory")
    sub.add_argument("--seq", required=True, help="Sequent whose context is the theory")
    sub.add_argument("--axiom", required=True, help="Label of the axiom")
    sub.add_argument("--fun", required=True, help="Name of the new function symbol")
    sub.add_argument("-o", "--output", help="Write the result here instead of stdout")

    sub = command("analyze", cmd_analyze, "Classify a formula and report frozen Skolem terms")
    sub.add_argument("--sig", required=True)
    sub.add_argument("--formula", required=True)
    sub.add_argument("--prove", help="Also run the bounded prover on this sequent")
    sub.add_argument("--depth", type=_positive_int, default=7, help="Prover depth")
    sub.add_argument("--terms", type=_positive_int, default=8, help="Prover term budget")
    sub.add_argument("-o", "--output", help="Write the result here instead of stdout")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(args.log_level)
    invocation = _Invocation(args)
    try:
        return args.handler(invocation)
    except OSError as e:
        invocation.diagnose(1, 1, "io-error", str(e))
        return EXIT_USAGE
    except DocumentError as e:
        invocation.diagnose(e.line, e.column, e.code, e.message)
        return EXIT_USAGE
    except (KernelError, NormalizationError, DeskolemizationError) as e:
        line, column = invocation.anchor
        invocation.diagnose(line, column, e.code, f"at {render_path(e.path)}: {e.message}")
        return EXIT_FAILURE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
