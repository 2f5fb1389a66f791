"""Natural deduction proof trees, contexts and sequents."""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from src.models.syntax import Formula, Term, all_names, alpha_equal


@dataclass(frozen=True)
class Hyp:
    label: str


@dataclass(frozen=True)
class ImpIntro:
    label: str
    hypothesis: Formula
    body: "Proof"


@dataclass(frozen=True)
class ImpElim:
    major: "Proof"
    minor: "Proof"


@dataclass(frozen=True)
class AndIntro:
    left: "Proof"
    right: "Proof"


@dataclass(frozen=True)
class AndElimL:
    proof: "Proof"


@dataclass(frozen=True)
class AndElimR:
    proof: "Proof"


@dataclass(frozen=True)
class OrIntroL:
    """Proves ``A ∨ other`` from a proof of ``A``."""

    other: Formula
    proof: "Proof"


@dataclass(frozen=True)
class OrIntroR:
    """Proves ``other ∨ B`` from a proof of ``B``."""

    other: Formula
    proof: "Proof"


@dataclass(frozen=True)
class OrElim:
    major: "Proof"
    left_label: str
    left: "Proof"
    right_label: str
    right: "Proof"


@dataclass(frozen=True)
class ForallIntro:
    eigenvariable: str
    body: "Proof"


@dataclass(frozen=True)
class ForallElim:
    witness: Term
    proof: "Proof"


@dataclass(frozen=True)
class ExistsIntro:
    """Proves ``target`` (an existential) from a proof of its instance at ``witness``."""

    witness: Term
    target: Formula
    proof: "Proof"


@dataclass(frozen=True)
class ExistsElim:
    major: "Proof"
    eigenvariable: str
    label: str
    minor: "Proof"


@dataclass(frozen=True)
class AbsurdElim:
    target: Formula
    proof: "Proof"


Proof = (
    Hyp
    | ImpIntro
    | ImpElim
    | AndIntro
    | AndElimL
    | AndElimR
    | OrIntroL
    | OrIntroR
    | OrElim
    | ForallIntro
    | ForallElim
    | ExistsIntro
    | ExistsElim
    | AbsurdElim
)

INTRODUCTIONS = (ImpIntro, AndIntro, OrIntroL, OrIntroR, ForallIntro, ExistsIntro)
ELIMINATIONS = (ImpElim, AndElimL, AndElimR, OrElim, ForallElim, ExistsElim, AbsurdElim)

Path = tuple[int, ...]


def premises(proof: Proof) -> tuple[Proof, ...]:
    """Immediate subproofs, major premise first for eliminations."""
    match proof:
        case Hyp():
            return ()
        case ImpIntro(_, _, body):
            return (body,)
        case ImpElim(major, minor):
            return (major, minor)
        case AndIntro(left, right):
            return (left, right)
        case AndElimL(sub) | AndElimR(sub) | OrIntroL(_, sub) | OrIntroR(_, sub):
            return (sub,)
        case OrElim(major, _, left, _, right):
            return (major, left, right)
        case ForallIntro(_, body):
            return (body,)
        case ForallElim(_, sub) | ExistsIntro(_, _, sub) | AbsurdElim(_, sub):
            return (sub,)
        case ExistsElim(major, _, _, minor):
            return (major, minor)
    raise TypeError(f"Not a proof: {proof!r}")


def with_premises(proof: Proof, subs: Iterable[Proof]) -> Proof:
    """Same node with its immediate subproofs replaced."""
    new = tuple(subs)
    match proof:
        case Hyp():
            return proof
        case ImpIntro(label, hypothesis, _):
            return ImpIntro(label, hypothesis, new[0])
        case ImpElim():
            return ImpElim(new[0], new[1])
        case AndIntro():
            return AndIntro(new[0], new[1])
        case AndElimL():
            return AndElimL(new[0])
        case AndElimR():
            return AndElimR(new[0])
        case OrIntroL(other, _):
            return OrIntroL(other, new[0])
        case OrIntroR(other, _):
            return OrIntroR(other, new[0])
        case OrElim(_, left_label, _, right_label, _):
            return OrElim(new[0], left_label, new[1], right_label, new[2])
        case ForallIntro(eigenvariable, _):
            return ForallIntro(eigenvariable, new[0])
        case ForallElim(witness, _):
            return ForallElim(witness, new[0])
        case ExistsIntro(witness, target, _):
            return ExistsIntro(witness, target, new[0])
        case ExistsElim(_, eigenvariable, label, _):
            return ExistsElim(new[0], eigenvariable, label, new[1])
        case AbsurdElim(target, _):
            return AbsurdElim(target, new[0])
    raise TypeError(f"Not a proof: {proof!r}")


def node_at(proof: Proof, path: Path) -> Proof:
    """Subproof at ``path``; raises IndexError for a path leaving the tree."""
    current = proof
    for index in path:
        current = premises(current)[index]
    return current


def replace_at(proof: Proof, path: Path, replacement: Proof) -> Proof:
    """Copy of ``proof`` with the subproof at ``path`` replaced."""
    if not path:
        return replacement
    subs = list(premises(proof))
    head, rest = path[0], path[1:]
    subs[head] = replace_at(subs[head], rest, replacement)
    return with_premises(proof, subs)


def walk(proof: Proof, path: Path = ()) -> Iterator[tuple[Path, Proof]]:
    """Pre-order traversal, left to right."""
    yield path, proof
    for index, sub in enumerate(premises(proof)):
        yield from walk(sub, path + (index,))


def render_path(path: Path) -> str:
    return ".".join(str(index) for index in path) if path else "root"


def proof_size(proof: Proof) -> int:
    return sum(1 for _ in walk(proof))


@dataclass(frozen=True)
class Context:
    """Ordered labeled hypotheses; labels are distinct."""

    entries: tuple[tuple[str, Formula], ...] = ()

    def __post_init__(self) -> None:
        labels = [label for label, _ in self.entries]
        if len(set(labels)) != len(labels):
            raise ValueError(f"Duplicate labels in context: {labels}")

    @classmethod
    def of(cls, *entries: tuple[str, Formula]) -> "Context":
        return cls(tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, Formula]]:
        return iter(self.entries)

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.entries)

    def formulas(self) -> tuple[Formula, ...]:
        return tuple(formula for _, formula in self.entries)

    def lookup(self, label: str) -> Formula | None:
        for name, formula in self.entries:
            if name == label:
                return formula
        return None

    def find(self, formula: Formula) -> str | None:
        """Label of the first hypothesis alpha-equal to ``formula``."""
        for label, candidate in self.entries:
            if alpha_equal(candidate, formula):
                return label
        return None

    def contains(self, formula: Formula) -> bool:
        return self.find(formula) is not None

    def extend(self, *entries: tuple[str, Formula]) -> "Context":
        return Context(self.entries + tuple(entries))

    def without(self, label: str) -> "Context":
        return Context(tuple(entry for entry in self.entries if entry[0] != label))

    def names(self) -> frozenset[str]:
        """Every variable name mentioned by the context."""
        return frozenset().union(*(all_names(formula) for formula in self.formulas()))

    def as_env(self) -> dict[str, Formula]:
        return dict(self.entries)

    def same_as(self, other: "Context") -> bool:
        """Per-label equality with formulas compared up to alpha."""
        return self.labels() == other.labels() and all(
            alpha_equal(a, b) for a, b in zip(self.formulas(), other.formulas(), strict=True)
        )

    def includes(self, other: "Context") -> bool:
        """Every hypothesis of ``other`` is present here under the same label."""
        for label, formula in other.entries:
            mine = self.lookup(label)
            if mine is None or not alpha_equal(mine, formula):
                return False
        return True


@dataclass(frozen=True)
class Sequent:
    context: Context
    conclusion: Formula

    def names(self) -> frozenset[str]:
        return self.context.names() | all_names(self.conclusion)
