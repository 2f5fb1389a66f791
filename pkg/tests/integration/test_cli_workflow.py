"""Command-line runs over documents built from the instance corpus."""

from pathlib import Path

import pytest

from src.cli.main import EXIT_OK, main
from src.cli.parser import parse_document
from src.cli.printer import render_document
from src.services.kernel import check
from tests.corpus import INSTANCES, Instance, instance_document

SPECIAL = [item for item in INSTANCES if not item.general]


def _run(argv: list[str], capsys: pytest.CaptureFixture[str]) -> str:
    assert main(argv) == EXIT_OK
    return capsys.readouterr().out


@pytest.fixture
def document_file(tmp_path: Path, request: pytest.FixtureRequest) -> Path:
    """The instance of the current test written out as a document."""
    item: Instance = request.param
    path = tmp_path / f"{item.name}.dsk"
    path.write_text(render_document(instance_document(item)), encoding="utf-8")
    return path


class TestCorpusWorkflow:
    """Check, normalize and deskolemize every corpus document."""

    @pytest.mark.parametrize("document_file", SPECIAL, ids=lambda item: item.name, indirect=True)
    def test_workflow(self, document_file: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that every command succeeds and repeats byte for byte."""
        path = str(document_file)
        deskolemize_args = [
            "deskolemize",
            path,
            "--pia",
            "pia",
            "--proof",
            "main",
            "--sig",
            "sig",
            "--seq",
            "goal",
            "--pia-seq",
            "axiom",
        ]

        assert _run(["check", path, "main", "goal"], capsys) == ""
        assert _run(["check", path, "pia", "axiom"], capsys) == ""
        normalized = _run(["normalize", path, "main", "--seq", "goal"], capsys)
        assert normalized == _run(["normalize", path, "main", "--seq", "goal"], capsys)
        first = _run(deskolemize_args, capsys)
        assert first == _run(deskolemize_args, capsys)

        result = parse_document(first)
        check(result.proof("main-deskolemized"), result.sequent("main-deskolemized"))
