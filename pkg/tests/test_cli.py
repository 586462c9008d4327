import json
import socket
from importlib import resources

import pytest
from click.testing import CliRunner

from starlang.cli import main
from tests_data_helpers import load_phone_annotations


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def phone_file(tmp_path, phone_domain_text):
    path = tmp_path / "phone.star"
    path.write_text(phone_domain_text)
    return str(path)


@pytest.fixture()
def annotations_file(tmp_path):
    path = tmp_path / "annotations.json"
    path.write_text(json.dumps(load_phone_annotations()))
    return str(path)


def test_read_prints_the_reports(runner, phone_file):
    result = runner.invoke(main, ["read", phone_file, "--acceptable"])
    assert result.exit_code == 0
    assert "+ accepted choice: ,[is_embarrassed(mary)at 20]" in result.output
    assert ">>> Finished reading the story!" in result.output


def test_read_missing_file_exits_2(runner):
    result = runner.invoke(main, ["read", "missing.star"])
    assert result.exit_code == 2
    assert "cannot read" in result.stderr


def test_read_parse_error_exits_3(runner, tmp_path):
    path = tmp_path / "broken.star"
    path.write_text("c(01) :: a causes b, c.\n")
    result = runner.invoke(main, ["read", str(path)])
    assert result.exit_code == 3
    assert "exactly one head literal" in result.stderr
    assert result.stdout == ""


def test_read_reasoning_error_exits_4(runner, tmp_path):
    path = tmp_path / "conflict.star"
    path.write_text(
        "session(s(0),[],all).\nsession(s(1),[],all).\n"
        "s(1) :: p at 2.\ns(1) :: -p at 2.\n"
    )
    result = runner.invoke(main, ["read", str(path)])
    assert result.exit_code == 4
    assert "reasoning error" in result.stderr


def test_read_filter_hides_constant_rows(runner, phone_file):
    result = runner.invoke(main, ["read", phone_file, "--filter", "changing-only"])
    assert result.exit_code == 0
    model_lines = [l for l in result.output.splitlines() if l.startswith("20:")]
    assert model_lines and "is_person" not in model_lines[-1]
    assert "is_ringing(phone1)" in model_lines[-1]


def test_read_structured_output(runner, phone_file):
    result = runner.invoke(main, ["read", phone_file, "--format", "structured"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert [s["session"] for s in payload["sessions"]] == [1, 2, 3]


def test_read_from_stdin(runner, phone_domain_text):
    result = runner.invoke(main, ["read", "-"], input=phone_domain_text)
    assert result.exit_code == 0
    assert "+ accepted choice:" in result.output


def test_nl2star_converts_the_fixture(runner, annotations_file, phone_story_text):
    result = runner.invoke(main, ["nl2star", annotations_file])
    assert result.exit_code == 0
    assert "".join(result.stdout.split()) == "".join(phone_story_text.split())


def test_nl2star_trace_adds_one_line_per_sentence(runner, annotations_file):
    result = runner.invoke(main, ["nl2star", annotations_file, "--trace"])
    assert result.exit_code == 0
    assert len(result.stderr.strip().splitlines()) == 10


def test_nl2star_rejects_empty_input(runner, tmp_path):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"blocks": []}))
    result = runner.invoke(main, ["nl2star", str(path)])
    assert result.exit_code == 3
    assert "empty" in result.stderr


def test_nl2star_rejects_malformed_documents(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    result = runner.invoke(main, ["nl2star", str(path)])
    assert result.exit_code == 3


def test_graph_round_trip_through_files(runner, tmp_path, phone_knowledge_text):
    knowledge = tmp_path / "knowledge.star"
    knowledge.write_text(phone_knowledge_text)
    exported = runner.invoke(main, ["graph", "star2graph", str(knowledge)])
    assert exported.exit_code == 0
    graph_file = tmp_path / "graph.json"
    graph_file.write_text(exported.stdout)
    back = runner.invoke(main, ["graph", "graph2star", str(graph_file)])
    assert back.exit_code == 0
    assert "c(42) >> c(41)." in back.stdout
    assert "p(11) ::" in back.stdout


def test_graph_exports_graphml(runner, tmp_path, phone_knowledge_text):
    knowledge = tmp_path / "knowledge.star"
    knowledge.write_text(phone_knowledge_text)
    result = runner.invoke(main, ["graph", "star2graph", str(knowledge), "--format", "graphml"])
    assert result.exit_code == 0
    assert "graphml.graphdrawing.org" in result.stdout


def test_graph_rejects_invalid_two_head_graph(runner, tmp_path):
    graph = {
        "nodes": [
            {"id": "r", "kind": "causal-rule", "label": "c01"},
            {"id": "a", "kind": "literal", "label": "p/0", "polarity": "positive"},
            {"id": "b", "kind": "literal", "label": "q/0", "polarity": "positive"},
        ],
        "edges": [
            {"id": "e1", "kind": "head", "source": "r", "target": "a", "arguments": []},
            {"id": "e2", "kind": "head", "source": "r", "target": "b", "arguments": []},
        ],
        "fluents": [],
    }
    path = tmp_path / "two_heads.json"
    path.write_text(json.dumps(graph))
    result = runner.invoke(main, ["graph", "graph2star", str(path)])
    assert result.exit_code == 3
    assert "head literals" in result.stderr
    assert "hint" in result.stderr


def test_serve_bind_conflict_exits_2(runner):
    blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    blocker.bind(("127.0.0.1", 0))
    blocker.listen(1)
    port = blocker.getsockname()[1]
    try:
        result = runner.invoke(main, ["serve", "--port", str(port)])
        assert result.exit_code == 2
        assert "cannot bind" in result.stderr
    finally:
        blocker.close()
