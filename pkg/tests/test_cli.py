import json

import pytest

from app.cli import main
from app.schemas.documents import EmbeddingDocument


@pytest.mark.parametrize("name", ["lemma1-c3c3", "lemma2-c5c5"])
def test_verify_fixture(capsys, name):
    assert main(["verify", name]) == 0
    out = capsys.readouterr().out
    assert "valid: True" in out
    assert "pages (k): 5" in out
    assert "classification: nearly dispersable witness" in out


def test_verify_invalid_file(tmp_path, capsys, c3c3):
    document = EmbeddingDocument.from_embedding(c3c3.with_coloring(c3c3.coloring.recolor({(1, 2): 3})))
    target = tmp_path / "broken.json"
    target.write_text(document.model_dump_json())
    assert main(["verify", str(target)]) == 1
    assert "adjacent-clash on page 3" in capsys.readouterr().out


def test_verify_missing_file(capsys):
    assert main(["verify", "does-not-exist.json"]) == 2
    assert "UNREADABLE_FILE" in capsys.readouterr().err


def test_gadget_is_not_an_embedding(capsys):
    assert main(["verify", "figure3-gadget"]) == 2
    assert "NOT_AN_EMBEDDING" in capsys.readouterr().err


def test_extend_writes_embedding_and_sidecar(tmp_path, capsys):
    out = tmp_path / "c3c5.json"
    assert main(["extend", "lemma1-c3c3", "--r", "2", "--out", str(out)]) == 0
    assert "seed: 1" in capsys.readouterr().out
    extended = EmbeddingDocument.model_validate_json(out.read_text()).to_embedding()
    assert extended.graph.n == 15
    sidecar = json.loads((tmp_path / "c3c5.sidecar.json").read_text())
    assert sidecar["r"] == 2


def test_extend_with_odd_r(capsys):
    assert main(["extend", "lemma1-c3c3", "--r", "3"]) == 1
    assert "R_NOT_EVEN_POSITIVE" in capsys.readouterr().err


def test_certify_family(capsys):
    assert main(["certify-family", "3", "7"]) == 0
    out = capsys.readouterr().out
    assert "certificate: C_3 x C_7" in out
    assert "valid: True" in out
    assert main(["certify-family", "3", "4"]) == 1


def test_search_statuses_map_to_exit_codes(capsys):
    assert main(["search", "--graph", "cycle4", "--k", "2"]) == 0
    assert "status: found" in capsys.readouterr().out
    assert main(["search", "--graph", "complete4", "--k", "3"]) == 3
    assert "status: exhausted" in capsys.readouterr().out
    assert main(["search", "--graph", "cycle6", "--k", "2", "--node-budget", "3"]) == 4
    assert "checkpoint: " in capsys.readouterr().out


def test_search_resume(tmp_path, capsys):
    checkpoint = tmp_path / "c6.json"
    assert main(["search", "--graph", "cycle6", "--k", "2", "--node-budget", "3",
                 "--checkpoint", str(checkpoint)]) == 4
    assert checkpoint.exists()
    assert main(["search", "--graph", "cycle6", "--k", "2", "--resume", str(checkpoint)]) == 0
    assert "status: found" in capsys.readouterr().out


def test_search_fixed_published_layout_writes_witness(tmp_path):
    out = tmp_path / "witness.json"
    assert main(["search", "--graph", "lemma1-c3c3", "--layout", "lemma1", "--k", "5", "--out", str(out)]) == 0
    witness = EmbeddingDocument.model_validate_json(out.read_text()).to_embedding()
    assert witness.layout.order == (1, 2, 3, 6, 5, 4, 7, 8, 9)


def test_search_extensible(capsys):
    assert main(["search", "--extensible", "--h", "cycle3", "--s", "3", "--k", "5"]) == 0
    assert "seeds: [1" in capsys.readouterr().out


def test_search_needs_graph(capsys):
    assert main(["search", "--k", "2"]) == 2


def test_bad_layout(capsys):
    assert main(["search", "--graph", "cycle4", "--layout", "1,2,x", "--k", "2"]) == 2
    assert "BAD_LAYOUT" in capsys.readouterr().err


def test_mbt(capsys):
    assert main(["mbt", "cycle5"]) == 0
    assert capsys.readouterr().out.strip() == "3"
    assert main(["mbt", "cycle11"]) == 2


def test_export_cnf_to_stdout(capsys):
    assert main(["export-cnf", "cycle3", "--k", "3"]) == 0
    assert "p cnf 9 24" in capsys.readouterr().out


def test_export_cnf_with_lemma_layout_alias(capsys):
    assert main(["export-cnf", "lemma2-c5c5", "--layout", "lemma2", "--k", "5"]) == 0
    assert "p cnf 250 " in capsys.readouterr().out


@pytest.mark.parametrize("name,marker", [("drawing.svg", "<svg"), ("drawing.dot", "graph G {")])
def test_draw(tmp_path, name, marker):
    out = tmp_path / name
    assert main(["draw", "lemma2-c5c5", str(out)]) == 0
    assert out.read_text().startswith(marker)


def test_fixtures(capsys):
    assert main(["fixtures", "list"]) == 0
    listing = capsys.readouterr().out
    assert "figure4-c3c5-derived:" in listing
    assert main(["fixtures", "dump", "figure3-gadget"]) == 0
    dumped = json.loads(capsys.readouterr().out)
    assert dumped["gadget"]["t"] == 2
    assert main(["fixtures", "dump"]) == 2


def test_missing_command():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
