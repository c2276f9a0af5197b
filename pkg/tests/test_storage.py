import json

import pytest

from heyting_completion.corpus import build_corpus
from heyting_completion.errors import FormatError
from heyting_completion.utils.storage import CorpusStorage


def test_save_and_load(tmp_path):
    entries = build_corpus(3)
    storage = CorpusStorage(tmp_path / "corpus")
    storage.save(entries)
    assert storage.index_file.exists()
    loaded = storage.load()
    assert [e.id for e in loaded] == [e.id for e in entries]
    for before, after in zip(entries, loaded):
        assert (before.poset.leq == after.poset.leq).all()
        assert before.metadata == after.metadata


def test_manifest_rows(tmp_path):
    storage = CorpusStorage(tmp_path)
    storage.save(build_corpus(2))
    rows = storage.load_index()
    assert [row["id"] for row in rows] == ["P1-000", "P2-000", "P2-001"]
    assert rows[0]["file"] == "P1-000.json"
    assert rows[0]["size"] == 2


def test_missing_index(tmp_path):
    with pytest.raises(FormatError):
        CorpusStorage(tmp_path).load()


def test_cyclic_entry_is_rejected(tmp_path):
    storage = CorpusStorage(tmp_path)
    storage.save(build_corpus(1))
    path = tmp_path / "P1-000.json"
    document = json.loads(path.read_text(encoding="utf-8"))
    document["points"] = 2
    document["labels"] = ["p", "q"]
    document["leq"] = [[0, 1], [1, 0]]
    path.write_text(json.dumps(document), encoding="utf-8")
    with pytest.raises(FormatError) as caught:
        storage.load()
    assert caught.value.field == "leq"


def test_stale_metadata_is_rejected(tmp_path):
    storage = CorpusStorage(tmp_path)
    storage.save(build_corpus(1))
    path = tmp_path / "P1-000.json"
    document = json.loads(path.read_text(encoding="utf-8"))
    document["metadata"]["size"] = 3
    path.write_text(json.dumps(document), encoding="utf-8")
    with pytest.raises(FormatError) as caught:
        storage.load_entry("P1-000")
    assert caught.value.field == "metadata.size"


def test_corpus_up_to_four_points(tmp_path):
    storage = CorpusStorage(tmp_path)
    storage.save(build_corpus(4))
    assert len(storage.load()) == 24


def test_entries_are_stored_as_cover_pairs(tmp_path):
    storage = CorpusStorage(tmp_path)
    entries = [e for e in build_corpus(3) if e.poset.size == 3]
    storage.save(entries)
    for entry in entries:
        document = json.loads((tmp_path / f"{entry.id}.json").read_text(encoding="utf-8"))
        assert document["kind"] == "poset"
        assert document["points"] == 3
        assert [tuple(pair) for pair in document["leq"]] == entry.poset.covers
