import json

import pytest

from heyting_completion.algebra.lattice import Poset, downset_algebra, is_isomorphic
from heyting_completion.errors import FormatError, NotDistributive
from heyting_completion.utils.formats import (
    lattice_document,
    load_algebra,
    parse_document,
    read_section_dump,
    relation_dump,
    save_document,
    section_dump,
    to_dot,
)


L5_DOCUMENT = {"kind": "lattice", "size": 5, "leq": [[0, 1], [1, 2], [1, 3], [2, 4], [3, 4]]}


def test_fixture_files_match_the_built_fixtures(fixture_dir, named):
    files = {"C2": "C2", "C3": "C3", "C4": "C4", "B4": "B4", "L5": "L5",
             "2x3": "2×3", "C3xC3": "C3×C3", "B4+1": "(2×2)⊕1"}
    for stem, name in files.items():
        assert is_isomorphic(load_algebra(fixture_dir / f"{stem}.json"), named[name]), stem


def test_poset_file_yields_its_downset_algebra(fixture_dir):
    algebra = load_algebra(fixture_dir / "V.json")
    # downsets of p, q < r: ∅, p, q, pq, pqr
    assert algebra.size == 5
    assert algebra.is_fsi()


def test_pair_list_documents(l5, c3):
    assert is_isomorphic(parse_document(L5_DOCUMENT), l5)
    assert is_isomorphic(parse_document({"kind": "lattice", "size": 3, "leq": [[0, 1], [1, 2]]}), c3)
    poset = parse_document({"kind": "poset", "points": 3, "leq": [[0, 1], [0, 2]]})
    assert isinstance(poset, Poset)
    assert poset.leq.sum() == 5
    assert is_isomorphic(downset_algebra(poset), l5)


def test_pairs_are_closed_transitively(c4):
    # only the covers of 0 < p < q < 1 are listed
    algebra = parse_document({"kind": "lattice", "size": 4, "leq": [[0, 1], [1, 2], [2, 3]]})
    assert is_isomorphic(algebra, c4)
    assert algebra.leq[0, 3]


def test_matrix_documents_are_still_read(c3):
    leq = [[1, 1, 1], [0, 1, 1], [0, 0, 1]]
    assert is_isomorphic(parse_document({"kind": "lattice", "leq": leq}), c3)


def test_lattice_document_round_trip(tmp_path, l5):
    document = lattice_document(l5)
    assert document["size"] == 5
    assert document["leq"] == L5_DOCUMENT["leq"]
    path = tmp_path / "out" / "l5.json"
    save_document(document, path)
    assert is_isomorphic(load_algebra(path), l5)
    assert json.loads(path.read_text(encoding="utf-8"))["kind"] == "lattice"


@pytest.mark.parametrize("document, field", [
    ([], ""),
    ({"kind": "lattice"}, "leq"),
    ({"kind": "lattice", "size": 3}, "leq"),
    ({"kind": "graph", "size": 1, "leq": []}, "kind"),
    ({"kind": "lattice", "size": 0, "leq": []}, "size"),
    ({"kind": "poset", "points": "3", "leq": []}, "points"),
    ({"kind": "lattice", "size": 2, "leq": [[0, 1, 1]]}, "leq"),
    ({"kind": "lattice", "size": 2, "leq": [[0, 2]]}, "leq"),
    ({"kind": "lattice", "size": 2, "leq": []}, "leq"),
    ({"kind": "poset", "points": 2, "leq": [[0, 1], [1, 0]]}, "leq"),
    ({"kind": "poset", "points": 2, "labels": ["p", "p"], "leq": []}, "labels"),
    ({"kind": "poset", "points": 2, "labels": ["p"], "leq": []}, "labels"),
    ({"kind": "lattice", "leq": [[2]]}, "leq"),
    ({"kind": "lattice", "leq": [[1, 0]]}, "leq"),
])
def test_malformed_documents(document, field):
    with pytest.raises(FormatError) as caught:
        parse_document(document)
    assert caught.value.field == field


def test_non_distributive_lattice_is_not_a_format_error():
    m3 = {"kind": "lattice", "size": 5, "leq": [[0, 1], [0, 2], [0, 3], [1, 4], [2, 4], [3, 4]]}
    with pytest.raises(NotDistributive):
        parse_document(m3)


def test_unreadable_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(FormatError):
        load_algebra(path)
    with pytest.raises(FormatError):
        load_algebra(tmp_path / "missing.json")


def test_dot_output(c3):
    dot = to_dot(c3)
    assert dot.startswith('digraph "C3"')
    assert "rankdir=BT" in dot
    assert dot.count("->") == 2


def test_section_dump(l5_extension):
    dump = section_dump(l5_extension)
    assert dump["points"] == ["↑a", "↑b"]
    assert dump["factors"] == [["0", "m", "1"], ["0", "m", "1"]]
    assert len(dump["sections"]) == 9
    assert dump["sections"][dump["elements"].index("(1,m)")] == [2, 1]


def test_section_dump_round_trip(tmp_path, l5_extension):
    path = tmp_path / "l5.sections.json"
    save_document(section_dump(l5_extension), path)
    sections = read_section_dump(json.loads(path.read_text(encoding="utf-8")), str(path))
    assert [l5_extension.element(s) for s in sections] == list(l5_extension.algebra.elements)


def test_section_dump_with_bad_coordinates(l5_extension):
    dump = section_dump(l5_extension)
    dump["sections"][0] = [0, 3]
    with pytest.raises(FormatError) as caught:
        read_section_dump(dump)
    assert caught.value.field == "sections"


def test_relation_dump():
    dump = relation_dump(["x", "y"], [[True, False], [True, True]])
    assert dump == {"points": ["x", "y"], "rows": [[1, 0], [1, 1]]}
