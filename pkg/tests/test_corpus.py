import pytest

from heyting_completion.algebra.lattice import is_isomorphic
from heyting_completion.config import Settings
from heyting_completion.corpus import (
    KNOWN_COUNTS,
    CorpusEntry,
    build_corpus,
    describe,
    enumerate_posets,
    fixture_entries,
    fixtures,
    random_entries,
    random_poset,
)
from heyting_completion.errors import InputError, ResourceLimit


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_poset_counts(n):
    assert len(enumerate_posets(n)) == KNOWN_COUNTS[n]


@pytest.mark.slow
def test_poset_count_on_five_points():
    assert len(enumerate_posets(5)) == 63


def test_enumeration_bounds():
    with pytest.raises(InputError):
        enumerate_posets(0)
    with pytest.raises(ResourceLimit):
        enumerate_posets(3, Settings(max_points=2))


def test_posets_are_pairwise_non_isomorphic():
    posets = enumerate_posets(3)
    for i, first in enumerate(posets):
        for second in posets[i + 1:]:
            assert not is_isomorphic(first, second)


def test_fixture_sizes():
    sizes = {name: algebra.size for name, algebra in fixtures().items()}
    assert sizes == {"C2": 2, "C3": 3, "C4": 4, "B4": 4, "L5": 5, "2×3": 6, "C3×C3": 9, "(2×2)⊕1": 5}


def test_random_poset_is_seeded():
    assert (random_poset(5, seed=7).leq == random_poset(5, seed=7).leq).all()
    assert random_poset(4, seed=1).size == 4


def test_random_entries():
    entries = random_entries(3, 5, seed=4)
    assert [e.id for e in entries] == ["R4-0", "R4-1", "R4-2"]
    assert all(e.poset.size == 5 for e in entries)
    again = random_entries(3, 5, seed=4)
    assert all((a.poset.leq == b.poset.leq).all() for a, b in zip(entries, again))
    for entry in entries:
        assert entry.check() is None, entry.id
    with pytest.raises(InputError):
        random_entries(1, 0)


def test_corpus_ids_and_metadata():
    entries = build_corpus(3)
    assert [e.id for e in entries] == ["P1-000", "P2-000", "P2-001"] + [f"P3-{k:03d}" for k in range(5)]
    for entry in entries:
        assert entry.check() is None, entry.id


def test_describe_l5():
    assert describe(fixtures()["L5"]) == {"size": 5, "points": 2, "centrally_supplemented": False, "fsi": False}


def test_fixture_entries_recover_their_posets():
    for entry in fixture_entries():
        assert entry.check() is None, entry.id


def test_tampered_metadata_is_reported():
    entry = build_corpus(1)[0]
    tampered = CorpusEntry(entry.id, entry.poset, entry.algebra, {**entry.metadata, "fsi": not entry.metadata["fsi"]})
    assert tampered.check()["field"] == "metadata.fsi"
