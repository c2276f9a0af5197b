import pytest

from heyting_completion.algebra.extension import build_extension
from heyting_completion.algebra.frames import (
    Polarity,
    check_closure_operator,
    check_frame_axioms,
    closed_sets,
    delta_iso,
    frame_algebra,
    galois,
    hyper_completion,
    hyper_frame,
    macneille_frame,
    relation_matrix,
    theorem_j_suite,
    truncated_collapse_check,
)
from heyting_completion.algebra.lattice import is_isomorphic
from heyting_completion.algebra.macneille import dm_completion
from heyting_completion.app.suite import corrupted_frame
from heyting_completion.corpus import build_corpus
from heyting_completion.errors import FrameAxiomViolation, InputError
from heyting_completion.utils import bitsets


def test_hyper_frame_of_l5(l5):
    frame = hyper_frame(l5)
    assert frame.polarity.w0_size == 25
    assert frame.polarity.w0_labels[frame.unit] == "(0,1)"
    assert check_frame_axioms(frame).holds


def test_relation_on_pairs(l5):
    frame = hyper_frame(l5)
    labels = frame.polarity.w0_labels
    N = frame.polarity.relation
    # s∨t∨(a→b) = 1
    assert N[labels.index("(a,0)"), labels.index("(b,0)")]
    assert not N[labels.index("(0,a)"), labels.index("(0,b)")]
    assert N[labels.index("(0,0)"), labels.index("(0,b)")]
    assert relation_matrix(frame.polarity)[0][0] == 1


def test_completion_of_l5_is_its_extension(l5, l5_extension, named):
    completion = frame_algebra(hyper_frame(l5))
    assert completion.algebra.size == 9
    assert is_isomorphic(completion.algebra, named["C3×C3"])
    delta = delta_iso(l5_extension, completion)
    assert sorted(delta.mapping) == list(range(9))


def test_cuts_of_the_extension_agree(l5_extension):
    S = l5_extension.algebra
    assert is_isomorphic(dm_completion(S).algebra, S)


def test_completion_fixes_centrally_supplemented_algebras(named):
    for name in ("C3", "C4", "B4", "2×3", "(2×2)⊕1"):
        assert is_isomorphic(hyper_completion(named[name]), named[name]), name


def test_macneille_frame_closed_sets(c3):
    frame = macneille_frame(c3)
    assert is_isomorphic(frame_algebra(frame).algebra, c3)


def test_closure_operator(l5, c3):
    assert check_closure_operator(hyper_frame(l5).polarity).holds
    assert check_closure_operator(Polarity(c3.leq)).holds


def test_closed_sets_of_an_empty_relation():
    lattice = closed_sets(Polarity([[False, False], [False, False]]))
    assert lattice.algebra.size == 2


def test_galois_pair():
    polarity = Polarity([[True, False], [True, True]])
    upper, closed = galois(polarity, bitsets.from_indices([0], 2))
    assert bitsets.member_list(upper) == [0]
    assert bitsets.member_list(closed) == [0, 1]


def test_truncated_words_collapse_onto_w(c3):
    verdict = truncated_collapse_check(c3, 2)
    assert verdict.holds, verdict.witness
    assert verdict.extra["words"] == 1 + 9 + 45


def test_collapse_needs_nonempty_words(c3):
    with pytest.raises(InputError):
        truncated_collapse_check(c3, 0)


def test_completion_properties_of_l5(l5):
    results = theorem_j_suite(l5)
    assert len(results) == 12
    for item, verdict in results:
        assert verdict.holds, (item, verdict.witness)


@pytest.mark.parametrize("name", ["C2", "C3", "B4", "(2×2)⊕1"])
def test_completion_properties_of_small_fixtures(named, name):
    for item, verdict in theorem_j_suite(named[name]):
        assert verdict.holds, (name, item, verdict.witness)


def test_corrupted_frame_is_rejected():
    frame = corrupted_frame()
    verdict = check_frame_axioms(frame)
    assert not verdict.holds
    assert verdict.extra["axiom"] == 1
    with pytest.raises(FrameAxiomViolation) as caught:
        frame_algebra(frame)
    assert caught.value.axiom == 1


@pytest.mark.slow
def test_delta_and_cuts_agree_on_posets_up_to_five_points():
    for entry in build_corpus(5):
        extension = build_extension(entry.algebra)
        completion = frame_algebra(hyper_frame(entry.algebra))
        delta = delta_iso(extension, completion)
        assert sorted(delta.mapping) == list(range(completion.algebra.size)), entry.id
        assert is_isomorphic(dm_completion(extension.algebra).algebra, completion.algebra), entry.id
