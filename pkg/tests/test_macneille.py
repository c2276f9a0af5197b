import numpy as np

from heyting_completion.algebra.lattice import Poset, is_isomorphic
from heyting_completion.algebra.macneille import dm_completion, next_closure_cuts


def test_cuts_of_a_v():
    # p, q < r
    poset = Poset(np.array([[1, 0, 1], [0, 1, 1], [0, 0, 1]], dtype=bool), ("p", "q", "r"))
    completion = dm_completion(poset)
    assert completion.algebra.size == 4
    assert set(completion.algebra.labels) == {"⟨⟩", "p", "q", "r"}
    assert completion.algebra.labels[completion.embedding[2]] == "r"


def test_cuts_of_an_antichain():
    completion = dm_completion(Poset.antichain(2))
    assert set(completion.algebra.labels) == {"⟨⟩", "p", "q", "⟨p,q⟩"}
    A = completion.algebra
    assert A.labels[A.bottom] == "⟨⟩"
    assert A.labels[A.top] == "⟨p,q⟩"


def test_lattice_is_its_own_completion(named):
    for name, algebra in named.items():
        completion = dm_completion(algebra)
        assert is_isomorphic(completion.algebra, algebra), name
        assert sorted(completion.embedding) == list(range(algebra.size))


def test_next_closure_lists_every_cut_once():
    leq = np.eye(3, dtype=bool)
    cuts = next_closure_cuts(leq)
    # ∅, three singletons and the whole set
    assert len(cuts) == 5
    assert len({cut.tobytes() for cut in cuts}) == 5
    assert not cuts[0].any()
    assert cuts[-1].all()
