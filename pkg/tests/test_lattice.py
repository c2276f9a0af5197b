import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from heyting_completion.algebra.lattice import (
    DISTRIBUTIVE_LATTICE,
    HEYTING,
    Poset,
    boolean,
    build_from_order,
    center,
    chain,
    check_de_morgan_half,
    check_dual_delta_star,
    check_invariants,
    check_meet_dense_supplement,
    check_residuation,
    classify_elements,
    complement,
    discriminator,
    downset_algebra,
    glivenko_dual,
    is_centrally_supplemented,
    is_isomorphic,
    isomorphism,
    ordinal_sum_top,
    product,
    supplement,
)
from heyting_completion.corpus import random_poset
from heyting_completion.errors import (
    InputError,
    NotALattice,
    NotAPartialOrder,
    NotCentral,
    NotDistributive,
    UnsupportedOperation,
)


def _pentagon():
    leq = np.eye(5, dtype=bool)
    for i, j in [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 4), (2, 4), (3, 4)]:
        leq[i, j] = True
    return leq


def test_fixtures_pass_every_table_check(named):
    for name, algebra in named.items():
        verdict = check_invariants(algebra)
        assert verdict.holds, (name, verdict.witness)


def test_bounds_are_first_and_last(named):
    for algebra in named.values():
        assert algebra.bottom == 0
        assert algebra.top == algebra.size - 1


def test_chain_labels():
    assert chain(3).labels == ("0", "m", "1")
    assert chain(4).labels == ("0", "p", "q", "1")
    assert boolean(2).labels == ("0", "p", "q", "1")


def test_l5_supplements(l5):
    sup = {l5.labels[a]: l5.labels[l5.sup(a)] for a in l5.elements}
    assert sup == {"0": "1", "m": "1", "a": "b", "b": "a", "1": "0"}
    for a in l5.elements:
        assert supplement(l5, a) == l5.supplement[a]


def test_l5_fails_dual_stone_at_a_b(l5):
    verdict = is_centrally_supplemented(l5)
    assert not verdict.holds
    assert verdict.witness == {"x": "a", "y": "b", "lhs": "0", "rhs": "m"}


def test_products_of_chains_are_centrally_supplemented(named):
    assert is_centrally_supplemented(named["C3×C3"]).holds
    assert is_centrally_supplemented(named["2×3"]).holds
    assert is_centrally_supplemented(named["C3"]).holds


def test_center(l5, b4):
    assert l5.names(center(l5)) == ["0", "1"]
    assert center(b4).count() == b4.size
    with pytest.raises(NotCentral):
        complement(l5, l5.index("a"))
    assert complement(b4, b4.index("p")) == b4.index("q")


def test_element_classes_of_l5(l5):
    classes = classify_elements(l5)
    assert l5.names(classes.codense) == ["0", "m"]
    assert l5.names(classes.dense) == ["m", "a", "b", "1"]
    assert l5.names(classes.coregular) == ["0", "a", "b", "1"]
    assert l5.names(classes.regular) == ["0", "1"]


def test_pseudocomplement_in_c3(c3):
    assert c3.neg(c3.index("m")) == c3.bottom
    assert c3.neg(c3.bottom) == c3.top


def test_ordinal_sum_is_fsi(named):
    algebra = named["(2×2)⊕1"]
    assert algebra.size == 5
    assert algebra.is_fsi()
    assert "e" in algebra.labels
    assert not named["B4"].is_fsi()


def test_pentagon_is_rejected():
    with pytest.raises(NotDistributive) as caught:
        build_from_order(_pentagon(), HEYTING, ["0", "a", "b", "c", "1"], "N5")
    assert set(caught.value.witness) == {"x", "y", "z"}


def test_pentagon_builds_as_plain_lattice():
    algebra = build_from_order(_pentagon(), DISTRIBUTIVE_LATTICE, ["0", "a", "b", "c", "1"], "N5")
    assert not algebra.distributive
    assert not algebra.is_heyting
    with pytest.raises(UnsupportedOperation):
        for a in algebra.elements:
            for b in algebra.elements:
                algebra.imp(a, b)


def test_malformed_orders_are_rejected():
    with pytest.raises(NotAPartialOrder):
        Poset(np.array([[1, 1], [1, 1]], dtype=bool))
    with pytest.raises(NotALattice):
        build_from_order(np.eye(2, dtype=bool))
    with pytest.raises(NotAPartialOrder):
        Poset(np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]], dtype=bool))


def test_unknown_label(l5):
    with pytest.raises(InputError):
        l5.index("z")


def test_corrupted_implication_breaks_residuation(c3):
    implies = np.array(c3.implies)
    implies[c3.index("m"), c3.bottom] = c3.top
    verdict = check_residuation(c3.with_tables(implies=implies))
    assert not verdict.holds
    assert verdict.witness["x"] == "m"


def test_downset_algebra_of_two_point_antichain_is_b4(b4):
    algebra = downset_algebra(Poset.antichain(2))
    assert is_isomorphic(algebra, b4)
    assert algebra.labels[0] == "0" and algebra.labels[-1] == "1"


def test_isomorphism_returns_mapping(named):
    first = named["2×3"]
    second = product([chain(3), chain(2)])
    mapping = isomorphism(first, second)
    assert mapping is not None
    for a in first.elements:
        for b in first.elements:
            assert first.leq[a, b] == second.leq[mapping[a], mapping[b]]
    assert isomorphism(first, named["C3×C3"]) is None


def test_supplement_identities(named):
    for algebra in named.values():
        assert check_de_morgan_half(algebra).holds
        assert check_dual_delta_star(algebra).holds
        assert check_meet_dense_supplement(algebra).holds


def test_glivenko_dual_is_boolean(l5):
    dual = glivenko_dual(l5)
    assert dual.algebra.size == 4
    assert dual.quotient[l5.index("m")] == dual.algebra.bottom


def test_discriminator_on_fsi_algebras(named):
    assert discriminator(named["C3"]).extra["applicable"]
    assert discriminator(named["C4"]).holds
    assert not discriminator(named["B4"]).extra["applicable"]


def test_ordinal_sum_keeps_old_order(b4):
    algebra = ordinal_sum_top(b4)
    assert algebra.leq[algebra.index("p"), algebra.index("e")]
    assert not algebra.leq[algebra.index("1"), algebra.index("e")]


@hsettings(max_examples=30, deadline=None)
@given(n=st.integers(min_value=1, max_value=4), seed=st.integers(min_value=0, max_value=10_000))
def test_downset_algebras_are_heyting(n, seed):
    algebra = downset_algebra(random_poset(n, seed))
    assert check_invariants(algebra).holds
    assert check_de_morgan_half(algebra).holds
    assert is_isomorphic(algebra.join_irreducible_poset(), random_poset(n, seed))
