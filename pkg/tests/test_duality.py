from heyting_completion.algebra.duality import (
    Congruence,
    central_congruence,
    coregular_minspace_duality,
    filter_congruence,
    is_prime_filter,
    min_space,
    prime_filters,
    quotient_by_filter,
    subdirect_embed,
)
from heyting_completion.algebra.lattice import is_isomorphic


def test_minimal_prime_filters_of_l5(l5):
    space = min_space(l5)
    assert space.labels() == ["↑a", "↑b"]
    assert len(prime_filters(l5)) == 3


def test_minimal_prime_filter_of_a_chain_is_the_top(c3, c4):
    assert min_space(c3).labels() == ["↑1"]
    assert min_space(c4).size == 1


def test_prime_filter_predicate(l5):
    assert is_prime_filter(l5, l5.up(l5.index("a")))
    assert not is_prime_filter(l5, l5.up(l5.bottom))
    # ↑1 is a filter but 1 = a∨b with neither a nor b in it
    assert not is_prime_filter(l5, l5.up(l5.top))


def test_quotient_of_l5_by_a(l5):
    y = min_space(l5).filters[0]
    congruence = filter_congruence(l5, y)
    blocks = [l5.names(block) for block in congruence.blocks]
    assert blocks == [["0"], ["m", "b"], ["a", "1"]]
    quotient = quotient_by_filter(l5, y)
    assert quotient.algebra.labels == ("0", "m", "1")
    assert quotient.algebra.is_fsi()
    assert quotient.check_homomorphism().holds


def test_filter_congruences_respect_heyting_operations_only(l5):
    # θ_y keeps ∧ ∨ →, but a⁺ = b and 1⁺ = 0 split the block of a and 1
    witnesses = []
    for y in min_space(l5).filters:
        congruence = filter_congruence(l5, y)
        assert congruence.is_compatible().holds
        verdict = congruence.is_compatible(supplement=True)
        assert not verdict.holds
        witnesses.append(verdict.witness)
    assert witnesses == [{"op": "supplement", "block": ["a", "1"]}, {"op": "supplement", "block": ["b", "1"]}]


def test_incompatible_partition(c3):
    # {0, m} | {1} respects ∧ and ∨ but not →
    congruence = Congruence.from_keys(c3, [0, 0, 1])
    verdict = congruence.is_compatible()
    assert not verdict.holds
    assert verdict.witness["op"] == "implies"


def test_subdirect_embedding_of_l5(l5, c3):
    embedding = subdirect_embed(l5)
    assert len(embedding.factors) == 2
    assert all(is_isomorphic(factor, c3) for factor in embedding.factors)
    assert len(set(embedding.images)) == l5.size


def test_boolean_algebra_splits_into_two_element_factors(b4):
    embedding = subdirect_embed(b4)
    assert [f.size for f in embedding.factors] == [2, 2]


def test_central_congruence(b4):
    congruence = central_congruence(b4, b4.index("p"))
    assert len(congruence.blocks) == 2
    assert not congruence.is_identity()
    assert not congruence.is_total()


def test_coregular_elements_mirror_subsets_of_y(named):
    for name, algebra in named.items():
        assert coregular_minspace_duality(algebra).holds, name
