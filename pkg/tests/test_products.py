from heyting_completion.algebra.products import (
    central_sheaf_stalks,
    hausdorff_characterization,
    hyper_completion_as_product,
    patchwork_criterion,
    product_suite,
    representation_over_center,
    representation_over_minimal,
    weak_boolean_product_check,
)


def test_l5_fails_patchwork_over_y(l5):
    report = weak_boolean_product_check(representation_over_minimal(l5))
    assert not report.patchwork
    assert not report.weak_boolean_product
    assert report.witness == {"a": "0", "b": "m", "N": ["↑a"]}


def test_patchwork_matches_central_supplement(named):
    for name, algebra in named.items():
        verdict = patchwork_criterion(algebra)
        assert verdict.holds, (name, verdict.witness)


def test_product_of_chains_is_a_boolean_product(named):
    report = weak_boolean_product_check(representation_over_minimal(named["C3×C3"]))
    assert report.boolean_product


def test_representation_over_center(b4, l5):
    rep = representation_over_center(b4)
    assert rep.width == 2
    assert [f.size for f in rep.factors] == [2, 2]
    assert representation_over_center(l5).width == 1


def test_stalks(l5, c3, b4):
    stalks = central_sheaf_stalks(l5)
    assert sorted(s.point for s in stalks) == ["↑a", "↑b"]
    assert [s.algebra.size for s in stalks] == [3, 3]
    assert len(central_sheaf_stalks(c3)) == 1
    assert [s.algebra.size for s in central_sheaf_stalks(b4)] == [2, 2]


def test_hausdorff_characterization(named):
    for name, algebra in named.items():
        verdict = hausdorff_characterization(algebra)
        assert verdict.holds, (name, verdict.witness)
    assert hausdorff_characterization(named["L5"]).extra["non_fsi_stalks"] == ["↑1"]


def test_completion_of_l5_is_a_product(l5):
    verdict = hyper_completion_as_product(l5)
    assert verdict.holds
    assert verdict.extra["size"] == 9


def test_product_suite(l5):
    for name, verdict in product_suite(l5):
        assert verdict.holds, (name, verdict.witness)
