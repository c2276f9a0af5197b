import pytest

from heyting_completion.algebra.terms import (
    Binary,
    Unary,
    Var,
    bd2_equivalence_check,
    closure_experiment,
    eval_term,
    library,
    parse_equation,
    parse_term,
    satisfies,
    variety_transport,
)
from heyting_completion.errors import ParseError, UnsupportedOperation


def test_meet_binds_tighter_than_join():
    assert parse_term("x ^ y v z") == Binary("v", Binary("^", Var("x"), Var("y")), Var("z"))
    assert str(parse_term("x ^ y v z")) == "(x ^ y) v z"


def test_implication_is_right_associative():
    assert parse_term("x -> y -> z") == Binary("->", Var("x"), Binary("->", Var("y"), Var("z")))


def test_postfix_binds_tightest():
    assert parse_term("x ^ y*") == Binary("^", Var("x"), Unary("*", Var("y")))
    assert parse_term("(x v y)+") == Unary("+", Binary("v", Var("x"), Var("y")))
    assert parse_term("x++") == Unary("+", Unary("+", Var("x")))


def test_inequation_is_stored_as_a_meet():
    equation = parse_equation("x <= y")
    assert equation.lhs == Var("x")
    assert equation.rhs == Binary("^", Var("x"), Var("y"))


def test_variables_in_natural_order():
    assert parse_equation("x10 = x2 v x1").variables() == ["x1", "x2", "x10"]


@pytest.mark.parametrize("text, position", [
    ("x # y = 1", 2),
    ("x ^ ", 4),
    ("vx = 1", 0),
    ("x = 2", 4),
    ("(x v y = 1", 7),
])
def test_parse_errors_carry_a_position(text, position):
    with pytest.raises(ParseError) as caught:
        parse_equation(text) if "=" in text else parse_term(text)
    assert caught.value.position == position


def test_missing_relation():
    with pytest.raises(ParseError):
        parse_equation("x v y")


def test_library_parses():
    equations = library()
    assert "bd2" in equations
    assert equations["dual-stone"].uses_supplement()
    assert not equations["goedel-dummett"].uses_supplement()


def test_eval_term(c3, l5):
    m = c3.index("m")
    assert eval_term(parse_term("x -> y"), c3, {"x": m, "y": c3.bottom}) == c3.bottom
    assert eval_term(parse_term("x*"), c3, {"x": m}) == c3.bottom
    assert eval_term(parse_term("x+"), l5, {"x": l5.index("a")}) == l5.index("b")
    assert eval_term(parse_term("x <-> x"), l5, {"x": l5.index("a")}) == l5.top
    with pytest.raises(UnsupportedOperation):
        eval_term(parse_term("x ^ y"), c3, {"x": m})


def test_first_counterexample_is_the_witness(c3):
    verdict = satisfies(c3, parse_equation("x <= y"))
    assert not verdict.holds
    assert verdict.witness == {"x": "m", "y": "0"}


def test_bd2_fails_on_a_four_chain(c4):
    verdict = satisfies(c4, library()["bd2"])
    assert verdict.witness == {"x1": "p", "x2": "q"}
    assert verdict.extra == {"lhs": "1", "rhs": "q"}


def test_bd2_forms_agree(named):
    for name, algebra in named.items():
        bd2_equivalence_check(algebra)


def test_bd2_on_l5_and_c4(l5, c4):
    assert bd2_equivalence_check(l5).holds
    verdict = bd2_equivalence_check(c4)
    assert not verdict.holds
    assert verdict.witness["codense"] == "q"
    assert verdict.witness["dense"] == "p"


def test_closure_experiment(b4, c3):
    findings = closure_experiment(library()["excluded-middle"], [("B4", b4), ("C3", c3)])
    assert [(f.name, f.satisfied, f.extension_satisfied) for f in findings] == [
        ("B4", True, True), ("C3", False, None),
    ]


def test_bd2_is_preserved_by_the_extension(l5):
    (finding,) = closure_experiment(library()["bd2"], [("L5", l5)])
    assert finding.satisfied and finding.extension_satisfied


def test_variety_transport(l5_extension):
    verdict = variety_transport(l5_extension)
    assert verdict.holds
    assert verdict.extra["equations"] == 5
