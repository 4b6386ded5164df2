import pytest

from ramseykit.errors import ArityMismatch, FormulaParseError, SignatureMismatch
from ramseykit.fixtures import chain
from ramseykit.formulas import (
    App,
    Var,
    conj,
    eq,
    eval_formula,
    eval_formula_over,
    negate,
    parse_formula,
    parse_formula_list,
    rel,
    serialize_formula,
)
from ramseykit.trees import build_tree


def test_parse_serialize_roundtrip():
    text = "(and (rel lex x1 x2) (not (eq x1 (fn meet x1 x2))))"
    phi = parse_formula(text)
    assert serialize_formula(phi) == text
    assert parse_formula(serialize_formula(phi)) == phi


def test_parse_bare_literal():
    phi = parse_formula("(rel lex x1 x2)")
    assert phi.arity == 2 and len(phi.literals) == 1


def test_parse_errors_carry_position():
    with pytest.raises(FormulaParseError):
        parse_formula("(and (rel lex x1 x2)")
    with pytest.raises(FormulaParseError):
        parse_formula("(foo x1)")
    with pytest.raises(FormulaParseError):
        parse_formula("(rel lex x0)")


def test_formula_list_file():
    text = "# colors\n(rel lex x1 x2)\n\n(not (rel below x1 x2))\n"
    phis = parse_formula_list(text)
    assert len(phis) == 2


def test_eval_identity_and_negation():
    s = chain(3)
    taut = conj([eq(Var(1), Var(1))], arity=1)
    assert eval_formula(taut, s, (2,))
    lt = conj([rel("lt", Var(1), Var(2))], arity=2)
    nlt = conj([negate(lt.literals[0])], arity=2)
    for a in ((0, 1), (1, 0), (2, 2)):
        assert eval_formula(lt, s, a) != eval_formula(nlt, s, a)


def test_eval_terms_through_function_tables():
    t = build_tree(2, 1, "L0")
    s = t.structure
    phi = parse_formula("(eq (fn meet x1 x2) x3)")
    leaves = (t.id_of((0,)), t.id_of((1,)), t.id_of(()))
    assert eval_formula(phi, s, leaves)
    assert not eval_formula(phi, s, (leaves[0], leaves[1], leaves[0]))


def test_eval_arity_mismatch():
    s = chain(3)
    phi = parse_formula("(rel lt x1 x2)")
    with pytest.raises(ArityMismatch):
        eval_formula(phi, s, (0,))


def test_eval_signature_mismatch():
    s = chain(3)
    with pytest.raises(SignatureMismatch):
        eval_formula(parse_formula("(rel nope x1)"), s, (0,))
    with pytest.raises(SignatureMismatch):
        eval_formula(parse_formula("(rel lt x1)"), s, (0,))
    with pytest.raises(SignatureMismatch):
        eval_formula(parse_formula("(eq x1 (fn meet x1 x1))"), s, (0,))


def test_nested_terms():
    t = build_tree(2, 2, "L0")
    s = t.structure
    phi = parse_formula("(eq (fn meet (fn meet x1 x2) x3) (fn meet x1 (fn meet x2 x3)))")
    import itertools
    for a in itertools.product(range(s.size), repeat=3):
        assert eval_formula(phi, s, a)  # meets associate


def test_batch_matches_single():
    import itertools
    t = build_tree(2, 1, "L0")
    s = t.structure
    phi = parse_formula("(and (rel below x1 x2) (not (eq x1 x2)))")
    tuples = list(itertools.product(range(3), repeat=2))
    batch = eval_formula_over(phi, s, tuples)
    assert batch == [eval_formula(phi, s, a) for a in tuples]


def test_explicit_arity_widens_variable_set():
    phi = parse_formula("(rel lt x1 x2)", arity=3)
    assert phi.arity == 3
    assert eval_formula(phi, chain(3), (0, 1, 2))


# -- round-trip property over random formula trees ------------------------------

from hypothesis import given, settings, strategies as st

from ramseykit.formulas import App, Const, EqAtom, Literal, RelAtom


def terms(depth):
    base = st.one_of(
        st.integers(1, 3).map(Var),
        st.sampled_from(["bottom", "top"]).map(Const),
    )
    if depth == 0:
        return base
    return st.one_of(
        base,
        st.tuples(terms(depth - 1), terms(depth - 1)).map(
            lambda ab: App("meet", ab)),
    )


literals = st.one_of(
    st.tuples(st.booleans(), st.lists(terms(2), min_size=1, max_size=3)).map(
        lambda pt: Literal(pt[0], RelAtom("below", tuple(pt[1])))),
    st.tuples(st.booleans(), terms(2), terms(2)).map(
        lambda pab: Literal(pab[0], EqAtom(pab[1], pab[2]))),
)


@settings(max_examples=80, deadline=None)
@given(st.lists(literals, max_size=5))
def test_formula_text_roundtrip_property(lits):
    phi = conj(lits, arity=3)
    assert parse_formula(serialize_formula(phi), arity=3) == phi
