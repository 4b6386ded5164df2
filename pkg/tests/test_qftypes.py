import itertools
import random

import pytest

from conftest import naive_isomorphic

from ramseykit.closure import closure_elements, copy_on
from ramseykit.errors import OutOfUniverse
from ramseykit.fill import with_level_bound
from ramseykit.fixtures import chain, random_tree_structure
from ramseykit.formulas import eval_formula, eval_formula_over, serialize_formula
from ramseykit.iso import age_up_to
from ramseykit.qftypes import delta_type, isolating_formula, qf_type, realized_types
from ramseykit.trees import build_tree


def test_level_shift_pairs_have_equal_l0_type():
    t1, t2 = build_tree(2, 1, "L0"), build_tree(2, 2, "L0")
    a1 = (t1.id_of((0,)), t1.id_of((1,)))
    a2 = (t2.id_of((0, 0)), t2.id_of((0, 1)))
    assert qf_type(t1.structure, a1) == qf_type(t2.structure, a2)


def test_same_pairs_differ_under_levels():
    s1 = with_level_bound(build_tree(2, 1, "Ls").structure, 2)
    s2 = build_tree(2, 2, "Ls").structure
    t1, t2 = build_tree(2, 1, "Ls"), build_tree(2, 2, "Ls")
    a1 = (t1.id_of((0,)), t1.id_of((1,)))
    a2 = (t2.id_of((0, 0)), t2.id_of((0, 1)))
    assert qf_type(s1, a1) != qf_type(s2, a2)


def test_empty_tuple_type():
    s = build_tree(2, 1, "L0").structure
    q = qf_type(s, ())
    assert q.positions == () and q.closure_size == 0


def test_out_of_universe():
    with pytest.raises(OutOfUniverse):
        qf_type(chain(3), (5,))


def test_type_equality_is_generated_substructure_iso():
    # equality of types <=> the position-respecting map extends to an
    # isomorphism of the generated substructures (checked naively)
    rng = random.Random(13)
    pool = []
    for _ in range(12):
        t = random_tree_structure(rng, "L0", max_nodes=6)
        s = t.structure
        n = rng.randint(1, 3)
        a = tuple(rng.randrange(s.size) for _ in range(n))
        pool.append((s, a, qf_type(s, a)))
    for (s1, a1, q1), (s2, a2, q2) in itertools.combinations(pool, 2):
        if len(a1) != len(a2):
            continue
        c1 = copy_on(s1, closure_elements(s1, a1))
        c2 = copy_on(s2, closure_elements(s2, a2))
        same = False
        if c1.pattern.size == c2.pattern.size:
            # the unique order bijection must respect the tuples
            pos1 = {e: i for i, e in enumerate(c1.elements)}
            pos2 = {e: i for i, e in enumerate(c2.elements)}
            tuple_respecting = all(pos1[x] == pos2[y] for x, y in zip(a1, a2))
            same = tuple_respecting and naive_isomorphic(c1.pattern, c2.pattern)
        assert same == (q1 == q2)


def test_type_invariant_under_ambient_extension():
    t1, t2 = build_tree(2, 1, "L0"), build_tree(2, 2, "L0")
    a1 = (t1.id_of(()), t1.id_of((1,)))
    a2 = (t2.id_of(()), t2.id_of((1,)))
    assert qf_type(t1.structure, a1) == qf_type(t2.structure, a2)


def test_isolating_formula_single_node():
    t = build_tree(2, 1, "L0")
    q = qf_type(t.structure, (t.id_of((0,)),))
    theta = isolating_formula(q)
    text = serialize_formula(theta)
    assert theta.arity == 1
    assert "(rel below x1 x1)" in text
    assert "(eq (fn meet x1 x1) x1)" in text or "(eq x1 (fn meet x1 x1))" in text


def test_isolating_formula_fan_pair_literals():
    t = build_tree(2, 1, "L0")
    q = qf_type(t.structure, (t.id_of((0,)), t.id_of((1,))))
    theta = isolating_formula(q)
    text = serialize_formula(theta)
    assert theta.arity == 2
    assert "(not (rel below x1 x2))" in text
    assert "(not (rel below x2 x1))" in text
    assert "(rel lex x1 x2)" in text
    # the meet is named by a term and separated from both entries
    assert "(fn meet x1 x2)" in text


def test_isolating_formula_classifies_exhaustively():
    t = build_tree(2, 2, "L0")
    s = t.structure
    q = qf_type(s, (t.id_of((0,)), t.id_of((1,))))
    theta = isolating_formula(q)
    tuples = list(itertools.product(range(s.size), repeat=2))
    bits = eval_formula_over(theta, s, tuples)
    assert {a for a, b in zip(tuples, bits) if b} == \
        {a for a in tuples if qf_type(s, a) == q}


def test_isolating_formula_tuple_with_repeats():
    s = chain(4)
    q = qf_type(s, (2, 2))
    theta = isolating_formula(q)
    assert eval_formula(theta, s, (1, 1))
    assert not eval_formula(theta, s, (1, 2))


def test_isolating_formula_across_age_members():
    t = build_tree(2, 2, "L0")
    s = t.structure
    members = age_up_to(s, 5)
    for q in realized_types(s, 2):
        theta = isolating_formula(q)
        for m in members:
            tuples = list(itertools.product(range(m.size), repeat=2))
            if not tuples:
                continue
            bits = eval_formula_over(theta, m, tuples)
            for a, b in zip(tuples, bits):
                assert b == (qf_type(m, a) == q)


def test_delta_type_bits():
    from ramseykit.formulas import parse_formula
    s = chain(3)
    delta = (parse_formula("(rel lt x1 x2)"), parse_formula("(rel lt x2 x1)"))
    dt = delta_type(s, (0, 2), delta)
    assert dt.bits == (True, False)
    assert str(dt) == "10"
    assert delta_type(s, (0, 2), ()).bits == ()
