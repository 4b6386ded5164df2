import itertools
import random

import pytest

from conftest import naive_copies, naive_isomorphic

from ramseykit.errors import SignatureMismatch
from ramseykit.fixtures import chain, cor_B1, cor_embeddings, cor_fan_A, random_tree_structure
from ramseykit.iso import (
    age_up_to,
    canonical_key,
    enumerate_copies,
    enumerate_embeddings,
    find_isomorphism,
    is_embedding,
)
from ramseykit.trees import build_tree, tree_structure


def test_isomorphism_identity():
    s = build_tree(2, 1, "L0").structure
    iso = find_isomorphism(s, s)
    assert iso is not None and iso.map == (0, 1, 2)


def test_isomorphism_level_shift_fans():
    a = tree_structure([(), (0,), (1,)], "L0").structure
    b = tree_structure([(0,), (0, 0), (0, 1)], "L0").structure
    iso = find_isomorphism(a, b)
    assert iso is not None
    assert is_embedding(a, b, iso.map)


def test_isomorphism_none_for_chain_vs_antichain():
    chain2 = tree_structure([(), (0,)], "Lt").structure
    anti = tree_structure([(0,), (1,)], "Lt").structure
    assert find_isomorphism(chain2, anti) is None


def test_isomorphism_requires_same_signature():
    with pytest.raises(SignatureMismatch):
        find_isomorphism(chain(2), cor_fan_A())


def test_isomorphism_symmetric_and_inverse():
    rng = random.Random(5)
    for _ in range(20):
        a = random_tree_structure(rng, "L0", max_nodes=7)
        b = random_tree_structure(rng, "L0", max_nodes=7)
        f = find_isomorphism(a.structure, b.structure)
        g = find_isomorphism(b.structure, a.structure)
        assert (f is None) == (g is None)
        assert (f is not None) == naive_isomorphic(a.structure, b.structure)
        if f is not None:
            assert all(g.map[f.map[x]] == x for x in range(a.structure.size))


def test_single_point_embeddings_count():
    from ramseykit.core import FiniteStructure, Signature
    sig = Signature(relations=(("R", 2),))
    point = FiniteStructure(sig, 1, {"R": set()}, {}, {})
    host = FiniteStructure(sig, 3, {"R": set()}, {}, {})
    assert len(enumerate_embeddings(point, host)) == 3


def test_fan_embeds_into_B1_via_b_i():
    a, b1 = cor_fan_A(), cor_B1()
    e1, _ = cor_embeddings()
    maps = [e.map for e in enumerate_embeddings(a, b1)]
    assert e1.map in maps


def test_ordered_chain_embedding_count():
    assert len(enumerate_embeddings(chain(2), chain(4))) == 6


def test_embeddings_in_lex_order_of_images():
    maps = [e.map for e in enumerate_embeddings(chain(2), chain(4))]
    assert maps == sorted(maps)


def test_copies_of_c_in_c_unique_under_order():
    s = build_tree(2, 1, "L0").structure
    assert len(enumerate_copies(s, s)) == 1


def test_copies_of_branch_chain_in_bamboo():
    pattern = tree_structure([(), (0,)], "Lt").structure
    host = build_tree(1, 2, "Lt").structure
    got = {c.element_set for c in enumerate_copies(host, pattern)}
    assert got == {frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})}


def test_copies_empty_when_pattern_larger():
    assert enumerate_copies(chain(2), chain(3)) == []


def test_copies_agree_with_bruteforce_oracle():
    rng = random.Random(11)
    for _ in range(15):
        host = random_tree_structure(rng, rng.choice(["L0", "Lt"]), max_nodes=7)
        pat = random_tree_structure(rng, host.dialect, max_nodes=4)
        got = {c.element_set for c in enumerate_copies(host.structure, pat.structure)}
        assert got == naive_copies(host.structure, pat.structure)


def test_rigidity_embeddings_equal_copies():
    host = build_tree(2, 2, "L0").structure
    pat = tree_structure([(), (0,), (1,)], "L0").structure
    assert len(enumerate_embeddings(pat, host)) == len(enumerate_copies(host, pat))


def test_unordered_isomorphism_search():
    from ramseykit.core import FiniteStructure, Signature
    sig = Signature(relations=(("E", 2),))

    def graph(n, edges):
        sym = {(a, b) for a, b in edges} | {(b, a) for a, b in edges}
        return FiniteStructure(sig, n, {"E": sym}, {}, {})

    path1 = graph(4, [(0, 1), (1, 2), (2, 3)])
    path2 = graph(4, [(2, 0), (0, 3), (3, 1)])  # relabeled path
    star = graph(4, [(0, 1), (0, 2), (0, 3)])
    iso = find_isomorphism(path1, path2)
    assert iso is not None and is_embedding(path1, path2, iso.map)
    assert find_isomorphism(path1, star) is None


def test_unordered_tuple_types_respect_automorphism():
    from ramseykit.core import FiniteStructure, Signature
    from ramseykit.qftypes import qf_type
    sig = Signature(relations=(("E", 2),))
    sym = FiniteStructure(sig, 2, {"E": {(0, 1), (1, 0)}}, {}, {})
    directed = FiniteStructure(sig, 2, {"E": {(0, 1)}}, {}, {})
    # the symmetric edge has a swapping automorphism, the directed one does not
    assert qf_type(sym, (0, 1)) == qf_type(sym, (1, 0))
    assert qf_type(directed, (0, 1)) != qf_type(directed, (1, 0))


def test_age_n0_is_constant_closure():
    s = build_tree(2, 1, "L0").structure
    members = age_up_to(s, 0)
    assert len(members) == 1 and members[0].size == 0


def test_age_contains_fan_type():
    s = build_tree(2, 1, "L0").structure
    fan = tree_structure([(), (0,), (1,)], "L0").structure
    members = age_up_to(s, 2)
    assert any(m.size == 3 and find_isomorphism(m, fan) for m in members)


def test_age_contains_self():
    s = build_tree(2, 1, "L0").structure
    keys = {canonical_key(m) for m in age_up_to(s, s.size)}
    assert canonical_key(s) in keys


def test_age_members_are_canonical_and_distinct():
    s = build_tree(2, 2, "Lt").structure
    members = age_up_to(s, 4)
    keys = [canonical_key(m) for m in members]
    assert len(set(keys)) == len(keys)
