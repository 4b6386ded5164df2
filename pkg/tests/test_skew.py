import functools
import itertools

from ramseykit.qftypes import qf_type
from ramseykit.skew import skew_embed
from ramseykit.trees import build_tree, lex_cmp, sort_nodes, tree_structure


def test_golden_values_k2_n1():
    s = skew_embed(2, 1)
    assert s.levels == (1,)
    assert s(()) == ()
    assert s((0,)) == (0, 0)
    assert s((1,)) == (1, 0, 0)


def test_golden_lengths_k2_n2():
    s = skew_embed(2, 2)
    assert s.levels == (1, 4)
    nodes = sorted(s.map, key=functools.cmp_to_key(lex_cmp))
    assert [len(s(nd)) for nd in nodes] == [0, 5, 7, 8, 9, 11, 12]


def test_base_case_identity():
    for k in (1, 2, 5):
        s = skew_embed(k, 0)
        assert s.map == {(): ()}
        assert s.levels == ()


def test_exact_embedding_all_small_shapes():
    for k in (1, 2, 3):
        for n in range(4):
            assert skew_embed(k, n).violations() == []


def test_lengths_strictly_increase_along_lex():
    s = skew_embed(3, 2)
    nodes = sorted(s.map, key=functools.cmp_to_key(lex_cmp))
    lengths = [len(s(nd)) for nd in nodes]
    assert all(a < b for a, b in zip(lengths, lengths[1:]))


def test_source_l0_types_determine_image_l1_types():
    # qf L0-type equality of source tuples implies qf L1-type equality of
    # image tuples, for all tuples of length <= 3 in 2^{<=2}
    s = skew_embed(2, 2)
    source = build_tree(2, 2, "L0")
    image_nodes = sort_nodes(s.map.values())
    image = tree_structure(image_nodes, "L1")
    img_id = {nd: image.id_of(nd) for nd in image_nodes}

    by_type = {}
    for n in (1, 2, 3):
        for tup in itertools.product(source.nodes, repeat=n):
            src_ids = tuple(source.id_of(nd) for nd in tup)
            q = qf_type(source.structure, src_ids)
            img_ids = tuple(img_id[s(nd)] for nd in tup)
            p = qf_type(image.structure, img_ids)
            by_type.setdefault(q, set()).add(p)
    assert all(len(images) == 1 for images in by_type.values())


def test_image_restriction_isomorphic_to_source():
    from ramseykit.iso import find_isomorphism
    s = skew_embed(2, 2)
    source = build_tree(2, 2, "L0").structure
    image = tree_structure(sort_nodes(s.map.values()), "L0").structure
    assert find_isomorphism(source, image) is not None
