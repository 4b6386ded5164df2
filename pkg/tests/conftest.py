import itertools

import pytest

from ramseykit.core import FiniteStructure, Signature
from ramseykit.fixtures import chain
from ramseykit.trees import build_tree, tree_structure


@pytest.fixture
def t21_l0():
    return build_tree(2, 1, "L0")


@pytest.fixture
def t22_l0():
    return build_tree(2, 2, "L0")


def naive_isomorphic(a: FiniteStructure, b: FiniteStructure) -> bool:
    """Plain-loop isomorphism test, independent of the library search."""
    if a.size != b.size or a.sig != b.sig:
        return False
    for perm in itertools.permutations(range(b.size)):
        ok = True
        for name, arity in a.sig.relations:
            for t in itertools.product(range(a.size), repeat=arity):
                if (t in a.rels[name]) != (tuple(perm[x] for x in t) in b.rels[name]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for name, arity in a.sig.functions:
                for t in itertools.product(range(a.size), repeat=arity):
                    if perm[a.funs[name][t]] != b.funs[name][tuple(perm[x] for x in t)]:
                        ok = False
                        break
                if not ok:
                    break
        if ok and all(perm[a.consts[n]] == b.consts[n] for n in a.sig.constants):
            return True
    return False


def naive_copies(c: FiniteStructure, a: FiniteStructure) -> set[frozenset]:
    """All subsets of c inducing a structure isomorphic to a (brute force)."""
    from ramseykit.core import induced_substructure
    from ramseykit.errors import NotClosed
    out = set()
    for subset in itertools.combinations(range(c.size), a.size):
        try:
            sub = induced_substructure(c, subset)
        except NotClosed:
            continue
        if naive_isomorphic(a, sub):
            out.add(frozenset(subset))
    return out


def make_chain(n):
    return chain(n)


def two_relation_structure(size, pairs_r, pairs_s=(), order=None):
    rels = [("R", 2), ("S", 2)]
    sig = Signature(relations=tuple(rels), order_symbol=order)
    return FiniteStructure(sig, size, {"R": set(pairs_r), "S": set(pairs_s)}, {}, {})
