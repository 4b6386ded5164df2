"""The two kernel lanes must be observationally identical."""

import itertools
import random

import pytest

from ramseykit.kernels import lanes
from ramseykit.kernels.encode import build_match_plan, build_tables, flatten_members, flatten_tuples
from ramseykit.fixtures import chain, random_tree_structure
from ramseykit.formulas import compile_formula, parse_formula
from ramseykit.qftypes import isolating_formula, qf_type

LANES = lanes()
needs_native = pytest.mark.skipif("native" not in LANES, reason="extension not built")


@needs_native
def test_match_embeddings_agree():
    rng = random.Random(2)
    for _ in range(30):
        host = random_tree_structure(rng, "L0", max_nodes=8)
        pat = random_tree_structure(rng, "L0", max_nodes=4)
        plan = build_match_plan(pat.structure, host.structure)
        pure = LANES["pure"].match_embeddings(plan)
        native = LANES["native"].match_embeddings(plan)
        assert pure == native
        plan2 = build_match_plan(pat.structure, host.structure)
        assert LANES["pure"].match_embeddings(plan2, limit=1) == \
            LANES["native"].match_embeddings(plan2, limit=1)


@needs_native
def test_match_embeddings_agree_with_constants_and_relations():
    from ramseykit.core import FiniteStructure, Signature
    rng = random.Random(7)
    sig = Signature(relations=(("R", 2), ("U", 1)), constants=("c",))
    for _ in range(30):
        nh = rng.randint(1, 6)
        np_ = rng.randint(0, 3)
        def rand(n):
            return FiniteStructure(
                sig, n,
                {"R": {(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 6))},
                 "U": {(rng.randrange(n),) for _ in range(rng.randint(0, 2))}},
                {}, {"c": rng.randrange(n)}) if n else None
        host = rand(nh)
        pat = rand(max(np_, 1))
        plan = build_match_plan(pat, host)
        assert LANES["pure"].match_embeddings(plan) == LANES["native"].match_embeddings(plan)


@needs_native
def test_arrow_search_agrees():
    rng = random.Random(5)
    for _ in range(60):
        m = rng.randint(0, 9)
        nb = rng.randint(0, 5)
        members = []
        for _ in range(nb):
            size = rng.randint(0, min(4, m)) if m else 0
            members.append(tuple(sorted(rng.sample(range(m), size))) if m else ())
        k = rng.randint(1, 3)
        starts, items = flatten_members(members)
        got_p = LANES["pure"].arrow_search(k, m, starts, items, 10**7)
        got_n = LANES["native"].arrow_search(k, m, starts, items, 10**7)
        assert got_p == got_n


@needs_native
def test_eval_formula_batch_agrees():
    rng = random.Random(9)
    for _ in range(25):
        t = random_tree_structure(rng, "L0", max_nodes=7)
        s = t.structure
        n = rng.randint(1, 3)
        a = tuple(rng.randrange(s.size) for _ in range(n))
        theta = isolating_formula(qf_type(s, a))
        tabs = build_tables(s)
        program, _ = compile_formula(theta, s, tabs)
        tuples = list(itertools.product(range(s.size), repeat=n))
        flat = flatten_tuples(tuples, n)
        assert bytes(LANES["pure"].eval_formula_batch(program, tabs, flat, len(tuples))) == \
            bytes(LANES["native"].eval_formula_batch(program, tabs, flat, len(tuples)))


@needs_native
def test_wide_relations_agree():
    # arity-3 relations exercise the encoded-set path in both kernels
    from ramseykit.core import FiniteStructure, Signature
    rng = random.Random(31)
    sig = Signature(relations=(("T", 3),))
    for _ in range(20):
        nh = rng.randint(2, 5)
        np_ = rng.randint(1, 3)

        def rand(n):
            table = {(rng.randrange(n), rng.randrange(n), rng.randrange(n))
                     for _ in range(rng.randint(0, 8))}
            return FiniteStructure(sig, n, {"T": table}, {}, {})

        host, pat = rand(nh), rand(np_)
        plan = build_match_plan(pat, host)
        assert LANES["pure"].match_embeddings(plan) == LANES["native"].match_embeddings(plan)

        phi = parse_formula("(and (rel T x1 x2 x2) (not (rel T x2 x1 x1)))")
        tabs = build_tables(host)
        program, _ = compile_formula(phi, host, tabs)
        tuples = list(itertools.product(range(nh), repeat=2))
        flat = flatten_tuples(tuples, 2)
        assert bytes(LANES["pure"].eval_formula_batch(program, tabs, flat, len(tuples))) == \
            bytes(LANES["native"].eval_formula_batch(program, tabs, flat, len(tuples)))


@needs_native
def test_arrow_budget_statuses_agree():
    starts, items = flatten_members([(0, 1), (1, 2), (0, 2)])
    for budget in range(1, 10):
        got_p = LANES["pure"].arrow_search(2, 3, starts, items, budget)
        got_n = LANES["native"].arrow_search(2, 3, starts, items, budget)
        assert got_p == got_n


def _first_bad_canonical(k, m, members):
    """Reference: first bad total coloring in canonical DFS order."""

    def rec(colors, max_used):
        if len(colors) == m:
            for mem in members:
                if len({colors[i] for i in mem}) <= 1:
                    return None
            return list(colors)
        for c in range(min(max_used + 1, k)):
            got = rec(colors + [c], max(max_used, c + 1))
            if got is not None:
                return got
        return None

    return rec([], 0)


def test_witness_is_first_bad_coloring_in_canonical_order():
    rng = random.Random(77)
    for lane in LANES.values():
        for _ in range(40):
            m = rng.randint(1, 7)
            nb = rng.randint(1, 4)
            members = [sorted(rng.sample(range(m), rng.randint(1, min(3, m))))
                       for _ in range(nb)]
            k = rng.randint(2, 3)
            starts, items = flatten_members([tuple(x) for x in members])
            status, witness, _ = lane.arrow_search(k, m, starts, items, 10**7)
            reference = _first_bad_canonical(k, m, members)
            if reference is None:
                assert status == 0 and witness is None
            else:
                assert status == 1 and list(witness) == reference


def test_selected_lane_exports():
    import ramseykit.kernels as k
    assert k.LANE in ("pure", "native")
    assert callable(k.match_embeddings)
    assert callable(k.arrow_search)
    assert callable(k.eval_formula_batch)
