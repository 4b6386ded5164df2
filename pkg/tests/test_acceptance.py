"""Acceptance suite: one test per criterion, each printing a PASS line with
its runtime and asserting the stated time budget.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import itertools
import random
import time

import pytest

from ramseykit.amalgam import check_amalgamation, kt_membership
from ramseykit.closure import closure_set
from ramseykit.empatterns import (
    IndexedFamily,
    constraints_satisfied,
    identity_family,
    ind_fragment,
    is_indiscernible,
)
from ramseykit.errors import NoHomogeneousCopy
from ramseykit.fill import with_level_bound, extract_S, fill_m, in_Kmu, intrinsic_glb
from ramseykit.fixtures import (
    amalgamation_counterexample,
    chain,
    cor_B1,
    cor_B2,
    cor_embeddings,
    cor_fan_A,
    fan_pattern,
    random_kmu_tree,
    random_pair_coloring,
    random_tree_structure,
)
from ramseykit.formulas import eval_formula_over, parse_formula
from ramseykit.homogenize import (
    HomogenizationRequest,
    color_atoms,
    encode_coloring_as_structure,
    homogenize,
    roundtrip_check,
    sigma_eta,
)
from ramseykit.iso import age_up_to, enumerate_copies, find_isomorphism
from ramseykit.kernels.encode import build_tables
from ramseykit.qftypes import qf_type, isolating_formula, realized_types
from ramseykit.ramsey import arrow_holds, arrow_oracle, find_homogeneous
from ramseykit.skew import skew_embed
from ramseykit.trees import build_tree, sort_nodes, tree_structure
from ramseykit.core import FiniteStructure, Signature


class budgeted:
    def __init__(self, number, name, seconds):
        self.number = number
        self.name = name
        self.seconds = seconds

    def __enter__(self):
        self.start = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.start
        status = "PASS" if exc_type is None and elapsed < self.seconds else "FAIL"
        print(f"\nACCEPTANCE {self.number} {self.name}: {status} "
              f"({elapsed:.2f}s of {self.seconds:.0f}s)")
        if exc_type is None:
            assert elapsed < self.seconds, f"criterion {self.number} over budget: {elapsed:.2f}s"
        return False


def test_criterion_1_closure_laws():
    with budgeted(1, "closure laws", 10):
        rng = random.Random(20260810)
        dialects = ("L0", "L1", "Ls", "Lt")
        for i in range(1000):
            t = random_tree_structure(rng, dialects[i % 4], max_nodes=15)
            s = t.structure
            pool = list(range(s.size))
            a = frozenset(rng.sample(pool, rng.randint(0, min(4, len(pool)))))
            b = a | frozenset(rng.sample(pool, rng.randint(0, min(4, len(pool)))))
            ca, cb = closure_set(s, a), closure_set(s, b)
            assert a <= ca, "extensivity"
            assert closure_set(s, ca) == ca, "idempotence"
            assert ca <= cb, "monotonicity"


def test_criterion_2_isolating_formula_oracle():
    with budgeted(2, "isolating-formula oracle", 60):
        mismatches = 0
        for dialect in ("L0", "Ls"):
            host = build_tree(2, 2, dialect).structure
            members = age_up_to(host, 7)
            types = {}
            for n in (1, 2, 3):
                types.update(realized_types(host, n))
            prepared = []
            for m in members:
                tabs = build_tables(m)
                per_arity = {
                    n: {a: qf_type(m, a) for a in itertools.product(range(m.size), repeat=n)}
                    for n in (1, 2, 3)}
                prepared.append((m, tabs, per_arity))
            for q in types:
                theta = isolating_formula(q)
                n = q.tuple_length
                for m, tabs, per_arity in prepared:
                    tuples = list(per_arity[n])
                    if not tuples:
                        continue
                    bits = eval_formula_over(theta, m, tuples, tabs)
                    for a, bit in zip(tuples, bits):
                        if bit != (per_arity[n][a] == q):
                            mismatches += 1
        assert mismatches == 0


def test_criterion_3_closure_correspondence():
    with budgeted(3, "closure correspondence", 10):
        from ramseykit.closure import closure_elements, sorted_increasingly
        s = build_tree(2, 2, "L0").structure
        for n in (1, 2, 3):
            for q, tuples in realized_types(s, n).items():
                sigma = sigma_eta(s, q)
                closures = {}
                for j in tuples:
                    e = sorted_increasingly(s, closure_elements(s, j))
                    assert tuple(e[p - 1] for p in sigma) == j
                    assert e not in closures
                    closures[e] = j
                copies = {c.elements for c in enumerate_copies(s, q.canonical_sub)}
                assert set(closures) == copies


def test_criterion_4_arrow_vs_classical_ramsey():
    with budgeted(4, "arrow checker vs classical Ramsey", 30):
        v5 = arrow_holds(chain(5), chain(3), chain(2), 2)
        assert not v5.holds
        assert find_homogeneous(v5.witness, chain(3)) is None  # re-verified
        v6 = arrow_holds(chain(6), chain(3), chain(2), 2)
        assert v6.holds
        naive5, _ = arrow_oracle(chain(5), chain(3), chain(2), 2)  # 2^10 colorings
        naive6, _ = arrow_oracle(chain(6), chain(3), chain(2), 2)  # 2^15 colorings
        assert naive5 == v5.holds and naive6 == v6.holds


def test_criterion_5_amalgamation_counterexample():
    with budgeted(5, "amalgamation counterexample", 300):
        report = amalgamation_counterexample(size_bound=12)
        assert report["embeds-into-B1"] and report["embeds-into-B2"]
        assert report["amalgam"] == "none"
        assert report["incomparable-refuted"]
        assert report["branch-b4-below-c4-refuted"]
        assert report["branch-c4-below-b4-refuted"]
        assert report["verdict"] == "no-amalgam"


def test_criterion_6_skew_embedding():
    with budgeted(6, "skew embedding", 5):
        s = skew_embed(2, 1)
        assert s((0,)) == (0, 0) and s((1,)) == (1, 0, 0)
        for k in (1, 2, 3):
            for n in (0, 1, 2, 3):
                assert skew_embed(k, n).violations() == []


def test_criterion_7_fill_extract_roundtrip():
    with budgeted(7, "fill/extract round trip", 30):
        rng = random.Random(41)
        done = 0
        while done < 20:
            m = rng.randint(1, 3)
            base = random_kmu_tree(rng, m, max_nodes=8)
            marks = {v for v in base.nodes if rng.random() < 0.75}
            for a in list(marks):
                for b in list(marks):
                    g = intrinsic_glb(base.nodes, a, b)
                    if g is not None:
                        marks.add(g)
            if not marks:
                continue
            d = extract_S(base, sort_nodes(marks))
            result = fill_m(d, m)
            assert in_Kmu(result.filled, m)
            back = extract_S(result.filled, result.psi_marks)
            assert find_isomorphism(with_level_bound(d, m), back) is not None
            done += 1


def test_criterion_8_homogenizer_roundtrip():
    with budgeted(8, "homogenizer round trip", 300):
        rng = random.Random(99)
        host6 = chain(6)
        for _ in range(100):
            g = random_pair_coloring(rng, host6, chain(2), 2)
            assert roundtrip_check(host6, chain(2), chain(3), g, 2)
        tree_host = build_tree(2, 3, "L0").structure
        fan = fan_pattern()
        successes = failures = 0
        for _ in range(50):
            g = random_pair_coloring(rng, tree_host, fan, 2)
            try:
                # homogenize itself re-verifies the per-type constancy
                # literal by literal before returning
                assert roundtrip_check(tree_host, fan, fan, g, 2)
                successes += 1
            except NoHomogeneousCopy:
                failures += 1
        assert successes + failures == 50
        assert successes > 0


def _random_family(rng):
    if rng.random() < 0.5:
        index = chain(rng.randint(2, 5))
    else:
        index = random_tree_structure(rng, rng.choice(("L0", "Lt")), max_nodes=5).structure
    size = rng.randint(2, 4)
    sig = Signature(relations=(("E", 2), ("U", 1)))
    target = FiniteStructure(
        sig, size,
        {"E": {(rng.randrange(size), rng.randrange(size)) for _ in range(rng.randint(0, 6))},
         "U": {(rng.randrange(size),) for _ in range(rng.randint(0, 2))}},
        {}, {})
    assign = {i: (rng.randrange(size),) for i in index.universe}
    return IndexedFamily(index, target, assign)


def test_criterion_9_indiscernibility_vs_fragment():
    with budgeted(9, "indiscernibility vs fragment", 60):
        delta = (parse_formula("(rel E x1 x2)"),
                 parse_formula("(not (rel E x2 x1))"),
                 parse_formula("(rel U x1)"))
        rng = random.Random(123)
        agree_false = 0
        for _ in range(200):
            fam = _random_family(rng)
            cons = ind_fragment(fam.index, delta, max_len=3)
            violated = constraints_satisfied(cons, fam, delta)
            report = is_indiscernible(fam, delta, max_len=3)
            assert (violated is None) == report.indiscernible
            if not report.indiscernible:
                agree_false += 1
        assert agree_false > 0  # the sample is not vacuous
