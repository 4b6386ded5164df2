"""Canned structures, random generators, and named reproduction runs.

The ``amalgamation_counterexample`` fixture rebuilds the three bare-tree
structures whose amalgamation fails: a four-element fan ``A`` (one root below
three pairwise incomparable points) embedded two ways into five-element trees
``B1, B2`` that disagree about which pair of top points shares a branching
point.  The exhaustive search over completions finds no amalgam in the
bare-tree age, and the forcing argument is replayed symbolically: the two
branching points would have to be comparable (two incomparable predecessors
of one point never embed into a tree), yet either comparability transports a
forbidden order pair from one side to the other.
"""

import random

from .amalgam import check_amalgamation, kt_membership
from .core import FiniteStructure, Signature
from .errors import NoHomogeneousCopy
from .homogenize import roundtrip_check
from .iso import Embedding, enumerate_copies, is_embedding
from .ramsey import Coloring, arrow_holds, arrow_oracle
from .skew import skew_embed
from .trees import TreeNode, build_tree, meet, sort_nodes, tree_signature, tree_structure


def chain(n: int) -> FiniteStructure:
    """An ordered ``n``-chain with no structure besides its order."""
    sig = Signature(relations=(("lt", 2),), order_symbol="lt")
    pairs = {(i, j) for i in range(n) for j in range(n) if i < j}
    return FiniteStructure(sig, n, {"lt": pairs}, {}, {})


def fan_pattern() -> FiniteStructure:
    """Two incomparable nodes together with their meet (the tree ``2^{<=1}``)."""
    return tree_structure([(), (0,), (1,)], "L0").structure


# -- the amalgamation counterexample ------------------------------------------

def cor_fan_A() -> FiniteStructure:
    """Fan: one root strictly below three pairwise incomparable points."""
    sig = tree_signature("Lt")
    refl = {(i, i) for i in range(4)}
    below = refl | {(0, 1), (0, 2), (0, 3)}
    lex = {(i, j) for i in range(4) for j in range(4) if i < j}
    return FiniteStructure(sig, 4, {"below": below, "lex": lex}, {}, {},
                           labels=("a0", "a1", "a2", "a3"))


def cor_B1() -> FiniteStructure:
    """A tree where the fan's first two top points share a branching point.

    Elements in lex order: b0 (root), b4 (branching point below b1 and b2),
    b1, b2, b3.
    """
    sig = tree_signature("Lt")
    refl = {(i, i) for i in range(5)}
    below = refl | {(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3)}
    lex = {(i, j) for i in range(5) for j in range(5) if i < j}
    return FiniteStructure(sig, 5, {"below": below, "lex": lex}, {}, {},
                           labels=("b0", "b4", "b1", "b2", "b3"))


def cor_B2() -> FiniteStructure:
    """A tree where the fan's last two top points share a branching point.

    Elements in lex order: c0 (root), c1, c4 (branching point below c2 and
    c3), c2, c3.
    """
    sig = tree_signature("Lt")
    refl = {(i, i) for i in range(5)}
    below = refl | {(0, 1), (0, 2), (0, 3), (0, 4), (2, 3), (2, 4)}
    lex = {(i, j) for i in range(5) for j in range(5) if i < j}
    return FiniteStructure(sig, 5, {"below": below, "lex": lex}, {}, {},
                           labels=("c0", "c1", "c4", "c2", "c3"))


def cor_embeddings() -> tuple[Embedding, Embedding]:
    a, b1, b2 = cor_fan_A(), cor_B1(), cor_B2()
    return Embedding(a, b1, (0, 2, 3, 4)), Embedding(a, b2, (0, 1, 3, 4))


def incomparable_predecessors_pattern(swap: bool = False) -> FiniteStructure:
    """Three points: two incomparable ones both strictly below the third."""
    sig = tree_signature("Lt")
    refl = {(i, i) for i in range(3)}
    below = refl | {(0, 2), (1, 2)}
    lex = {(0, 1), (0, 2), (1, 2)} if not swap else {(1, 0), (0, 2), (1, 2)}
    return FiniteStructure(sig, 3, {"below": below, "lex": lex}, {}, {})


def amalgamation_counterexample(size_bound: int = 12, budget: int = 10**7) -> dict:
    """Reproduce the failed amalgamation, search plus symbolic forcing."""
    a, b1, b2 = cor_fan_A(), cor_B1(), cor_B2()
    e1, e2 = cor_embeddings()
    report: dict[str, object] = {}
    report["embeds-into-B1"] = is_embedding(a, b1, e1.map)
    report["embeds-into-B2"] = is_embedding(a, b2, e2.map)
    report["B1-in-age"] = kt_membership(b1)
    report["B2-in-age"] = kt_membership(b2)
    found = check_amalgamation(a, b1, b2, e1, e2, kt_membership, size_bound, budget)
    report["amalgam"] = "none" if found is None else "found"
    report["bound"] = size_bound
    # Forced contradiction: the two branching points b4 (id 1 in B1) and c4
    # (id 2 in B2) both sit strictly below the shared point b2 = c2 (= a2's
    # image), so in any amalgam in the age they must be comparable...
    report["incomparable-refuted"] = (
        not kt_membership(incomparable_predecessors_pattern(False))
        and not kt_membership(incomparable_predecessors_pattern(True)))
    # ... but b4 below c4 would give b4 below c3 = b3 (forbidden in B1):
    report["branch-b4-below-c4-refuted"] = (
        (2, 4) in cor_B2().rels["below"] and (1, 4) not in cor_B1().rels["below"])
    # ... and c4 below b4 would give c4 below b1 = c1 (forbidden in B2):
    report["branch-c4-below-b4-refuted"] = (
        (1, 2) in cor_B1().rels["below"] and (2, 1) not in cor_B2().rels["below"])
    report["verdict"] = "no-amalgam" if (
        found is None and report["incomparable-refuted"]
        and report["branch-b4-below-c4-refuted"] and report["branch-c4-below-b4-refuted"]
    ) else "inconclusive"
    return report


# -- random generators ----------------------------------------------------------


def random_tree_nodes(rng: random.Random, max_nodes: int,
                      max_branch: int = 3, max_depth: int = 4) -> tuple[TreeNode, ...]:
    """A meet-closed random node set of at most ``max_nodes`` nodes."""
    raw = {()} if rng.random() < 0.5 else set()
    for _ in range(max_nodes):
        depth = rng.randint(1, max_depth)
        raw.add(tuple(rng.randrange(max_branch) for _ in range(depth)))
    closed = set(raw)
    for a in raw:
        for b in raw:
            closed.add(meet(a, b))
    nodes = list(sort_nodes(closed))
    while len(nodes) > max_nodes:
        # dropping a maximal node keeps the set meet-closed
        for i in range(len(nodes) - 1, -1, -1):
            v = nodes[i]
            if not any(u != v and u[:len(v)] == v for u in nodes):
                nodes.pop(i)
                break
    return tuple(nodes)


def random_tree_structure(rng: random.Random, dialect: str, max_nodes: int = 15):
    nodes = random_tree_nodes(rng, max_nodes)
    return tree_structure(nodes, dialect)


def random_kmu_tree(rng: random.Random, m: int, max_nodes: int = 8):
    """A random downward-closed bare tree all of whose leaves sit at depth
    ``m``: a member of the class ``in_Kmu`` tests."""
    while True:
        width = rng.randint(1, 3)
        leaves = {tuple(rng.randrange(width) for _ in range(m))
                  for _ in range(rng.randint(1, 4))}
        nodes = sort_nodes(y[:i] for y in leaves for i in range(m + 1))
        if len(nodes) <= max_nodes:
            return tree_structure(nodes, "Lt")


def random_pair_coloring(rng: random.Random, host: FiniteStructure,
                         pattern: FiniteStructure, k: int = 2) -> Coloring:
    copies = enumerate_copies(host, pattern)
    assignment = {c.element_set: rng.randrange(k) for c in copies}
    return Coloring(host, pattern, assignment, k)


# -- named fixture runs -----------------------------------------------------------


def fixture_arrow_chains(budget: int = 10**8) -> dict:
    """Arrow checks against the classical two-color triangle threshold."""
    a, b = chain(2), chain(3)
    v5 = arrow_holds(chain(5), b, a, 2, budget)
    v6 = arrow_holds(chain(6), b, a, 2, budget)
    o5, w5 = arrow_oracle(chain(5), b, a, 2)
    o6, _ = arrow_oracle(chain(6), b, a, 2)
    return {
        "arrow-5-chain": "fails" if not v5.holds else "holds",
        "arrow-6-chain": "holds" if v6.holds else "fails",
        "oracle-agrees": (v5.holds == o5) and (v6.holds == o6),
        "witness-size": len(v5.witness.assignment) if v5.witness else 0,
        "nodes": v5.stats.nodes + v6.stats.nodes,
        "verdict": "ok" if (not v5.holds and v6.holds and o5 == v5.holds and o6 == v6.holds)
        else "mismatch",
    }


def fixture_skew_golden() -> dict:
    s = skew_embed(2, 1)
    golden = s((0,)) == (0, 0) and s((1,)) == (1, 0, 0) and s(()) == ()
    exact = all(not skew_embed(k, n).violations() for k in (1, 2, 3) for n in range(4))
    return {
        "golden-map": " ".join(f"{a}->{b}" for a, b in s.table()),
        "golden-ok": golden,
        "exact-k,n<=3": exact,
        "verdict": "ok" if golden and exact else "mismatch",
    }


def fixture_homogenize_chain(seed: int, runs: int = 100, budget: int = 10**8) -> dict:
    """Random pair colorings of a 6-chain; encode, homogenize, verify."""
    rng = random.Random(seed)
    host, pattern, b = chain(6), chain(2), chain(3)
    ok = 0
    for _ in range(runs):
        g = random_pair_coloring(rng, host, pattern, 2)
        if roundtrip_check(host, pattern, b, g, 2, budget):
            ok += 1
    return {"seed": seed, "runs": runs, "verified": ok,
            "verdict": "ok" if ok == runs else "mismatch"}


def fixture_homogenize_tree(seed: int, runs: int = 50, budget: int = 10**8) -> dict:
    """Random colorings of meet-fans in ``2^{<=3}``; pattern ``2^{<=1}``."""
    rng = random.Random(seed)
    host = build_tree(2, 3, "L0").structure
    pattern = fan_pattern()
    b = fan_pattern()
    ok = 0
    failures = 0
    for _ in range(runs):
        g = random_pair_coloring(rng, host, pattern, 2)
        try:
            if roundtrip_check(host, pattern, b, g, 2, budget):
                ok += 1
        except NoHomogeneousCopy:
            failures += 1
    return {"seed": seed, "runs": runs, "verified": ok, "no-copy": failures,
            "verdict": "ok" if ok + failures == runs and ok > 0 else "mismatch"}


FIXTURES = {
    "amalgamation-It": lambda budget, seed: amalgamation_counterexample(12, budget),
    "arrow-R33": lambda budget, seed: fixture_arrow_chains(budget),
    "skew-golden": lambda budget, seed: fixture_skew_golden(),
    "homogenize-chain": lambda budget, seed: fixture_homogenize_chain(seed, 25, budget),
    "homogenize-tree": lambda budget, seed: fixture_homogenize_tree(seed, 10, budget),
}


def run_fixture(name: str, budget: int = 10**8, seed: int = 0) -> tuple[dict, int]:
    """Run a named reproduction; exit status 1 for negative verdicts
    (``no-amalgam`` counts as negative: the reproduced result is a refutation)."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}")
    report = FIXTURES[name](budget, seed)
    verdict = report.get("verdict")
    if name == "amalgamation-It":
        code = 1 if verdict == "no-amalgam" else 3
    else:
        code = 0 if verdict == "ok" else 1
    return report, code
