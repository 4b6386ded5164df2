"""Amalgamation search and membership in the bare-tree age.

``check_amalgamation`` looks for a structure completing the square of two
embeddings of a common base.  Any amalgam restricts to one on the union of
the two images when the signature is relational and the class is closed
under induced substructures, so the search enumerates exactly the candidates
on that union: every partial identification of the two non-shared parts,
every completion of the relation tables on the mixed tuples, and (for
signatures with functions) every completion of the function tables on mixed
inputs.  For such classes the search is exhaustive for every size bound at
least the union's size; candidates above the bound are skipped.

``kt_membership`` decides whether a structure over the bare tree signature
embeds into some full tree ``k^{<=n}``; branching at most the structure's
size and depth at most its longest chain always suffice, which bounds the
search.
"""

import itertools
from dataclasses import dataclass

from .core import FiniteStructure, validate
from .errors import BudgetExceeded, RamseyKitError, SignatureMismatch
from .iso import Embedding, embedding_violations, enumerate_embeddings
from .trees import build_tree, tree_signature


def _chain_length(below: frozenset, n: int) -> int:
    """Longest strictly increasing chain in a partial order, in nodes."""
    strict = {(x, y) for x, y in below if x != y}
    memo: dict[int, int] = {}

    def up(x):
        if x not in memo:
            memo[x] = 1 + max((up(y) for y in range(n) if (x, y) in strict), default=0)
        return memo[x]

    return max((up(x) for x in range(n)), default=0)


def kt_membership(s: FiniteStructure) -> bool:
    """Does ``s`` embed into some full bare tree ``k^{<=n}``?

    Cheap necessary conditions (reflexive partial order with chain
    predecessor sets, strict total lex refining it) cut the obvious
    non-members before any search; then branching ``k <= |s|`` and depth
    ``n`` at the longest chain length (minus one first) decide the rest.
    """
    if s.sig != tree_signature("Lt"):
        raise SignatureMismatch("kt_membership expects the bare tree signature (below, lex)")
    n = s.size
    if n == 0:
        return True
    below = s.rels["below"]
    lex = s.rels["lex"]
    for x in range(n):
        if (x, x) not in below:
            return False
    for x, y in below:
        if x != y and (y, x) in below:
            return False
        for z in range(n):
            if (y, z) in below and (x, z) not in below:
                return False
    for z in range(n):
        preds = [x for x in range(n) if (x, z) in below]
        for x, y in itertools.combinations(preds, 2):
            if (x, y) not in below and (y, x) not in below:
                return False
    for x in range(n):
        if (x, x) in lex:
            return False
        for y in range(n):
            if x != y and ((x, y) in lex) == ((y, x) in lex):
                return False
    for x, y in lex:
        for z in range(n):
            if (y, z) in lex and (x, z) not in lex:
                return False
    for x, y in below:
        if x != y and (x, y) not in lex:
            return False

    c = _chain_length(below, n)
    for depth in (c - 1, c):
        if depth < 0:
            continue
        for k in range(1, n + 1):
            host = build_tree(k, depth, "Lt").structure
            if host.size < n:
                continue
            if enumerate_embeddings(s, host, limit=1):
                return True
    return False


@dataclass(frozen=True)
class AmalgamRecord:
    amalgam: FiniteStructure
    g1: Embedding
    g2: Embedding


def _push_tables(b: FiniteStructure, g: tuple[int, ...], size: int):
    rels = {name: {tuple(g[x] for x in t) for t in b.rels[name]} for name, _ in b.sig.relations}
    funs = {name: {tuple(g[x] for x in t): g[v] for t, v in b.funs[name].items()}
            for name, _ in b.sig.functions}
    consts = {name: g[v] for name, v in b.consts.items()}
    return rels, funs, consts


def check_amalgamation(a: FiniteStructure, b1: FiniteStructure, b2: FiniteStructure,
                       e1: Embedding, e2: Embedding, class_test, size_bound: int,
                       budget: int = 10**7) -> AmalgamRecord | None:
    """First amalgam (by the search's fixed order) of ``b1, b2`` over ``a``
    inside the class decided by ``class_test``, or None.

    Candidates are built on the union of the images: identifications of the
    non-shared parts by size (fewest merges first, so the union-sized
    candidates come first), then relation completions on mixed tuples in
    lexicographic order, all-absent first, then function completions on
    mixed inputs.  Each examined completion costs one budget unit.
    """
    for e, b, tag in ((e1, b1, "e1"), (e2, b2, "e2")):
        bad = embedding_violations(a, b, e.map)
        if bad:
            raise RamseyKitError(f"{tag} is not an embedding: {bad[0]}")
    na = a.size
    extras1 = [x for x in b1.universe if x not in set(e1.map)]
    extras2 = [x for x in b2.universe if x not in set(e2.map)]

    matchings = []
    for r in range(0, min(len(extras1), len(extras2)) + 1):
        for sub1 in itertools.combinations(extras1, r):
            for sub2 in itertools.permutations(extras2, r):
                matchings.append(tuple(zip(sub1, sub2)))
    matchings.sort(key=lambda m: (len(m), m))

    spent = 0
    for matching in matchings:
        merged2 = {y: x for x, y in matching}
        size = na + len(extras1) + len(extras2) - len(matching)
        if size > size_bound:
            continue
        # element layout: shared A-image, then extras1, then unmatched extras2
        g1 = [0] * b1.size
        for i, x in enumerate(e1.map):
            g1[x] = i
        for j, x in enumerate(extras1):
            g1[x] = na + j
        g2 = [0] * b2.size
        for i, x in enumerate(e2.map):
            g2[x] = i
        nxt = na + len(extras1)
        for y in extras2:
            if y in merged2:
                g2[y] = g1[merged2[y]]
            else:
                g2[y] = nxt
                nxt += 1
        g1 = tuple(g1)
        g2 = tuple(g2)
        img1 = set(g1)
        img2 = set(g2)
        overlap = img1 & img2
        rels1, funs1, consts1 = _push_tables(b1, g1, size)
        rels2, funs2, consts2 = _push_tables(b2, g2, size)
        # the two sides must agree wherever both speak
        ok = all(consts1[n] == consts2[n] for n in consts1)
        for name, arity in a.sig.relations:
            if not ok:
                break
            for t in itertools.product(sorted(overlap), repeat=arity):
                if (t in rels1[name]) != (t in rels2[name]):
                    ok = False
                    break
        for name, arity in a.sig.functions:
            if not ok:
                break
            for t in itertools.product(sorted(overlap), repeat=arity):
                if funs1[name].get(t) != funs2[name].get(t):
                    ok = False
                    break
        if not ok:
            continue

        free_rel: list[tuple[str, tuple]] = []
        for name, arity in a.sig.relations:
            for t in itertools.product(range(size), repeat=arity):
                if not (set(t) <= img1) and not (set(t) <= img2):
                    free_rel.append((name, t))
        free_fun: list[tuple[str, tuple]] = []
        for name, arity in a.sig.functions:
            for t in itertools.product(range(size), repeat=arity):
                if not (set(t) <= img1) and not (set(t) <= img2):
                    free_fun.append((name, t))

        base_rels = {name: rels1[name] | rels2[name] for name, _ in a.sig.relations}
        base_funs = {name: funs1[name] | funs2[name] for name, _ in a.sig.functions}

        for rel_bits in itertools.product((0, 1), repeat=len(free_rel)):
            for fun_vals in itertools.product(range(size), repeat=len(free_fun)):
                spent += 1
                if spent > budget:
                    raise BudgetExceeded(f"amalgam search exceeded {budget} candidates")
                rels = {n: set(v) for n, v in base_rels.items()}
                for bit, (name, t) in zip(rel_bits, free_rel):
                    if bit:
                        rels[name].add(t)
                funs = {n: dict(v) for n, v in base_funs.items()}
                for val, (name, t) in zip(fun_vals, free_fun):
                    funs[name][t] = val
                cand = FiniteStructure(a.sig, size, rels, funs, consts1)
                if validate(cand):
                    continue
                if not class_test(cand):
                    continue
                if embedding_violations(b1, cand, g1) or embedding_violations(b2, cand, g2):
                    continue
                return AmalgamRecord(cand, Embedding(b1, cand, g1), Embedding(b2, cand, g2))
    return None
