"""Embeddings, isomorphism, copy enumeration, canonical forms, ages.

Embeddings preserve *and* reflect every relation, commute with every function
and fix constants.  When both structures carry the designated linear order,
finite structures are rigid: the only candidate isomorphism is the unique
order-preserving bijection, and every copy is the range of exactly one
embedding.  Without an order we fall back to pruned backtracking.
"""

import itertools
from dataclasses import dataclass

from .closure import Copy, closure_elements, copy_on
from .core import FiniteStructure, serialize_structure
from .errors import CanonicalizationLimit, SignatureMismatch
from . import kernels
from .kernels.encode import build_match_plan


@dataclass(frozen=True)
class Embedding:
    source: FiniteStructure
    target: FiniteStructure
    map: tuple[int, ...]

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(self.map))

    def __call__(self, e: int) -> int:
        return self.map[e]


def embedding_violations(a: FiniteStructure, c: FiniteStructure, m) -> list[str]:
    """Why ``m`` fails to be an embedding of ``a`` into ``c`` (empty if it is).

    Deliberately independent of the kernel search path: used to re-verify
    kernel output literal by literal.
    """
    out = []
    if a.sig != c.sig:
        return ["signature mismatch"]
    m = tuple(m)
    if len(m) != a.size:
        return [f"map has length {len(m)}, source size is {a.size}"]
    if any(not (0 <= v < c.size) for v in m):
        return ["map leaves the target universe"]
    if len(set(m)) != len(m):
        out.append("map is not injective")
    for name, arity in a.sig.relations:
        at, ct = a.rels[name], c.rels[name]
        for t in itertools.product(range(a.size), repeat=arity):
            if (t in at) != (tuple(m[x] for x in t) in ct):
                out.append(f"relation {name} not preserved/reflected at {t}")
    for name, arity in a.sig.functions:
        af, cf = a.funs[name], c.funs[name]
        for t in itertools.product(range(a.size), repeat=arity):
            if m[af[t]] != cf[tuple(m[x] for x in t)]:
                out.append(f"function {name} does not commute at {t}")
    for name in a.sig.constants:
        if m[a.consts[name]] != c.consts[name]:
            out.append(f"constant {name} not fixed")
    return out


def is_embedding(a: FiniteStructure, c: FiniteStructure, m) -> bool:
    return not embedding_violations(a, c, m)


def enumerate_embeddings(a: FiniteStructure, c: FiniteStructure,
                         limit: int | None = None) -> list[Embedding]:
    """All embeddings of ``a`` into ``c`` in lexicographic order of their
    image tuples ``(m(0), m(1), ...)``."""
    plan = build_match_plan(a, c)
    return [Embedding(a, c, m) for m in kernels.match_embeddings(plan, limit)]


def _order_bijection(a: FiniteStructure, b: FiniteStructure) -> tuple[int, ...]:
    ra, rb = a.order_rank(), b.order_rank()
    by_rank = [0] * b.size
    for e in b.universe:
        by_rank[rb[e]] = e
    return tuple(by_rank[ra[e]] for e in a.universe)


def find_isomorphism(a: FiniteStructure, b: FiniteStructure) -> Embedding | None:
    """An isomorphism if one exists.

    With a designated order only the unique order-preserving bijection can
    work (ordered finite structures are rigid), so it is tested directly;
    otherwise we search, after cheap cardinality pruning.
    """
    if a.sig != b.sig:
        raise SignatureMismatch("cannot compare structures over different signatures")
    if a.size != b.size:
        return None
    for name, _ in a.sig.relations:
        if len(a.rels[name]) != len(b.rels[name]):
            return None
    if a.sig.order_symbol is not None:
        m = _order_bijection(a, b)
        return Embedding(a, b, m) if is_embedding(a, b, m) else None
    found = enumerate_embeddings(a, b, limit=1)
    return found[0] if found else None


def enumerate_copies(c: FiniteStructure, a: FiniteStructure) -> list[Copy]:
    """The ``a``-substructures of ``c``: embedding ranges deduplicated by
    element set, in lexicographic order of their sorted element tuples."""
    seen = {}
    for e in enumerate_embeddings(a, c):
        key = tuple(sorted(e.map))
        if key not in seen:
            seen[key] = copy_on(c, key)
    return [seen[k] for k in sorted(seen)]


# -- canonical forms -----------------------------------------------------------

_PERM_LIMIT = 8


def relabel(s: FiniteStructure, perm) -> FiniteStructure:
    """Rename elements by ``perm`` (old id -> new id); drops labels."""
    rels = {n: frozenset(tuple(perm[x] for x in t) for t in s.rels[n]) for n, _ in s.sig.relations}
    funs = {n: {tuple(perm[x] for x in t): perm[v] for t, v in s.funs[n].items()}
            for n, _ in s.sig.functions}
    consts = {n: perm[v] for n, v in s.consts.items()}
    return FiniteStructure(s.sig, s.size, rels, funs, consts)


def _table_key(s: FiniteStructure):
    return (
        tuple(tuple(sorted(s.rels[n])) for n, _ in s.sig.relations),
        tuple(tuple(sorted(s.funs[n].items())) for n, _ in s.sig.functions),
        tuple(s.consts[n] for n in s.sig.constants),
    )


def canonical_form(s: FiniteStructure) -> tuple[FiniteStructure, tuple[int, ...]]:
    """A canonical representative of the isomorphism class, with the
    relabeling that produced it.

    Ordered structures get the unique order-respecting relabeling (canonical
    universe = increasing enumeration); otherwise the relabeling minimizing
    the serialized table key is chosen by brute force (sizes up to
    ``_PERM_LIMIT`` only).
    """
    if s.sig.order_symbol is not None:
        rank = s.order_rank()
        return relabel(s, rank), tuple(rank)
    if s.size > _PERM_LIMIT:
        raise CanonicalizationLimit(
            f"unordered canonicalization limited to {_PERM_LIMIT} elements, got {s.size}")
    best = None
    best_perm = None
    for images in itertools.permutations(range(s.size)):
        cand = relabel(s, images)
        key = _table_key(cand)
        if best is None or key < best[0]:
            best = (key, cand)
            best_perm = images
    if best is None:  # size 0
        return s, ()
    return best[1], tuple(best_perm)


def canonical_key(s: FiniteStructure) -> str:
    return serialize_structure(canonical_form(s)[0], include_labels=False)


def canonical_tuple_key(s: FiniteStructure, a) -> tuple[str, tuple[int, ...], FiniteStructure]:
    """Canonical key of the pair (structure, distinguished tuple).

    Two pairs get equal (key, positions) iff some isomorphism of the
    structures carries one tuple to the other position by position.  Returns
    the canonical structure as well.
    """
    a = tuple(a)
    if s.sig.order_symbol is not None:
        canon, perm = canonical_form(s)
        return (serialize_structure(canon, include_labels=False),
                tuple(perm[x] for x in a), canon)
    if s.size > _PERM_LIMIT:
        raise CanonicalizationLimit(
            f"unordered canonicalization limited to {_PERM_LIMIT} elements, got {s.size}")
    best = None
    for images in itertools.permutations(range(s.size)):
        cand = relabel(s, images)
        key = (_table_key(cand), tuple(images[x] for x in a))
        if best is None or key < best[0]:
            best = (key, cand, tuple(images[x] for x in a))
    if best is None:
        return serialize_structure(s, include_labels=False), a, s
    return serialize_structure(best[1], include_labels=False), best[2], best[1]


def age_up_to(s: FiniteStructure, n: int) -> list[FiniteStructure]:
    """Canonical representatives of all substructures generated by at most
    ``n`` elements, sorted by (size, canonical serialization)."""
    reps: dict[str, FiniteStructure] = {}
    seen_sets: set[frozenset[int]] = set()
    for k in range(0, min(n, s.size) + 1):
        for seed in itertools.combinations(s.universe, k):
            elems = closure_elements(s, seed)
            if elems in seen_sets:
                continue
            seen_sets.add(elems)
            sub = copy_on(s, elems).pattern
            key = canonical_key(sub)
            if key not in reps:
                reps[key] = canonical_form(sub)[0]
    return [reps[k] for k in sorted(reps, key=lambda k: (reps[k].size, k))]
