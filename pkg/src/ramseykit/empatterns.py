"""Indexed families, indiscernibility, EM-patterns and basedness checks.

An indexed family assigns to every element of an index structure a
same-length tuple of a target structure.  Indiscernibility asks that
index tuples of equal quantifier-free type carry parameter tuples of equal
formula-list type; the EM-pattern records, per realized index type, the
formula polarities that *all* realizations agree on (the all-quantified
reading survives even for non-indiscernible families, where the
exists-quantified variant need not be consistent, so only this one is
exposed).

Formulas apply to a concatenated parameter tuple only when arities match;
mixed-arity formula lists are filtered per tuple length throughout.
"""

import itertools
from dataclasses import dataclass

from .core import FiniteStructure
from .errors import LengthMismatch, SignatureMismatch
from .formulas import eval_formula, eval_formula_over
from .qftypes import QfType, qf_type


@dataclass(frozen=True)
class IndexedFamily:
    """Tuples of ``target`` indexed by the universe of ``index``."""

    index: FiniteStructure
    target: FiniteStructure
    assign: dict[int, tuple[int, ...]]

    def __post_init__(self):
        missing = [i for i in self.index.universe if i not in self.assign]
        if missing:
            raise LengthMismatch(f"family misses index elements {missing}")
        lengths = {len(t) for t in self.assign.values()}
        if len(lengths) > 1:
            raise LengthMismatch(f"family tuples have mixed lengths {sorted(lengths)}")
        object.__setattr__(self, "assign",
                           {i: tuple(t) for i, t in self.assign.items()})

    @property
    def tuple_length(self) -> int:
        return len(next(iter(self.assign.values()))) if self.assign else 1

    def params(self, idx_tuple) -> tuple[int, ...]:
        out = []
        for i in idx_tuple:
            out.extend(self.assign[i])
        return tuple(out)


def identity_family(index: FiniteStructure, target: FiniteStructure) -> IndexedFamily:
    return IndexedFamily(index, target, {i: (i,) for i in index.universe})


def _type_classes(index: FiniteStructure, length: int,
                  cache: dict | None = None) -> dict[QfType, list[tuple[int, ...]]]:
    out: dict[QfType, list[tuple[int, ...]]] = {}
    for a in itertools.product(index.universe, repeat=length):
        if cache is not None and a in cache:
            q = cache[a]
        else:
            q = qf_type(index, a)
            if cache is not None:
                cache[a] = q
        out.setdefault(q, []).append(a)
    return out


@dataclass(frozen=True)
class EmPattern:
    """Per realized index type: the formula polarities all realizations share.

    ``entries[q]`` lists ``(formula_index, polarity)`` for every
    arity-matching formula on which *every* realization of ``q`` agrees.
    """

    entries: dict[QfType, tuple[tuple[int, bool], ...]]
    max_len: int

    def for_type(self, q: QfType):
        return self.entries.get(q)


def _bits_by_tuple(family: IndexedFamily, delta, n: int):
    """For every length-``n`` index tuple: the arity-matching formula bits,
    as ``(matching_indices, {tuple: bits})`` with one kernel pass per formula."""
    tuples = list(itertools.product(family.index.universe, repeat=n))
    params = [family.params(t) for t in tuples]
    want = n * family.tuple_length
    matching = [i for i, phi in enumerate(delta) if phi.arity == want]
    columns = [eval_formula_over(delta[i], family.target, params) for i in matching]
    rows = {t: tuple(col[j] for col in columns) for j, t in enumerate(tuples)}
    return matching, rows


def em_pattern(family: IndexedFamily, delta, max_len: int = 4) -> EmPattern:
    delta = tuple(delta)
    entries: dict[QfType, tuple[tuple[int, bool], ...]] = {}
    cache: dict = {}
    for n in range(1, max_len + 1):
        matching, rows = _bits_by_tuple(family, delta, n)
        for q, tuples in _type_classes(family.index, n, cache).items():
            agreed = []
            for col, idx in enumerate(matching):
                bit = rows[tuples[0]][col]
                if all(rows[t][col] == bit for t in tuples):
                    agreed.append((idx, bit))
            entries[q] = tuple(agreed)
    return EmPattern(entries, max_len)


@dataclass(frozen=True)
class IndiscernibilityReport:
    indiscernible: bool
    witness: tuple | None            # (i_tuple, j_tuple) with equal type, different bits
    nontrivial: bool                 # i != j  =>  a_i != a_j, reported separately
    trivial_witness: tuple | None = None

    def __bool__(self):
        return self.indiscernible


def is_indiscernible(family: IndexedFamily, delta, max_len: int = 4) -> IndiscernibilityReport:
    """Check Delta-indiscernibility of the family up to ``max_len``.

    True iff all index tuples of equal quantifier-free type (length at most
    ``max_len``) have parameter tuples with equal arity-matching formula
    bits; on failure the first offending pair is the witness.
    """
    delta = tuple(delta)
    witness = None
    cache: dict = {}
    for n in range(1, max_len + 1):
        if witness:
            break
        _, rows = _bits_by_tuple(family, delta, n)
        for q, tuples in _type_classes(family.index, n, cache).items():
            if len(tuples) < 2:
                continue
            first_bits = rows[tuples[0]]
            for t in tuples[1:]:
                if rows[t] != first_bits:
                    witness = (tuples[0], t)
                    break
            if witness:
                break
    nontrivial = True
    trivial_witness = None
    for i, j in itertools.combinations(sorted(family.assign), 2):
        if family.assign[i] == family.assign[j]:
            nontrivial = False
            trivial_witness = (i, j)
            break
    return IndiscernibilityReport(witness is None, witness, nontrivial, trivial_witness)


@dataclass(frozen=True)
class IndConstraint:
    """One implication bundle: all realizations of one index type must agree
    on one formula (vacuous unless the formula's arity matches)."""

    delta_index: int
    length: int
    type_key: str
    realizations: tuple[tuple[int, ...], ...]


def ind_fragment(index: FiniteStructure, delta, max_len: int = 4) -> list[IndConstraint]:
    """The finite fragment of the indiscernibility axioms for ``index``.

    Constraints are grouped by (formula, realized type class); classes with a
    single realization impose nothing and are dropped, so the count grows
    with realized type classes rather than raw tuples.
    """
    delta = tuple(delta)
    out = []
    cache: dict = {}
    for n in range(1, max_len + 1):
        for q, tuples in _type_classes(index, n, cache).items():
            if len(tuples) < 2:
                continue
            for di in range(len(delta)):
                out.append(IndConstraint(di, n, q.key + f"@{q.positions}", tuple(tuples)))
    return out


def constraints_satisfied(constraints, family: IndexedFamily, delta):
    """First violated constraint (or None): some pair of realizations in the
    bundle disagrees on the bundle's formula."""
    delta = tuple(delta)
    for c in constraints:
        phi = delta[c.delta_index]
        if phi.arity != c.length * family.tuple_length:
            continue
        first = eval_formula(phi, family.target, family.params(c.realizations[0]))
        for t in c.realizations[1:]:
            if eval_formula(phi, family.target, family.params(t)) != first:
                return c
    return None


def locally_based_check(family_a: IndexedFamily, family_e: IndexedFamily,
                        delta, max_len: int = 4):
    """Is the second family locally based on the first?

    True iff every tuple from the second family's index (length at most
    ``max_len``) admits a tuple from the first family's index with equal
    quantifier-free type whose parameters have equal arity-matching bits.
    Returns ``(ok, witness_tuple_or_None)``.
    """
    if family_a.index.sig != family_e.index.sig:
        raise SignatureMismatch("index structures disagree on signature")
    if family_a.tuple_length != family_e.tuple_length:
        raise LengthMismatch("families carry tuples of different lengths")
    delta = tuple(delta)
    for n in range(1, max_len + 1):
        seen: dict[tuple, set] = {}
        cache: dict = {}
        _, rows_a = _bits_by_tuple(family_a, delta, n)
        for q, tuples in _type_classes(family_a.index, n, cache).items():
            key_bits = seen.setdefault((q.key, q.positions), set())
            for t in tuples:
                key_bits.add(rows_a[t])
        _, rows_e = _bits_by_tuple(family_e, delta, n)
        for t in itertools.product(family_e.index.universe, repeat=n):
            q = qf_type(family_e.index, t)
            if rows_e[t] not in seen.get((q.key, q.positions), set()):
                return False, t
    return True, None
