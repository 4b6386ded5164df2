"""Complete quantifier-free types and their isolating formulas.

The type of a tuple is computed from the substructure it generates: the
canonical form of that substructure plus the tuple's positions inside its
increasing enumeration.  Two tuples (possibly in different structures over
the same signature) have equal types exactly when the position-respecting
map between their generated substructures extends to an isomorphism, which
makes equality decidable and hashable.

``isolating_formula`` turns a type into a single conjunction of literals
that defines it inside every structure of the age: the full diagram of the
generated substructure with each element replaced by a canonical defining
term over the tuple variables.
"""

from dataclasses import dataclass, field

from .closure import closure_elements, closure_with_terms, copy_on
from .core import FiniteStructure, check_elements
from .errors import ArityMismatch
from .formulas import (
    App,
    Const,
    Literal,
    QfFormula,
    Var,
    conj,
    eq,
    eval_formula,
    rel,
)
from .iso import canonical_tuple_key


@dataclass(frozen=True)
class QfType:
    """Canonical complete quantifier-free type of a tuple.

    ``positions`` are 0-based indices into the increasing enumeration of
    ``canonical_sub`` (repeats allowed; the tuple need not be increasing).
    """

    key: str
    positions: tuple[int, ...]
    canonical_sub: FiniteStructure = field(compare=False, repr=False)

    @property
    def tuple_length(self) -> int:
        return len(self.positions)

    @property
    def closure_size(self) -> int:
        return self.canonical_sub.size

    def short_id(self) -> str:
        import hashlib
        h = hashlib.sha256((self.key + repr(self.positions)).encode()).hexdigest()[:10]
        return f"t{h}"


def qf_type(s: FiniteStructure, a) -> QfType:
    """The complete quantifier-free type of ``a`` in ``s``."""
    a = tuple(a)
    check_elements(s, a)
    elems = closure_elements(s, a)
    copy = copy_on(s, elems)
    pos_in_copy = {e: i for i, e in enumerate(copy.elements)}
    positions = tuple(pos_in_copy[x] for x in a)
    key, canon_pos, canon = canonical_tuple_key(copy.pattern, positions)
    return QfType(key, canon_pos, canon)


def realized_types(s: FiniteStructure, length: int) -> dict[QfType, list[tuple[int, ...]]]:
    """All types of ``length``-tuples realized in ``s``, with realizations
    in lexicographic order."""
    import itertools
    out: dict[QfType, list[tuple[int, ...]]] = {}
    for a in itertools.product(s.universe, repeat=length):
        out.setdefault(qf_type(s, a), []).append(a)
    return out


def _term_size(t) -> int:
    if isinstance(t, App):
        return 1 + sum(_term_size(x) for x in t.args)
    return 1


def _literal_cost(lit: Literal) -> int:
    atom = lit.atom
    if hasattr(atom, "terms"):
        return sum(_term_size(t) for t in atom.terms)
    return _term_size(atom.left) + _term_size(atom.right)


def isolating_formula(q: QfType) -> QfFormula:
    """A quantifier-free conjunction defining ``q`` inside the age.

    The formula names every element of the generated substructure by a term
    in the tuple variables (recorded during the closure fixpoint) and then
    states the full diagram: pairwise distinctness, every relation literal
    positive or negative, every function-graph equation, and the constant
    identifications.  A tuple of an age member satisfies it iff its type is
    ``q``; exactly ``len(positions)`` free variables occur.
    """
    d = q.canonical_sub
    n = len(q.positions)
    elements, terms = closure_with_terms(d, q.positions)
    if len(elements) != d.size:
        raise ArityMismatch("type tuple does not generate its closure structure")

    lits: list[Literal] = []
    for i, e in enumerate(q.positions):
        t = terms[e]
        if not (isinstance(t, Var) and t.index == i + 1):
            lits.append(eq(Var(i + 1), t))
    import itertools
    for name, arity in d.sig.relations:
        table = d.rels[name]
        for tup in itertools.product(range(d.size), repeat=arity):
            lits.append(rel(name, *(terms[x] for x in tup), positive=tup in table))
    for e1, e2 in itertools.combinations(range(d.size), 2):
        lits.append(eq(terms[e1], terms[e2], positive=False))
    for name, arity in d.sig.functions:
        table = d.funs[name]
        for tup in itertools.product(range(d.size), repeat=arity):
            lits.append(eq(App(name, tuple(terms[x] for x in tup)), terms[table[tup]]))
    for name in d.sig.constants:
        lits.append(eq(Const(name), terms[d.consts[name]]))

    lits.sort(key=_literal_cost)  # cheap, selective literals first: fail fast
    return conj(lits, arity=n)


@dataclass(frozen=True)
class DeltaType:
    """Satisfaction vector of a concrete tuple against an ordered formula list."""

    delta: tuple[QfFormula, ...]
    bits: tuple[bool, ...]

    def __post_init__(self):
        if len(self.delta) != len(self.bits):
            raise ArityMismatch("bits length differs from formula list length")

    def __str__(self):
        return "".join("1" if b else "0" for b in self.bits)


def delta_type(s: FiniteStructure, a, delta) -> DeltaType:
    """Evaluate every formula of ``delta`` on ``a`` (arities must match)."""
    delta = tuple(delta)
    bits = tuple(eval_formula(phi, s, a) for phi in delta)
    return DeltaType(delta, bits)


def matching_delta_bits(s: FiniteStructure, a, delta) -> tuple[tuple[int, bool], ...]:
    """Bits of the arity-matching formulas only, tagged with their indices.

    Formulas whose arity differs from ``len(a)`` are skipped; this is how
    every operation that ranges over mixed tuple lengths consumes a mixed
    formula list.
    """
    a = tuple(a)
    out = []
    for i, phi in enumerate(delta):
        if phi.arity == len(a):
            out.append((i, eval_formula(phi, s, a)))
    return tuple(out)
