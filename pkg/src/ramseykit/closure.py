"""Generated substructures and the closure operator on ordered structures.

``cl`` takes a strictly increasing tuple to the increasing enumeration of the
substructure it generates; the set-level operator it induces is extensive,
idempotent and monotone.  The empty seed generates the constant-closure.
"""

import itertools
from dataclasses import dataclass

from .core import FiniteStructure, check_elements, induced_substructure
from .errors import NoOrder, NotIncreasing


@dataclass(frozen=True)
class Copy:
    """A substructure of ``host`` given by its element set.

    ``elements`` is closed under the host's functions and listed increasingly
    (by the designated order when the host has one, else by element id);
    ``pattern`` is the structure induced on them.
    """

    host: FiniteStructure
    elements: tuple[int, ...]
    pattern: FiniteStructure

    @property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)


def sorted_increasingly(s: FiniteStructure, elems) -> tuple[int, ...]:
    if s.sig.order_symbol is not None:
        return tuple(s.sorted_by_order(elems))
    return tuple(sorted(elems))


def copy_on(s: FiniteStructure, elems) -> Copy:
    elements = sorted_increasingly(s, set(elems))
    return Copy(s, elements, induced_substructure(s, elements))


def closure_elements(s: FiniteStructure, seed) -> frozenset[int]:
    """Least function-and-constant-closed superset of ``seed``."""
    check_elements(s, seed)
    current = set(seed)
    current.update(s.consts.values())
    fresh = True
    while fresh:
        fresh = False
        snapshot = sorted(current)
        for name, arity in s.sig.functions:
            table = s.funs[name]
            for t in itertools.product(snapshot, repeat=arity):
                v = table[t]
                if v not in current:
                    current.add(v)
                    fresh = True
    return frozenset(current)


def generated_substructure(s: FiniteStructure, seed) -> Copy:
    """Smallest substructure of ``s`` containing ``seed``, as a :class:`Copy`."""
    return copy_on(s, closure_elements(s, seed))


def cl(s: FiniteStructure, a) -> tuple[int, ...]:
    """Increasing enumeration of the substructure generated by the strictly
    increasing tuple ``a``.

    Raises :class:`NoOrder` without a designated order and
    :class:`NotIncreasing` when ``a`` is not strictly increasing in it.
    """
    if s.sig.order_symbol is None:
        raise NoOrder("cl needs a designated linear order")
    check_elements(s, a)
    rank = s.order_rank()
    for x, y in zip(a, a[1:]):
        if rank[x] >= rank[y]:
            raise NotIncreasing(f"tuple {tuple(a)} is not strictly increasing")
    return sorted_increasingly(s, closure_elements(s, a))


def closure_set(s: FiniteStructure, elems) -> frozenset[int]:
    """Set-level closure operator ``C``; extensive, idempotent, monotone."""
    if s.sig.order_symbol is None:
        raise NoOrder("closure_set needs a designated linear order")
    return closure_elements(s, elems)


def closure_with_terms(s: FiniteStructure, seed):
    """Closure of ``seed`` with one canonical defining term per element.

    Terms are built over variables ``x1..xn`` naming the seed positions.
    Seed entries claim their element leftmost-first; constants come next;
    every later element records the first function application that produced
    it (functions in signature order, inputs in lex order of discovery
    indices), so term depth is bounded by the fixpoint iteration count.

    Returns ``(elements, terms)`` with ``elements`` in discovery order and
    ``terms`` mapping each element to a :mod:`ramseykit.formulas` term.
    """
    from .formulas import App, Const, Var

    check_elements(s, seed)
    elements: list[int] = []
    terms: dict[int, object] = {}
    for i, e in enumerate(seed):
        if e not in terms:
            terms[e] = Var(i + 1)
            elements.append(e)
    for name in s.sig.constants:
        v = s.consts[name]
        if v not in terms:
            terms[v] = Const(name)
            elements.append(v)
    fresh = True
    while fresh:
        fresh = False
        snapshot = list(elements)
        for name, arity in s.sig.functions:
            table = s.funs[name]
            for idx in itertools.product(range(len(snapshot)), repeat=arity):
                t = tuple(snapshot[i] for i in idx)
                v = table[t]
                if v not in terms:
                    terms[v] = App(name, tuple(terms[x] for x in t))
                    elements.append(v)
                    fresh = True
    return tuple(elements), terms
