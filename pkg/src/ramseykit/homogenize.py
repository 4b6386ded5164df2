"""Coloring <-> structure encoding and iterated homogenization.

One direction encodes a coloring of pattern-copies as fresh relations on the
index's universe so the identity family carries it faithfully; the other
extracts, from an indexed family, a copy of a requested pattern inside which
the formula-type of the parameters depends only on the quantifier-free type
of the indices.

The extraction processes one realized index type per round.  A round colors
the copies of the type's closure pattern by the formula bits of the
parameters indexed through the type's position sequence, then shrinks the
host to a copy of the pattern homogeneous for that coloring.  Rounds whose
coloring is already constant on the current host shrink nothing: any later
copy inherits the constancy, and deferring strictly enlarges the remaining
rounds' search space (an exact host shrink per round can strand the search
on a finite index that a larger host would serve).  Finite indexes may still
be too small, in which case ``NoHomogeneousCopy`` is raised rather than a
wrong copy returned; successes are re-verified literal by literal.
"""

import itertools
from dataclasses import dataclass, field

from .closure import Copy
from .core import FiniteStructure, Signature
from .empatterns import IndexedFamily, identity_family
from .errors import (
    BudgetExceeded,
    NoHomogeneousCopy,
    TypeNotRealized,
    VerificationFailed,
)
from .formulas import QfFormula, Var, conj, eval_formula_over, rel
from .iso import enumerate_copies, enumerate_embeddings
from .qftypes import QfType, qf_type, realized_types
from .ramsey import Coloring

DEFAULT_BUDGET = 10**8


def sigma_eta(index: FiniteStructure, eta: QfType) -> tuple[int, ...]:
    """The 1-based position sequence recovering a realization of ``eta``
    from the increasing enumeration of its closure.

    For every realization ``j`` of ``eta``, ``cl(j)`` restricted to these
    positions is ``j`` again, which makes realizations correspond one-to-one
    with increasing copies of the closure pattern.
    """
    if not enumerate_embeddings(eta.canonical_sub, index, limit=1):
        raise TypeNotRealized("type's closure pattern has no copy in the index")
    return tuple(p + 1 for p in eta.positions)


def encode_coloring_as_structure(index: FiniteStructure, a: FiniteStructure,
                                 g: Coloring, k: int) -> FiniteStructure:
    """A structure on the index's universe carrying ``g`` as relations.

    Fresh ``|a|``-ary relations ``R1..Rk``: ``Rs`` holds of exactly the
    increasing enumerations of the copies colored ``s-1``.  Tuples that do
    not enumerate a copy of ``a`` satisfy no ``Rs``.
    """
    if g.host != index:
        from .errors import SignatureMismatch
        raise SignatureMismatch("coloring lives on a different host than the index")
    n = a.size
    sig = Signature(relations=tuple((f"R{s}", n) for s in range(1, k + 1)))
    tables: dict[str, set] = {f"R{s}": set() for s in range(1, k + 1)}
    for copy in g.check_total():
        tables[f"R{g.assignment[copy.element_set] + 1}"].add(copy.elements)
    return FiniteStructure(sig, index.size, tables, {}, {})


def color_atoms(k: int, arity: int) -> list[QfFormula]:
    """The atoms ``R1(x1..xn) .. Rk(x1..xn)`` used for round trips."""
    xs = tuple(Var(i + 1) for i in range(arity))
    return [conj([rel(f"R{s}", *xs)], arity=arity) for s in range(1, k + 1)]


@dataclass(frozen=True)
class HomogenizationRequest:
    family: IndexedFamily
    b: FiniteStructure
    delta: tuple[QfFormula, ...]
    types: tuple[QfType, ...] | None = None  # None: all realized in b at the deltas' lengths

    def resolved_types(self) -> tuple[QfType, ...]:
        if self.types is not None:
            return self.types
        width = self.family.tuple_length
        lengths = sorted({phi.arity // width for phi in self.delta
                          if phi.arity % width == 0 and phi.arity >= width})
        out: list[QfType] = []
        for n in lengths:
            out.extend(realized_types(self.b, n).keys())
        # larger closure patterns first: their colorings constrain most
        out.sort(key=lambda q: (-q.closure_size, q.key, q.positions))
        return tuple(out)


@dataclass(frozen=True)
class RoundTrace:
    type_id: str
    tuple_length: int
    closure_size: int
    copies: int
    colors: int
    action: str                 # "shrunk" | "constant" | "skipped-empty"
    host: tuple[int, ...]


@dataclass(frozen=True)
class HomogenizationResult:
    copy: Copy
    per_type: dict[QfType, tuple[tuple[int, bool], ...] | None]
    trace: tuple[RoundTrace, ...] = field(repr=False)


def _round_colors(family: IndexedFamily, eta: QfType, copies, delta):
    """Bit-vector color of each closure-pattern copy, via the type's
    position sequence."""
    width = family.tuple_length
    matching = [i for i, phi in enumerate(delta)
                if phi.arity == eta.tuple_length * width]
    params = []
    for cp in copies:
        j = tuple(cp.elements[p] for p in eta.positions)
        params.append(family.params(j))
    columns = [eval_formula_over(delta[i], family.target, params) for i in matching]
    colors = [tuple(col[x] for col in columns) for x in range(len(copies))]
    return matching, colors


def homogenize(req: HomogenizationRequest, budget: int = DEFAULT_BUDGET) -> HomogenizationResult:
    """Extract a copy of ``req.b`` inside the family's index on which every
    requested type has constant formula bits.

    Raises :class:`NoHomogeneousCopy` when some round admits no homogeneous
    copy inside the current host (the finite index was too small) and
    :class:`BudgetExceeded` when the copy-inspection budget runs out.
    """
    family = req.family
    index = family.index
    b_copies = enumerate_copies(index, req.b)
    if not b_copies:
        raise NoHomogeneousCopy("requested pattern has no copy in the index")
    types = req.resolved_types()
    host = frozenset(index.universe)
    spent = 0
    trace: list[RoundTrace] = []
    copy_cache: dict[str, list] = {}

    for eta in types:
        cache_key = eta.key
        if cache_key not in copy_cache:
            copy_cache[cache_key] = enumerate_copies(index, eta.canonical_sub)
        e_copies = [c for c in copy_cache[cache_key] if c.element_set <= host]
        spent += len(e_copies)
        if spent > budget:
            raise BudgetExceeded(f"homogenization exceeded {budget} copy inspections")
        if not e_copies:
            trace.append(RoundTrace(eta.short_id(), eta.tuple_length, eta.closure_size,
                                    0, 0, "skipped-empty", tuple(sorted(host))))
            continue
        matching, colors = _round_colors(family, eta, e_copies, req.delta)
        palette = sorted(set(colors))
        if len(palette) <= 1:
            trace.append(RoundTrace(eta.short_id(), eta.tuple_length, eta.closure_size,
                                    len(e_copies), len(palette), "constant",
                                    tuple(sorted(host))))
            continue
        by_set = {c.element_set: col for c, col in zip(e_copies, colors)}
        chosen = None
        for bc in b_copies:
            if not bc.element_set <= host:
                continue
            spent += 1
            if spent > budget:
                raise BudgetExceeded(f"homogenization exceeded {budget} copy inspections")
            seen = {col for aset, col in by_set.items() if aset <= bc.element_set}
            if len(seen) <= 1:
                chosen = bc
                break
        if chosen is None:
            raise NoHomogeneousCopy(
                f"no copy of the pattern in the current host is homogeneous for "
                f"the round of type {eta.short_id()} ({len(palette)} colors)")
        host = chosen.element_set
        trace.append(RoundTrace(eta.short_id(), eta.tuple_length, eta.closure_size,
                                len(e_copies), len(palette), "shrunk",
                                tuple(sorted(host))))

    if len(host) == index.size:
        final = b_copies[0]
    else:
        final = next(bc for bc in b_copies if bc.element_set == host)

    per_type = _verify_constancy(family, final, types, req.delta)
    return HomogenizationResult(final, per_type, tuple(trace))


def _verify_constancy(family: IndexedFamily, copy: Copy, types, delta):
    """Literal-by-literal re-check: inside the returned copy, realizations of
    each requested type share one bit vector."""
    index = family.index
    width = family.tuple_length
    per_type: dict[QfType, tuple[tuple[int, bool], ...] | None] = {}
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for eta in types:
        by_len.setdefault(eta.tuple_length, [])
    for n in by_len:
        by_len[n] = [t for t in itertools.product(sorted(copy.elements), repeat=n)]
    for eta in types:
        realizations = [t for t in by_len[eta.tuple_length] if qf_type(index, t) == eta]
        if not realizations:
            per_type[eta] = None
            continue
        matching = [i for i, phi in enumerate(delta)
                    if phi.arity == eta.tuple_length * width]
        params = [family.params(t) for t in realizations]
        columns = [eval_formula_over(delta[i], family.target, params) for i in matching]
        rows = {tuple(col[x] for col in columns) for x in range(len(realizations))}
        if len(rows) != 1:
            raise VerificationFailed(
                f"type {eta.short_id()} has non-constant bits inside the returned copy")
        bits = rows.pop()
        per_type[eta] = tuple(zip(matching, bits))
    return per_type


def roundtrip_check(index: FiniteStructure, a: FiniteStructure, b: FiniteStructure,
                    g: Coloring, k: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Encode ``g``, homogenize against the color atoms, and check the
    extracted copy directly against ``g``."""
    m = encode_coloring_as_structure(index, a, g, k)
    family = identity_family(index, m)
    delta = tuple(color_atoms(k, a.size))
    req = HomogenizationRequest(family, b, delta)
    result = homogenize(req, budget)
    inside = {aset for aset in g.assignment if aset <= result.copy.element_set}
    colors = {g.assignment[aset] for aset in inside}
    return len(colors) <= 1
