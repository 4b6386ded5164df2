"""Arrow instances: bad-coloring search, homogeneous copies, finite Ramsey.

``arrow_holds(c, b, a, k)`` decides whether every ``k``-coloring of the
``a``-substructures of ``c`` admits a copy of ``b`` whose ``a``-substructures
are monochromatic.  The search walks partial colorings of the ``a``-copies in
a fixed order with two sound cuts (a fully colored monochromatic ``b``-copy
kills a branch; a branch where every ``b``-copy is already bichromatic is a
witness) and symmetry reduction by canonical color numbering.  Negative
verdicts return the first completed bad coloring and are re-verified against
the homogeneous-copy finder before being reported.
"""

import time
from dataclasses import dataclass

from .closure import Copy
from .core import FiniteStructure
from .errors import BudgetExceeded, ColoringIncomplete, VerificationFailed
from .iso import enumerate_copies
from . import kernels
from .kernels.encode import ARROW_BUDGET, ARROW_FAILS, flatten_members

DEFAULT_BUDGET = 10**8
MAX_COLORS = 62  # color masks live in a 64-bit word


@dataclass(frozen=True, eq=False)
class Coloring:
    """Total assignment of colors ``0..k-1`` to the pattern-copies of a host."""

    host: FiniteStructure
    pattern: FiniteStructure
    assignment: dict[frozenset[int], int]
    k: int

    def color_of(self, copy) -> int:
        key = copy.element_set if isinstance(copy, Copy) else frozenset(copy)
        return self.assignment[key]

    def check_total(self) -> list[Copy]:
        """The host's pattern-copies; raises unless every one is colored."""
        copies = enumerate_copies(self.host, self.pattern)
        for c in copies:
            col = self.assignment.get(c.element_set)
            if col is None:
                raise ColoringIncomplete(f"copy {c.elements} has no color")
            if not (0 <= col < self.k):
                raise ColoringIncomplete(f"copy {c.elements} colored {col} outside 0..{self.k - 1}")
        return copies


@dataclass(frozen=True)
class ArrowStats:
    nodes: int
    seconds: float


@dataclass(frozen=True)
class ArrowVerdict:
    holds: bool
    witness: Coloring | None
    stats: ArrowStats


def find_homogeneous(coloring: Coloring, b: FiniteStructure,
                     within: frozenset[int] | None = None) -> Copy | None:
    """The lex-least copy of ``b`` in the host all of whose pattern-copies
    share one color, or None.  ``within`` restricts to copies inside an
    element set."""
    a_copies = coloring.check_total()
    colored = [(c.element_set, coloring.assignment[c.element_set]) for c in a_copies]
    for bc in enumerate_copies(coloring.host, b):
        elems = bc.element_set
        if within is not None and not elems <= within:
            continue
        seen = {col for aset, col in colored if aset <= elems}
        if len(seen) <= 1:
            return bc
    return None


def arrow_holds(c: FiniteStructure, b: FiniteStructure, a: FiniteStructure,
                k: int, budget: int = DEFAULT_BUDGET) -> ArrowVerdict:
    """Decide ``c -> (b)^a_k`` exhaustively.

    Raises :class:`BudgetExceeded` (never a wrong verdict) when the node
    budget runs out.  ``holds=False`` verdicts carry a re-verified witness.
    """
    if not (1 <= k <= MAX_COLORS):
        raise ColoringIncomplete(f"k must be in 1..{MAX_COLORS}, got {k}")
    start = time.monotonic()
    a_copies = enumerate_copies(c, a)
    b_copies = enumerate_copies(c, b)
    index_of = {cp.element_set: i for i, cp in enumerate(a_copies)}
    members = []
    for bc in b_copies:
        inside = [index_of[cp.element_set] for cp in a_copies if cp.element_set <= bc.element_set]
        members.append(tuple(sorted(inside)))
    starts, items = flatten_members(members)
    status, colors, nodes = kernels.arrow_search(k, len(a_copies), starts, items, budget)
    stats = ArrowStats(nodes, time.monotonic() - start)
    if status == ARROW_BUDGET:
        raise BudgetExceeded(f"arrow search exceeded {budget} nodes")
    if status == ARROW_FAILS:
        witness = Coloring(c, a, {cp.element_set: colors[i] for i, cp in enumerate(a_copies)}, k)
        if find_homogeneous(witness, b) is not None:
            raise VerificationFailed("bad-coloring witness admits a homogeneous copy")
        return ArrowVerdict(False, witness, stats)
    return ArrowVerdict(True, None, stats)


def arrow_oracle(c: FiniteStructure, b: FiniteStructure, a: FiniteStructure,
                 k: int) -> tuple[bool, Coloring | None]:
    """Naive full enumeration of all ``k^copies`` colorings; test oracle."""
    import itertools
    a_copies = enumerate_copies(c, a)
    b_copies = enumerate_copies(c, b)
    members = []
    for bc in b_copies:
        members.append([i for i, cp in enumerate(a_copies) if cp.element_set <= bc.element_set])
    for colors in itertools.product(range(k), repeat=len(a_copies)):
        homogeneous = False
        for m in members:
            if len({colors[i] for i in m}) <= 1:
                homogeneous = True
                break
        if not homogeneous:
            witness = Coloring(c, a, {cp.element_set: colors[i] for i, cp in enumerate(a_copies)}, k)
            return False, witness
    return True, None


def ramsey_homogeneous_levels(n: int, m: int, coloring, t: int) -> tuple[int, ...] | None:
    """A size-``t`` subset of ``0..n-1`` all of whose ``m``-subsets share a
    color, or None; the finite shadow of Ramsey's theorem used to thin out
    tree levels.  ``coloring`` maps frozen ``m``-subsets to colors."""
    import itertools
    if callable(coloring):
        color = coloring
    else:
        color = lambda s: coloring[s]
    for subset in itertools.combinations(range(n), t):
        colors = {color(frozenset(s)) for s in itertools.combinations(subset, m)}
        if len(colors) <= 1:
            return subset
    return None
