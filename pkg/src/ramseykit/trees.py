"""Finite trees of natural-number sequences in four signature dialects.

Nodes are tuples of naturals; ``()`` is the root.  The dialects interpret:

=========  =============================================================
``L0``     prefix order ``below``, meet function ``meet``, strict ``lex``
``L1``     L0 plus the length comparison ``shorter``
``Ls``     L0 plus level predicates ``P0 .. Pm``
``Lt``     ``below`` and ``lex`` only (no meet function)
=========  =============================================================

``below`` is reflexive, ``lex`` is the strict lexicographic order extending
the prefix order (a prefix precedes its extensions) and serves as the
designated order everywhere.  Node sets for dialects carrying ``meet`` must
be closed under pairwise longest-common-prefix.

CLI shorthand ``k^<=n@dialect`` names the full ``k``-branching tree of height
``n``; serialized trees carry a label table with literals like ``0.1.0``
(``e`` for the root).
"""

import functools
import itertools
import re
from dataclasses import dataclass

from .core import FiniteStructure, Signature
from .errors import MeetNotClosed, ParseError

TreeNode = tuple[int, ...]

DIALECTS = ("L0", "L1", "Ls", "Lt")


def meet(a: TreeNode, b: TreeNode) -> TreeNode:
    """Longest common prefix."""
    out = []
    for x, y in zip(a, b):
        if x != y:
            break
        out.append(x)
    return tuple(out)


def level(a: TreeNode) -> int:
    return len(a)


def lex_cmp(a: TreeNode, b: TreeNode) -> int:
    """-1/0/1; prefixes precede their extensions."""
    for x, y in zip(a, b):
        if x < y:
            return -1
        if x > y:
            return 1
    if len(a) == len(b):
        return 0
    return -1 if len(a) < len(b) else 1


_lex_key = functools.cmp_to_key(lex_cmp)


def sort_nodes(nodes) -> tuple[TreeNode, ...]:
    return tuple(sorted({tuple(nd) for nd in nodes}, key=_lex_key))


def node_label(nd: TreeNode) -> str:
    return "e" if not nd else ".".join(str(x) for x in nd)


def parse_node_label(text: str) -> TreeNode:
    if text == "e":
        return ()
    try:
        return tuple(int(p) for p in text.split("."))
    except ValueError:
        raise ParseError(f"bad tree node literal {text!r}") from None


def tree_signature(dialect: str, level_bound: int = 0) -> Signature:
    if dialect not in DIALECTS:
        raise ParseError(f"unknown tree dialect {dialect!r}")
    rels = [("below", 2), ("lex", 2)]
    funs = []
    if dialect in ("L0", "L1", "Ls"):
        funs.append(("meet", 2))
    if dialect == "L1":
        rels.append(("shorter", 2))
    if dialect == "Ls":
        rels.extend((f"P{i}", 1) for i in range(level_bound + 1))
    return Signature(tuple(rels), tuple(funs), (), "lex")


@dataclass(frozen=True)
class TreeStructure:
    """A finite node set together with its structure over one dialect.

    ``level_mode`` records how ``meet``/``P_n`` were interpreted: ``ambient``
    (longest common prefix / sequence length — the truncation semantics) or
    ``intrinsic`` (greatest lower bound / height inside the node set — the
    semantics of tree expansions).
    """

    nodes: tuple[TreeNode, ...]
    dialect: str
    structure: FiniteStructure
    level_mode: str = "ambient"
    level_bound: int | None = None

    @property
    def size(self) -> int:
        return len(self.nodes)

    def id_of(self, nd: TreeNode) -> int:
        return self.nodes.index(tuple(nd))

    def node_of(self, i: int) -> TreeNode:
        return self.nodes[i]


def tree_structure(nodes, dialect: str, level_bound: int | None = None) -> TreeStructure:
    """Tree structure on a node set with the ambient interpretations.

    Raises :class:`MeetNotClosed` when the dialect carries ``meet`` and the
    set is not closed under longest common prefix.
    """
    ns = sort_nodes(nodes)
    has_meet = dialect in ("L0", "L1", "Ls")
    if has_meet:
        for a, b in itertools.combinations(ns, 2):
            if meet(a, b) not in ns:
                raise MeetNotClosed(f"{a} and {b} meet at {meet(a, b)}, not in the node set")
    if dialect == "Ls" and level_bound is None:
        level_bound = max((len(nd) for nd in ns), default=0)
    sig = tree_signature(dialect, level_bound or 0)
    n = len(ns)
    idx = {nd: i for i, nd in enumerate(ns)}
    below = frozenset((i, j) for i in range(n) for j in range(n)
                      if ns[j][:len(ns[i])] == ns[i])
    lex = frozenset((i, j) for i in range(n) for j in range(n) if i < j)
    rels = {"below": below, "lex": lex}
    funs = {}
    if has_meet:
        funs["meet"] = {(i, j): idx[meet(ns[i], ns[j])] for i in range(n) for j in range(n)}
    if dialect == "L1":
        rels["shorter"] = frozenset((i, j) for i in range(n) for j in range(n)
                                    if len(ns[i]) < len(ns[j]))
    if dialect == "Ls":
        for l in range(level_bound + 1):
            rels[f"P{l}"] = frozenset((i,) for i in range(n) if len(ns[i]) == l)
    s = FiniteStructure(sig, n, rels, funs, {}, tuple(node_label(nd) for nd in ns))
    return TreeStructure(ns, dialect, s, "ambient", level_bound)


def build_tree(k: int, n: int, dialect: str) -> TreeStructure:
    """The full tree ``k^{<=n}``: all sequences over ``0..k-1`` of length
    at most ``n``."""
    if k < 1 or n < 0:
        raise ParseError(f"bad tree shape {k}^<={n}")
    nodes = [()]
    for ln in range(1, n + 1):
        nodes.extend(itertools.product(range(k), repeat=ln))
    t = tree_structure(nodes, dialect, level_bound=n if dialect == "Ls" else None)
    return t


_SHORTHAND = re.compile(r"^(\d+)\^<=(\d+)@(L0|L1|Ls|Lt)$")


def parse_tree_shorthand(text: str) -> TreeStructure | None:
    """``k^<=n@dialect`` or None when the text is not in shorthand form."""
    m = _SHORTHAND.match(text.strip())
    if not m:
        return None
    return build_tree(int(m.group(1)), int(m.group(2)), m.group(3))


def nodes_from_structure(s: FiniteStructure) -> tuple[TreeNode, ...]:
    """Recover node literals from a serialized tree's label table."""
    if s.labels is None:
        raise ParseError("structure carries no tree label table")
    return tuple(parse_node_label(lab) for lab in s.labels)
