"""Tree expansions and the fill/extract constructions.

``expand_to_Ls`` equips a bare tree (no meet function, no levels) with its
*intrinsic* structure: the meet of two nodes is their greatest common lower
bound inside the node set, and a node's level is its height — the number of
its strict predecessors inside the set — rather than its ambient sequence
length.  Downward-closed node sets make the two readings coincide.

``fill_m`` rebuilds a level-decorated tree ``D`` inside the smallest full
tree ``k^{<=m}`` that accommodates it, marks the copy, and completes it
downward from a set ``Y`` of depth-``m`` leaves chosen above the copy's
maximal nodes; the completed tree always lies in the class tested by
``in_Kmu``.  ``extract_S`` recovers the marked copy from the completed tree,
so ``extract_S(fill_m(D, m))`` is isomorphic to ``D``.
"""

import itertools
from dataclasses import dataclass

from .closure import Copy, copy_on
from .core import FiniteStructure
from .errors import (
    LevelExceedsM,
    MeetNotClosed,
    NotInTreeAge,
    NotMeetClosed,
    OutOfUniverse,
    SignatureMismatch,
)
from .iso import enumerate_embeddings
from .trees import (
    TreeNode,
    TreeStructure,
    build_tree,
    sort_nodes,
    tree_signature,
    tree_structure,
)


def _is_prefix(a: TreeNode, b: TreeNode) -> bool:
    return b[: len(a)] == a


def intrinsic_heights(nodes) -> dict[TreeNode, int]:
    """Height of each node: count of its strict predecessors in the set."""
    ns = list(nodes)
    return {v: sum(1 for u in ns if u != v and _is_prefix(u, v)) for v in ns}


def intrinsic_glb(nodes, a: TreeNode, b: TreeNode) -> TreeNode | None:
    """Greatest common lower bound inside the set, or None.

    Common lower bounds of two sequences are prefixes of either, hence form a
    chain; the longest one is the bound.
    """
    best = None
    for u in nodes:
        if _is_prefix(u, a) and _is_prefix(u, b):
            if best is None or len(u) > len(best):
                best = u
    return best


def expand_to_Ls(d: TreeStructure) -> TreeStructure:
    """Intrinsic level-and-meet expansion of a bare (``Lt``) tree.

    Raises :class:`MeetNotClosed` when some pair of nodes has no common
    lower bound in the set (the intrinsic meet is then undefined).
    """
    if d.dialect != "Lt":
        raise SignatureMismatch(f"expand_to_Ls expects an Lt tree, got {d.dialect}")
    ns = d.nodes
    n = len(ns)
    hts = intrinsic_heights(ns)
    glb = {}
    for a, b in itertools.combinations_with_replacement(ns, 2):
        g = intrinsic_glb(ns, a, b)
        if g is None:
            raise MeetNotClosed(f"{a} and {b} have no common lower bound in the node set")
        glb[(a, b)] = g
        glb[(b, a)] = g
    bound = max(hts.values(), default=0)
    sig = tree_signature("Ls", bound)
    idx = {nd: i for i, nd in enumerate(ns)}
    rels = {
        "below": frozenset((i, j) for i in range(n) for j in range(n)
                           if _is_prefix(ns[i], ns[j])),
        "lex": frozenset((i, j) for i in range(n) for j in range(n) if i < j),
    }
    for l in range(bound + 1):
        rels[f"P{l}"] = frozenset((i,) for i in range(n) if hts[ns[i]] == l)
    funs = {"meet": {(i, j): idx[glb[(ns[i], ns[j])]] for i in range(n) for j in range(n)}}
    s = FiniteStructure(sig, n, rels, funs, {}, d.structure.labels)
    return TreeStructure(ns, "Ls", s, "intrinsic", bound)


def _upward_depths(nodes) -> dict[TreeNode, int]:
    """Longest strict chain (edge count) from each node up to a maximal one."""
    ns = sorted(nodes, key=len, reverse=True)
    depth = {}
    for v in ns:
        above = [depth[u] for u in depth if u != v and _is_prefix(v, u)]
        depth[v] = 1 + max(above) if above else 0
    return depth


def _level_embedding(nodes, m: int) -> dict[TreeNode, TreeNode] | None:
    """A prefix/lex preserving-and-reflecting map of the node set into
    ``omega^{<=m}``, or None when none exists.

    Levels are assigned as ``m - (longest chain upward)``; the image is built
    parent by parent with fresh branch indices in lex order.  A node forced
    to level 0 must be the unique minimum (the root of the ambient tree is
    unique), which is exactly what can fail.
    """
    ns = sort_nodes(nodes)
    if not ns:
        return None
    lam = {v: m - d for v, d in _upward_depths(ns).items()}
    if any(l < 0 for l in lam.values()):
        return None
    parent: dict[TreeNode, TreeNode | None] = {}
    for v in ns:
        preds = [u for u in ns if u != v and _is_prefix(u, v)]
        parent[v] = max(preds, key=len) if preds else None
    roots = [v for v in ns if parent[v] is None]
    if sum(1 for v in ns if lam[v] == 0) > 1:
        return None
    if any(lam[v] == 0 for v in ns) and not (len(roots) == 1 and lam[roots[0]] == 0):
        return None

    image: dict[TreeNode, TreeNode] = {}

    def place(children, base: TreeNode):
        for j, v in enumerate(children):  # children already in lex order
            img = base + (j,) + (0,) * (lam[v] - len(base) - 1)
            image[v] = img
            place([u for u in ns if parent[u] == v], img)

    if len(roots) == 1 and lam[roots[0]] == 0:
        r = roots[0]
        image[r] = ()
        place([u for u in ns if parent[u] == r], ())
    else:
        place(roots, ())
    return image


def in_Kmu(t: TreeStructure, m: int) -> bool:
    """Membership in the class of bare subtrees of ``omega^{<=m}`` of height
    ``m`` all of whose maximal nodes have height ``m``.

    Heights are intrinsic.  Besides the two height conditions the node set
    must actually re-embed into ``omega^{<=m}``; the witness map is built and
    verified rather than assumed.
    """
    ns = t.nodes
    if not ns:
        return False
    hts = intrinsic_heights(ns)
    if max(hts.values()) != m:
        return False
    for v in ns:
        if not any(u != v and _is_prefix(v, u) for u in ns):
            if hts[v] != m:
                return False
    image = _level_embedding(ns, m)
    if image is None:
        return False
    for a in ns:
        for b in ns:
            fa, fb = image[a], image[b]
            if _is_prefix(fa, fb) != _is_prefix(a, b):
                return False
            if len(fa) > m or len(fb) > m:
                return False
    return True


@dataclass(frozen=True)
class FillResult:
    """Output of :func:`fill_m`."""

    k: int
    m: int
    d_prime: Copy                      # the chosen copy inside k^{<=m}
    Y: tuple[TreeNode, ...]            # depth-m leaves, one above each maximal node
    filled: TreeStructure              # Lt tree on the downward closure of Y
    psi_marks: tuple[TreeNode, ...]    # node set the extraction formula carves out


def with_level_bound(d: FiniteStructure, m: int) -> FiniteStructure:
    """Rebuild ``d`` over the canonical level signature ``P0..Pm``."""
    have_rels = dict(d.sig.relations)
    have_funs = dict(d.sig.functions)
    if have_rels.get("below") != 2 or have_rels.get("lex") != 2 or have_funs.get("meet") != 2:
        raise SignatureMismatch("fill_m expects a level-decorated tree signature "
                                "(below, lex, meet, P0..)")
    for name, arity in d.sig.relations:
        if name.startswith("P"):
            if arity != 1 or not name[1:].isdigit():
                raise SignatureMismatch(f"unexpected relation {name!r}")
            if int(name[1:]) > m and d.rels[name]:
                raise LevelExceedsM(f"{name} is nonempty but the target height is {m}")
        elif name not in ("below", "lex"):
            raise SignatureMismatch(f"unexpected relation {name!r}")
    sig = tree_signature("Ls", m)
    rels = {"below": d.rels["below"], "lex": d.rels["lex"]}
    for l in range(m + 1):
        rels[f"P{l}"] = d.rels.get(f"P{l}", frozenset())
    return FiniteStructure(sig, d.size, rels, {"meet": d.funs["meet"]}, {}, d.labels)


def fill_m(d: FiniteStructure, m: int) -> FillResult:
    """Embed the level-decorated tree ``d`` into the least full tree
    ``k^{<=m}`` containing a copy, and complete the copy to a member of
    the height-``m`` class tested by :func:`in_Kmu`.

    ``k`` is the least branching that admits a copy (at most ``|d|``
    suffices for members of the full trees' age); the copy is the
    lexicographically least one; ``Y`` picks, for each maximal node of the
    copy, the lex-least depth-``m`` leaf above it.  A leaf majorizes at most
    one maximal node (two would be comparable), so this ``Y`` is the
    lex-least set of the prescribed size whether the majorization rule is
    read as a cover or as a matching.
    """
    leveled = with_level_bound(d, m)  # raises LevelExceedsM past height m
    k_found = None
    emb = None
    host = None
    for k in range(1, max(2, leveled.size + 1)):
        host = build_tree(k, m, "Ls")
        found = enumerate_embeddings(leveled, host.structure, limit=1)
        if found:
            k_found, emb = k, found[0]
            break
    if emb is None:
        raise NotInTreeAge(f"no copy of the structure in any k^<={m} for k <= {leveled.size}")
    image_ids = tuple(sorted(emb.map))
    d_prime = copy_on(host.structure, image_ids)
    image_nodes = sort_nodes(host.node_of(i) for i in image_ids)
    maximal = [v for v in image_nodes
               if not any(u != v and _is_prefix(v, u) for u in image_nodes)]
    Y = tuple(sort_nodes(v + (0,) * (m - len(v)) for v in maximal))
    closed = sort_nodes(y[:i] for y in Y for i in range(len(y) + 1))
    filled = tree_structure(closed, "Lt")
    return FillResult(k_found, m, d_prime, Y, filled, image_nodes)


def extract_S(d_t: TreeStructure, psi_marks) -> FiniteStructure:
    """The level-decorated substructure of ``expand_to_Ls(d_t)`` induced on
    the marked nodes.

    Raises :class:`NotMeetClosed` when the marks are not closed under the
    expansion's meet.
    """
    marks = sort_nodes(psi_marks)
    for v in marks:
        if v not in d_t.nodes:
            raise OutOfUniverse(f"mark {v} is not a node of the tree")
    exp = expand_to_Ls(d_t)
    mark_set = set(marks)
    for a, b in itertools.combinations(marks, 2):
        g = intrinsic_glb(d_t.nodes, a, b)
        if g not in mark_set:
            raise NotMeetClosed(f"marks miss the meet {g} of {a} and {b}")
    ids = tuple(exp.id_of(v) for v in marks)
    from .core import induced_substructure
    return induced_substructure(exp.structure, tuple(sorted(ids)))
