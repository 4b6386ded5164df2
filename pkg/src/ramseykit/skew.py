"""Skew self-embeddings of full trees.

``skew_embed(k, n)`` evaluates the recursion

    h_i(()) = ()
    l_m     = max{ len(h_m(eta)) + 1 : eta in k^{<=m} }
    h_{m+1}((t,) + nu) = (t,) + (0,)*((t+1)*l_m) + h_m(nu)

and returns ``sigma = h_n`` on ``k^{<=n}``.  The map preserves the prefix
order, ambient meets and the lexicographic order exactly, and node lengths
are strictly increasing along lex order, so the image is a skew subtree:
lexicographically later nodes sit strictly deeper.  Images are materialized
only on the map's range (image lengths grow geometrically with ``n``).
"""

from dataclasses import dataclass, field

from .trees import TreeNode, build_tree, lex_cmp, meet, node_label


@dataclass(frozen=True, eq=False)
class SkewEmbedding:
    k: int
    n: int
    levels: tuple[int, ...]              # l_0 .. l_{n-1}
    map: dict[TreeNode, TreeNode] = field(repr=False)

    def __call__(self, nd) -> TreeNode:
        return self.map[tuple(nd)]

    @property
    def domain(self) -> tuple[TreeNode, ...]:
        return tuple(sorted(self.map, key=lambda nd: (len(nd), nd)))

    def violations(self) -> list[str]:
        """Pairwise exactness check of the three tree operations plus strict
        lex-monotonicity of image lengths."""
        out = []
        nodes = list(self.map)
        for a in nodes:
            for b in nodes:
                fa, fb = self.map[a], self.map[b]
                if (fb[:len(fa)] == fa) != (b[:len(a)] == a):
                    out.append(f"prefix order broken at {a},{b}")
                if lex_cmp(fa, fb) != lex_cmp(a, b):
                    out.append(f"lex order broken at {a},{b}")
                if self.map[meet(a, b)] != meet(fa, fb):
                    out.append(f"meet broken at {a},{b}")
                if lex_cmp(a, b) < 0 and not len(fa) < len(fb):
                    out.append(f"image lengths not strictly lex-monotone at {a},{b}")
        return out

    def table(self) -> list[tuple[str, str]]:
        return [(node_label(nd), node_label(self.map[nd])) for nd in
                sorted(self.map, key=lambda nd: (len(nd), nd))]


def skew_embed(k: int, n: int) -> SkewEmbedding:
    """Evaluate the recursion exactly; records ``l_0 .. l_{n-1}``."""
    if k < 1 or n < 0:
        raise ValueError(f"bad skew shape k={k}, n={n}")
    h: dict[TreeNode, TreeNode] = {(): ()}
    levels = []
    for m in range(n):
        l_m = max(len(v) for v in h.values()) + 1
        levels.append(l_m)
        nxt: dict[TreeNode, TreeNode] = {(): ()}
        for t in range(k):
            pad = (t,) + (0,) * ((t + 1) * l_m)
            for nu, img in h.items():
                nxt[(t,) + nu] = pad + img
        h = nxt
    domain = {nd for nd in build_tree(k, n, "Lt").nodes}
    assert set(h) == domain
    return SkewEmbedding(k, n, tuple(levels), h)
