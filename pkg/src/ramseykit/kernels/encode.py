"""Lane-neutral encodings consumed by both kernel implementations.

Structures are flattened into index-based lookup tables (``Tables``), pattern
matching into a per-position check program (``MatchPlan``), and quantifier-free
formulas into a postfix literal program (``Program``).  The pure and native
lanes interpret these formats identically; tests assert their agreement.

Tuples over a universe of size ``n`` are encoded little-endian in base ``n``:
``enc(t) = t[0] + t[1]*n + t[2]*n^2 + ...``.
"""

from array import array

from ..errors import SignatureMismatch

# term opcodes
OP_VAR = 0      # push assignment[a]
OP_VALUE = 1    # push literal value a (resolved constants)
OP_APPLY = 2    # pop b args (last popped = first arg), push fun[a](args)

# literal kinds
LIT_EQ = 0
LIT_REL = 1

# match-plan record kinds
CHK_R1 = 1
CHK_R2 = 2
CHK_RN = 3
CHK_FUN = 4

# arrow search statuses
ARROW_HOLDS = 0
ARROW_FAILS = 1
ARROW_BUDGET = 2


def encode_tuple(t, n: int) -> int:
    e = 0
    for x in reversed(t):
        e = e * n + x
    return e


class Tables:
    """Indexed lookup tables for one structure.

    Unary and binary relations become flat membership bytearrays; wider
    relations become sets of encoded tuples; functions become dicts keyed by
    encoded input tuples.
    """

    __slots__ = ("n", "rel_index", "fun_index", "rel_arity", "fun_arity",
                 "r1", "r2", "rn", "funs", "const_val")

    def __init__(self, structure):
        s = structure
        n = s.size
        self.n = n
        self.rel_index = {name: i for i, (name, _) in enumerate(s.sig.relations)}
        self.fun_index = {name: i for i, (name, _) in enumerate(s.sig.functions)}
        self.rel_arity = [a for _, a in s.sig.relations]
        self.fun_arity = [a for _, a in s.sig.functions]
        self.r1 = []
        self.r2 = []
        self.rn = []
        for name, arity in s.sig.relations:
            table = s.rels[name]
            if arity == 1:
                row = bytearray(n)
                for t in table:
                    row[t[0]] = 1
                self.r1.append(bytes(row))
                self.r2.append(b"")
                self.rn.append(frozenset())
            elif arity == 2:
                row = bytearray(n * n)
                for t in table:
                    row[t[0] * n + t[1]] = 1
                self.r1.append(b"")
                self.r2.append(bytes(row))
                self.rn.append(frozenset())
            else:
                self.r1.append(b"")
                self.r2.append(b"")
                self.rn.append(frozenset(encode_tuple(t, n) for t in table))
        self.funs = []
        for name, arity in s.sig.functions:
            self.funs.append({encode_tuple(t, n): v for t, v in s.funs[name].items()})
        self.const_val = dict(s.consts)


def build_tables(structure) -> Tables:
    return Tables(structure)


class MatchPlan:
    """Flattened embedding-search program for one (pattern, host) pair.

    Record layout (6 ints per record, positions index the pattern universe):

    ==========  =====================================================
    kind        fields
    ==========  =====================================================
    CHK_R1      ``[1, rel, pos, 0, 0, expected]``
    CHK_R2      ``[2, rel, pos_a, pos_b, 0, expected]``
    CHK_RN      ``[3, rel, aux_off, arity, 0, expected]``
    CHK_FUN     ``[4, fun, aux_off, arity, out_pos, 0]``
    ==========  =====================================================

    ``starts[p] .. starts[p+1]`` delimits the records that become checkable
    once position ``p`` is assigned; ``aux`` holds position lists for the
    wide-record kinds.
    """

    __slots__ = ("np", "nh", "feasible", "pinned", "starts", "recs", "aux", "tables")

    def __init__(self, np, nh, feasible, pinned, starts, recs, aux, tables):
        self.np = np
        self.nh = nh
        self.feasible = feasible
        self.pinned = pinned
        self.starts = starts
        self.recs = recs
        self.aux = aux
        self.tables = tables


def build_match_plan(pattern, host) -> MatchPlan:
    """Compile the full preserve-and-reflect embedding test.

    Every tuple over the pattern universe is checked for every relation (with
    the expected membership bit), every function input is checked to commute,
    and constants pin their positions.  Each check is attached to the last
    position it mentions.
    """
    import itertools

    if pattern.sig != host.sig:
        raise SignatureMismatch("pattern and host have different signatures")
    np_, nh = pattern.size, host.size
    tables = build_tables(host)
    pinned = [-1] * np_
    feasible = True
    for name in pattern.sig.constants:
        e = pattern.consts[name]
        v = host.consts[name]
        if pinned[e] not in (-1, v):
            feasible = False
        pinned[e] = v

    per_pos = [[] for _ in range(np_)]
    aux = array("i")
    for name, arity in pattern.sig.relations:
        rid = tables.rel_index[name]
        ptab = pattern.rels[name]
        for t in itertools.product(range(np_), repeat=arity):
            expected = 1 if t in ptab else 0
            anchor = max(t)
            if arity == 1:
                per_pos[anchor].append((CHK_R1, rid, t[0], 0, 0, expected))
            elif arity == 2:
                per_pos[anchor].append((CHK_R2, rid, t[0], t[1], 0, expected))
            else:
                off = len(aux)
                aux.extend(t)
                per_pos[anchor].append((CHK_RN, rid, off, arity, 0, expected))
    for name, arity in pattern.sig.functions:
        fid = tables.fun_index[name]
        ftab = pattern.funs[name]
        for t in itertools.product(range(np_), repeat=arity):
            out = ftab[t]
            anchor = max(t + (out,))
            off = len(aux)
            aux.extend(t)
            per_pos[anchor].append((CHK_FUN, fid, off, arity, out, 0))

    starts = array("i", [0] * (np_ + 1))
    recs = array("i")
    for p in range(np_):
        for rec in per_pos[p]:
            recs.extend(rec)
        starts[p + 1] = len(recs) // 6
    return MatchPlan(np_, nh, feasible, pinned, starts, recs, aux, tables)


class Program:
    """Flattened conjunction-of-literals formula.

    ``lits`` records are 5 ints: ``[expected, kind, rel, term0, nterms]``
    where terms ``term0 .. term0+nterms-1`` index into ``bounds`` delimiting
    postfix triples ``[opcode, a, b]`` in ``ops``.
    """

    __slots__ = ("arity", "nlits", "lits", "bounds", "ops", "max_stack")

    def __init__(self, arity, nlits, lits, bounds, ops, max_stack):
        self.arity = arity
        self.nlits = nlits
        self.lits = lits
        self.bounds = bounds
        self.ops = ops
        self.max_stack = max_stack


class ProgramBuilder:
    def __init__(self, arity):
        self.arity = arity
        self.lits = array("i")
        self.bounds = array("i", [0])
        self.ops = array("i")
        self.nterms = 0
        self.nlits = 0
        self.max_stack = 1

    def add_term(self, postfix_triples, depth):
        for triple in postfix_triples:
            self.ops.extend(triple)
        self.bounds.append(len(self.ops) // 3)
        self.max_stack = max(self.max_stack, depth)
        self.nterms += 1
        return self.nterms - 1

    def add_literal(self, expected, kind, rel, first_term, nterms):
        self.lits.extend((expected, kind, rel, first_term, nterms))
        self.nlits += 1

    def build(self) -> Program:
        return Program(self.arity, self.nlits, self.lits, self.bounds, self.ops, self.max_stack)


def flatten_tuples(tuples, arity) -> array:
    flat = array("i")
    for t in tuples:
        flat.extend(t)
    return flat


def flatten_members(members) -> tuple[array, array]:
    starts = array("i", [0])
    items = array("i")
    for m in members:
        items.extend(m)
        starts.append(len(items))
    return starts, items
