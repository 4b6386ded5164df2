"""Finite first-order structures over finite signatures.

A structure's universe is always ``0..n-1``; external names live only in the
optional label table of the file format.  Relation tables are sets of tuples,
function tables are total maps, and a signature may designate one binary
relation as *the* linear order of the structure (strict, e.g. ``<``).  All
values are immutable after construction and safe to share between threads.

The text format (UTF-8, ``#`` comments)::

    signature:
    rel below 2
    fun meet 2
    const bottom
    order lex
    universe 7
    table below
    0 0
    0 1
    table meet
    0 1 0
    table bottom
    0
    label 0 e

Function rows list the input tuple then the output; constant tables hold a
single row with the value.  ``serialize_structure`` emits every symbol's
table in declaration order with rows sorted, so serialization is a canonical
form: equal structures produce identical text.
"""

import itertools
from dataclasses import dataclass, field

from .errors import (
    NotClosed,
    OutOfUniverse,
    ParseError,
    SignatureError,
)

Tuple = tuple[int, ...]


@dataclass(frozen=True)
class Signature:
    """Named relation/function/constant symbols with arities.

    ``order_symbol``, if set, names one of the binary relations and marks it
    as the designated (strict) linear order of every structure over this
    signature.
    """

    relations: tuple[tuple[str, int], ...] = ()
    functions: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()
    order_symbol: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple((str(n), int(a)) for n, a in self.relations))
        object.__setattr__(self, "functions", tuple((str(n), int(a)) for n, a in self.functions))
        object.__setattr__(self, "constants", tuple(str(n) for n in self.constants))
        names = [n for n, _ in self.relations] + [n for n, _ in self.functions] + list(self.constants)
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate symbol names in {names}")
        for n, a in self.relations + self.functions:
            if a < 1:
                raise SignatureError(f"symbol {n} has arity {a} < 1")
            if not n or any(c.isspace() for c in n):
                raise SignatureError(f"bad symbol name {n!r}")
        for n in self.constants:
            if not n or any(c.isspace() for c in n):
                raise SignatureError(f"bad symbol name {n!r}")
        if self.order_symbol is not None:
            if (self.order_symbol, 2) not in self.relations:
                raise SignatureError(
                    f"order symbol {self.order_symbol!r} is not a binary relation of the signature")

    def relation_arity(self, name: str) -> int:
        for n, a in self.relations:
            if n == name:
                return a
        raise SignatureError(f"unknown relation {name!r}")

    def function_arity(self, name: str) -> int:
        for n, a in self.functions:
            if n == name:
                return a
        raise SignatureError(f"unknown function {name!r}")

    def symbol_names(self) -> list[str]:
        return [n for n, _ in self.relations] + [n for n, _ in self.functions] + list(self.constants)


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    """A finite structure: universe ``0..size-1`` plus interpretation tables.

    ``labels`` is presentation-only (file format label table) and does not
    participate in equality, hashing or canonical serialization.
    """

    sig: Signature
    size: int
    rels: dict[str, frozenset[Tuple]] = field(default_factory=dict)
    funs: dict[str, dict[Tuple, int]] = field(default_factory=dict)
    consts: dict[str, int] = field(default_factory=dict)
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        rels = {n: frozenset(tuple(map(int, t)) for t in self.rels.get(n, ())) for n, _ in self.sig.relations}
        funs = {n: {tuple(map(int, t)): int(v) for t, v in self.funs.get(n, {}).items()}
                for n, _ in self.sig.functions}
        consts = {n: int(self.consts[n]) for n in self.sig.constants if n in self.consts}
        extra = (set(self.rels) - set(rels)) | (set(self.funs) - set(funs)) | (set(self.consts) - set(consts))
        if extra:
            raise SignatureError(f"tables for symbols not in signature: {sorted(extra)}")
        object.__setattr__(self, "rels", rels)
        object.__setattr__(self, "funs", funs)
        object.__setattr__(self, "consts", consts)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    # Equality is structural and label-blind.
    def _state(self):
        return (
            self.sig,
            self.size,
            tuple((n, frozenset(self.rels[n])) for n, _ in self.sig.relations),
            tuple((n, tuple(sorted(self.funs[n].items()))) for n, _ in self.sig.functions),
            tuple(sorted(self.consts.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, FiniteStructure):
            return NotImplemented
        return self._state() == other._state()

    def __hash__(self):
        return hash(self._state())

    def __repr__(self):
        return f"FiniteStructure(size={self.size}, sig={len(self.sig.relations)}R/{len(self.sig.functions)}F)"

    @property
    def universe(self) -> range:
        return range(self.size)

    def rel(self, name: str) -> frozenset[Tuple]:
        return self.rels[name]

    def fun(self, name: str) -> dict[Tuple, int]:
        return self.funs[name]

    def order_pairs(self) -> frozenset[Tuple]:
        from .errors import NoOrder
        if self.sig.order_symbol is None:
            raise NoOrder("structure carries no designated linear order")
        return self.rels[self.sig.order_symbol]

    def order_rank(self) -> list[int]:
        """Position of each element in the designated order (0 = least)."""
        pairs = self.order_pairs()
        return [sum(1 for x in self.universe if (x, e) in pairs) for e in self.universe]

    def sorted_by_order(self, elems) -> list[int]:
        rank = self.order_rank()
        return sorted(elems, key=lambda e: rank[e])

    def label_of(self, e: int) -> str:
        if self.labels is not None and 0 <= e < len(self.labels):
            return self.labels[e]
        return str(e)


@dataclass(frozen=True)
class Violation:
    """A single failed structure invariant, naming the offending symbol."""

    symbol: str
    message: str
    offender: Tuple | None = None

    def __str__(self):
        tup = f" {self.offender}" if self.offender is not None else ""
        return f"{self.symbol}: {self.message}{tup}"


def validate(s: FiniteStructure) -> list[Violation]:
    """Check every FiniteStructure invariant; empty list iff all hold.

    Checks: tuple arities and universe bounds for every table, totality of
    every function table, constant values in range, and (when an order symbol
    is designated) that its table is a strict linear order.
    """
    out: list[Violation] = []
    n = s.size
    if n < 0:
        out.append(Violation("universe", f"negative size {n}"))
        return out
    for name, arity in s.sig.relations:
        for t in sorted(s.rels[name]):
            if len(t) != arity:
                out.append(Violation(name, f"tuple of length {len(t)}, arity is {arity}", t))
            elif any(not (0 <= x < n) for x in t):
                out.append(Violation(name, "tuple leaves the universe", t))
    for name, arity in s.sig.functions:
        table = s.funs[name]
        for t, v in sorted(table.items()):
            if len(t) != arity:
                out.append(Violation(name, f"input of length {len(t)}, arity is {arity}", t))
            elif any(not (0 <= x < n) for x in t):
                out.append(Violation(name, "input leaves the universe", t))
            elif not (0 <= v < n):
                out.append(Violation(name, f"value {v} leaves the universe", t))
        for t in itertools.product(range(n), repeat=arity):
            if t not in table:
                out.append(Violation(name, "function table misses an input", t))
    for name in s.sig.constants:
        if name not in s.consts:
            out.append(Violation(name, "constant has no value"))
        elif not (0 <= s.consts[name] < n):
            out.append(Violation(name, f"value {s.consts[name]} leaves the universe"))
    if s.sig.order_symbol is not None:
        out.extend(_check_strict_linear(s.sig.order_symbol, s.rels[s.sig.order_symbol], n))
    return out


def _check_strict_linear(name: str, pairs: frozenset[Tuple], n: int) -> list[Violation]:
    out = []
    ok_shape = all(len(t) == 2 and 0 <= t[0] < n and 0 <= t[1] < n for t in pairs)
    if not ok_shape:
        return [Violation(name, "order table malformed")]
    for x in range(n):
        if (x, x) in pairs:
            out.append(Violation(name, "order is not irreflexive", (x, x)))
    for x in range(n):
        for y in range(x + 1, n):
            a, b = (x, y) in pairs, (y, x) in pairs
            if a and b:
                out.append(Violation(name, "order is not antisymmetric", (x, y)))
            if not a and not b:
                out.append(Violation(name, "order is not total", (x, y)))
    for x, y in pairs:
        for z in range(n):
            if (y, z) in pairs and (x, z) not in pairs:
                out.append(Violation(name, "order is not transitive", (x, y, z)))
    return out


def check_elements(s: FiniteStructure, elems) -> None:
    for e in elems:
        if not (0 <= e < s.size):
            raise OutOfUniverse(f"element {e} outside universe of size {s.size}")


def induced_substructure(s: FiniteStructure, elements: Tuple, keep_labels: bool = True) -> FiniteStructure:
    """Substructure induced on ``elements`` (given in the new universe order).

    The set must contain all constant values and be closed under every
    function of the host; otherwise :class:`NotClosed` is raised.
    """
    check_elements(s, elements)
    if len(set(elements)) != len(elements):
        raise NotClosed(f"element list {elements} has repeats")
    pos = {e: i for i, e in enumerate(elements)}
    rels = {}
    for name, arity in s.sig.relations:
        rels[name] = frozenset(
            tuple(pos[x] for x in t) for t in s.rels[name] if all(x in pos for x in t))
    funs = {}
    for name, arity in s.sig.functions:
        table = {}
        for t in itertools.product(elements, repeat=arity):
            v = s.funs[name][t]
            if v not in pos:
                raise NotClosed(f"set not closed under {name}: {name}{t} = {v}")
            table[tuple(pos[x] for x in t)] = pos[v]
        funs[name] = table
    consts = {}
    for name in s.sig.constants:
        v = s.consts[name]
        if v not in pos:
            raise NotClosed(f"set misses constant {name} = {v}")
        consts[name] = pos[v]
    labels = None
    if keep_labels and s.labels is not None:
        labels = tuple(s.labels[e] for e in elements)
    return FiniteStructure(s.sig, len(elements), rels, funs, consts, labels)


# -- text format --------------------------------------------------------------

def serialize_structure(s: FiniteStructure, include_labels: bool = True) -> str:
    lines = ["signature:"]
    for n, a in s.sig.relations:
        lines.append(f"rel {n} {a}")
    for n, a in s.sig.functions:
        lines.append(f"fun {n} {a}")
    for n in s.sig.constants:
        lines.append(f"const {n}")
    if s.sig.order_symbol is not None:
        lines.append(f"order {s.sig.order_symbol}")
    lines.append(f"universe {s.size}")
    for n, _ in s.sig.relations:
        lines.append(f"table {n}")
        for t in sorted(s.rels[n]):
            lines.append(" ".join(map(str, t)))
    for n, _ in s.sig.functions:
        lines.append(f"table {n}")
        for t in sorted(s.funs[n]):
            lines.append(" ".join(map(str, t + (s.funs[n][t],))))
    for n in s.sig.constants:
        lines.append(f"table {n}")
        if n in s.consts:
            lines.append(str(s.consts[n]))
    if include_labels and s.labels is not None:
        for e, lab in enumerate(s.labels):
            lines.append(f"label {e} {lab}")
    return "\n".join(lines) + "\n"


def parse_structure(text: str) -> FiniteStructure:
    """Parse the structure text format; raises :class:`ParseError` with a
    line/column on malformed input."""
    rels: list[tuple[str, int]] = []
    funs: list[tuple[str, int]] = []
    consts: list[str] = []
    order = None
    size = None
    tables: dict[str, list[Tuple]] = {}
    labels: dict[int, str] = {}
    current: str | None = None
    seen_header = False

    def arity_of(sym):
        for n, a in rels:
            if n == sym:
                return ("rel", a)
        for n, a in funs:
            if n == sym:
                return ("fun", a)
        if sym in consts:
            return ("const", 0)
        return None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        toks = line.split()
        col = len(raw) - len(raw.lstrip()) + 1
        if not seen_header:
            if toks != ["signature:"]:
                raise ParseError("expected 'signature:' header", lineno, col)
            seen_header = True
            continue
        kind = toks[0]
        if size is None and kind in {"rel", "fun", "const", "order", "universe"}:
            if kind == "rel" or kind == "fun":
                if len(toks) != 3:
                    raise ParseError(f"expected '{kind} <name> <arity>'", lineno, col)
                try:
                    arity = int(toks[2])
                except ValueError:
                    raise ParseError(f"bad arity {toks[2]!r}", lineno, col) from None
                (rels if kind == "rel" else funs).append((toks[1], arity))
            elif kind == "const":
                if len(toks) != 2:
                    raise ParseError("expected 'const <name>'", lineno, col)
                consts.append(toks[1])
            elif kind == "order":
                if len(toks) != 2:
                    raise ParseError("expected 'order <relname>'", lineno, col)
                order = toks[1]
            else:
                if len(toks) != 2:
                    raise ParseError("expected 'universe <n>'", lineno, col)
                try:
                    size = int(toks[1])
                except ValueError:
                    raise ParseError(f"bad universe size {toks[1]!r}", lineno, col) from None
            continue
        if size is None:
            raise ParseError(f"unexpected {kind!r} before 'universe'", lineno, col)
        if kind == "table":
            if len(toks) != 2:
                raise ParseError("expected 'table <symbol>'", lineno, col)
            if arity_of(toks[1]) is None:
                raise ParseError(f"table for unknown symbol {toks[1]!r}", lineno, col)
            if toks[1] in tables:
                raise ParseError(f"duplicate table for {toks[1]!r}", lineno, col)
            current = toks[1]
            tables[current] = []
        elif kind == "label":
            if len(toks) != 3:
                raise ParseError("expected 'label <element> <text>'", lineno, col)
            try:
                e = int(toks[1])
            except ValueError:
                raise ParseError(f"bad element {toks[1]!r}", lineno, col) from None
            labels[e] = toks[2]
            current = None
        else:
            if current is None:
                raise ParseError(f"row outside any table: {line!r}", lineno, col)
            try:
                row = tuple(int(t) for t in toks)
            except ValueError:
                raise ParseError(f"non-numeric table row {line!r}", lineno, col) from None
            k, arity = arity_of(current)
            want = {"rel": arity, "fun": arity + 1, "const": 1}[k]
            if len(row) != want:
                raise ParseError(
                    f"row of length {len(row)} in table {current!r}, expected {want}", lineno, col)
            tables[current].append(row)

    if not seen_header:
        raise ParseError("empty input: missing 'signature:' header", 1, 1)
    if size is None:
        raise ParseError("missing 'universe <n>' line", 1, 1)
    try:
        sig = Signature(tuple(rels), tuple(funs), tuple(consts), order)
    except SignatureError as exc:
        raise ParseError(str(exc), 1, 1) from None

    rtabs = {n: frozenset(map(tuple, tables.get(n, ()))) for n, _ in rels}
    ftabs = {n: {row[:-1]: row[-1] for row in tables.get(n, ())} for n, _ in funs}
    ctabs = {n: tables[n][0][0] for n in consts if tables.get(n)}
    lab = None
    if labels:
        lab = tuple(labels.get(i, str(i)) for i in range(size))
    return FiniteStructure(sig, size, rtabs, ftabs, ctabs, lab)
