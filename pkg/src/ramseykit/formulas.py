"""Quantifier-free formulas: conjunctions of (negated) atomic literals.

Terms are variables ``x1, x2, ...``, constants, and function applications;
atoms are relation applications and equalities.  There is no quantifier and
no disjunction; everything the library needs is a conjunction of literals.

Textual form (one formula per line in a formula-list file)::

    (and (rel lex x1 x2) (not (eq x1 (fn meet x1 x2))) (rel P1 (const top)))

Evaluation is standard satisfaction with terms read off the function tables.
It compiles to a flat program executed by the selected kernel lane, which
makes evaluating one formula over every tuple of a structure cheap.
"""

from dataclasses import dataclass

from .core import FiniteStructure, check_elements
from .errors import ArityMismatch, FormulaParseError, SignatureMismatch
from . import kernels
from .kernels.encode import (
    LIT_EQ,
    LIT_REL,
    OP_APPLY,
    OP_VALUE,
    OP_VAR,
    ProgramBuilder,
    Tables,
    build_tables,
    flatten_tuples,
)


@dataclass(frozen=True)
class Var:
    index: int  # 1-based

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return f"(const {self.name})"


@dataclass(frozen=True)
class App:
    fun: str
    args: tuple

    def __str__(self):
        inner = " ".join(str(a) for a in self.args)
        return f"(fn {self.fun} {inner})"


Term = Var | Const | App


@dataclass(frozen=True)
class RelAtom:
    name: str
    terms: tuple

    def __str__(self):
        inner = " ".join(str(t) for t in self.terms)
        return f"(rel {self.name} {inner})"


@dataclass(frozen=True)
class EqAtom:
    left: Term
    right: Term

    def __str__(self):
        return f"(eq {self.left} {self.right})"


Atom = RelAtom | EqAtom


@dataclass(frozen=True)
class Literal:
    positive: bool
    atom: Atom

    def __str__(self):
        return str(self.atom) if self.positive else f"(not {self.atom})"


def _term_vars(t: Term) -> set[int]:
    if isinstance(t, Var):
        return {t.index}
    if isinstance(t, App):
        out = set()
        for a in t.args:
            out |= _term_vars(a)
        return out
    return set()


def _atom_vars(a: Atom) -> set[int]:
    if isinstance(a, EqAtom):
        return _term_vars(a.left) | _term_vars(a.right)
    out = set()
    for t in a.terms:
        out |= _term_vars(t)
    return out


@dataclass(frozen=True)
class QfFormula:
    """A conjunction of literals in variables ``x1..x<arity>``."""

    literals: tuple[Literal, ...]
    arity: int

    def __post_init__(self):
        used = set()
        for lit in self.literals:
            used |= _atom_vars(lit.atom)
        if used and (min(used) < 1 or max(used) > self.arity):
            raise ArityMismatch(
                f"formula uses variables {sorted(used)} but declares arity {self.arity}")

    def __str__(self):
        return serialize_formula(self)


def conj(literals, arity: int | None = None) -> QfFormula:
    """Build a formula; arity defaults to the largest variable index used."""
    lits = tuple(literals)
    if arity is None:
        used = set()
        for lit in lits:
            used |= _atom_vars(lit.atom)
        arity = max(used) if used else 0
    return QfFormula(lits, arity)


def rel(name, *terms, positive=True) -> Literal:
    return Literal(positive, RelAtom(name, tuple(terms)))


def eq(left, right, positive=True) -> Literal:
    return Literal(positive, EqAtom(left, right))


def negate(lit: Literal) -> Literal:
    return Literal(not lit.positive, lit.atom)


# -- text form -----------------------------------------------------------------


def serialize_formula(phi: QfFormula) -> str:
    return "(and" + "".join(" " + str(lit) for lit in phi.literals) + ")"


def _tokenize(text: str):
    toks = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            toks.append((c, i + 1))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            toks.append((text[i:j], i + 1))
            i = j
    return toks


class _Reader:
    def __init__(self, text, line):
        self.toks = _tokenize(text)
        self.pos = 0
        self.line = line

    def error(self, msg, col=None):
        raise FormulaParseError(msg, self.line, col)

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def next(self):
        tok, col = self.peek()
        if tok is None:
            self.error("unexpected end of formula")
        self.pos += 1
        return tok, col

    def expect(self, want):
        tok, col = self.next()
        if tok != want:
            self.error(f"expected {want!r}, found {tok!r}", col)
        return col


def _parse_term(r: _Reader) -> Term:
    tok, col = r.next()
    if tok == "(":
        head, hcol = r.next()
        if head == "fn":
            name, _ = r.next()
            args = []
            while r.peek()[0] != ")":
                if r.peek()[0] is None:
                    r.error("unterminated (fn ...)", col)
                args.append(_parse_term(r))
            r.expect(")")
            if not args:
                r.error(f"(fn {name}) with no arguments", col)
            return App(name, tuple(args))
        if head == "const":
            name, _ = r.next()
            r.expect(")")
            return Const(name)
        r.error(f"expected 'fn' or 'const', found {head!r}", hcol)
    if tok.startswith("x") and tok[1:].isdigit():
        idx = int(tok[1:])
        if idx < 1:
            r.error(f"variable index must be >= 1: {tok!r}", col)
        return Var(idx)
    r.error(f"bad term {tok!r}", col)


def _parse_atom(r: _Reader) -> Atom:
    col = r.expect("(")
    head, hcol = r.next()
    if head == "rel":
        name, _ = r.next()
        terms = []
        while r.peek()[0] != ")":
            if r.peek()[0] is None:
                r.error("unterminated (rel ...)", col)
            terms.append(_parse_term(r))
        r.expect(")")
        if not terms:
            r.error(f"(rel {name}) with no arguments", col)
        return RelAtom(name, tuple(terms))
    if head == "eq":
        left = _parse_term(r)
        right = _parse_term(r)
        r.expect(")")
        return EqAtom(left, right)
    r.error(f"expected 'rel' or 'eq', found {head!r}", hcol)


def _parse_literal(r: _Reader) -> Literal:
    tok, col = r.peek()
    if tok != "(":
        r.error(f"expected a literal, found {tok!r}", col)
    # look ahead for (not ...)
    save = r.pos
    r.next()
    head, _ = r.next()
    if head == "not":
        atom = _parse_atom(r)
        r.expect(")")
        return Literal(False, atom)
    r.pos = save
    return Literal(True, _parse_atom(r))


def parse_formula(text: str, line: int = 1, arity: int | None = None) -> QfFormula:
    """Parse one formula.  Accepts ``(and lit...)`` or a bare literal."""
    r = _Reader(text, line)
    tok, col = r.peek()
    if tok is None:
        r.error("empty formula")
    save = r.pos
    r.next()
    head, _ = r.peek()
    lits = []
    if head == "and":
        r.next()
        while r.peek()[0] != ")":
            if r.peek()[0] is None:
                r.error("unterminated (and ...)", col)
            lits.append(_parse_literal(r))
        r.expect(")")
    else:
        r.pos = save
        lits.append(_parse_literal(r))
    if r.peek()[0] is not None:
        r.error(f"trailing tokens after formula: {r.peek()[0]!r}", r.peek()[1])
    return conj(lits, arity)


def parse_formula_list(text: str, arity: int | None = None) -> list[QfFormula]:
    """One formula per non-comment line."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_formula(line, lineno, arity))
    return out


def serialize_formula_list(phis) -> str:
    return "".join(serialize_formula(p) + "\n" for p in phis)


# -- evaluation ----------------------------------------------------------------


def _compile_term(t: Term, s: FiniteStructure, triples: list) -> int:
    """Append postfix triples for ``t``; returns stack depth needed."""
    if isinstance(t, Var):
        triples.append((OP_VAR, t.index - 1, 0))
        return 1
    if isinstance(t, Const):
        if t.name not in s.consts:
            raise SignatureMismatch(f"constant {t.name!r} not in signature")
        triples.append((OP_VALUE, s.consts[t.name], 0))
        return 1
    try:
        want = s.sig.function_arity(t.fun)
    except Exception:
        raise SignatureMismatch(f"function {t.fun!r} not in signature") from None
    if want != len(t.args):
        raise SignatureMismatch(
            f"function {t.fun!r} has arity {want}, applied to {len(t.args)} arguments")
    depth = 0
    for i, a in enumerate(t.args):
        depth = max(depth, i + _compile_term(a, s, triples))
    fid = [n for n, _ in s.sig.functions].index(t.fun)
    triples.append((OP_APPLY, fid, len(t.args)))
    return max(depth, 1)


def compile_formula(phi: QfFormula, s: FiniteStructure, tables: Tables | None = None):
    """Flatten ``phi`` against ``s`` into a kernel program.

    Raises :class:`SignatureMismatch` when the formula mentions symbols the
    structure does not interpret (or at the wrong arity).
    """
    if tables is None:
        tables = build_tables(s)
    b = ProgramBuilder(phi.arity)
    for lit in phi.literals:
        expected = 1 if lit.positive else 0
        atom = lit.atom
        if isinstance(atom, EqAtom):
            first = b.nterms
            for t in (atom.left, atom.right):
                triples = []
                depth = _compile_term(t, s, triples)
                b.add_term(triples, depth)
            b.add_literal(expected, LIT_EQ, 0, first, 2)
        else:
            try:
                want = s.sig.relation_arity(atom.name)
            except Exception:
                raise SignatureMismatch(f"relation {atom.name!r} not in signature") from None
            if want != len(atom.terms):
                raise SignatureMismatch(
                    f"relation {atom.name!r} has arity {want}, applied to {len(atom.terms)} terms")
            first = b.nterms
            for t in atom.terms:
                triples = []
                depth = _compile_term(t, s, triples)
                b.add_term(triples, depth)
            rid = tables.rel_index[atom.name]
            b.add_literal(expected, LIT_REL, rid, first, len(atom.terms))
    return b.build(), tables


def eval_formula(phi: QfFormula, s: FiniteStructure, a) -> bool:
    """Satisfaction of ``phi`` by the tuple ``a`` in ``s``."""
    a = tuple(a)
    if len(a) != phi.arity:
        raise ArityMismatch(f"formula arity {phi.arity}, tuple length {len(a)}")
    check_elements(s, a)
    program, tables = compile_formula(phi, s)
    flat = flatten_tuples([a], phi.arity)
    return bool(kernels.eval_formula_batch(program, tables, flat, 1)[0])


def eval_formula_over(phi: QfFormula, s: FiniteStructure, tuples, tables: Tables | None = None):
    """Satisfaction bits of ``phi`` over many tuples at once (hot path)."""
    tuples = list(tuples)
    for a in tuples:
        if len(a) != phi.arity:
            raise ArityMismatch(f"formula arity {phi.arity}, tuple length {len(a)}")
    program, tables = compile_formula(phi, s, tables)
    flat = flatten_tuples(tuples, phi.arity)
    bits = kernels.eval_formula_batch(program, tables, flat, len(tuples))
    return [bool(b) for b in bits]
