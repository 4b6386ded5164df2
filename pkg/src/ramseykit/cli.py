"""Command-line front door.

Structure arguments accept a file path, the tree shorthand ``k^<=n@dialect``,
or ``chain:<n>``.  Tuple arguments are comma-separated element ids or node
labels from the structure's label table (``0.1`` style, ``e`` for the root).

Reports are line-oriented ``key: value`` text, deterministic given
``(inputs, seed, budget)``.  Exit codes: 0 success / positive verdict,
1 negative verdict, 2 budget exhausted, 3 input error.
"""

import argparse
import os
import re
import sys
from dataclasses import dataclass

from . import kernels
from .amalgam import check_amalgamation, kt_membership
from .closure import cl
from .core import FiniteStructure, parse_structure, serialize_structure, validate
from .errors import BudgetExceeded, RamseyKitError
from .fill import extract_S, fill_m
from .fixtures import FIXTURES, chain, run_fixture
from .formulas import parse_formula_list, serialize_formula
from .homogenize import HomogenizationRequest, homogenize
from .empatterns import IndexedFamily
from .errors import NoHomogeneousCopy
from .iso import Embedding
from .qftypes import isolating_formula, qf_type
from .ramsey import arrow_holds, find_homogeneous
from .skew import skew_embed
from .trees import node_label, parse_tree_shorthand


@dataclass
class RunConfig:
    budget: int
    seed: int
    workers: int
    fmt: str
    verify: bool
    grow: bool = False

    def __post_init__(self):
        if self.budget <= 0:
            raise ValueError("budget must be positive")


def load_structure(arg: str) -> FiniteStructure:
    t = parse_tree_shorthand(arg)
    if t is not None:
        return t.structure
    if arg.startswith("chain:"):
        return chain(int(arg.split(":", 1)[1]))
    with open(arg, "r", encoding="utf-8") as fh:
        return parse_structure(fh.read())


def parse_tuple(arg: str, s: FiniteStructure) -> tuple[int, ...]:
    if not arg.strip():
        return ()
    out = []
    for part in arg.split(","):
        part = part.strip()
        if part.isdigit():
            out.append(int(part))
        elif s.labels is not None and part in s.labels:
            out.append(s.labels.index(part))
        else:
            raise RamseyKitError(f"cannot resolve element {part!r}")
    return tuple(out)


def emit(report: dict):
    lines = []
    for key, value in report.items():
        if isinstance(value, bool):
            value = "yes" if value else "no"
        lines.append(f"{key}: {value}")
    print("\n".join(lines))


def _standard(parser):
    parser.add_argument("--budget", type=int, default=10**8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int,
                        default=int(os.environ.get("RAMSEYKIT_WORKERS", "0")) or None)
    parser.add_argument("--format", dest="fmt", choices=("text", "report"), default="text")
    parser.add_argument("--verify", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ramseykit", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="cmd", required=True)

    q = sub.add_parser("validate", help="check structure invariants")
    q.add_argument("path")
    _standard(q)

    q = sub.add_parser("qftype", help="quantifier-free type of a tuple")
    q.add_argument("path")
    q.add_argument("--tuple", required=True)
    _standard(q)

    q = sub.add_parser("closure", help="increasing closure of a tuple")
    q.add_argument("path")
    q.add_argument("--tuple", required=True)
    _standard(q)

    q = sub.add_parser("isolate", help="isolating formula of a tuple's type")
    q.add_argument("path")
    q.add_argument("--tuple", required=True)
    _standard(q)

    q = sub.add_parser("arrow", help="decide C -> (B)^A_k")
    q.add_argument("host")
    q.add_argument("pattern_b")
    q.add_argument("pattern_a")
    q.add_argument("--colors", type=int, required=True)
    q.add_argument("--escalate", type=int, default=0, metavar="STEPS",
                   help="on fails, retry on up to STEPS larger full trees "
                        "(host must be given in tree shorthand)")
    _standard(q)

    q = sub.add_parser("homogenize", help="run a homogenization request file")
    q.add_argument("request")
    q.add_argument("--grow", action="store_true",
                   help="retry on the next larger full tree when the index is too small")
    _standard(q)

    q = sub.add_parser("skew", help="skew self-embedding table of k^{<=n}")
    q.add_argument("k", type=int)
    q.add_argument("n", type=int)
    _standard(q)

    q = sub.add_parser("fill", help="fill a level-decorated tree to height m")
    q.add_argument("path")
    q.add_argument("m", type=int)
    q.add_argument("--out", default=None, help="directory for the output structure files")
    _standard(q)

    q = sub.add_parser("amalgam", help="search for an amalgam of B1, B2 over A")
    q.add_argument("base")
    q.add_argument("b1")
    q.add_argument("b2")
    q.add_argument("--e1", required=True)
    q.add_argument("--e2", required=True)
    q.add_argument("--bound", type=int, default=12)
    q.add_argument("--klass", choices=("kt", "any"), default="kt")
    _standard(q)

    q = sub.add_parser("fixtures", help="run a named reproduction")
    q.add_argument("name", choices=sorted(FIXTURES))
    _standard(q)

    return p


def cmd_validate(args, cfg) -> int:
    s = load_structure(args.path)
    violations = validate(s)
    report = {"size": s.size, "violations": len(violations)}
    for i, v in enumerate(violations[:50]):
        report[f"violation-{i}"] = str(v)
    report["verdict"] = "valid" if not violations else "invalid"
    emit(report)
    return 0 if not violations else 1


def cmd_qftype(args, cfg) -> int:
    s = load_structure(args.path)
    a = parse_tuple(args.tuple, s)
    q = qf_type(s, a)
    emit({"type-id": q.short_id(), "tuple-length": q.tuple_length,
          "closure-size": q.closure_size,
          "positions": " ".join(str(p + 1) for p in q.positions)})
    return 0


def cmd_closure(args, cfg) -> int:
    s = load_structure(args.path)
    a = parse_tuple(args.tuple, s)
    closed = cl(s, a)
    emit({"closure": " ".join(str(e) for e in closed),
          "labels": " ".join(s.label_of(e) for e in closed)})
    return 0


def cmd_isolate(args, cfg) -> int:
    s = load_structure(args.path)
    a = parse_tuple(args.tuple, s)
    theta = isolating_formula(qf_type(s, a))
    print(serialize_formula(theta))
    return 0


_TREE_SHORTHAND = r"^(\d+)\^<=(\d+)@(L0|L1|Ls|Lt)$"


def _escalation_hosts(spec: str, steps: int):
    """Larger full trees after ``spec``, smallest first.

    The loop eventually decides any age instance by the Ramsey property of
    the full trees' age, but no finite prefix is guaranteed sufficient; the
    step cap and budget keep the search at desk scale.
    """
    m = re.match(_TREE_SHORTHAND, spec or "")
    if not m:
        return
    k0, n0, dialect = int(m.group(1)), int(m.group(2)), m.group(3)
    grown = sorted(
        ((k, n) for k in range(k0, k0 + steps + 1) for n in range(n0, n0 + steps + 1)
         if (k, n) != (k0, n0)),
        key=lambda kn: (kn[0] + kn[1], kn[0]))
    for k, n in grown[:steps]:
        yield f"{k}^<={n}@{dialect}"


def cmd_arrow(args, cfg) -> int:
    b = load_structure(args.pattern_b)
    a = load_structure(args.pattern_a)
    hosts = [args.host]
    if args.escalate > 0:
        hosts.extend(_escalation_hosts(args.host, args.escalate))
    verdict = None
    used = args.host
    for spec in hosts:
        c = load_structure(spec)
        try:
            verdict = arrow_holds(c, b, a, args.colors, cfg.budget)
        except BudgetExceeded as exc:
            emit({"verdict": "budget", "host": spec, "detail": str(exc)})
            return 2
        used = spec
        if verdict.holds:
            break
    report = {"verdict": "holds" if verdict.holds else "fails",
              "host": used,
              "nodes": verdict.stats.nodes}
    emit(report)
    if verdict.witness is not None:
        print("coloring:")
        for aset in sorted(verdict.witness.assignment, key=sorted):
            elems = " ".join(str(e) for e in sorted(aset))
            print(f"copy {elems} color {verdict.witness.assignment[aset]}")
        if cfg.verify:
            ok = find_homogeneous(verdict.witness, b) is None
            print(f"verify: {'ok' if ok else 'FAILED'}")
            if not ok:
                return 3
    return 0 if verdict.holds else 1


def _parse_request(path: str):
    index = target = pattern = None
    index_spec = None
    delta = ()
    assign = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("index:"):
                index_spec = line.split(":", 1)[1].strip()
                index = load_structure(index_spec)
            elif line.startswith("target:"):
                target = load_structure(line.split(":", 1)[1].strip())
            elif line.startswith("pattern:"):
                pattern = load_structure(line.split(":", 1)[1].strip())
            elif line.startswith("delta:"):
                with open(line.split(":", 1)[1].strip(), "r", encoding="utf-8") as dfh:
                    delta = tuple(parse_formula_list(dfh.read()))
            elif line.startswith("assign "):
                toks = line.split()
                assign[int(toks[1])] = tuple(int(t) for t in toks[2:])
            else:
                raise RamseyKitError(f"bad request line {lineno}: {line!r}")
    if index is None or target is None or pattern is None:
        raise RamseyKitError("request must name index:, target: and pattern:")
    identity = not assign
    if identity:
        assign = {i: (i,) for i in index.universe}
    return IndexedFamily(index, target, assign), pattern, delta, index_spec, identity


_GROW_STEPS = 3


def _grown_indexes(index_spec: str):
    """Successively taller full trees, for ``--grow`` retries."""
    m = re.match(r"^(\d+)\^<=(\d+)@(L0|L1|Ls|Lt)$", index_spec or "")
    if not m:
        return
    k, n, dialect = int(m.group(1)), int(m.group(2)), m.group(3)
    for step in range(1, _GROW_STEPS + 1):
        yield f"{k}^<={n + step}@{dialect}"


def cmd_homogenize(args, cfg) -> int:
    family, pattern, delta, index_spec, identity = _parse_request(args.request)
    attempts = [(index_spec, family)]
    if cfg.grow and identity and index_spec:
        for spec in _grown_indexes(index_spec):
            bigger = load_structure(spec)
            if bigger.size <= family.target.size:
                attempts.append((spec, IndexedFamily(
                    bigger, family.target, {i: (i,) for i in bigger.universe})))
    result = None
    used_spec = index_spec
    try:
        for i, (spec, fam) in enumerate(attempts):
            try:
                result = homogenize(HomogenizationRequest(fam, pattern, delta), cfg.budget)
                used_spec = spec
                break
            except NoHomogeneousCopy:
                if i == len(attempts) - 1:
                    raise
    except NoHomogeneousCopy as exc:
        emit({"result": "no-homogeneous-copy", "detail": str(exc)})
        return 1
    except BudgetExceeded as exc:
        emit({"result": "budget", "detail": str(exc)})
        return 2
    report = {"result": "ok", "index": used_spec or "-",
              "copy": " ".join(str(e) for e in result.copy.elements)}
    for eta, bits in sorted(result.per_type.items(), key=lambda kv: kv[0].short_id()):
        if bits is None:
            report[f"type {eta.short_id()}"] = "unrealized"
        else:
            report[f"type {eta.short_id()}"] = "".join(
                f"{i}={'1' if b else '0'} " for i, b in bits).strip() or "-"
    emit(report)
    print("trace:")
    for r in result.trace:
        print(f"round type {r.type_id} len {r.tuple_length} closure {r.closure_size} "
              f"copies {r.copies} colors {r.colors} action {r.action}")
    return 0


def cmd_skew(args, cfg) -> int:
    s = skew_embed(args.k, args.n)
    emit({"levels": " ".join(map(str, s.levels)) or "-"})
    for src, img in s.table():
        print(f"{src} -> {img}")
    return 0


def cmd_fill(args, cfg) -> int:
    d = load_structure(args.path)
    result = fill_m(d, args.m)
    extracted = extract_S(result.filled, result.psi_marks)
    report = {
        "k": result.k,
        "m": result.m,
        "copy": " ".join(str(e) for e in result.d_prime.elements),
        "Y": " ".join(node_label(y) for y in result.Y),
        "filled-size": result.filled.size,
        "marks": " ".join(node_label(v) for v in result.psi_marks),
    }
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "filled.struct"), "w", encoding="utf-8") as fh:
            fh.write(serialize_structure(result.filled.structure))
        with open(os.path.join(args.out, "extracted.struct"), "w", encoding="utf-8") as fh:
            fh.write(serialize_structure(extracted))
        report["out"] = args.out
    emit(report)
    return 0


def cmd_amalgam(args, cfg) -> int:
    a = load_structure(args.base)
    b1 = load_structure(args.b1)
    b2 = load_structure(args.b2)
    e1 = Embedding(a, b1, parse_tuple(args.e1, a))
    e2 = Embedding(a, b2, parse_tuple(args.e2, a))
    test = kt_membership if args.klass == "kt" else (lambda s: True)
    try:
        found = check_amalgamation(a, b1, b2, e1, e2, test, args.bound, cfg.budget)
    except BudgetExceeded as exc:
        emit({"amalgam": "budget", "detail": str(exc)})
        return 2
    if found is None:
        emit({"amalgam": "none", "bound": args.bound})
        return 1
    emit({"amalgam": "found", "size": found.amalgam.size,
          "g1": " ".join(map(str, found.g1.map)),
          "g2": " ".join(map(str, found.g2.map))})
    return 0


def cmd_fixtures(args, cfg) -> int:
    report, code = run_fixture(args.name, cfg.budget, cfg.seed)
    emit(report)
    return code


COMMANDS = {
    "validate": cmd_validate,
    "qftype": cmd_qftype,
    "closure": cmd_closure,
    "isolate": cmd_isolate,
    "arrow": cmd_arrow,
    "homogenize": cmd_homogenize,
    "skew": cmd_skew,
    "fill": cmd_fill,
    "amalgam": cmd_amalgam,
    "fixtures": cmd_fixtures,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(budget=args.budget, seed=args.seed,
                        workers=args.workers or 1, fmt=args.fmt,
                        verify=args.verify, grow=getattr(args, "grow", False))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if cfg.fmt == "report":
        print(f"seed: {cfg.seed}")
        print(f"budget: {cfg.budget}")
        print(f"workers: {cfg.workers}")
        print(f"lane: {kernels.LANE}")
    try:
        return COMMANDS[args.cmd](args, cfg)
    except BudgetExceeded as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    except RamseyKitError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
