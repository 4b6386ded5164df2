"""Pure-Python kernel lane.

Reference implementation of the three hot kernels; the native lane in
``_native.pyx`` mirrors this logic instruction for instruction.
"""

from .encode import (
    ARROW_BUDGET,
    ARROW_FAILS,
    ARROW_HOLDS,
    CHK_FUN,
    CHK_R1,
    CHK_R2,
    CHK_RN,
    LIT_EQ,
    OP_APPLY,
    OP_VALUE,
    OP_VAR,
)

LANE = "pure"


def match_embeddings(plan, limit=None):
    """All injective structure-preserving-and-reflecting maps, in lex order
    of their image tuples.  ``limit`` stops the search early."""
    if not plan.feasible:
        return []
    np_, nh = plan.np, plan.nh
    if np_ == 0:
        return [()]
    if np_ > nh:
        return []
    tabs = plan.tables
    starts, recs, aux = plan.starts, plan.recs, plan.aux
    r1, r2, rn, funs = tabs.r1, tabs.r2, tabs.rn, tabs.funs
    pinned = plan.pinned
    asg = [-1] * np_
    used = [False] * nh
    out = []

    def ok(p):
        for i in range(starts[p], starts[p + 1]):
            base = 6 * i
            kind = recs[base]
            sid = recs[base + 1]
            if kind == CHK_R1:
                if r1[sid][asg[recs[base + 2]]] != recs[base + 5]:
                    return False
            elif kind == CHK_R2:
                if r2[sid][asg[recs[base + 2]] * nh + asg[recs[base + 3]]] != recs[base + 5]:
                    return False
            elif kind == CHK_RN:
                off, arity = recs[base + 2], recs[base + 3]
                enc = 0
                for j in range(arity - 1, -1, -1):
                    enc = enc * nh + asg[aux[off + j]]
                if (enc in rn[sid]) != bool(recs[base + 5]):
                    return False
            else:  # CHK_FUN
                off, arity = recs[base + 2], recs[base + 3]
                enc = 0
                for j in range(arity - 1, -1, -1):
                    enc = enc * nh + asg[aux[off + j]]
                if funs[sid][enc] != asg[recs[base + 4]]:
                    return False
        return True

    p = 0
    cand = 0
    while True:
        if cand >= nh:
            # backtrack
            p -= 1
            if p < 0:
                return out
            c = asg[p]
            used[c] = False
            asg[p] = -1
            cand = c + 1 if pinned[p] < 0 else nh
            continue
        if pinned[p] >= 0:
            c = pinned[p]
            if cand > c:
                cand = nh
                continue
            cand = c
        if used[cand]:
            cand += 1
            continue
        asg[p] = cand
        used[cand] = True
        if ok(p):
            if p == np_ - 1:
                out.append(tuple(asg))
                if limit is not None and len(out) >= limit:
                    return out
                used[cand] = False
                asg[p] = -1
                cand = cand + 1 if pinned[p] < 0 else nh
            else:
                p += 1
                cand = 0
        else:
            used[cand] = False
            asg[p] = -1
            cand = cand + 1 if pinned[p] < 0 else nh


def arrow_search(k, m, bm_starts, bm_items, budget):
    """Exhaustive bad-coloring search.

    Colors the ``m`` pattern copies in index order, colors tried ascending
    and restricted to canonical form (a color may exceed the maximum used so
    far by at most one).  A branch is abandoned as soon as some fully colored
    copy-of-B is monochromatic (no completion can be bad); a branch is closed
    as a witness as soon as every copy of B contains a bichromatic pair (the
    lex-least completion by color 0 is the first bad leaf of the subtree).

    Returns ``(status, witness, nodes)``.
    """
    nb = len(bm_starts) - 1
    for j in range(nb):
        if bm_starts[j] == bm_starts[j + 1]:
            return ARROW_HOLDS, None, 0  # a B-copy with no A-copies is always homogeneous
    if m == 0:
        if nb > 0:
            return ARROW_HOLDS, None, 0
        return ARROW_FAILS, [], 0
    if nb == 0:
        return ARROW_FAILS, [0] * m, 0

    contains = [[] for _ in range(m)]  # copy index -> list of B-copy ids
    size = [0] * nb
    for j in range(nb):
        for idx in range(bm_starts[j], bm_starts[j + 1]):
            contains[bm_items[idx]].append(j)
            size[j] += 1

    colors = [-1] * m
    colored = [0] * nb
    mask = [0] * nb
    bi_count = 0
    nodes = 0
    p = 0
    trial = [0] * m  # next color to try at each depth
    max_used = [0] * (m + 1)  # colors used before depth p

    def popcount(x):
        return bin(x).count("1")

    while True:
        if p < 0:
            return ARROW_HOLDS, None, nodes
        c = trial[p]
        limit_c = min(max_used[p] + 1, k)
        if c >= limit_c:
            # exhaust this depth, undo previous assignment and advance it
            p -= 1
            if p < 0:
                return ARROW_HOLDS, None, nodes
            oldc = colors[p]
            for j in contains[p]:
                colored[j] -= 1
                had = popcount(mask[j]) >= 2
                present = False
                for idx in range(bm_starts[j], bm_starts[j + 1]):
                    q = bm_items[idx]
                    if q != p and colors[q] == oldc:
                        present = True
                        break
                if not present:
                    mask[j] &= ~(1 << oldc)
                if had and popcount(mask[j]) < 2:
                    bi_count -= 1
            colors[p] = -1
            trial[p] = oldc + 1
            continue
        nodes += 1
        if nodes > budget:
            return ARROW_BUDGET, None, nodes
        colors[p] = c
        pruned = False
        touched = 0
        for j in contains[p]:
            touched += 1
            colored[j] += 1
            before = popcount(mask[j])
            mask[j] |= 1 << c
            after = popcount(mask[j])
            if before < 2 <= after:
                bi_count += 1
            if colored[j] == size[j] and after == 1:
                pruned = True
                break
        if pruned:
            # undo the partial update and try the next color
            cnt = 0
            for j in contains[p]:
                cnt += 1
                if cnt > touched:
                    break
                colored[j] -= 1
                had = popcount(mask[j]) >= 2
                present = False
                for idx in range(bm_starts[j], bm_starts[j + 1]):
                    q = bm_items[idx]
                    if q != p and colors[q] == c:
                        present = True
                        break
                if not present:
                    mask[j] &= ~(1 << c)
                if had and popcount(mask[j]) < 2:
                    bi_count -= 1
            colors[p] = -1
            trial[p] = c + 1
            continue
        if bi_count == nb:
            witness = colors[:]
            for q in range(p + 1, m):
                witness[q] = 0
            return ARROW_FAILS, witness, nodes
        if p == m - 1:
            # complete assignment; bad iff no monochromatic B-copy
            bad = True
            for j in range(nb):
                if popcount(mask[j]) == 1:
                    bad = False
                    break
            if bad:
                return ARROW_FAILS, colors[:], nodes
            # undo and advance
            for j in contains[p]:
                colored[j] -= 1
                had = popcount(mask[j]) >= 2
                present = False
                for idx in range(bm_starts[j], bm_starts[j + 1]):
                    q = bm_items[idx]
                    if q != p and colors[q] == c:
                        present = True
                        break
                if not present:
                    mask[j] &= ~(1 << c)
                if had and popcount(mask[j]) < 2:
                    bi_count -= 1
            colors[p] = -1
            trial[p] = c + 1
            continue
        max_used[p + 1] = max(max_used[p], c + 1)
        p += 1
        trial[p] = 0


def _eval_term(ops, start, end, asg, funs, stack):
    sp = 0
    for i in range(start, end):
        base = 3 * i
        op = ops[base]
        if op == OP_VAR:
            stack[sp] = asg[ops[base + 1]]
            sp += 1
        elif op == OP_VALUE:
            stack[sp] = ops[base + 1]
            sp += 1
        else:  # OP_APPLY
            fid, argc = ops[base + 1], ops[base + 2]
            n = funs[fid][1]
            enc = 0
            for j in range(argc):
                enc = enc * n + stack[sp - 1 - j]
            sp -= argc
            stack[sp] = funs[fid][0][enc]
            sp += 1
    return stack[0]


def eval_formula_batch(program, tables, flat_tuples, count):
    """Evaluate a literal-conjunction program over ``count`` assignments
    packed ``arity`` ints apiece in ``flat_tuples``."""
    arity = program.arity
    lits, bounds, ops = program.lits, program.bounds, program.ops
    nlits = program.nlits
    n = tables.n
    r1, r2, rn = tables.r1, tables.r2, tables.rn
    funs = [(f, n) for f in tables.funs]
    stack = [0] * (program.max_stack + 1)
    vals = [0] * 8
    out = bytearray(count)
    for t in range(count):
        asg = flat_tuples[t * arity:(t + 1) * arity]
        sat = True
        for li in range(nlits):
            lb = 5 * li
            expected, kind, rel = lits[lb], lits[lb + 1], lits[lb + 2]
            t0, nt = lits[lb + 3], lits[lb + 4]
            if nt > len(vals):
                vals = [0] * nt
            for j in range(nt):
                vals[j] = _eval_term(ops, bounds[t0 + j], bounds[t0 + j + 1], asg, funs, stack)
            if kind == LIT_EQ:
                got = 1 if vals[0] == vals[1] else 0
            else:
                if nt == 1:
                    got = r1[rel][vals[0]]
                elif nt == 2:
                    got = r2[rel][vals[0] * n + vals[1]]
                else:
                    enc = 0
                    for j in range(nt - 1, -1, -1):
                        enc = enc * n + vals[j]
                    got = 1 if enc in rn[rel] else 0
            if got != expected:
                sat = False
                break
        out[t] = 1 if sat else 0
    return out
