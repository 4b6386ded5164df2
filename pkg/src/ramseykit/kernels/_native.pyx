# cython: boundscheck=False, wraparound=False, cdivision=True
"""Native kernel lane: a Cython transcription of ``pure.py``.

Interprets the exact same flattened formats from ``encode.py``; any observable
divergence from the pure lane is a bug (see tests/test_kernels.py).
"""

from cpython.set cimport PySet_Contains

from .encode import ARROW_BUDGET, ARROW_FAILS, ARROW_HOLDS

import array as _array

LANE = "native"

DEF K_R1 = 1
DEF K_R2 = 2
DEF K_RN = 3
DEF K_FUN = 4

DEF L_EQ = 0

DEF T_VAR = 0
DEF T_VALUE = 1
DEF T_APPLY = 2


cdef inline int popcount64(unsigned long long x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def match_embeddings(plan, limit=None):
    """Mirror of ``pure.match_embeddings``: lex order, optional early stop."""
    if not plan.feasible:
        return []
    cdef int np_ = plan.np
    cdef int nh = plan.nh
    if np_ == 0:
        return [()]
    if np_ > nh:
        return []

    cdef const int[:] starts = plan.starts
    cdef const int[:] recs = plan.recs
    cdef const int[:] aux = plan.aux
    tabs = plan.tables
    r1_list = tabs.r1
    r2_list = tabs.r2
    rn_list = tabs.rn
    funs_list = tabs.funs

    cdef int has_limit = 0
    cdef long lim = 0
    if limit is not None:
        has_limit = 1
        lim = limit

    pinned_arr = _array.array("i", plan.pinned)
    asg_arr = _array.array("i", [-1] * np_)
    cdef int[:] pinned_mv = pinned_arr
    cdef int[:] asg_mv = asg_arr
    used_arr = bytearray(nh)
    cdef unsigned char[:] used = used_arr

    out = []
    cdef int p = 0
    cdef int cand = 0
    cdef int c, i, j, kind, sid, base, off, arity, enc, ok
    cdef const unsigned char[:] row

    while True:
        if cand >= nh:
            p -= 1
            if p < 0:
                return out
            c = asg_mv[p]
            used[c] = 0
            asg_mv[p] = -1
            cand = c + 1 if pinned_mv[p] < 0 else nh
            continue
        if pinned_mv[p] >= 0:
            c = pinned_mv[p]
            if cand > c:
                cand = nh
                continue
            cand = c
        if used[cand]:
            cand += 1
            continue
        asg_mv[p] = cand
        used[cand] = 1

        ok = 1
        for i in range(starts[p], starts[p + 1]):
            base = 6 * i
            kind = recs[base]
            sid = recs[base + 1]
            if kind == K_R1:
                row = r1_list[sid]
                if row[asg_mv[recs[base + 2]]] != recs[base + 5]:
                    ok = 0
                    break
            elif kind == K_R2:
                row = r2_list[sid]
                if row[asg_mv[recs[base + 2]] * nh + asg_mv[recs[base + 3]]] != recs[base + 5]:
                    ok = 0
                    break
            elif kind == K_RN:
                off = recs[base + 2]
                arity = recs[base + 3]
                enc = 0
                for j in range(arity - 1, -1, -1):
                    enc = enc * nh + asg_mv[aux[off + j]]
                if PySet_Contains(rn_list[sid], enc) != recs[base + 5]:
                    ok = 0
                    break
            else:
                off = recs[base + 2]
                arity = recs[base + 3]
                enc = 0
                for j in range(arity - 1, -1, -1):
                    enc = enc * nh + asg_mv[aux[off + j]]
                if funs_list[sid][enc] != asg_mv[recs[base + 4]]:
                    ok = 0
                    break

        if ok:
            if p == np_ - 1:
                out.append(tuple(asg_arr))
                if has_limit and len(out) >= lim:
                    return out
                used[cand] = 0
                asg_mv[p] = -1
                cand = cand + 1 if pinned_mv[p] < 0 else nh
            else:
                p += 1
                cand = 0
        else:
            used[cand] = 0
            asg_mv[p] = -1
            cand = cand + 1 if pinned_mv[p] < 0 else nh


def arrow_search(int k, int m, bm_starts_obj, bm_items_obj, long long budget):
    """Mirror of ``pure.arrow_search``."""
    cdef const int[:] bm_starts = bm_starts_obj
    cdef const int[:] bm_items = bm_items_obj
    cdef int nb = len(bm_starts_obj) - 1
    cdef int j, q, idx

    for j in range(nb):
        if bm_starts[j] == bm_starts[j + 1]:
            return ARROW_HOLDS, None, 0
    if m == 0:
        if nb > 0:
            return ARROW_HOLDS, None, 0
        return ARROW_FAILS, [], 0
    if nb == 0:
        return ARROW_FAILS, [0] * m, 0

    # copy -> list of B-copies containing it, flattened
    cs_arr = _array.array("i", [0] * (m + 1))
    cdef int[:] cstarts = cs_arr
    cdef int total = bm_starts[nb]
    ci_arr = _array.array("i", [0] * total)
    cdef int[:] citems = ci_arr
    cnt_arr = _array.array("i", [0] * m)
    cdef int[:] cnt = cnt_arr
    for idx in range(total):
        cnt[bm_items[idx]] += 1
    for j in range(m):
        cstarts[j + 1] = cstarts[j] + cnt[j]
    fill_arr = _array.array("i", [0] * m)
    cdef int[:] fill = fill_arr
    for j in range(nb):
        for idx in range(bm_starts[j], bm_starts[j + 1]):
            q = bm_items[idx]
            citems[cstarts[q] + fill[q]] = j
            fill[q] += 1

    size_arr = _array.array("i", [0] * nb)
    cdef int[:] size = size_arr
    for j in range(nb):
        size[j] = bm_starts[j + 1] - bm_starts[j]

    colors_arr = _array.array("i", [-1] * m)
    cdef int[:] colors = colors_arr
    colored_arr = _array.array("i", [0] * nb)
    cdef int[:] colored = colored_arr
    mask_arr = _array.array("q", [0] * nb)
    cdef long long[:] mask = mask_arr
    trial_arr = _array.array("i", [0] * m)
    cdef int[:] trial = trial_arr
    mu_arr = _array.array("i", [0] * (m + 1))
    cdef int[:] max_used = mu_arr

    cdef int bi_count = 0
    cdef long long nodes = 0
    cdef int p = 0
    cdef int c, limit_c, oldc, touched, pruned, present, had, bad, after, before
    cdef long long bit

    while True:
        if p < 0:
            return ARROW_HOLDS, None, nodes
        c = trial[p]
        limit_c = max_used[p] + 1
        if limit_c > k:
            limit_c = k
        if c >= limit_c:
            p -= 1
            if p < 0:
                return ARROW_HOLDS, None, nodes
            oldc = colors[p]
            bit = (<long long>1) << oldc
            for idx in range(cstarts[p], cstarts[p + 1]):
                j = citems[idx]
                colored[j] -= 1
                had = popcount64(mask[j]) >= 2
                present = 0
                for q in range(bm_starts[j], bm_starts[j + 1]):
                    if bm_items[q] != p and colors[bm_items[q]] == oldc:
                        present = 1
                        break
                if not present:
                    mask[j] &= ~bit
                if had and popcount64(mask[j]) < 2:
                    bi_count -= 1
            colors[p] = -1
            trial[p] = oldc + 1
            continue
        nodes += 1
        if nodes > budget:
            return ARROW_BUDGET, None, nodes
        colors[p] = c
        bit = (<long long>1) << c
        pruned = 0
        touched = 0
        for idx in range(cstarts[p], cstarts[p + 1]):
            j = citems[idx]
            touched += 1
            colored[j] += 1
            before = popcount64(mask[j])
            mask[j] |= bit
            after = popcount64(mask[j])
            if before < 2 and after >= 2:
                bi_count += 1
            if colored[j] == size[j] and after == 1:
                pruned = 1
                break
        if pruned:
            for idx in range(cstarts[p], cstarts[p] + touched):
                j = citems[idx]
                colored[j] -= 1
                had = popcount64(mask[j]) >= 2
                present = 0
                for q in range(bm_starts[j], bm_starts[j + 1]):
                    if bm_items[q] != p and colors[bm_items[q]] == c:
                        present = 1
                        break
                if not present:
                    mask[j] &= ~bit
                if had and popcount64(mask[j]) < 2:
                    bi_count -= 1
            colors[p] = -1
            trial[p] = c + 1
            continue
        if bi_count == nb:
            witness = list(colors_arr)
            for q in range(p + 1, m):
                witness[q] = 0
            return ARROW_FAILS, witness, nodes
        if p == m - 1:
            bad = 1
            for j in range(nb):
                if popcount64(mask[j]) == 1:
                    bad = 0
                    break
            if bad:
                return ARROW_FAILS, list(colors_arr), nodes
            for idx in range(cstarts[p], cstarts[p + 1]):
                j = citems[idx]
                colored[j] -= 1
                had = popcount64(mask[j]) >= 2
                present = 0
                for q in range(bm_starts[j], bm_starts[j + 1]):
                    if bm_items[q] != p and colors[bm_items[q]] == c:
                        present = 1
                        break
                if not present:
                    mask[j] &= ~bit
                if had and popcount64(mask[j]) < 2:
                    bi_count -= 1
            colors[p] = -1
            trial[p] = c + 1
            continue
        max_used[p + 1] = max_used[p] if max_used[p] > c + 1 else c + 1
        p += 1
        trial[p] = 0


def eval_formula_batch(program, tables, flat_tuples_obj, int count):
    """Mirror of ``pure.eval_formula_batch``."""
    cdef int arity = program.arity
    cdef const int[:] lits = program.lits
    cdef const int[:] bounds = program.bounds
    cdef const int[:] ops = program.ops
    cdef int nlits = program.nlits
    cdef int n = tables.n
    r1_list = tables.r1
    r2_list = tables.r2
    rn_list = tables.rn
    funs_list = tables.funs

    cdef const int[:] flat
    if count > 0 and arity > 0:
        flat = flat_tuples_obj
    else:
        flat = _array.array("i", [0])

    stack_arr = _array.array("i", [0] * (program.max_stack + 2))
    cdef int[:] stack = stack_arr
    cdef int maxnt = 2
    cdef int li0
    for li0 in range(nlits):
        if lits[5 * li0 + 4] > maxnt:
            maxnt = lits[5 * li0 + 4]
    vals_arr = _array.array("i", [0] * (maxnt + 1))
    cdef int[:] vals = vals_arr

    out = bytearray(count)
    cdef unsigned char[:] res = out

    cdef int t, li, lb, expected, kind, rel, t0, nt, j, i, base, op, sp, got, enc, toff, q, sat
    cdef const unsigned char[:] row

    for t in range(count):
        toff = t * arity
        sat = 1
        for li in range(nlits):
            lb = 5 * li
            expected = lits[lb]
            kind = lits[lb + 1]
            rel = lits[lb + 2]
            t0 = lits[lb + 3]
            nt = lits[lb + 4]
            for j in range(nt):
                sp = 0
                for i in range(bounds[t0 + j], bounds[t0 + j + 1]):
                    base = 3 * i
                    op = ops[base]
                    if op == T_VAR:
                        stack[sp] = flat[toff + ops[base + 1]]
                        sp += 1
                    elif op == T_VALUE:
                        stack[sp] = ops[base + 1]
                        sp += 1
                    else:
                        enc = 0
                        for q in range(ops[base + 2]):
                            enc = enc * n + stack[sp - 1 - q]
                        sp -= ops[base + 2]
                        stack[sp] = funs_list[ops[base + 1]][enc]
                        sp += 1
                vals[j] = stack[0]
            if kind == L_EQ:
                got = 1 if vals[0] == vals[1] else 0
            else:
                if nt == 1:
                    row = r1_list[rel]
                    got = row[vals[0]]
                elif nt == 2:
                    row = r2_list[rel]
                    got = row[vals[0] * n + vals[1]]
                else:
                    enc = 0
                    for j in range(nt - 1, -1, -1):
                        enc = enc * n + vals[j]
                    got = 1 if PySet_Contains(rn_list[rel], enc) == 1 else 0
            if got != expected:
                sat = 0
                break
        res[t] = 1 if sat else 0
    return out
