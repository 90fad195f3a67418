"""Backtracking kernel for functors out of a finite poset.

One function does all the searching in this package: extend a partial
functor B → C (RLP filler search) and enumerate boundary functors (mode 1).
It is written against plain int64 arrays so the same source compiles under
numba's nopython mode; set KANFORGE_NO_NUMBA=1 to force the pure
Python/numpy path (the benchmark under benchmarks/ compares the two).

Poset elements must be indexed in a linear extension (callers reindex).
State is a dense matrix fmor[i, j] = morphism id assigned to the pair
i <= j; assigning a covering pair propagates composites downward and any
clash prunes the branch, so completed assignments are genuine functors.
"""

import os

import numpy as np

STATUS_EXHAUSTED = 0   # search space fully explored
STATUS_FOUND = 1       # mode 0: a filler was found
STATUS_BUDGET = 2      # node budget hit, inconclusive
STATUS_TRUNCATED = 3   # mode 1: output buffer filled before exhaustion


def _poset_functor_search(leq, var_elt, var_src, fixed_obj, fixed_mor,
                          dom, cod, comp, ident, hom_off, hom_flat, n_obj,
                          budget, mode, out_obj, out_mor):
    n = fixed_obj.shape[0]
    n_vars = var_elt.shape[0]
    max_out = out_obj.shape[0]
    nodes = np.int64(0)
    found = np.int64(0)

    cur_obj = np.full(n, -1, dtype=np.int64)
    fmor = fixed_mor.copy()
    trail = np.empty((n_vars * (n + 2), 2), dtype=np.int64)
    tlen = 0
    tstart = np.zeros(n_vars, dtype=np.int64)
    cpos = np.zeros(n_vars, dtype=np.int64)
    ckind = np.zeros(n_vars, dtype=np.int64)
    cbase = np.zeros(n_vars, dtype=np.int64)
    clen = np.zeros(n_vars, dtype=np.int64)

    v = 0
    entering = True
    while True:
        if v == n_vars:
            for j in range(n):
                out_obj[found, j] = cur_obj[j]
                for i in range(n):
                    out_mor[found, i, j] = fmor[i, j]
            found += 1
            if mode == 0:
                return STATUS_FOUND, nodes, found
            if found == max_out:
                return STATUS_TRUNCATED, nodes, found
            v -= 1
            entering = False
            continue
        if entering:
            j = var_elt[v]
            ci = var_src[v]
            if ci < 0:
                if fixed_obj[j] >= 0:
                    ckind[v] = 1
                    clen[v] = 1
                else:
                    ckind[v] = 0
                    clen[v] = n_obj
            else:
                if fmor[ci, j] >= 0:
                    ckind[v] = 3
                    clen[v] = 1
                else:
                    a = cur_obj[ci]
                    b = cur_obj[j]
                    s = hom_off[a * n_obj + b]
                    ckind[v] = 2
                    cbase[v] = s
                    clen[v] = hom_off[a * n_obj + b + 1] - s
            cpos[v] = 0
        else:
            for t in range(tstart[v], tlen):
                r = trail[t, 0]
                c = trail[t, 1]
                if r < 0:
                    cur_obj[c] = -1
                else:
                    fmor[r, c] = -1
            tlen = tstart[v]
            cpos[v] += 1

        advanced = False
        while cpos[v] < clen[v]:
            nodes += 1
            if budget > 0 and nodes > budget:
                return STATUS_BUDGET, nodes, found
            tstart[v] = tlen
            j = var_elt[v]
            ci = var_src[v]
            ok = True
            if ci < 0:
                if ckind[v] == 1:
                    val = fixed_obj[j]
                else:
                    val = cpos[v]
                cur_obj[j] = val
                trail[tlen, 0] = -1
                trail[tlen, 1] = j
                tlen += 1
                if fmor[j, j] >= 0:
                    ok = fmor[j, j] == ident[val]
                else:
                    fmor[j, j] = ident[val]
                    trail[tlen, 0] = j
                    trail[tlen, 1] = j
                    tlen += 1
            else:
                if ckind[v] == 3:
                    m = fmor[ci, j]
                    if dom[m] != cur_obj[ci] or cod[m] != cur_obj[j]:
                        ok = False
                else:
                    m = hom_flat[cbase[v] + cpos[v]]
                if ok:
                    if fmor[ci, j] < 0:
                        fmor[ci, j] = m
                        trail[tlen, 0] = ci
                        trail[tlen, 1] = j
                        tlen += 1
                    for z in range(ci):
                        if leq[z, ci] == 0:
                            continue
                        cc = comp[fmor[z, ci], m]
                        if cc < 0:
                            ok = False
                            break
                        if fmor[z, j] < 0:
                            fmor[z, j] = cc
                            trail[tlen, 0] = z
                            trail[tlen, 1] = j
                            tlen += 1
                        elif fmor[z, j] != cc:
                            ok = False
                            break
            if ok:
                advanced = True
                break
            for t in range(tstart[v], tlen):
                r = trail[t, 0]
                c = trail[t, 1]
                if r < 0:
                    cur_obj[c] = -1
                else:
                    fmor[r, c] = -1
            tlen = tstart[v]
            cpos[v] += 1

        if advanced:
            v += 1
            entering = True
        else:
            v -= 1
            entering = False
            if v < 0:
                return STATUS_EXHAUSTED, nodes, found


search_kernel_py = _poset_functor_search

if os.environ.get("KANFORGE_NO_NUMBA"):
    JIT_ENABLED = False
    search_kernel = search_kernel_py
else:
    try:
        from numba import njit
        search_kernel = njit(cache=True)(_poset_functor_search)
        JIT_ENABLED = True
    except ImportError:
        JIT_ENABLED = False
        search_kernel = search_kernel_py
