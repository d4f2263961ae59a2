# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels; same signatures and results as _pykernels."""

from libc.stdlib cimport malloc, free

cdef enum:
    OP_EMPTY = 0
    OP_LEAF = 1
    OP_CONCAT = 2
    OP_CONJ = 3
    OP_INV = 4
    OP_RMUL = 5


cdef int* _to_c(seq, Py_ssize_t n) except NULL:
    cdef int* buf = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    cdef Py_ssize_t i
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        buf[i] = seq[i]
    return buf


def circuit_eval(kinds, a0, a1, Py_ssize_t output, masks):
    cdef Py_ssize_t size = len(kinds), i
    cdef int* k = _to_c(kinds, size)
    cdef int* x = _to_c(a0, size)
    cdef int* y = _to_c(a1, size)
    cdef unsigned char* v = <unsigned char*> malloc(size + 1)
    cdef unsigned long long mask
    out = []
    try:
        for m in masks:
            mask = m
            for i in range(size):
                if k[i] == 0:
                    v[i] = (mask >> x[i]) & 1
                elif k[i] == 1:
                    v[i] = x[i]
                elif k[i] == 2:
                    v[i] = 1 - v[x[i]]
                elif k[i] == 3:
                    v[i] = v[x[i]] & v[y[i]]
                else:
                    v[i] = v[x[i]] | v[y[i]]
            out.append(v[output])
    finally:
        free(k); free(x); free(y); free(v)
    return out


def perm_yields(var_idx, codes1, codes0, masks, table):
    cdef Py_ssize_t length = len(var_idx), i
    cdef int* var = _to_c(var_idx, length)
    cdef int* c1 = _to_c(codes1, length)
    cdef int* c0 = _to_c(codes0, length)
    cdef int* tab = _to_c(table, 14400)
    cdef unsigned long long mask
    cdef int yv
    out = []
    try:
        for m in masks:
            mask = m
            yv = 0
            for i in range(length):
                if (mask >> var[i]) & 1:
                    yv = tab[yv * 120 + c1[i]]
                else:
                    yv = tab[yv * 120 + c0[i]]
            out.append(yv)
    finally:
        free(var); free(c1); free(c0); free(tab)
    return out


def plan_yields(kinds, a0, a1, a2, Py_ssize_t root, masks, table, inv_table):
    cdef Py_ssize_t size = len(kinds), i
    cdef int* k = _to_c(kinds, size)
    cdef int* x = _to_c(a0, size)
    cdef int* y = _to_c(a1, size)
    cdef int* z = _to_c(a2, size)
    cdef int* tab = _to_c(table, 14400)
    cdef int* inv = _to_c(inv_table, 120)
    cdef int* v = <int*> malloc((size + 1) * sizeof(int))
    cdef unsigned long long mask
    out = []
    try:
        for i in range(size):
            if k[i] < OP_EMPTY or k[i] > OP_RMUL:
                raise ValueError(f"unknown plan opcode {k[i]}")
        for m in masks:
            mask = m
            for i in range(size):
                if k[i] == OP_EMPTY:
                    v[i] = 0
                elif k[i] == OP_LEAF:
                    v[i] = y[i] if (mask >> x[i]) & 1 else z[i]
                elif k[i] == OP_CONCAT:
                    v[i] = tab[v[x[i]] * 120 + v[y[i]]]
                elif k[i] == OP_CONJ:
                    v[i] = tab[tab[inv[y[i]] * 120 + v[x[i]]] * 120 + y[i]]
                elif k[i] == OP_INV:
                    v[i] = inv[v[x[i]]]
                else:
                    v[i] = tab[v[x[i]] * 120 + y[i]]
            out.append(v[root])
    finally:
        free(k); free(x); free(y); free(z); free(tab); free(inv); free(v)
    return out


def bp_eval(level_sizes, var_idx, e0, e1, sinks, Py_ssize_t start, masks):
    cdef Py_ssize_t levels = len(level_sizes), total = len(var_idx), t
    cdef int* sizes = _to_c(level_sizes, levels)
    cdef int* offs = <int*> malloc((levels + 1) * sizeof(int))
    cdef int* var = _to_c(var_idx, total)
    cdef int* f0 = _to_c(e0, total)
    cdef int* f1 = _to_c(e1, total)
    cdef int* snk = _to_c(sinks, len(sinks))
    cdef unsigned long long mask
    cdef int node, j, acc = 0
    out = []
    try:
        for t in range(levels):
            offs[t] = acc
            acc += sizes[t]
        for m in masks:
            mask = m
            node = start
            for t in range(levels):
                j = offs[t] + node
                node = f1[j] if (mask >> var[j]) & 1 else f0[j]
            out.append(snk[node])
    finally:
        free(sizes); free(offs); free(var); free(f0); free(f1); free(snk)
    return out


def merge_pass(values, Py_ssize_t width):
    cdef Py_ssize_t n = len(values), lo, mid, hi, i, j, w = 0
    cdef long long comparisons = 0
    cdef int* src = _to_c(values, n)
    cdef int* dst = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    try:
        lo = 0
        while lo < n:
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i = lo
            j = mid
            while i < mid and j < hi:
                comparisons += 1
                if src[i] <= src[j]:
                    dst[w] = src[i]; i += 1
                else:
                    dst[w] = src[j]; j += 1
                w += 1
            while i < mid:
                dst[w] = src[i]; i += 1; w += 1
            while j < hi:
                dst[w] = src[j]; j += 1; w += 1
            lo += 2 * width
        out = [dst[i] for i in range(n)]
    finally:
        free(src); free(dst)
    return out, comparisons


TM_STATES = 15
TM_OK = 0
TM_ERROR = 1


def tm_run(const unsigned char[:] adv, const unsigned char[:] inp):
    cdef Py_ssize_t na = adv.shape[0], ni = inp.shape[0]
    cdef Py_ssize_t ap = 0, ip = 0, before
    cdef long long al = 0, ar = 0, il = 0, ir = 0, steps = 0
    cdef int st = 0, s = 1, b = 0, c = 1, mono = 1, sym, i
    cdef unsigned char seen[750]
    for i in range(750):
        seen[i] = 0
    err = (TM_ERROR, 0, 0, 0, 0, 0, 0, [], 0)
    while st < 13:
        if ap >= na:
            return err
        sym = adv[ap]
        before = ap
        if st == 0:
            if sym != 66:
                return err
            ap += 1
            ar += 1
            st = 1
        elif st == 1:
            if sym == 73:
                st = 2
            elif sym == 65:
                c = 1
                st = 10
            else:
                return err
            ap += 1
            ar += 1
        elif st == 2:
            if inp[ip] == 60:
                st = 3
            else:
                ip -= 1
                il += 1
        elif st == 3 or st == 4:
            if sym == 117 or sym == 109:
                ip += 1
                ir += 1
                if ip >= ni or inp[ip] == 62:
                    return err
                if sym == 109:
                    if st == 4:
                        return err
                    b = 1 if inp[ip] == 49 else 0
                    st = 4
                ap += 1
                ar += 1
            elif st == 3:
                return err
            else:
                st = 5
        elif st == 5:
            ip += 1
            ir += 1
            if ip >= ni or inp[ip] != 62:
                return err
            c = 1
            st = 6 if b else 7
        elif st <= 9:
            if sym < 49 or sym > 53:
                return err
            if (st == 6 or st == 8) and c == s:
                s = sym - 48
                st += 1
            ap += 1
            ar += 1
            if c == 5:
                c = 1
                if st <= 7:
                    st = 9 if b else 8
                else:
                    st = 1
            else:
                c += 1
        else:
            if sym != 97 and sym != 114:
                return err
            if st == 10 and c == s:
                st = 11 if sym == 97 else 12
            ap += 1
            ar += 1
            if c == 5:
                c = 1
                st = 13 if st == 11 else 14
                if ap >= na or adv[ap] != 69:
                    return err
            else:
                c += 1
        if ap < before:
            mono = 0
        steps += 1
        seen[((st * 5 + s - 1) * 2 + b) * 5 + c - 1] = 1
    witness = [i for i in range(750) if seen[i]]
    return (TM_OK, 1 if st == 13 else 0, al, ar, il, ir, steps, witness, mono)
