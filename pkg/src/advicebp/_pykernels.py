"""Pure-Python batch kernels.

Reference implementations for the compiled ``_ckernels`` module; both must
return identical results.  Inputs are passed as masks where bit ``i`` holds
the value of variable ``x_{i+1}``.  Permutations are passed as codes into
the 120-element lexicographic enumeration of S5, and composition goes
through the flat ``table`` (``table[a * 120 + b]`` is a-then-b).
"""

# Plan opcodes, shared with _ckernels.pyx.
OP_EMPTY, OP_LEAF, OP_CONCAT, OP_CONJ, OP_INV, OP_RMUL = range(6)


def circuit_eval(kinds, a0, a1, output, masks):
    out = []
    size = len(kinds)
    for mask in masks:
        v = [0] * size
        for i in range(size):
            k = kinds[i]
            if k == 0:
                v[i] = (mask >> a0[i]) & 1
            elif k == 1:
                v[i] = a0[i]
            elif k == 2:
                v[i] = 1 - v[a0[i]]
            elif k == 3:
                v[i] = v[a0[i]] & v[a1[i]]
            else:
                v[i] = v[a0[i]] | v[a1[i]]
        out.append(v[output])
    return out


def perm_yields(var_idx, codes1, codes0, masks, table):
    out = []
    instrs = list(zip(var_idx, codes1, codes0))
    for mask in masks:
        y = 0
        for var, c1, c0 in instrs:
            y = table[y * 120 + (c1 if (mask >> var) & 1 else c0)]
        out.append(y)
    return out


def plan_yields(kinds, a0, a1, a2, root, masks, table, inv_table):
    # Node-at-a-time over all masks; node i only references nodes < i.
    masks = list(masks)
    count = len(masks)
    vals = [None] * len(kinds)
    for i, k in enumerate(kinds):
        if k == OP_EMPTY:
            vals[i] = [0] * count
        elif k == OP_LEAF:
            var, c1, c0 = a0[i], a1[i], a2[i]
            vals[i] = [c1 if (m >> var) & 1 else c0 for m in masks]
        elif k == OP_CONCAT:
            vals[i] = [table[p * 120 + q] for p, q in zip(vals[a0[i]], vals[a1[i]])]
        elif k == OP_CONJ:
            g = a1[i]
            gi = inv_table[g]
            vals[i] = [table[table[gi * 120 + y] * 120 + g] for y in vals[a0[i]]]
        elif k == OP_INV:
            vals[i] = [inv_table[y] for y in vals[a0[i]]]
        elif k == OP_RMUL:
            h = a1[i]
            vals[i] = [table[y * 120 + h] for y in vals[a0[i]]]
        else:
            raise ValueError(f"unknown plan opcode {k}")
    return list(vals[root])


def bp_eval(level_sizes, var_idx, e0, e1, sinks, start, masks):
    offsets = []
    total = 0
    for size in level_sizes:
        offsets.append(total)
        total += size
    levels = len(level_sizes)
    out = []
    for mask in masks:
        node = start
        for t in range(levels):
            j = offsets[t] + node
            node = e1[j] if (mask >> var_idx[j]) & 1 else e0[j]
        out.append(sinks[node])
    return out


def merge_pass(values, width):
    """Merge adjacent sorted runs of ``width``; return (merged, comparisons)."""
    n = len(values)
    out = []
    comparisons = 0
    for lo in range(0, n, 2 * width):
        mid = min(lo + width, n)
        hi = min(lo + 2 * width, n)
        i, j = lo, mid
        while i < mid and j < hi:
            comparisons += 1
            if values[i] <= values[j]:
                out.append(values[i])
                i += 1
            else:
                out.append(values[j])
                j += 1
        out.extend(values[i:mid])
        out.extend(values[j:hi])
    return out, comparisons


# Advice machine on raw bytes.  Control-state codes follow the declaration
# order of advice.Control; a register snapshot (state, s, b, c) is packed as
# ((state * 5 + s - 1) * 2 + b) * 5 + c - 1, which is below 750.
TM_STATES = 15
TM_OK, TM_ERROR = 0, 1


def tm_run(adv, inp):
    """Run the advice machine; returns
    (status, bit, adv_left, adv_right, in_left, in_right, steps, witness, monotone).

    ``status`` is TM_ERROR on any grammar or length violation; callers re-run
    the reference machine to get the precise diagnosis.
    """
    na, ni = len(adv), len(inp)
    st, s, b, c = 0, 1, 0, 1
    ap = ip = 0
    al = ar = il = ir = steps = 0
    seen = bytearray(750)
    mono = 1
    err = (TM_ERROR, 0, 0, 0, 0, 0, 0, [], 0)
    while st < 13:
        if ap >= na:
            return err
        sym = adv[ap]
        before = ap
        if st == 0:
            if sym != 66:  # B
                return err
            ap += 1
            ar += 1
            st = 1
        elif st == 1:
            if sym == 73:  # I
                st = 2
            elif sym == 65:  # A
                c = 1
                st = 10
            else:
                return err
            ap += 1
            ar += 1
        elif st == 2:
            if inp[ip] == 60:  # <
                st = 3
            else:
                ip -= 1
                il += 1
        elif st == 3 or st == 4:
            if sym == 117 or sym == 109:  # u, m
                ip += 1
                ir += 1
                if ip >= ni or inp[ip] == 62:  # >
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
            if not 49 <= sym <= 53:
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
            if sym != 97 and sym != 114:  # a, r
                return err
            if st == 10 and c == s:
                st = 11 if sym == 97 else 12
            ap += 1
            ar += 1
            if c == 5:
                c = 1
                st = 13 if st == 11 else 14
                if ap >= na or adv[ap] != 69:  # E
                    return err
            else:
                c += 1
        if ap < before:
            mono = 0
        steps += 1
        seen[((st * 5 + s - 1) * 2 + b) * 5 + c - 1] = 1
    witness = [i for i in range(750) if seen[i]]
    return (TM_OK, 1 if st == 13 else 0, al, ar, il, ir, steps, witness, mono)
