"""Hot numeric kernels, written once in nopython-compatible style.

Every function here takes only numpy arrays and scalars so the same source
runs either JIT-compiled (numba backend) or as plain interpreted loops
(numpy backend). Attribute subsets are int64 bitmasks; `table` is the
subset-sum table of attribute byte sizes, so the payload of mask m is
`ce * table[m]` and a sub-block costs `structure + ce * table[m]` bytes,
where `structure = per_edge * c_e + per_list * c_n`.

Float comparisons break ties toward the lowest index, which keeps every
search deterministic for a fixed input.
"""

import numpy as np

F_TOL = 1e-9  # absolute tolerance on overhead feasibility checks


def attr_sum_table(sizes):
    """Subset-sum table over attribute sizes: table[m] = sum of sizes in m."""
    n = sizes.shape[0]
    table = np.zeros(1 << n, np.int64)
    for m in range(1, 1 << n):
        low = m & (-m)
        i = 0
        b = low
        while b > 1:
            b >>= 1
            i += 1
        table[m] = table[m ^ low] + sizes[i]
    return table


def eval_io_intersect(block_masks, block_sizes, qmasks, weff, per_query):
    """Query I/O under the intersection rule: a query reads every sub-block
    sharing at least one of its attributes. Returns the weighted total and
    fills per_query (0.0 for zero-weight queries)."""
    total = 0.0
    for qi in range(qmasks.shape[0]):
        per_query[qi] = 0.0
        if weff[qi] == 0.0:
            continue
        acc = 0.0
        for b in range(block_masks.shape[0]):
            if block_masks[b] & qmasks[qi]:
                acc += block_sizes[b]
        per_query[qi] = weff[qi] * acc
        total += per_query[qi]
    return total


def greedy_cover(block_masks, block_sizes, ce, table, qmask, order):
    """Greedy cover of one query over possibly-overlapping sub-blocks.

    Repeatedly picks the unselected sub-block with the highest relative
    marginal gain: payload bytes of its not-yet-covered query attributes per
    byte of sub-block read. Only sub-blocks contributing at least one new
    query attribute are candidates, so every round makes progress. Ties go to
    the lowest index. Writes the selection order into `order` and returns
    (count, total bytes read)."""
    m = block_masks.shape[0]
    covered = 0
    cnt = 0
    total = 0.0
    while (covered & qmask) != qmask:
        best = -1
        best_gain = 0.0
        for b in range(m):
            used = False
            for j in range(cnt):
                if order[j] == b:
                    used = True
                    break
            if used:
                continue
            newbits = block_masks[b] & qmask & ~covered
            if newbits == 0:
                continue
            gain = ce * table[newbits] / block_sizes[b]
            if best < 0 or gain > best_gain:
                best = b
                best_gain = gain
        if best < 0:
            break  # unreachable for covering layouts
        order[cnt] = best
        cnt += 1
        covered |= block_masks[best]
        total += block_sizes[best]
    return cnt, total


def eval_io_greedy_cover(block_masks, block_sizes, ce, table, qmasks, weff, per_query):
    """Query I/O where each query reads the sub-blocks chosen by greedy_cover."""
    total = 0.0
    scratch = np.empty(block_masks.shape[0], np.int64)
    for qi in range(qmasks.shape[0]):
        per_query[qi] = 0.0
        if weff[qi] == 0.0:
            continue
        _, acc = greedy_cover(block_masks, block_sizes, ce, table, qmasks[qi], scratch)
        per_query[qi] = weff[qi] * acc
        total += per_query[qi]
    return total


def assign_attributes(order, table, qmasks, weff, structure, ce, frac, alpha):
    """Non-overlapping greedy partitioner.

    For each slot count k = 1..n, assigns attributes in the given order to the
    slot that minimizes the partial query I/O (queries evaluated over the
    attributes placed so far). Stops growing k once the overhead of the
    non-empty slots exceeds alpha, and keeps the cheapest feasible assignment.
    Returns (slot masks, slot count, best I/O); empty slots stay zero.
    """
    n = order.shape[0]
    nq = qmasks.shape[0]
    parts = np.zeros(n, np.int64)
    best_parts = np.zeros(n, np.int64)
    best_k = 0
    best_io = np.inf
    for k in range(1, n + 1):
        for i in range(n):
            parts[i] = 0
        for idx in range(n):
            bit = 1 << order[idx]
            best_slot = 0
            best_cost = np.inf
            for slot in range(k):
                parts[slot] |= bit
                cost = 0.0
                for qi in range(nq):
                    if weff[qi] == 0.0:
                        continue
                    acc = 0.0
                    for s2 in range(k):
                        pm = parts[s2]
                        if pm != 0 and (pm & qmasks[qi]) != 0:
                            acc += structure + ce * table[pm]
                    cost += weff[qi] * acc
                if cost < best_cost:
                    best_cost = cost
                    best_slot = slot
                parts[slot] &= ~bit
            parts[best_slot] |= bit
        nonempty = 0
        for slot in range(k):
            if parts[slot] != 0:
                nonempty += 1
        overhead = (nonempty - 1) * frac
        if overhead > alpha + F_TOL:
            break
        io = 0.0
        for qi in range(nq):
            if weff[qi] == 0.0:
                continue
            acc = 0.0
            for slot in range(k):
                pm = parts[slot]
                if pm != 0 and (pm & qmasks[qi]) != 0:
                    acc += structure + ce * table[pm]
            io += weff[qi] * acc
        if io < best_io:
            best_io = io
            best_k = k
            for slot in range(n):
                best_parts[slot] = parts[slot] if slot < k else 0
    return best_parts, best_k, best_io


def merge_partitions(masks_in, table, qmasks, weff, structure, ce, s_block, alpha):
    """Overlapping greedy partitioner: merge sub-block pairs until feasible.

    While the overhead exceeds alpha, merges the pair whose query-I/O increase
    per byte of storage reclaimed is smallest (ties to the lowest index pair).
    A merge drops both operands and appends their union; if the union equals
    an existing sub-block it simply collapses into it. Returns
    (masks, count, merges done)."""
    m0 = masks_in.shape[0]
    masks = np.zeros(m0, np.int64)
    for i in range(m0):
        masks[i] = masks_in[i]
    cnt = m0
    cand = np.zeros(m0, np.int64)
    per_q = np.empty(qmasks.shape[0], np.float64)
    merges = 0
    while cnt > 1:
        total_bytes = 0.0
        for i in range(cnt):
            total_bytes += structure + ce * table[masks[i]]
        overhead = total_bytes / s_block - 1.0
        if overhead <= alpha + F_TOL:
            break
        io_before = eval_io_greedy_cover(masks[:cnt], _sizes_of(masks, cnt, table, structure, ce),
                                         ce, table, qmasks, weff, per_q)
        best_i = -1
        best_j = -1
        best_cost = np.inf
        best_cnt = cnt
        for i in range(cnt):
            for j in range(i + 1, cnt):
                new_cnt = _merged(masks, cnt, i, j, cand)
                new_bytes = 0.0
                for t in range(new_cnt):
                    new_bytes += structure + ce * table[cand[t]]
                io_after = eval_io_greedy_cover(
                    cand[:new_cnt], _sizes_of(cand, new_cnt, table, structure, ce),
                    ce, table, qmasks, weff, per_q)
                denom = (total_bytes - new_bytes) / s_block
                cost = (io_after - io_before) / denom
                if cost < best_cost:
                    best_cost = cost
                    best_i = i
                    best_j = j
                    best_cnt = new_cnt
        cnt = _merged(masks, cnt, best_i, best_j, cand)
        for t in range(cnt):
            masks[t] = cand[t]
        merges += 1
    return masks, cnt, merges


def _sizes_of(masks, cnt, table, structure, ce):
    sizes = np.empty(cnt, np.float64)
    for i in range(cnt):
        sizes[i] = structure + ce * table[masks[i]]
    return sizes


def _merged(masks, cnt, i, j, out):
    """Drop sub-blocks i and j, append their union (collapsing duplicates)."""
    union = masks[i] | masks[j]
    t = 0
    dup = False
    for s in range(cnt):
        if s == i or s == j:
            continue
        out[t] = masks[s]
        if masks[s] == union:
            dup = True
        t += 1
    if not dup:
        out[t] = union
        t += 1
    return t


def min_cover(block_masks, block_sizes, qmask, dp, choice):
    """Exact minimum-cost cover of one query by subset DP.

    dp and choice are scratch arrays of length 2^n. Fills dp over the
    submasks of qmask in ascending order and returns (cost, chosen bitmask
    over sub-block indices). Requires at most 62 sub-blocks."""
    m = block_masks.shape[0]
    dp[0] = 0.0
    choice[0] = -1
    s = 0
    while True:
        s = (s - qmask) & qmask
        if s == 0:
            break
        best = np.inf
        pick = -1
        for b in range(m):
            take = block_masks[b] & s
            if take == 0:
                continue
            alt = block_sizes[b] + dp[s & ~block_masks[b]]
            if alt < best:
                best = alt
                pick = b
        dp[s] = best
        choice[s] = pick
    chosen = 0
    s = qmask
    while s != 0 and choice[s] >= 0:
        b = choice[s]
        chosen |= 1 << b
        s &= ~block_masks[b]
    return dp[qmask], chosen


def enum_partitions(rgs, started, max_parts, table, qmasks, weff, structure, ce,
                    budget, best_io_in, best_rgs):
    """Resumable exhaustive search over set partitions with at most max_parts
    parts, in restricted-growth-string order.

    Evaluates the intersection-rule query I/O of each partition and tracks the
    strict minimum. Mutates `rgs` (the enumeration cursor) and `best_rgs` in
    place; returns (evaluated count, best I/O, finished flag, started flag).
    """
    n = rgs.shape[0]
    nq = qmasks.shape[0]
    pmask = np.zeros(n, np.int64)
    evaluated = 0
    best_io = best_io_in
    finished = False
    while evaluated < budget:
        if started == 0:
            started = 1
        else:
            pos = -1
            for i in range(n - 1, 0, -1):
                prefix_max = 0
                for j in range(i):
                    if rgs[j] > prefix_max:
                        prefix_max = rgs[j]
                cap = prefix_max + 1
                if max_parts - 1 < cap:
                    cap = max_parts - 1
                if rgs[i] < cap:
                    pos = i
                    break
            if pos < 0:
                finished = True
                break
            rgs[pos] += 1
            for i in range(pos + 1, n):
                rgs[i] = 0
        evaluated += 1
        nparts = 0
        for i in range(n):
            if rgs[i] + 1 > nparts:
                nparts = rgs[i] + 1
        for p in range(nparts):
            pmask[p] = 0
        for i in range(n):
            pmask[rgs[i]] |= 1 << i
        io = 0.0
        for qi in range(nq):
            if weff[qi] == 0.0:
                continue
            acc = 0.0
            for p in range(nparts):
                if pmask[p] & qmasks[qi]:
                    acc += structure + ce * table[pmask[p]]
            io += weff[qi] * acc
        if io < best_io:
            best_io = io
            for i in range(n):
                best_rgs[i] = rgs[i]
    return evaluated, best_io, finished, started


def search_layouts(n, qmasks, weff, table, structure, ce, budget_bytes,
                   dmax, depth, cand, cols, cum_bytes, cum_cover, dp,
                   best_obj_in, best_cols, best_len_in, node_budget):
    """Resumable branch-and-bound over overlapping layouts.

    Columns (sub-block masks) are chosen in strictly decreasing mask value,
    which fixes one canonical order per layout; the attribute with the top
    bit is thereby pinned to the first column. A node is pruned when its
    committed bytes plus the cheapest conceivable completion exceed the
    overhead budget, when an uncovered attribute can no longer appear in any
    smaller mask, or when an admissible objective bound (each query finished
    by one ideal future column at structure + payload cost) cannot beat the
    incumbent. Every fully-covering node is a candidate layout, priced at
    each query's exact minimum-cost cover via the incremental dp table.

    dp has shape (dmax+1, nq, 2^n); depth d holds min cover costs using the
    first d columns. Returns (nodes, depth, best_obj, best_len, finished,
    depth_wall_hit); cand/cols/cum_*/dp/best_cols carry state between calls.
    """
    nq = qmasks.shape[0]
    full = (1 << n) - 1
    topbit = 1 << (n - 1)
    nodes = 0
    best_obj = best_obj_in
    best_len = best_len_in
    finished = False
    wall_hit = False
    while nodes < node_budget:
        floor_mask = topbit if depth == 0 else 1
        if cand[depth] < floor_mask:
            if depth == 0:
                finished = True
                break
            depth -= 1
            continue
        m = cand[depth]
        cand[depth] -= 1
        col_bytes = structure + ce * table[m]
        bytes_new = cum_bytes[depth] + col_bytes
        cover_new = cum_cover[depth] | m
        uncovered = full & ~cover_new
        future_min = 0.0
        if uncovered != 0:
            future_min = structure + ce * table[uncovered]
        if bytes_new + future_min > budget_bytes:
            continue
        if uncovered != 0:
            hb = 1
            while (hb << 1) <= uncovered:
                hb <<= 1  # highest uncovered bit
            if hb >= m:
                continue  # no smaller mask can ever hold that attribute
        nodes += 1
        cols[depth] = m
        cum_bytes[depth + 1] = bytes_new
        cum_cover[depth + 1] = cover_new
        # fold column m into each query's min-cover dp
        for qi in range(nq):
            qm = qmasks[qi]
            s = 0
            while True:
                v = dp[depth, qi, s]
                if (m & s) != 0:
                    alt = col_bytes + dp[depth + 1, qi, s & ~m]
                    if alt < v:
                        v = alt
                dp[depth + 1, qi, s] = v
                if s == qm:
                    break
                s = (s - qm) & qm
        if uncovered == 0:
            obj = 0.0
            for qi in range(nq):
                if weff[qi] == 0.0:
                    continue
                obj += weff[qi] * dp[depth + 1, qi, qmasks[qi]]
            if obj < best_obj:
                best_obj = obj
                best_len = depth + 1
                for t in range(depth + 1):
                    best_cols[t] = cols[t]
        # admissible bound: finish each query with one ideal dedicated column
        bound = 0.0
        for qi in range(nq):
            if weff[qi] == 0.0:
                continue
            qm = qmasks[qi]
            lb = dp[depth + 1, qi, qm]
            s = 0
            while True:
                rest = qm & ~s
                vv = dp[depth + 1, qi, s]
                if rest != 0:
                    vv += structure + ce * table[rest]
                if vv < lb:
                    lb = vv
                if s == qm:
                    break
                s = (s - qm) & qm
            bound += weff[qi] * lb
        if bound < best_obj and m > 1:
            if depth + 1 < dmax:
                depth += 1
                cand[depth] = m - 1
            else:
                wall_hit = True
    return nodes, depth, best_obj, best_len, finished, wall_hit
