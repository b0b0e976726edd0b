"""numba kernels behind the public sparse routines.

Semiring operations arrive as jitted scalar functions, so every kernel is
specialised once per semiring. All kernels release the GIL.
"""
import numpy as np
from numba import njit

HEAP = 0
HASH = 1

_HASH_MULT = 2654435761


@njit(nogil=True, cache=False)
def segment_reduce(vals, starts, add, out):
    """out[s] = add-fold of vals[starts[s]:starts[s+1]], left to right."""
    for s in range(starts.shape[0] - 1):
        lo = starts[s]
        acc = vals[lo]
        for p in range(lo + 1, starts[s + 1]):
            acc = add(acc, vals[p])
        out[s] = acc


@njit(nogil=True)
def _sift_down(key, src, size, i):
    while True:
        left = 2 * i + 1
        if left >= size:
            return
        small = left
        right = left + 1
        if right < size and (key[right] < key[left] or
                             (key[right] == key[left] and src[right] < src[left])):
            small = right
        if key[small] < key[i] or (key[small] == key[i] and src[small] < src[i]):
            key[i], key[small] = key[small], key[i]
            src[i], src[small] = src[small], src[i]
            i = small
        else:
            return


@njit(nogil=True)
def _heap_column(a_ptr, a_idx, a_val, b_idx, b_val, lo, hi, mul, add,
                 pos, end, key, src, c_idx, c_val, out):
    # k-way merge of the selected A columns, each scaled by its B entry
    size = 0
    for p in range(lo, hi):
        t = b_idx[p]
        s = p - lo
        pos[s] = a_ptr[t]
        end[s] = a_ptr[t + 1]
        if pos[s] < end[s]:
            key[size] = a_idx[pos[s]]
            src[size] = s
            size += 1
    for i in range(size // 2 - 1, -1, -1):
        _sift_down(key, src, size, i)
    start = out
    while size > 0:
        s = src[0]
        row = key[0]
        p = lo + s
        prod = mul(a_val[pos[s]], b_val[p])
        if out > start and c_idx[out - 1] == row:
            c_val[out - 1] = add(c_val[out - 1], prod)
        else:
            c_idx[out] = row
            c_val[out] = prod
            out += 1
        pos[s] += 1
        if pos[s] < end[s]:
            key[0] = a_idx[pos[s]]
        else:
            size -= 1
            key[0] = key[size]
            src[0] = src[size]
        _sift_down(key, src, size, 0)
    return out


@njit(nogil=True)
def _hash_column(a_ptr, a_idx, a_val, b_idx, b_val, lo, hi, flops, mul, add,
                 tkeys, tvals, c_idx, c_val, out):
    # open addressing, linear probing, table size = next pow2 >= 2 * flops
    size = 1
    while size < 2 * flops:
        size *= 2
    mask = size - 1
    used = 0
    for p in range(lo, hi):
        t = b_idx[p]
        bv = b_val[p]
        for q in range(a_ptr[t], a_ptr[t + 1]):
            row = a_idx[q]
            prod = mul(a_val[q], bv)
            h = (row * _HASH_MULT) & mask
            while True:
                if tkeys[h] == -1:
                    tkeys[h] = row
                    tvals[h] = prod
                    used += 1
                    break
                if tkeys[h] == row:
                    tvals[h] = add(tvals[h], prod)
                    break
                h = (h + 1) & mask
    slots = np.empty(used, dtype=np.int64)
    rows = np.empty(used, dtype=np.int64)
    u = 0
    for h in range(size):
        if tkeys[h] != -1:
            slots[u] = h
            rows[u] = tkeys[h]
            u += 1
    order = np.argsort(rows)
    for i in range(used):
        h = slots[order[i]]
        c_idx[out] = tkeys[h]
        c_val[out] = tvals[h]
        out += 1
    for h in range(size):
        tkeys[h] = -1
    return out


@njit(nogil=True)
def spgemm_columns(a_ptr, a_idx, a_val, b_ptr, b_idx, b_val, col_flops, choice,
                   mul, add, mask_mode, m_ptr, m_idx, c_ptr, c_idx, c_val):
    """Column-by-column C = A * B into preallocated output buffers.

    ``choice[j]`` selects the accumulator for output column j. ``mask_mode``
    is 0 (no mask), 1 (drop rows present in column j of the mask) or 2 (keep
    only those rows). Returns the number of stored entries.
    """
    n = b_ptr.shape[0] - 1
    max_merge = 0
    max_flops = 0
    for j in range(n):
        w = b_ptr[j + 1] - b_ptr[j]
        if w > max_merge:
            max_merge = w
        if col_flops[j] > max_flops:
            max_flops = col_flops[j]
    pos = np.empty(max_merge, dtype=np.int64)
    end = np.empty(max_merge, dtype=np.int64)
    key = np.empty(max_merge, dtype=np.int64)
    src = np.empty(max_merge, dtype=np.int64)
    tsize = 1
    while tsize < 2 * max_flops:
        tsize *= 2
    tkeys = np.full(tsize, -1, dtype=np.int64)
    tvals = np.empty(tsize, dtype=c_val.dtype)

    out = 0
    c_ptr[0] = 0
    for j in range(n):
        start = out
        lo = b_ptr[j]
        hi = b_ptr[j + 1]
        if col_flops[j] > 0:
            if choice[j] == HASH:
                out = _hash_column(a_ptr, a_idx, a_val, b_idx, b_val, lo, hi,
                                   col_flops[j], mul, add, tkeys, tvals,
                                   c_idx, c_val, out)
            else:
                out = _heap_column(a_ptr, a_idx, a_val, b_idx, b_val, lo, hi,
                                   mul, add, pos, end, key, src, c_idx, c_val, out)
        if mask_mode != 0 and out > start:
            keep_hits = mask_mode == 2
            mp = m_ptr[j]
            me = m_ptr[j + 1]
            w = start
            for r in range(start, out):
                row = c_idx[r]
                while mp < me and m_idx[mp] < row:
                    mp += 1
                if (mp < me and m_idx[mp] == row) != keep_hits:
                    continue
                c_idx[w] = row
                c_val[w] = c_val[r]
                w += 1
            out = w
        c_ptr[j + 1] = out
    return out
