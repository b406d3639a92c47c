# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled scan kernel: dense Aho-Corasick table walk."""

import numpy as np

KERNEL = "c"


def scan_table(delta, out_offsets, out_pattern, out_length, symbols):
    """Walk the table over a symbol stream; return (start, end, pattern_id)."""
    cdef int[:, ::1] d = np.ascontiguousarray(delta, dtype=np.int32)
    cdef int[::1] offs = np.ascontiguousarray(out_offsets, dtype=np.int32)
    cdef int[::1] pid = np.ascontiguousarray(out_pattern, dtype=np.int32)
    cdef int[::1] plen = np.ascontiguousarray(out_length, dtype=np.int32)
    cdef int[::1] syms = np.ascontiguousarray(symbols, dtype=np.int32)

    cdef Py_ssize_t pos, k
    cdef int state = 0
    cdef int lo, hi, length
    hits = []
    for pos in range(syms.shape[0]):
        state = d[state, syms[pos]]
        lo = offs[state]
        hi = offs[state + 1]
        if lo != hi:
            for k in range(lo, hi):
                length = plen[k]
                hits.append((pos + 1 - length, pos + 1, pid[k]))
    return hits
