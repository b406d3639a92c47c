"""Pure-Python scan kernel: reference implementation of the table walk.

Semantically identical to the compiled kernel in _ackernel.pyx; kept as
the import-time fallback and as the baseline for the kernel benchmark.
"""

from __future__ import annotations

import numpy as np

KERNEL = "python"


def scan_table(
    delta: np.ndarray,
    out_offsets: np.ndarray,
    out_pattern: np.ndarray,
    out_length: np.ndarray,
    symbols: np.ndarray,
) -> list[tuple[int, int, int]]:
    """Walk the table over a symbol stream; return (start, end, pattern_id)."""
    hits: list[tuple[int, int, int]] = []
    state = 0
    d = delta
    offs = out_offsets
    for pos in range(len(symbols)):
        state = int(d[state, symbols[pos]])
        lo = int(offs[state])
        hi = int(offs[state + 1])
        for k in range(lo, hi):
            length = int(out_length[k])
            hits.append((pos + 1 - length, pos + 1, int(out_pattern[k])))
    return hits
