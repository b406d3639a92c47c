"""Multi-pattern scan kernels.

The compiled Cython kernel is preferred; the pure-Python kernel is the
fallback.  Set SCREENER_PURE_PYTHON=1 to force the fallback (used by the
benchmark and by tests that exercise both paths).
"""

from __future__ import annotations

import os

from paperscreen.matcher.automaton import DenseAutomaton, build_automaton

if os.environ.get("SCREENER_PURE_PYTHON"):
    from paperscreen.matcher.ac_py import KERNEL, scan_table
else:
    try:
        from paperscreen.matcher._ackernel import KERNEL, scan_table
    except ImportError:
        from paperscreen.matcher.ac_py import KERNEL, scan_table

__all__ = ["DenseAutomaton", "build_automaton", "scan_table", "KERNEL", "scan_symbols"]


def scan_symbols(automaton: DenseAutomaton, symbols) -> list[tuple[int, int, int]]:
    """Scan an encoded symbol stream; returns (start, end, pattern_id) hits."""
    return scan_table(
        automaton.delta,
        automaton.out_offsets,
        automaton.out_pattern,
        automaton.out_length,
        symbols,
    )
