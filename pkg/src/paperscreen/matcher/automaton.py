"""Aho-Corasick automaton compiled to a dense transition table.

The automaton is built classically (goto trie, failure links via BFS,
output propagation along failure chains) and then flattened so the scan
loop is a table walk: ``state = delta[state, symbol]``.  Characters that
appear in no pattern share a single "other" symbol whose transition is
always back to the root, which keeps the alphabet small and the table
dense.

The scan itself lives in a kernel selected at import time (compiled
Cython when available, pure Python otherwise); both walk the exact same
table, so their match sets are identical by construction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DenseAutomaton:
    """Failure-resolved DFA over a compact alphabet.

    delta       : int32 [n_states, alphabet_size] full transition table
    out_offsets : int32 [n_states + 1] slice bounds into the output arrays
    out_pattern : int32 flat pattern ids, grouped per state
    out_length  : int32 flat pattern lengths (in symbols), same grouping
    symbols     : char -> symbol id (>= 1); unseen chars map to 0
    """

    delta: np.ndarray
    out_offsets: np.ndarray
    out_pattern: np.ndarray
    out_length: np.ndarray
    symbols: dict[str, int]

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    def encode(self, text: str) -> np.ndarray:
        table = self.symbols
        return np.fromiter((table.get(c, 0) for c in text), dtype=np.int32, count=len(text))


def build_automaton(patterns: list[str]) -> DenseAutomaton:
    """Build the dense automaton for a list of non-empty pattern strings."""
    for i, p in enumerate(patterns):
        if not p:
            raise ValueError(f"pattern {i} is empty")

    symbols: dict[str, int] = {}
    for p in patterns:
        for c in p:
            if c not in symbols:
                symbols[c] = len(symbols) + 1
    alphabet = len(symbols) + 1  # symbol 0 = any char outside all patterns

    # goto trie
    children: list[dict[int, int]] = [{}]
    outputs: list[list[tuple[int, int]]] = [[]]  # (pattern_id, length)
    for pid, p in enumerate(patterns):
        state = 0
        for c in p:
            sym = symbols[c]
            nxt = children[state].get(sym)
            if nxt is None:
                children.append({})
                outputs.append([])
                nxt = len(children) - 1
                children[state][sym] = nxt
            state = nxt
        outputs[state].append((pid, len(p)))

    n_states = len(children)
    delta = np.zeros((n_states, alphabet), dtype=np.int32)
    fail = [0] * n_states

    queue: deque[int] = deque()
    for sym, nxt in children[0].items():
        delta[0, sym] = nxt
        queue.append(nxt)
    while queue:
        state = queue.popleft()
        f = fail[state]
        if outputs[f]:
            outputs[state].extend(outputs[f])
        delta[state] = delta[f]  # inherit failure transitions, then override
        for sym, nxt in children[state].items():
            fail[nxt] = delta[f, sym]
            delta[state, sym] = nxt
            queue.append(nxt)

    out_offsets = np.zeros(n_states + 1, dtype=np.int32)
    flat_pid: list[int] = []
    flat_len: list[int] = []
    for state in range(n_states):
        for pid, length in outputs[state]:
            flat_pid.append(pid)
            flat_len.append(length)
        out_offsets[state + 1] = len(flat_pid)

    return DenseAutomaton(
        delta=delta,
        out_offsets=out_offsets,
        out_pattern=np.asarray(flat_pid, dtype=np.int32),
        out_length=np.asarray(flat_len, dtype=np.int32),
        symbols=symbols,
    )
