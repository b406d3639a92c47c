"""Benchmark the compiled scan kernel against the pure-Python fallback.

Both kernels walk the same dense automaton table over the same encoded
document stream, so the timings isolate the kernel itself.  Run:

    python3 benchmarks/bench_scan.py [--docs N] [--doc-words W] [--repeat R]
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from paperscreen.fingerprints import Fingerprint, compile_dictionary
from paperscreen.matcher import ac_py

try:
    from paperscreen.matcher import _ackernel
except ImportError:
    _ackernel = None


def build_workload(n_docs: int, doc_words: int, n_patterns: int, seed: int = 0):
    rng = random.Random(seed)
    jargon = [f"zx{i}" for i in range(40)]
    filler = [f"word{i}" for i in range(200)]
    entries = []
    seen = set()
    while len(entries) < n_patterns:
        phrase = f"{rng.choice(jargon)} {rng.choice(jargon)}"
        if phrase not in seen:
            seen.add(phrase)
            entries.append(Fingerprint(id=f"fp-{len(entries)}", tortured=phrase))
    compiled = compile_dictionary(entries)
    docs = []
    for _ in range(n_docs):
        words = rng.choices(filler, k=doc_words)
        for fp in rng.sample(entries, rng.randint(0, 5)):
            words.insert(rng.randint(0, len(words)), fp.tortured)
        docs.append(" ".join(words).lower())
    symbol_streams = [compiled.automaton.encode(doc) for doc in docs]
    return compiled.automaton, symbol_streams


def time_kernel(scan_table, automaton, streams, repeat: int) -> tuple[float, int]:
    timings = []
    total_matches = 0
    for _ in range(repeat):
        total_matches = 0
        started = time.perf_counter()
        for symbols in streams:
            total_matches += len(
                scan_table(
                    automaton.delta,
                    automaton.out_offsets,
                    automaton.out_pattern,
                    automaton.out_length,
                    symbols,
                )
            )
        timings.append(time.perf_counter() - started)
    return statistics.median(timings), total_matches


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=500)
    parser.add_argument("--doc-words", type=int, default=400)
    parser.add_argument("--patterns", type=int, default=50)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    automaton, streams = build_workload(args.docs, args.doc_words, args.patterns)
    total_chars = sum(len(s) for s in streams)
    print(f"workload: {args.docs} docs, {total_chars / 1e6:.1f} M chars, {args.patterns} patterns")

    py_time, py_matches = time_kernel(ac_py.scan_table, automaton, streams, args.repeat)
    print(f"python kernel:   {py_time:.3f} s  ({total_chars / py_time / 1e6:.1f} M chars/s, {py_matches} matches)")

    if _ackernel is None:
        print("compiled kernel: not built (install with Cython to compare)")
        return
    c_time, c_matches = time_kernel(_ackernel.scan_table, automaton, streams, args.repeat)
    print(f"compiled kernel: {c_time:.3f} s  ({total_chars / c_time / 1e6:.1f} M chars/s, {c_matches} matches)")
    if c_matches != py_matches:
        raise SystemExit("kernel disagreement: match counts differ")
    print(f"speedup: {py_time / c_time:.1f}x")


if __name__ == "__main__":
    main()
