"""Toy probabilistic context-free grammar for test fixtures.

Generates nonsense "papers" whose template phrases form a grammar
signature, so grammar detection is testable without redistributing real
generator output.  Deterministic under a seed.
"""

from __future__ import annotations

import random

# Template phrases emitted (near-)exclusively by this grammar; these are
# the signature the detector looks for.
SIGNATURE_PHRASES = (
    "omniscient modalities for the location identity split",
    "the deployment of redundancy would profoundly degrade",
    "a confusing unification of lambda calculus and forward error correction",
    "our heuristic runs in notably amortized time",
    "trainable configurations of the partition table",
    "we disconfirm the visualization of evolutionary programming",
)

GRAMMAR_NAME = "toygen"

_OPENERS = (
    "In recent years,",
    "Unified models have led to",
    "Many analysts would agree that",
    "The implications of this finding are",
)
_FILLER = (
    "much work remains to be done in this area.",
    "the results were validated on commodity hardware.",
    "these assumptions rarely hold in practice.",
    "our evaluation strategy is twofold.",
)


def generate_paper(rng: random.Random, n_sentences: int = 8, n_signature: int = 4) -> str:
    """One nonsense paper containing n_signature distinct template phrases."""
    planted = rng.sample(SIGNATURE_PHRASES, k=min(n_signature, len(SIGNATURE_PHRASES)))
    sentences = []
    for phrase in planted:
        sentences.append(f"{rng.choice(_OPENERS)} {phrase}, and {rng.choice(_FILLER)}")
    while len(sentences) < n_sentences:
        sentences.append(f"{rng.choice(_OPENERS)} {rng.choice(_FILLER)}")
    rng.shuffle(sentences)
    return " ".join(sentences)
