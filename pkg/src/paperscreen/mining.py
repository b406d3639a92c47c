"""Candidate tortured-phrase mining via normalized pointwise mutual information.

Word n-grams that co-occur far more often than chance are collocation
candidates; contrasting each candidate's in-field frequency against the
whole-corpus background separates field-local oddities (suspect) from
jargon that is established everywhere (field-legitimate).

Estimator note: the joint probability uses the n-gram total as its
denominator while the marginals use the word total.  Mixing these
denominators is deliberate and standard, but it means the raw ratio can
stray slightly outside [-1, 1] on degenerate corpora of very short
documents; scores are clipped to the nominal range.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from paperscreen.corpus import Corpus
from paperscreen.normalize import normalize

ALL_FIELDS = "ALL"

DEFAULT_MIN_COUNT = 5
DEFAULT_NPMI_FLOOR = 0.5
DEFAULT_CONTRAST_CEILING = 1.0
DEFAULT_SMOOTHING = 0.5

VERDICT_SUSPECT = "suspect"
VERDICT_LEGITIMATE = "field-legitimate"


class PhraseAbsentError(KeyError):
    """Requested phrase has no count in the statistics (no score exists)."""


@dataclass
class NGramStats:
    n: int
    counts: Counter = field(default_factory=Counter)
    unigram_counts: Counter = field(default_factory=Counter)
    total_ngrams: int = 0
    total_words: int = 0
    field_label: str = ALL_FIELDS


@dataclass(frozen=True)
class CandidatePhrase:
    phrase: str
    npmi: float
    field_contrast: float
    corpus_frequency: int
    verdict_hint: str


def tokenize(text: str) -> list[str]:
    """Normalized space-separated tokens, empty tokens dropped."""
    return [t for t in normalize(text).text.split(" ") if t]


def count_ngrams(corpus: Corpus, n: int, field_filter: str = ALL_FIELDS) -> NGramStats:
    """Count word n-grams over records matching the field filter."""
    if n not in (2, 3):
        raise ValueError(f"n must be 2 or 3, got {n}")
    stats = NGramStats(n=n, field_label=field_filter)
    for doc in corpus:
        if field_filter != ALL_FIELDS and doc.field_label != field_filter:
            continue
        tokens = tokenize(doc.screen_text())
        stats.unigram_counts.update(tokens)
        stats.total_words += len(tokens)
        for i in range(len(tokens) - n + 1):
            stats.counts[" ".join(tokens[i : i + n])] += 1
            stats.total_ngrams += 1
    return stats


def npmi(stats: NGramStats, phrase: str) -> float:
    """Normalized PMI of an n-gram present in the statistics.

    pmi = ln(p(gram) / prod p(word_i)); normalized by (n-1) * -ln p(gram)
    so perfect association scores 1 for both bigrams and trigrams.
    Raises PhraseAbsentError when the phrase has no count (absence is not
    a zero score).
    """
    count = stats.counts.get(phrase)
    if not count:
        raise PhraseAbsentError(phrase)
    words = phrase.split(" ")
    if len(words) != stats.n:
        raise ValueError(f"phrase {phrase!r} is not a {stats.n}-gram")
    p_joint = count / stats.total_ngrams
    log_marginals = 0.0
    for word in words:
        word_count = stats.unigram_counts.get(word)
        if not word_count:
            raise PhraseAbsentError(word)
        log_marginals += math.log(word_count / stats.total_words)
    if p_joint >= 1.0:
        return 1.0
    pmi = math.log(p_joint) - log_marginals
    value = pmi / ((stats.n - 1) * -math.log(p_joint))
    return max(-1.0, min(1.0, value))


def field_contrast(
    stats_field: NGramStats,
    stats_background: NGramStats,
    phrase: str,
    smoothing: float = DEFAULT_SMOOTHING,
) -> float:
    """Smoothed log-ratio of in-field vs. background relative frequency.

    Positive means the phrase is over-represented in the field.  Additive
    smoothing over the union vocabulary keeps the ratio total.
    """
    if smoothing <= 0:
        raise ValueError("smoothing must be positive")
    if stats_field.n != stats_background.n:
        raise ValueError("gram orders differ")
    vocab = len(set(stats_field.counts) | set(stats_background.counts))
    c_f = stats_field.counts.get(phrase, 0)
    c_b = stats_background.counts.get(phrase, 0)
    if c_f == 0 and c_b == 0:
        return 0.0
    num = math.log((c_f + smoothing) / (stats_field.total_ngrams + smoothing * vocab))
    den = math.log((c_b + smoothing) / (stats_background.total_ngrams + smoothing * vocab))
    return num - den


def mine_candidates(
    corpus: Corpus,
    n: int,
    min_count: int = DEFAULT_MIN_COUNT,
    npmi_floor: float = DEFAULT_NPMI_FLOOR,
    contrast_ceiling: float = DEFAULT_CONTRAST_CEILING,
    smoothing: float = DEFAULT_SMOOTHING,
) -> list[CandidatePhrase]:
    """Rank collocation candidates and tag field-local ones as suspect.

    A candidate over-represented in its strongest field relative to the
    whole-corpus background (contrast above the ceiling) is field-local,
    which for a high-association phrase is the tortured-phrase profile;
    phrases spread across fields are tagged field-legitimate.
    """
    if min_count < 2:
        raise ValueError("min_count must be >= 2")
    background = count_ngrams(corpus, n, ALL_FIELDS)
    fields = sorted({doc.field_label for doc in corpus})
    per_field = {label: count_ngrams(corpus, n, label) for label in fields}

    candidates: list[CandidatePhrase] = []
    for phrase, count in background.counts.items():
        if count < min_count:
            continue
        score = npmi(background, phrase)
        if score < npmi_floor:
            continue
        # the phrase's own field = where it occurs most
        own_field = max(fields, key=lambda f: (per_field[f].counts.get(phrase, 0), f))
        contrast = field_contrast(per_field[own_field], background, phrase, smoothing)
        hint = VERDICT_SUSPECT if contrast > contrast_ceiling else VERDICT_LEGITIMATE
        candidates.append(
            CandidatePhrase(
                phrase=phrase,
                npmi=score,
                field_contrast=contrast,
                corpus_frequency=count,
                verdict_hint=hint,
            )
        )
    candidates.sort(key=lambda c: (-c.npmi, c.phrase))
    return candidates


def write_candidates(candidates: list[CandidatePhrase], path, params: dict) -> None:
    """TSV output with the run parameters as '#' header comments."""
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(params):
            fh.write(f"# {key} = {params[key]}\n")
        fh.write("# phrase\tnpmi\tfield_contrast\tcorpus_frequency\tverdict_hint\n")
        for c in candidates:
            fh.write(
                f"{c.phrase}\t{c.npmi:.6f}\t{c.field_contrast:.6f}\t{c.corpus_frequency}\t{c.verdict_hint}\n"
            )
