from __future__ import annotations

import math

import pytest

from paperscreen.corpus import BibRecord, Corpus
from paperscreen.normalize import normalize, normalize_phrase


def make_record(pid: str, text: str = "", field_label: str = "CS", journal: str = "J",
                publisher: str = "P", **kwargs) -> BibRecord:
    return BibRecord(id=pid, title=f"title {pid}", journal=journal, field_label=field_label,
                     publisher=publisher, abstract=text, **kwargs)


def make_corpus(records) -> Corpus:
    corpus = Corpus()
    for rec in records:
        corpus.add(rec)
    return corpus


def naive_match_set(text: str, phrases: dict[str, str]) -> set[tuple[int, int, str]]:
    """Independent scan oracle: per-phrase substring search over normalized
    text with word-boundary filtering, reported in original offsets."""
    norm = normalize(text)
    hits: set[tuple[int, int, str]] = set()
    for key, phrase in phrases.items():
        needle = normalize_phrase(phrase)
        if not needle:
            continue
        pos = norm.text.find(needle)
        while pos != -1:
            end = pos + len(needle)
            before_ok = pos == 0 or not norm.text[pos - 1].isalnum()
            after_ok = end == len(norm.text) or not norm.text[end].isalnum()
            if before_ok and after_ok:
                ostart, oend = norm.to_original(pos, end)
                hits.add((ostart, oend, key))
            pos = norm.text.find(needle, pos + 1)
    return hits


def npmi_oracle(docs_tokens: list[list[str]], phrase: str, n: int) -> float:
    """Brute-force NPMI: recount everything from raw token lists and apply
    the formula directly."""
    from collections import Counter

    unigrams: Counter = Counter()
    ngrams: Counter = Counter()
    total_words = 0
    total_ngrams = 0
    for tokens in docs_tokens:
        unigrams.update(tokens)
        total_words += len(tokens)
        for i in range(len(tokens) - n + 1):
            ngrams[" ".join(tokens[i:i + n])] += 1
            total_ngrams += 1
    count = ngrams[phrase]
    assert count > 0
    p_joint = count / total_ngrams
    if p_joint >= 1.0:
        return 1.0
    log_marg = sum(math.log(unigrams[w] / total_words) for w in phrase.split(" "))
    value = (math.log(p_joint) - log_marg) / ((n - 1) * -math.log(p_joint))
    return max(-1.0, min(1.0, value))


@pytest.fixture
def seed_dictionary_path():
    from paperscreen.cli import data_dir

    return data_dir() / "fingerprints_seed.tsv"
