"""Detection of grammar-generated papers and external classifier scores.

Grammar-generated text (SCIgen-like output) reuses a small inventory of
template phrases; finding several distinct ones in a single paper is the
verdict rule.  Signatures are data (TSV), not code, and matching reuses
the fingerprint scanner's normalization and automaton.

External neural-classifier scores are strictly an import boundary: a CSV
of per-paper probabilities produced elsewhere, summarized here as the
concentration of scores above a threshold.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from paperscreen.corpus import BibRecord, Corpus
from paperscreen.fingerprints import CompiledDictionary, Fingerprint, compile_dictionary, scan_text

DEFAULT_MIN_DISTINCT = 3


class SignatureError(ValueError):
    pass


class ScoreError(ValueError):
    pass


@dataclass(frozen=True)
class GrammarSignature:
    grammar_name: str
    phrases: tuple[str, ...]
    min_distinct: int = DEFAULT_MIN_DISTINCT

    def validate(self) -> None:
        if not self.phrases:
            raise SignatureError(f"signature {self.grammar_name!r} has no phrases")
        if self.min_distinct < 2:
            raise SignatureError(f"signature {self.grammar_name!r}: min_distinct must be >= 2")


@dataclass(frozen=True)
class GeneratedVerdict:
    paper_id: str
    grammar_name: str | None
    distinct_hits: int
    verdict: str  # "positive" | "negative"

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "grammar_name": self.grammar_name,
            "distinct_hits": self.distinct_hits,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class ExternalScore:
    paper_id: str
    score: float


def compile_signature(sig: GrammarSignature) -> CompiledDictionary:
    sig.validate()
    fps = [
        Fingerprint(id=f"{sig.grammar_name}:{i}", tortured=phrase, source="seed-list")
        for i, phrase in enumerate(sig.phrases)
    ]
    return compile_dictionary(fps)


def detect_grammar(doc: BibRecord, signatures: list[GrammarSignature]) -> GeneratedVerdict:
    """Verdict is positive when some signature reaches its phrase threshold.

    The winning signature is the one with the most distinct phrase hits
    among those at or above their threshold; ties go to list order.
    Monotone in document content: more text never clears a hit.
    """
    text = doc.screen_text()
    best_name: str | None = None
    best_hits = 0
    for sig in signatures:
        compiled = compile_signature(sig)
        distinct = len({m.fingerprint_id for m in scan_text(text, compiled)})
        if distinct >= sig.min_distinct and distinct > best_hits:
            best_name = sig.grammar_name
            best_hits = distinct
    if best_name is None:
        return GeneratedVerdict(paper_id=doc.id, grammar_name=None, distinct_hits=0, verdict="negative")
    return GeneratedVerdict(paper_id=doc.id, grammar_name=best_name, distinct_hits=best_hits, verdict="positive")


def detect_corpus(corpus: Corpus, signatures: list[GrammarSignature]) -> list[GeneratedVerdict]:
    return [detect_grammar(doc, signatures) for doc in corpus]


def load_signatures(path) -> list[GrammarSignature]:
    """Read a signature TSV (grammar_name, min_distinct, phrase per line)."""
    grouped: dict[str, tuple[int, list[str]]] = {}
    order: list[str] = []
    with open(path, encoding="utf-8", newline="") as fh:
        rows = csv.reader((ln for ln in fh if ln.strip() and not ln.startswith("#")), delimiter="\t")
        for row in rows:
            if len(row) != 3:
                raise SignatureError(f"signature row needs 3 columns: {row!r}")
            name, min_distinct_raw, phrase = row
            try:
                min_distinct = int(min_distinct_raw)
            except ValueError:
                raise SignatureError(f"bad min_distinct {min_distinct_raw!r} for {name!r}") from None
            if name not in grouped:
                grouped[name] = (min_distinct, [])
                order.append(name)
            elif grouped[name][0] != min_distinct:
                raise SignatureError(f"inconsistent min_distinct for {name!r}")
            grouped[name][1].append(phrase)
    signatures = []
    for name in order:
        min_distinct, phrases = grouped[name]
        sig = GrammarSignature(grammar_name=name, phrases=tuple(phrases), min_distinct=min_distinct)
        sig.validate()
        signatures.append(sig)
    return signatures


def import_scores(path, known_ids: set[str] | None = None) -> tuple[list[ExternalScore], list[str]]:
    """Read a paper_id,score CSV.

    Scores outside [0, 1] are hard errors; unknown paper ids (when a
    corpus id set is supplied) are skipped and reported, not fatal.
    """
    scores: list[ExternalScore] = []
    skipped: list[str] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row or row[0].startswith("#"):
                continue
            if row[0] == "paper_id":  # optional header
                continue
            if len(row) != 2:
                raise ScoreError(f"score row needs 2 columns: {row!r}")
            paper_id, raw = row
            try:
                value = float(raw)
            except ValueError:
                raise ScoreError(f"bad score {raw!r} for {paper_id!r}") from None
            if not 0.0 <= value <= 1.0:
                raise ScoreError(f"score {value} for {paper_id!r} outside [0, 1]")
            if known_ids is not None and paper_id not in known_ids:
                skipped.append(paper_id)
                continue
            scores.append(ExternalScore(paper_id=paper_id, score=value))
    return scores, skipped


def concentration(scores: list[ExternalScore], threshold: float) -> tuple[float, bool]:
    """Fraction of scores at or above the threshold.

    Returns (fraction, empty_input); an empty score list yields 0.0 with
    the empty marker set so callers can distinguish it from a true zero.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ScoreError(f"threshold {threshold} outside [0, 1]")
    if not scores:
        return 0.0, True
    hits = sum(1 for s in scores if s.score >= threshold)
    return hits / len(scores), False
