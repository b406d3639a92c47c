"""Tortured-phrase fingerprint dictionary and document scanning.

A fingerprint pairs a tortured phrase ("irregular timberlands") with the
established wording readers expect ("random forests").  The dictionary is
compiled once into a multi-pattern automaton and then each document is
scanned in a single pass over its normalized text.

A hit counts only at word boundaries: "credulous Bayes" must not fire
inside "credulous Bayesian".  All boundary-valid occurrences are
reported; severity depends on the number of distinct fingerprints, so
nested or overlapping hits never double-count a paper.
"""

from __future__ import annotations

import csv
import datetime
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from paperscreen import matcher
from paperscreen.corpus import BibRecord, Corpus
from paperscreen.normalize import NormalizedText, normalize, normalize_phrase

SOURCES = ("seed-list", "snowballed", "mined")
SNIPPET_RADIUS = 60

SEVERITY_CLEAN = "clean"
SEVERITY_FLAGGED = "flagged"
SEVERITY_QUEUED = "queued"


class DictionaryError(ValueError):
    """Invalid fingerprint dictionary input."""


@dataclass(frozen=True)
class Fingerprint:
    id: str
    tortured: str
    expected: str = ""
    source: str = "seed-list"
    added_on: datetime.date | None = None

    def validate(self) -> None:
        if not self.tortured.strip():
            raise DictionaryError(f"fingerprint {self.id!r}: empty tortured phrase")
        if self.source not in SOURCES:
            raise DictionaryError(f"fingerprint {self.id!r}: unknown source {self.source!r}")
        if normalize_phrase(self.tortured) == normalize_phrase(self.expected):
            raise DictionaryError(
                f"fingerprint {self.id!r}: tortured equals expected after normalization"
            )


@dataclass(frozen=True)
class SeverityPolicy:
    """Distinct-fingerprint thresholds for the severity tiers."""

    flagged_at: int = 1
    queued_at: int = 3

    def tier(self, distinct: int) -> str:
        if distinct >= self.queued_at:
            return SEVERITY_QUEUED
        if distinct >= self.flagged_at:
            return SEVERITY_FLAGGED
        return SEVERITY_CLEAN


@dataclass(frozen=True)
class MatchSpan:
    fingerprint_id: str
    start: int
    end: int
    snippet: str

    def to_dict(self) -> dict:
        return {
            "fingerprint_id": self.fingerprint_id,
            "start": self.start,
            "end": self.end,
            "snippet": self.snippet,
        }


@dataclass(frozen=True)
class ScreeningReport:
    paper_id: str
    matches: tuple[MatchSpan, ...]
    distinct_fingerprints: int
    severity: str

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "matches": [m.to_dict() for m in self.matches],
            "distinct_fingerprints": self.distinct_fingerprints,
            "severity": self.severity,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)


@dataclass(frozen=True)
class CompiledDictionary:
    fingerprints: tuple[Fingerprint, ...]
    patterns: tuple[str, ...]  # normalized phrase per pattern id
    pattern_fingerprints: tuple[tuple[str, ...], ...]  # fingerprint ids per pattern
    automaton: matcher.DenseAutomaton = field(repr=False, hash=False, compare=False)

    def __len__(self) -> int:
        return len(self.fingerprints)


def compile_dictionary(fingerprints: list[Fingerprint]) -> CompiledDictionary:
    """Compile fingerprints into a single-pass multi-pattern matcher.

    Deterministic: the same fingerprint list always yields an automaton
    with identical behavior.  Fingerprints sharing a normalized phrase
    share one pattern.
    """
    seen_ids: set[str] = set()
    pattern_index: dict[str, int] = {}
    patterns: list[str] = []
    pattern_fps: list[list[str]] = []
    for fp in fingerprints:
        fp.validate()
        if fp.id in seen_ids:
            raise DictionaryError(f"duplicate fingerprint id {fp.id!r}")
        seen_ids.add(fp.id)
        phrase = normalize_phrase(fp.tortured)
        if not phrase:
            raise DictionaryError(f"fingerprint {fp.id!r}: empty tortured phrase")
        pid = pattern_index.get(phrase)
        if pid is None:
            pid = len(patterns)
            pattern_index[phrase] = pid
            patterns.append(phrase)
            pattern_fps.append([])
        pattern_fps[pid].append(fp.id)
    automaton = matcher.build_automaton(patterns)
    return CompiledDictionary(
        fingerprints=tuple(fingerprints),
        patterns=tuple(patterns),
        pattern_fingerprints=tuple(tuple(ids) for ids in pattern_fps),
        automaton=automaton,
    )


def _at_word_boundary(text: str, start: int, end: int) -> bool:
    if start > 0 and text[start - 1].isalnum():
        return False
    if end < len(text) and text[end].isalnum():
        return False
    return True


def scan_text(text: str, compiled: CompiledDictionary) -> list[MatchSpan]:
    """All boundary-valid fingerprint occurrences in one document text."""
    if not text or not compiled.patterns:
        return []
    norm = normalize(text)
    symbols = compiled.automaton.encode(norm.text)
    spans: list[MatchSpan] = []
    for nstart, nend, pid in matcher.scan_symbols(compiled.automaton, symbols):
        if not _at_word_boundary(norm.text, nstart, nend):
            continue
        ostart, oend = norm.to_original(nstart, nend)
        snippet = text[max(0, ostart - SNIPPET_RADIUS) : oend + SNIPPET_RADIUS]
        for fp_id in compiled.pattern_fingerprints[pid]:
            spans.append(MatchSpan(fingerprint_id=fp_id, start=ostart, end=oend, snippet=snippet))
    spans.sort(key=lambda m: (m.start, m.end, m.fingerprint_id))
    return spans


def scan(doc: BibRecord, compiled: CompiledDictionary, policy: SeverityPolicy | None = None) -> ScreeningReport:
    policy = policy or SeverityPolicy()
    spans = scan_text(doc.screen_text(), compiled)
    distinct = len({m.fingerprint_id for m in spans})
    return ScreeningReport(
        paper_id=doc.id,
        matches=tuple(spans),
        distinct_fingerprints=distinct,
        severity=policy.tier(distinct),
    )


def scan_corpus(
    corpus: Corpus,
    compiled: CompiledDictionary,
    policy: SeverityPolicy | None = None,
    workers: int = 1,
) -> list[ScreeningReport]:
    """Scan every record; output order always equals corpus order."""
    policy = policy or SeverityPolicy()
    if workers <= 1 or len(corpus) < 2:
        return [scan(doc, compiled, policy) for doc in corpus]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda doc: scan(doc, compiled, policy), corpus.records))


def load_dictionary(path) -> list[Fingerprint]:
    """Read a fingerprint TSV (id, tortured, expected, source, added_on)."""
    fingerprints: list[Fingerprint] = []
    with open(path, encoding="utf-8", newline="") as fh:
        rows = csv.reader((ln for ln in fh if ln.strip() and not ln.startswith("#")), delimiter="\t")
        for row in rows:
            if len(row) < 5:
                raise DictionaryError(f"dictionary row needs 5 columns, got {len(row)}: {row!r}")
            added = datetime.date.fromisoformat(row[4]) if row[4] else None
            fp = Fingerprint(id=row[0], tortured=row[1], expected=row[2], source=row[3], added_on=added)
            fp.validate()
            fingerprints.append(fp)
    return fingerprints


def save_dictionary(fingerprints: list[Fingerprint], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# id\ttortured\texpected\tsource\tadded_on\n")
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        for fp in fingerprints:
            writer.writerow(
                [fp.id, fp.tortured, fp.expected, fp.source, fp.added_on.isoformat() if fp.added_on else ""]
            )
