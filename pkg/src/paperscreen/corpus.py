"""Bibliographic corpus loading.

Input is line-delimited JSON, one record per line.  Required keys: id,
title, journal, field_label, publisher.  Optional: abstract, fulltext and
the three editorial dates (submitted, accepted, published) as YYYY-MM-DD.
Unknown keys are ignored for forward compatibility.
"""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass, field

REQUIRED_KEYS = ("id", "title", "journal", "field_label", "publisher")
DATE_KEYS = ("submitted", "accepted", "published")


class RecordError(ValueError):
    """A single input line could not be turned into a valid record."""


@dataclass(frozen=True)
class BibRecord:
    id: str
    title: str
    journal: str
    field_label: str
    publisher: str
    abstract: str = ""
    fulltext: str = ""
    submitted: datetime.date | None = None
    accepted: datetime.date | None = None
    published: datetime.date | None = None

    def screen_text(self) -> str:
        """Text the detectors look at: abstract and fulltext, joined."""
        parts = [p for p in (self.abstract, self.fulltext) if p]
        return "\n".join(parts)

    def to_json(self) -> str:
        obj: dict = {
            "id": self.id,
            "title": self.title,
            "journal": self.journal,
            "field_label": self.field_label,
            "publisher": self.publisher,
        }
        if self.abstract:
            obj["abstract"] = self.abstract
        if self.fulltext:
            obj["fulltext"] = self.fulltext
        for key in DATE_KEYS:
            value = getattr(self, key)
            if value is not None:
                obj[key] = value.isoformat()
        return json.dumps(obj, ensure_ascii=False, sort_keys=True)


@dataclass(frozen=True)
class ParseError:
    line_no: int
    reason: str


@dataclass
class Corpus:
    records: list[BibRecord] = field(default_factory=list)
    index: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def get(self, paper_id: str) -> BibRecord | None:
        pos = self.index.get(paper_id)
        return None if pos is None else self.records[pos]

    def add(self, record: BibRecord) -> None:
        if record.id in self.index:
            raise RecordError(f"duplicate record id {record.id!r}")
        self.index[record.id] = len(self.records)
        self.records.append(record)


def _parse_date(raw, key: str) -> datetime.date:
    if not isinstance(raw, str):
        raise RecordError(f"field {key!r} must be a YYYY-MM-DD string")
    try:
        return datetime.date.fromisoformat(raw)
    except ValueError as exc:
        raise RecordError(f"field {key!r}: {exc}") from None


def parse_record(line: str) -> BibRecord:
    """Parse one JSON line into a validated BibRecord.

    Raises RecordError on malformed JSON, missing required keys, or
    editorial dates out of order.  Records are rejected, never repaired.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(f"malformed JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise RecordError("line is not a JSON object")
    for key in REQUIRED_KEYS:
        if not isinstance(obj.get(key), str) or not obj.get(key):
            raise RecordError(f"missing or empty required field {key!r}")
    dates: dict[str, datetime.date | None] = {}
    for key in DATE_KEYS:
        dates[key] = _parse_date(obj[key], key) if key in obj else None
    if dates["submitted"] and dates["accepted"] and dates["accepted"] < dates["submitted"]:
        raise RecordError("date ordering violation: accepted earlier than submitted")
    if dates["accepted"] and dates["published"] and dates["published"] < dates["accepted"]:
        raise RecordError("date ordering violation: published earlier than accepted")
    return BibRecord(
        id=obj["id"],
        title=obj["title"],
        journal=obj["journal"],
        field_label=obj["field_label"],
        publisher=obj["publisher"],
        abstract=obj.get("abstract", "") if isinstance(obj.get("abstract"), str) else "",
        fulltext=obj.get("fulltext", "") if isinstance(obj.get("fulltext"), str) else "",
        submitted=dates["submitted"],
        accepted=dates["accepted"],
        published=dates["published"],
    )


def load_corpus(path) -> tuple[Corpus, list[ParseError]]:
    """Load a JSONL corpus file.

    Bad lines never abort the load; they are collected into the returned
    error report with their line number.  Blank lines are skipped.
    """
    corpus = Corpus()
    errors: list[ParseError] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                corpus.add(parse_record(line))
            except RecordError as exc:
                errors.append(ParseError(line_no=line_no, reason=str(exc)))
    return corpus, errors
