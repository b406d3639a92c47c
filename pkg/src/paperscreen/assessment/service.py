"""Event-sourced triage queue for flagged papers.

Every mutation is an immutable event appended to a log; the service
state is a pure fold over the log, so replaying a session's log always
reproduces the live state bit for bit.  Humans move entries through a
fixed state machine (awaiting -> confirmed/false-positive -> reported ->
retracted), propose new tortured-phrase fingerprints, and promotion
feeds the screening dictionary for the next batch (snowballing).

Persistence is a line-delimited JSON log with a version header line.
Single-writer discipline: mutations are serialized by a lock and publish
a fresh immutable snapshot, so concurrent readers never see torn state.
"""

from __future__ import annotations

import datetime
import json
import threading
from dataclasses import dataclass, field, replace

from paperscreen.fingerprints import Fingerprint, normalize_phrase

LOG_HEADER = {"schema": "assessment-log/1"}

STATUS_AWAITING = "awaiting"
STATUS_CONFIRMED = "confirmed_problematic"
STATUS_FALSE_POSITIVE = "false_positive"
STATUS_REPORTED = "reported_to_publisher"
STATUS_RETRACTED = "retracted"

TRANSITIONS: dict[str, tuple[str, ...]] = {
    STATUS_AWAITING: (STATUS_CONFIRMED, STATUS_FALSE_POSITIVE),
    STATUS_CONFIRMED: (STATUS_REPORTED,),
    STATUS_REPORTED: (STATUS_RETRACTED,),
    STATUS_FALSE_POSITIVE: (),
    STATUS_RETRACTED: (),
}

PROPOSAL_PROPOSED = "proposed"
PROPOSAL_PROMOTED = "promoted"
PROPOSAL_REJECTED = "rejected"


class AssessmentError(ValueError):
    pass


class IllegalTransitionError(AssessmentError):
    pass


class BelowThresholdError(AssessmentError):
    pass


class CorruptLogError(ValueError):
    pass


@dataclass(frozen=True)
class AssessmentEvent:
    event_id: int
    timestamp: str  # ISO-8601, recorded at append time
    actor: str
    kind: str  # enqueue | assess | assign | propose_fingerprint | promote_fingerprint | export
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "event_id": self.event_id,
                "timestamp": self.timestamp,
                "actor": self.actor,
                "kind": self.kind,
                "payload": self.payload,
            },
            ensure_ascii=False,
            sort_keys=True,
        )


@dataclass(frozen=True)
class QueueEntry:
    paper_id: str
    publisher: str
    journal: str
    status: str
    reports: tuple[dict, ...]
    assignee: str | None
    history: tuple[int, ...]  # event ids
    notes: tuple[str, ...]
    distinct_fingerprints: int  # max over attached screening reports

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "publisher": self.publisher,
            "journal": self.journal,
            "status": self.status,
            "reports": list(self.reports),
            "assignee": self.assignee,
            "history": list(self.history),
            "notes": list(self.notes),
            "distinct_fingerprints": self.distinct_fingerprints,
        }


@dataclass(frozen=True)
class FingerprintProposal:
    proposal_id: str
    tortured: str
    expected: str
    proposer: str
    evidence_paper_ids: tuple[str, ...]
    state: str

    def to_dict(self) -> dict:
        return {
            "proposal_id": self.proposal_id,
            "tortured": self.tortured,
            "expected": self.expected,
            "proposer": self.proposer,
            "evidence_paper_ids": list(self.evidence_paper_ids),
            "state": self.state,
        }


@dataclass(frozen=True)
class ServiceState:
    """Immutable snapshot: the fold of all events so far."""

    entries: dict[str, QueueEntry] = field(default_factory=dict)
    proposals: dict[str, FingerprintProposal] = field(default_factory=dict)
    promoted: tuple[Fingerprint, ...] = ()
    last_event_id: int = 0

    def to_dict(self) -> dict:
        return {
            "entries": {pid: e.to_dict() for pid, e in sorted(self.entries.items())},
            "proposals": {pid: p.to_dict() for pid, p in sorted(self.proposals.items())},
            "promoted": [
                {"id": fp.id, "tortured": fp.tortured, "expected": fp.expected, "source": fp.source}
                for fp in self.promoted
            ],
            "last_event_id": self.last_event_id,
        }


def _report_distinct(report: dict) -> int:
    if report.get("kind") == "screening":
        return int(report.get("distinct_fingerprints", 0))
    return 0


def apply_event(state: ServiceState, event: AssessmentEvent) -> ServiceState:
    """Pure state transition; total for events produced by the service."""
    entries = dict(state.entries)
    proposals = dict(state.proposals)
    promoted = state.promoted
    p = event.payload
    if event.kind == "enqueue":
        paper_id = p["paper_id"]
        report = p["report"]
        prior = entries.get(paper_id)
        if prior is None:
            entries[paper_id] = QueueEntry(
                paper_id=paper_id,
                publisher=p.get("publisher", ""),
                journal=p.get("journal", ""),
                status=STATUS_AWAITING,
                reports=(report,),
                assignee=None,
                history=(event.event_id,),
                notes=(),
                distinct_fingerprints=_report_distinct(report),
            )
        else:
            entries[paper_id] = replace(
                prior,
                reports=prior.reports + (report,),
                history=prior.history + (event.event_id,),
                distinct_fingerprints=max(prior.distinct_fingerprints, _report_distinct(report)),
            )
    elif event.kind == "assess":
        prior = entries[p["paper_id"]]
        entries[p["paper_id"]] = replace(
            prior,
            status=p["decision"],
            history=prior.history + (event.event_id,),
            notes=prior.notes + ((p["note"],) if p.get("note") else ()),
        )
    elif event.kind == "assign":
        prior = entries[p["paper_id"]]
        entries[p["paper_id"]] = replace(
            prior, assignee=p["assignee"], history=prior.history + (event.event_id,)
        )
    elif event.kind == "propose_fingerprint":
        proposals[p["proposal_id"]] = FingerprintProposal(
            proposal_id=p["proposal_id"],
            tortured=p["tortured"],
            expected=p.get("expected", ""),
            proposer=event.actor,
            evidence_paper_ids=tuple(p.get("evidence_paper_ids", ())),
            state=PROPOSAL_PROPOSED,
        )
    elif event.kind == "promote_fingerprint":
        prior_p = proposals[p["proposal_id"]]
        if prior_p.state != PROPOSAL_PROMOTED:
            proposals[p["proposal_id"]] = replace(prior_p, state=PROPOSAL_PROMOTED)
            promoted = promoted + (
                Fingerprint(
                    id=p["fingerprint_id"],
                    tortured=prior_p.tortured,
                    expected=prior_p.expected,
                    source="snowballed",
                    added_on=datetime.date.fromisoformat(event.timestamp[:10]),
                ),
            )
    elif event.kind == "export":
        pass  # audit-only: exports mutate nothing
    else:
        raise CorruptLogError(f"event {event.event_id}: unknown kind {event.kind!r}")
    return ServiceState(
        entries=entries, proposals=proposals, promoted=promoted, last_event_id=event.event_id
    )


class AssessmentService:
    """Live service: validates commands, appends events, folds state."""

    def __init__(self, base_dictionary: list[Fingerprint] | None = None, log_path=None, clock=None):
        self._base_dictionary = list(base_dictionary or [])
        self._log_path = log_path
        self._clock = clock or (lambda: datetime.datetime.now(datetime.timezone.utc).isoformat())
        self._lock = threading.Lock()
        self._state = ServiceState()
        self._events: list[AssessmentEvent] = []
        self._log_fh = None
        if log_path is not None:
            self._log_fh = open(log_path, "a+", encoding="utf-8")
            self._log_fh.seek(0)
            existing = self._log_fh.read()
            if existing:
                state, events = _fold_log_text(existing)
                self._state = state
                self._events = events
            else:
                self._log_fh.write(json.dumps(LOG_HEADER, sort_keys=True) + "\n")
                self._log_fh.flush()

    # -- queries (lock-free: snapshots are immutable) ------------------

    @property
    def state(self) -> ServiceState:
        return self._state

    @property
    def events(self) -> list[AssessmentEvent]:
        return list(self._events)

    def dictionary(self) -> list[Fingerprint]:
        """Base dictionary plus every promoted (snowballed) fingerprint."""
        return self._base_dictionary + list(self._state.promoted)

    def entry(self, paper_id: str) -> QueueEntry:
        entry = self._state.entries.get(paper_id)
        if entry is None:
            raise AssessmentError(f"unknown paper {paper_id!r}")
        return entry

    def queue(self, status=None, publisher=None, min_phrases=None) -> list[QueueEntry]:
        entries = sorted(self._state.entries.values(), key=lambda e: e.paper_id)
        if status:
            entries = [e for e in entries if e.status == status]
        if publisher:
            entries = [e for e in entries if e.publisher == publisher]
        if min_phrases is not None:
            entries = [e for e in entries if e.distinct_fingerprints >= min_phrases]
        return entries

    def publisher_stats(self) -> list[dict]:
        """Per-publisher counts by status (the per-publisher breakdown view)."""
        grouped: dict[str, dict[str, int]] = {}
        for entry in self._state.entries.values():
            counts = grouped.setdefault(entry.publisher, {})
            counts[entry.status] = counts.get(entry.status, 0) + 1
        return [
            {"publisher": pub, "by_status": dict(sorted(counts.items())), "total": sum(counts.values())}
            for pub, counts in sorted(grouped.items())
        ]

    # -- commands ------------------------------------------------------

    def _append(self, actor: str, kind: str, payload: dict) -> AssessmentEvent:
        event = AssessmentEvent(
            event_id=self._state.last_event_id + 1,
            timestamp=self._clock(),
            actor=actor,
            kind=kind,
            payload=payload,
        )
        if self._log_fh is not None:
            self._log_fh.write(event.to_json() + "\n")
            self._log_fh.flush()
        self._state = apply_event(self._state, event)
        self._events.append(event)
        return event

    def enqueue(self, report: dict, publisher: str = "", journal: str = "", actor: str = "screener") -> QueueEntry:
        """Queue a paper for human triage; idempotent per paper id.

        Accepts a queued screening report, a positive generated-text
        verdict, or a contradicted sequence-claim verdict; anything below
        those bars is rejected.
        """
        kind = report.get("kind")
        eligible = (
            (kind == "screening" and report.get("severity") == "queued")
            or (kind == "generated" and report.get("verdict") == "positive")
            or (kind == "sequence" and report.get("verdict") == "contradicted")
        )
        if not eligible:
            raise BelowThresholdError(f"report for {report.get('paper_id')!r} is below the queue threshold")
        with self._lock:
            self._append(
                actor,
                "enqueue",
                {"paper_id": report["paper_id"], "report": report, "publisher": publisher, "journal": journal},
            )
            return self._state.entries[report["paper_id"]]

    def assess(self, paper_id: str, decision: str, actor: str, note: str = "") -> QueueEntry:
        with self._lock:
            entry = self.entry(paper_id)
            if decision not in TRANSITIONS.get(entry.status, ()):
                raise IllegalTransitionError(f"{entry.status} -> {decision} is not a legal transition")
            self._append(actor, "assess", {"paper_id": paper_id, "decision": decision, "note": note})
            return self._state.entries[paper_id]

    def assign(self, paper_id: str, assignee: str, actor: str) -> QueueEntry:
        with self._lock:
            self.entry(paper_id)
            self._append(actor, "assign", {"paper_id": paper_id, "assignee": assignee})
            return self._state.entries[paper_id]

    def propose_fingerprint(
        self, tortured: str, expected: str = "", proposer: str = "", evidence_paper_ids=()
    ) -> FingerprintProposal:
        with self._lock:
            phrase = normalize_phrase(tortured)
            if not phrase:
                raise AssessmentError("empty tortured phrase")
            for fp in self.dictionary():
                if normalize_phrase(fp.tortured) == phrase:
                    raise AssessmentError(f"phrase {tortured!r} already in dictionary")
            for prop in self._state.proposals.values():
                if prop.state != PROPOSAL_REJECTED and normalize_phrase(prop.tortured) == phrase:
                    raise AssessmentError(f"phrase {tortured!r} already proposed")
            proposal_id = f"prop-{len(self._state.proposals) + 1}"
            self._append(
                proposer or "anonymous",
                "propose_fingerprint",
                {
                    "proposal_id": proposal_id,
                    "tortured": tortured,
                    "expected": expected,
                    "evidence_paper_ids": list(evidence_paper_ids),
                },
            )
            return self._state.proposals[proposal_id]

    def promote_fingerprint(self, proposal_id: str, actor: str) -> Fingerprint | None:
        """Promote a proposal into the live dictionary (source=snowballed).

        Promoting twice is a no-op returning None.
        """
        with self._lock:
            proposal = self._state.proposals.get(proposal_id)
            if proposal is None:
                raise AssessmentError(f"unknown proposal {proposal_id!r}")
            if proposal.state == PROPOSAL_REJECTED:
                raise AssessmentError(f"proposal {proposal_id!r} was rejected")
            if proposal.state == PROPOSAL_PROMOTED:
                return None
            fingerprint_id = f"snowball-{proposal_id}"
            self._append(actor, "promote_fingerprint", {"proposal_id": proposal_id, "fingerprint_id": fingerprint_id})
            return self._state.promoted[-1]

    def export_notifications(self, publisher: str | None = None, journal: str | None = None, actor: str = "exporter") -> dict:
        """Publisher-grouped notifications for confirmed-problematic entries."""
        with self._lock:
            groups: dict[str, list[dict]] = {}
            for entry in self.queue(status=STATUS_CONFIRMED, publisher=publisher):
                if journal and entry.journal != journal:
                    continue
                event_dates = [
                    self._events[eid - 1].timestamp for eid in entry.history if eid - 1 < len(self._events)
                ]
                groups.setdefault(entry.publisher, []).append(
                    {
                        "paper_id": entry.paper_id,
                        "journal": entry.journal,
                        "evidence": list(entry.reports),
                        "notes": list(entry.notes),
                        "history": list(entry.history),
                        "assessed_on": event_dates[-1][:10] if event_dates else None,
                    }
                )
            bundle = {
                "publishers": [
                    {"publisher": pub, "notifications": notes} for pub, notes in sorted(groups.items())
                ],
                "total": sum(len(v) for v in groups.values()),
            }
            self._append(actor, "export", {"publisher": publisher, "journal": journal, "count": bundle["total"]})
            return bundle

    def close(self) -> None:
        if self._log_fh is not None:
            self._log_fh.close()
            self._log_fh = None


def _fold_log_text(text: str) -> tuple[ServiceState, list[AssessmentEvent]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        return ServiceState(), []
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise CorruptLogError(f"unreadable header line: {exc}") from None
    if header != LOG_HEADER:
        raise CorruptLogError(f"unexpected log header {header!r}")
    state = ServiceState()
    events: list[AssessmentEvent] = []
    expected_id = 1
    for line_no, line in enumerate(lines[1:], start=2):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorruptLogError(f"line {line_no}: unreadable event: {exc}") from None
        event = AssessmentEvent(
            event_id=obj["event_id"],
            timestamp=obj["timestamp"],
            actor=obj["actor"],
            kind=obj["kind"],
            payload=obj["payload"],
        )
        if event.event_id != expected_id:
            raise CorruptLogError(
                f"line {line_no}: event id {event.event_id} breaks the sequence (expected {expected_id})"
            )
        expected_id += 1
        state = apply_event(state, event)
        events.append(event)
    return state, events


def replay(log_path) -> ServiceState:
    """Rebuild service state as a pure fold over a log file."""
    with open(log_path, encoding="utf-8") as fh:
        state, _ = _fold_log_text(fh.read())
    return state
