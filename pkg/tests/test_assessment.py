import itertools
import json
import random

import pytest

from conftest import make_corpus, make_record
from paperscreen.assessment.service import (
    AssessmentError,
    AssessmentService,
    BelowThresholdError,
    CorruptLogError,
    IllegalTransitionError,
    STATUS_AWAITING,
    STATUS_CONFIRMED,
    STATUS_FALSE_POSITIVE,
    STATUS_REPORTED,
    STATUS_RETRACTED,
    TRANSITIONS,
    replay,
)
from paperscreen.fingerprints import Fingerprint, compile_dictionary, scan


def _screening_report(pid, distinct=3, severity="queued"):
    return {"kind": "screening", "paper_id": pid, "distinct_fingerprints": distinct,
            "severity": severity, "matches": []}


def _fixed_clock():
    counter = itertools.count()
    return lambda: f"2022-01-01T00:00:{next(counter) % 60:02d}+00:00"


def make_service(tmp_path=None, dictionary=None, with_log=True):
    log = (tmp_path / "events.jsonl") if (tmp_path and with_log) else None
    return AssessmentService(dictionary or [], log_path=log, clock=_fixed_clock())


def test_enqueue_awaiting(tmp_path):
    svc = make_service(tmp_path)
    entry = svc.enqueue(_screening_report("p1"), publisher="Pub", journal="J")
    assert entry.status == STATUS_AWAITING
    assert entry.distinct_fingerprints == 3


def test_enqueue_idempotent_attaches_reports(tmp_path):
    svc = make_service(tmp_path)
    svc.enqueue(_screening_report("p1"))
    svc.assess("p1", STATUS_CONFIRMED, actor="editor")
    entry = svc.enqueue(_screening_report("p1", distinct=4))
    assert len(entry.reports) == 2
    assert entry.status == STATUS_CONFIRMED  # re-enqueue keeps status
    assert entry.distinct_fingerprints == 4


def test_enqueue_below_threshold_rejected(tmp_path):
    svc = make_service(tmp_path)
    with pytest.raises(BelowThresholdError):
        svc.enqueue(_screening_report("p1", distinct=2, severity="flagged"))


def test_enqueue_generated_and_sequence_reports(tmp_path):
    svc = make_service(tmp_path)
    svc.enqueue({"kind": "generated", "paper_id": "g1", "verdict": "positive"})
    svc.enqueue({"kind": "sequence", "paper_id": "s1", "verdict": "contradicted"})
    with pytest.raises(BelowThresholdError):
        svc.enqueue({"kind": "generated", "paper_id": "g2", "verdict": "negative"})
    with pytest.raises(BelowThresholdError):
        svc.enqueue({"kind": "sequence", "paper_id": "s2", "verdict": "supported"})


def test_legal_full_path(tmp_path):
    svc = make_service(tmp_path)
    svc.enqueue(_screening_report("p1"))
    svc.assess("p1", STATUS_CONFIRMED, actor="a")
    svc.assess("p1", STATUS_REPORTED, actor="a")
    entry = svc.assess("p1", STATUS_RETRACTED, actor="a")
    assert entry.status == STATUS_RETRACTED
    assert len(entry.history) == 4  # enqueue + 3 assessments


def test_illegal_transitions_raise(tmp_path):
    svc = make_service(tmp_path)
    svc.enqueue(_screening_report("p1"))
    svc.assess("p1", STATUS_FALSE_POSITIVE, actor="a")
    with pytest.raises(IllegalTransitionError):
        svc.assess("p1", STATUS_RETRACTED, actor="a")
    with pytest.raises(IllegalTransitionError):
        svc.assess("p1", STATUS_AWAITING, actor="a")


def test_unknown_paper_raises(tmp_path):
    svc = make_service(tmp_path)
    with pytest.raises(AssessmentError):
        svc.assess("ghost", STATUS_CONFIRMED, actor="a")


def test_state_machine_closed_under_random_walks(tmp_path):
    """No call sequence can reach a status outside the transition graph."""
    rng = random.Random(0)
    all_statuses = set(TRANSITIONS)
    svc = make_service(tmp_path)
    svc.enqueue(_screening_report("p1"))
    for _ in range(200):
        decision = rng.choice(sorted(all_statuses))
        try:
            svc.assess("p1", decision, actor="fuzz")
        except IllegalTransitionError:
            pass
        status = svc.entry("p1").status
        assert status in all_statuses


def test_assign(tmp_path):
    svc = make_service(tmp_path)
    svc.enqueue(_screening_report("p1"))
    entry = svc.assign("p1", assignee="area-editor-7", actor="admin")
    assert entry.assignee == "area-editor-7"


def test_propose_and_promote_adds_snowballed_fingerprint(tmp_path):
    base = [Fingerprint(id="fp-1", tortured="irregular timberlands", expected="random forests")]
    svc = make_service(tmp_path, dictionary=base)
    proposal = svc.propose_fingerprint("profound learning", expected="deep learning",
                                       proposer="sleuth", evidence_paper_ids=["p9"])
    assert proposal.state == "proposed"
    fp = svc.promote_fingerprint(proposal.proposal_id, actor="editor")
    assert fp.source == "snowballed"
    assert [f.tortured for f in svc.dictionary()] == ["irregular timberlands", "profound learning"]


def test_propose_duplicate_phrase_rejected(tmp_path):
    base = [Fingerprint(id="fp-1", tortured="irregular timberlands", expected="random forests")]
    svc = make_service(tmp_path, dictionary=base)
    with pytest.raises(AssessmentError, match="already in dictionary"):
        svc.propose_fingerprint("Irregular  TIMBERLANDS")
    svc.propose_fingerprint("profound learning")
    with pytest.raises(AssessmentError, match="already proposed"):
        svc.propose_fingerprint("profound learning")


def test_promote_twice_is_noop(tmp_path):
    svc = make_service(tmp_path)
    proposal = svc.propose_fingerprint("profound learning")
    assert svc.promote_fingerprint(proposal.proposal_id, actor="e") is not None
    assert svc.promote_fingerprint(proposal.proposal_id, actor="e") is None
    assert len(svc.state.promoted) == 1


def test_snowballing_changes_next_scan(tmp_path):
    """Before/after oracle: promotion flips a fixture doc clean -> flagged."""
    base = [Fingerprint(id="fp-1", tortured="irregular timberlands")]
    svc = make_service(tmp_path, dictionary=base)
    doc = make_record("p1", "we rely on profound learning techniques")
    before = scan(doc, compile_dictionary(svc.dictionary()))
    assert before.severity == "clean"
    proposal = svc.propose_fingerprint("profound learning")
    svc.promote_fingerprint(proposal.proposal_id, actor="e")
    after = scan(doc, compile_dictionary(svc.dictionary()))
    assert after.distinct_fingerprints == 1 and after.severity == "flagged"
    # monotonicity: nothing previously matched is lost
    assert {m.fingerprint_id for m in before.matches} <= {m.fingerprint_id for m in after.matches}


def test_replay_empty_log(tmp_path):
    path = tmp_path / "log.jsonl"
    path.write_text('{"schema": "assessment-log/1"}\n', encoding="utf-8")
    state = replay(path)
    assert state.entries == {} and state.last_event_id == 0


def test_replay_equals_live_state(tmp_path):
    svc = make_service(tmp_path)
    svc.enqueue(_screening_report("p1"), publisher="A")
    svc.enqueue(_screening_report("p2"), publisher="B")
    svc.assess("p1", STATUS_CONFIRMED, actor="x", note="clear case")
    prop = svc.propose_fingerprint("profound learning", proposer="x")
    svc.promote_fingerprint(prop.proposal_id, actor="x")
    svc.export_notifications()
    live = svc.state
    svc.close()
    replayed = replay(tmp_path / "events.jsonl")
    assert replayed.to_dict() == live.to_dict()
    assert json.dumps(replayed.to_dict(), sort_keys=True) == json.dumps(live.to_dict(), sort_keys=True)


def test_replay_detects_id_gap(tmp_path):
    svc = make_service(tmp_path)
    svc.enqueue(_screening_report("p1"))
    svc.assess("p1", STATUS_CONFIRMED, actor="x")
    svc.close()
    path = tmp_path / "events.jsonl"
    lines = path.read_text(encoding="utf-8").splitlines()
    bad = lines[:2] + [lines[2].replace('"event_id": 2', '"event_id": 4')]
    path.write_text("\n".join(bad) + "\n", encoding="utf-8")
    with pytest.raises(CorruptLogError, match="breaks the sequence"):
        replay(path)


def test_replay_detects_repeated_id(tmp_path):
    svc = make_service(tmp_path)
    svc.enqueue(_screening_report("p1"))
    svc.close()
    path = tmp_path / "events.jsonl"
    content = path.read_text(encoding="utf-8")
    event_line = content.splitlines()[1]
    path.write_text(content + event_line + "\n", encoding="utf-8")
    with pytest.raises(CorruptLogError, match="breaks the sequence"):
        replay(path)


def test_service_reopens_log_and_continues(tmp_path):
    svc = make_service(tmp_path)
    svc.enqueue(_screening_report("p1"))
    svc.close()
    svc2 = AssessmentService([], log_path=tmp_path / "events.jsonl", clock=_fixed_clock())
    assert "p1" in svc2.state.entries
    svc2.assess("p1", STATUS_CONFIRMED, actor="x")
    svc2.close()
    assert replay(tmp_path / "events.jsonl").entries["p1"].status == STATUS_CONFIRMED


def test_export_groups_by_publisher(tmp_path):
    svc = make_service(tmp_path)
    for pid, pub in [("p1", "A"), ("p2", "A"), ("p3", "B"), ("p4", "B")]:
        svc.enqueue(_screening_report(pid), publisher=pub)
    for pid in ("p1", "p2", "p3"):
        svc.assess(pid, STATUS_CONFIRMED, actor="x")
    bundle = svc.export_notifications()
    assert bundle["total"] == 3
    assert [g["publisher"] for g in bundle["publishers"]] == ["A", "B"]
    assert len(bundle["publishers"][0]["notifications"]) == 2


def test_export_empty_queue(tmp_path):
    svc = make_service(tmp_path)
    bundle = svc.export_notifications()
    assert bundle == {"publishers": [], "total": 0}


def test_export_filters_status(tmp_path):
    svc = make_service(tmp_path)
    statuses = [STATUS_CONFIRMED, STATUS_FALSE_POSITIVE, None] * 4
    for i, decision in enumerate(statuses[:10]):
        pid = f"p{i}"
        svc.enqueue(_screening_report(pid), publisher="A")
        if decision:
            svc.assess(pid, decision, actor="x")
    bundle = svc.export_notifications()
    exported = {n["paper_id"] for g in bundle["publishers"] for n in g["notifications"]}
    confirmed = {pid for pid, e in svc.state.entries.items() if e.status == STATUS_CONFIRMED}
    assert exported == confirmed and len(exported) == 4


def test_publisher_stats(tmp_path):
    svc = make_service(tmp_path)
    svc.enqueue(_screening_report("p1"), publisher="A")
    svc.enqueue(_screening_report("p2"), publisher="A")
    svc.enqueue(_screening_report("p3"), publisher="B")
    svc.assess("p1", STATUS_CONFIRMED, actor="x")
    stats = svc.publisher_stats()
    assert stats == [
        {"publisher": "A", "by_status": {STATUS_AWAITING: 1, STATUS_CONFIRMED: 1}, "total": 2},
        {"publisher": "B", "by_status": {STATUS_AWAITING: 1}, "total": 1},
    ]


def test_queue_filters(tmp_path):
    svc = make_service(tmp_path)
    svc.enqueue(_screening_report("p1", distinct=3), publisher="A")
    svc.enqueue(_screening_report("p2", distinct=5), publisher="B")
    svc.assess("p2", STATUS_CONFIRMED, actor="x")
    assert [e.paper_id for e in svc.queue()] == ["p1", "p2"]
    assert [e.paper_id for e in svc.queue(status=STATUS_AWAITING)] == ["p1"]
    assert [e.paper_id for e in svc.queue(publisher="B")] == ["p2"]
    assert [e.paper_id for e in svc.queue(min_phrases=4)] == ["p2"]
