"""HTTP facade over the assessment service.

JSON in, JSON out; the dashboard and CLI are both plain clients of these
endpoints.  The service itself guarantees snapshot isolation, so request
handlers never observe torn state.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from paperscreen.assessment.service import (
    AssessmentError,
    AssessmentService,
    BelowThresholdError,
    IllegalTransitionError,
)


class AssessBody(BaseModel):
    decision: str
    actor: str
    note: str = ""


class AssignBody(BaseModel):
    assignee: str
    actor: str


class ProposalBody(BaseModel):
    tortured: str
    expected: str = ""
    proposer: str = ""
    evidence_paper_ids: list[str] = []


class PromoteBody(BaseModel):
    actor: str


class EnqueueBody(BaseModel):
    report: dict
    publisher: str = ""
    journal: str = ""
    actor: str = "screener"


def create_app(service: AssessmentService) -> FastAPI:
    app = FastAPI(title="paperscreen assessment service")

    @app.get("/queue")
    def get_queue(status: str | None = None, publisher: str | None = None, min_phrases: int | None = None):
        entries = service.queue(status=status, publisher=publisher, min_phrases=min_phrases)
        return {"entries": [e.to_dict() for e in entries], "total": len(entries)}

    @app.get("/papers/{paper_id}")
    def get_paper(paper_id: str):
        try:
            return service.entry(paper_id).to_dict()
        except AssessmentError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    @app.post("/papers/{paper_id}/enqueue")
    def post_enqueue(paper_id: str, body: EnqueueBody):
        report = dict(body.report)
        report.setdefault("paper_id", paper_id)
        try:
            return service.enqueue(
                report, publisher=body.publisher, journal=body.journal, actor=body.actor
            ).to_dict()
        except BelowThresholdError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None

    @app.post("/papers/{paper_id}/assess")
    def post_assess(paper_id: str, body: AssessBody):
        try:
            return service.assess(paper_id, body.decision, body.actor, body.note).to_dict()
        except IllegalTransitionError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None
        except AssessmentError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    @app.post("/papers/{paper_id}/assign")
    def post_assign(paper_id: str, body: AssignBody):
        try:
            return service.assign(paper_id, body.assignee, body.actor).to_dict()
        except AssessmentError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    @app.post("/fingerprints/proposals")
    def post_proposal(body: ProposalBody):
        try:
            return service.propose_fingerprint(
                body.tortured, body.expected, body.proposer, body.evidence_paper_ids
            ).to_dict()
        except AssessmentError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None

    @app.get("/fingerprints/proposals")
    def get_proposals():
        proposals = sorted(service.state.proposals.values(), key=lambda p: p.proposal_id)
        return {"proposals": [p.to_dict() for p in proposals]}

    @app.post("/fingerprints/proposals/{proposal_id}/promote")
    def post_promote(proposal_id: str, body: PromoteBody):
        try:
            fingerprint = service.promote_fingerprint(proposal_id, body.actor)
        except AssessmentError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None
        if fingerprint is None:
            return {"promoted": False, "detail": "already promoted"}
        return {
            "promoted": True,
            "fingerprint": {"id": fingerprint.id, "tortured": fingerprint.tortured, "expected": fingerprint.expected, "source": fingerprint.source},
        }

    @app.get("/stats/publishers")
    def get_publisher_stats():
        return {"publishers": service.publisher_stats()}

    @app.get("/export/notifications")
    def get_notifications(publisher: str | None = None, journal: str | None = None):
        return service.export_notifications(publisher=publisher, journal=journal)

    return app
