from paperscreen.assessment.service import (
    AssessmentError,
    AssessmentService,
    CorruptLogError,
    IllegalTransitionError,
    QueueEntry,
    replay,
)

__all__ = [
    "AssessmentError",
    "AssessmentService",
    "CorruptLogError",
    "IllegalTransitionError",
    "QueueEntry",
    "replay",
]
