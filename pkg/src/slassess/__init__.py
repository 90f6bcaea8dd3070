"""Subjective-logic cross-validation of vehicle localization streams."""

__version__ = "0.1.0"

from .opinion import (  # noqa: E402
    EvidenceView,
    Opinion,
    cumulative_fuse,
    cumulative_unfuse,
    degree_of_conflict,
    from_evidence,
    make_opinion,
    multiply,
    project,
    to_evidence,
    trust_discount,
    vacuous,
    variance,
)

__all__ = [
    "EvidenceView",
    "Opinion",
    "cumulative_fuse",
    "cumulative_unfuse",
    "degree_of_conflict",
    "from_evidence",
    "make_opinion",
    "multiply",
    "project",
    "to_evidence",
    "trust_discount",
    "vacuous",
    "variance",
]
