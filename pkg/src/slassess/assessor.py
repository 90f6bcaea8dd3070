"""Short-term / long-term window assessment of localization streams.

Each system keeps a short-term (ST) window holding the fusion of its last
``st_length`` input opinions and a long-term (LT) window that receives every
opinion evicted from ST while being trust-discounted once per eviction.  The
per-step behavior opinion is ST alone when ST and LT conflict beyond the
gate threshold, and ST fused with LT otherwise.  Systems are cross-validated
pairwise on their behavior opinions with the degree of conflict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigError, DomainMismatch, MissingSystem
from .opinion import (
    TOL,
    Opinion,
    cumulative_fuse,
    cumulative_unfuse,
    degree_of_conflict,
    trust_discount,
    vacuous,
)


@dataclass(frozen=True)
class AssessorParams:
    st_length: int = 10
    trust_discount_p: float = 0.99
    gate_threshold: float = 0.5
    event_threshold: float = 0.5

    def __post_init__(self):
        if int(self.st_length) != self.st_length or self.st_length < 1:
            raise ConfigError(f"st_length must be an integer >= 1, got {self.st_length}")
        object.__setattr__(self, "st_length", int(self.st_length))
        for name in ("trust_discount_p", "gate_threshold", "event_threshold"):
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class WindowState:
    st_opinion: Opinion
    st_queue: tuple[Opinion, ...]
    lt_opinion: Opinion

    @classmethod
    def fresh(cls, base_rate) -> "WindowState":
        """Empty windows over the joint domain described by ``base_rate``."""
        v = vacuous(base_rate)
        return cls(v, (), v)

    @property
    def st_count(self) -> int:
        return len(self.st_queue)


@dataclass(frozen=True)
class AssessmentRecord:
    step: int
    system: str
    reference: str
    delta: float
    uncertainty: float
    flagged: bool


def _check_domain(state: WindowState, op: Opinion):
    a = state.st_opinion.base_rate
    if op.base_rate is a:
        return
    if op.k != a.size or np.max(np.abs(op.base_rate - a)) > TOL:
        raise DomainMismatch("input opinion is not on the window's joint domain")


def update_window(
    state: WindowState, op: Opinion, params: AssessorParams
) -> tuple[Opinion, WindowState]:
    """Advance one system's windows by one input opinion.

    Returns the behavior opinion for this step and the new state.
    Unfusion failures are bookkeeping bugs and propagate unchanged.
    """
    _check_domain(state, op)
    fused = cumulative_fuse(state.st_opinion, op)
    if state.st_count < params.st_length:
        st = fused
        queue = state.st_queue + (op,)
        lt = state.lt_opinion
    else:
        oldest = state.st_queue[0]
        st = cumulative_unfuse(fused, oldest)
        queue = state.st_queue[1:] + (op,)
        lt = cumulative_fuse(trust_discount(state.lt_opinion, params.trust_discount_p), oldest)

    if degree_of_conflict(st, lt) > params.gate_threshold:
        behavior = st
    else:
        behavior = cumulative_fuse(st, lt)
    return behavior, WindowState(st, queue, lt)


def compare(behavior: Opinion, reference_behavior: Opinion) -> tuple[float, float]:
    """``(delta, uncertainty)`` of ``behavior`` against a reference system."""
    if behavior.k != reference_behavior.k:
        raise DomainMismatch(
            f"behaviors have {behavior.k} and {reference_behavior.k} states"
        )
    return degree_of_conflict(behavior, reference_behavior), behavior.uncertainty


def step_all(
    states: Mapping[str, WindowState],
    inputs: Mapping[str, Opinion],
    params: AssessorParams,
    step: int = 0,
) -> tuple[dict[str, WindowState], list[AssessmentRecord]]:
    """Update every system once and compare all ordered pairs.

    Records are ordered by system, then reference, following the iteration
    order of ``states``.
    """
    missing = [name for name in states if name not in inputs]
    if missing:
        raise MissingSystem(f"no input at step {step} for: {', '.join(missing)}")

    new_states = {}
    behaviors = {}
    for name, state in states.items():
        behaviors[name], new_states[name] = update_window(state, inputs[name], params)

    records = []
    for name in states:
        for ref in states:
            if ref == name:
                continue
            delta, u = compare(behaviors[name], behaviors[ref])
            records.append(
                AssessmentRecord(step, name, ref, delta, u, delta > params.event_threshold)
            )
    return new_states, records


@dataclass
class Assessor:
    """Stateful driver over :func:`step_all` for a fixed set of systems."""

    systems: Sequence[str]
    base_rate: np.ndarray
    params: AssessorParams = field(default_factory=AssessorParams)

    def __post_init__(self):
        if len(set(self.systems)) != len(self.systems):
            raise ConfigError("system identifiers must be unique")
        self.states = {name: WindowState.fresh(self.base_rate) for name in self.systems}
        self.step_index = 0

    def step(self, inputs: Mapping[str, Opinion]) -> list[AssessmentRecord]:
        self.states, records = step_all(self.states, inputs, self.params, self.step_index)
        self.step_index += 1
        return records

    def reset(self):
        self.states = {name: WindowState.fresh(self.base_rate) for name in self.systems}
        self.step_index = 0
