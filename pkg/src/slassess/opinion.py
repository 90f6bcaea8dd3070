"""Multinomial subjective opinions and the operators the assessor relies on.

An opinion over a domain of ``k`` states is a belief vector ``b``, an
uncertainty mass ``u`` with ``sum(b) + u == 1`` and a base rate ``a`` (the
prior probability of each state).  Every opinion with ``u > 0`` has an
equivalent Dirichlet evidence vector ``r = W * b / u`` for a non-informative
prior weight ``W`` (by default the domain size), which is how fusion and
unfusion are reasoned about.

All values are immutable; every function here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AdditivityViolation,
    BaseRateMismatch,
    BaseRateViolation,
    DimensionMismatch,
    DogmaticOpinion,
    NegativeEvidence,
    RangeViolation,
)

TOL = 1e-9
# denominators below this are treated as their limit case
EPS = 1e-12


def _vector(values, name):
    arr = np.array(values, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise RangeViolation(f"{name} contains non-finite values")
    return arr


def _frozen(arr):
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Opinion:
    """A multinomial opinion ``(belief, uncertainty, base_rate)``.

    Construction validates the invariants at tolerance ``1e-9`` and then
    renormalizes, so tiny floating point excursions never propagate.
    """

    belief: np.ndarray
    uncertainty: float
    base_rate: np.ndarray

    def __post_init__(self):
        b = _vector(self.belief, "belief")
        a = _vector(self.base_rate, "base_rate")
        u = float(self.uncertainty)
        if b.size < 2:
            raise DimensionMismatch(f"opinions need at least 2 states, got {b.size}")
        if a.size != b.size:
            raise DimensionMismatch(
                f"belief has {b.size} states but base_rate has {a.size}"
            )
        if not np.isfinite(u):
            raise RangeViolation("uncertainty is not finite")
        if (
            u < -TOL
            or u > 1 + TOL
            or b.min() < -TOL
            or b.max() > 1 + TOL
            or a.min() < -TOL
            or a.max() > 1 + TOL
        ):
            raise RangeViolation("opinion component outside [0, 1]")
        total = b.sum() + u
        if abs(total - 1.0) > TOL:
            raise AdditivityViolation(f"sum(belief) + uncertainty = {total!r}, expected 1")
        a_total = a.sum()
        if abs(a_total - 1.0) > TOL:
            raise BaseRateViolation(f"sum(base_rate) = {a_total!r}, expected 1")

        b = np.clip(b, 0.0, 1.0)
        u = min(max(u, 0.0), 1.0)
        a = np.clip(a, 0.0, 1.0)
        total = b.sum() + u
        b = b / total
        u = u / total
        a = a / a.sum()
        object.__setattr__(self, "belief", _frozen(b))
        object.__setattr__(self, "uncertainty", float(u))
        object.__setattr__(self, "base_rate", _frozen(a))

    @classmethod
    def _build(cls, b: np.ndarray, u: float, a: np.ndarray) -> "Opinion":
        """Construct from operator output, skipping validation.

        ``a`` must come from an existing opinion.  Belief is clipped and the
        result renormalized so that sum(belief) + uncertainty == 1.
        """
        b = np.clip(b, 0.0, 1.0)
        u = min(max(float(u), 0.0), 1.0)
        total = b.sum() + u
        if total != 1.0:
            b /= total
            u /= total
        op = object.__new__(cls)
        object.__setattr__(op, "belief", _frozen(b))
        object.__setattr__(op, "uncertainty", u)
        object.__setattr__(op, "base_rate", a)
        return op

    @property
    def k(self) -> int:
        return self.belief.size

    @property
    def is_vacuous(self) -> bool:
        return self.uncertainty >= 1.0 - TOL

    @property
    def is_dogmatic(self) -> bool:
        return self.uncertainty <= TOL

    def __eq__(self, other):
        if not isinstance(other, Opinion):
            return NotImplemented
        return (
            self.uncertainty == other.uncertainty
            and np.array_equal(self.belief, other.belief)
            and np.array_equal(self.base_rate, other.base_rate)
        )

    __hash__ = None

    def __repr__(self):
        b = np.array2string(self.belief, precision=4, threshold=8)
        a = np.array2string(self.base_rate, precision=4, threshold=8)
        return f"Opinion(belief={b}, uncertainty={self.uncertainty:.6g}, base_rate={a})"


@dataclass(frozen=True, eq=False)
class EvidenceView:
    """Dirichlet evidence form of an opinion.

    ``prior_weight`` defaults to the number of states.
    """

    evidence: np.ndarray
    base_rate: np.ndarray
    prior_weight: float | None = None

    def __post_init__(self):
        r = _vector(self.evidence, "evidence")
        a = _vector(self.base_rate, "base_rate")
        if r.size != a.size:
            raise DimensionMismatch(
                f"evidence has {r.size} states but base_rate has {a.size}"
            )
        if r.min() < 0:
            raise NegativeEvidence("evidence components must be non-negative")
        w = float(r.size if self.prior_weight is None else self.prior_weight)
        if not (np.isfinite(w) and w > 0):
            raise RangeViolation(f"prior weight must be positive, got {w!r}")
        if abs(a.sum() - 1.0) > TOL:
            raise BaseRateViolation(f"sum(base_rate) = {a.sum()!r}, expected 1")
        object.__setattr__(self, "evidence", _frozen(r))
        object.__setattr__(self, "base_rate", _frozen(a))
        object.__setattr__(self, "prior_weight", w)

    @property
    def alpha(self) -> np.ndarray:
        """Dirichlet strength parameters ``r + a * W``."""
        return self.evidence + self.base_rate * self.prior_weight


def make_opinion(belief, uncertainty, base_rate) -> Opinion:
    """Validating constructor; raises on any invariant violation."""
    return Opinion(belief, uncertainty, base_rate)


def vacuous(base_rate) -> Opinion:
    """Opinion with no evidence at all.

    ``base_rate`` may also be an integer, meaning a uniform base rate over
    that many states.
    """
    if np.isscalar(base_rate):
        k = int(base_rate)
        base_rate = np.full(k, 1.0 / k)
    a = np.asarray(base_rate, dtype=np.float64)
    return Opinion(np.zeros(a.size), 1.0, a)


def from_evidence(ev: EvidenceView) -> Opinion:
    s = ev.prior_weight + ev.evidence.sum()
    return Opinion(ev.evidence / s, ev.prior_weight / s, ev.base_rate)


def _from_evidence(r: np.ndarray, w: float, a: np.ndarray) -> Opinion:
    s = w + r.sum()
    return Opinion._build(r / s, w / s, a)


def to_evidence(op: Opinion, prior_weight: float | None = None) -> EvidenceView:
    """Map a non-dogmatic opinion to its evidence vector."""
    w = float(op.k if prior_weight is None else prior_weight)
    if op.uncertainty <= 0.0:
        raise DogmaticOpinion("dogmatic opinions have infinite evidence")
    return EvidenceView(w * op.belief / op.uncertainty, op.base_rate, w)


def project(op: Opinion) -> np.ndarray:
    """Projected probability ``b + a * u``."""
    return op.belief + op.base_rate * op.uncertainty


def variance(op: Opinion, prior_weight: float | None = None) -> np.ndarray:
    w = float(op.k if prior_weight is None else prior_weight)
    if not w > 0:
        raise RangeViolation(f"prior weight must be positive, got {w!r}")
    p = project(op)
    return p * (1.0 - p) * op.uncertainty / (w + op.uncertainty)


def _check_dims(x: Opinion, y: Opinion):
    if x.k != y.k:
        raise DimensionMismatch(f"opinions have {x.k} and {y.k} states")


def _check_base_rates(x: Opinion, y: Opinion):
    _check_dims(x, y)
    if x.base_rate is not y.base_rate and np.max(np.abs(x.base_rate - y.base_rate)) > TOL:
        raise BaseRateMismatch("operands must share a base rate")


def cumulative_fuse(x: Opinion, y: Opinion) -> Opinion:
    """Aleatory cumulative fusion.

    Equivalent to adding the operands' evidence vectors.  Two dogmatic
    operands are averaged with equal weight.
    """
    _check_base_rates(x, y)
    ux, uy = x.uncertainty, y.uncertainty
    denom = ux + uy - ux * uy
    if denom < EPS:
        return Opinion._build((x.belief + y.belief) / 2.0, 0.0, x.base_rate)
    b = (x.belief * uy + y.belief * ux) / denom
    return Opinion._build(b, ux * uy / denom, x.base_rate)


def cumulative_unfuse(fused: Opinion, known: Opinion) -> Opinion:
    """Remove the evidence of ``known`` from ``fused``.

    Inverse of :func:`cumulative_fuse`: ``unfuse(fuse(A, B), B) == A``.
    Negative remainders within tolerance are clamped to zero.
    """
    _check_base_rates(fused, known)
    if fused.uncertainty <= 0.0:
        raise DogmaticOpinion("cannot unfuse from a dogmatic opinion")
    if known.uncertainty <= 0.0:
        raise DogmaticOpinion("cannot unfuse a dogmatic opinion")
    w = float(fused.k)
    r_fused = w * fused.belief / fused.uncertainty
    r_known = w * known.belief / known.uncertainty
    diff = r_fused - r_known
    tol = TOL * max(1.0, float(r_fused.sum()))
    if diff.min() < -tol:
        raise NegativeEvidence(
            f"known opinion carries {-diff.min():.3g} more evidence than the fused one"
        )
    return _from_evidence(np.maximum(diff, 0.0), w, fused.base_rate)


def trust_discount(op: Opinion, p_td: float) -> Opinion:
    """Scale belief by ``p_td``; the removed mass becomes uncertainty."""
    p = float(p_td)
    if not 0.0 <= p <= 1.0:
        raise RangeViolation(f"trust discount probability must be in [0, 1], got {p!r}")
    b = p * op.belief
    return Opinion._build(b, 1.0 - b.sum(), op.base_rate)


def multiply(x: Opinion, y: Opinion) -> Opinion:
    """Opinion on the joint variable of two independent opinions.

    The joint projected probability and base rate are the outer products of
    the factors' (row-major: ``x`` index major).  Uncertainty is the largest
    value that keeps every joint belief non-negative.
    """
    p = np.outer(project(x), project(y)).reshape(-1)
    a = np.outer(x.base_rate, y.base_rate).reshape(-1)
    mask = a > EPS
    u = min(1.0, float(np.min(p[mask] / a[mask])))
    b = np.maximum(p - a * u, 0.0)
    a.flags.writeable = False
    return Opinion._build(b, u, a)


def degree_of_conflict(x: Opinion, y: Opinion) -> float:
    """Projected distance times conjunctive certainty, in ``[0, 1]``."""
    _check_dims(x, y)
    pd = 0.5 * float(np.abs(project(x) - project(y)).sum())
    cc = (1.0 - x.uncertainty) * (1.0 - y.uncertainty)
    return min(max(pd * cc, 0.0), 1.0)
