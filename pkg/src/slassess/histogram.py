"""Per-step input opinions from position deltas.

Each axis delta is dropped into a one-hot histogram with evenly spaced
interior borders and open-ended outer bins.  The histogram is used directly
as Dirichlet evidence for a per-axis opinion, and the two axis opinions are
multiplied into a joint opinion over ``x_bins * y_bins`` states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NonFiniteValue
from .opinion import EvidenceView, Opinion, from_evidence, multiply


@dataclass(frozen=True)
class HistogramSpec:
    min: float = -5.0
    max: float = 5.0
    bins: int = 10

    def __post_init__(self):
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ConfigError("histogram range must be finite")
        if not self.min < self.max:
            raise ConfigError(f"histogram min ({self.min}) must be below max ({self.max})")
        if int(self.bins) != self.bins or self.bins < 2:
            raise ConfigError(f"histogram needs at least 2 bins, got {self.bins}")
        object.__setattr__(self, "bins", int(self.bins))

    @property
    def width(self) -> float:
        return (self.max - self.min) / self.bins

    @property
    def borders(self) -> np.ndarray:
        """Interior borders; the outer bins extend to -inf and +inf."""
        return self.min + np.arange(1, self.bins) * self.width


@dataclass(frozen=True, eq=False)
class InputHistogram:
    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.float64)
        if c.ndim != 1 or np.count_nonzero(c) != 1 or c.sum() != 1.0:
            raise ValueError("an input histogram is one-hot")
        c.flags.writeable = False
        object.__setattr__(self, "counts", c)

    @property
    def index(self) -> int:
        return int(np.flatnonzero(self.counts)[0])


def _uniform(k):
    return np.full(k, 1.0 / k)


@dataclass(frozen=True, eq=False)
class DomainConfig:
    """Histogram layouts and base rates of the joint x/y domain.

    Base rates default to uniform.
    """

    x_spec: HistogramSpec = field(default_factory=HistogramSpec)
    y_spec: HistogramSpec = field(default_factory=HistogramSpec)
    base_rate_x: np.ndarray | None = None
    base_rate_y: np.ndarray | None = None

    def __post_init__(self):
        for name, spec in (("x", self.x_spec), ("y", self.y_spec)):
            attr = f"base_rate_{name}"
            a = getattr(self, attr)
            a = _uniform(spec.bins) if a is None else np.asarray(a, dtype=np.float64)
            if a.shape != (spec.bins,):
                raise ConfigError(
                    f"{attr} has {a.size} entries, expected {spec.bins}"
                )
            if np.any(a < 0) or abs(a.sum() - 1.0) > 1e-9:
                raise ConfigError(f"{attr} must be non-negative and sum to 1")
            a.flags.writeable = False
            object.__setattr__(self, attr, a)

    @property
    def k(self) -> int:
        return self.x_spec.bins * self.y_spec.bins

    @property
    def joint_base_rate(self) -> np.ndarray:
        return np.outer(self.base_rate_x, self.base_rate_y).reshape(-1)


def bin_index(value: float, spec: HistogramSpec) -> int:
    if not math.isfinite(value):
        raise NonFiniteValue(f"cannot bin non-finite value {value!r}")
    # border_i <= value < border_{i+1}
    return int(np.searchsorted(spec.borders, value, side="right"))


def delta_to_histogram(delta: float, spec: HistogramSpec) -> InputHistogram:
    counts = np.zeros(spec.bins)
    counts[bin_index(delta, spec)] = 1.0
    return InputHistogram(counts)


def axis_opinion(delta: float, spec: HistogramSpec, base_rate) -> Opinion:
    hist = delta_to_histogram(delta, spec)
    return from_evidence(EvidenceView(hist.counts, base_rate, spec.bins))


def input_opinion(dx: float, dy: float, cfg: DomainConfig) -> Opinion:
    """Joint opinion for one step of one localization system."""
    ox = axis_opinion(dx, cfg.x_spec, cfg.base_rate_x)
    oy = axis_opinion(dy, cfg.y_spec, cfg.base_rate_y)
    return multiply(ox, oy)


class InputOpinionCache:
    """Memoizes :func:`input_opinion` by bin pair.

    Deltas that land in the same pair of bins yield the same opinion, so a
    long stream only ever needs ``x_bins * y_bins`` distinct opinions.
    """

    def __init__(self, cfg: DomainConfig):
        self.cfg = cfg
        self._cache: dict[tuple[int, int], Opinion] = {}

    def __call__(self, dx: float, dy: float) -> Opinion:
        key = (bin_index(dx, self.cfg.x_spec), bin_index(dy, self.cfg.y_spec))
        op = self._cache.get(key)
        if op is None:
            op = input_opinion(dx, dy, self.cfg)
            self._cache[key] = op
        return op
