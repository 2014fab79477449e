"""Event extraction and rhythm metrics over recorded traces.

An event is an upward threshold crossing of a sampled channel; its time is
linearly interpolated between the bracketing samples. Downstream metrics
(winner order, period statistics, phase offsets) operate purely on event
trains and are freely recomputable from exported files.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InsufficientEventsError(ValueError):
    """A metric was asked for on a train with too few events."""


class EmptyOverlapError(ValueError):
    """Reference and observed trains share no time span."""


@dataclass(frozen=True)
class EventTrain:
    """Channel id plus strictly increasing event times."""

    channel: str
    times: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", times)
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise ValueError(f"event times for {self.channel!r} must be strictly increasing")

    def __len__(self) -> int:
        return int(self.times.size)

    def to_dict(self) -> dict:
        return {"channel": self.channel, "times": [float(t) for t in self.times]}

    @classmethod
    def from_dict(cls, d: dict) -> "EventTrain":
        return cls(channel=d["channel"], times=np.asarray(d["times"], dtype=float))


def crossing_times(times, values, threshold: float) -> np.ndarray:
    """Times where the sampled signal crosses the threshold upward.

    Sample k starts an event iff values[k-1] < threshold <= values[k]; the
    event instant is the linear interpolation between the two samples.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.size != v.size:
        raise ValueError("times and values must have equal length")
    if t.size < 2:
        return np.empty(0)
    prev, cur = v[:-1], v[1:]
    idx = np.flatnonzero((prev < threshold) & (cur >= threshold))
    frac = (threshold - prev[idx]) / (cur[idx] - prev[idx])
    return t[idx] + frac * (t[idx + 1] - t[idx])


def detect_events(times, values, threshold: float, channel: str = "") -> EventTrain:
    """Extract the upward-crossing event train of one channel."""
    return EventTrain(channel=channel, times=crossing_times(times, values, threshold))


def winner_sequence(trains: list, collapse_window: float = 5.0) -> list:
    """Merge per-neuron event trains into an ordered (time, neuron id) list.

    Ids are 1-based positions in `trains`. Consecutive events from the same
    neuron closer than `collapse_window` are collapsed to the first: they
    are one burst, not repeated wins.
    """
    merged = []
    for idx, train in enumerate(trains, start=1):
        merged += [(float(t), idx) for t in train.times]
    merged.sort(key=lambda p: (p[0], p[1]))
    out: list = []
    for t, idx in merged:
        if out and out[-1][1] == idx and t - out[-1][0] < collapse_window:
            continue
        out.append((t, idx))
    return out


def estimate_period(train: EventTrain, discard: int = 0) -> tuple:
    """Mean and standard deviation of inter-event intervals after dropping
    the first `discard` events (the transient)."""
    if len(train) < discard + 3:
        raise InsufficientEventsError(
            f"need at least {discard + 3} events to estimate a period "
            f"(discard={discard}), got {len(train)} on {train.channel!r}"
        )
    intervals = np.diff(train.times[discard:])
    return float(np.mean(intervals)), float(np.std(intervals))


def phase_difference(reference: EventTrain, observed: EventTrain) -> np.ndarray:
    """Per-reference-event offset to the nearest observed event, as a
    fraction of the local reference period, wrapped into [-0.5, 0.5)."""
    r = reference.times
    o = observed.times
    if r.size < 2 or o.size < 2:
        raise InsufficientEventsError("phase_difference needs >= 2 events on both trains")
    if max(r[0], o[0]) > min(r[-1], o[-1]):
        raise EmptyOverlapError("reference and observed trains do not overlap in time")
    local_period = np.empty_like(r)
    local_period[:-1] = np.diff(r)
    local_period[-1] = r[-1] - r[-2]
    pos = np.searchsorted(o, r)
    left = np.clip(pos - 1, 0, o.size - 1)
    right = np.clip(pos, 0, o.size - 1)
    d_left = o[left] - r
    d_right = o[right] - r
    delta = np.where(np.abs(d_left) <= np.abs(d_right), d_left, d_right)
    return (delta / local_period + 0.5) % 1.0 - 0.5


def unwrap_offsets(offsets) -> np.ndarray:
    """Cumulative phase offsets with jumps across the +-0.5 seam removed
    (unit period). The spread of the result measures net phase drift."""
    offsets = np.asarray(offsets, dtype=float)
    if offsets.size == 0:
        return offsets.copy()
    steps = np.diff(offsets)
    steps = (steps + 0.5) % 1.0 - 0.5
    out = np.empty_like(offsets)
    out[0] = offsets[0]
    out[1:] = offsets[0] + np.cumsum(steps)
    return out
