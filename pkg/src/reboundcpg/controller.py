"""Adaptive frequency controller and the rhythmic entrainment input.

The controller compares two event streams, the reference waveform and one
monitored membrane voltage, both reduced to unit impulses at upward
threshold crossings. The impulse difference drives a first-order filter
(exactly discretized, so each impulse bumps the rate error e by 1/tau_c
and e decays by exp(-dt/tau_c) between samples) whose output is integrated
into a bias current:

    e      <- e * exp(-dt/tau_c) + (ref events - voltage events) / tau_c
    i_apply <- i_apply + gain * e * dt

A faster reference than the rhythm makes e, and hence i_apply, grow until
the rhythm's frequency catches up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class ControllerParams:
    """Filter time constant (ms), integrator gain (1/ms), and the upward
    crossing threshold used for event detection on both channels."""

    tau_c: float = 250.0
    gain: float = 2.0 / 250.0
    threshold: float = -40.0

    def __post_init__(self) -> None:
        if self.tau_c <= 0:
            raise ValueError(f"tau_c must be positive, got {self.tau_c}")
        if self.gain <= 0:
            raise ValueError(f"gain must be positive, got {self.gain}")


@dataclass(frozen=True)
class ReferencePulse:
    """Rectangular reference waveform: low -> high for `width` every `period`."""

    period: float
    width: float = 2.0
    low: float = -65.0
    high: float = 0.0
    onset: float = 0.0

    def __post_init__(self) -> None:
        if self.width <= 0 or not self.width < self.period:
            raise ValueError(
                f"pulse width must be in (0, period), got width={self.width} period={self.period}"
            )
        if self.onset < 0:
            raise ValueError(f"onset must be >= 0, got {self.onset}")

    def value(self, t: float) -> float:
        if t < self.onset:
            return self.low
        return self.high if (t - self.onset) % self.period < self.width else self.low


@dataclass
class ControllerState:
    """Filtered event-rate error, accumulated bias current, and the previous
    samples of both monitored channels (None before the first sample)."""

    e: float = 0.0
    i_apply: float = 0.0
    prev_ref: Optional[float] = None
    prev_v: Optional[float] = None


@dataclass(frozen=True)
class ControllerAttachment:
    """Wires a controller into a run: parameters, the reference waveform,
    and the 0-based index of the monitored neuron."""

    params: ControllerParams
    reference: ReferencePulse
    monitor: int = 0


def controller_step(
    state: ControllerState,
    u_r: float,
    u_v: float,
    dt: float,
    params: ControllerParams,
) -> ControllerState:
    """Advance the controller by one sample of both channels.

    Counts upward threshold crossings since the previous sample, decays the
    rate error exactly over dt, applies the impulse bumps, and integrates
    the bias current with the post-update error.
    """
    n_ev = 0
    if state.prev_ref is not None and state.prev_ref < params.threshold <= u_r:
        n_ev += 1
    if state.prev_v is not None and state.prev_v < params.threshold <= u_v:
        n_ev -= 1
    e = state.e * math.exp(-dt / params.tau_c) + n_ev / params.tau_c
    return ControllerState(
        e=e,
        i_apply=state.i_apply + params.gain * e * dt,
        prev_ref=u_r,
        prev_v=u_v,
    )


def entrainment_input(u_r: float, g_syn: float = 2.0, v_th: float = -45.0, alpha: float = 1.5) -> float:
    """Current delivered to the entrained neuron for a reference sample u_r:
    g_syn / (1 + exp(-alpha (u_r - v_th)))."""
    z = alpha * (u_r - v_th)
    if z >= 0:
        return g_syn / (1.0 + math.exp(-z))
    w = math.exp(z)
    return g_syn * w / (1.0 + w)
