"""Fixed-step RK4 integration of a network, deterministic and reproducible.

:func:`simulate` drives the jitted loop in :mod:`reboundcpg._kernels`;
:func:`step_rk4` is the readable single-step reference built from
:func:`reboundcpg.network.system_rhs`, used by tests to pin the fast path.

Noise semantics: one standard-normal draw per (step, neuron), generated up
front from the run seed (or a signal's own seed) and held constant within
the step. Draws depend only on (seed, neuron index, step index), never on
the recording stride.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .controller import ControllerAttachment
from .network import (
    ControllerDriven,
    GaussianNoise,
    NetworkSpec,
    PulseTrain,
    RhythmicPulses,
    ConstantBias,
)

# HH gates may leave [0,1] by at most this much before a run is flagged as
# under-resolved (dt too large). Excursions are reported, never clamped.
GATE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class SimConfig:
    """Step size, total duration (same time unit as the model), RNG seed,
    and the recording stride in steps."""

    duration: float
    dt: float = 0.01
    seed: int = 1
    record_stride: int = 1

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.duration < self.dt:
            raise ValueError(
                f"duration must be at least one step, got duration={self.duration} dt={self.dt}"
            )
        if self.record_stride < 1 or int(self.record_stride) != self.record_stride:
            raise ValueError(f"record_stride must be a positive integer, got {self.record_stride}")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.duration / self.dt)))


class SimulationDiverged(RuntimeError):
    """A state component became non-finite during integration."""

    def __init__(self, time: float, slot: int, description: str):
        self.time = time
        self.slot = slot
        super().__init__(f"simulation diverged at t={time:g}: non-finite {description}")


@dataclass
class Trace:
    """Time-indexed record of a run: sample instants, named channels of
    equal length, and run metadata (dt, seed, gate extremes, flags)."""

    times: np.ndarray
    channels: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trace times must be strictly increasing")
        for name, col in self.channels.items():
            if len(col) != len(self.times):
                raise ValueError(f"channel {name!r} length {len(col)} != {len(self.times)} samples")

    def channel(self, name: str) -> np.ndarray:
        return self.channels[name]

    def voltage(self, neuron: int) -> np.ndarray:
        """Voltage channel by 1-based neuron number (matches channel names)."""
        return self.channels[f"v{neuron}"]

    @property
    def n_samples(self) -> int:
        return len(self.times)


def rk4_step(f: Callable, t: float, y: np.ndarray, dt: float) -> np.ndarray:
    """One classical 4th-order Runge-Kutta step of y' = f(t, y)."""
    k1 = f(t, y)
    k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_rk4(
    spec: NetworkSpec,
    state: np.ndarray,
    t: float,
    dt: float,
    i_ext: np.ndarray,
) -> np.ndarray:
    """One RK4 step of the coupled network under frozen external currents.

    Reference path: the jitted loop must agree with iterating this step.
    Raises SimulationDiverged if the result is non-finite.
    """
    from .network import system_rhs

    # overflow to inf is how divergence shows up; it is detected below
    with np.errstate(over="ignore", invalid="ignore"):
        y1 = rk4_step(lambda _t, y: system_rhs(spec, y, i_ext), t, state, dt)
    bad = np.flatnonzero(~np.isfinite(y1))
    if bad.size:
        raise SimulationDiverged(t + dt, int(bad[0]), _describe_slot(spec, int(bad[0])))
    return y1


def _describe_slot(spec: NetworkSpec, slot: int) -> str:
    names = spec.state_names()
    return f"state component {names[slot]!r} (slot {slot})"


def _compile_arrays(spec: NetworkSpec):
    """Flatten a NetworkSpec into the arrays the kernel consumes."""
    n = spec.n_neurons
    offsets = np.array(spec.neuron_offsets(), dtype=np.int64)
    kinds = np.array(
        [_kernels.HH_KIND if nrn.kind == "hh" else _kernels.RS_KIND for nrn in spec.neurons],
        dtype=np.int64,
    )
    nrn_par = np.zeros((n, 7))
    for i, nrn in enumerate(spec.neurons):
        if nrn.kind == "hh":
            p = nrn.params
            nrn_par[i] = (p.c, p.g_na, p.g_k, p.g_l, p.e_na, p.e_k, p.e_l)
    m = spec.n_synapses
    syn_pre_slot = np.array([offsets[s.pre] for s in spec.synapses], dtype=np.int64).reshape(m)
    syn_post = np.array([s.post for s in spec.synapses], dtype=np.int64).reshape(m)
    syn_par = np.zeros((m, 4))
    for k, s in enumerate(spec.synapses):
        syn_par[k] = (s.params.g_syn, s.params.tau, s.params.v_th, s.params.alpha)
    gate_slots = np.array(
        [offsets[i] + g for i in range(n) if spec.neurons[i].kind == "hh" for g in (1, 2, 3)],
        dtype=np.int64,
    )
    return kinds, offsets, nrn_par, syn_pre_slot, syn_post, syn_par, spec.synapse_offset(), gate_slots


def _assemble_inputs(spec: NetworkSpec, config: SimConfig):
    """Split the declared input signals into kernel-ready pieces."""
    n = spec.n_neurons
    bias = np.zeros(n)
    pulses = []
    rhythmic = []
    ctrl_mask = np.zeros(n)
    noise_std: dict = {}
    for i, per in enumerate(spec.inputs):
        for sig in per:
            if isinstance(sig, ConstantBias):
                bias[i] += sig.amplitude
            elif isinstance(sig, PulseTrain):
                pulses.append((i, sig.onset, sig.width, sig.period, sig.amplitude))
            elif isinstance(sig, GaussianNoise):
                key = config.seed if sig.seed is None else sig.seed
                noise_std.setdefault(key, np.zeros(n))
                noise_std[key][i] += np.sqrt(sig.variance)
            elif isinstance(sig, RhythmicPulses):
                rhythmic.append(
                    (i, sig.onset, sig.period, sig.width, sig.low, sig.high, sig.g_syn, sig.v_th, sig.alpha)
                )
            elif isinstance(sig, ControllerDriven):
                ctrl_mask[i] = 1.0
    pulses_arr = np.array(pulses, dtype=float).reshape(len(pulses), 5)
    rhythmic_arr = np.array(rhythmic, dtype=float).reshape(len(rhythmic), 9)
    if noise_std:
        noise = np.zeros((config.n_steps, n))
        for key, std in sorted(noise_std.items()):
            rng = np.random.default_rng(key)
            noise += rng.standard_normal((config.n_steps, n)) * std[None, :]
    else:
        noise = np.zeros((0, n))
    return bias, pulses_arr, rhythmic_arr, noise, ctrl_mask


def _first_rhythmic(spec: NetworkSpec) -> Optional[RhythmicPulses]:
    for per in spec.inputs:
        for sig in per:
            if isinstance(sig, RhythmicPulses):
                return sig
    return None


def simulate(
    spec: NetworkSpec,
    config: SimConfig,
    controller: Optional[ControllerAttachment] = None,
    initial_state: Optional[np.ndarray] = None,
) -> Trace:
    """Run the network for config.duration and return the full Trace.

    Channels: per-neuron state (v{i}, plus m/h/n{i} or x1/x2_{i}), one
    syn{k}_vf per synapse, per-neuron applied external current iext{i},
    and, when a controller or rhythmic reference is present, ctrl_e,
    ctrl_iapply, and the reference waveform uref. The controller, if
    attached, is stepped once per integration step after the state update.
    """
    (kinds, offsets, nrn_par, syn_pre_slot, syn_post, syn_par, syn_slot0, gate_slots) = _compile_arrays(spec)
    bias, pulses, rhythmic, noise, ctrl_mask = _assemble_inputs(spec, config)

    y0 = np.asarray(initial_state, dtype=float) if initial_state is not None else spec.initial_state()
    if y0.shape != (spec.state_size(),):
        raise ValueError(f"initial state must have shape ({spec.state_size()},), got {y0.shape}")

    if controller is not None:
        if not (0 <= controller.monitor < spec.n_neurons):
            raise ValueError(f"controller monitors neuron {controller.monitor}, out of range")
        ref = controller.reference
        has_ctrl, has_ref = True, True
        tau_c, g_c, thr = controller.params.tau_c, controller.params.gain, controller.params.threshold
        monitor_slot = int(offsets[controller.monitor])
    else:
        first = _first_rhythmic(spec)
        has_ctrl = False
        has_ref = first is not None
        ref = first
        tau_c, g_c, thr = 1.0, 1.0, 0.0
        monitor_slot = 0
    if ref is not None:
        ref_onset, ref_period, ref_width = ref.onset, ref.period, ref.width
        ref_low, ref_high = ref.low, ref.high
    else:
        ref_onset = ref_period = ref_width = 1.0
        ref_low = ref_high = 0.0

    n_steps = config.n_steps
    stride = int(config.record_stride)
    n_rec = n_steps // stride + 1 + (0 if n_steps % stride == 0 else 1)
    s = spec.state_size()
    rec_times = np.empty(n_rec)
    rec_states = np.empty((n_rec, s))
    rec_iext = np.empty((n_rec, spec.n_neurons))
    rec_ctrl = np.zeros((n_rec, 3))

    status, bad_step, bad_slot, gate_min, gate_max, rec = _kernels.run_network(
        y0, config.dt, n_steps, stride,
        kinds, offsets, nrn_par,
        syn_pre_slot, syn_post, syn_par, syn_slot0,
        gate_slots,
        bias, pulses, rhythmic, noise, ctrl_mask,
        has_ctrl, tau_c, g_c, thr,
        has_ref, ref_onset, ref_period, ref_width, ref_low, ref_high,
        monitor_slot,
        rec_times, rec_states, rec_iext, rec_ctrl,
    )
    if status == _kernels.STATUS_DIVERGED:
        t_bad = bad_step * config.dt
        raise SimulationDiverged(t_bad, bad_slot, _describe_slot(spec, bad_slot))

    gate_flag = bool(gate_slots.size) and (
        gate_min < -GATE_TOLERANCE or gate_max > 1.0 + GATE_TOLERANCE
    )
    if gate_flag:
        warnings.warn(
            f"HH gating variables left [0,1] (min={gate_min:.3g}, max={gate_max:.3g}); "
            "dt is likely too large for this network",
            RuntimeWarning,
            stacklevel=2,
        )

    channels: dict = {}
    for name, col in zip(spec.state_names(), rec_states[:rec].T):
        channels[name] = np.ascontiguousarray(col)
    for i in range(spec.n_neurons):
        channels[f"iext{i + 1}"] = np.ascontiguousarray(rec_iext[:rec, i])
    if has_ctrl:
        channels["ctrl_e"] = np.ascontiguousarray(rec_ctrl[:rec, 0])
        channels["ctrl_iapply"] = np.ascontiguousarray(rec_ctrl[:rec, 1])
    if has_ref:
        channels["uref"] = np.ascontiguousarray(rec_ctrl[:rec, 2])

    meta = {
        "dt": config.dt,
        "duration": config.duration,
        "seed": config.seed,
        "record_stride": stride,
        "n_steps": n_steps,
        "gate_min": float(gate_min) if gate_slots.size else None,
        "gate_max": float(gate_max) if gate_slots.size else None,
        "gate_flag": gate_flag,
    }
    return Trace(times=rec_times[:rec], channels=channels, meta=meta)
