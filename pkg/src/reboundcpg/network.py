"""Network description, topology builders, and the coupled right-hand side.

A :class:`NetworkSpec` lists neurons (model kind, parameters, optional
explicit initial state), directed synapses, and per-neuron input signals.
Together with a simulation config it fully determines a run.

The flat state vector is laid out deterministically as

    [neuron 0 state | neuron 1 state | ... | synapse filter states]

with 4 slots per HH neuron (v, m, h, n), 3 per RS neuron (v, v1, v2), and
one filtered-voltage slot per synapse, in declaration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Optional, Union

import numpy as np

from .neurons import (
    HHParams,
    HHState,
    RSState,
    hh_derivatives,
    hh_resting_state,
    rs_derivatives,
    rs_resting_state,
)
from .synapses import SynapseParams, SynapseState, synapse_current

STATE_SIZE = {"hh": 4, "rs": 3}

# Deterministic symmetry breaking: neuron i starts at rest + i * this (mV
# for HH, model units for RS). An exactly symmetric start would never pick
# a winner.
DEFAULT_STAGGER = 0.1

# "Released from inhibition" start: the coupled quiescent state of these
# networks is locally stable, so a rhythm must begin with the neurons primed
# the way a sustained inhibitory input leaves them. init_hold=None selects
# these per-model holding currents.
HH_PRIMED_HOLD = -5.0
RS_PRIMED_HOLD = -2.0


# ---------------------------------------------------------------------------
# Input signals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantBias:
    """Constant external current."""

    amplitude: float


@dataclass(frozen=True)
class PulseTrain:
    """Rectangular current pulses: amplitude on [onset + k T, onset + k T + width)."""

    onset: float
    width: float
    period: float
    amplitude: float

    def __post_init__(self) -> None:
        if self.width <= 0:
            raise ValueError(f"pulse width must be positive, got {self.width}")
        if not self.width < self.period:
            raise ValueError(
                f"pulse width must be smaller than the period, got width={self.width} period={self.period}"
            )
        if self.onset < 0:
            raise ValueError(f"pulse onset must be >= 0, got {self.onset}")


@dataclass(frozen=True)
class GaussianNoise:
    """Zero-mean Gaussian current, one draw per integration step, held
    constant within the step. ``seed=None`` draws from the run seed."""

    variance: float
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if self.variance < 0:
            raise ValueError(f"noise variance must be >= 0, got {self.variance}")


@dataclass(frozen=True)
class RhythmicPulses:
    """Rectangular reference waveform routed through a sigmoid synapse.

    The waveform jumps from `low` to `high` for `width` time units every
    `period`; the delivered current is g_syn / (1 + exp(-alpha (u - v_th)))
    evaluated on the waveform value u.
    """

    period: float
    width: float = 2.0
    low: float = -65.0
    high: float = 0.0
    onset: float = 0.0
    g_syn: float = 2.0
    v_th: float = -45.0
    alpha: float = 1.5

    def __post_init__(self) -> None:
        if self.width <= 0 or not self.width < self.period:
            raise ValueError(
                f"pulse width must be in (0, period), got width={self.width} period={self.period}"
            )
        if self.onset < 0:
            raise ValueError(f"onset must be >= 0, got {self.onset}")

    def waveform(self, t: float) -> float:
        return self.high if pulse_active(t, self.onset, self.width, self.period) else self.low

    def current(self, t: float) -> float:
        z = self.alpha * (self.waveform(t) - self.v_th)
        if z >= 0:
            return self.g_syn / (1.0 + math.exp(-z))
        w = math.exp(z)
        return self.g_syn * w / (1.0 + w)


@dataclass(frozen=True)
class ControllerDriven:
    """Marks a neuron as receiving the adaptive controller's bias output."""


InputSignal = Union[ConstantBias, PulseTrain, GaussianNoise, RhythmicPulses, ControllerDriven]

_SIGNAL_KINDS = {
    "constant_bias": ConstantBias,
    "pulse_train": PulseTrain,
    "gaussian_noise": GaussianNoise,
    "rhythmic_pulses": RhythmicPulses,
    "controller_driven": ControllerDriven,
}
_KIND_BY_TYPE = {cls: kind for kind, cls in _SIGNAL_KINDS.items()}


def pulse_active(t: float, onset: float, width: float, period: float) -> bool:
    """True while a rectangular pulse train is high at time t."""
    if t < onset:
        return False
    return (t - onset) % period < width


# ---------------------------------------------------------------------------
# Network spec
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NeuronSpec:
    """One neuron: model kind ("hh" or "rs"), parameters (HH only), and an
    optional explicit initial state overriding the resting-state default."""

    kind: str
    params: Optional[HHParams] = None
    initial: Optional[tuple] = None

    def __post_init__(self) -> None:
        if self.kind not in STATE_SIZE:
            raise ValueError(f"unknown neuron kind {self.kind!r}, expected 'hh' or 'rs'")
        if self.kind == "rs" and self.params is not None:
            raise ValueError("the rs model has a fixed form and takes no parameters")
        if self.kind == "hh" and self.params is None:
            object.__setattr__(self, "params", HHParams())
        if self.initial is not None:
            init = tuple(float(x) for x in self.initial)
            if len(init) != STATE_SIZE[self.kind]:
                raise ValueError(
                    f"initial state for a {self.kind} neuron needs {STATE_SIZE[self.kind]} values, got {len(init)}"
                )
            object.__setattr__(self, "initial", init)

    @property
    def state_size(self) -> int:
        return STATE_SIZE[self.kind]


@dataclass(frozen=True)
class Synapse:
    """Directed connection pre -> post (0-based indices)."""

    pre: int
    post: int
    params: SynapseParams


@dataclass(frozen=True)
class NetworkSpec:
    """Immutable description of a network; fully determines the state layout.

    init_hold sets the holding current whose steady state seeds every neuron
    without an explicit initial state: 0.0 starts at plain rest, any other
    value at the corresponding hyperpolarized rest, and None picks the
    per-model primed default (HH_PRIMED_HOLD / RS_PRIMED_HOLD) so that the
    run opens with a release-from-inhibition rebound race.
    """

    neurons: tuple
    synapses: tuple = ()
    inputs: tuple = ()
    init_stagger: float = DEFAULT_STAGGER
    init_hold: Optional[float] = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "neurons", tuple(self.neurons))
        object.__setattr__(self, "synapses", tuple(self.synapses))
        inputs = tuple(tuple(sig for sig in per_neuron) for per_neuron in self.inputs)
        if not inputs:
            inputs = tuple(() for _ in self.neurons)
        object.__setattr__(self, "inputs", inputs)
        self._validate()

    def _validate(self) -> None:
        n = len(self.neurons)
        if n == 0:
            raise ValueError("a network needs at least one neuron")
        for s in self.synapses:
            if not (0 <= s.pre < n and 0 <= s.post < n):
                raise ValueError(f"synapse {s.pre}->{s.post} references a neuron out of range (n={n})")
            if s.pre == s.post:
                raise ValueError(f"self-synapse on neuron {s.pre} is not allowed")
        if len(self.inputs) != n:
            raise ValueError(
                f"inputs must list one (possibly empty) signal list per neuron: got {len(self.inputs)} for {n} neurons"
            )

    # -- layout ------------------------------------------------------------

    @property
    def n_neurons(self) -> int:
        return len(self.neurons)

    @property
    def n_synapses(self) -> int:
        return len(self.synapses)

    def neuron_offsets(self) -> list[int]:
        offsets, acc = [], 0
        for nrn in self.neurons:
            offsets.append(acc)
            acc += nrn.state_size
        return offsets

    def synapse_offset(self) -> int:
        return sum(nrn.state_size for nrn in self.neurons)

    def state_size(self) -> int:
        return self.synapse_offset() + self.n_synapses

    def voltage_index(self, i: int) -> int:
        return self.neuron_offsets()[i]

    def state_names(self) -> list[str]:
        """Channel name for every state-vector slot, in layout order.

        Neuron numbering in names is 1-based to match figures and traces.
        """
        names: list[str] = []
        for i, nrn in enumerate(self.neurons, start=1):
            if nrn.kind == "hh":
                names += [f"v{i}", f"m{i}", f"h{i}", f"n{i}"]
            else:
                names += [f"v{i}", f"x1_{i}", f"x2_{i}"]
        names += [f"syn{k}_vf" for k in range(1, self.n_synapses + 1)]
        return names

    # -- initial conditions --------------------------------------------------

    def initial_state(self) -> np.ndarray:
        """Flat initial state per init_hold/init_stagger (see class docstring),
        with explicit per-neuron initials taking precedence and synapse
        filters primed with the presynaptic initial voltage."""
        y = np.empty(self.state_size(), dtype=float)
        offsets = self.neuron_offsets()
        for i, nrn in enumerate(self.neurons):
            if nrn.initial is not None:
                vals = np.array(nrn.initial, dtype=float)
            elif nrn.kind == "hh":
                hold = HH_PRIMED_HOLD if self.init_hold is None else self.init_hold
                vals = hh_resting_state(nrn.params, i_ext=hold).as_array()
                vals[0] += self.init_stagger * i
            else:
                hold = RS_PRIMED_HOLD if self.init_hold is None else self.init_hold
                vals = rs_resting_state(u=hold).as_array()
                vals[0] += self.init_stagger * i
            y[offsets[i]: offsets[i] + nrn.state_size] = vals
        base = self.synapse_offset()
        for k, syn in enumerate(self.synapses):
            y[base + k] = y[offsets[syn.pre]]
        return y

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "init_stagger": self.init_stagger,
            "init_hold": self.init_hold,
            "neurons": [
                {
                    "kind": nrn.kind,
                    "params": _params_to_dict(nrn.params),
                    "initial": list(nrn.initial) if nrn.initial is not None else None,
                }
                for nrn in self.neurons
            ],
            "synapses": [
                {
                    "pre": s.pre + 1,
                    "post": s.post + 1,
                    "g_syn": s.params.g_syn,
                    "tau": s.params.tau,
                    "v_th": s.params.v_th,
                    "alpha": s.params.alpha,
                }
                for s in self.synapses
            ],
            "inputs": [[_signal_to_dict(sig) for sig in per] for per in self.inputs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NetworkSpec":
        try:
            neurons = tuple(
                NeuronSpec(
                    kind=nd["kind"],
                    params=_params_from_dict(nd.get("params")) if nd["kind"] == "hh" else None,
                    initial=tuple(nd["initial"]) if nd.get("initial") is not None else None,
                )
                for nd in d["neurons"]
            )
            synapses = tuple(
                Synapse(
                    pre=int(sd["pre"]) - 1,
                    post=int(sd["post"]) - 1,
                    params=SynapseParams(
                        g_syn=float(sd["g_syn"]),
                        tau=float(sd.get("tau", 1.0)),
                        v_th=float(sd.get("v_th", -65.0)),
                        alpha=float(sd.get("alpha", 1.5)),
                    ),
                )
                for sd in d["synapses"]
            )
            inputs = tuple(
                tuple(_signal_from_dict(sig) for sig in per) for per in d.get("inputs", [])
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed network description: {exc}") from exc
        hold = d.get("init_hold", 0.0)
        return cls(
            neurons=neurons,
            synapses=synapses,
            inputs=inputs,
            init_stagger=float(d.get("init_stagger", DEFAULT_STAGGER)),
            init_hold=float(hold) if hold is not None else None,
        )


def _params_to_dict(p: Optional[HHParams]) -> Optional[dict]:
    if p is None:
        return None
    return {f.name: getattr(p, f.name) for f in fields(HHParams)}


def _params_from_dict(d: Optional[dict]) -> HHParams:
    if d is None:
        return HHParams()
    return HHParams(**{k: float(v) for k, v in d.items()})


def _signal_to_dict(sig: InputSignal) -> dict:
    d = {"kind": _KIND_BY_TYPE[type(sig)]}
    for f in fields(sig):
        d[f.name] = getattr(sig, f.name)
    return d


def _signal_from_dict(d: dict) -> InputSignal:
    kind = d.get("kind")
    if kind not in _SIGNAL_KINDS:
        raise ValueError(f"unknown input signal kind {kind!r}")
    args = {k: v for k, v in d.items() if k != "kind"}
    return _SIGNAL_KINDS[kind](**args)


# ---------------------------------------------------------------------------
# Topology builders
# ---------------------------------------------------------------------------

def build_hco(
    inhibitory: SynapseParams,
    kind: str = "hh",
    neuron_params: Optional[HHParams] = None,
    inputs: Optional[list] = None,
    init_hold: Optional[float] = None,
) -> NetworkSpec:
    """Two neurons with reciprocal inhibition (the half-center oscillator).

    Starts primed (init_hold=None) so the alternating rhythm self-initiates.
    """
    if inhibitory.g_syn >= 0:
        raise ValueError(
            f"half-center coupling must be inhibitory (g_syn < 0), got g_syn={inhibitory.g_syn}"
        )
    neurons = tuple(NeuronSpec(kind=kind, params=neuron_params) for _ in range(2))
    synapses = (
        Synapse(0, 1, inhibitory),
        Synapse(1, 0, inhibitory),
    )
    return NetworkSpec(neurons=neurons, synapses=synapses, inputs=inputs or (), init_hold=init_hold)


def build_ring(
    n: int,
    inhibitory: SynapseParams,
    excitatory: SynapseParams,
    kind: str = "hh",
    neuron_params: Optional[HHParams] = None,
    inputs: Optional[list] = None,
    init_hold: Optional[float] = None,
) -> NetworkSpec:
    """All-to-all inhibition plus a directed excitatory cycle i -> i+1.

    Produces n(n-1) inhibitory synapses (declared first, row-major) and n
    excitatory ones. The excitatory gain may be zero (null edges) but not
    negative. Starts primed (init_hold=None) so the sequence self-initiates.
    """
    if n < 2:
        raise ValueError(f"a ring needs at least 2 neurons, got {n}")
    if inhibitory.g_syn >= 0:
        raise ValueError(f"inhibitory gain must be negative, got {inhibitory.g_syn}")
    if excitatory.g_syn < 0:
        raise ValueError(f"excitatory gain must be >= 0, got {excitatory.g_syn}")
    neurons = tuple(NeuronSpec(kind=kind, params=neuron_params) for _ in range(n))
    synapses = [
        Synapse(i, j, inhibitory) for i in range(n) for j in range(n) if i != j
    ]
    synapses += [Synapse(i, (i + 1) % n, excitatory) for i in range(n)]
    return NetworkSpec(neurons=neurons, synapses=tuple(synapses), inputs=inputs or (), init_hold=init_hold)


# ---------------------------------------------------------------------------
# Input assembly and the coupled right-hand side
# ---------------------------------------------------------------------------

def external_input(
    spec: NetworkSpec,
    t: float,
    noise_draws: Optional[np.ndarray] = None,
    i_apply: float = 0.0,
) -> np.ndarray:
    """Per-neuron external current at time t (everything except synapses).

    `noise_draws` are per-neuron standard-normal samples for the current
    step; each GaussianNoise signal contributes sqrt(variance) times the
    neuron's draw. `i_apply` is delivered to ControllerDriven neurons.
    """
    out = np.zeros(spec.n_neurons)
    for i, per in enumerate(spec.inputs):
        for sig in per:
            if isinstance(sig, ConstantBias):
                out[i] += sig.amplitude
            elif isinstance(sig, PulseTrain):
                if pulse_active(t, sig.onset, sig.width, sig.period):
                    out[i] += sig.amplitude
            elif isinstance(sig, GaussianNoise):
                if noise_draws is not None:
                    out[i] += math.sqrt(sig.variance) * noise_draws[i]
            elif isinstance(sig, RhythmicPulses):
                out[i] += sig.current(t)
            elif isinstance(sig, ControllerDriven):
                out[i] += i_apply
    return out


def synaptic_input(spec: NetworkSpec, state: np.ndarray) -> np.ndarray:
    """Per-neuron sum of incoming synaptic currents for a flat state vector."""
    out = np.zeros(spec.n_neurons)
    base = spec.synapse_offset()
    for k, syn in enumerate(spec.synapses):
        out[syn.post] += synapse_current(SynapseState(state[base + k]), syn.params)
    return out


def total_input(
    spec: NetworkSpec,
    state: np.ndarray,
    t: float,
    noise_draws: Optional[np.ndarray] = None,
    i_apply: float = 0.0,
) -> np.ndarray:
    """Per-neuron total current: synaptic input plus external input at t."""
    return synaptic_input(spec, state) + external_input(spec, t, noise_draws, i_apply)


def system_rhs(spec: NetworkSpec, state: np.ndarray, i_ext: np.ndarray) -> np.ndarray:
    """Derivative of the full state vector under frozen external currents.

    Synaptic currents are recomputed from the live state; i_ext holds the
    per-neuron external current for the step.
    """
    dy = np.empty_like(state)
    offsets = spec.neuron_offsets()
    i_tot = synaptic_input(spec, state) + i_ext
    for i, nrn in enumerate(spec.neurons):
        o = offsets[i]
        if nrn.kind == "hh":
            d = hh_derivatives(HHState.from_array(state[o: o + 4]), nrn.params, i_tot[i])
            dy[o: o + 4] = d.as_array()
        else:
            d = rs_derivatives(RSState.from_array(state[o: o + 3]), i_tot[i])
            dy[o: o + 3] = d.as_array()
    base = spec.synapse_offset()
    for k, syn in enumerate(spec.synapses):
        dy[base + k] = (state[offsets[syn.pre]] - state[base + k]) / syn.params.tau
    return dy
