"""Deterministic simulator for rebound winner-takes-all central pattern
generators: conductance-based rebound neurons coupled by filtered sigmoid
synapses into half-center and ring oscillators, with event detection,
entrainment, and an adaptive frequency controller."""

from .controller import (
    ControllerAttachment,
    ControllerParams,
    ControllerState,
    ReferencePulse,
    controller_step,
    entrainment_input,
)
from .events import (
    EmptyOverlapError,
    EventTrain,
    InsufficientEventsError,
    crossing_times,
    detect_events,
    estimate_period,
    phase_difference,
    unwrap_offsets,
    winner_sequence,
)
from .integrator import SimConfig, SimulationDiverged, Trace, rk4_step, simulate, step_rk4
from .network import (
    ConstantBias,
    ControllerDriven,
    GaussianNoise,
    NetworkSpec,
    NeuronSpec,
    PulseTrain,
    RhythmicPulses,
    Synapse,
    build_hco,
    build_ring,
    external_input,
    synaptic_input,
    system_rhs,
    total_input,
)
from .neurons import (
    HHParams,
    HHState,
    RSState,
    hh_derivatives,
    hh_rate_constants,
    hh_resting_state,
    hh_steady_state,
    rs_derivatives,
    rs_resting_state,
)
from .presets import PRESETS, load_preset
from .scenario import (
    ConfigError,
    EventSettings,
    RunResult,
    Scenario,
    recompute_summary,
    run_scenario,
    sweep,
)
from .synapses import SynapseParams, SynapseState, synapse_current, synapse_filter_derivative

__version__ = "0.1.0"
