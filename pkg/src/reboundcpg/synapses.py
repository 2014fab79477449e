"""First-order-filtered sigmoid synapse.

A directed connection filters the presynaptic membrane voltage with time
constant tau and squashes the filtered value through a logistic sigmoid
centered on a threshold. The resulting current is bounded by the signed
synaptic strength g_syn: negative g_syn inhibits, positive excites.
"""

from __future__ import annotations

from dataclasses import dataclass

from scipy.special import expit


@dataclass(frozen=True)
class SynapseParams:
    """Strength (signed, current units of the target model), filter time
    constant, sigmoid threshold, and sigmoid steepness."""

    g_syn: float
    tau: float = 1.0
    v_th: float = -65.0
    alpha: float = 1.5

    def __post_init__(self) -> None:
        if self.tau <= 0:
            raise ValueError(f"synapse tau must be positive, got {self.tau}")
        if self.alpha <= 0:
            raise ValueError(f"sigmoid steepness must be positive, got {self.alpha}")

    @property
    def is_inhibitory(self) -> bool:
        return self.g_syn < 0


@dataclass
class SynapseState:
    """Filtered presynaptic voltage."""

    v_f: float


def synapse_filter_derivative(v_pre: float, state: SynapseState, params: SynapseParams) -> float:
    """dv_f/dt of the presynaptic filter: (v_pre - v_f) / tau."""
    return (v_pre - state.v_f) / params.tau


def synapse_current(state: SynapseState, params: SynapseParams) -> float:
    """Synaptic current g_syn / (1 + exp(-alpha (v_f - v_th))).

    Magnitude is bounded by |g_syn| and the sign equals the sign of g_syn.
    """
    return float(params.g_syn * expit(params.alpha * (state.v_f - params.v_th)))
