"""Membrane models for rebound-excitable neurons.

Two interchangeable single-compartment models:

* the classic Hodgkin-Huxley squid-axon neuron (mV / ms / uA/cm^2), whose
  sodium-potassium interplay produces a rebound spike when sustained
  inhibition is released, and
* a reduced three-variable neuron after Ribar & Sepulchre (dimensionless
  units): leak, fast positive tanh feedback, and slower filtered negative
  feedback, rebound-excitable in the same qualitative way.

All functions are pure: they evaluate right-hand-side derivatives and
steady-state quantities from their arguments alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

# Below this distance from a removable singularity the gating-rate
# quotients are replaced by their analytic limit.
SINGULARITY_EPS = 1e-7

# Time constants of the two internal filters of the reduced (RS) neuron,
# in the model's own time unit.
RS_TAU_FAST = 30.0
RS_TAU_SLOW = 60.0


@dataclass(frozen=True)
class HHParams:
    """Hodgkin-Huxley membrane constants.

    Units: capacitance uF/cm^2, conductances mS/cm^2, potentials mV.
    Defaults are the standard squid-axon constants.
    """

    c: float = 1.0
    g_na: float = 120.0
    g_k: float = 36.0
    g_l: float = 0.3
    e_na: float = 50.0
    e_k: float = -77.0
    e_l: float = -54.387

    def __post_init__(self) -> None:
        if self.c <= 0:
            raise ValueError(f"membrane capacitance must be positive, got {self.c}")
        for name in ("g_na", "g_k", "g_l"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass
class HHState:
    """Membrane potential (mV) and the three gating variables m, h, n."""

    v: float
    m: float
    h: float
    n: float

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.m, self.h, self.n], dtype=float)

    @classmethod
    def from_array(cls, a) -> "HHState":
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))


@dataclass
class RSState:
    """Voltage and the two filtered copies of it (time constants 30 and 60)."""

    v: float
    v1: float
    v2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.v1, self.v2], dtype=float)

    @classmethod
    def from_array(cls, a) -> "RSState":
        return cls(float(a[0]), float(a[1]), float(a[2]))


def _vtrap(x, scale):
    """x / (1 - exp(-x/scale)), patched with its limit (= scale) near x = 0."""
    x = np.asarray(x, dtype=float)
    near = np.abs(x) < SINGULARITY_EPS
    safe = np.where(near, 1.0, x)
    out = np.where(near, scale, safe / -np.expm1(-safe / scale))
    return out if out.ndim else float(out)


def hh_rate_constants(v):
    """Opening/closing rates (1/ms) of the m, h, n gates at voltage v (mV).

    Returns (alpha_m, beta_m, alpha_h, beta_h, alpha_n, beta_n). The two
    quotient rates are continuous through their removable singularities at
    v = -40 (alpha_m) and v = -55 (alpha_n). Accepts scalars or arrays.
    """
    v = np.asarray(v, dtype=float)
    alpha_m = 0.1 * _vtrap(v + 40.0, 10.0)
    beta_m = 4.0 * np.exp(-(v + 65.0) / 18.0)
    alpha_h = 0.07 * np.exp(-(v + 65.0) / 20.0)
    beta_h = 1.0 / (1.0 + np.exp(-(v + 35.0) / 10.0))
    alpha_n = 0.01 * _vtrap(v + 55.0, 10.0)
    beta_n = 0.125 * np.exp(-(v + 65.0) / 80.0)
    return alpha_m, beta_m, alpha_h, beta_h, alpha_n, beta_n


def hh_steady_state(v):
    """Steady state x_inf = a/(a+b) and relaxation time tau_x = 1/(a+b) per gate.

    Returns ((m_inf, tau_m), (h_inf, tau_h), (n_inf, tau_n)).
    """
    am, bm, ah, bh, an, bn = hh_rate_constants(v)
    return (
        (am / (am + bm), 1.0 / (am + bm)),
        (ah / (ah + bh), 1.0 / (ah + bh)),
        (an / (an + bn), 1.0 / (an + bn)),
    )


def hh_derivatives(state: HHState, params: HHParams, i_total: float = 0.0) -> HHState:
    """Time derivatives of an HH neuron driven by total input current i_total.

    c dv/dt = -g_na m^3 h (v - e_na) - g_k n^4 (v - e_k) - g_l (v - e_l) + i_total
    dx/dt  = alpha_x(v) (1 - x) - beta_x(v) x        for x in {m, h, n}

    The returned HHState holds (dv/dt, dm/dt, dh/dt, dn/dt).
    """
    v, m, h, n = state.v, state.m, state.h, state.n
    am, bm, ah, bh, an, bn = hh_rate_constants(v)
    i_na = params.g_na * m**3 * h * (v - params.e_na)
    i_k = params.g_k * n**4 * (v - params.e_k)
    i_l = params.g_l * (v - params.e_l)
    dv = (-i_na - i_k - i_l + i_total) / params.c
    dm = am * (1.0 - m) - bm * m
    dh = ah * (1.0 - h) - bh * h
    dn = an * (1.0 - n) - bn * n
    return HHState(float(dv), float(dm), float(dh), float(dn))


def rs_derivatives(state: RSState, u: float = 0.0) -> RSState:
    """Time derivatives of the reduced neuron for external input u.

    dv/dt  = -0.5 v + 2 tanh(v - 1) - 2 tanh(v1 - 1) - tanh(v1 + 2) + u
    dv1/dt = (v - v1) / 30
    dv2/dt = (v - v2) / 60
    """
    v, v1, v2 = state.v, state.v1, state.v2
    dv = (
        -0.5 * v
        + 2.0 * np.tanh(v - 1.0)
        - 2.0 * np.tanh(v1 - 1.0)
        - np.tanh(v1 + 2.0)
        + u
    )
    return RSState(float(dv), (v - v1) / RS_TAU_FAST, (v - v2) / RS_TAU_SLOW)


def hh_resting_state(params: HHParams | None = None, i_ext: float = 0.0) -> HHState:
    """Quiescent fixed point: gates at steady state, zero net membrane current.

    Valid in the subthreshold regime (the bracket [-120, -30] mV must
    contain a sign change of the steady-state current balance).
    """
    p = params if params is not None else HHParams()

    def net_current(v: float) -> float:
        (m, _), (h, _), (n, _) = hh_steady_state(v)
        return float(
            -p.g_na * m**3 * h * (v - p.e_na)
            - p.g_k * n**4 * (v - p.e_k)
            - p.g_l * (v - p.e_l)
            + i_ext
        )

    v0 = brentq(net_current, -120.0, -30.0, xtol=1e-12)
    (m, _), (h, _), (n, _) = hh_steady_state(v0)
    return HHState(float(v0), float(m), float(h), float(n))


def rs_resting_state(u: float = 0.0) -> RSState:
    """Quiescent fixed point of the reduced neuron (all filters equilibrated).

    At equilibrium v = v1 = v2, so the two tanh(.-1) terms cancel and the
    voltage solves -0.5 v - tanh(v + 2) + u = 0 (strictly decreasing in v,
    hence unique).
    """
    v0 = brentq(lambda v: -0.5 * v - np.tanh(v + 2.0) + u, -20.0, 20.0, xtol=1e-14)
    return RSState(float(v0), float(v0), float(v0))
