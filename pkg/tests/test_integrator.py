import math

import numpy as np
import pytest

from reboundcpg import (
    ConstantBias,
    GaussianNoise,
    NetworkSpec,
    NeuronSpec,
    SimConfig,
    SimulationDiverged,
    Synapse,
    SynapseParams,
    build_hco,
    external_input,
    rk4_step,
    simulate,
    step_rk4,
)
from reboundcpg.integrator import Trace

INH = SynapseParams(-10.0, 1.0, -65.0, 1.5)


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(duration=1.0, dt=0.0)
    with pytest.raises(ValueError):
        SimConfig(duration=0.001, dt=0.01)
    with pytest.raises(ValueError):
        SimConfig(duration=1.0, dt=0.01, record_stride=0)
    assert SimConfig(duration=1.0, dt=0.01).n_steps == 100


def test_trace_invariants():
    with pytest.raises(ValueError):
        Trace(times=np.array([0.0, 0.0, 1.0]), channels={})
    with pytest.raises(ValueError):
        Trace(times=np.array([0.0, 1.0]), channels={"v1": np.zeros(3)})


# ---------------------------------------------------------------------------
# Generic RK4
# ---------------------------------------------------------------------------

def _integrate_decay(dt, t_end=1.0):
    y = np.array([1.0])
    f = lambda _t, yy: -yy
    steps = int(round(t_end / dt))
    for k in range(steps):
        y = rk4_step(f, k * dt, y, dt)
    return float(y[0])


def test_rk4_fourth_order_on_linear_decay():
    exact = math.exp(-1.0)
    e1 = abs(_integrate_decay(0.1) - exact)
    e2 = abs(_integrate_decay(0.05) - exact)
    assert e1 / e2 == pytest.approx(16.0, rel=1.0)
    assert 8.0 <= e1 / e2 <= 32.0


def test_rk4_accuracy_absolute():
    assert _integrate_decay(0.01) == pytest.approx(math.exp(-1.0), abs=1e-10)


# ---------------------------------------------------------------------------
# Network stepping: fast path vs reference path
# ---------------------------------------------------------------------------

def _mixed_network():
    return NetworkSpec(
        neurons=(
            NeuronSpec("hh", initial=(-70.0, 0.1, 0.7, 0.3)),
            NeuronSpec("rs", initial=(-2.0, -1.0, -0.5)),
        ),
        synapses=(
            Synapse(0, 1, SynapseParams(-2.0, 0.5, -30.0, 2.0)),
            Synapse(1, 0, SynapseParams(1.5, 2.0, -1.0, 1.0)),
        ),
        inputs=((ConstantBias(1.0),), (ConstantBias(-0.5),)),
    )


def test_kernel_matches_reference_step_path():
    spec = _mixed_network()
    dt, steps = 0.01, 50
    tr = simulate(spec, SimConfig(duration=steps * dt, dt=dt, record_stride=1))
    names = spec.state_names()
    y = spec.initial_state()
    for k in range(steps):
        i_ext = external_input(spec, k * dt)
        y = step_rk4(spec, y, k * dt, dt, i_ext)
        got = np.array([tr.channels[n][k + 1] for n in names])
        err = np.abs(got - y) / np.maximum(1.0, np.abs(y))
        assert err.max() < 1e-12


def test_fixed_point_state_stays_put():
    spec = NetworkSpec(neurons=(NeuronSpec("hh"),), init_hold=0.0)
    y0 = spec.initial_state()
    tr = simulate(spec, SimConfig(duration=10.0, dt=0.01, record_stride=100))
    names = spec.state_names()
    y_end = np.array([tr.channels[n][-1] for n in names])
    assert np.allclose(y_end, y0, atol=1e-9)


def test_duration_of_one_step_yields_two_samples():
    spec = NetworkSpec(neurons=(NeuronSpec("hh"),))
    tr = simulate(spec, SimConfig(duration=0.01, dt=0.01))
    assert tr.n_samples == 2
    assert tr.times[0] == 0.0
    assert tr.times[1] == pytest.approx(0.01)


def test_final_sample_always_recorded():
    spec = NetworkSpec(neurons=(NeuronSpec("hh"),))
    tr = simulate(spec, SimConfig(duration=0.25, dt=0.01, record_stride=10))
    assert tr.times[-1] == pytest.approx(0.25)
    assert tr.n_samples == 2 + 2  # samples at 0, 0.1, 0.2 plus the final 0.25


def test_same_seed_identical_traces():
    spec = build_hco(INH, inputs=[(GaussianNoise(0.5),), (GaussianNoise(0.5),)])
    cfg = SimConfig(duration=50.0, dt=0.01, seed=7, record_stride=10)
    a, b = simulate(spec, cfg), simulate(spec, cfg)
    for name in a.channels:
        assert np.array_equal(a.channels[name], b.channels[name])


def test_different_seed_different_noise():
    spec = build_hco(INH, inputs=[(GaussianNoise(0.5),), (GaussianNoise(0.5),)])
    a = simulate(spec, SimConfig(duration=20.0, dt=0.01, seed=1, record_stride=10))
    b = simulate(spec, SimConfig(duration=20.0, dt=0.01, seed=2, record_stride=10))
    assert not np.array_equal(a.channels["v1"], b.channels["v1"])


def test_noise_independent_of_record_stride():
    spec = build_hco(INH, inputs=[(GaussianNoise(0.5),), (GaussianNoise(0.5),)])
    fine = simulate(spec, SimConfig(duration=30.0, dt=0.01, seed=3, record_stride=1))
    coarse = simulate(spec, SimConfig(duration=30.0, dt=0.01, seed=3, record_stride=7))
    idx = np.flatnonzero(np.isin(fine.times, coarse.times))
    assert len(idx) == coarse.n_samples
    for name in fine.channels:
        assert np.array_equal(fine.channels[name][idx], coarse.channels[name])


def test_divergence_reported_with_time_and_component():
    spec = build_hco(INH)
    with pytest.raises(SimulationDiverged) as err:
        simulate(spec, SimConfig(duration=100.0, dt=5.0))
    assert err.value.time > 0
    assert "v" in str(err.value)


def test_gate_excursion_flagged_not_clamped():
    spec = NetworkSpec(neurons=(NeuronSpec("hh", initial=(-65.0, 0.05, 0.6, 1.001)),))
    with pytest.warns(RuntimeWarning, match="gating"):
        tr = simulate(spec, SimConfig(duration=1.0, dt=0.01))
    assert tr.meta["gate_flag"] is True
    assert tr.meta["gate_max"] >= 1.001


def test_gates_stay_bounded_on_healthy_run():
    tr = simulate(build_hco(INH), SimConfig(duration=500.0, dt=0.01, record_stride=10))
    assert tr.meta["gate_flag"] is False
    assert 0.0 <= tr.meta["gate_min"] <= tr.meta["gate_max"] <= 1.0


def test_controller_channels_present_only_when_attached():
    from reboundcpg import ControllerAttachment, ControllerParams, ReferencePulse

    spec = build_hco(INH)
    tr = simulate(spec, SimConfig(duration=5.0, dt=0.01))
    assert "ctrl_e" not in tr.channels and "uref" not in tr.channels
    att = ControllerAttachment(ControllerParams(), ReferencePulse(period=20.0), monitor=0)
    tr = simulate(spec, SimConfig(duration=5.0, dt=0.01), controller=att)
    assert {"ctrl_e", "ctrl_iapply", "uref"} <= set(tr.channels)


def test_step_rk4_detects_non_finite():
    spec = NetworkSpec(neurons=(NeuronSpec("hh"),))
    y = spec.initial_state()
    with pytest.raises(SimulationDiverged):
        step_rk4(spec, y, 0.0, 50.0, np.array([1e9]))
