"""Jitted inner loop: coupled right-hand side, RK4 step, and the run loop.

Everything here works on flat float64 arrays prepared by
:func:`reboundcpg.integrator.simulate`. The readable reference
implementations live in :mod:`reboundcpg.network` and
:mod:`reboundcpg.controller`; tests hold the two paths to agreement.
"""

import math

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_DIVERGED = 1

HH_KIND = 0
RS_KIND = 1


@njit(cache=True, inline="always")
def _sigmoid(z):
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    w = math.exp(z)
    return w / (1.0 + w)


@njit(cache=True, inline="always")
def _pulse_active(t, onset, width, period):
    if t < onset:
        return False
    return (t - onset) % period < width


@njit(cache=True)
def _rhs(y, dy, i_ext, i_tot, kinds, offsets, nrn_par, syn_pre_slot, syn_post, syn_par, syn_slot0):
    n = kinds.shape[0]
    for i in range(n):
        i_tot[i] = i_ext[i]
    for k in range(syn_post.shape[0]):
        vf = y[syn_slot0 + k]
        dy[syn_slot0 + k] = (y[syn_pre_slot[k]] - vf) / syn_par[k, 1]
        i_tot[syn_post[k]] += syn_par[k, 0] * _sigmoid(syn_par[k, 3] * (vf - syn_par[k, 2]))
    for i in range(n):
        o = offsets[i]
        if kinds[i] == HH_KIND:
            v = y[o]
            mg = y[o + 1]
            hg = y[o + 2]
            ng = y[o + 3]
            x = v + 40.0
            if abs(x) < 1e-7:
                am = 1.0
            else:
                am = 0.1 * x / -math.expm1(-x / 10.0)
            bm = 4.0 * math.exp(-(v + 65.0) / 18.0)
            ah = 0.07 * math.exp(-(v + 65.0) / 20.0)
            bh = 1.0 / (1.0 + math.exp(-(v + 35.0) / 10.0))
            x = v + 55.0
            if abs(x) < 1e-7:
                an = 0.1
            else:
                an = 0.01 * x / -math.expm1(-x / 10.0)
            bn = 0.125 * math.exp(-(v + 65.0) / 80.0)
            i_na = nrn_par[i, 1] * mg**3 * hg * (v - nrn_par[i, 4])
            i_k = nrn_par[i, 2] * ng**4 * (v - nrn_par[i, 5])
            i_l = nrn_par[i, 3] * (v - nrn_par[i, 6])
            dy[o] = (-i_na - i_k - i_l + i_tot[i]) / nrn_par[i, 0]
            dy[o + 1] = am * (1.0 - mg) - bm * mg
            dy[o + 2] = ah * (1.0 - hg) - bh * hg
            dy[o + 3] = an * (1.0 - ng) - bn * ng
        else:
            v = y[o]
            v1 = y[o + 1]
            v2 = y[o + 2]
            dy[o] = (
                -0.5 * v
                + 2.0 * math.tanh(v - 1.0)
                - 2.0 * math.tanh(v1 - 1.0)
                - math.tanh(v1 + 2.0)
                + i_tot[i]
            )
            dy[o + 1] = (v - v1) / 30.0
            dy[o + 2] = (v - v2) / 60.0


@njit(cache=True)
def _rk4_step(y, dt, i_ext, k1, k2, k3, k4, ytmp, i_tot,
              kinds, offsets, nrn_par, syn_pre_slot, syn_post, syn_par, syn_slot0):
    s = y.shape[0]
    _rhs(y, k1, i_ext, i_tot, kinds, offsets, nrn_par, syn_pre_slot, syn_post, syn_par, syn_slot0)
    for j in range(s):
        ytmp[j] = y[j] + 0.5 * dt * k1[j]
    _rhs(ytmp, k2, i_ext, i_tot, kinds, offsets, nrn_par, syn_pre_slot, syn_post, syn_par, syn_slot0)
    for j in range(s):
        ytmp[j] = y[j] + 0.5 * dt * k2[j]
    _rhs(ytmp, k3, i_ext, i_tot, kinds, offsets, nrn_par, syn_pre_slot, syn_post, syn_par, syn_slot0)
    for j in range(s):
        ytmp[j] = y[j] + dt * k3[j]
    _rhs(ytmp, k4, i_ext, i_tot, kinds, offsets, nrn_par, syn_pre_slot, syn_post, syn_par, syn_slot0)
    for j in range(s):
        y[j] = y[j] + (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])


@njit(cache=True)
def run_network(
    y0, dt, n_steps, record_stride,
    kinds, offsets, nrn_par,
    syn_pre_slot, syn_post, syn_par, syn_slot0,
    gate_slots,
    bias, pulses, rhythmic, noise, ctrl_mask,
    has_ctrl, tau_c, g_c, detect_thr,
    has_ref, ref_onset, ref_period, ref_width, ref_low, ref_high,
    monitor_slot,
    rec_times, rec_states, rec_iext, rec_ctrl,
):
    """Fixed-step RK4 over the whole run, with per-step frozen inputs.

    Per step: assemble external currents (bias, pulse trains, rhythmic
    drive, pre-scaled noise, controller output), advance with RK4, check
    finiteness, track gate extremes, then update the event-rate controller
    from the step-boundary samples. Returns
    (status, bad_step, bad_slot, gate_min, gate_max, n_recorded).
    """
    s = y0.shape[0]
    n = kinds.shape[0]
    y = y0.copy()
    k1 = np.empty(s)
    k2 = np.empty(s)
    k3 = np.empty(s)
    k4 = np.empty(s)
    ytmp = np.empty(s)
    i_tot = np.empty(n)
    i_ext = np.empty(n)

    e = 0.0
    i_apply = 0.0
    decay = math.exp(-dt / tau_c) if tau_c > 0 else 0.0
    prev_ref = ref_high if _pulse_active(0.0, ref_onset, ref_width, ref_period) else ref_low
    prev_v = y[monitor_slot]

    gate_min = math.inf
    gate_max = -math.inf
    for gi in range(gate_slots.shape[0]):
        gv = y[gate_slots[gi]]
        if gv < gate_min:
            gate_min = gv
        if gv > gate_max:
            gate_max = gv

    rec = 0
    for k in range(n_steps + 1):
        t = k * dt
        for i in range(n):
            i_ext[i] = bias[i] + ctrl_mask[i] * i_apply
        for p in range(pulses.shape[0]):
            if _pulse_active(t, pulses[p, 1], pulses[p, 2], pulses[p, 3]):
                i_ext[int(pulses[p, 0])] += pulses[p, 4]
        for r in range(rhythmic.shape[0]):
            if _pulse_active(t, rhythmic[r, 1], rhythmic[r, 3], rhythmic[r, 2]):
                u = rhythmic[r, 5]
            else:
                u = rhythmic[r, 4]
            i_ext[int(rhythmic[r, 0])] += rhythmic[r, 6] * _sigmoid(rhythmic[r, 8] * (u - rhythmic[r, 7]))
        if noise.shape[0] > 0 and k < n_steps:
            for i in range(n):
                i_ext[i] += noise[k, i]

        if k % record_stride == 0 or k == n_steps:
            rec_times[rec] = t
            for j in range(s):
                rec_states[rec, j] = y[j]
            for i in range(n):
                rec_iext[rec, i] = i_ext[i]
            rec_ctrl[rec, 0] = e
            rec_ctrl[rec, 1] = i_apply
            if has_ref:
                rec_ctrl[rec, 2] = ref_high if _pulse_active(t, ref_onset, ref_width, ref_period) else ref_low
            rec += 1
        if k == n_steps:
            break

        _rk4_step(y, dt, i_ext, k1, k2, k3, k4, ytmp, i_tot,
                  kinds, offsets, nrn_par, syn_pre_slot, syn_post, syn_par, syn_slot0)

        for j in range(s):
            if not math.isfinite(y[j]):
                return STATUS_DIVERGED, k + 1, j, gate_min, gate_max, rec
        for gi in range(gate_slots.shape[0]):
            gv = y[gate_slots[gi]]
            if gv < gate_min:
                gate_min = gv
            if gv > gate_max:
                gate_max = gv

        if has_ctrl:
            t1 = (k + 1) * dt
            ur = ref_high if _pulse_active(t1, ref_onset, ref_width, ref_period) else ref_low
            uv = y[monitor_slot]
            n_ev = 0
            if prev_ref < detect_thr and ur >= detect_thr:
                n_ev += 1
            if prev_v < detect_thr and uv >= detect_thr:
                n_ev -= 1
            e = e * decay + n_ev / tau_c
            i_apply = i_apply + g_c * e * dt
            prev_ref = ur
            prev_v = uv

    return STATUS_OK, 0, 0, gate_min, gate_max, rec
