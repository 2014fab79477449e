"""Scenarios: a complete run description, its JSON config form, and the
run/sweep pipeline that writes trace, events, and summary files.

A run directory contains:

    trace.csv            header ``t,<channels>``, 9 significant digits
    events.json          upward-crossing event trains per voltage channel
    summary.json         metrics recomputable from the two files above
    config.resolved.json the normalized scenario configuration

Every summary metric is recomputed from the *written* files (the trace is
read back before events and statistics are extracted), so offline
recomputation reproduces summary.json byte for byte.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .controller import ControllerAttachment, ControllerParams, ReferencePulse
from .events import (
    InsufficientEventsError,
    detect_events,
    estimate_period,
    phase_difference,
    winner_sequence,
)
from .integrator import SimConfig, Trace, simulate
from .network import ConstantBias, NetworkSpec, RhythmicPulses


class ConfigError(ValueError):
    """A scenario configuration failed validation."""


@dataclass(frozen=True)
class EventSettings:
    """Event threshold (model voltage units), count of leading events to
    discard before period statistics, and the winner-burst collapse window."""

    threshold: float = -40.0
    discard: int = 5
    collapse_window: float = 5.0

    def __post_init__(self) -> None:
        if self.discard < 0:
            raise ConfigError(f"events.discard must be >= 0, got {self.discard}")
        if self.collapse_window < 0:
            raise ConfigError(f"events.collapse_window must be >= 0, got {self.collapse_window}")


@dataclass(frozen=True)
class Scenario:
    """Named, fully-specified run: network, sim config, optional controller,
    event settings, and a global bias added to every neuron at build time."""

    name: str
    network: NetworkSpec
    sim: SimConfig
    controller: Optional[ControllerAttachment] = None
    events: EventSettings = field(default_factory=EventSettings)
    global_bias: float = 0.0

    def build_network(self) -> NetworkSpec:
        """Network actually simulated: declared inputs plus the global bias."""
        if self.global_bias == 0.0:
            return self.network
        inputs = tuple(
            per + (ConstantBias(self.global_bias),) for per in self.network.inputs
        )
        return replace(self.network, inputs=inputs)

    # -- config form ---------------------------------------------------------

    def to_config(self) -> dict:
        cfg: dict = {
            "name": self.name,
            "network": self.network.to_dict(),
            "sim": {
                "duration": self.sim.duration,
                "dt": self.sim.dt,
                "seed": self.sim.seed,
                "record_stride": self.sim.record_stride,
            },
            "events": {
                "threshold": self.events.threshold,
                "discard": self.events.discard,
                "collapse_window": self.events.collapse_window,
            },
            "global_bias": self.global_bias,
            "controller": None,
        }
        if self.controller is not None:
            c = self.controller
            cfg["controller"] = {
                "tau_c": c.params.tau_c,
                "gain": c.params.gain,
                "threshold": c.params.threshold,
                "monitor": c.monitor + 1,
                "reference": {
                    "period": c.reference.period,
                    "width": c.reference.width,
                    "low": c.reference.low,
                    "high": c.reference.high,
                    "onset": c.reference.onset,
                },
            }
        return cfg

    @classmethod
    def from_config(cls, cfg: dict) -> "Scenario":
        try:
            name = cfg.get("name", "unnamed")
            network = NetworkSpec.from_dict(cfg["network"])
            sim = SimConfig(
                duration=float(cfg["sim"]["duration"]),
                dt=float(cfg["sim"].get("dt", 0.01)),
                seed=int(cfg["sim"].get("seed", 1)),
                record_stride=int(cfg["sim"].get("record_stride", 1)),
            )
            ev = cfg.get("events", {})
            events = EventSettings(
                threshold=float(ev.get("threshold", -40.0)),
                discard=int(ev.get("discard", 5)),
                collapse_window=float(ev.get("collapse_window", 5.0)),
            )
            controller = None
            if cfg.get("controller") is not None:
                c = cfg["controller"]
                monitor = int(c.get("monitor", 1)) - 1
                if not (0 <= monitor < network.n_neurons):
                    raise ConfigError(
                        f"controller.monitor must name a neuron between 1 and {network.n_neurons}"
                    )
                r = c["reference"]
                controller = ControllerAttachment(
                    params=ControllerParams(
                        tau_c=float(c.get("tau_c", 250.0)),
                        gain=float(c.get("gain", 2.0 / 250.0)),
                        threshold=float(c.get("threshold", -40.0)),
                    ),
                    reference=ReferencePulse(
                        period=float(r["period"]),
                        width=float(r.get("width", 2.0)),
                        low=float(r.get("low", -65.0)),
                        high=float(r.get("high", 0.0)),
                        onset=float(r.get("onset", 0.0)),
                    ),
                    monitor=monitor,
                )
            return cls(
                name=str(name),
                network=network,
                sim=sim,
                controller=controller,
                events=events,
                global_bias=float(cfg.get("global_bias", 0.0)),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid scenario config: {exc}") from exc


# ---------------------------------------------------------------------------
# Overrides ("--set path=value")
# ---------------------------------------------------------------------------

def parse_override(text: str) -> tuple:
    """Split 'dotted.path=value' into (path, parsed value). Values parse as
    JSON literals, falling back to the raw string."""
    if "=" not in text:
        raise ConfigError(f"override must look like path=value, got {text!r}")
    path, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return path.strip(), value


def apply_override(cfg: dict, path: str, value) -> None:
    """Set an existing key addressed by a dotted path ('sim.duration',
    'network.synapses.3.g_syn'); list positions are 1-based like the config."""
    parts = path.split(".")
    node = cfg
    walked = []
    for part in parts[:-1]:
        walked.append(part)
        if isinstance(node, list):
            try:
                node = node[int(part) - 1]
            except (ValueError, IndexError) as exc:
                raise ConfigError(f"no list entry {part!r} at {'.'.join(walked)}") from exc
        elif isinstance(node, dict) and part in node:
            node = node[part]
        else:
            raise ConfigError(f"unknown config path {'.'.join(walked)!r}")
    leaf = parts[-1]
    if isinstance(node, list):
        try:
            node[int(leaf) - 1] = value
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"no list entry {leaf!r} at {path}") from exc
    elif isinstance(node, dict) and leaf in node:
        node[leaf] = value
    else:
        raise ConfigError(f"unknown config path {path!r}")


# ---------------------------------------------------------------------------
# File output
# ---------------------------------------------------------------------------

def _format_value(x: float) -> str:
    return format(float(x), ".9g")


def trace_channel_names(scenario: Scenario, trace: Trace, record_all: bool) -> list:
    """Channels written to trace.csv: voltages always, controller/reference
    channels when present, everything when record_all."""
    if record_all:
        return list(trace.channels.keys())
    names = [f"v{i}" for i in range(1, scenario.network.n_neurons + 1)]
    names += [n for n in ("ctrl_e", "ctrl_iapply", "uref") if n in trace.channels]
    return names


def write_trace_csv(path: Path, trace: Trace, names: list) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + names)
        columns = [trace.times] + [trace.channels[n] for n in names]
        for row in zip(*columns):
            writer.writerow([_format_value(x) for x in row])


def read_trace_csv(path: Path) -> tuple:
    """Read a trace.csv back as (times, {channel: column})."""
    with open(path, newline="") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if header[0] != "t" or data.shape[1] != len(header):
        raise ConfigError(f"{path} is not a trace file (header {header[:3]}...)")
    return data[:, 0], {name: data[:, k] for k, name in enumerate(header[1:], start=1)}


def _dump_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Summary
# ---------------------------------------------------------------------------

def _detect_all(scenario: Scenario, times, channels) -> list:
    trains = []
    for i in range(1, scenario.network.n_neurons + 1):
        name = f"v{i}"
        if name in channels:
            trains.append(detect_events(times, channels[name], scenario.events.threshold, name))
    if "uref" in channels:
        trains.append(detect_events(times, channels["uref"], scenario.events.threshold, "uref"))
    return trains


def _monitor_channel(scenario: Scenario) -> str:
    if scenario.controller is not None:
        return f"v{scenario.controller.monitor + 1}"
    for i, per in enumerate(scenario.network.inputs, start=1):
        if any(isinstance(sig, RhythmicPulses) for sig in per):
            return f"v{i}"
    return "v1"


def build_summary(scenario: Scenario, times, channels, trains: list) -> dict:
    """Assemble the summary dict from data as read back from the run files."""
    by_name = {t.channel: t for t in trains}
    voltage_trains = [t for t in trains if t.channel != "uref"]
    per_channel = {}
    for train in voltage_trains:
        entry: dict = {"event_count": len(train)}
        try:
            mean, std = estimate_period(train, discard=scenario.events.discard)
            entry["period_mean"] = mean
            entry["period_std"] = std
            entry["frequency"] = 1.0 / mean
        except InsufficientEventsError:
            entry["period_mean"] = entry["period_std"] = entry["frequency"] = None
        per_channel[train.channel] = entry

    seq = winner_sequence(voltage_trains, collapse_window=scenario.events.collapse_window)

    reference = None
    offsets = None
    if "uref" in by_name:
        ref_train = by_name["uref"]
        reference = {"event_count": len(ref_train)}
        try:
            mean, std = estimate_period(ref_train, discard=0)
            reference["period_mean"] = mean
            reference["period_std"] = std
        except InsufficientEventsError:
            reference["period_mean"] = reference["period_std"] = None
        monitored = by_name.get(_monitor_channel(scenario))
        if monitored is not None and len(ref_train) >= 2 and len(monitored) >= 2:
            offsets = [float(x) for x in phase_difference(ref_train, monitored)]

    ctrl = None
    if "ctrl_iapply" in channels:
        ctrl = {
            "final_e": float(channels["ctrl_e"][-1]),
            "final_i_apply": float(channels["ctrl_iapply"][-1]),
        }

    return {
        "scenario": scenario.name,
        "seed": scenario.sim.seed,
        "config": scenario.to_config(),
        "sample_count": int(len(times)),
        "time_span": [float(times[0]), float(times[-1])],
        "channels": per_channel,
        "winner_sequence": [[float(t), int(i)] for t, i in seq],
        "reference": reference,
        "phase_offsets": offsets,
        "controller": ctrl,
    }


# ---------------------------------------------------------------------------
# Run / recompute / sweep
# ---------------------------------------------------------------------------

@dataclass
class RunResult:
    run_dir: Path
    summary: dict
    trace: Trace
    elapsed: float = 0.0


def run_scenario(scenario: Scenario, out_root, record_all: bool = False) -> RunResult:
    """Simulate, then write trace.csv, events.json, summary.json, and
    config.resolved.json under ``<out_root>/<name>-seed<seed>/``."""
    started = time.perf_counter()
    run_dir = Path(out_root) / f"{scenario.name}-seed{scenario.sim.seed}"
    run_dir.mkdir(parents=True, exist_ok=True)

    trace = simulate(scenario.build_network(), scenario.sim, scenario.controller)
    names = trace_channel_names(scenario, trace, record_all)
    write_trace_csv(run_dir / "trace.csv", trace, names)
    _dump_json(run_dir / "config.resolved.json", scenario.to_config())

    times, channels = read_trace_csv(run_dir / "trace.csv")
    trains = _detect_all(scenario, times, channels)
    _dump_json(
        run_dir / "events.json",
        {"threshold": scenario.events.threshold, "trains": [t.to_dict() for t in trains]},
    )
    summary = build_summary(scenario, times, channels, trains)
    _dump_json(run_dir / "summary.json", summary)
    return RunResult(
        run_dir=run_dir,
        summary=summary,
        trace=trace,
        elapsed=time.perf_counter() - started,
    )


def recompute_summary(run_dir) -> dict:
    """Rebuild the summary purely from the files in a run directory."""
    run_dir = Path(run_dir)
    with open(run_dir / "config.resolved.json") as fh:
        scenario = Scenario.from_config(json.load(fh))
    times, channels = read_trace_csv(run_dir / "trace.csv")
    trains = _detect_all(scenario, times, channels)
    return build_summary(scenario, times, channels, trains)


def sweep(scenario: Scenario, param_path: str, values: list, out_root) -> list:
    """Run the scenario once per value of the dotted config path; returns
    rows (value, period_mean, period_std, frequency, status) for the
    monitored channel and writes them to ``<name>-sweep.csv``."""
    out_root = Path(out_root)
    rows = []
    monitor = _monitor_channel(scenario)
    for value in values:
        cfg = scenario.to_config()
        apply_override(cfg, param_path, value)
        try:
            label = f"{value:g}" if isinstance(value, (int, float)) else str(value)
            sub = Scenario.from_config(cfg)
            sub = replace(sub, name=f"{scenario.name}-{_slug(param_path)}-{label}")
            result = run_scenario(sub, out_root)
            entry = result.summary["channels"].get(monitor, {})
            rows.append(
                (value, entry.get("period_mean"), entry.get("period_std"), entry.get("frequency"), "ok")
            )
        except Exception as exc:  # noqa: BLE001 - per-run failures must not kill the sweep
            rows.append((value, None, None, None, f"error: {exc}"))
    table = out_root / f"{scenario.name}-sweep.csv"
    out_root.mkdir(parents=True, exist_ok=True)
    with open(table, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "period_mean", "period_std", "frequency", "status"])
        for value, pm, ps, fq, status in rows:
            writer.writerow(
                [
                    _format_value(value),
                    "" if pm is None else _format_value(pm),
                    "" if ps is None else _format_value(ps),
                    "" if fq is None else _format_value(fq),
                    status,
                ]
            )
    return rows


def _slug(path: str) -> str:
    return path.replace(".", "_")
