"""Command-line front end.

Verbs:
    run <preset|config.json>      simulate and write a run directory
    sweep <preset|config.json> <param.path> <v1> [v2 ...]
    list-presets
    validate <config.json>

Output root: --out, else $REBOUNDCPG_OUT, else ./runs. Exit codes: 0 ok,
2 configuration problem, 3 divergent integration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .integrator import SimulationDiverged
from .presets import PRESETS, load_preset
from .scenario import ConfigError, Scenario, apply_override, parse_override, run_scenario, sweep

EXIT_CONFIG = 2
EXIT_DIVERGED = 3


def _load_scenario(source: str, overrides: list, seed) -> Scenario:
    if source in PRESETS:
        cfg = load_preset(source).to_config()
    else:
        path = Path(source)
        if not path.exists():
            raise ConfigError(
                f"{source!r} is neither a preset ({', '.join(sorted(PRESETS))}) nor a config file"
            )
        try:
            cfg = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}: not valid JSON: {exc}") from exc
    if seed is not None:
        apply_override(cfg, "sim.seed", int(seed))
    for text in overrides:
        key, value = parse_override(text)
        apply_override(cfg, key, value)
    return Scenario.from_config(cfg)


def _out_root(args) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get("REBOUNDCPG_OUT", "runs"))


def cmd_run(args) -> int:
    scenario = _load_scenario(args.scenario, args.set or [], args.seed)
    result = run_scenario(scenario, _out_root(args), record_all=args.record_all)
    chans = result.summary["channels"]
    print(f"run directory: {result.run_dir}")
    for name in sorted(chans, key=lambda c: int(c[1:])):
        entry = chans[name]
        period = entry["period_mean"]
        extra = f"  period {period:.4g} +- {entry['period_std']:.2g}" if period else ""
        print(f"  {name}: {entry['event_count']} events{extra}")
    if result.summary["controller"]:
        print(f"  final i_apply: {result.summary['controller']['final_i_apply']:.6g}")
    return 0


def cmd_sweep(args) -> int:
    scenario = _load_scenario(args.scenario, args.set or [], args.seed)
    values = [json.loads(v) for v in args.values]
    rows = sweep(scenario, args.param, values, _out_root(args))
    print(f"{'value':>12}  {'period':>12}  {'frequency':>12}  status")
    for value, pm, _ps, fq, status in rows:
        pm_s = f"{pm:.6g}" if pm is not None else "-"
        fq_s = f"{fq:.6g}" if fq is not None else "-"
        print(f"{value!s:>12}  {pm_s:>12}  {fq_s:>12}  {status}")
    return 0


def cmd_list_presets(_args) -> int:
    for name, (_builder, blurb) in sorted(PRESETS.items()):
        print(f"{name:18s} {blurb}")
    return 0


def cmd_validate(args) -> int:
    scenario = _load_scenario(args.scenario, args.set or [], None)
    spec = scenario.build_network()
    print(
        f"{scenario.name}: ok "
        f"({spec.n_neurons} neurons, {spec.n_synapses} synapses, "
        f"duration {scenario.sim.duration:g}, dt {scenario.sim.dt:g})"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reboundcpg",
        description="Simulate rebound winner-takes-all pattern generators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_out=True):
        p.add_argument("scenario", help="preset name or path to a config JSON")
        p.add_argument("--set", action="append", metavar="PATH=VALUE",
                       help="override a config value (repeatable)")
        p.add_argument("--seed", type=int, default=None, help="override sim.seed")
        if with_out:
            p.add_argument("--out", default=None, help="output root (default $REBOUNDCPG_OUT or ./runs)")

    p_run = sub.add_parser("run", help="run one scenario and write its run directory")
    add_common(p_run)
    p_run.add_argument("--record-all", action="store_true",
                       help="include gating/filter/current channels in trace.csv")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a scenario once per parameter value")
    add_common(p_sweep)
    p_sweep.add_argument("param", help="dotted config path, e.g. global_bias or sim.dt")
    p_sweep.add_argument("values", nargs="*", help="JSON values, e.g. 0 1 2.5")
    p_sweep.set_defaults(func=cmd_sweep)

    p_list = sub.add_parser("list-presets", help="list the built-in scenarios")
    p_list.set_defaults(func=cmd_list_presets)

    p_val = sub.add_parser("validate", help="check a config file or preset")
    add_common(p_val, with_out=False)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())
