"""Command line entry point ``cpf``.

Exit codes: 0 on success, 2 for an invalid preset or config, 3 when a file
cannot be read or written.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analytics import CpfScenario
from .sources import make_source
from .sweep import PRESETS, preset, run, spec_from_dict, verdict

EXIT_INVALID = 2
EXIT_IO = 3


def _load_config(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _apply_overrides(cfg: dict, args) -> dict:
    cfg = dict(cfg)
    for key in ("seed", "trials"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _cmd_run(args) -> int:
    if bool(args.preset) == bool(args.config):
        print("error: give exactly one of --preset or --config", file=sys.stderr)
        return EXIT_INVALID
    if args.preset:
        specs = preset(args.preset, trials=args.trials or 100_000, seed=args.seed or 0)
        out = args.out or f"{args.preset}.csv"
    else:
        cfg = _apply_overrides(_load_config(args.config), args)
        specs = [spec_from_dict(cfg)]
        out = args.out or cfg.get("out")
        if not out:
            print("error: no output path (use --out or an 'out' key)", file=sys.stderr)
            return EXIT_INVALID
    for line in run(specs, out):
        print(line)
    print(f"wrote {out}")
    return 0


def _cmd_verdict(args) -> int:
    params = {"a": args.a} if args.source == "gen_bipartite" else {}
    scenario = CpfScenario(args.n, args.m, args.gamma0, args.gamma1, make_source(args.source, **params))
    print(verdict(scenario, m_max=args.m_max).report(scenario))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpf", description="Channel position finding bounds and receivers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_args(p, config_required=False):
        p.add_argument("--config", required=config_required, help="JSON sweep config")
        p.add_argument("--out", help="CSV output path")
        p.add_argument("--seed", type=int)
        p.add_argument("--trials", type=int, help="Monte Carlo trials per point")

    p_run = sub.add_parser("run", help="run a built-in preset or a config")
    p_run.add_argument("--preset", choices=PRESETS)
    add_run_args(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a JSON sweep config")
    add_run_args(p_sweep, config_required=True)
    p_sweep.set_defaults(func=_cmd_run, preset=None)

    p_v = sub.add_parser("verdict", help="quantum advantage check against the coherent benchmark")
    p_v.add_argument("--source", default="fock")
    p_v.add_argument("--n", type=int, default=4)
    p_v.add_argument("--m", type=int, default=1)
    p_v.add_argument("--gamma0", type=float, required=True)
    p_v.add_argument("--gamma1", type=float, required=True)
    p_v.add_argument("--a", type=float, default=0.5, help="entanglement parameter for gen_bipartite")
    p_v.add_argument("--m-max", type=int, default=1000)
    p_v.set_defaults(func=_cmd_verdict)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
