"""Command-line entry point.

    mixbelief exploit --config exp.yaml --set lambdas=0:1:0.1
    mixbelief match --game liars_dice --faces 3 --n-games 1000

Exit status is 0 on success, 2 for an invalid configuration and 3 when a
policy fails to stabilise.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .belief import LambdaSchedule
from .config import ConfigError, ExperimentConfig, build_config, parse_assignment, read_config_file
from .evaluation import CSV_HEADERS, Experiment, exploit_sweep, heatmap_sweep, match_sweep, tssr_sweep, write_csv
from .fosg import GameError
from .games import make_game
from .policy import StabilizationConfig, StabilizationError, file_hash, save_policy

log = logging.getLogger("mixbelief")

SUBCOMMANDS = ("tssr", "exploit", "heatmap", "match", "policy")

# CLI flag -> config key, for flags that are plain overrides
FLAGS = {
    "game": str,
    "dice": int,
    "faces": int,
    "cards": int,
    "hidden": int,
    "suits": int,
    "algorithm": str,
    "lambdas": str,
    "lambda0s": str,
    "lambda1s": str,
    "schedule": str,
    "budget": int,
    "batch_size": int,
    "threshold": float,
    "max_batches": int,
    "seat": int,
    "seed": int,
    "workers": int,
    "n_games": int,
    "opponent": str,
    "opponent_lambda": float,
    "draw_weight": float,
    "output": str,
    "output_dir": str,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixbelief", description="Mixture-belief determinization experiments.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat YAML config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
        for flag, typ in FLAGS.items():
            names = ["--" + flag.replace("_", "-")] + (["--out", "-o"] if flag == "output" else [])
            p.add_argument(*names, dest=flag, type=typ, default=None)
        p.add_argument("--first-only", dest="first_only", action="store_const", const=True, default=None)
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    layers = []
    if args.config:
        layers.append(read_config_file(args.config))
    layers.append({k: getattr(args, k) for k in list(FLAGS) + ["first_only"]})
    layers.append(dict(parse_assignment(s) for s in args.set))
    return build_config(*layers)


def _output_path(cfg: ExperimentConfig, command: str) -> str:
    if cfg.output:
        return cfg.output
    ext = "policy" if command == "policy" else "csv"
    return os.path.join(cfg.outdir, f"{command}.{ext}")


def _save_policies(exp: Experiment, outdir: str) -> dict[str, dict]:
    pdir = os.path.join(outdir, "policies")
    os.makedirs(pdir, exist_ok=True)
    out = {}
    for name, sp in sorted(exp.produced.items()):
        path = os.path.join(pdir, f"{name}.policy")
        sp.policy.metadata.update(batches=sp.batches, variation=sp.variation)
        save_policy(sp.policy, path, exp.game)
        out[name] = {"path": path, "sha1": file_hash(path), "batches": sp.batches, "variation": sp.variation}
    return out


def run(command: str, cfg: ExperimentConfig) -> str:
    game = make_game(cfg.game, **cfg.game_params())
    stab = StabilizationConfig(cfg.batch_size, cfg.threshold, cfg.max_batches)
    exp = Experiment(game, cfg.algorithm, cfg.budget, cfg.seed, stab, cfg.workers)
    out = _output_path(cfg, command)
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    if command == "tssr":
        rows = tssr_sweep(exp, cfg.lambdas, cfg.seat, cfg.opponent, cfg.first_only)
    elif command == "exploit":
        rows = exploit_sweep(exp, cfg.lambdas, cfg.seat)
    elif command == "heatmap":
        rows = heatmap_sweep(exp, cfg.lambda0s, cfg.lambda1s, cfg.seat)
    elif command == "match":
        opponent = "pimc" if cfg.opponent == "same" else cfg.opponent
        rows = match_sweep(exp, cfg.lambdas, cfg.seat, cfg.n_games, opponent, cfg.opponent_lambda, cfg.draw_weight)
    else:
        rows = None
        sp = exp.policy(cfg.seat, LambdaSchedule.parse(cfg.schedule))
    if rows is not None:
        write_csv(out, CSV_HEADERS[command], rows)
        outdir = os.path.dirname(os.path.abspath(out))
        policies = _save_policies(exp, outdir)
    else:
        sp.policy.metadata.update(batches=sp.batches, variation=sp.variation)
        save_policy(sp.policy, out, game)
        policies = {"policy": {"path": out, "sha1": file_hash(out), "batches": sp.batches, "variation": sp.variation}}
    meta = {"command": command, "game": game.describe(), "config": cfg.echo(), "policies": policies}
    with open(out + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        make_game(cfg.game, **cfg.game_params())  # rejects bad game parameters before any work
    except (ConfigError, GameError) as exc:
        print(f"mixbelief: invalid config: {exc}", file=sys.stderr)
        return 2
    try:
        out = run(args.command, cfg)
    except StabilizationError as exc:
        print(f"mixbelief: {exc}", file=sys.stderr)
        return 3
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
