"""Command line front end.

Subcommands::

    halfstreet solve-vn --ante 1 --bet 2 [--M 100] [--out DIR]
    halfstreet equity --board 3 --mode exact --out flop3.json
    halfstreet train cfr --game vn --ante 1 --bet 2 --iters 1e7 --seed 1 --out runs/cfr
    halfstreet train ga --game flop --equity flop3.json --out runs/ga
    halfstreet verify --game vn --player p.csv --dealer q.csv

Settings are resolved as defaults, then ``--config`` (a RunConfig JSON
document), then explicit flags. Every output directory receives the
effective ``config.json``; passing it back through ``--config`` reproduces
the run byte for byte.

Exit codes: 0 success, 2 argument error, 3 I/O error, 4 missing equity
file, 5 unparseable input.
"""

from __future__ import annotations

import argparse
import copy
import json
import logging
import sys
import time
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import export
from .equity import (EquityFileError, EquityFileMissing, build_equity_tables, load_tables, save_tables)
from .ga import PRESETS, GaConfig, evolve
from .game import GameSpec, HalfStreetGame, flop, von_neumann
from .verify import diagnose, exploitability, thresholds
from .vn_analytic import discretize, solve

log = logging.getLogger("halfstreet")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_MISSING, EXIT_PARSE = 0, 2, 3, 4, 5

GA_KEYS = tuple(f.name for f in fields(GaConfig))

DEFAULTS = {
    "game": {"kind": "vn", "ante": 1, "bet": 2, "M": 100},
    "cfr": {"iterations": 10_000_000, "seed": 0, "checkpoint_every": None},
    "ga": {"preset": None, **{k: None for k in GA_KEYS}},
    "equity": {"board_size": 3, "mode": "exact", "samples": None, "seed": 0, "path": None},
    "output": {"directory": None},
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# RunConfig


def _merge(base: dict, doc: dict, where: str = "config") -> dict:
    """Overlay ``doc`` on ``base``; unknown keys are an argument error."""
    if not isinstance(doc, dict):
        raise CliError(EXIT_USAGE, f"{where} must be a JSON object")
    out = copy.deepcopy(base)
    for key, val in doc.items():
        if key not in base:
            raise CliError(EXIT_USAGE, f"unknown key {where}.{key}")
        if isinstance(base[key], dict):
            out[key] = _merge(base[key], val, f"{where}.{key}")
        else:
            out[key] = val
    return out


def load_run_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read config {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"config {path} is not valid JSON: {exc}") from None
    return _merge(DEFAULTS, doc)


def resolve_config(args, algorithm: str | None = None) -> dict:
    """Defaults, then the ``--config`` file, then explicit flags, with every default filled in."""
    cfg = load_run_config(args.config) if getattr(args, "config", None) else copy.deepcopy(DEFAULTS)
    flags = {
        ("game", "kind"): getattr(args, "game", None),
        ("game", "ante"): getattr(args, "ante", None),
        ("game", "bet"): getattr(args, "bet", None),
        ("game", "M"): getattr(args, "M", None),
        ("equity", "path"): getattr(args, "equity", None),
        ("output", "directory"): getattr(args, "out", None),
    }
    if algorithm == "cfr":
        flags[("cfr", "iterations")] = args.iters
        flags[("cfr", "seed")] = args.seed
        flags[("cfr", "checkpoint_every")] = args.checkpoint_every
    elif algorithm == "ga":
        flags[("ga", "preset")] = args.preset
        flags[("ga", "seed")] = args.seed
        flags[("ga", "T")] = args.iters
        for key in ("N", "R", "alpha", "pi", "B0", "fitness_mode"):
            flags[("ga", key)] = getattr(args, key)
    for (section, key), val in flags.items():
        if val is not None:
            cfg[section][key] = val

    game = cfg["game"]
    if game["kind"] not in ("vn", "flop"):
        raise CliError(EXIT_USAGE, f"game.kind must be 'vn' or 'flop', got {game['kind']!r}")
    if game["kind"] == "flop":
        if game["M"] not in (None, 100, 169):
            raise CliError(EXIT_USAGE, "flop poker always has M = 169")
        game["M"] = 169
    elif game["M"] is None:
        game["M"] = 100
    try:
        GameSpec(game["ante"], game["bet"])
    except (TypeError, ValueError) as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    if not isinstance(game["M"], int) or game["M"] < 2:
        raise CliError(EXIT_USAGE, "game.M must be an integer of at least 2")

    if algorithm == "cfr":
        c = cfg["cfr"]
        c["iterations"] = _as_count(c["iterations"], "cfr.iterations")
        if c["checkpoint_every"] is None:
            c["checkpoint_every"] = max(1, c["iterations"] // 20)
        c["checkpoint_every"] = _as_count(c["checkpoint_every"], "cfr.checkpoint_every")
    if algorithm == "ga":
        g = cfg["ga"]
        name = g["preset"] or ("vn_desk" if game["kind"] == "vn" else "flop_desk")
        if name not in PRESETS:
            raise CliError(EXIT_USAGE, f"unknown GA preset {name!r}; choose from {sorted(PRESETS)}")
        g["preset"] = name
        base = PRESETS[name].to_dict()
        for key in GA_KEYS:
            if g[key] is None:
                g[key] = base[key]
        try:
            ga_config(cfg)
        except (TypeError, ValueError) as exc:
            raise CliError(EXIT_USAGE, f"invalid ga section: {exc}") from None
    return cfg


def ga_config(cfg: dict) -> GaConfig:
    return GaConfig(**{k: cfg["ga"][k] for k in GA_KEYS})


def _as_count(v, name: str) -> int:
    try:
        f = float(v)
    except (TypeError, ValueError):
        raise CliError(EXIT_USAGE, f"{name} must be a number, got {v!r}") from None
    if not f.is_integer() or f < 1:
        raise CliError(EXIT_USAGE, f"{name} must be a positive integer, got {v!r}")
    return int(f)


# ---------------------------------------------------------------------------
# Argument types


def count(text: str) -> int:
    """Positive integer, scientific notation allowed (``1e7``)."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v.is_integer() or v < 1:
        raise argparse.ArgumentTypeError(f"not a positive integer: {text!r}")
    return int(v)


def number(text: str):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return int(v) if v.is_integer() else v


def board(text: str) -> int:
    if text not in ("3", "5"):
        raise argparse.ArgumentTypeError(f"board size must be 3 or 5, got {text}")
    return int(text)


def equity_mode(text: str) -> str:
    modes = {"exact": "exact", "mc": "monte_carlo", "monte_carlo": "monte_carlo"}
    if text not in modes:
        raise argparse.ArgumentTypeError(f"mode must be exact or mc, got {text!r}")
    return modes[text]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="halfstreet", description="Half-street poker solvers.")
    parser.add_argument("-q", "--quiet", action="store_true", help="only print errors")
    sub = parser.add_subparsers(dest="command", required=True)

    def game_args(p, kind=True):
        if kind:
            p.add_argument("--game", choices=("vn", "flop"), default=None)
        p.add_argument("--ante", type=number, default=None)
        p.add_argument("--bet", type=number, default=None)
        p.add_argument("--M", type=count, default=None, help="von Neumann grid size (default 100)")
        p.add_argument("--config", default=None, help="RunConfig JSON")

    p = sub.add_parser("solve-vn", help="closed-form von Neumann equilibrium")
    game_args(p, kind=False)
    p.add_argument("--out", default=None, help="directory for summary and strategy files")

    p = sub.add_parser("equity", help="build flop or river equity tables")
    p.add_argument("--board", type=board, default=3)
    p.add_argument("--mode", type=equity_mode, default="exact")
    p.add_argument("--samples", type=count, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="equity file to write")

    p = sub.add_parser("train", help="train strategies by CFR or a genetic algorithm")
    p.add_argument("algorithm", choices=("cfr", "ga"))
    game_args(p)
    p.add_argument("--iters", type=count, default=None, help="CFR rounds or GA generations")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--checkpoint-every", type=count, default=None)
    p.add_argument("--preset", default=None, help=f"GA preset: {', '.join(sorted(PRESETS))}")
    p.add_argument("--N", type=count, default=None)
    p.add_argument("--R", type=count, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--pi", type=float, default=None)
    p.add_argument("--B0", type=float, default=None)
    p.add_argument("--fitness-mode", dest="fitness_mode", default=None,
                   choices=("bankroll", "negative_squared_loss"))
    p.add_argument("--equity", default=None, help="equity file (flop poker)")
    p.add_argument("--out", default=None, help="output directory")

    p = sub.add_parser("verify", help="diagnostics for a strategy pair")
    game_args(p)
    p.add_argument("--player", required=True, help="Player strategy CSV")
    p.add_argument("--dealer", required=True, help="Dealer strategy CSV")
    p.add_argument("--equity", default=None, help="equity file (flop poker)")
    p.add_argument("--out", default=None, help="directory for diagnostics files")
    return parser


# ---------------------------------------------------------------------------
# Helpers


def _outdir(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot create {out}: {exc}") from None
    return out


def _make_game(cfg: dict) -> HalfStreetGame:
    g = cfg["game"]
    if g["kind"] == "vn":
        return von_neumann(g["ante"], g["bet"], g["M"])
    path = cfg["equity"]["path"]
    if not path:
        raise CliError(EXIT_MISSING, "flop poker needs an equity file (--equity); build one with 'halfstreet equity'")
    try:
        tables = load_tables(path)
    except EquityFileMissing as exc:
        raise CliError(EXIT_MISSING, str(exc)) from None
    except EquityFileError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    try:
        return flop(g["ante"], g["bet"], tables)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None


def _summary(game: HalfStreetGame, p, q, diag) -> dict:
    out = diag.summary()
    out["uniform_exploitability"] = exploitability(np.full(game.M, 0.5), np.full(game.M, 0.5), game)
    if game.kind == "vn":
        out["thresholds"] = list(thresholds(p))
        out["analytic"] = solve(game.spec).as_floats()
    return out


def _write_strategies(out: Path, game: HalfStreetGame, p, q) -> None:
    export.write_strategy_csv(out / "player_strategy.csv", p, game.labels)
    export.write_strategy_csv(out / "dealer_strategy.csv", q, game.labels)


def _write_outputs(out: Path, files: dict) -> None:
    try:
        for name, writer in files.items():
            writer(out / name)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write to {out}: {exc}") from None


# ---------------------------------------------------------------------------
# Commands


def cmd_solve_vn(args) -> int:
    cfg = resolve_config(args)
    g = cfg["game"]
    sol = solve(g["ante"], g["bet"])
    summary = {"ante": g["ante"], "bet": g["bet"], "M": g["M"], **sol.as_floats()}
    summary["grid"] = dict(zip(("x1", "x2", "c", "y0"), sol.grid_values(g["M"])))
    print(export.dumps(summary), end="")
    if cfg["output"]["directory"]:
        out = _outdir(cfg["output"]["directory"])
        p, q = discretize(sol, g["M"])
        labels = tuple(str(k + 1) for k in range(g["M"]))
        _write_outputs(out, {
            "config.json": lambda f: export.write_json(f, cfg),
            "summary.json": lambda f: export.write_json(f, summary),
            "player_strategy.csv": lambda f: export.write_strategy_csv(f, p, labels),
            "dealer_strategy.csv": lambda f: export.write_strategy_csv(f, q, labels),
        })
    return EXIT_OK


def cmd_equity(args) -> int:
    out = Path(args.out)
    if args.mode == "exact" and args.board != 3:
        raise CliError(EXIT_USAGE, "exact tables are only available for --board 3; use --mode mc for --board 5")
    if not out.parent.is_dir():
        raise CliError(EXIT_IO, f"directory {out.parent} does not exist")
    samples = args.samples
    if args.mode == "monte_carlo" and samples is None:
        samples = 10**5
    t0 = time.perf_counter()
    tables = build_equity_tables(args.board, args.mode, samples, args.seed)
    log.info("built %s board-%d tables in %.1f s", args.mode, args.board, time.perf_counter() - t0)
    try:
        save_tables(tables, out)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {out}: {exc}") from None
    log.info("wrote %s", out)
    return EXIT_OK


def cmd_train(args) -> int:
    cfg = resolve_config(args, args.algorithm)
    if not cfg["output"]["directory"]:
        cfg["output"]["directory"] = f"runs/{args.algorithm}-{cfg['game']['kind']}"
    game = _make_game(cfg)
    out = _outdir(cfg["output"]["directory"])
    t0 = time.perf_counter()
    files = {"config.json": lambda f: export.write_json(f, cfg)}
    if args.algorithm == "cfr":
        from .cfr import train

        c = cfg["cfr"]
        rep = train(game, c["iterations"], seed=c["seed"], checkpoint_every=c["checkpoint_every"])
        p, q = rep.W_P, rep.W_D
        files["checkpoints.csv"] = lambda f: export.write_checkpoints_csv(f, rep.checkpoints)
    else:
        gcfg = ga_config(cfg)

        def progress(t, row):
            if t % max(1, gcfg.T // 10) == 0:
                log.info("generation %d/%d: top fitness %.4g / %.4g", t, gcfg.T, row[1], row[2])

        res = evolve(gcfg, game, progress)
        p, q = res.W_P, res.W_D
        files["fitness.csv"] = lambda f: export.write_fitness_csv(f, res.fitness_series)
    log.info("trained in %.1f s", time.perf_counter() - t0)

    diag = diagnose(p, q, game)
    summary = {"algorithm": args.algorithm, "game": cfg["game"]["kind"], **_summary(game, p, q, diag)}
    files["player_strategy.csv"] = lambda f: export.write_strategy_csv(f, p, game.labels)
    files["dealer_strategy.csv"] = lambda f: export.write_strategy_csv(f, q, game.labels)
    files["diagnostics.csv"] = lambda f: export.write_diagnostics_csv(f, diag, p, q, game.labels)
    files["summary.json"] = lambda f: export.write_json(f, summary)
    _write_outputs(out, files)
    print(export.dumps(summary), end="")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = resolve_config(args)
    game = _make_game(cfg)
    try:
        p = export.read_strategy_csv(args.player, game.M)
        q = export.read_strategy_csv(args.dealer, game.M)
    except export.StrategyParseError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read strategy: {exc}") from None
    diag = diagnose(p, q, game)
    summary = {"game": cfg["game"]["kind"], **_summary(game, p, q, diag)}
    print(export.dumps(summary), end="")
    if cfg["output"]["directory"]:
        out = _outdir(cfg["output"]["directory"])
        _write_outputs(out, {
            "config.json": lambda f: export.write_json(f, cfg),
            "diagnostics.csv": lambda f: export.write_diagnostics_csv(f, diag, p, q, game.labels),
            "summary.json": lambda f: export.write_json(f, summary),
        })
    return EXIT_OK


COMMANDS = {"solve-vn": cmd_solve_vn, "equity": cmd_equity, "train": cmd_train, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        if exc.code == EXIT_USAGE:
            parser.print_usage(sys.stderr)
        print(f"halfstreet: error: {exc}", file=sys.stderr)
        return exc.code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
