"""CSV and JSON files exchanged by the command line tools.

Floats are written with ``repr`` so files round-trip exactly and reruns are
byte-identical.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

STRATEGY_HEADER = ("index", "label", "probability")
CHECKPOINT_HEADER = ("iteration", "exploitability", "value_P")
FITNESS_HEADER = ("generation", "mean_top_alpha_fitness_player", "mean_top_alpha_fitness_dealer")
DIAGNOSTICS_HEADER = ("index", "label", "player_probability", "e_player", "dealer_probability", "e_dealer")


class StrategyParseError(ValueError):
    """A strategy CSV that does not follow the ``index,label,probability`` schema."""


def _num(x) -> str:
    x = float(x)
    if math.isfinite(x) and x == int(x) and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def _write_rows(path, header, rows) -> None:
    with open(path, "w", newline="") as f:
        wr = csv.writer(f, lineterminator="\n")
        wr.writerow(header)
        wr.writerows(rows)


def write_strategy_csv(path, strategy, labels) -> None:
    strategy = np.asarray(strategy, dtype=np.float64)
    if len(labels) != len(strategy):
        raise ValueError("labels and strategy differ in length")
    _write_rows(path, STRATEGY_HEADER, ((k, lab, _num(v)) for k, (lab, v) in enumerate(zip(labels, strategy))))


def read_strategy_csv(path, M: int | None = None, labels=None) -> np.ndarray:
    """Read a strategy file; raises StrategyParseError on any schema problem.

    ``M`` and ``labels``, when given, must match the file.
    """
    try:
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
    except UnicodeDecodeError as exc:
        raise StrategyParseError(f"{path}: not a text file ({exc})") from None
    if not rows or tuple(c.strip() for c in rows[0]) != STRATEGY_HEADER:
        raise StrategyParseError(f"{path}: header must be {','.join(STRATEGY_HEADER)}")
    body = [r for r in rows[1:] if r]
    out = np.empty(len(body))
    for n, row in enumerate(body):
        if len(row) != 3:
            raise StrategyParseError(f"{path}: line {n + 2} has {len(row)} fields")
        try:
            idx, prob = int(row[0]), float(row[2])
        except ValueError:
            raise StrategyParseError(f"{path}: line {n + 2} is not numeric") from None
        if idx != n:
            raise StrategyParseError(f"{path}: line {n + 2} has index {idx}, expected {n}")
        if not 0.0 <= prob <= 1.0:
            raise StrategyParseError(f"{path}: line {n + 2} probability {prob} outside [0, 1]")
        if labels is not None and row[1] != labels[n]:
            raise StrategyParseError(f"{path}: line {n + 2} label {row[1]!r}, expected {labels[n]!r}")
        out[n] = prob
    if M is not None and len(out) != M:
        raise StrategyParseError(f"{path}: {len(out)} hands, expected {M}")
    return out


def write_diagnostics_csv(path, diag, p, q, labels) -> None:
    rows = (
        (k, lab, _num(p[k]), _num(diag.e_player[k]), _num(q[k]), _num(diag.e_dealer[k]))
        for k, lab in enumerate(labels)
    )
    _write_rows(path, DIAGNOSTICS_HEADER, rows)


def write_checkpoints_csv(path, checkpoints) -> None:
    _write_rows(path, CHECKPOINT_HEADER,
                ((c["iteration"], _num(c["exploitability"]), _num(c["value_P"])) for c in checkpoints))


def write_fitness_csv(path, series) -> None:
    _write_rows(path, FITNESS_HEADER, ((int(g), _num(fp), _num(fd)) for g, fp, fd in np.asarray(series)))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def dumps(doc) -> str:
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def write_json(path, doc) -> None:
    Path(path).write_text(dumps(doc))
