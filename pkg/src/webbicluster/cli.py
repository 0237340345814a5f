"""Command-line interface: ``ingest``, ``synth``, ``mine``, ``eval`` and ``report``.

Exit status is 0 on success, 1 for usage errors (bad or missing flags) and
2 for data errors (unreadable files, malformed input, invalid values).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .bpso import SwarmConfig
from .coherence import Bicluster
from .pipeline import SEED_MODES, mine
from .seeding import SeedingConfig
from .synth import PlantSpec, jaccard_score, plant
from .usage_matrix import (
    LOG_FORMATS,
    build_matrix,
    parse_clickstream,
    read_matrix_csv,
    write_matrix_csv,
)

USAGE_ERROR = 1
DATA_ERROR = 2


class DataError(Exception):
    """Input that parses as flags but cannot be processed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _num(x):
    """Round a float to 6 significant digits for JSON; ``nan`` becomes ``null``."""
    if x is None:
        return None
    if isinstance(x, int):
        return x
    x = float(x)
    if math.isnan(x):
        return None
    if x.is_integer() and abs(x) < 2**53:
        return int(x)
    return float(f"{x:.6g}")


def bicluster_json(b: Bicluster, matrix) -> dict:
    return {
        "rows": [matrix.user_labels[i] for i in b.rows],
        "cols": [matrix.page_labels[j] for j in b.cols],
        "acv": _num(b.acv),
        "volume": b.volume,
    }


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None


def _read_json(path: str) -> dict:
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict):
        raise DataError(f"{path}: expected a JSON object")
    return doc


def _write(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc.strerror or exc}") from None


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def cmd_ingest(args) -> int:
    log = parse_clickstream(_read_text(args.log), args.format)
    matrix = build_matrix(log)
    _write(args.out, write_matrix_csv(matrix))
    print(f"n={matrix.n} m={matrix.m} total_hits={_num(matrix.total_hits)}")
    return 0


def cmd_synth(args) -> int:
    spec = PlantSpec(n=args.n, m=args.m, plant_rows=args.plant_rows, plant_cols=args.plant_cols,
                     noise_low=args.noise_low, noise_high=args.noise_high, jitter=args.jitter,
                     seed=args.seed, mode=args.mode)
    matrix, truth = plant(spec)
    _write(args.out, write_matrix_csv(matrix))
    doc = {
        "spec": {"n": spec.n, "m": spec.m, "plant_rows": spec.plant_rows,
                 "plant_cols": spec.plant_cols, "noise_low": _num(spec.noise_low),
                 "noise_high": _num(spec.noise_high), "jitter": _num(spec.jitter),
                 "mode": spec.mode, "seed": spec.seed},
        "truth": bicluster_json(truth, matrix),
    }
    _write(args.truth, _dumps(doc))
    return 0


def _parse_delta(text: str):
    if text == "auto":
        return None
    try:
        return float(text)
    except ValueError:
        raise DataError(f"--delta must be 'auto' or a number, got {text!r}") from None


def _parse_stall(text: str):
    if text == "none":
        return None
    try:
        return int(text)
    except ValueError:
        raise DataError(f"--stall must be an integer or 'none', got {text!r}") from None


def cmd_mine(args) -> int:
    delta = _parse_delta(args.delta)
    if delta is not None and not (0.0 <= delta <= 1.0):
        raise DataError(f"δ out of range: {delta} (must lie in [0, 1])")
    swarm = SwarmConfig.with_inertia(
        args.inertia, c1=args.c1, c2=args.c2, v_max=args.vmax, iter_max=args.iters,
        stall_limit=_parse_stall(args.stall), seed=args.seed, n_jobs=args.jobs)
    seeding = SeedingConfig(k_users=args.ku, k_pages=args.kp, seed=args.seed)
    matrix = read_matrix_csv(_read_text(args.matrix))
    result = mine(matrix, seeding, swarm, delta=delta, seed_mode=args.seeds)
    doc = {
        "config": {
            "ku": args.ku, "kp": args.kp, "iters": args.iters, "inertia": swarm.inertia_label,
            "c1": _num(args.c1), "c2": _num(args.c2), "vmax": _num(args.vmax),
            "delta": args.delta if delta is None else _num(delta), "seeds": args.seeds,
            "stall": swarm.stall_limit, "seed": args.seed,
        },
        "delta": _num(result.delta),
        "iterations": result.iterations,
        "gbest": bicluster_json(result.gbest, matrix),
        "pbests": [bicluster_json(b, matrix) for b in result.pbests],
        "trace": [{"iteration": e.iteration, "gbest_fitness": _num(e.gbest_fitness),
                   "mean_pbest_fitness": _num(e.mean_pbest_fitness),
                   "mean_pbest_acv": _num(e.mean_pbest_acv)} for e in result.trace],
        "stats": {k: _num(v) for k, v in result.stats.items()},
    }
    _write(args.out, _dumps(doc))
    return 0


def _labelled(doc: dict, key: str, path: str) -> tuple[list, list]:
    try:
        entry = doc[key]
        rows, cols = list(entry["rows"]), list(entry["cols"])
    except (KeyError, TypeError):
        raise DataError(f"{path}: missing '{key}' bicluster with rows and cols") from None
    return rows, cols


def cmd_eval(args) -> int:
    found = _labelled(_read_json(args.result), "gbest", args.result)
    truth = _labelled(_read_json(args.truth), "truth", args.truth)
    row_ids = {lab: i for i, lab in enumerate(sorted(set(found[0]) | set(truth[0])))}
    col_ids = {lab: j for j, lab in enumerate(sorted(set(found[1]) | set(truth[1])))}

    def as_bicluster(rows, cols):
        return Bicluster([row_ids[r] for r in rows], [col_ids[c] for c in cols])

    scores = jaccard_score(as_bicluster(*found), as_bicluster(*truth))
    print(json.dumps(dict(zip(("row_jaccard", "col_jaccard", "cell_jaccard"), map(_num, scores)))))
    return 0


_REPORT_COLUMNS = ("result", "particles", "inertia", "gbest volume", "gbest ACV",
                   "mean pbest volume", "mean pbest ACV")


def _cell(x):
    if x is None:
        return "-"
    return f"{x:.4f}" if isinstance(x, float) else str(x)


def cmd_report(args) -> int:
    if not args.results:
        raise DataError("report needs at least one result file")
    rows = []
    for path in args.results:
        doc = _read_json(path)
        try:
            stats = doc["stats"]
            rows.append((Path(path).name, stats["swarm_size"], doc["config"]["inertia"],
                         stats["gbest_volume"], stats["gbest_acv"],
                         stats["mean_pbest_volume"], stats["mean_pbest_acv"]))
        except (KeyError, TypeError):
            raise DataError(f"{path}: not a mining result") from None
    table = [_REPORT_COLUMNS] + [tuple(_cell(x) for x in r) for r in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(_REPORT_COLUMNS))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in table]
    lines.insert(1, "  ".join("-" * w for w in widths))
    print("\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="webbicluster", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="clickstream log -> access matrix CSV")
    p.add_argument("log")
    p.add_argument("--format", choices=LOG_FORMATS, default="per-user-sequence")
    p.add_argument("--out", required=True, help="matrix CSV path")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="random matrix with one planted coherent bicluster")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--m", type=int, default=30)
    p.add_argument("--plant-rows", type=int, default=20)
    p.add_argument("--plant-cols", type=int, default=8)
    p.add_argument("--noise-low", type=float, default=0.0)
    p.add_argument("--noise-high", type=float, default=10.0)
    p.add_argument("--jitter", type=float, default=0.1)
    p.add_argument("--mode", choices=("additive", "multiplicative"), default="additive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="matrix CSV path")
    p.add_argument("--truth", required=True, help="ground-truth JSON path")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("mine", help="seed, refine and search for the largest coherent bicluster")
    p.add_argument("matrix")
    p.add_argument("--ku", type=int, default=12, help="user clusters")
    p.add_argument("--kp", type=int, default=10, help="page clusters")
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--inertia", default="variable", help="'variable' or 'fixed:<w>'")
    p.add_argument("--c1", type=float, default=2.0)
    p.add_argument("--c2", type=float, default=2.0)
    p.add_argument("--vmax", type=float, default=4.0)
    p.add_argument("--delta", default="auto", help="'auto' or a threshold in [0, 1]")
    p.add_argument("--seeds", choices=SEED_MODES, default="greedy")
    p.add_argument("--stall", default="25", help="iterations without improvement, or 'none'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="worker threads (does not change results)")
    p.add_argument("--out", help="result JSON path (default: stdout)")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("eval", help="Jaccard scores of a result against ground truth")
    p.add_argument("result")
    p.add_argument("truth")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="tabulate mining results")
    p.add_argument("results", nargs="*")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DataError, ValueError) as exc:
        print(f"webbicluster {args.command}: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
